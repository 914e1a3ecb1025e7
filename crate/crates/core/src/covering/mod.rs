//! Covering designs: every `t`-subset of `{1..n}` lies in some `k`-subset block.

mod exact;
mod format;
pub mod known;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::combinatorics::{binomial, ensure_enumerable, low_mask, Ones, Subsets};
use crate::metric::MAX_LEN;

pub use exact::{exact_covering_number, exact_covering_number_within};
pub use format::{parse_design, parse_design_file, serialize_design};

/// A list of equal-size blocks over `{1..n}`, stored as 0-based bit masks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FamilyDoc", into = "FamilyDoc")]
pub struct BlockFamily {
    n: usize,
    k: usize,
    blocks: Vec<u128>,
}

#[derive(Serialize, Deserialize)]
struct FamilyDoc {
    n: usize,
    k: usize,
    blocks: Vec<Vec<usize>>,
}

impl TryFrom<FamilyDoc> for BlockFamily {
    type Error = Error;
    fn try_from(d: FamilyDoc) -> Result<Self> {
        BlockFamily::from_lists(d.n, d.k, &d.blocks)
    }
}

impl From<BlockFamily> for FamilyDoc {
    fn from(f: BlockFamily) -> Self {
        FamilyDoc {
            n: f.n,
            k: f.k,
            blocks: f.block_lists(),
        }
    }
}

impl BlockFamily {
    pub fn new(n: usize, k: usize, blocks: Vec<u128>) -> Result<Self> {
        if n == 0 || n > MAX_LEN {
            return Err(Error::param(format!(
                "point count must be in 1..={MAX_LEN}, got {n}"
            )));
        }
        if k > n {
            return Err(Error::param(format!(
                "block size {k} exceeds point count {n}"
            )));
        }
        for (i, &b) in blocks.iter().enumerate() {
            if b & !low_mask(n) != 0 {
                return Err(Error::param(format!(
                    "block {} has points beyond {n}",
                    i + 1
                )));
            }
            if b.count_ones() as usize != k {
                return Err(Error::param(format!(
                    "block {} has {} points, expected {k}",
                    i + 1,
                    b.count_ones()
                )));
            }
        }
        Ok(BlockFamily { n, k, blocks })
    }

    /// Builds a family from 1-based point lists.
    pub fn from_lists(n: usize, k: usize, lists: &[Vec<usize>]) -> Result<Self> {
        let blocks = lists
            .iter()
            .enumerate()
            .map(|(i, list)| {
                list_to_mask(n, list).map_err(|e| match e {
                    Error::Parameter(m) => Error::param(format!("block {}: {m}", i + 1)),
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, k, blocks)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn blocks(&self) -> &[u128] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Blocks as sorted 1-based point lists.
    pub fn block_lists(&self) -> Vec<Vec<usize>> {
        self.blocks
            .iter()
            .map(|&b| Ones(b).map(|i| i + 1).collect())
            .collect()
    }

    /// Every block replaced by its complement in `{1..n}`; involutive.
    pub fn complement(&self) -> BlockFamily {
        BlockFamily {
            n: self.n,
            k: self.n - self.k,
            blocks: self.blocks.iter().map(|&b| !b & low_mask(self.n)).collect(),
        }
    }

    /// True when every `t`-subset lies in some block.
    pub fn covers(&self, t: usize) -> Result<bool> {
        ensure_enumerable(&binomial(self.n, t), "t-subset family")?;
        let blocks = &self.blocks;
        Ok(Subsets::new(self.n, t)
            .par_bridge()
            .all(|ts| blocks.iter().any(|&b| b & ts == ts)))
    }
}

fn list_to_mask(n: usize, list: &[usize]) -> Result<u128> {
    let mut mask = 0u128;
    for &p in list {
        if p == 0 || p > n {
            return Err(Error::param(format!("point {p} outside 1..={n}")));
        }
        if mask >> (p - 1) & 1 == 1 {
            return Err(Error::param(format!("point {p} repeated")));
        }
        mask |= 1 << (p - 1);
    }
    Ok(mask)
}

/// An `(n, k, t)` design candidate: `n ≥ k ≥ t > 0` and `k`-point blocks.
///
/// Construction checks structure only; [`verify_covering`] checks coverage.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "DesignDoc", into = "DesignDoc")]
pub struct CoveringDesign {
    family: BlockFamily,
    t: usize,
}

#[derive(Serialize, Deserialize)]
struct DesignDoc {
    n: usize,
    k: usize,
    t: usize,
    blocks: Vec<Vec<usize>>,
}

impl TryFrom<DesignDoc> for CoveringDesign {
    type Error = Error;
    fn try_from(d: DesignDoc) -> Result<Self> {
        CoveringDesign::from_lists(d.n, d.k, d.t, &d.blocks)
    }
}

impl From<CoveringDesign> for DesignDoc {
    fn from(d: CoveringDesign) -> Self {
        DesignDoc {
            n: d.n(),
            k: d.k(),
            t: d.t,
            blocks: d.family.block_lists(),
        }
    }
}

impl CoveringDesign {
    pub fn new(n: usize, k: usize, t: usize, blocks: Vec<u128>) -> Result<Self> {
        check_nkt(n, k, t)?;
        Ok(CoveringDesign {
            family: BlockFamily::new(n, k, blocks)?,
            t,
        })
    }

    pub fn from_lists(n: usize, k: usize, t: usize, lists: &[Vec<usize>]) -> Result<Self> {
        check_nkt(n, k, t)?;
        Ok(CoveringDesign {
            family: BlockFamily::from_lists(n, k, lists)?,
            t,
        })
    }

    /// All `k`-subsets of `{1..n}`: always a covering.
    pub fn complete(n: usize, k: usize, t: usize) -> Result<Self> {
        check_nkt(n, k, t)?;
        ensure_enumerable(&binomial(n, k), "complete design")?;
        Self::new(n, k, t, Subsets::new(n, k).collect())
    }

    pub fn n(&self) -> usize {
        self.family.n
    }

    pub fn k(&self) -> usize {
        self.family.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn blocks(&self) -> &[u128] {
        &self.family.blocks
    }

    pub fn len(&self) -> usize {
        self.family.len()
    }

    pub fn is_empty(&self) -> bool {
        self.family.is_empty()
    }

    pub fn family(&self) -> &BlockFamily {
        &self.family
    }

    pub fn block_lists(&self) -> Vec<Vec<usize>> {
        self.family.block_lists()
    }

    pub fn complement(&self) -> BlockFamily {
        self.family.complement()
    }
}

fn check_nkt(n: usize, k: usize, t: usize) -> Result<()> {
    if !(n >= k && k >= t && t > 0) {
        return Err(Error::param(format!(
            "covering design needs n ≥ k ≥ t > 0, got ({n}, {k}, {t})"
        )));
    }
    if n > MAX_LEN {
        return Err(Error::param(format!("point count {n} exceeds {MAX_LEN}")));
    }
    Ok(())
}

/// True iff every `t`-subset of `{1..n}` lies in at least one block.
pub fn verify_covering(design: &CoveringDesign) -> Result<bool> {
    design.family.covers(design.t)
}

/// Block-wise complement in `{1..n}`, giving `(n-k)`-point blocks.
pub fn complement_design(design: &CoveringDesign) -> BlockFamily {
    design.complement()
}

/// Nested-ceiling lower bound `⌈n/k ⌈(n-1)/(k-1) ⋯ ⌈(n-t+1)/(k-t+1)⌉ ⋯ ⌉⌉`
/// on `c(n, k, t)`, for `n ≥ k ≥ t > 0`. At `k = t` it is `C(n, k)`, which is exact.
pub fn schoenheim_bound(n: usize, k: usize, t: usize) -> Result<num_bigint::BigUint> {
    if !(n >= k && k >= t && t > 0) {
        return Err(Error::param(format!(
            "Schönheim bound needs n ≥ k ≥ t > 0, got ({n}, {k}, {t})"
        )));
    }
    let mut v = num_bigint::BigUint::from(1u8);
    for i in (0..t).rev() {
        let num = v * (n - i) + (k - i) - 1u8;
        v = num / (k - i);
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_designs_cover() {
        assert!(verify_covering(&known::fano_plane()).unwrap());
        assert!(verify_covering(&known::design_9_5_2()).unwrap());
        assert!(verify_covering(&known::all_pairs_4()).unwrap());
        assert!(verify_covering(&CoveringDesign::complete(8, 3, 2).unwrap()).unwrap());
        let mut fano = known::fano_plane().blocks().to_vec();
        fano.pop();
        assert!(!verify_covering(&CoveringDesign::new(7, 3, 2, fano).unwrap()).unwrap());
    }

    #[test]
    fn complement_of_9_5_2() {
        let c = complement_design(&known::design_9_5_2());
        assert_eq!(c.k(), 4);
        assert_eq!(
            c.block_lists(),
            vec![
                vec![6, 7, 8, 9],
                vec![5, 7, 8, 9],
                vec![3, 4, 5, 6],
                vec![1, 2, 5, 6],
                vec![1, 2, 3, 4]
            ]
        );
        assert_eq!(&c.complement(), known::design_9_5_2().family());
        let pairs = known::all_pairs_4();
        let mut comp = pairs.complement().block_lists();
        comp.sort();
        let mut orig = pairs.block_lists();
        orig.sort();
        assert_eq!(comp, orig);
    }

    #[test]
    fn schoenheim_values() {
        assert_eq!(schoenheim_bound(7, 3, 2).unwrap(), 7u32.into());
        assert_eq!(schoenheim_bound(9, 5, 2).unwrap(), 4u32.into());
        assert_eq!(schoenheim_bound(33, 17, 2).unwrap(), 4u32.into());
        for n in 3..20 {
            for k in 2..n {
                assert_eq!(schoenheim_bound(n, k, 1).unwrap(), n.div_ceil(k).into());
            }
        }
        assert_eq!(schoenheim_bound(4, 2, 2).unwrap(), 6u32.into());
        assert_eq!(schoenheim_bound(5, 5, 3).unwrap(), 1u32.into());
        assert!(schoenheim_bound(3, 4, 1).is_err());
    }

    #[test]
    fn structural_validation() {
        assert!(CoveringDesign::from_lists(4, 2, 3, &[vec![1, 2]]).is_err());
        assert!(CoveringDesign::from_lists(4, 2, 1, &[vec![1, 5]]).is_err());
        assert!(CoveringDesign::from_lists(4, 2, 1, &[vec![1, 1]]).is_err());
        assert!(CoveringDesign::from_lists(4, 2, 1, &[vec![1, 2, 3]]).is_err());
        let d = known::fano_plane();
        let json = serde_json::to_string(&d).unwrap();
        let back: CoveringDesign = serde_json::from_str(&json).unwrap();
        assert_eq!(back, d);
    }
}
