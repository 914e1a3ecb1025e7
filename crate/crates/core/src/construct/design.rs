//! Designs of type ℓ and the supersets that produce them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::covering::{verify_covering, BlockFamily, CoveringDesign};
use crate::error::{Error, Result};
use crate::metric::combinatorics::{low_mask, Ones, Subsets};
use crate::metric::MAX_LEN;
use crate::ppric::{min_multihit, MultihitOptions};

/// Largest ground set for which [`TypedDesign::exhaustive_type_level`] runs.
pub const EXHAUSTIVE_TYPE_MAX_WIDTH: usize = 20;

/// Weight-`s` blocks on a coordinate interval `offset..offset + width`.
///
/// `type_level` is the claimed ℓ: every set meeting each block in at least
/// `t ≥ 1` points has at least `ℓ + t` points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypedDesign {
    offset: usize,
    width: usize,
    s: usize,
    blocks: Vec<u128>,
    type_level: usize,
}

impl TypedDesign {
    /// Blocks are masks relative to the interval start.
    pub fn new(width: usize, blocks: Vec<u128>, type_level: usize) -> Result<Self> {
        if width == 0 || width > MAX_LEN {
            return Err(Error::param(format!(
                "design width must be in 1..={MAX_LEN}"
            )));
        }
        let s = blocks
            .first()
            .map(|b| b.count_ones() as usize)
            .ok_or_else(|| Error::param("a design needs at least one block"))?;
        if s == 0 {
            return Err(Error::param("design blocks must be nonempty"));
        }
        for b in &blocks {
            if b.count_ones() as usize != s || b & !low_mask(width) != 0 {
                return Err(Error::param(format!(
                    "design blocks must all have {s} points inside a width of {width}"
                )));
            }
        }
        Ok(TypedDesign {
            offset: 0,
            width,
            s,
            blocks,
            type_level,
        })
    }

    /// One block of weight `s`: type 0.
    pub fn single(s: usize) -> Result<Self> {
        Self::new(s, vec![low_mask(s)], 0)
    }

    /// The same design moved to start at `offset`.
    pub fn at(mut self, offset: usize) -> Self {
        self.offset = offset;
        self
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// One past the last coordinate used.
    pub fn end(&self) -> usize {
        self.offset + self.width
    }

    pub fn s(&self) -> usize {
        self.s
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

    pub fn type_level(&self) -> usize {
        self.type_level
    }

    /// Blocks shifted to absolute coordinates.
    pub fn placed_blocks(&self) -> Result<Vec<u128>> {
        if self.end() > MAX_LEN {
            return Err(Error::capacity(format!(
                "design ends at coordinate {}, beyond {MAX_LEN}",
                self.end()
            )));
        }
        Ok(self.blocks.iter().map(|&b| b << self.offset).collect())
    }

    /// The largest valid type, `min_{t=1..s} (h(t) - t)`, by branch and bound.
    pub fn computed_type_level(&self) -> Result<usize> {
        let universe = low_mask(self.width);
        let mut best = usize::MAX;
        for t in 1..=self.s {
            let h = min_multihit(&self.blocks, t, universe, MultihitOptions::default())?
                .expect("t ≤ s is always feasible");
            best = best.min(h.size - t);
        }
        Ok(best)
    }

    /// The largest valid type, by scanning every subset of the ground set.
    pub fn exhaustive_type_level(&self) -> Result<usize> {
        if self.width > EXHAUSTIVE_TYPE_MAX_WIDTH {
            return Err(Error::capacity(format!(
                "exhaustive type check supports widths up to {EXHAUSTIVE_TYPE_MAX_WIDTH}"
            )));
        }
        let blocks = &self.blocks;
        let best = (1u64..1u64 << self.width)
            .into_par_iter()
            .filter_map(|p| {
                let p = u128::from(p);
                let t = blocks
                    .iter()
                    .map(|&b| (b & p).count_ones() as usize)
                    .min()
                    .unwrap_or(0);
                (t >= 1).then(|| p.count_ones() as usize - t)
            })
            .min();
        Ok(best.expect("the full ground set meets every block"))
    }
}

/// An `S`-superset: each point of the base family becomes a grain-set of
/// `grain` consecutive coordinates, and each `α`-point block becomes a
/// weight-`α·grain` codeword.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupersetSpec {
    base: BlockFamily,
    grain: usize,
    type_level: usize,
}

impl SupersetSpec {
    /// Grain-sets from the complement of an `(n, n-α, ℓ)` covering design,
    /// giving a design of type ℓ with weight-`s` blocks. Needs `α | s`.
    pub fn from_covering_complement(design: &CoveringDesign, s: usize) -> Result<Self> {
        let alpha = design.n() - design.k();
        if alpha == 0 {
            return Err(Error::param("design blocks must be proper subsets"));
        }
        if s == 0 || !s.is_multiple_of(alpha) {
            return Err(Error::param(format!(
                "superset needs α | s with α = {alpha}, got s = {s}; scale s by a multiple of {alpha} (an (αL, αs, r) code inherits the bound)"
            )));
        }
        if !verify_covering(design)? {
            return Err(Error::param(format!(
                "({}, {}, {}) block list is not a covering design",
                design.n(),
                design.k(),
                design.t()
            )));
        }
        Ok(SupersetSpec {
            base: design.complement(),
            grain: s / alpha,
            type_level: design.t(),
        })
    }

    /// The `(k,1)`-superset: all `k`-subsets of `k + 1` grain-sets of size
    /// `s / k`; `k + 1` codewords of type 1. Needs `k | s`.
    pub fn k1(k: usize, s: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::param("(k,1)-superset needs k ≥ 1"));
        }
        if s == 0 || !s.is_multiple_of(k) {
            return Err(Error::param(format!(
                "({k},1)-superset needs {k} | s, got s = {s}; scale s by a multiple of {k} (an (αL, αs, r) code inherits the bound)"
            )));
        }
        let base = BlockFamily::new(k + 1, k, Subsets::new(k + 1, k).collect())?;
        Ok(SupersetSpec {
            base,
            grain: s / k,
            type_level: 1,
        })
    }

    pub fn base(&self) -> &BlockFamily {
        &self.base
    }

    pub fn grain(&self) -> usize {
        self.grain
    }

    pub fn type_level(&self) -> usize {
        self.type_level
    }

    /// Coordinates occupied: `n · grain`.
    pub fn width(&self) -> usize {
        self.base.n() * self.grain
    }

    pub fn build(&self) -> Result<TypedDesign> {
        let g = self.grain;
        let blocks = self
            .base
            .blocks()
            .iter()
            .map(|&b| Ones(b).fold(0u128, |m, i| m | (low_mask(g) << (i * g))))
            .collect();
        if self.width() > MAX_LEN {
            return Err(Error::capacity(format!(
                "superset needs {} coordinates, beyond {MAX_LEN}",
                self.width()
            )));
        }
        TypedDesign::new(self.width(), blocks, self.type_level)
    }
}

/// Builds the superset's design and places it at `offset`.
pub fn build_superset(spec: &SupersetSpec, offset: usize) -> Result<TypedDesign> {
    Ok(spec.build()?.at(offset))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::known;

    #[test]
    fn k1_supersets() {
        let d = SupersetSpec::k1(2, 2).unwrap().build().unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(d.width(), 3);
        assert_eq!(d.type_level(), 1);
        assert_eq!(d.computed_type_level().unwrap(), 1);
        assert_eq!(d.exhaustive_type_level().unwrap(), 1);
        let d = SupersetSpec::k1(3, 6).unwrap().build().unwrap();
        assert_eq!((d.len(), d.width(), d.s()), (4, 8, 6));
        assert_eq!(d.exhaustive_type_level().unwrap(), 1);
        assert!(matches!(SupersetSpec::k1(2, 3), Err(Error::Parameter(_))));
    }

    #[test]
    fn covering_complement_supersets() {
        let d = SupersetSpec::from_covering_complement(&known::design_9_5_2(), 4)
            .unwrap()
            .build()
            .unwrap();
        assert_eq!((d.len(), d.width(), d.s()), (5, 9, 4));
        assert_eq!(d.type_level(), 2);
        assert_eq!(d.exhaustive_type_level().unwrap(), 2);
        assert_eq!(d.computed_type_level().unwrap(), 2);

        let d = SupersetSpec::from_covering_complement(&known::all_pairs_4(), 2)
            .unwrap()
            .build()
            .unwrap();
        assert_eq!((d.len(), d.width()), (6, 4));
        assert_eq!(d.exhaustive_type_level().unwrap(), 2);

        let scaled = SupersetSpec::from_covering_complement(&known::design_9_5_2(), 8)
            .unwrap()
            .build()
            .unwrap();
        assert_eq!(scaled.width(), 18);
        assert!(scaled.exhaustive_type_level().unwrap() >= 2);
        let err = SupersetSpec::from_covering_complement(&known::design_9_5_2(), 6).unwrap_err();
        assert!(err.to_string().contains("α | s"));
    }

    #[test]
    fn single_block_type_zero() {
        let d = TypedDesign::single(3).unwrap();
        assert_eq!(d.exhaustive_type_level().unwrap(), 0);
        assert_eq!(d.computed_type_level().unwrap(), 0);
    }
}
