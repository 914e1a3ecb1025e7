use fixedbitset::FixedBitSet;
use num_traits::ToPrimitive;

use super::{check_nkt, schoenheim_bound, CoveringDesign};
use crate::error::{Error, Result};
use crate::metric::combinatorics::{binomial, Subsets};

/// Largest point count accepted by the exact covering search.
pub const EXACT_COVERING_MAX_N: usize = 10;

/// `c(n, k, t)` with a witness design, by iterative deepening from the
/// best counting bound.
///
/// The first block is fixed to `{1..k}`; each level branches on the
/// lowest uncovered `t`-subset over the blocks containing it, in
/// lexicographic order, so the witness is deterministic.
pub fn exact_covering_number(n: usize, k: usize, t: usize) -> Result<(usize, CoveringDesign)> {
    exact_covering_number_within(n, k, t, None)
}

/// [`exact_covering_number`] with an optional cap on search nodes.
pub fn exact_covering_number_within(
    n: usize,
    k: usize,
    t: usize,
    node_limit: Option<u64>,
) -> Result<(usize, CoveringDesign)> {
    check_nkt(n, k, t)?;
    if n > EXACT_COVERING_MAX_N || binomial(n, k) > (1u32 << 16).into() {
        return Err(Error::capacity(format!(
            "exact covering search supports n ≤ {EXACT_COVERING_MAX_N}, got n = {n}"
        )));
    }
    let blocks: Vec<u128> = Subsets::new(n, k).collect();
    let tsets: Vec<u128> = Subsets::new(n, t).collect();
    let per_block = binomial(k, t).to_usize().expect("small");
    let covers: Vec<Vec<usize>> = blocks
        .iter()
        .map(|&b| {
            tsets
                .iter()
                .enumerate()
                .filter(|(_, &ts)| b & ts == ts)
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let mut containing = vec![Vec::new(); tsets.len()];
    for (bi, cov) in covers.iter().enumerate() {
        for &ti in cov {
            containing[ti].push(bi);
        }
    }

    let mut lower = tsets.len().div_ceil(per_block);
    lower = lower.max(schoenheim_bound(n, k, t)?.to_usize().expect("small"));

    let mut search = Search {
        covers: &covers,
        containing: &containing,
        per_block,
        nodes: 0,
        node_limit,
    };
    let mut covered = FixedBitSet::with_capacity(tsets.len());
    for &ti in &covers[0] {
        covered.insert(ti);
    }
    for m in lower.max(1)..=blocks.len() {
        let mut chosen = vec![0usize];
        if search.dfs(&covered, &mut chosen, m)? {
            let witness =
                CoveringDesign::new(n, k, t, chosen.iter().map(|&b| blocks[b]).collect())?;
            return Ok((m, witness));
        }
    }
    unreachable!("the complete design is always a covering")
}

struct Search<'a> {
    covers: &'a [Vec<usize>],
    containing: &'a [Vec<usize>],
    per_block: usize,
    nodes: u64,
    node_limit: Option<u64>,
}

impl Search<'_> {
    fn dfs(&mut self, covered: &FixedBitSet, chosen: &mut Vec<usize>, m: usize) -> Result<bool> {
        self.nodes += 1;
        if let Some(limit) = self.node_limit {
            if self.nodes > limit {
                return Err(Error::Budget(format!(
                    "covering search exceeded {limit} nodes"
                )));
            }
        }
        let uncovered = covered.len() - covered.count_ones(..);
        if uncovered == 0 {
            return Ok(true);
        }
        let left = m - chosen.len();
        if uncovered > left * self.per_block {
            return Ok(false);
        }
        let first = covered.zeroes().next().expect("some t-subset uncovered");
        for &b in &self.containing[first] {
            let mut next = covered.clone();
            for &ti in &self.covers[b] {
                next.insert(ti);
            }
            chosen.push(b);
            if self.dfs(&next, chosen, m)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::verify_covering;

    #[test]
    fn small_covering_numbers() {
        for (n, k, t, c) in [
            (4, 2, 2, 6),
            (3, 2, 1, 2),
            (7, 3, 2, 7),
            (6, 3, 2, 6),
            (5, 3, 2, 4),
        ] {
            let (v, w) = exact_covering_number(n, k, t).unwrap();
            assert_eq!(v, c, "c({n},{k},{t})");
            assert_eq!(w.len(), v);
            assert!(verify_covering(&w).unwrap());
            assert_eq!(w.block_lists()[0], (1..=k).collect::<Vec<_>>());
        }
    }

    #[test]
    fn deterministic_witness() {
        let a = exact_covering_number(7, 3, 2).unwrap();
        let b = exact_covering_number(7, 3, 2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn limits() {
        assert!(matches!(
            exact_covering_number(11, 3, 2),
            Err(Error::Capacity(_))
        ));
        assert!(matches!(
            exact_covering_number(4, 2, 3),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            exact_covering_number_within(9, 4, 3, Some(10)),
            Err(Error::Budget(_))
        ));
    }
}
