//! Exact minimum γ-multihitting sets by branch and bound.
//!
//! Given a family of coordinate sets (bit masks), find a smallest set `P` of
//! coordinates with `|P ∩ c| ≥ γ` for every member `c`. This is the quantity
//! `h(γ)` that drives code verification.

use std::collections::HashMap;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::metric::combinatorics::Ones;

/// Tuning knobs for [`min_multihit`].
#[derive(Debug, Clone, Copy, Default)]
pub struct MultihitOptions {
    /// Only solutions of size at most `cap` are of interest.
    pub cap: Option<usize>,
    /// Stop at the first solution within `cap` instead of minimizing.
    pub first_only: bool,
    pub deadline: Option<Instant>,
}

/// A multihitting set and its size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Multihit {
    pub size: usize,
    pub mask: u128,
}

/// Smallest `P ⊆ universe` meeting every set in at least `gamma` points.
///
/// Returns `Ok(None)` when no such set exists (some member has fewer than
/// `gamma` points inside `universe`) or when none fits under `opts.cap`.
/// The answer is deterministic: ties resolve by the fixed branching order.
pub fn min_multihit(
    sets: &[u128],
    gamma: usize,
    universe: u128,
    opts: MultihitOptions,
) -> Result<Option<Multihit>> {
    if gamma == 0 {
        return Err(Error::param("multihit level γ must be at least 1"));
    }
    if sets
        .iter()
        .any(|&c| ((c & universe).count_ones() as usize) < gamma)
    {
        return Ok(None);
    }
    let greedy = greedy_multihit(sets, gamma, universe);
    let mut solver = Solver {
        classes: coordinate_classes(sets, universe),
        sets,
        gamma,
        universe,
        deadline: opts.deadline,
        first_only: opts.first_only,
        nodes: 0,
        best: greedy.size,
        best_mask: Some(greedy.mask),
    };
    if let Some(cap) = opts.cap {
        if greedy.size > cap {
            solver.best = cap + 1;
            solver.best_mask = None;
        } else if opts.first_only {
            return Ok(Some(greedy));
        }
    }
    solver.branch(0, 0, 0)?;
    Ok(solver.best_mask.map(|mask| Multihit {
        size: solver.best,
        mask,
    }))
}

/// Repeatedly takes the coordinate meeting the most still-deficient sets,
/// lowest index on ties.
pub fn greedy_multihit(sets: &[u128], gamma: usize, universe: u128) -> Multihit {
    let mut chosen = 0u128;
    loop {
        let deficient: Vec<u128> = sets
            .iter()
            .copied()
            .filter(|&c| ((c & chosen).count_ones() as usize) < gamma)
            .collect();
        if deficient.is_empty() {
            break;
        }
        let free = universe & !chosen;
        let best = Ones(free)
            .map(|i| {
                let cov = deficient.iter().filter(|&&c| c >> i & 1 == 1).count();
                (cov, i)
            })
            .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        match best {
            Some((cov, i)) if cov > 0 => chosen |= 1 << i,
            // unreachable when every set has ≥ γ points in the universe
            _ => break,
        }
    }
    Multihit {
        size: chosen.count_ones() as usize,
        mask: chosen,
    }
}

/// For each coordinate, the mask of universe coordinates lying in exactly
/// the same sets. Such coordinates are interchangeable in any solution.
fn coordinate_classes(sets: &[u128], universe: u128) -> Vec<u128> {
    let mut by_signature: HashMap<Vec<u64>, u128> = HashMap::new();
    let mut signature_of = vec![Vec::new(); 128];
    for i in Ones(universe) {
        let mut sig = vec![0u64; sets.len().div_ceil(64)];
        for (j, &c) in sets.iter().enumerate() {
            if c >> i & 1 == 1 {
                sig[j / 64] |= 1 << (j % 64);
            }
        }
        *by_signature.entry(sig.clone()).or_default() |= 1 << i;
        signature_of[i] = sig;
    }
    let mut classes = vec![0u128; 128];
    for i in Ones(universe) {
        classes[i] = by_signature[&signature_of[i]];
    }
    classes
}

struct Solver<'a> {
    classes: Vec<u128>,
    sets: &'a [u128],
    gamma: usize,
    universe: u128,
    deadline: Option<Instant>,
    first_only: bool,
    nodes: u64,
    best: usize,
    best_mask: Option<u128>,
}

impl Solver<'_> {
    /// Returns `true` when the search should stop.
    fn branch(&mut self, chosen: u128, size: usize, forbidden: u128) -> Result<bool> {
        self.nodes += 1;
        if self.nodes & 0x3ff == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    return Err(Error::Budget("multihit search deadline reached".into()));
                }
            }
        }

        let mut max_def = 0usize;
        let mut target = 0usize;
        let mut total_def = 0usize;
        for (j, &c) in self.sets.iter().enumerate() {
            let d = self
                .gamma
                .saturating_sub((c & chosen).count_ones() as usize);
            total_def += d;
            if d > max_def {
                max_def = d;
                target = j;
            }
        }
        if max_def == 0 {
            if size < self.best {
                self.best = size;
                self.best_mask = Some(chosen);
                return Ok(self.first_only);
            }
            return Ok(false);
        }
        if size + max_def >= self.best {
            return Ok(false);
        }

        let allowed = self.universe & !chosen & !forbidden;
        // each new coordinate lowers the total deficit by at most max_cov
        let max_cov = Ones(allowed)
            .map(|i| {
                self.sets
                    .iter()
                    .filter(|&&c| {
                        c >> i & 1 == 1 && ((c & chosen).count_ones() as usize) < self.gamma
                    })
                    .count()
            })
            .max()
            .unwrap_or(0);
        if max_cov == 0 || size + total_def.div_ceil(max_cov) >= self.best {
            return Ok(false);
        }

        let avail = self.sets[target] & allowed;
        let mut forb = forbidden;
        for i in Ones(avail) {
            if forb >> i & 1 == 1 {
                continue;
            }
            if ((avail & !forb).count_ones() as usize) < max_def || size + max_def >= self.best {
                break;
            }
            if self.branch(chosen | 1 << i, size + 1, forb)? {
                return Ok(true);
            }
            // any solution using a classmate of i instead of i was just covered
            forb |= self.classes[i];
        }
        Ok(false)
    }
}
