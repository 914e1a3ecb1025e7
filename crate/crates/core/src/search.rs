//! Exhaustive determination of `N(L, s, r)` on small instances, and probes of
//! the MIPPR-weight conjectures on the minimum codes found.
//!
//! The search is a set cover over the weight-`s` candidates: every word of
//! weight above `r` must be "killed" by some codeword `c`, meaning
//! `|y ∩ c| < ⌈(wt(y) - r)/2⌉`. Violators are discovered lazily with the exact
//! verifier and kept in a pool; each node branches on the pooled violator with
//! the fewest remaining killers, excluding earlier siblings, so every code
//! containing the fixed first codeword is reached exactly once.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};

use fixedbitset::FixedBitSet;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds;
use crate::error::{Error, Result};
use crate::metric::combinatorics::{binomial, binomial_u128, ensure_enumerable, low_mask, Subsets};
use crate::metric::SchemeParams;
use crate::ppric::verify::find_violator;
use crate::ppric::{mippr_min_weight, PpricCode};

/// Largest candidate pool `C(L, s)` the search accepts.
pub const SEARCH_MAX_CANDIDATES: usize = 5000;
/// Enumeration of minimum codes stops with a capacity error beyond this many.
pub const MAX_MINIMAL_CODES: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub params: SchemeParams,
    pub n_exact: usize,
    pub witness: PpricCode,
    pub nodes_explored: u64,
}

/// Candidates `W_s` in lexicographic order of their sorted supports.
fn candidates(p: SchemeParams) -> Result<Vec<u128>> {
    if p.s == 0 {
        return Err(Error::param("search needs s ≥ 1"));
    }
    let count = binomial(p.l, p.s);
    if count > SEARCH_MAX_CANDIDATES.into() {
        return Err(Error::capacity(format!(
            "C({}, {}) = {count} candidates exceeds the search limit {SEARCH_MAX_CANDIDATES}",
            p.l, p.s
        )));
    }
    Ok(Subsets::new(p.l, p.s).collect())
}

/// The violator universe is built up front while it needs at most this many
/// killer bits; larger instances learn violators lazily from the verifier.
const EAGER_BITS: u128 = 1 << 28;
/// Workers draw on a shared node limit in chunks of this many nodes.
const BUDGET_STRIDE: u64 = 1024;

/// Tuning for [`exact_n_search_with`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Prune children equivalent under coordinate permutations that fix the
    /// chosen codewords. Same `N`, usually a different witness.
    pub symmetry: bool,
    /// Abort with a budget error after roughly this many nodes. Whether a
    /// borderline run hits the limit can depend on thread scheduling.
    pub node_limit: Option<u64>,
}

#[derive(Clone)]
struct Cover<'a> {
    p: SchemeParams,
    cands: &'a [u128],
    /// Killer set of each known violator, indexed by candidate.
    pool: Vec<FixedBitSet>,
    /// Transpose of `pool`: the violators each candidate kills.
    cover: Vec<FixedBitSet>,
    /// Whether `pool` holds every violator that matters, so an uncovered-free
    /// node is a code without asking the verifier.
    complete: bool,
    /// Orbital branching under the coordinate permutations fixing every
    /// chosen codeword.
    symmetry: bool,
    nodes: u64,
    /// Nodes left across all workers, when limited.
    budget: Option<&'a AtomicU64>,
}

impl<'a> Cover<'a> {
    fn new(
        p: SchemeParams,
        cands: &'a [u128],
        symmetry: bool,
        budget: Option<&'a AtomicU64>,
    ) -> Self {
        let mut cover = Cover {
            p,
            cands,
            pool: Vec::new(),
            cover: vec![FixedBitSet::new(); cands.len()],
            complete: false,
            symmetry,
            nodes: 0,
            budget,
        };
        // A word of weight r + 2g - 1 is dominated by any superset of weight
        // r + 2g (same threshold, fewer killers), so only the even offsets
        // are needed. Admissibility keeps r + 2g ≤ L.
        let weights: Vec<usize> = (1..=p.s.min((p.l - p.r).div_ceil(2)))
            .map(|g| p.r + 2 * g)
            .filter(|&w| w <= p.l)
            .collect();
        let total: u128 = weights
            .iter()
            .map(|&w| binomial_u128(p.l, w).unwrap_or(u128::MAX))
            .fold(0u128, u128::saturating_add);
        if total.saturating_mul(cands.len() as u128) <= EAGER_BITS {
            for &w in &weights {
                for y in Subsets::new(p.l, w) {
                    cover.learn(y);
                }
            }
            cover.complete = true;
        }
        cover
    }

    fn learn(&mut self, y: u128) -> usize {
        let w = y.count_ones() as usize;
        let g = (w - self.p.r).div_ceil(2);
        let mut killers = FixedBitSet::with_capacity(self.cands.len());
        for (i, &c) in self.cands.iter().enumerate() {
            if ((c & y).count_ones() as usize) < g {
                killers.insert(i);
            }
        }
        let v = self.pool.len();
        for c in killers.ones() {
            self.cover[c].grow(v + 1);
            self.cover[c].insert(v);
        }
        self.pool.push(killers);
        v
    }

    /// The known violators not yet killed by `chosen`, or a fresh one from
    /// the verifier. Empty means `chosen` is a PPRIC code.
    fn open(&mut self, chosen: &[usize]) -> Result<Vec<usize>> {
        let open: Vec<usize> = (0..self.pool.len())
            .filter(|&v| !chosen.iter().any(|&c| self.pool[v].contains(c)))
            .collect();
        if !open.is_empty() {
            return Ok(open);
        }
        let masks: Vec<u128> = chosen.iter().map(|&c| self.cands[c]).collect();
        let fresh = find_violator(&masks, self.p, None)?;
        debug_assert!(
            !(self.complete && fresh.is_some()),
            "violator universe is incomplete"
        );
        Ok(match fresh {
            Some(y) => vec![self.learn(y)],
            None => Vec::new(),
        })
    }

    /// Visits every PPRIC code of size at most `m` extending `chosen`
    /// without using `excluded`. `found` returns `true` to stop the search.
    fn dfs(
        &mut self,
        chosen: &mut Vec<usize>,
        excluded: &mut FixedBitSet,
        m: usize,
        found: &mut dyn FnMut(&[usize]) -> bool,
    ) -> Result<bool> {
        self.nodes += 1;
        if let Some(left) = self.budget {
            if self.nodes.is_multiple_of(BUDGET_STRIDE)
                && left.fetch_sub(BUDGET_STRIDE, Ordering::Relaxed) < BUDGET_STRIDE
            {
                return Err(Error::Budget(format!(
                    "search node limit reached at {}",
                    self.p
                )));
            }
        }
        let open = self.open(chosen)?;
        if open.is_empty() {
            return Ok(found(chosen));
        }
        let room = m - chosen.len();
        if room == 0 {
            return Ok(false);
        }
        let mut live: Vec<(usize, usize)> = open
            .into_iter()
            .map(|v| (self.pool[v].difference_count(excluded), v))
            .collect();
        live.sort_unstable();
        if live[0].0 == 0 {
            return Ok(false);
        }
        // violators with pairwise disjoint killer sets each need their own codeword
        let mut packed = 0;
        let mut used = FixedBitSet::with_capacity(self.cands.len());
        for &(_, v) in &live {
            if self.pool[v].is_disjoint(&used) {
                used.union_with(&self.pool[v]);
                used.difference_with(excluded);
                packed += 1;
                if packed > room {
                    return Ok(false);
                }
            }
        }
        // no codeword kills more than `best` of the open violators
        let mut open_set = FixedBitSet::with_capacity(self.pool.len());
        open_set.extend(live.iter().map(|e| e.1));
        let best = (0..self.cands.len())
            .filter(|&c| !excluded.contains(c))
            .map(|c| self.cover[c].intersection_count(&open_set))
            .max()
            .unwrap_or(0);
        if best == 0 || live.len() > best * room {
            return Ok(false);
        }
        let mut branches = self.branches(chosen, excluded, live[0].1);
        self.greedy_first(&mut branches, &open_set);
        let mark = excluded.clone();
        let mut stop = false;
        for (c, drop) in branches {
            chosen.push(c);
            stop = self.dfs(chosen, excluded, m, found)?;
            chosen.pop();
            if stop {
                break;
            }
            for d in drop {
                excluded.insert(d);
            }
        }
        excluded.clone_from(&mark);
        Ok(stop)
    }

    /// Tries the children that kill the most open violators first. The sort
    /// is stable, so the order, and hence the witness, stays deterministic.
    fn greedy_first(&self, branches: &mut [(usize, Vec<usize>)], open: &FixedBitSet) {
        branches.sort_by_key(|(c, _)| std::cmp::Reverse(self.cover[*c].intersection_count(open)));
    }

    /// Children of a node that must kill violator `v`: each entry is the
    /// candidate to add and the candidates to exclude once that child is done.
    ///
    /// Without symmetry every allowed killer is its own child. With it, the
    /// allowed candidates are split into orbits of the group permuting
    /// coordinates inside each class of identical membership in the chosen
    /// codewords; one representative per orbit meeting the killers is tried
    /// and then the whole orbit is excluded. Excluded sets stay unions of
    /// orbits of every ancestor's group, which contains the current one, so
    /// the pruning is sound.
    fn branches(
        &self,
        chosen: &[usize],
        excluded: &FixedBitSet,
        v: usize,
    ) -> Vec<(usize, Vec<usize>)> {
        let mut killers = self.pool[v].clone();
        killers.difference_with(excluded);
        if !self.symmetry {
            return killers.ones().map(|c| (c, vec![c])).collect();
        }
        let classes = coordinate_classes(self.p.l, chosen.iter().map(|&c| self.cands[c]));
        let key = |c: u128| -> Vec<u8> {
            classes
                .iter()
                .map(|&m| (c & m).count_ones() as u8)
                .collect()
        };
        let mut orbit_of: HashMap<Vec<u8>, usize> = HashMap::new();
        let mut out: Vec<(usize, Vec<usize>)> = Vec::new();
        for c in killers.ones() {
            let k = key(self.cands[c]);
            if let std::collections::hash_map::Entry::Vacant(e) = orbit_of.entry(k) {
                e.insert(out.len());
                out.push((c, Vec::new()));
            }
        }
        for c in 0..self.cands.len() {
            if !excluded.contains(c) {
                if let Some(&o) = orbit_of.get(&key(self.cands[c])) {
                    out[o].1.push(c);
                }
            }
        }
        out
    }
}

/// Masks of the coordinate classes with identical membership in every word.
fn coordinate_classes(l: usize, words: impl Iterator<Item = u128>) -> Vec<u128> {
    let mut classes = vec![low_mask(l)];
    for w in words {
        classes = classes
            .into_iter()
            .flat_map(|m| [m & w, m & !w])
            .filter(|&m| m != 0)
            .collect();
    }
    classes
}

fn to_code(p: SchemeParams, cands: &[u128], chosen: &[usize]) -> Result<PpricCode> {
    let mut idx = chosen.to_vec();
    idx.sort_unstable();
    let masks: Vec<u128> = idx.iter().map(|&c| cands[c]).collect();
    PpricCode::from_masks(p, &masks)
}

/// Searches for a PPRIC code of exactly `m` codewords containing `{1..s}`
/// (candidate 0). The top-level branches are the killers of the hardest
/// violator left open by candidate 0; they run in parallel, and the first
/// branch in order that succeeds supplies the witness, so the result does
/// not depend on scheduling.
fn search_size(base: &Cover, m: usize, nodes: &AtomicU64) -> Result<Option<Vec<usize>>> {
    let mut top = base.clone();
    let open = top.open(&[0])?;
    if open.is_empty() {
        return Ok((m >= 1).then(|| vec![0]));
    }
    if m < 2 {
        return Ok(None);
    }
    let hardest = open
        .iter()
        .copied()
        .min_by_key(|&v| top.pool[v].count_ones(..))
        .expect("open is non-empty");
    let mut first = FixedBitSet::with_capacity(top.cands.len());
    first.insert(0);
    let mut branches = top.branches(&[0], &first, hardest);
    let mut open_set = FixedBitSet::with_capacity(top.pool.len());
    open_set.extend(open.iter().copied());
    top.greedy_first(&mut branches, &open_set);
    let hit = branches
        .par_iter()
        .enumerate()
        .map(|(i, &(c, _))| {
            let mut cover = top.clone();
            let mut excluded = first.clone();
            for (_, drop) in &branches[..i] {
                for &e in drop {
                    excluded.insert(e);
                }
            }
            let mut chosen = vec![0, c];
            let mut witness = None;
            let res = cover.dfs(&mut chosen, &mut excluded, m, &mut |code| {
                witness = Some(code.to_vec());
                true
            });
            nodes.fetch_add(cover.nodes, Ordering::Relaxed);
            res.map(|_| witness)
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    match hit {
        Some(Ok(w)) => Ok(w),
        Some(Err(e)) => Err(e),
        None => Ok(None),
    }
}

/// `N(L, s, r)` with a witness, trying sizes upward from the best lower bound.
///
/// Fails with a capacity error when no code of size at most `size_cap` exists.
pub fn exact_n_search(l: usize, s: usize, r: usize, size_cap: usize) -> Result<SearchResult> {
    exact_n_search_with(l, s, r, size_cap, SearchOptions::default())
}

/// [`exact_n_search`] with symmetry pruning or a node limit.
pub fn exact_n_search_with(
    l: usize,
    s: usize,
    r: usize,
    size_cap: usize,
    opts: SearchOptions,
) -> Result<SearchResult> {
    let p = SchemeParams::new(l, s, r)?;
    let cands = candidates(p)?;
    let start = bounds::best_lower(l, s, r)?;
    let left = AtomicU64::new(opts.node_limit.unwrap_or(0));
    let base = Cover::new(p, &cands, opts.symmetry, opts.node_limit.map(|_| &left));
    let nodes = AtomicU64::new(0);
    for m in start..=size_cap {
        if let Some(chosen) = search_size(&base, m, &nodes)? {
            let witness = to_code(p, &cands, &chosen)?;
            return Ok(SearchResult {
                params: p,
                n_exact: witness.len(),
                witness,
                nodes_explored: nodes.load(Ordering::Relaxed),
            });
        }
    }
    Err(Error::capacity(format!(
        "no PPRIC code with at most {size_cap} codewords at {p}"
    )))
}

/// Every PPRIC code of size `m` containing `{1..s}`, codewords sorted, codes
/// in discovery order. Meant for `m = N(L, s, r)`; a smaller code turning up
/// is reported as a parameter error.
pub fn minimal_codes_enumerate(l: usize, s: usize, r: usize, m: usize) -> Result<Vec<PpricCode>> {
    let p = SchemeParams::new(l, s, r)?;
    let cands = candidates(p)?;
    if m < bounds::best_lower(l, s, r)? {
        return Ok(Vec::new());
    }
    let mut cover = Cover::new(p, &cands, false, None);
    let mut chosen = vec![0];
    let mut excluded = FixedBitSet::with_capacity(cands.len());
    excluded.insert(0);
    let mut codes: Vec<Vec<usize>> = Vec::new();
    let mut smaller = None;
    let mut overflow = false;
    cover.dfs(&mut chosen, &mut excluded, m, &mut |code| {
        if code.len() < m {
            smaller = Some(code.len());
            return true;
        }
        codes.push(code.to_vec());
        overflow = codes.len() > MAX_MINIMAL_CODES;
        overflow
    })?;
    if let Some(k) = smaller {
        return Err(Error::param(format!(
            "a PPRIC code with {k} < m = {m} codewords exists at {p}"
        )));
    }
    if overflow {
        return Err(Error::capacity(format!(
            "more than {MAX_MINIMAL_CODES} minimum codes"
        )));
    }
    codes.iter().map(|c| to_code(p, &cands, c)).collect()
}

/// MIPPR data for one minimum code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeProbe {
    pub code: PpricCode,
    pub min_mippr_weight: usize,
    /// Weight → number of MIPPR words, when `2^L` is enumerable.
    pub mippr_weights: Option<BTreeMap<usize, u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub params: SchemeParams,
    pub n_exact: usize,
    pub codes: Vec<CodeProbe>,
    /// Codes (by index) with some MIPPR word of weight other than `r + 3`.
    pub all_weights_counterexamples: Vec<usize>,
    /// Codes whose lightest MIPPR word does not weigh `r + 3`.
    pub min_weight_counterexamples: Vec<usize>,
    /// Whether every code's full MIPPR weight list was computed.
    pub complete: bool,
}

/// Weight histogram of the support-minimal words meeting every codeword.
pub fn mippr_weight_histogram(code: &PpricCode) -> Result<BTreeMap<usize, u64>> {
    let l = code.params().l;
    ensure_enumerable(&(num_bigint::BigUint::from(1u8) << l), "MIPPR scan")?;
    let masks = code.masks();
    let hits = |y: u64| masks.iter().all(|&c| c & u128::from(y) != 0);
    let counts = (1u64..1u64 << l)
        .into_par_iter()
        .filter(|&y| {
            hits(y) && {
                let mut rest = y;
                let mut minimal = true;
                while rest != 0 {
                    let bit = rest & rest.wrapping_neg();
                    if hits(y & !bit) {
                        minimal = false;
                        break;
                    }
                    rest &= rest - 1;
                }
                minimal
            }
        })
        .fold(BTreeMap::new, |mut acc: BTreeMap<usize, u64>, y| {
            *acc.entry(y.count_ones() as usize).or_default() += 1;
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        });
    Ok(counts)
}

/// Runs the MIPPR conjecture checks over every minimum code containing
/// `{1..s}`. Reports counterexamples without asserting either conjecture.
pub fn conjecture_probe(l: usize, s: usize, r: usize) -> Result<ConjectureReport> {
    let p = SchemeParams::new(l, s, r)?;
    if s == 0 {
        return Err(Error::param("s = 0 codes have no MIPPR words"));
    }
    let n = exact_n_search(l, s, r, binomial(l, s).to_usize().unwrap_or(usize::MAX))?.n_exact;
    let mut codes = Vec::new();
    let mut complete = true;
    for code in minimal_codes_enumerate(l, s, r, n)? {
        let min_mippr_weight = mippr_min_weight(&code)?;
        let mippr_weights = mippr_weight_histogram(&code).ok();
        complete &= mippr_weights.is_some();
        codes.push(CodeProbe {
            code,
            min_mippr_weight,
            mippr_weights,
        });
    }
    let all_weights_counterexamples = codes
        .iter()
        .enumerate()
        .filter(|(_, c)| {
            c.mippr_weights
                .as_ref()
                .is_some_and(|h| h.keys().any(|&w| w != r + 3))
        })
        .map(|(i, _)| i)
        .collect();
    let min_weight_counterexamples = codes
        .iter()
        .enumerate()
        .filter(|(_, c)| c.min_mippr_weight != r + 3)
        .map(|(i, _)| i)
        .collect();
    Ok(ConjectureReport {
        params: p,
        n_exact: n,
        codes,
        all_weights_counterexamples,
        min_weight_counterexamples,
        complete,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ppric::{verify_enumeration, verify_exact};

    /// Plain search: every `m`-subset of `W_s` containing `{1..s}`, checked
    /// by the enumeration verifier.
    fn brute_n(l: usize, s: usize, r: usize) -> usize {
        let p = SchemeParams::new(l, s, r).unwrap();
        let cands: Vec<u128> = Subsets::new(l, s).collect();
        // r + 3 is a lower bound for every code
        for m in r + 3..=cands.len() {
            for rest in Subsets::new(cands.len() - 1, m - 1) {
                let mut masks = vec![cands[0]];
                masks.extend(crate::metric::combinatorics::Ones(rest).map(|i| cands[i + 1]));
                let code = PpricCode::from_masks(p, &masks).unwrap();
                if verify_enumeration(&code).unwrap().is_ppric {
                    return m;
                }
            }
        }
        unreachable!("the full code is PPRIC")
    }

    #[test]
    fn small_exact_values() {
        for (l, s, r, n) in [
            (6, 2, 0, 3),
            (5, 2, 0, 4),
            (7, 3, 0, 5),
            (7, 2, 1, 5),
            (5, 1, 2, 5),
        ] {
            let res = exact_n_search(l, s, r, 20).unwrap();
            assert_eq!(res.n_exact, n, "({l},{s},{r})");
            assert!(verify_exact(&res.witness).is_ppric);
            assert_eq!(res.witness.codewords()[0].bits(), low_mask(s));
        }
    }

    #[test]
    fn agrees_with_plain_search() {
        for (l, s, r) in [
            (5, 2, 0),
            (6, 2, 1),
            (7, 2, 0),
            (7, 3, 0),
            (6, 1, 1),
            (7, 2, 2),
        ] {
            assert_eq!(
                exact_n_search(l, s, r, 30).unwrap().n_exact,
                brute_n(l, s, r),
                "({l},{s},{r})"
            );
        }
    }

    #[test]
    fn deterministic_witness() {
        let a = exact_n_search(8, 3, 0, 20).unwrap();
        let b = exact_n_search(8, 3, 0, 20).unwrap();
        assert_eq!(a.witness, b.witness);
    }

    #[test]
    fn limits() {
        assert!(matches!(
            exact_n_search(16, 7, 0, 20),
            Err(Error::Capacity(_))
        ));
        assert!(matches!(
            exact_n_search(5, 2, 0, 3),
            Err(Error::Capacity(_))
        ));
        assert!(matches!(
            exact_n_search(5, 0, 0, 3),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn minimal_code_lists() {
        let codes = minimal_codes_enumerate(6, 2, 0, 3).unwrap();
        let disjoint = crate::construct::build_disjoint(6, 2, 0).unwrap();
        assert!(codes.contains(&disjoint));
        assert!(codes
            .iter()
            .all(|c| verify_exact(c).is_ppric && c.len() == 3));
        assert!(minimal_codes_enumerate(5, 2, 0, 3).unwrap().is_empty());
        assert!(minimal_codes_enumerate(6, 2, 0, 2).unwrap().is_empty());
        assert!(minimal_codes_enumerate(7, 2, 0, 4).is_err());
    }

    #[test]
    fn probe_runs() {
        let rep = conjecture_probe(6, 2, 0).unwrap();
        assert_eq!(rep.n_exact, 3);
        assert!(rep.complete);
        assert!(rep.codes.iter().all(|c| c.min_mippr_weight == 3));
        assert!(conjecture_probe(5, 0, 0).is_err());
        let disjoint = crate::construct::build_disjoint(6, 2, 0).unwrap();
        let h = mippr_weight_histogram(&disjoint).unwrap();
        assert_eq!(h, BTreeMap::from([(3, 8)]));
    }
}
