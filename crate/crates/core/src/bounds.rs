//! Lower bounds, construction upper bounds and known exact values of
//! `N(L, s, r)`, the least size of an `(L, s, r)` PPRIC code.
//!
//! Every regime test compares `L · denominator` with `s · numerator` in
//! integers, so half-open interval boundaries are exact.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::construct::{feasible_recipes, Recipe};
use crate::covering::{exact_covering_number_within, schoenheim_bound};
use crate::error::{Error, Result};
use crate::metric::combinatorics::{binomial, ceil_div};
use crate::metric::SchemeParams;

/// Covering numbers with `n` up to this are computed exactly for the chain bound.
pub const CHAIN_EXACT_MAX_N: usize = 8;
const CHAIN_NODE_LIMIT: u64 = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerBound {
    pub rule: String,
    pub value: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpperBound {
    pub rule: String,
    pub value: u128,
    pub recipe: Recipe,
}

/// Everything known about `N(L, s, r)` from closed forms and constructions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub params: SchemeParams,
    pub lower_bounds: Vec<LowerBound>,
    pub upper_bounds: Vec<UpperBound>,
    pub best_lower: usize,
    pub best_upper: Option<u128>,
    pub exact: Option<usize>,
    pub exact_rule: Option<String>,
}

impl BoundReport {
    /// The recipe achieving `best_upper` (first listed on ties).
    pub fn best_recipe(&self) -> Option<&Recipe> {
        self.upper_bounds
            .iter()
            .min_by_key(|u| u.value)
            .map(|u| &u.recipe)
    }

    pub fn lower(&self, rule: &str) -> Option<usize> {
        self.lower_bounds
            .iter()
            .find(|b| b.rule == rule)
            .map(|b| b.value)
    }
}

fn admissible(l: usize, s: usize, r: usize) -> Result<SchemeParams> {
    SchemeParams::new(l, s, r)
}

fn positive_s(l: usize, s: usize, r: usize) -> Result<SchemeParams> {
    let p = admissible(l, s, r)?;
    if s == 0 {
        return Err(Error::param("this bound needs s ≥ 1"));
    }
    Ok(p)
}

fn small(v: BigUint) -> usize {
    v.to_usize().unwrap_or(usize::MAX)
}

/// `max_{k=0..r+1} ⌈(r+3-k) / (1-σ)^k⌉` with `σ = s/L`.
pub fn lb_repeat(l: usize, s: usize, r: usize) -> Result<usize> {
    admissible(l, s, r)?;
    let (lb, db) = (BigUint::from(l), BigUint::from(l - s));
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    let mut best = 0;
    for k in 0..=r + 1 {
        let v = small(ceil_div(&(&num * (r + 3 - k)), &den));
        best = best.max(v);
        num *= &lb;
        den *= &db;
    }
    Ok(best)
}

/// `⌈C(L, r+2) / C(L-s, r+2)⌉`.
pub fn lb_covering_fraction(l: usize, s: usize, r: usize) -> Result<usize> {
    admissible(l, s, r)?;
    Ok(small(ceil_div(
        &binomial(l, r + 2),
        &binomial(l - s, r + 2),
    )))
}

/// Schönheim bound on `c(L, L-s, r+2)`; `None` when it does not apply
/// (`s = 0`, where the design is a single block).
pub fn lb_covering_schoenheim(l: usize, s: usize, r: usize) -> Result<Option<usize>> {
    admissible(l, s, r)?;
    if s == 0 {
        return Ok(None);
    }
    Ok(Some(small(schoenheim_bound(l, l - s, r + 2)?)))
}

/// `c(n, k, t)` when cheaply and exactly known.
pub fn known_covering_number(n: usize, k: usize, t: usize) -> Option<usize> {
    if !(n >= k && k >= t && t > 0) {
        return None;
    }
    if k == n {
        return Some(1);
    }
    if t == 1 {
        return Some(n.div_ceil(k));
    }
    if k == t {
        return binomial(n, k).to_usize();
    }
    if n > CHAIN_EXACT_MAX_N {
        return None;
    }
    type Memo = HashMap<(usize, usize, usize), Option<usize>>;
    static MEMO: OnceLock<Mutex<Memo>> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    if let Some(&v) = memo.lock().expect("memo lock").get(&(n, k, t)) {
        return v;
    }
    let v = exact_covering_number_within(n, k, t, Some(CHAIN_NODE_LIMIT))
        .ok()
        .map(|(c, _)| c);
    memo.lock().expect("memo lock").insert((n, k, t), v);
    v
}

/// `c(n,k,t) ≥ ⌈n/k · c(n-1,k-1,t-1)⌉` unrolled down to an exactly known
/// `c(L-ℓ, L-s-ℓ, r+2-ℓ)`, best over `ℓ = 1..=r+1`.
pub fn lb_covering_chain(l: usize, s: usize, r: usize) -> Result<usize> {
    admissible(l, s, r)?;
    let k = l - s;
    let mut best = 1;
    for lvl in 1..=r + 1 {
        let Some(base) = known_covering_number(l - lvl, k - lvl, r + 2 - lvl) else {
            continue;
        };
        let mut v = BigUint::from(base);
        for i in (0..lvl).rev() {
            v = ceil_div(&(v * (l - i)), &BigUint::from(k - i));
        }
        best = best.max(small(v));
    }
    Ok(best)
}

/// Mills-type bound: `r + 3`, raised to `m ∈ (r+3, 3(r+3)/2]` when some
/// length `L' ≥ L` at the same `s` has `(3r+9-m)/2 ≤ L'/s < (3r+10-m)/2`.
///
/// Padding a code by a zero coordinate keeps it PPRIC, so `N` is
/// nonincreasing in `L` and the bound for `L'` carries down to `L`.
pub fn lb_mills(l: usize, s: usize, r: usize) -> Result<usize> {
    positive_s(l, s, r)?;
    let top = 3 * (r + 3) / 2;
    for m in (r + 4..=top).rev() {
        let lo = (3 * r + 9 - m) * s;
        let hi = (3 * r + 10 - m) * s;
        // smallest L' ≥ L with 2L' ≥ lo, then check 2L' < hi
        let lp = l.max(lo.div_ceil(2));
        if 2 * lp < hi {
            return Ok(m);
        }
    }
    Ok(r + 3)
}

/// The regime-restricted form: `m` only when `L/s` itself lies in `m`'s interval.
pub fn lb_mills_regime(l: usize, s: usize, r: usize) -> Result<Option<usize>> {
    positive_s(l, s, r)?;
    let top = 3 * (r + 3) / 2;
    Ok((r + 4..=top).find(|&m| 2 * l >= (3 * r + 9 - m) * s && 2 * l < (3 * r + 10 - m) * s))
}

/// Todorov-type bounds; returns `(item, value)` when `L/s` is in an item's interval.
pub fn lb_todorov(l: usize, s: usize, r: usize) -> Result<Option<(usize, usize)>> {
    positive_s(l, s, r)?;
    Ok(if r % 2 == 1 {
        (12 * l >= (9 * r + 25) * s && 4 * l < (3 * r + 9) * s).then_some((1, (3 * r + 11) / 2))
    } else if 4 * l >= (3 * r + 9) * s && 4 * l < (3 * r + 10) * s {
        Some((2, (3 * r + 10) / 2))
    } else if 4 * l >= (3 * r + 8) * s && 4 * l < (3 * r + 9) * s {
        Some((3, (3 * r + 12) / 2))
    } else {
        None
    })
}

/// `7` when `2 ≤ L/s < 17/8`, for `r = 0`.
pub fn lb_r0_special(l: usize, s: usize) -> Result<Option<usize>> {
    positive_s(l, s, 0)?;
    Ok((2 * s <= l && 8 * l < 17 * s).then_some(7))
}

/// The exact value and the item of the summary result that gives it.
pub fn exact_n_item(l: usize, s: usize, r: usize) -> Result<Option<(usize, usize)>> {
    positive_s(l, s, r)?;
    if l >= (r + 3) * s {
        return Ok(Some((1, r + 3)));
    }
    if let Some(m) = lb_mills_regime(l, s, r)? {
        return Ok(Some((2, m)));
    }
    let odd = r % 2 == 1;
    if odd && 12 * l >= (9 * r + 25) * s && 4 * l < (3 * r + 9) * s {
        return Ok(Some((3, (3 * r + 11) / 2)));
    }
    if !odd && 4 * l >= (3 * r + 9) * s && 4 * l < (3 * r + 10) * s {
        return Ok(Some((4, (3 * r + 10) / 2)));
    }
    if !odd && r > 0 && 4 * l >= (3 * r + 8) * s && 4 * l < (3 * r + 9) * s {
        return Ok(Some((5, (3 * r + 12) / 2)));
    }
    if r == 0 && 8 * l >= 17 * s && 4 * l < 9 * s {
        return Ok(Some((6, 6)));
    }
    Ok(None)
}

/// `N(L, s, r)` where a summary regime pins it down.
pub fn exact_n(l: usize, s: usize, r: usize) -> Result<Option<usize>> {
    Ok(exact_n_item(l, s, r)?.map(|(_, v)| v))
}

/// Largest lower bound over all rules.
pub fn best_lower(l: usize, s: usize, r: usize) -> Result<usize> {
    Ok(lower_bounds(l, s, r)?
        .iter()
        .map(|b| b.value)
        .max()
        .unwrap_or(r + 3))
}

/// Every lower-bound rule that applies, in a fixed order.
pub fn lower_bounds(l: usize, s: usize, r: usize) -> Result<Vec<LowerBound>> {
    let p = admissible(l, s, r)?;
    let mut out = Vec::new();
    let mut add = |rule: &str, value: usize| {
        out.push(LowerBound {
            rule: rule.into(),
            value,
        })
    };
    add("lb.repeat", lb_repeat(l, s, r)?);
    add("lb.covering.fraction", lb_covering_fraction(l, s, r)?);
    if let Some(v) = lb_covering_schoenheim(l, s, r)? {
        add("lb.covering.schoenheim", v);
    }
    add("lb.covering.chain", lb_covering_chain(l, s, r)?);
    if p.s > 0 {
        add("lb.mills", lb_mills(l, s, r)?);
        if let Some((item, v)) = lb_todorov(l, s, r)? {
            add(&format!("lb.todorov.{item}"), v);
        }
        if r == 0 {
            if let Some(v) = lb_r0_special(l, s)? {
                add("lb.r0.special", v);
            }
        }
    }
    Ok(out)
}

/// All rules and feasible constructions at `(L, s, r)`; needs `s ≥ 1`.
pub fn compute_report(l: usize, s: usize, r: usize) -> Result<BoundReport> {
    let params = positive_s(l, s, r)?;
    let lower_bounds = lower_bounds(l, s, r)?;
    let upper_bounds: Vec<UpperBound> = feasible_recipes(l, s, r)
        .into_iter()
        .map(|recipe| UpperBound {
            rule: recipe.rule_name(),
            value: recipe.size(),
            recipe,
        })
        .collect();
    let best_lower = lower_bounds.iter().map(|b| b.value).max().unwrap_or(r + 3);
    let best_upper = upper_bounds.iter().map(|u| u.value).min();
    let exact = exact_n_item(l, s, r)?;
    Ok(BoundReport {
        params,
        lower_bounds,
        upper_bounds,
        best_lower,
        best_upper,
        exact: exact.map(|e| e.1),
        exact_rule: exact.map(|e| format!("exact.item{}", e.0)),
    })
}
