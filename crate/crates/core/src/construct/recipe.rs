//! Replayable construction recipes: a rule plus the parameters it targets.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{
    build_disjoint, build_eps8, build_extremal, construction2, construction3, doubling,
    extremal_size, pairs_plus_design, superset_9_5_2, superset_construction_fits,
    superset_construction_size,
};
use crate::covering::{exact_covering_number, known, CoveringDesign};
use crate::error::{Error, Result};
use crate::metric::combinatorics::{binomial, ensure_enumerable, Subsets};
use crate::metric::SchemeParams;
use crate::ppric::{verify_exact_within, PpricCode};

/// A covering design named by its parameters and block count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringRef {
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub size: usize,
}

impl CoveringRef {
    /// A concrete design with exactly `size` blocks, when one is at hand.
    pub fn resolve(&self) -> Result<CoveringDesign> {
        let table = [
            known::design_9_5_2(),
            known::all_pairs_4(),
            known::fano_plane(),
        ];
        let found = match table
            .into_iter()
            .find(|d| (d.n(), d.k(), d.t()) == (self.n, self.k, self.t))
        {
            Some(d) => d,
            None if self.n <= 8 => exact_covering_number(self.n, self.k, self.t)?.1,
            None => {
                return Err(Error::param(format!(
                    "no concrete ({}, {}, {}) covering design is available",
                    self.n, self.k, self.t
                )))
            }
        };
        if found.len() != self.size {
            return Err(Error::param(format!(
                "available ({}, {}, {}) design has {} blocks, recipe expects {}",
                self.n,
                self.k,
                self.t,
                found.len(),
                self.size
            )));
        }
        Ok(found)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Rule {
    Disjoint,
    Construction2 {
        k: usize,
        t: usize,
    },
    Construction3 {
        k: usize,
        t: usize,
    },
    /// Complement of the `(9,5,2)` design alone: five words, `r = 0`.
    #[serde(rename = "superset_9_5_2")]
    Superset952,
    /// `r/2` `(2,1)`-supersets plus the `(9,5,2)` complement superset.
    #[serde(rename = "construction1_9_5_2")]
    Construction1With952,
    /// `r/2` `(2,1)`-supersets plus the `(4,2,2)` complement superset.
    #[serde(rename = "construction1_4_2_2")]
    Construction1With422,
    Eps8,
    Extremal,
    Full,
    Doubling {
        parts: [CoveringRef; 2],
    },
}

/// A construction rule applied at `(L, s, r)`; shorter native lengths are padded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recipe {
    #[serde(rename = "L")]
    pub l: usize,
    pub s: usize,
    pub r: usize,
    #[serde(flatten)]
    pub rule: Rule,
}

impl Recipe {
    pub fn new(l: usize, s: usize, r: usize, rule: Rule) -> Self {
        Recipe { l, s, r, rule }
    }

    pub fn params(&self) -> SchemeParams {
        SchemeParams {
            l: self.l,
            s: self.s,
            r: self.r,
        }
    }

    /// Number of codewords the rule produces.
    pub fn size(&self) -> u128 {
        let (s, r) = (self.s, self.r);
        match &self.rule {
            Rule::Disjoint => (r + 3) as u128,
            Rule::Construction2 { k, t } | Rule::Construction3 { k, t } => {
                superset_construction_size(r, *k, *t) as u128
            }
            Rule::Superset952 => 5,
            Rule::Construction1With952 => ((3 * r + 10) / 2) as u128,
            Rule::Construction1With422 => ((3 * r + 12) / 2) as u128,
            Rule::Eps8 => 6,
            Rule::Extremal => extremal_size(s, r).unwrap_or(u128::MAX),
            Rule::Full => binomial(self.l, s).to_u128().unwrap_or(u128::MAX),
            Rule::Doubling { parts } => parts.iter().map(|p| p.size as u128).sum(),
        }
    }

    /// Rule label used in bound reports.
    pub fn rule_name(&self) -> String {
        match &self.rule {
            Rule::Disjoint => "ub.disjoint".into(),
            Rule::Construction2 { k, t } => format!("ub.construction2[k={k},t={t}]"),
            Rule::Construction3 { k, t } => format!("ub.construction3[k={k},t={t}]"),
            Rule::Superset952 => "ub.superset[9,5,2]".into(),
            Rule::Construction1With952 => "ub.construction1[9,5,2]".into(),
            Rule::Construction1With422 => "ub.construction1[4,2,2]".into(),
            Rule::Eps8 => "ub.eps8".into(),
            Rule::Extremal => "ub.extremal".into(),
            Rule::Full => "ub.full".into(),
            Rule::Doubling { parts } => format!(
                "ub.doubling[({},{},{})+({},{},{})]",
                parts[0].n, parts[0].k, parts[0].t, parts[1].n, parts[1].k, parts[1].t
            ),
        }
    }

    /// Checks the rule's preconditions and the size arithmetic without building.
    pub fn check_symbolic(&self) -> Result<()> {
        let p = SchemeParams::new(self.l, self.s, self.r)?;
        let (l, s, r) = (p.l, p.s, p.r);
        let fail = |why: &str| Err(Error::param(format!("{} at {p}: {why}", self.rule_name())));
        match &self.rule {
            Rule::Disjoint if l < (r + 3) * s => fail("needs L ≥ (r+3)s"),
            Rule::Construction2 { .. } if r % 2 == 0 => fail("needs odd r"),
            Rule::Construction3 { .. } if r % 2 == 1 => fail("needs even r"),
            Rule::Construction2 { k, t } | Rule::Construction3 { k, t }
                if !superset_construction_fits(l, s, r, *k, *t) =>
            {
                fail("ratio, range or divisibility condition fails")
            }
            Rule::Superset952 if r != 0 || s % 4 != 0 || 4 * l < 9 * s => {
                fail("needs r = 0, 4 | s and 4L ≥ 9s")
            }
            Rule::Construction1With952
                if r == 0 || r % 2 == 1 || s % 4 != 0 || 4 * l < (3 * r + 9) * s =>
            {
                fail("needs even r > 0, 4 | s and 4L ≥ (3r+9)s")
            }
            Rule::Construction1With422
                if r == 0 || r % 2 == 1 || s % 2 != 0 || 4 * l < (3 * r + 8) * s =>
            {
                fail("needs even r > 0, 2 | s and 4L ≥ (3r+8)s")
            }
            Rule::Eps8 if r != 0 || s % 8 != 0 || 8 * l < 17 * s => {
                fail("needs r = 0, 8 | s and 8L ≥ 17s")
            }
            Rule::Extremal if s <= r => fail("needs s > r"),
            Rule::Doubling { parts } => {
                let [a, b] = parts;
                if a.n < a.k || b.n < b.k || a.n - a.k != s || b.n - b.k != s {
                    return fail("complement block sizes must equal s");
                }
                if a.t + b.t != r + 1 {
                    return fail("needs t1 + t2 - 1 = r");
                }
                if a.n + b.n > l {
                    return fail("needs L1 + L2 ≤ L");
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Materializes the code, padded to length `L`.
    pub fn build(&self) -> Result<PpricCode> {
        self.check_symbolic()?;
        let (l, s, r) = (self.l, self.s, self.r);
        let code = match &self.rule {
            Rule::Disjoint => build_disjoint(l, s, r)?,
            Rule::Construction2 { k, t } => construction2(l, s, r, *k, *t)?,
            Rule::Construction3 { k, t } => construction3(l, s, r, *k, *t)?,
            Rule::Superset952 => superset_9_5_2(l, s)?,
            Rule::Construction1With952 => pairs_plus_design(l, s, r, &known::design_9_5_2())?,
            Rule::Construction1With422 => pairs_plus_design(l, s, r, &known::all_pairs_4())?,
            Rule::Eps8 => build_eps8(s)?,
            Rule::Extremal => build_extremal(s, r)?,
            Rule::Full => {
                ensure_enumerable(&binomial(l, s), "full constant-weight code")?;
                PpricCode::from_masks(
                    SchemeParams::new(l, s, r)?,
                    &Subsets::new(l, s).collect::<Vec<_>>(),
                )?
            }
            Rule::Doubling { parts } => doubling(&parts[0].resolve()?, &parts[1].resolve()?)?,
        };
        let native = code.params().l;
        if native < l {
            code.pad(l - native)
        } else {
            Ok(code)
        }
    }

    /// Builds and runs the exact verifier, optionally under a wall-clock cap.
    pub fn check(&self, deadline: Option<std::time::Instant>) -> Result<bool> {
        let code = self.build()?;
        if code.len() as u128 != self.size() {
            return Ok(false);
        }
        Ok(verify_exact_within(&code, deadline)?.is_ppric)
    }
}

/// Every enumerated recipe whose preconditions hold at `(L, s, r)`.
///
/// Constructions 2 and 3 are listed once per `k` with the smallest feasible `t`.
/// The full code is always listed for admissible parameters with `s ≥ 1`.
pub fn feasible_recipes(l: usize, s: usize, r: usize) -> Vec<Recipe> {
    let Ok(p) = SchemeParams::new(l, s, r) else {
        return Vec::new();
    };
    if s == 0 {
        return vec![Recipe::new(l, s, r, Rule::Disjoint)];
    }
    let mut out = Vec::new();
    let mut push = |rule: Rule| {
        let rec = Recipe::new(p.l, p.s, p.r, rule);
        if rec.check_symbolic().is_ok() {
            out.push(rec);
        }
    };
    push(Rule::Disjoint);
    let groups = if r.is_multiple_of(2) {
        (r + 2) / 2
    } else {
        (r + 3) / 2
    };
    for k in 1..=s {
        if let Some(t) = (0..groups).find(|&t| superset_construction_fits(l, s, r, k, t)) {
            push(if r % 2 == 1 {
                Rule::Construction2 { k, t }
            } else {
                Rule::Construction3 { k, t }
            });
        }
    }
    push(Rule::Superset952);
    push(Rule::Construction1With952);
    push(Rule::Construction1With422);
    push(Rule::Eps8);
    push(Rule::Extremal);
    push(Rule::Full);
    out
}
