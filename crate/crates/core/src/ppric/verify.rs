use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::multihit::{min_multihit, MultihitOptions};
use super::PpricCode;
use crate::error::{Error, Result};
use crate::metric::combinatorics::{ensure_enumerable, low_mask, Ones, Subsets};
use crate::metric::{BinaryWord, SchemeParams};

/// Outcome of a PPRIC check.
///
/// `gamma_profile` maps each examined γ to `h(γ)` (`None` when no
/// γ-multihitting set exists). Enumeration oracles leave it empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict<W = BinaryWord> {
    pub is_ppric: bool,
    pub violator: Option<W>,
    pub gamma_profile: BTreeMap<usize, Option<usize>>,
}

/// `h(γ)`: the minimum number of coordinates meeting every codeword in at
/// least `γ` positions; `None` when `γ > s`.
pub fn min_multihit_weight(code: &PpricCode, gamma: usize) -> Result<Option<usize>> {
    let universe = low_mask(code.params().l);
    Ok(min_multihit(&code.masks(), gamma, universe, MultihitOptions::default())?.map(|h| h.size))
}

/// Minimum weight of an intersection word (one meeting every codeword).
pub fn mippr_min_weight(code: &PpricCode) -> Result<usize> {
    if code.params().s == 0 || code.is_empty() {
        return Err(Error::param(
            "intersection words need a nonempty code with s ≥ 1",
        ));
    }
    Ok(min_multihit_weight(code, 1)?.expect("weight-s codewords admit a 1-multihit"))
}

/// Exact verification through the multihit criterion: a violator of weight
/// `w ∈ {r+1..L}` exists iff `h(⌈(w-r)/2⌉) ≤ w`.
///
/// On failure the violator has minimum weight: a minimum multihitting set
/// padded with the lowest unused coordinates.
pub fn verify_exact(code: &PpricCode) -> Verdict {
    verify_exact_within(code, None).expect("no deadline means no budget error")
}

/// [`verify_exact`] with an optional wall-clock deadline.
pub fn verify_exact_within(code: &PpricCode, deadline: Option<Instant>) -> Result<Verdict> {
    let p = code.params();
    let universe = low_mask(p.l);
    let mut profile = BTreeMap::new();
    if code.is_empty() {
        return Ok(Verdict {
            is_ppric: false,
            violator: Some(word(p.l, pad_to(0, p.r + 1, p.l))),
            gamma_profile: profile,
        });
    }
    let masks = code.masks();
    let mut violator = None;
    for gamma in 1..=gamma_max(p) {
        let opts = MultihitOptions {
            deadline,
            ..Default::default()
        };
        let h = min_multihit(&masks, gamma, universe, opts)?;
        profile.insert(gamma, h.map(|h| h.size));
        if let (None, Some(h)) = (violator, h) {
            let lo = p.r + 2 * gamma - 1;
            let hi = (p.r + 2 * gamma).min(p.l);
            if h.size <= hi {
                violator = Some(word(p.l, pad_to(h.mask, h.size.max(lo), p.l)));
            }
        }
    }
    Ok(Verdict {
        is_ppric: violator.is_none(),
        violator,
        gamma_profile: profile,
    })
}

/// Fast PPRIC predicate: stops at the first violator found.
pub fn is_ppric(code: &PpricCode) -> bool {
    if code.is_empty() {
        return false;
    }
    find_violator(&code.masks(), code.params(), None)
        .expect("no deadline")
        .is_none()
}

/// Some violator word (as a mask) of the family `masks`, not necessarily of
/// minimum weight.
pub(crate) fn find_violator(
    masks: &[u128],
    p: SchemeParams,
    deadline: Option<Instant>,
) -> Result<Option<u128>> {
    let universe = low_mask(p.l);
    for gamma in 1..=gamma_max(p) {
        let lo = p.r + 2 * gamma - 1;
        let hi = (p.r + 2 * gamma).min(p.l);
        let opts = MultihitOptions {
            cap: Some(hi),
            first_only: true,
            deadline,
        };
        if let Some(h) = min_multihit(masks, gamma, universe, opts)? {
            return Ok(Some(pad_to(h.mask, h.size.max(lo), p.l)));
        }
    }
    Ok(None)
}

fn gamma_max(p: SchemeParams) -> usize {
    p.s.min((p.l - p.r).div_ceil(2))
}

/// Adds the lowest-index coordinates missing from `mask` until it has `weight` ones.
fn pad_to(mask: u128, weight: usize, len: usize) -> u128 {
    let mut out = mask;
    for i in Ones(!mask & low_mask(len)) {
        if out.count_ones() as usize >= weight {
            break;
        }
        out |= 1 << i;
    }
    out
}

fn word(len: usize, mask: u128) -> BinaryWord {
    BinaryWord::from_bits_unchecked(len, mask)
}

/// Canonical order on words: weight first, then lexicographic order of the
/// sorted support lists.
pub(crate) fn canonical_key(len: usize, mask: u128) -> (u32, Reverse<u128>) {
    (
        mask.count_ones(),
        Reverse(mask.reverse_bits() >> (128 - len)),
    )
}

/// Oracle: scans all of `F_2^L` and compares `B(0,r)` with `⋂ B(c, r+s)`
/// directly. The violator is the least mismatching word in
/// [`canonical_key`] order.
pub fn verify_enumeration(code: &PpricCode) -> Result<Verdict> {
    let p = code.params();
    ensure_enumerable(&(num_bigint::BigUint::from(1u8) << p.l), "binary space")?;
    let masks = code.masks();
    let violator = (0u64..1u64 << p.l)
        .into_par_iter()
        .map(u128::from)
        .filter(|&x| {
            let in_ball = x.count_ones() as usize <= p.r;
            let in_all = masks
                .iter()
                .all(|&c| (x ^ c).count_ones() as usize <= p.r + p.s);
            in_ball != in_all
        })
        .min_by_key(|&x| canonical_key(p.l, x))
        .map(|x| word(p.l, x));
    Ok(Verdict {
        is_ppric: violator.is_none(),
        violator,
        gamma_profile: BTreeMap::new(),
    })
}

/// Checks `B(0,r) = ⋂_{z ∈ W_s} B(z, r+s)` by enumeration, for any
/// `(L, s, r)` with `r < L` and `s ≤ L`, admissible or not.
pub fn full_sphere_identity_holds(l: usize, s: usize, r: usize) -> Result<bool> {
    SchemeParams::unchecked(l, s, r)?;
    if r >= l || s > l {
        return Err(Error::param(format!(
            "need r < L and s ≤ L, got (L={l}, s={s}, r={r})"
        )));
    }
    ensure_enumerable(&(num_bigint::BigUint::from(1u8) << l), "binary space")?;
    let sphere: Vec<u128> = Subsets::new(l, s).collect();
    let mismatch = (0u64..1u64 << l).into_par_iter().map(u128::from).any(|x| {
        let in_ball = x.count_ones() as usize <= r;
        let in_all = sphere
            .iter()
            .all(|&z| (x ^ z).count_ones() as usize <= r + s);
        in_ball != in_all
    });
    Ok(!mismatch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ppric::tests::code;

    fn full_code(l: usize, s: usize, r: usize) -> PpricCode {
        PpricCode::from_masks(
            SchemeParams::unchecked(l, s, r).unwrap(),
            &Subsets::new(l, s).collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn disjoint_code_is_ppric() {
        let c = code(6, 2, 0, &["110000", "001100", "000011"]);
        let v = verify_exact(&c);
        assert!(v.is_ppric);
        assert_eq!(v.gamma_profile.get(&1), Some(&Some(3)));
        assert!(verify_enumeration(&c).unwrap().is_ppric);
        assert!(is_ppric(&c));
        assert_eq!(min_multihit_weight(&c, 1).unwrap(), Some(3));
        assert_eq!(min_multihit_weight(&c, 3).unwrap(), None);
        assert!(min_multihit_weight(&c, 0).is_err());
        assert_eq!(mippr_min_weight(&c).unwrap(), 3);
    }

    #[test]
    fn overlapping_pair_fails() {
        let c = code(6, 2, 0, &["110000", "011000"]);
        let v = verify_exact(&c);
        assert!(!v.is_ppric);
        assert_eq!(v.violator.unwrap().to_string(), "010000");
        let o = verify_enumeration(&c).unwrap();
        assert!(!o.is_ppric);
        assert_eq!(o.violator.unwrap().to_string(), "010000");
        assert!(!is_ppric(&c));
    }

    #[test]
    fn full_code_boundary() {
        // L = 2s + r + 1: the whole weight-s layer works
        let c = full_code(6, 2, 1);
        assert!(verify_exact(&c).is_ppric);
        assert!(verify_enumeration(&c).unwrap().is_ppric);
        assert_eq!(mippr_min_weight(&c).unwrap(), 6 - 2 + 1);
        assert!(!full_sphere_identity_holds(5, 2, 1).unwrap());
        assert!(full_sphere_identity_holds(6, 2, 1).unwrap());
        assert!(full_sphere_identity_holds(7, 0, 3).unwrap());
    }

    #[test]
    fn empty_and_degenerate_codes() {
        let p = SchemeParams::new(4, 0, 1).unwrap();
        let zero = PpricCode::from_masks(p, &[0]).unwrap();
        assert!(verify_exact(&zero).is_ppric);
        assert!(verify_enumeration(&zero).unwrap().is_ppric);
        let empty = PpricCode::from_masks(p, &[]).unwrap();
        let v = verify_exact(&empty);
        assert!(!v.is_ppric);
        assert_eq!(v.violator.unwrap().to_string(), "1100");
        assert!(!verify_enumeration(&empty).unwrap().is_ppric);
        assert!(mippr_min_weight(&zero).is_err());
    }
}
