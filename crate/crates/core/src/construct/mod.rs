//! Explicit PPRIC code constructions.

mod design;
mod recipe;

use num_traits::ToPrimitive;

use crate::covering::{known, verify_covering, CoveringDesign};
use crate::error::{Error, Result};
use crate::metric::combinatorics::{binomial, low_mask, Subsets};
use crate::metric::{SchemeParams, MAX_LEN};
use crate::ppric::PpricCode;

pub use design::{build_superset, SupersetSpec, TypedDesign, EXHAUSTIVE_TYPE_MAX_WIDTH};
pub use recipe::{feasible_recipes, CoveringRef, Recipe, Rule};

/// Codes with more words than this are refused.
pub const MAX_CODE_SIZE: usize = 1 << 20;

/// `r + 3` codewords with disjoint supports on the lowest coordinates.
pub fn build_disjoint(l: usize, s: usize, r: usize) -> Result<PpricCode> {
    let p = SchemeParams::new(l, s, r)?;
    if l < (r + 3) * s {
        return Err(Error::param(format!(
            "disjoint construction needs L ≥ (r+3)s = {}, got L = {l}",
            (r + 3) * s
        )));
    }
    if s == 0 {
        return PpricCode::from_masks(p, &[0]);
    }
    let masks: Vec<u128> = (0..r + 3).map(|i| low_mask(s) << (i * s)).collect();
    PpricCode::from_masks(p, &masks)
}

/// Union of typed designs on disjoint intervals, with
/// `r = Σ ℓ_i + p - 3` (the value that works for every multiplicity `t`).
pub fn construction1(l: usize, designs: &[TypedDesign]) -> Result<PpricCode> {
    if designs.len() < 2 {
        return Err(Error::param("construction needs at least two designs"));
    }
    let s = designs[0].s();
    if designs.iter().any(|d| d.s() != s) {
        return Err(Error::param("all designs must have the same block weight"));
    }
    let mut spans: Vec<(usize, usize)> = designs.iter().map(|d| (d.offset(), d.end())).collect();
    spans.sort_unstable();
    if spans.windows(2).any(|w| w[1].0 < w[0].1) {
        return Err(Error::param("design intervals overlap"));
    }
    let used = spans.last().map(|x| x.1).unwrap_or(0);
    if used > l {
        return Err(Error::param(format!(
            "designs occupy {used} coordinates, more than L = {l}"
        )));
    }
    let total = designs.iter().map(|d| d.type_level()).sum::<usize>() + designs.len();
    let r = total.checked_sub(3).ok_or_else(|| {
        Error::param("Σℓ + p - 3 is negative: the designs do not yield a code with r ≥ 0")
    })?;
    let mut masks = Vec::new();
    for d in designs {
        masks.extend(d.placed_blocks()?);
    }
    PpricCode::from_masks(SchemeParams::new(l, s, r)?, &masks)
}

/// [`construction1`] after placing the designs left to right from coordinate 1.
pub fn construction1_packed(l: usize, designs: Vec<TypedDesign>) -> Result<PpricCode> {
    let mut offset = 0;
    let placed: Vec<TypedDesign> = designs
        .into_iter()
        .map(|d| {
            let w = d.width();
            let d = d.at(offset);
            offset += w;
            d
        })
        .collect();
    construction1(l, &placed)
}

/// Odd `r`: `t` `(k+1,1)`-supersets and `(r+3)/2 - t` `(k,1)`-supersets,
/// `(r+3)(k+1)/2 + t` codewords.
pub fn construction2(l: usize, s: usize, r: usize, k: usize, t: usize) -> Result<PpricCode> {
    if r.is_multiple_of(2) {
        return Err(Error::param(format!("construction 2 needs odd r, got {r}")));
    }
    let groups = (r + 3) / 2;
    superset_construction(l, s, k, t, groups, false)
}

/// Even `r`: `t` `(k+1,1)`-supersets, `(r+2)/2 - t` `(k,1)`-supersets and one
/// lone codeword, `(r+2)(k+1)/2 + t + 1` codewords.
pub fn construction3(l: usize, s: usize, r: usize, k: usize, t: usize) -> Result<PpricCode> {
    if r % 2 == 1 {
        return Err(Error::param(format!(
            "construction 3 needs even r, got {r}"
        )));
    }
    let groups = (r + 2) / 2;
    superset_construction(l, s, k, t, groups, true)
}

fn superset_construction(
    l: usize,
    s: usize,
    k: usize,
    t: usize,
    groups: usize,
    lone: bool,
) -> Result<PpricCode> {
    if k == 0 || s == 0 {
        return Err(Error::param("need k ≥ 1 and s ≥ 1"));
    }
    // t = groups would just be the t = 0 layout with k + 1
    if t >= groups {
        return Err(Error::param(format!(
            "t must be at most {}, got {t}",
            groups - 1
        )));
    }
    // L/s ≥ groups(k+1)/k - t/(k(k+1)) (+1 with the lone codeword), cross-multiplied
    let (lhs, rhs) = superset_ratio(l, k, t, groups, lone);
    if lhs < rhs * s {
        return Err(Error::param(format!(
            "L/s = {l}/{s} is below the required ratio {rhs}/{}",
            2 * k * (k + 1)
        )));
    }
    let mut designs = Vec::new();
    for _ in 0..t {
        designs.push(SupersetSpec::k1(k + 1, s)?.build()?);
    }
    for _ in t..groups {
        designs.push(SupersetSpec::k1(k, s)?.build()?);
    }
    if lone {
        designs.push(TypedDesign::single(s)?);
    }
    construction1_packed(l, designs)
}

/// `(2k(k+1)L, s-coefficient)`: the construction fits iff `lhs ≥ coeff · s`.
fn superset_ratio(l: usize, k: usize, t: usize, groups: usize, lone: bool) -> (usize, usize) {
    let mut rhs = 2 * groups * (k + 1) * (k + 1) - 2 * t;
    if lone {
        rhs += 2 * k * (k + 1);
    }
    (2 * k * (k + 1) * l, rhs)
}

/// Whether construction 2 (odd `r`) or 3 (even `r`) applies with `(k, t)`.
pub fn superset_construction_fits(l: usize, s: usize, r: usize, k: usize, t: usize) -> bool {
    if k == 0 || s == 0 || l < 2 * s + r + 1 {
        return false;
    }
    let lone = r.is_multiple_of(2);
    let groups = if lone { (r + 2) / 2 } else { (r + 3) / 2 };
    if t >= groups || (t > 0 && !s.is_multiple_of(k + 1)) || (t < groups && !s.is_multiple_of(k)) {
        return false;
    }
    let (lhs, rhs) = superset_ratio(l, k, t, groups, lone);
    lhs >= rhs * s
}

/// Codeword count of construction 2 or 3 for `(r, k, t)`.
pub fn superset_construction_size(r: usize, k: usize, t: usize) -> usize {
    if r % 2 == 1 {
        (r + 3) * (k + 1) / 2 + t
    } else {
        (r + 2) * (k + 1) / 2 + t + 1
    }
}

/// The six-codeword `(17s/8, s, 0)` code assembled from regions
/// `A1..A6` of sizes `s/8, 5s/8, 3s/8, s/4, s/4, s/2`.
pub fn build_eps8(s: usize) -> Result<PpricCode> {
    if s == 0 || !s.is_multiple_of(8) {
        return Err(Error::param(format!(
            "six-codeword code needs 8 | s, got s = {s}"
        )));
    }
    let l = 17 * s / 8;
    if l > MAX_LEN {
        return Err(Error::capacity(format!("length {l} exceeds {MAX_LEN}")));
    }
    let sizes = [s / 8, 5 * s / 8, 3 * s / 8, s / 4, s / 4, s / 2];
    let mut regions = [0u128; 6];
    let mut offset = 0;
    for (region, &size) in regions.iter_mut().zip(&sizes) {
        *region = low_mask(size) << offset;
        offset += size;
    }
    let [a1, a2, a3, a4, a5, a6] = regions;
    let masks = [
        a1 | a2 | a4,
        a1 | a2 | a5,
        a1 | a3 | a4 | a5,
        a1 | a3 | a6,
        a2 | a3,
        a4 | a5 | a6,
    ];
    PpricCode::from_masks(SchemeParams::new(l, s, 0)?, &masks)
}

/// All `s`-subsets of each half of `[2s + r + 1]` (smaller half first).
pub fn build_extremal(s: usize, r: usize) -> Result<PpricCode> {
    if s <= r {
        return Err(Error::param(format!(
            "extremal construction needs s > r, got s = {s}, r = {r}"
        )));
    }
    let l = 2 * s + r + 1;
    let size = extremal_size(s, r)
        .filter(|&n| n <= MAX_CODE_SIZE as u128)
        .ok_or_else(|| Error::capacity("extremal code is too large to materialize"))?;
    let p = SchemeParams::new(l, s, r)?;
    let half = l / 2;
    let mut masks = Vec::with_capacity(size as usize);
    masks.extend(Subsets::new(half, s));
    masks.extend(Subsets::new(l - half, s).map(|m| m << half));
    PpricCode::from_masks(p, &masks)
}

/// `C(⌊L/2⌋, s) + C(⌈L/2⌉, s)` with `L = 2s + r + 1`.
pub fn extremal_size(s: usize, r: usize) -> Option<u128> {
    let l = 2 * s + r + 1;
    (binomial(l / 2, s) + binomial(l - l / 2, s)).to_u128()
}

/// Two covering designs `(L_i, L_i - s, t_i)` give an
/// `(L_1 + L_2, s, t_1 + t_2 - 1)` code from their complements.
pub fn doubling(cov1: &CoveringDesign, cov2: &CoveringDesign) -> Result<PpricCode> {
    let s1 = cov1.n() - cov1.k();
    let s2 = cov2.n() - cov2.k();
    if s1 != s2 {
        return Err(Error::param(format!(
            "complement weights differ: {s1} vs {s2}"
        )));
    }
    for (i, c) in [cov1, cov2].into_iter().enumerate() {
        if !(c.n() > c.k() && c.k() > c.t()) {
            return Err(Error::param(format!(
                "design {} needs n > k > t, got ({}, {}, {})",
                i + 1,
                c.n(),
                c.k(),
                c.t()
            )));
        }
        if !verify_covering(c)? {
            return Err(Error::param(format!("design {} is not a covering", i + 1)));
        }
    }
    let d1 = SupersetSpec::from_covering_complement(cov1, s1)?.build()?;
    let d2 = SupersetSpec::from_covering_complement(cov2, s1)?.build()?;
    construction1_packed(cov1.n() + cov2.n(), vec![d1, d2])
}

/// `r/2` `(2,1)`-supersets followed by a superset built on the complement of `base`.
pub(crate) fn pairs_plus_design(
    l: usize,
    s: usize,
    r: usize,
    base: &CoveringDesign,
) -> Result<PpricCode> {
    if r % 2 == 1 || r == 0 {
        return Err(Error::param(format!("needs even r > 0, got {r}")));
    }
    let mut designs = Vec::new();
    for _ in 0..r / 2 {
        designs.push(SupersetSpec::k1(2, s)?.build()?);
    }
    designs.push(SupersetSpec::from_covering_complement(base, s)?.build()?);
    construction1_packed(l, designs)
}

/// The five-word `(9s/4, s, 0)` code: the complement of the `(9,5,2)` design
/// with grain-sets of size `s/4`, padded to length `l`.
pub(crate) fn superset_9_5_2(l: usize, s: usize) -> Result<PpricCode> {
    let d = SupersetSpec::from_covering_complement(&known::design_9_5_2(), s)?.build()?;
    if d.width() > l {
        return Err(Error::param(format!(
            "needs L ≥ 9s/4 = {}, got {l}",
            d.width()
        )));
    }
    PpricCode::from_masks(SchemeParams::new(l, s, 0)?, &d.placed_blocks()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ppric::{verify_enumeration, verify_exact};

    fn check(code: &PpricCode) {
        assert!(verify_exact(code).is_ppric, "{:?}", code.params());
        if code.params().l <= 20 {
            assert!(verify_enumeration(code).unwrap().is_ppric);
        }
    }

    #[test]
    fn disjoint() {
        let c = build_disjoint(6, 2, 0).unwrap();
        let words: Vec<String> = c.codewords().iter().map(|w| w.to_string()).collect();
        assert_eq!(words, ["110000", "001100", "000011"]);
        check(&c);
        let c = build_disjoint(7, 1, 2).unwrap();
        assert_eq!(c.len(), 5);
        check(&c);
        assert!(matches!(build_disjoint(5, 2, 0), Err(Error::Parameter(_))));
    }

    #[test]
    fn construction1_r_values() {
        let a = SupersetSpec::from_covering_complement(&known::design_9_5_2(), 4)
            .unwrap()
            .build()
            .unwrap();
        let c = construction1_packed(18, vec![a.clone(), a.clone()]).unwrap();
        assert_eq!(c.params().r, 3);
        check(&c);
        let one = TypedDesign::single(2).unwrap();
        let err = construction1_packed(10, vec![one.clone(), one.clone()]).unwrap_err();
        assert!(matches!(err, Error::Parameter(_)));
        assert!(construction1_packed(10, vec![one.clone()]).is_err());
        let overlap = [one.clone(), one.clone().at(1)];
        assert!(construction1(10, &overlap).is_err());
    }

    #[test]
    fn constructions_2_and_3() {
        let c = construction2(8, 2, 1, 1, 0).unwrap();
        assert_eq!(c.len(), 4);
        check(&c);
        let c = construction2(26, 6, 3, 2, 1).unwrap();
        assert_eq!(c.len(), 10);
        check(&c);
        assert!(construction2(26, 6, 2, 2, 1).is_err());
        assert!(construction2(25, 6, 3, 2, 1).is_err());
        let c = construction3(10, 2, 2, 1, 0).unwrap();
        assert_eq!(c.len(), 5);
        check(&c);
        let c = construction3(6, 2, 0, 1, 0).unwrap();
        assert_eq!(c.len(), 3);
        check(&c);
        assert!(construction3(10, 2, 1, 1, 0).is_err());
    }

    #[test]
    fn eps8_code() {
        let c = build_eps8(8).unwrap();
        assert_eq!(c.params(), SchemeParams::new(17, 8, 0).unwrap());
        assert_eq!(c.len(), 6);
        assert!(c.codewords().iter().all(|w| w.weight() == 8));
        check(&c);
        assert!(verify_exact(&build_eps8(16).unwrap()).is_ppric);
        assert!(build_eps8(4).is_err());
    }

    #[test]
    fn extremal() {
        let c = build_extremal(2, 1).unwrap();
        assert_eq!((c.params().l, c.len()), (6, 6));
        check(&c);
        let c = build_extremal(2, 0).unwrap();
        assert_eq!((c.params().l, c.len()), (5, 4));
        check(&c);
        assert!(build_extremal(2, 2).is_err());
        assert_eq!(extremal_size(2, 1), Some(6));
    }

    #[test]
    fn doubling_9_5_2() {
        let d = known::design_9_5_2();
        let c = doubling(&d, &d).unwrap();
        assert_eq!(c.params(), SchemeParams::new(18, 4, 3).unwrap());
        assert_eq!(c.len(), 10);
        check(&c);
        assert!(doubling(&d, &known::all_pairs_4()).is_err());
        let mixed = doubling(&d, &known::fano_plane()).unwrap();
        assert_eq!(
            (mixed.params().l, mixed.params().r, mixed.len()),
            (16, 3, 12)
        );
        check(&mixed);
    }

    #[test]
    fn standalone_9_5_2() {
        let c = superset_9_5_2(9, 4).unwrap();
        assert_eq!(c.len(), 5);
        check(&c);
    }
}
