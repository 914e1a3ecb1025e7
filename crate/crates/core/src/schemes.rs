//! PPRIC codes over `q`-ary Hamming spaces and the Johnson scheme.
//!
//! Verification here is by enumeration of the whole space, so it is limited
//! to spaces of at most `2^24` points.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::covering::{verify_covering, CoveringDesign};
use crate::error::{Error, Result};
use crate::metric::combinatorics::{binomial, ensure_enumerable, low_mask, Ones, Subsets};
use crate::metric::{JohnsonWord, QaryWord, Word, MAX_LEN};
use crate::ppric::{min_multihit, MultihitOptions, PpricCode, Verdict};

fn verdict<W>(violator: Option<W>) -> Verdict<W> {
    Verdict {
        is_ppric: violator.is_none(),
        violator,
        gamma_profile: BTreeMap::new(),
    }
}

/// Whether `B(x, r) = ⋂_{z ∈ S(x, s)} B(z, r + s)` holds, by scanning the space.
pub fn verify_symmetric_sphere_identity<W: Word>(x: &W, r: usize, s: usize) -> Result<bool> {
    let space = x.space()?;
    let sphere = x.sphere(s)?;
    let checks = space.len() as u128 * sphere.len().max(1) as u128;
    if checks > 1 << 30 {
        return Err(Error::capacity(format!(
            "identity scan would take {checks} distance evaluations"
        )));
    }
    space
        .par_iter()
        .try_fold(
            || true,
            |ok, y| -> Result<bool> {
                let inside = x.distance(y)? <= r;
                let mut all = true;
                for z in &sphere {
                    if z.distance(y)? > r + s {
                        all = false;
                        break;
                    }
                }
                Ok(ok && inside == all)
            },
        )
        .try_reduce(|| true, |a, b| Ok(a && b))
}

/// Enumeration verdict of a binary code read over the alphabet `{0..q-1}`.
///
/// A violator is a word of weight above `r` within `r + s` of every codeword;
/// the reported one is the least by weight, then support, then symbols.
pub fn qary_verify(code: &PpricCode, q: u16) -> Result<Verdict<QaryWord>> {
    let p = code.params();
    let space = QaryWord::all(q, p.l)?;
    let words: Vec<QaryWord> = code
        .codewords()
        .iter()
        .map(|c| QaryWord::from_binary(q, c))
        .collect::<Result<_>>()?;
    let key = |y: &QaryWord| {
        let support: Vec<usize> = (0..y.len()).filter(|&i| y.symbols()[i] != 0).collect();
        (support.len(), support, y.symbols().to_vec())
    };
    let violator = space
        .par_iter()
        .filter(|y| {
            y.weight() > p.r
                && words
                    .iter()
                    .all(|c| c.hamming_distance(y).expect("same space") <= p.r + p.s)
        })
        .min_by_key(|y| key(y))
        .cloned();
    Ok(verdict(violator))
}

/// A code in `J(n, L)` centered at `x`: every codeword is at distance `s` from `x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "JohnsonDoc", into = "JohnsonDoc")]
pub struct JohnsonPpricCode {
    n: usize,
    l: usize,
    s: usize,
    r: usize,
    x: JohnsonWord,
    codewords: Vec<JohnsonWord>,
}

#[derive(Serialize, Deserialize)]
struct JohnsonDoc {
    n: usize,
    #[serde(rename = "L")]
    l: usize,
    s: usize,
    r: usize,
    x: Vec<usize>,
    codewords: Vec<Vec<usize>>,
}

impl TryFrom<JohnsonDoc> for JohnsonPpricCode {
    type Error = Error;
    fn try_from(d: JohnsonDoc) -> Result<Self> {
        let x = JohnsonWord::new(d.n, d.x)?;
        let words = d
            .codewords
            .into_iter()
            .map(|c| JohnsonWord::new(d.n, c))
            .collect::<Result<Vec<_>>>()?;
        if x.size() != d.l {
            return Err(Error::param(format!(
                "center has {} elements, expected L = {}",
                x.size(),
                d.l
            )));
        }
        JohnsonPpricCode::new(x, d.s, d.r, words)
    }
}

impl From<JohnsonPpricCode> for JohnsonDoc {
    fn from(c: JohnsonPpricCode) -> Self {
        JohnsonDoc {
            n: c.n,
            l: c.l,
            s: c.s,
            r: c.r,
            x: c.x.elements(),
            codewords: c.codewords.iter().map(|w| w.elements()).collect(),
        }
    }
}

impl JohnsonPpricCode {
    pub fn new(x: JohnsonWord, s: usize, r: usize, codewords: Vec<JohnsonWord>) -> Result<Self> {
        for (i, c) in codewords.iter().enumerate() {
            if c.n() != x.n() || c.size() != x.size() {
                return Err(Error::param(format!(
                    "codeword {} is not in J({}, {})",
                    i + 1,
                    x.n(),
                    x.size()
                )));
            }
            if x.johnson_distance(c)? != s {
                return Err(Error::param(format!(
                    "codeword {} is not at distance {s} from x",
                    i + 1
                )));
            }
        }
        Ok(JohnsonPpricCode {
            n: x.n(),
            l: x.size(),
            s,
            r,
            x,
            codewords,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn center(&self) -> &JohnsonWord {
        &self.x
    }

    pub fn codewords(&self) -> &[JohnsonWord] {
        &self.codewords
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }
}

/// The least word outside `B(x, r)` lying in every `B(c, r + s)`, if any.
fn johnson_violator_check(
    x: &JohnsonWord,
    r: usize,
    s: usize,
    codewords: &[JohnsonWord],
) -> Result<Option<JohnsonWord>> {
    let space = JohnsonWord::all(x.n(), x.size())?;
    Ok(space
        .into_par_iter()
        .filter(|y| {
            x.johnson_distance(y).expect("same space") > r
                && codewords
                    .iter()
                    .all(|c| c.johnson_distance(y).expect("same space") <= r + s)
        })
        .min_by_key(|y| (x.johnson_distance(y).expect("same space"), y.elements())))
}

/// Enumeration verdict: `B(x, r) = ⋂_c B(c, r + s)` over `J(n, L)`.
/// The violator reported is the least by distance from `x`, then elements.
pub fn johnson_verify(code: &JohnsonPpricCode) -> Result<Verdict<JohnsonWord>> {
    Ok(verdict(johnson_violator_check(
        &code.x,
        code.r,
        code.s,
        &code.codewords,
    )?))
}

/// `2r + 3` codewords, the `i`-th swapping the `i`-th run of `s` elements of
/// `x` for the `i`-th run of `s` elements outside `x` (both in increasing order).
pub fn johnson_construction(
    n: usize,
    l: usize,
    s: usize,
    r: usize,
    x: &JohnsonWord,
) -> Result<JohnsonPpricCode> {
    if x.n() != n || x.size() != l {
        return Err(Error::param(format!(
            "center must be a point of J({n}, {l})"
        )));
    }
    if 2 * l > n {
        return Err(Error::param(format!(
            "Johnson scheme needs n ≥ 2L, got n = {n}, L = {l}"
        )));
    }
    let m = 2 * r + 3;
    if s == 0 || l < s * m {
        return Err(Error::param(format!(
            "construction needs s ≥ 1 and L ≥ s(2r+3) = {}, got L = {l}",
            s * m
        )));
    }
    let inside: Vec<usize> = Ones(x.mask()).collect();
    let outside: Vec<usize> = Ones(!x.mask() & low_mask(n)).collect();
    let codewords = (0..m)
        .map(|i| {
            let removed = inside[i * s..(i + 1) * s]
                .iter()
                .fold(0u128, |a, &e| a | 1 << e);
            let added = outside[i * s..(i + 1) * s]
                .iter()
                .fold(0u128, |a, &e| a | 1 << e);
            JohnsonWord::from_mask(n, (x.mask() & !removed) | added)
        })
        .collect::<Result<Vec<_>>>()?;
    JohnsonPpricCode::new(*x, s, r, codewords)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JohnsonExactReport {
    pub n: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub s: usize,
    pub r: usize,
    /// Least number of codewords from `W^x_s` forming a PPRIC code.
    pub minimum: usize,
    pub expected: usize,
    pub confirmed: bool,
    pub witness: JohnsonPpricCode,
}

/// Exhaustive minimum over codes centered at `x = {1..L}`, compared with `2r + 3`.
///
/// Each word `y` with `d(x, y) > r` must be excluded by some codeword `c`
/// with `d(c, y) > r + s`; the minimum is the least hitting set of these
/// exclusion sets over `W^x_s`.
pub fn johnson_exact_check(n: usize, l: usize, s: usize, r: usize) -> Result<JohnsonExactReport> {
    if s == 0 || 2 * l > n || l < s * (2 * r + 3) {
        return Err(Error::param(format!(
            "exact check covers only n ≥ 2L and L ≥ s(2r+3), got n={n}, L={l}, s={s}, r={r}"
        )));
    }
    let x = JohnsonWord::new(n, 1..=l)?;
    let ws_count = binomial(l, s) * binomial(n - l, s);
    if ws_count > 5000u32.into() {
        return Err(Error::capacity(format!(
            "|W^x_s| = {ws_count} exceeds 5000"
        )));
    }
    let ws = x.sphere(s)?;
    let space = JohnsonWord::all(n, l)?;
    let exclusions: Vec<Vec<usize>> = space
        .par_iter()
        .filter(|y| x.johnson_distance(y).expect("same space") > r)
        .map(|y| {
            ws.iter()
                .enumerate()
                .filter(|(_, c)| c.johnson_distance(y).expect("same space") > r + s)
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let chosen = min_hitting_set(&exclusions, ws.len())?;
    let witness = JohnsonPpricCode::new(x, s, r, chosen.iter().map(|&i| ws[i]).collect())?;
    let expected = 2 * r + 3;
    Ok(JohnsonExactReport {
        n,
        l,
        s,
        r,
        minimum: chosen.len(),
        expected,
        confirmed: chosen.len() == expected,
        witness,
    })
}

/// Least set of indices in `0..universe` meeting every list.
fn min_hitting_set(lists: &[Vec<usize>], universe: usize) -> Result<Vec<usize>> {
    if lists.iter().any(|l| l.is_empty()) {
        return Err(Error::param("some word cannot be excluded by any codeword"));
    }
    if universe <= MAX_LEN {
        let sets: Vec<u128> = lists
            .iter()
            .map(|l| l.iter().fold(0u128, |a, &i| a | 1 << i))
            .collect();
        let h = min_multihit(&sets, 1, low_mask(universe), MultihitOptions::default())?
            .expect("every list is nonempty");
        return Ok(Ones(h.mask).collect());
    }
    // wider candidate sets: try subsets by increasing size
    let masks: Vec<Vec<u64>> = lists
        .iter()
        .map(|l| {
            let mut m = vec![0u64; universe.div_ceil(64)];
            for &i in l {
                m[i / 64] |= 1 << (i % 64);
            }
            m
        })
        .collect();
    for k in 1..=universe {
        ensure_enumerable(&binomial(universe, k), "hitting-set scan")?;
        let hit = combinations(universe, k).find(|combo| {
            masks
                .iter()
                .all(|m| combo.iter().any(|&i| m[i / 64] >> (i % 64) & 1 == 1))
        });
        if let Some(c) = hit {
            return Ok(c);
        }
    }
    unreachable!("the whole universe hits every nonempty list")
}

/// `k`-combinations of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = (k <= n).then(|| (0..k).collect());
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let c = cur.as_mut().expect("checked above");
        let mut i = k;
        loop {
            if i == 0 {
                cur = None;
                break;
            }
            i -= 1;
            if c[i] < n - k + i {
                c[i] += 1;
                for j in i + 1..k {
                    c[j] = c[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

/// Weight-`L` words of length `n` with `L - k` ones among the first `L`
/// coordinates, stored as masks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JohnsonCoveringCode {
    pub n: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub k: usize,
    pub t: usize,
    pub codewords: Vec<u128>,
}

/// Outcome of scanning every weight-`L` word with `L - t` ones in front.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringCodeCheck {
    /// Every such word has at least one codeword at distance `k - t`.
    pub at_least_one: bool,
    /// Every such word has exactly one.
    pub exactly_one: bool,
    pub words_checked: u64,
}

/// `C̄_1 × C_2`: complement of each `(L, k, t)` block on the first `L`
/// coordinates, joined with each `(n - L, k, t)` block on the rest.
pub fn product_covering_code(
    c1: &CoveringDesign,
    c2: &CoveringDesign,
) -> Result<JohnsonCoveringCode> {
    if c1.k() != c2.k() || c1.t() != c2.t() {
        return Err(Error::param(format!(
            "designs need equal k and t, got ({}, {}) and ({}, {})",
            c1.k(),
            c1.t(),
            c2.k(),
            c2.t()
        )));
    }
    let (l, n) = (c1.n(), c1.n() + c2.n());
    if n > MAX_LEN {
        return Err(Error::capacity(format!("length {n} exceeds {MAX_LEN}")));
    }
    for (i, d) in [c1, c2].into_iter().enumerate() {
        if !verify_covering(d)? {
            return Err(Error::param(format!("design {} is not a covering", i + 1)));
        }
    }
    let front = low_mask(l);
    let mut codewords = Vec::with_capacity(c1.len() * c2.len());
    for &b1 in c1.blocks() {
        for &b2 in c2.blocks() {
            codewords.push((!b1 & front) | (b2 << l));
        }
    }
    Ok(JohnsonCoveringCode {
        n,
        l,
        k: c1.k(),
        t: c1.t(),
        codewords,
    })
}

/// Counts, for every eligible word, the codewords at Johnson distance `k - t`.
pub fn verify_johnson_covering(code: &JohnsonCoveringCode) -> Result<CoveringCodeCheck> {
    let (n, l, k, t) = (code.n, code.l, code.k, code.t);
    if t > k || k > l || l > n {
        return Err(Error::param("covering code needs t ≤ k ≤ L ≤ n"));
    }
    let words = binomial(l, t) * binomial(n - l, t);
    ensure_enumerable(&words, "covering-code scan")?;
    let front = low_mask(l);
    let fronts: Vec<u128> = Subsets::new(l, t).map(|z| !z & front).collect();
    let backs: Vec<u128> = Subsets::new(n - l, t).map(|o| o << l).collect();
    let (least, most) = fronts
        .par_iter()
        .flat_map_iter(|&f| backs.iter().map(move |&b| f | b))
        .map(|v| {
            let hits = code
                .codewords
                .iter()
                .filter(|&&c| (c & !v).count_ones() as usize == k - t)
                .count();
            (hits, hits)
        })
        .reduce(|| (usize::MAX, 0), |a, b| (a.0.min(b.0), a.1.max(b.1)));
    Ok(CoveringCodeCheck {
        at_least_one: least >= 1,
        exactly_one: least == 1 && most == 1,
        words_checked: fronts.len() as u64 * backs.len() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::build_disjoint;
    use crate::covering::known;
    use crate::metric::BinaryWord;
    use crate::ppric::verify_enumeration;

    #[test]
    fn sphere_identity() {
        let x = JohnsonWord::new(8, 1..=4).unwrap();
        assert!(verify_symmetric_sphere_identity(&x, 0, 1).unwrap());
        let z = QaryWord::zeros(3, 5).unwrap();
        assert!(verify_symmetric_sphere_identity(&z, 1, 1).unwrap());
        assert!(verify_symmetric_sphere_identity(&z, 2, 0).unwrap());
        let b = BinaryWord::zeros(6).unwrap();
        assert!(verify_symmetric_sphere_identity(&b, 1, 2).unwrap());
        // binary length 5 < r + 2s + 1 = 6: the identity fails
        let b = BinaryWord::zeros(5).unwrap();
        assert!(!verify_symmetric_sphere_identity(&b, 1, 2).unwrap());
    }

    #[test]
    fn qary_lift() {
        let code = build_disjoint(6, 2, 0).unwrap();
        assert!(qary_verify(&code, 3).unwrap().is_ppric);
        let bad = crate::ppric::PpricCode::from_masks(
            crate::SchemeParams::new(6, 2, 0).unwrap(),
            &[0b11, 0b110],
        )
        .unwrap();
        let v3 = qary_verify(&bad, 3).unwrap();
        assert!(!v3.is_ppric);
        let v2 = qary_verify(&bad, 2).unwrap();
        let vb = verify_enumeration(&bad).unwrap();
        assert_eq!(v2.is_ppric, vb.is_ppric);
        assert_eq!(
            v2.violator.unwrap(),
            QaryWord::from_binary(2, &vb.violator.unwrap()).unwrap()
        );
    }

    #[test]
    fn johnson_construction_example() {
        let x = JohnsonWord::new(8, 1..=4).unwrap();
        let code = johnson_construction(8, 4, 1, 0, &x).unwrap();
        let lists: Vec<Vec<usize>> = code.codewords().iter().map(|c| c.elements()).collect();
        assert_eq!(
            lists,
            [vec![2, 3, 4, 5], vec![1, 3, 4, 6], vec![1, 2, 4, 7]]
        );
        assert!(johnson_verify(&code).unwrap().is_ppric);
        for a in code.codewords() {
            for b in code.codewords() {
                if a != b {
                    assert_eq!(a.johnson_distance(b).unwrap(), 2);
                }
            }
        }
        assert!(johnson_construction(8, 4, 1, 1, &x).is_err());
        let json = serde_json::to_value(&code).unwrap();
        assert_eq!(json["x"], serde_json::json!([1, 2, 3, 4]));
        let back: JohnsonPpricCode = serde_json::from_value(json).unwrap();
        assert_eq!(back, code);
    }

    #[test]
    fn johnson_exact() {
        for (n, l) in [(8, 4), (12, 4)] {
            let rep = johnson_exact_check(n, l, 1, 0).unwrap();
            assert!(rep.confirmed, "{rep:?}");
            assert_eq!(rep.minimum, 3);
            assert!(johnson_verify(&rep.witness).unwrap().is_ppric);
        }
        assert!(matches!(
            johnson_exact_check(8, 4, 2, 0),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn fano_product() {
        let f = known::fano_plane();
        let code = product_covering_code(&f, &f).unwrap();
        assert_eq!((code.n, code.l, code.k, code.t), (14, 7, 3, 2));
        assert_eq!(code.codewords.len(), 49);
        assert!(code.codewords.iter().all(|c| c.count_ones() == 7));
        let check = verify_johnson_covering(&code).unwrap();
        assert!(check.at_least_one);
        assert!(check.exactly_one);
        assert_eq!(check.words_checked, 21 * 21);
        let d = known::design_9_5_2();
        assert!(product_covering_code(&f, &d).is_err());
    }

    #[test]
    fn hitting_set_fallback() {
        let lists = vec![vec![0, 150], vec![1, 150], vec![2]];
        assert_eq!(min_hitting_set(&lists, 200).unwrap(), vec![2, 150]);
    }
}
