//! Points, distances, balls and spheres of the binary Hamming, q-ary Hamming
//! and Johnson spaces.
//!
//! Coordinates are 0-based inside the crate and 1-based in every textual or
//! JSON format.

pub mod binary;
pub mod combinatorics;
pub mod johnson;
pub mod qary;

use std::fmt;
use std::hash::Hash;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

pub use binary::{hamming_distance, BinaryWord, MAX_LEN};
pub use combinatorics::{ball_size, binomial};
pub use johnson::{johnson_distance, JohnsonWord};
pub use qary::QaryWord;

use crate::error::{Error, Result};

/// Common interface of the three point types.
pub trait Word: Clone + Eq + Hash + Ord + fmt::Debug + fmt::Display + Send + Sync {
    fn distance(&self, other: &Self) -> Result<usize>;

    /// Points at distance exactly `radius`.
    fn sphere(&self, radius: usize) -> Result<Vec<Self>>;

    /// Points at distance at most `radius`.
    fn ball(&self, radius: usize) -> Result<Vec<Self>>;

    /// Every point of the space containing `self`, when enumerable.
    fn space(&self) -> Result<Vec<Self>>;
}

impl Word for BinaryWord {
    fn distance(&self, other: &Self) -> Result<usize> {
        self.hamming_distance(other)
    }
    fn sphere(&self, radius: usize) -> Result<Vec<Self>> {
        BinaryWord::sphere(self, radius)
    }
    fn ball(&self, radius: usize) -> Result<Vec<Self>> {
        BinaryWord::ball(self, radius)
    }
    fn space(&self) -> Result<Vec<Self>> {
        Ok(BinaryWord::all(self.len())?.collect())
    }
}

impl Word for QaryWord {
    fn distance(&self, other: &Self) -> Result<usize> {
        self.hamming_distance(other)
    }
    fn sphere(&self, radius: usize) -> Result<Vec<Self>> {
        QaryWord::sphere(self, radius)
    }
    fn ball(&self, radius: usize) -> Result<Vec<Self>> {
        QaryWord::ball(self, radius)
    }
    fn space(&self) -> Result<Vec<Self>> {
        QaryWord::all(self.q(), self.len())
    }
}

impl Word for JohnsonWord {
    fn distance(&self, other: &Self) -> Result<usize> {
        self.johnson_distance(other)
    }
    fn sphere(&self, radius: usize) -> Result<Vec<Self>> {
        JohnsonWord::sphere(self, radius)
    }
    fn ball(&self, radius: usize) -> Result<Vec<Self>> {
        JohnsonWord::ball(self, radius)
    }
    fn space(&self) -> Result<Vec<Self>> {
        JohnsonWord::all(self.n(), self.size())
    }
}

/// All points within `radius` of `center`.
pub fn enumerate_ball<W: Word>(center: &W, radius: usize) -> Result<Vec<W>> {
    center.ball(radius)
}

/// All points at distance exactly `radius` from `center`.
pub fn enumerate_sphere<W: Word>(center: &W, radius: usize) -> Result<Vec<W>> {
    center.sphere(radius)
}

/// The triple `(L, s, r)`: length, query offset radius, search radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SchemeParams {
    #[serde(rename = "L")]
    pub l: usize,
    pub s: usize,
    pub r: usize,
}

impl SchemeParams {
    /// Admissible parameters: `1 ≤ L ≤ MAX_LEN` and `L ≥ 2s + r + 1`.
    pub fn new(l: usize, s: usize, r: usize) -> Result<Self> {
        let p = SchemeParams { l, s, r };
        p.check()?;
        Ok(p)
    }

    /// Parameters without the admissibility check (length range still enforced).
    pub fn unchecked(l: usize, s: usize, r: usize) -> Result<Self> {
        if l == 0 || l > MAX_LEN {
            return Err(Error::param(format!(
                "length must be in 1..={MAX_LEN}, got {l}"
            )));
        }
        Ok(SchemeParams { l, s, r })
    }

    pub fn is_admissible(&self) -> bool {
        self.l > 2 * self.s + self.r
    }

    pub fn check(&self) -> Result<()> {
        Self::unchecked(self.l, self.s, self.r)?;
        if !self.is_admissible() {
            return Err(Error::param(format!(
                "inadmissible parameters (L={}, s={}, r={}): need L ≥ 2s + r + 1 = {}",
                self.l,
                self.s,
                self.r,
                2 * self.s + self.r + 1
            )));
        }
        Ok(())
    }

    /// `σ = s / L`.
    pub fn sigma(&self) -> Ratio<u64> {
        Ratio::new(self.s as u64, self.l as u64)
    }

    /// `L / s`; `None` when `s = 0`.
    pub fn ratio(&self) -> Option<Ratio<u64>> {
        (self.s > 0).then(|| Ratio::new(self.l as u64, self.s as u64))
    }
}

impl fmt::Display for SchemeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(L={}, s={}, r={})", self.l, self.s, self.r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn params_admissibility() {
        assert!(SchemeParams::new(6, 2, 1).is_ok());
        assert!(matches!(
            SchemeParams::new(5, 2, 1),
            Err(Error::Parameter(_))
        ));
        assert!(SchemeParams::new(0, 0, 0).is_err());
        let p = SchemeParams::new(17, 8, 0).unwrap();
        assert_eq!(p.sigma(), Ratio::new(8, 17));
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"L":17,"s":8,"r":0}"#);
    }

    #[test]
    fn generic_enumeration() {
        let x = JohnsonWord::new(8, [1, 2, 3, 4]).unwrap();
        assert_eq!(enumerate_sphere(&x, 1).unwrap().len(), 16);
        let z = BinaryWord::zeros(4).unwrap();
        assert_eq!(enumerate_ball(&z, 1).unwrap().len(), 5);
    }

    fn binary(len: usize) -> impl Strategy<Value = BinaryWord> {
        any::<u128>().prop_map(move |b| {
            BinaryWord::from_bits(len, b & combinatorics::low_mask(len)).unwrap()
        })
    }

    fn qary(q: u16, len: usize) -> impl Strategy<Value = QaryWord> {
        proptest::collection::vec(0..q as u8, len).prop_map(move |v| QaryWord::new(q, v).unwrap())
    }

    fn johnson(n: usize, l: usize) -> impl Strategy<Value = JohnsonWord> {
        Just((1..=n).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(move |v| JohnsonWord::new(n, v[..l].iter().copied()).unwrap())
    }

    proptest! {
        #[test]
        fn binary_triangle(a in binary(40), b in binary(40), c in binary(40)) {
            let ab = a.distance(&b).unwrap();
            let bc = b.distance(&c).unwrap();
            let ac = a.distance(&c).unwrap();
            prop_assert!(ac <= ab + bc);
            prop_assert_eq!(ab, b.distance(&a).unwrap());
        }

        #[test]
        fn qary_triangle(a in qary(5, 12), b in qary(5, 12), c in qary(5, 12)) {
            prop_assert!(a.distance(&c).unwrap() <= a.distance(&b).unwrap() + b.distance(&c).unwrap());
        }

        #[test]
        fn johnson_triangle_and_indicator(a in johnson(15, 6), b in johnson(15, 6), c in johnson(15, 6)) {
            prop_assert!(a.distance(&c).unwrap() <= a.distance(&b).unwrap() + b.distance(&c).unwrap());
            let h = a.indicator().hamming_distance(&b.indicator()).unwrap();
            prop_assert_eq!(h % 2, 0);
            prop_assert_eq!(h / 2, a.distance(&b).unwrap());
        }

        // d(z, y) = |x \ y| + |β \ y| - |σ \ y| where z = (x \ σ) ∪ β
        #[test]
        fn johnson_swap_distance(x in johnson(14, 5), y in johnson(14, 5), k in 0usize..=5, seed in any::<u64>()) {
            let inside: Vec<usize> = x.elements();
            let outside: Vec<usize> = (1..=14).filter(|e| !inside.contains(e)).collect();
            let rot = (seed % 5) as usize;
            let sigma: Vec<usize> = inside.iter().cycle().skip(rot).take(k).copied().collect();
            let beta: Vec<usize> = outside.iter().cycle().skip(rot).take(k).copied().collect();
            let z_elems: Vec<usize> = inside.iter().filter(|e| !sigma.contains(e)).chain(&beta).copied().collect();
            let z = JohnsonWord::new(14, z_elems).unwrap();
            let ys = y.elements();
            let minus = |set: &[usize]| set.iter().filter(|e| !ys.contains(e)).count();
            let expected = minus(&inside) + minus(&beta) - minus(&sigma);
            prop_assert_eq!(z.distance(&y).unwrap(), expected);
        }
    }
}
