use std::fmt;

use serde::{Deserialize, Serialize};

use super::binary::{BinaryWord, MAX_LEN};
use super::combinatorics::{binomial, ensure_enumerable, low_mask, Ones, Subsets};
use crate::error::{Error, Result};

/// An `L`-subset of `{1..n}`, a point of the Johnson scheme `J(n, L)`.
///
/// Stored as a mask over `{0..n}`; element `e` (1-based) is bit `e - 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JohnsonWord {
    n: usize,
    mask: u128,
}

impl JohnsonWord {
    /// Builds a word from 1-based elements; requires `2L ≤ n`.
    pub fn new<I: IntoIterator<Item = usize>>(n: usize, elements: I) -> Result<Self> {
        let mut mask = 0u128;
        for e in elements {
            if e == 0 || e > n || e > MAX_LEN {
                return Err(Error::param(format!("element {e} outside 1..={n}")));
            }
            if mask >> (e - 1) & 1 == 1 {
                return Err(Error::param(format!("element {e} repeated")));
            }
            mask |= 1 << (e - 1);
        }
        Self::from_mask(n, mask)
    }

    pub fn from_mask(n: usize, mask: u128) -> Result<Self> {
        if n == 0 || n > MAX_LEN {
            return Err(Error::param(format!(
                "ground set size must be in 1..={MAX_LEN}"
            )));
        }
        if mask & !low_mask(n) != 0 {
            return Err(Error::param(format!("elements beyond {n}")));
        }
        let l = mask.count_ones() as usize;
        if l == 0 || 2 * l > n {
            return Err(Error::param(format!(
                "Johnson words need 1 ≤ L and 2L ≤ n, got L={l}, n={n}"
            )));
        }
        Ok(JohnsonWord { n, mask })
    }

    /// Parses `"{1,3,7}"` (braces optional).
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let inner = text.trim().trim_start_matches('{').trim_end_matches('}');
        let elements = inner
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::param(format!("invalid Johnson element {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, elements)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Subset size `L`.
    pub fn size(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn mask(&self) -> u128 {
        self.mask
    }

    /// Sorted 1-based elements.
    pub fn elements(&self) -> Vec<usize> {
        Ones(self.mask).map(|i| i + 1).collect()
    }

    /// Indicator vector of length `n`.
    pub fn indicator(&self) -> BinaryWord {
        BinaryWord::from_bits_unchecked(self.n, self.mask)
    }

    /// `|self \ other|`.
    pub fn johnson_distance(&self, other: &Self) -> Result<usize> {
        if self.n != other.n || self.size() != other.size() {
            return Err(Error::param(format!(
                "Johnson words from different schemes: J({},{}) vs J({},{})",
                self.n,
                self.size(),
                other.n,
                other.size()
            )));
        }
        Ok((self.mask & !other.mask).count_ones() as usize)
    }

    pub(crate) fn check_space(n: usize, l: usize) -> Result<()> {
        ensure_enumerable(&binomial(n, l), "Johnson scheme")
    }

    /// Words at Johnson distance exactly `radius`: remove `radius` elements
    /// and add `radius` outside ones.
    pub fn sphere(&self, radius: usize) -> Result<Vec<Self>> {
        Self::check_space(self.n, self.size())?;
        let inside: Vec<usize> = Ones(self.mask).collect();
        let outside: Vec<usize> = Ones(!self.mask & low_mask(self.n)).collect();
        let mut out = Vec::new();
        for rm in Subsets::new(inside.len(), radius) {
            let removed = Ones(rm).fold(0u128, |m, i| m | 1 << inside[i]);
            for ad in Subsets::new(outside.len(), radius) {
                let added = Ones(ad).fold(0u128, |m, i| m | 1 << outside[i]);
                out.push(JohnsonWord {
                    n: self.n,
                    mask: (self.mask & !removed) | added,
                });
            }
        }
        Ok(out)
    }

    pub fn ball(&self, radius: usize) -> Result<Vec<Self>> {
        let mut out = Vec::new();
        for d in 0..=radius.min(self.size()) {
            out.extend(self.sphere(d)?);
        }
        Ok(out)
    }

    /// All points of `J(n, l)` in lexicographic order of element lists.
    pub fn all(n: usize, l: usize) -> Result<Vec<Self>> {
        if l == 0 || 2 * l > n || n > MAX_LEN {
            return Err(Error::param(format!(
                "J({n},{l}) needs 1 ≤ L, 2L ≤ n ≤ {MAX_LEN}"
            )));
        }
        Self::check_space(n, l)?;
        Ok(Subsets::new(n, l)
            .map(|mask| JohnsonWord { n, mask })
            .collect())
    }
}

impl fmt::Display for JohnsonWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().into_iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for JohnsonWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "JohnsonWord(n={}, {self})", self.n)
    }
}

#[derive(Serialize, Deserialize)]
struct JohnsonRepr {
    n: usize,
    elements: Vec<usize>,
}

impl Serialize for JohnsonWord {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        JohnsonRepr {
            n: self.n,
            elements: self.elements(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for JohnsonWord {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = JohnsonRepr::deserialize(deserializer)?;
        JohnsonWord::new(repr.n, repr.elements).map_err(serde::de::Error::custom)
    }
}

/// Johnson distance `|a \ b|`.
pub fn johnson_distance(a: &JohnsonWord, b: &JohnsonWord) -> Result<usize> {
    a.johnson_distance(b)
}
