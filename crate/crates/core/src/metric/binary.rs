use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::combinatorics::{ensure_enumerable, low_mask, Ones, Subsets};
use crate::error::{Error, Result};

/// Longest supported binary word.
pub const MAX_LEN: usize = 128;

/// A word of `F_2^L` packed into a `u128`.
///
/// Bit `i` holds coordinate `i + 1`, so coordinate 1 is the leftmost
/// character of the textual form.
#[allow(clippy::len_without_is_empty)]
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryWord {
    len: usize,
    bits: u128,
}

impl BinaryWord {
    /// The all-zeros word.
    pub fn zeros(len: usize) -> Result<Self> {
        Self::from_bits(len, 0)
    }

    /// The all-ones word.
    pub fn ones(len: usize) -> Result<Self> {
        Self::from_bits(len, low_mask(len.min(MAX_LEN)))
    }

    /// Builds a word from a raw mask; bit `i` is coordinate `i + 1`.
    pub fn from_bits(len: usize, bits: u128) -> Result<Self> {
        if len == 0 || len > MAX_LEN {
            return Err(Error::param(format!(
                "binary word length must be in 1..={MAX_LEN}, got {len}"
            )));
        }
        if bits & !low_mask(len) != 0 {
            return Err(Error::param(format!("bits set beyond coordinate {len}")));
        }
        Ok(BinaryWord { len, bits })
    }

    /// Builds a word from 0-based support coordinates.
    pub fn from_support<I: IntoIterator<Item = usize>>(len: usize, support: I) -> Result<Self> {
        let mut bits = 0u128;
        for i in support {
            if i >= len.min(MAX_LEN) {
                return Err(Error::param(format!(
                    "coordinate {} outside 1..={len}",
                    i + 1
                )));
            }
            bits |= 1 << i;
        }
        Self::from_bits(len, bits)
    }

    pub(crate) fn from_bits_unchecked(len: usize, bits: u128) -> Self {
        debug_assert!((1..=MAX_LEN).contains(&len) && bits & !low_mask(len) == 0);
        BinaryWord { len, bits }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// 0-based support coordinates in increasing order.
    pub fn support(&self) -> Ones {
        Ones(self.bits)
    }

    /// Value of 0-based coordinate `i`.
    pub fn get(&self, i: usize) -> bool {
        i < self.len && self.bits >> i & 1 == 1
    }

    pub fn complement(&self) -> Self {
        BinaryWord {
            len: self.len,
            bits: !self.bits & low_mask(self.len),
        }
    }

    /// Coordinatewise sum over `F_2`.
    pub fn xor(&self, other: &Self) -> Result<Self> {
        self.check_same_len(other)?;
        Ok(BinaryWord {
            len: self.len,
            bits: self.bits ^ other.bits,
        })
    }

    /// Size of the intersection of the two supports.
    pub fn overlap(&self, other: &Self) -> usize {
        (self.bits & other.bits).count_ones() as usize
    }

    /// The same word with `extra` zero coordinates appended on the right.
    pub fn extend(&self, extra: usize) -> Result<Self> {
        Self::from_bits(self.len + extra, self.bits)
    }

    /// Applies a coordinate permutation: coordinate `i` moves to `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.len {
            return Err(Error::param("permutation length differs from word length"));
        }
        Self::from_support(self.len, self.support().map(|i| perm[i]))
    }

    pub fn hamming_distance(&self, other: &Self) -> Result<usize> {
        self.check_same_len(other)?;
        Ok((self.bits ^ other.bits).count_ones() as usize)
    }

    fn check_same_len(&self, other: &Self) -> Result<()> {
        if self.len == other.len {
            Ok(())
        } else {
            Err(Error::param(format!(
                "length mismatch: {} vs {}",
                self.len, other.len
            )))
        }
    }

    /// Words within distance `radius` of `self`, ordered by distance, then by
    /// the lexicographic order of the flipped coordinate sets.
    pub fn ball(&self, radius: usize) -> Result<Vec<Self>> {
        self.check_enumerable()?;
        let radius = radius.min(self.len);
        Ok((0..=radius).flat_map(|w| self.sphere_iter(w)).collect())
    }

    /// Words at distance exactly `radius` from `self`.
    pub fn sphere(&self, radius: usize) -> Result<Vec<Self>> {
        self.check_enumerable()?;
        Ok(self.sphere_iter(radius).collect())
    }

    fn sphere_iter(&self, radius: usize) -> impl Iterator<Item = Self> + '_ {
        Subsets::new(self.len, radius).map(move |m| BinaryWord {
            len: self.len,
            bits: self.bits ^ m,
        })
    }

    fn check_enumerable(&self) -> Result<()> {
        ensure_enumerable(
            &(num_bigint::BigUint::from(1u8) << self.len),
            "binary space",
        )
    }

    /// Every word of `F_2^len`; `len ≤ 24`.
    pub fn all(len: usize) -> Result<impl Iterator<Item = Self>> {
        let zero = Self::zeros(len)?;
        zero.check_enumerable()?;
        Ok((0u128..1u128 << len).map(move |bits| BinaryWord { len, bits }))
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryWord({self})")
    }
}

impl FromStr for BinaryWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut bits = 0u128;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' if i < MAX_LEN => bits |= 1 << i,
                '1' => {}
                _ => {
                    return Err(Error::param(format!(
                        "invalid binary literal {s:?}: unexpected {ch:?}"
                    )))
                }
            }
        }
        Self::from_bits(s.chars().count(), bits)
    }
}

impl Serialize for BinaryWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BinaryWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Hamming distance between two binary words of equal length.
pub fn hamming_distance(a: &BinaryWord, b: &BinaryWord) -> Result<usize> {
    a.hamming_distance(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::combinatorics::binomial;

    fn w(s: &str) -> BinaryWord {
        s.parse().unwrap()
    }

    #[test]
    fn literal_round_trip() {
        let x = w("0110");
        assert_eq!(x.len(), 4);
        assert_eq!(x.weight(), 2);
        assert_eq!(x.support().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(x.to_string(), "0110");
        assert!("01a0".parse::<BinaryWord>().is_err());
        assert!("".parse::<BinaryWord>().is_err());
        assert!(BinaryWord::from_bits(3, 0b1000).is_err());
    }

    #[test]
    fn distances() {
        let x = w("0011");
        assert_eq!(x.hamming_distance(&x).unwrap(), 0);
        assert_eq!(x.hamming_distance(&w("0101")).unwrap(), 2);
        assert_eq!(x.hamming_distance(&x.complement()).unwrap(), 4);
        assert!(matches!(
            x.hamming_distance(&w("011")),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn balls_and_spheres() {
        let zero = BinaryWord::zeros(4).unwrap();
        let ball: Vec<String> = zero
            .ball(1)
            .unwrap()
            .iter()
            .map(|x| x.to_string())
            .collect();
        assert_eq!(ball, ["0000", "1000", "0100", "0010", "0001"]);
        let x = w("10110");
        assert_eq!(x.ball(0).unwrap(), vec![x]);
        assert_eq!(BinaryWord::zeros(5).unwrap().ball(5).unwrap().len(), 32);
        assert_eq!(zero.sphere(2).unwrap().len(), 6);
        assert_eq!(zero.sphere(0).unwrap(), vec![zero]);
        let total: usize = (0..=9)
            .map(|s| BinaryWord::zeros(9).unwrap().sphere(s).unwrap().len())
            .sum();
        assert_eq!(total, 512);
        for s in 0..=9 {
            let n = BinaryWord::zeros(9).unwrap().sphere(s).unwrap().len();
            assert_eq!(num_bigint::BigUint::from(n), binomial(9, s));
        }
    }

    #[test]
    fn enumeration_is_capped() {
        let big = BinaryWord::zeros(25).unwrap();
        assert!(matches!(big.ball(1), Err(Error::Capacity(_))));
        assert!(BinaryWord::zeros(24).unwrap().sphere(1).is_ok());
    }

    #[test]
    fn long_words() {
        let x = BinaryWord::ones(128).unwrap();
        assert_eq!(x.weight(), 128);
        assert_eq!(x.complement().weight(), 0);
        let y: BinaryWord = "1".repeat(128).parse().unwrap();
        assert_eq!(x, y);
        assert!("0".repeat(129).parse::<BinaryWord>().is_err());
    }
}
