use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::combinatorics::{ensure_enumerable, Ones, Subsets};
use crate::error::{Error, Result};

/// A word over the alphabet `{0..q-1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QaryWord {
    q: u16,
    symbols: Vec<u8>,
}

impl QaryWord {
    pub fn new(q: u16, symbols: Vec<u8>) -> Result<Self> {
        if !(2..=256).contains(&q) {
            return Err(Error::param(format!(
                "alphabet size must be in 2..=256, got {q}"
            )));
        }
        if symbols.is_empty() {
            return Err(Error::param("q-ary word must have length at least 1"));
        }
        if let Some(bad) = symbols.iter().find(|&&x| u16::from(x) >= q) {
            return Err(Error::param(format!(
                "symbol {bad} outside alphabet of size {q}"
            )));
        }
        Ok(QaryWord { q, symbols })
    }

    pub fn zeros(q: u16, len: usize) -> Result<Self> {
        Self::new(q, vec![0; len])
    }

    /// Parses comma-separated digits such as `"0,2,1"`.
    pub fn parse(q: u16, text: &str) -> Result<Self> {
        let symbols = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u8>()
                    .map_err(|_| Error::param(format!("invalid q-ary symbol {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(q, symbols)
    }

    /// Lifts a binary word into the `q`-ary space.
    pub fn from_binary(q: u16, word: &super::BinaryWord) -> Result<Self> {
        Self::new(q, (0..word.len()).map(|i| u8::from(word.get(i))).collect())
    }

    pub fn q(&self) -> u16 {
        self.q
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    /// Number of nonzero symbols.
    pub fn weight(&self) -> usize {
        self.symbols.iter().filter(|&&x| x != 0).count()
    }

    /// Coordinatewise sum modulo `q`.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let q = self.q;
        let symbols = self
            .symbols
            .iter()
            .zip(&other.symbols)
            .map(|(&a, &b)| ((u16::from(a) + u16::from(b)) % q) as u8)
            .collect();
        Ok(QaryWord { q, symbols })
    }

    pub fn hamming_distance(&self, other: &Self) -> Result<usize> {
        self.check_compatible(other)?;
        Ok(self
            .symbols
            .iter()
            .zip(&other.symbols)
            .filter(|(a, b)| a != b)
            .count())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.q != other.q {
            return Err(Error::param(format!(
                "alphabet mismatch: {} vs {}",
                self.q, other.q
            )));
        }
        if self.len() != other.len() {
            return Err(Error::param(format!(
                "length mismatch: {} vs {}",
                self.len(),
                other.len()
            )));
        }
        Ok(())
    }

    pub(crate) fn check_space(q: u16, len: usize) -> Result<()> {
        ensure_enumerable(&BigUint::from(q).pow(len as u32), "q-ary space")
    }

    /// Words at distance exactly `radius` from `self`.
    pub fn sphere(&self, radius: usize) -> Result<Vec<Self>> {
        Self::check_space(self.q, self.len())?;
        let mut out = Vec::new();
        for positions in Subsets::new(self.len(), radius) {
            let pos: Vec<usize> = Ones(positions).collect();
            // odometer over the q-1 alternative symbols at each chosen position
            let mut digits = vec![1u16; pos.len()];
            loop {
                let mut symbols = self.symbols.clone();
                for (&p, &d) in pos.iter().zip(&digits) {
                    symbols[p] = ((u16::from(symbols[p]) + d) % self.q) as u8;
                }
                out.push(QaryWord { q: self.q, symbols });
                let mut i = 0;
                while i < digits.len() && digits[i] == self.q - 1 {
                    digits[i] = 1;
                    i += 1;
                }
                if i == digits.len() {
                    break;
                }
                digits[i] += 1;
            }
        }
        Ok(out)
    }

    /// Words within distance `radius` of `self`.
    pub fn ball(&self, radius: usize) -> Result<Vec<Self>> {
        let mut out = Vec::new();
        for w in 0..=radius.min(self.len()) {
            out.extend(self.sphere(w)?);
        }
        Ok(out)
    }

    /// Every word of the space, in lexicographic order.
    pub fn all(q: u16, len: usize) -> Result<Vec<Self>> {
        let zero = Self::zeros(q, len)?;
        Self::check_space(q, len)?;
        let total: usize = (q as usize).pow(len as u32);
        let mut out = Vec::with_capacity(total);
        let mut cur = zero.symbols;
        loop {
            out.push(QaryWord {
                q,
                symbols: cur.clone(),
            });
            let mut i = len;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                if u16::from(cur[i]) + 1 < q {
                    cur[i] += 1;
                    break;
                }
                cur[i] = 0;
            }
        }
    }
}

impl fmt::Display for QaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for QaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QaryWord(q={}, {self})", self.q)
    }
}

/// Number of `q`-ary words within distance `radius` of a point.
pub fn qary_ball_size(q: u16, len: usize, radius: usize) -> BigUint {
    let mut total = BigUint::from(0u8);
    let mut pow = BigUint::one();
    for i in 0..=radius.min(len) {
        total += super::combinatorics::binomial(len, i) * &pow;
        pow *= q - 1;
    }
    total
}
