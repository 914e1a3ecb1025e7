//! Exact integer combinatorics and subset enumeration.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Enumerations touching more than `2^ENUMERATION_LIMIT_LOG2` objects are refused.
pub const ENUMERATION_LIMIT_LOG2: u32 = 24;

/// Exact binomial coefficient; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Binomial coefficient as `u128`; `None` on overflow.
pub fn binomial_u128(n: usize, k: usize) -> Option<u128> {
    binomial(n, k).to_u128()
}

/// Number of binary words of length `len` within Hamming distance `radius` of a point.
pub fn ball_size(len: usize, radius: usize) -> Result<BigUint> {
    if radius > len {
        return Err(Error::param(format!(
            "ball radius {radius} exceeds word length {len}"
        )));
    }
    Ok((0..=radius).map(|i| binomial(len, i)).sum())
}

/// True when `count` objects fit under the enumeration limit.
pub fn within_enumeration_limit(count: &BigUint) -> bool {
    count <= &(BigUint::one() << ENUMERATION_LIMIT_LOG2)
}

pub(crate) fn ensure_enumerable(count: &BigUint, what: &str) -> Result<()> {
    if within_enumeration_limit(count) {
        Ok(())
    } else {
        Err(Error::capacity(format!(
            "{what} has {count} elements, above the 2^{ENUMERATION_LIMIT_LOG2} enumeration limit"
        )))
    }
}

/// `k`-subsets of `{0..n}` as bit masks, in lexicographic order of their sorted
/// element lists (`{0,1,2}`, `{0,1,3}`, ...).
#[derive(Debug, Clone)]
pub struct Subsets {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Subsets {
    pub fn new(n: usize, k: usize) -> Self {
        assert!(n <= 128, "subset enumeration supports at most 128 points");
        Subsets {
            n,
            idx: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Subsets {
    type Item = u128;

    fn next(&mut self) -> Option<u128> {
        if self.done {
            return None;
        }
        let mask = self.idx.iter().fold(0u128, |m, &i| m | (1u128 << i));
        let k = self.idx.len();
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(mask)
    }
}

/// Iterator over the set bits of a mask, lowest first.
#[derive(Debug, Clone, Copy)]
pub struct Ones(pub u128);

impl Iterator for Ones {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let i = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(i)
        }
    }
}

/// Mask with the low `n` bits set.
pub fn low_mask(n: usize) -> u128 {
    match n {
        0 => 0,
        128 => u128::MAX,
        _ => (1u128 << n) - 1,
    }
}

pub(crate) fn ceil_div(a: &BigUint, b: &BigUint) -> BigUint {
    (a + b - BigUint::one()) / b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_binomials() {
        assert_eq!(binomial(4, 2), BigUint::from(6u32));
        assert_eq!(binomial(17, 8), BigUint::from(24310u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        for n in 1..=128 {
            for k in 1..n {
                assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
            }
        }
        assert!(binomial_u128(128, 64).is_some());
    }

    #[test]
    fn ball_sizes() {
        assert_eq!(ball_size(9, 0).unwrap(), BigUint::one());
        assert_eq!(ball_size(5, 1).unwrap(), BigUint::from(6u32));
        assert_eq!(ball_size(4, 4).unwrap(), BigUint::from(16u32));
        assert!(matches!(ball_size(3, 4), Err(Error::Parameter(_))));
    }

    #[test]
    fn subsets_are_lexicographic_and_complete() {
        let all: Vec<Vec<usize>> = Subsets::new(5, 3).map(|m| Ones(m).collect()).collect();
        assert_eq!(all.len(), 10);
        assert_eq!(all[0], vec![0, 1, 2]);
        assert_eq!(all[1], vec![0, 1, 3]);
        assert_eq!(all[9], vec![2, 3, 4]);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        assert_eq!(Subsets::new(4, 0).count(), 1);
        assert_eq!(Subsets::new(3, 4).count(), 0);
    }

    #[test]
    fn enumeration_limit() {
        assert!(within_enumeration_limit(&(BigUint::one() << 24)));
        assert!(!within_enumeration_limit(&((BigUint::one() << 24) + 1u32)));
    }
}
