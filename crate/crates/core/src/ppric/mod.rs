//! PPRIC codes: sets `C` of weight-`s` words with `B(0,r) = ⋂_{c∈C} B(c, r+s)`.

pub mod multihit;
pub(crate) mod verify;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{BinaryWord, SchemeParams, MAX_LEN};

pub use multihit::{min_multihit, Multihit, MultihitOptions};
pub use verify::{
    full_sphere_identity_holds, is_ppric, min_multihit_weight, mippr_min_weight,
    verify_enumeration, verify_exact, verify_exact_within, Verdict,
};

/// A candidate PPRIC code: parameters plus distinct weight-`s` codewords.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CodeDoc", into = "CodeDoc")]
pub struct PpricCode {
    params: SchemeParams,
    codewords: Vec<BinaryWord>,
}

/// JSON interchange form.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct CodeDoc {
    #[serde(rename = "L")]
    l: usize,
    s: usize,
    r: usize,
    codewords: Vec<BinaryWord>,
}

impl TryFrom<CodeDoc> for PpricCode {
    type Error = Error;

    fn try_from(doc: CodeDoc) -> Result<Self> {
        PpricCode::new(SchemeParams::new(doc.l, doc.s, doc.r)?, doc.codewords)
    }
}

impl From<PpricCode> for CodeDoc {
    fn from(code: PpricCode) -> Self {
        CodeDoc {
            l: code.params.l,
            s: code.params.s,
            r: code.params.r,
            codewords: code.codewords,
        }
    }
}

impl PpricCode {
    /// Validates admissibility, lengths, weights and distinctness. Codeword
    /// order is preserved.
    pub fn new(params: SchemeParams, codewords: Vec<BinaryWord>) -> Result<Self> {
        params.check()?;
        let mut seen = HashSet::new();
        for (i, c) in codewords.iter().enumerate() {
            if c.len() != params.l {
                return Err(Error::param(format!(
                    "codeword {} has length {}, expected {}",
                    i + 1,
                    c.len(),
                    params.l
                )));
            }
            if c.weight() != params.s {
                return Err(Error::param(format!(
                    "codeword {} has weight {}, expected {}",
                    i + 1,
                    c.weight(),
                    params.s
                )));
            }
            if !seen.insert(*c) {
                return Err(Error::param(format!("codeword {} repeated: {c}", i + 1)));
            }
        }
        Ok(PpricCode { params, codewords })
    }

    /// Builds a code from support masks (bit `i` = coordinate `i + 1`).
    pub fn from_masks(params: SchemeParams, masks: &[u128]) -> Result<Self> {
        let words = masks
            .iter()
            .map(|&m| BinaryWord::from_bits(params.l, m))
            .collect::<Result<Vec<_>>>()?;
        Self::new(params, words)
    }

    pub fn params(&self) -> SchemeParams {
        self.params
    }

    pub fn codewords(&self) -> &[BinaryWord] {
        &self.codewords
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn masks(&self) -> Vec<u128> {
        self.codewords.iter().map(|c| c.bits()).collect()
    }

    /// The same code read with another search radius.
    pub fn with_radius(&self, r: usize) -> Result<Self> {
        Self::new(
            SchemeParams::new(self.params.l, self.params.s, r)?,
            self.codewords.clone(),
        )
    }

    /// Appends one zero coordinate to every codeword: an `(L+1, s, r)` code.
    pub fn pad_coordinate(&self) -> Result<Self> {
        self.pad(1)
    }

    /// Appends `extra` zero coordinates.
    pub fn pad(&self, extra: usize) -> Result<Self> {
        let p = self.params;
        if p.l + extra > MAX_LEN {
            return Err(Error::capacity(format!(
                "padded length {} exceeds {MAX_LEN}",
                p.l + extra
            )));
        }
        let words = self
            .codewords
            .iter()
            .map(|c| c.extend(extra))
            .collect::<Result<Vec<_>>>()?;
        Self::new(SchemeParams::new(p.l + extra, p.s, p.r)?, words)
    }

    /// Replaces every coordinate by a run of `alpha` copies: an `(αL, αs, r)` code.
    pub fn scale(&self, alpha: usize) -> Result<Self> {
        if alpha == 0 {
            return Err(Error::param("scale factor must be at least 1"));
        }
        let p = self.params;
        let l = p.l * alpha;
        if l > MAX_LEN {
            return Err(Error::capacity(format!(
                "scaled length {l} exceeds {MAX_LEN}"
            )));
        }
        let words = self
            .codewords
            .iter()
            .map(|c| {
                BinaryWord::from_support(l, c.support().flat_map(|i| i * alpha..(i + 1) * alpha))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(SchemeParams::new(l, p.s * alpha, p.r)?, words)
    }

    /// Complements of the supports, as `(L-s)`-subsets of `{0..L}` in bit-mask form.
    pub fn complement_supports(&self) -> Vec<u128> {
        self.codewords
            .iter()
            .map(|c| c.complement().bits())
            .collect()
    }
}

/// Functional alias of [`PpricCode::pad_coordinate`].
pub fn pad_coordinate(code: &PpricCode) -> Result<PpricCode> {
    code.pad_coordinate()
}

/// Functional alias of [`PpricCode::scale`].
pub fn scale_code(code: &PpricCode, alpha: usize) -> Result<PpricCode> {
    code.scale(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn code(l: usize, s: usize, r: usize, words: &[&str]) -> PpricCode {
        PpricCode::new(
            SchemeParams::new(l, s, r).unwrap(),
            words.iter().map(|w| w.parse().unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn validation() {
        let p = SchemeParams::new(6, 2, 0).unwrap();
        let w = |s: &str| s.parse::<BinaryWord>().unwrap();
        assert!(PpricCode::new(p, vec![w("110000"), w("110000")]).is_err());
        assert!(PpricCode::new(p, vec![w("111000")]).is_err());
        assert!(PpricCode::new(p, vec![w("11000")]).is_err());
        assert!(PpricCode::new(p, vec![]).is_ok());
    }

    #[test]
    fn json_round_trip() {
        let c = code(6, 2, 0, &["110000", "001100", "000011"]);
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(
            json,
            r#"{"L":6,"s":2,"r":0,"codewords":["110000","001100","000011"]}"#
        );
        let back: PpricCode = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
        assert!(
            serde_json::from_str::<PpricCode>(r#"{"L":5,"s":2,"r":1,"codewords":[]}"#).is_err()
        );
    }

    #[test]
    fn transforms() {
        let c = code(6, 2, 0, &["110000", "001100", "000011"]);
        let p = c.pad_coordinate().unwrap();
        assert_eq!(p.params(), SchemeParams::new(7, 2, 0).unwrap());
        assert_eq!(p.codewords()[0].to_string(), "1100000");
        assert_eq!(p.len(), 3);
        let s = c.scale(2).unwrap();
        assert_eq!(s.params(), SchemeParams::new(12, 4, 0).unwrap());
        assert_eq!(s.codewords()[1].to_string(), "000011110000");
        assert_eq!(c.scale(1).unwrap(), c);
        assert!(matches!(c.scale(0), Err(Error::Parameter(_))));
    }
}
