//! Seeded simulation of the multi-server proximity retrieval scheme.
//!
//! The user perturbs its record `x` by every codeword of a PPRIC code, after
//! one shared random permutation of the coordinates, and sends each server
//! the ball query `(x + π(z_n), r + s)`. Each server answers with the indices
//! of its records inside that ball; the intersection of the answers is
//! exactly `I(x, r)` when the code is PPRIC.
//!
//! Randomness is ChaCha8 seeded through `SeedableRng::seed_from_u64`, and the
//! permutation is `rand`'s Fisher-Yates `shuffle`, so a transcript is a pure
//! function of its inputs for a fixed lockfile.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::combinatorics::{binomial, low_mask, Ones};
use crate::metric::{BinaryWord, JohnsonWord, QaryWord, Word};
use crate::ppric::{is_ppric, verify_exact, PpricCode};
use crate::schemes::{johnson_verify, JohnsonPpricCode};

/// Records held, identically, by every server. Indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Database<W = BinaryWord> {
    records: Vec<W>,
}

impl<W: Word> Database<W> {
    pub fn new(records: Vec<W>) -> Result<Self> {
        let Some(first) = records.first() else {
            return Err(Error::param("database needs at least one record"));
        };
        for rec in &records[1..] {
            first.distance(rec)?;
        }
        Ok(Database { records })
    }

    pub fn records(&self) -> &[W] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// 1-based indices of the records within `radius` of `center`.
    pub fn within(&self, center: &W, radius: usize) -> Result<BTreeSet<usize>> {
        let mut out = BTreeSet::new();
        for (i, rec) in self.records.iter().enumerate() {
            if center.distance(rec)? <= radius {
                out.insert(i + 1);
            }
        }
        Ok(out)
    }
}

impl Database<BinaryWord> {
    /// One binary literal per line; blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut records = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let word = line
                .parse::<BinaryWord>()
                .map_err(|e| Error::parse(i + 1, e.to_string()))?;
            if let Some(first) = records.first() {
                let first: &BinaryWord = first;
                if first.len() != word.len() {
                    return Err(Error::parse(
                        i + 1,
                        format!("record length {} differs from {}", word.len(), first.len()),
                    ));
                }
            }
            records.push(word);
        }
        Database::new(records)
    }
}

/// A ball query `(y_n, ρ_n)` sent to one server.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Query<W = BinaryWord> {
    pub vector: W,
    pub radius: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolTranscript<W = BinaryWord> {
    pub seed: u64,
    /// Where each coordinate (or, in the Johnson scheme, each point) moved,
    /// 0-based.
    pub permutation: Vec<usize>,
    /// One query per server, in server order.
    pub queries: Vec<Query<W>>,
    pub answers: Vec<BTreeSet<usize>>,
    pub reconstructed: BTreeSet<usize>,
    /// Bits of the record hidden from any single server, per coordinate.
    /// Only the binary scheme has a formula; other schemes report `None`.
    pub privacy_level: Option<f64>,
}

/// The permutation of `0..len` drawn for `seed`.
pub fn shared_permutation(len: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..len).collect();
    perm.shuffle(&mut rng);
    perm
}

fn check_code(code: &PpricCode) -> Result<()> {
    if is_ppric(code) {
        Ok(())
    } else {
        Err(Error::param(format!(
            "code is not PPRIC at {}",
            code.params()
        )))
    }
}

/// Queries for user record `x`, after checking that `code` is PPRIC.
pub fn generate_queries(x: &BinaryWord, code: &PpricCode, seed: u64) -> Result<Vec<Query>> {
    check_code(code)?;
    generate_queries_unverified(x, code, seed)
}

/// [`generate_queries`] for a code the caller vouches for (or deliberately
/// wants to misuse).
pub fn generate_queries_unverified(
    x: &BinaryWord,
    code: &PpricCode,
    seed: u64,
) -> Result<Vec<Query>> {
    binary_queries(x, code, &shared_permutation(code.params().l, seed))
}

fn binary_queries(x: &BinaryWord, code: &PpricCode, perm: &[usize]) -> Result<Vec<Query>> {
    let p = code.params();
    if x.len() != p.l {
        return Err(Error::param(format!(
            "record length {} differs from code length {}",
            x.len(),
            p.l
        )));
    }
    code.codewords()
        .iter()
        .map(|z| {
            Ok(Query {
                vector: x.xor(&z.permute(perm)?)?,
                radius: p.r + p.s,
            })
        })
        .collect()
}

/// `{m : d(y_n, x_m) ≤ ρ_n}`.
pub fn server_answer<W: Word>(db: &Database<W>, query: &Query<W>) -> Result<BTreeSet<usize>> {
    db.within(&query.vector, query.radius)
}

/// Intersection of all answer sets.
pub fn reconstruct(answers: &[BTreeSet<usize>]) -> Result<BTreeSet<usize>> {
    let (first, rest) = answers
        .split_first()
        .ok_or_else(|| Error::param("reconstruction needs at least one answer"))?;
    Ok(rest.iter().fold(first.clone(), |acc, a| &acc & a))
}

/// `log2(C(L, s)) / L`, from the exact binomial.
pub fn privacy_level(l: usize, s: usize) -> f64 {
    if l == 0 || s > l {
        return 0.0;
    }
    let b = binomial(l, s);
    // keep the leading 64 bits so the conversion never overflows f64
    let shift = b.bits().saturating_sub(64);
    let top: BigUint = &b >> shift;
    (top.to_f64().unwrap_or(f64::INFINITY).log2() + shift as f64) / l as f64
}

/// Answers every query against an isolated copy of the server logic, then
/// intersects. Answers are kept in server order whatever the completion order.
fn answer_all<W: Word>(
    db: &Database<W>,
    queries: &[Query<W>],
) -> Result<(Vec<BTreeSet<usize>>, BTreeSet<usize>)> {
    let answers = queries
        .par_iter()
        .map(|q| server_answer(db, q))
        .collect::<Result<Vec<_>>>()?;
    let reconstructed = reconstruct(&answers)?;
    Ok((answers, reconstructed))
}

fn check_radius(r: usize, code_r: usize) -> Result<()> {
    if r != code_r {
        return Err(Error::param(format!(
            "search radius {r} differs from the code's r = {code_r}"
        )));
    }
    Ok(())
}

/// End-to-end run for user record `x` and search radius `r`.
pub fn run_simulation(
    db: &Database,
    x: &BinaryWord,
    r: usize,
    code: &PpricCode,
    seed: u64,
) -> Result<ProtocolTranscript> {
    check_code(code)?;
    run_simulation_unverified(db, x, r, code, seed)
}

/// [`run_simulation`] without the PPRIC check.
pub fn run_simulation_unverified(
    db: &Database,
    x: &BinaryWord,
    r: usize,
    code: &PpricCode,
    seed: u64,
) -> Result<ProtocolTranscript> {
    let p = code.params();
    check_radius(r, p.r)?;
    let permutation = shared_permutation(p.l, seed);
    let queries = binary_queries(x, code, &permutation)?;
    let (answers, reconstructed) = answer_all(db, &queries)?;
    Ok(ProtocolTranscript {
        seed,
        permutation,
        queries,
        answers,
        reconstructed,
        privacy_level: Some(privacy_level(p.l, p.s)),
    })
}

/// `I(x, r)` computed directly.
pub fn ground_truth<W: Word>(db: &Database<W>, x: &W, r: usize) -> Result<BTreeSet<usize>> {
    db.within(x, r)
}

/// The binary code over `{0..q-1}`: queries are `x + π(z_n)` with each
/// codeword's ones read as the symbol 1. The binary PPRIC check suffices
/// because a binary PPRIC code stays PPRIC over any larger alphabet.
pub fn run_qary_simulation(
    db: &Database<QaryWord>,
    x: &QaryWord,
    code: &PpricCode,
    seed: u64,
) -> Result<ProtocolTranscript<QaryWord>> {
    check_code(code)?;
    let p = code.params();
    if x.len() != p.l {
        return Err(Error::param(format!(
            "record length {} differs from code length {}",
            x.len(),
            p.l
        )));
    }
    let permutation = shared_permutation(p.l, seed);
    let queries = code
        .codewords()
        .iter()
        .map(|z| {
            let z = QaryWord::from_binary(x.q(), &z.permute(&permutation)?)?;
            Ok(Query {
                vector: x.add(&z)?,
                radius: p.r + p.s,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (answers, reconstructed) = answer_all(db, &queries)?;
    Ok(ProtocolTranscript {
        seed,
        permutation,
        queries,
        answers,
        reconstructed,
        privacy_level: None,
    })
}

/// Johnson-scheme run: a random point permutation maps the code's center
/// onto `x`, built from two independent shuffles, one matching the center's
/// points to `x`'s and one matching the complements. Queries are the images
/// of the codewords with radius `r + s`.
pub fn run_johnson_simulation(
    db: &Database<JohnsonWord>,
    x: &JohnsonWord,
    code: &JohnsonPpricCode,
    seed: u64,
) -> Result<ProtocolTranscript<JohnsonWord>> {
    if !johnson_verify(code)?.is_ppric {
        return Err(Error::param("code is not PPRIC over the Johnson scheme"));
    }
    let n = code.n();
    if x.n() != n || x.size() != code.l() {
        return Err(Error::param(format!(
            "record must be a {}-subset of {n} points",
            code.l()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let center = code.center().mask();
    let mut inside: Vec<usize> = Ones(x.mask()).collect();
    inside.shuffle(&mut rng);
    let mut outside: Vec<usize> = Ones(!x.mask() & low_mask(n)).collect();
    outside.shuffle(&mut rng);
    let (mut a, mut b) = (inside.into_iter(), outside.into_iter());
    let permutation: Vec<usize> = (0..n)
        .map(|i| {
            if center >> i & 1 == 1 {
                a.next()
            } else {
                b.next()
            }
            .expect("sizes match")
        })
        .collect();
    let queries = code
        .codewords()
        .iter()
        .map(|v| {
            let image = Ones(v.mask()).fold(0u128, |m, i| m | 1 << permutation[i]);
            Ok(Query {
                vector: JohnsonWord::from_mask(n, image)?,
                radius: code.r() + code.s(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (answers, reconstructed) = answer_all(db, &queries)?;
    Ok(ProtocolTranscript {
        seed,
        permutation,
        queries,
        answers,
        reconstructed,
        privacy_level: None,
    })
}

/// A database and user record on which a non-PPRIC code reconstructs a
/// record outside `B(x, r)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FalsePositive {
    pub db: Database,
    pub x: BinaryWord,
    pub transcript: ProtocolTranscript,
    pub truth: BTreeSet<usize>,
}

/// For a code that fails verification: the user holds `x = 0` and the only
/// record is the verifier's violator moved by the run's permutation. That
/// record lies within `r + s` of every query yet farther than `r` from `x`.
/// `None` for a PPRIC code.
pub fn false_positive(code: &PpricCode, seed: u64) -> Result<Option<FalsePositive>> {
    let Some(y) = verify_exact(code).violator else {
        return Ok(None);
    };
    let p = code.params();
    let x = BinaryWord::zeros(p.l)?;
    let db = Database::new(vec![y.permute(&shared_permutation(p.l, seed))?])?;
    let transcript = run_simulation_unverified(&db, &x, p.r, code, seed)?;
    let truth = ground_truth(&db, &x, p.r)?;
    Ok(Some(FalsePositive {
        db,
        x,
        transcript,
        truth,
    }))
}
