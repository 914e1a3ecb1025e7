use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use ppric::bounds::{compute_report, exact_n_item};
use ppric::construct::{feasible_recipes, Recipe};
use ppric::covering::{
    exact_covering_number_within, known, parse_design, schoenheim_bound, verify_covering,
    CoveringDesign,
};
use ppric::metric::combinatorics::binomial;
use ppric::ppric::{verify_enumeration, verify_exact_within};
use ppric::protocol::{
    ground_truth, run_johnson_simulation, run_qary_simulation, run_simulation,
    run_simulation_unverified, Database,
};
use ppric::schemes::{
    johnson_construction, johnson_exact_check, johnson_verify, product_covering_code, qary_verify,
    verify_johnson_covering, JohnsonPpricCode,
};
use ppric::search::{
    conjecture_probe, exact_n_search_with, minimal_codes_enumerate, SearchOptions,
    SEARCH_MAX_CANDIDATES,
};
use ppric::{BinaryWord, Error, JohnsonWord, PpricCode, QaryWord, SchemeParams};

#[derive(Parser)]
#[command(
    name = "ppric",
    version,
    about = "Construct, verify, bound and search PPRIC codes"
)]
struct Cli {
    /// Indented JSON instead of a single line.
    #[arg(long, global = true)]
    pretty: bool,
    /// Worker threads for search and verification (default: one per core).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Triple {
    #[arg(long = "L")]
    l: usize,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    r: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Check a code; exits 1 when it is not PPRIC.
    Verify {
        #[arg(long)]
        code: PathBuf,
        /// Scan all of {0,1}^L instead of the multihitting-set verifier.
        #[arg(long)]
        enumerate: bool,
        /// Check the code read over the alphabet {0..q-1}, by enumeration.
        #[arg(long)]
        q: Option<u16>,
        /// Give up with exit 3 after this many seconds.
        #[arg(long)]
        timeout: Option<f64>,
    },
    /// Build a code from a recipe file, or the smallest buildable recipe at (L, s, r).
    Construct {
        #[command(flatten)]
        params: Option<Triple>,
        #[arg(long, conflicts_with_all = ["l", "s", "r"])]
        recipe: Option<PathBuf>,
        /// List the feasible recipes and their sizes instead of building.
        #[arg(long)]
        list: bool,
    },
    /// Lower bounds, construction upper bounds and the exact value where known.
    Bounds {
        #[command(flatten)]
        params: Triple,
    },
    /// The exact N(L, s, r) when a closed-form regime applies.
    ExactN {
        #[command(flatten)]
        params: Triple,
    },
    /// Exhaustive search for N(L, s, r) with a witness.
    Search {
        #[command(flatten)]
        params: Triple,
        /// Largest size to try.
        #[arg(long, default_value_t = 64)]
        cap: usize,
        /// Prune branches equivalent under coordinate permutations.
        #[arg(long)]
        symmetry: bool,
        /// Exit 3 after roughly this many search nodes.
        #[arg(long)]
        node_limit: Option<u64>,
        /// List every code of this size containing {1..s} instead.
        #[arg(long, conflicts_with = "probe")]
        minimal: Option<usize>,
        /// Report MIPPR weights over all minimum codes.
        #[arg(long)]
        probe: bool,
    },
    /// CSV table of bounds and search values over a grid.
    Sweep {
        /// Inclusive range such as 5..10, or a single value.
        #[arg(long = "L")]
        l: String,
        #[arg(long)]
        s: String,
        #[arg(long)]
        r: String,
        /// Node limit per triple; rows over it are marked "budget".
        #[arg(long, default_value_t = 2_000_000)]
        node_limit: u64,
        /// Skip the search column.
        #[arg(long)]
        no_search: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the retrieval protocol once and compare with direct computation.
    Simulate {
        /// Binary code JSON, or a Johnson code JSON with --johnson.
        #[arg(long)]
        code: PathBuf,
        /// One record per line, in the same notation as --x.
        #[arg(long)]
        db: PathBuf,
        /// The user's record.
        #[arg(long)]
        x: String,
        /// Search radius (defaults to the code's).
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Records and --x are comma-separated symbols over {0..q-1}.
        #[arg(long, conflicts_with = "johnson")]
        q: Option<u16>,
        /// The code and records live in the Johnson scheme; words are like {1,4,5}.
        #[arg(long)]
        johnson: bool,
        /// Skip the PPRIC check (for demonstrating failures).
        #[arg(long)]
        unverified: bool,
    },
    /// Covering designs.
    #[command(subcommand)]
    Covering(CoveringCmd),
    /// Johnson-scheme codes and covering codes.
    #[command(subcommand)]
    Johnson(JohnsonCmd),
}

#[derive(Subcommand)]
enum CoveringCmd {
    /// Check that a design covers every t-subset; exits 1 when not.
    Verify {
        #[arg(long)]
        design: PathBuf,
    },
    /// c(n, k, t) with a minimum design.
    Exact {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        node_limit: Option<u64>,
    },
    /// Print a stored design: 9-5-2, 4-2-2 or fano.
    Known { name: String },
}

#[derive(Subcommand)]
enum JohnsonCmd {
    /// The 2r+3 codeword construction centered at x (default {1..L}).
    Construct {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        params: Triple,
        #[arg(long)]
        x: Option<String>,
    },
    /// Enumeration check of a Johnson code; exits 1 when not PPRIC.
    Verify {
        #[arg(long)]
        code: PathBuf,
    },
    /// Confirm that no code smaller than 2r+3 exists; exits 1 otherwise.
    Exact {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        params: Triple,
    },
    /// Product of two covering designs, checked over the Johnson scheme.
    Product {
        #[arg(long, num_args = 2, required = true)]
        design: Vec<PathBuf>,
    },
}

enum Failure {
    Core(Error),
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn status(&self) -> u8 {
        match self {
            Failure::Core(Error::Capacity(_) | Error::Budget(_)) => 3,
            _ => 2,
        }
    }

    fn json(&self) -> Value {
        let (kind, reason) = match self {
            Failure::Core(e) => (e.kind(), e.to_string()),
            Failure::Usage(m) => ("usage", m.clone()),
            Failure::Io(m) => ("io", m.clone()),
        };
        json!({ "error": kind, "reason": reason })
    }
}

/// What a verb produced: a document plus whether a predicate came out false.
enum Output {
    Json(Value, bool),
    Text(String),
}

type Outcome = Result<Output, Failure>;

fn ok<T: Serialize>(v: &T) -> Outcome {
    verdict(v, true)
}

fn verdict<T: Serialize>(v: &T, holds: bool) -> Outcome {
    let value = serde_json::to_value(v).map_err(|e| Failure::Io(e.to_string()))?;
    Ok(Output::Json(value, holds))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| {
        let reason = e.to_string();
        // serde_json wraps our own validation errors; keep their kind
        if reason.contains("parameter error") {
            Failure::Core(Error::Parameter(reason))
        } else {
            Failure::Core(Error::Parse {
                line: e.line(),
                message: reason,
            })
        }
    })
}

fn deadline(secs: Option<f64>) -> Result<Option<Instant>, Failure> {
    match secs {
        None => Ok(None),
        Some(s) if s.is_finite() && s >= 0.0 => {
            Ok(Some(Instant::now() + Duration::from_secs_f64(s)))
        }
        Some(s) => Err(Failure::Usage(format!("invalid timeout {s}"))),
    }
}

fn parse_range(text: &str) -> Result<Vec<usize>, Failure> {
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| Failure::Usage(format!("invalid range {text:?}")))
    };
    match text.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
            if a > b {
                return Err(Failure::Usage(format!("empty range {text:?}")));
            }
            Ok((a..=b).collect())
        }
        None => Ok(vec![num(text)?]),
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Verify {
            code,
            enumerate,
            q,
            timeout,
        } => {
            let code: PpricCode = read_json(&code)?;
            if let Some(q) = q {
                let v = qary_verify(&code, q)?;
                return verdict(&v, v.is_ppric);
            }
            let v = if enumerate {
                verify_enumeration(&code)?
            } else {
                verify_exact_within(&code, deadline(timeout)?)?
            };
            verdict(&v, v.is_ppric)
        }
        Command::Construct {
            params,
            recipe,
            list,
        } => {
            if let Some(path) = recipe {
                let recipe: Recipe = read_json(&path)?;
                recipe.check_symbolic()?;
                return ok(&recipe.build()?);
            }
            let Some(p) = params else {
                return Err(Failure::Usage(
                    "construct needs --recipe or --L --s --r".into(),
                ));
            };
            SchemeParams::new(p.l, p.s, p.r)?;
            let mut recipes = feasible_recipes(p.l, p.s, p.r);
            recipes.sort_by_key(|r| r.size());
            if list {
                let rows: Vec<Value> = recipes
                    .iter()
                    .map(|r| json!({ "rule": r.rule_name(), "size": r.size(), "recipe": r }))
                    .collect();
                return ok(&rows);
            }
            let mut last = None;
            for recipe in &recipes {
                match recipe.build() {
                    Ok(code) => return ok(&code),
                    Err(e) => last = Some(e),
                }
            }
            Err(last
                .unwrap_or_else(|| {
                    Error::Parameter(format!(
                        "no construction applies at (L={}, s={}, r={})",
                        p.l, p.s, p.r
                    ))
                })
                .into())
        }
        Command::Bounds { params: p } => ok(&compute_report(p.l, p.s, p.r)?),
        Command::ExactN { params: p } => {
            let hit = exact_n_item(p.l, p.s, p.r)?;
            ok(&json!({
                "L": p.l, "s": p.s, "r": p.r,
                "exact": hit.map(|h| h.1),
                "item": hit.map(|h| h.0),
            }))
        }
        Command::Search {
            params: p,
            cap,
            symmetry,
            node_limit,
            minimal,
            probe,
        } => {
            if let Some(m) = minimal {
                return ok(&minimal_codes_enumerate(p.l, p.s, p.r, m)?);
            }
            if probe {
                return ok(&conjecture_probe(p.l, p.s, p.r)?);
            }
            let opts = SearchOptions {
                symmetry,
                node_limit,
            };
            ok(&exact_n_search_with(p.l, p.s, p.r, cap, opts)?)
        }
        Command::Sweep {
            l,
            s,
            r,
            node_limit,
            no_search,
            out,
        } => {
            let csv = sweep(
                &parse_range(&l)?,
                &parse_range(&s)?,
                &parse_range(&r)?,
                node_limit,
                !no_search,
            )?;
            match out {
                Some(path) => {
                    fs::write(&path, &csv)
                        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
                    ok(&json!({ "written": path.display().to_string() }))
                }
                None => Ok(Output::Text(csv)),
            }
        }
        Command::Simulate {
            code,
            db,
            x,
            r,
            seed,
            q,
            johnson,
            unverified,
        } => simulate(&code, &db, &x, r, seed, q, johnson, unverified),
        Command::Covering(cmd) => covering(cmd),
        Command::Johnson(cmd) => johnson(cmd),
    }
}

#[derive(Serialize)]
struct SweepRow {
    #[serde(rename = "L")]
    l: usize,
    s: usize,
    r: usize,
    lower: usize,
    upper: Option<u128>,
    upper_rule: Option<String>,
    exact: Option<usize>,
    exact_rule: Option<String>,
    search: Option<usize>,
    search_status: &'static str,
    lower_ok: Option<bool>,
    upper_ok: Option<bool>,
    exact_ok: Option<bool>,
}

fn sweep(
    ls: &[usize],
    ss: &[usize],
    rs: &[usize],
    node_limit: u64,
    search: bool,
) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for &l in ls {
        for &s in ss {
            for &r in rs {
                if s == 0 || !SchemeParams::unchecked(l, s, r).is_ok_and(|p| p.is_admissible()) {
                    continue;
                }
                let rep = compute_report(l, s, r)?;
                let best = rep.best_recipe();
                let (value, status) = if !search {
                    (None, "skipped")
                } else if binomial(l, s) > SEARCH_MAX_CANDIDATES.into() {
                    (None, "capacity")
                } else {
                    let opts = SearchOptions {
                        symmetry: true,
                        node_limit: Some(node_limit),
                    };
                    let cap = rep
                        .best_upper
                        .map_or(usize::MAX, |u| u.min(usize::MAX as u128) as usize);
                    match exact_n_search_with(l, s, r, cap, opts) {
                        Ok(res) => (Some(res.n_exact), "ok"),
                        Err(Error::Budget(_)) => (None, "budget"),
                        Err(Error::Capacity(_)) => (None, "capacity"),
                        Err(e) => return Err(e.into()),
                    }
                };
                let row = SweepRow {
                    l,
                    s,
                    r,
                    lower: rep.best_lower,
                    upper: rep.best_upper,
                    upper_rule: best.map(|b| b.rule_name()),
                    exact: rep.exact,
                    exact_rule: rep.exact_rule.clone(),
                    search: value,
                    search_status: status,
                    lower_ok: value.map(|n| rep.best_lower <= n),
                    upper_ok: value.and_then(|n| rep.best_upper.map(|u| n as u128 <= u)),
                    exact_ok: value.and_then(|n| rep.exact.map(|e| e == n)),
                };
                w.serialize(row).map_err(|e| Failure::Io(e.to_string()))?;
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::Io(e.to_string()))
}

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn with_line<T>(line: usize, r: ppric::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| {
        Failure::Core(Error::Parse {
            line,
            message: e.to_string(),
        })
    })
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    code: &Path,
    db: &Path,
    x: &str,
    r: Option<usize>,
    seed: u64,
    q: Option<u16>,
    johnson: bool,
    unverified: bool,
) -> Outcome {
    let db_text = read(db)?;
    let report = |t: Value, truth: &BTreeSet<usize>, rec: &BTreeSet<usize>| {
        let exact = truth == rec;
        verdict(
            &json!({ "transcript": t, "ground_truth": truth, "exact": exact }),
            exact,
        )
    };
    if johnson {
        let code: JohnsonPpricCode = read_json(code)?;
        let n = code.n();
        let records = lines(&db_text)
            .map(|(i, l)| with_line(i, JohnsonWord::parse(n, l)))
            .collect::<Result<Vec<_>, _>>()?;
        let db = Database::new(records)?;
        let x = JohnsonWord::parse(n, x)?;
        let t = run_johnson_simulation(&db, &x, &code, seed)?;
        let truth = ground_truth(&db, &x, r.unwrap_or(code.r()))?;
        return report(
            serde_json::to_value(&t).map_err(|e| Failure::Io(e.to_string()))?,
            &truth,
            &t.reconstructed,
        );
    }
    let code: PpricCode = read_json(code)?;
    let r = r.unwrap_or(code.params().r);
    if let Some(q) = q {
        let records = lines(&db_text)
            .map(|(i, l)| with_line(i, QaryWord::parse(q, l)))
            .collect::<Result<Vec<_>, _>>()?;
        let db = Database::new(records)?;
        let x = QaryWord::parse(q, x)?;
        let t = run_qary_simulation(&db, &x, &code, seed)?;
        let truth = ground_truth(&db, &x, r)?;
        return report(
            serde_json::to_value(&t).map_err(|e| Failure::Io(e.to_string()))?,
            &truth,
            &t.reconstructed,
        );
    }
    let db = Database::parse(&db_text)?;
    let x: BinaryWord = x.parse()?;
    let t = if unverified {
        run_simulation_unverified(&db, &x, r, &code, seed)?
    } else {
        run_simulation(&db, &x, r, &code, seed)?
    };
    let truth = ground_truth(&db, &x, r)?;
    report(
        serde_json::to_value(&t).map_err(|e| Failure::Io(e.to_string()))?,
        &truth,
        &t.reconstructed,
    )
}

fn covering(cmd: CoveringCmd) -> Outcome {
    match cmd {
        CoveringCmd::Verify { design } => {
            let d = parse_design(&read(&design)?)?;
            let covers = verify_covering(&d)?;
            let sb = schoenheim_bound(d.n(), d.k(), d.t())?;
            verdict(
                &json!({
                    "n": d.n(), "k": d.k(), "t": d.t(), "blocks": d.len(),
                    "is_covering": covers,
                    "schoenheim": sb.to_string(),
                }),
                covers,
            )
        }
        CoveringCmd::Exact {
            n,
            k,
            t,
            node_limit,
        } => {
            let (c, design) = exact_covering_number_within(n, k, t, node_limit)?;
            let sb = schoenheim_bound(n, k, t)?;
            ok(
                &json!({ "n": n, "k": k, "t": t, "c": c, "schoenheim": sb.to_string(), "design": design }),
            )
        }
        CoveringCmd::Known { name } => {
            let d: CoveringDesign = match name.as_str() {
                "9-5-2" => known::design_9_5_2(),
                "4-2-2" => known::all_pairs_4(),
                "fano" => known::fano_plane(),
                other => {
                    return Err(Failure::Usage(format!(
                        "unknown design {other:?}; try 9-5-2, 4-2-2 or fano"
                    )))
                }
            };
            ok(&d)
        }
    }
}

fn johnson(cmd: JohnsonCmd) -> Outcome {
    match cmd {
        JohnsonCmd::Construct { n, params: p, x } => {
            let x = match x {
                Some(text) => JohnsonWord::parse(n, &text)?,
                None => JohnsonWord::new(n, 1..=p.l)?,
            };
            ok(&johnson_construction(n, p.l, p.s, p.r, &x)?)
        }
        JohnsonCmd::Verify { code } => {
            let code: JohnsonPpricCode = read_json(&code)?;
            let v = johnson_verify(&code)?;
            verdict(&v, v.is_ppric)
        }
        JohnsonCmd::Exact { n, params: p } => {
            let rep = johnson_exact_check(n, p.l, p.s, p.r)?;
            verdict(&rep, rep.confirmed)
        }
        JohnsonCmd::Product { design } => {
            let a = parse_design(&read(&design[0])?)?;
            let b = parse_design(&read(&design[1])?)?;
            let code = product_covering_code(&a, &b)?;
            let check = verify_johnson_covering(&code)?;
            let holds = check.at_least_one;
            verdict(&json!({ "code": code, "check": check }), holds)
        }
    }
}

fn emit(value: &Value, pretty: bool) -> io::Result<()> {
    let mut out = io::stdout().lock();
    let text = if pretty {
        serde_json::to_string_pretty(value)?
    } else {
        serde_json::to_string(value)?
    };
    writeln!(out, "{text}")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let reason = e.to_string();
            let first = reason
                .lines()
                .next()
                .unwrap_or("usage error")
                .trim_start_matches("error: ");
            eprintln!("{}", json!({ "error": "usage", "reason": first }));
            return ExitCode::from(2);
        }
    };
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
        {
            eprintln!("{}", json!({ "error": "usage", "reason": e.to_string() }));
            return ExitCode::from(2);
        }
    }
    let pretty = cli.pretty;
    match run(cli) {
        Ok(Output::Json(v, holds)) => {
            if emit(&v, pretty).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::from(if holds { 0 } else { 1 })
        }
        Ok(Output::Text(t)) => {
            print!("{t}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{}", f.json());
            ExitCode::from(f.status())
        }
    }
}
