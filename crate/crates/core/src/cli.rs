//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage or computation errors, 2 when a
//! multiplier search ends without a solution.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::code::{CodeJson, HullKind, LinearCode, DEFAULT_ENUMERATION_CAP};
use crate::dial::{dial_galois_hull, dial_hull, reduce_hull, DialResult, LambdaSource};
use crate::eaqec::{
    eaqec_from_dial, eaqec_sweep, enumerate_table1, to_tsv, verify_claim, EaqecParams, Evidence,
    SweepRecord, TableLimits,
};
use crate::field::FieldSpec;
use crate::grs::{construct_family, Family, FamilyOutcome, DEFAULT_SEED};

pub const CAP_ENV: &str = "HERMHULL_ENUM_CAP";

#[derive(Debug, Parser)]
#[command(name = "hermhull", version, about = "Hermitian hull dialing and MDS EAQEC parameters")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Pretty,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output format (default depends on the command).
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Enumeration cap for distance computations; overrides $HERMHULL_ENUM_CAP.
    #[arg(long)]
    pub cap: Option<u64>,
    /// Write output here (atomically) instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a Hermitian self-orthogonal GRS code from a family.
    Construct {
        /// Base field size; codes live over GF(q^2).
        #[arg(long)]
        q: u64,
        /// full-field, q2plus1, char2, subgroup, subgroup-union, even-subgroup, cosets, ball-vilar, first-n
        #[arg(long)]
        family: String,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        w: Option<usize>,
        #[arg(long)]
        m1: Option<u64>,
        #[arg(long)]
        m2: Option<u64>,
        /// Coset indices, comma separated.
        #[arg(long, value_delimiter = ',')]
        cosets: Vec<u64>,
        /// Coefficients of g, constant first: elements separated by ';',
        /// each a comma-separated coefficient list over GF(p).
        #[arg(long)]
        g: Option<String>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Equivalent code with a prescribed hull dimension.
    Dial {
        /// Code JSON (a bare code or any artifact with a "code" field).
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long)]
        h: usize,
        /// Use the l-Galois hull instead of the Hermitian one.
        #[arg(long)]
        galois: Option<u32>,
        /// Draw the scaling constants from a seeded generator.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// EAQEC records for every hull dimension up to the code's, or one.
    Eaqec {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long)]
        l: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Formula-level table of MDS EAQEC families for one q.
    Table {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        max_rows: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Check claimed EAQEC parameters, optionally against a witness code.
    Verify {
        /// Parameter JSON (one record or the first of a list).
        #[arg(long, conflicts_with_all = ["q", "n", "k", "d", "c"])]
        params: Option<PathBuf>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        c: Option<usize>,
        #[arg(long)]
        witness: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Minimum distance and dual distance by exhaustive search.
    Distance {
        #[arg(long, short)]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Hull dimension and basis.
    Hull {
        #[arg(long, short)]
        input: PathBuf,
        /// hermitian, euclidean, or galois:L
        #[arg(long, default_value = "hermitian")]
        kind: String,
        #[command(flatten)]
        common: Common,
    },
}

/// Failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

fn fail(message: impl std::fmt::Display) -> Failure {
    Failure { code: 1, message: message.to_string() }
}

fn exhausted(message: impl std::fmt::Display) -> Failure {
    Failure { code: 2, message: message.to_string() }
}

type Outcome = Result<String, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 { write!(stdout, "{e}") } else { write!(stderr, "{e}") };
            return code;
        }
    };
    let common = match &cli.command {
        Command::Construct { common, .. }
        | Command::Dial { common, .. }
        | Command::Eaqec { common, .. }
        | Command::Table { common, .. }
        | Command::Verify { common, .. }
        | Command::Distance { common, .. }
        | Command::Hull { common, .. } => common,
    };
    let result = cap(common).and_then(|cap| execute(&cli.command, cap));
    match result {
        Ok(text) => match &common.output {
            Some(path) => match write_atomic(path, &text) {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    1
                }
            },
            None => {
                let _ = stdout.write_all(text.as_bytes());
                0
            }
        },
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn cap(common: &Common) -> Result<u64, Failure> {
    if let Some(c) = common.cap {
        return Ok(c);
    }
    match std::env::var(CAP_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| fail(format!("{CAP_ENV}={v:?} is not an integer"))),
        Err(_) => Ok(DEFAULT_ENUMERATION_CAP),
    }
}

/// Writes to a sibling temporary file, then renames over `path`.
pub fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn hermitian_field(q: u64) -> Result<FieldSpec, Failure> {
    if crate::field::prime_power(q).is_none() {
        return Err(fail(format!("q = {q} is not a prime power")));
    }
    FieldSpec::hermitian(q).map_err(fail)
}

/// Reads a code from a bare code JSON or any object with a `"code"` field.
pub fn read_code(path: &Path) -> Result<LinearCode, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| fail(format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| fail(format!("{}: {e}", path.display())))?;
    let node = value.get("code").cloned().unwrap_or(value);
    let cj: CodeJson = serde_json::from_value(node).map_err(|e| fail(format!("{}: not a code: {e}", path.display())))?;
    LinearCode::from_json(&cj).map_err(fail)
}

fn parse_g(s: &str) -> Result<Vec<Vec<u64>>, Failure> {
    s.split(';')
        .map(|el| {
            el.split(',')
                .map(|c| c.trim().parse::<u64>().map_err(|_| fail(format!("bad coefficient {c:?} in --g"))))
                .collect()
        })
        .collect()
}

fn need<T: Copy>(v: Option<T>, flag: &str, family: &str) -> Result<T, Failure> {
    v.ok_or_else(|| fail(format!("family {family} requires --{flag}")))
}

#[derive(Serialize)]
struct ConstructOut {
    family: Family,
    n: usize,
    k: usize,
    mds_verified: Option<bool>,
    spec: crate::grs::GrsSpecJson,
    code: CodeJson,
}

#[derive(Serialize)]
struct NotFoundOut<'a> {
    outcome: &'a str,
    family: Family,
    n: usize,
    k: usize,
    nullity: usize,
    attempts: Option<u64>,
}

fn execute(cmd: &Command, cap: u64) -> Outcome {
    match cmd {
        Command::Construct { q, family, k, n, m, w, m1, m2, cosets, g, seed, common } => {
            let field = hermitian_field(*q)?;
            let tag = Family::normalize_tag(family).map_err(fail)?;
            let fam = match tag {
                "full_field" => Family::FullField { k: need(*k, "k", tag)? },
                "q2plus1" => Family::Q2Plus1 { k: need(*k, "k", tag)? },
                "char2" => Family::Char2,
                "subgroup" => Family::Subgroup { m: need(*m, "m", tag)?, w: need(*w, "w", tag)? },
                "subgroup_union" => Family::SubgroupUnion {
                    m1: need(*m1, "m1", tag)?,
                    m2: need(*m2, "m2", tag)?,
                    k: need(*k, "k", tag)?,
                },
                "even_subgroup" => Family::EvenSubgroup { m: need(*m, "m", tag)?, k: need(*k, "k", tag)? },
                "cosets" => {
                    if cosets.is_empty() {
                        return Err(fail("family cosets requires --cosets"));
                    }
                    Family::Cosets { m: need(*m, "m", tag)?, cosets: cosets.clone(), k: need(*k, "k", tag)? }
                }
                "ball_vilar" => {
                    let g = g.as_deref().ok_or_else(|| fail("family ball_vilar requires --g"))?;
                    Family::BallVilar { g: parse_g(g)?, k: need(*k, "k", tag)? }
                }
                "first_n" => Family::FirstN { n: need(*n, "n", tag)?, k: need(*k, "k", tag)? },
                _ => unreachable!(),
            };
            let format = common.format.unwrap_or(Format::Json);
            match construct_family(&field, &fam, *seed, cap).map_err(fail)? {
                FamilyOutcome::Found(f) => {
                    let out = ConstructOut {
                        family: f.family.clone(),
                        n: f.code.n(),
                        k: f.code.k(),
                        mds_verified: f.mds_verified,
                        spec: f.spec.to_json(),
                        code: f.code.to_json(),
                    };
                    Ok(match format {
                        Format::Pretty => format!(
                            "[{}, {}, {}] Hermitian self-orthogonal over GF({}^2), family {}\n",
                            out.n,
                            out.k,
                            match f.mds_verified {
                                Some(true) => (out.n - out.k + 1).to_string(),
                                _ => format!("{} (not enumerated)", out.n - out.k + 1),
                            },
                            q,
                            fam.tag()
                        ),
                        _ => json(&out),
                    })
                }
                FamilyOutcome::NoSolution { n, k, nullity } => {
                    let o = NotFoundOut { outcome: "no_solution", family: fam, n, k, nullity, attempts: None };
                    Err(exhausted(format!("no multipliers exist: {}", serde_json::to_string(&o).unwrap())))
                }
                FamilyOutcome::NotFoundWithinBudget { n, k, nullity, attempts } => {
                    let o = NotFoundOut {
                        outcome: "not_found_within_budget",
                        family: fam,
                        n,
                        k,
                        nullity,
                        attempts: Some(attempts),
                    };
                    Err(exhausted(format!("search budget exhausted: {}", serde_json::to_string(&o).unwrap())))
                }
            }
        }
        Command::Dial { input, h, galois, seed, common } => {
            let code = read_code(input)?;
            let source = seed.map(LambdaSource::Seeded).unwrap_or_default();
            let r: DialResult = match galois {
                Some(l) => dial_galois_hull(&code, *h, *l, source),
                None if code.is_hermitian_self_orthogonal().map_err(fail)? => dial_hull(&code, *h, source),
                None => reduce_hull(&code, *h, source),
            }
            .map_err(fail)?;
            Ok(match common.format.unwrap_or(Format::Json) {
                Format::Pretty => format!(
                    "[{}, {}] code dialed to {} hull dimension {} (target {})\n",
                    r.code.n(),
                    r.code.k(),
                    r.kind,
                    r.achieved_h,
                    r.target_h
                ),
                _ => json(&r.to_json()),
            })
        }
        Command::Eaqec { input, l, common } => {
            let code = read_code(input)?;
            let records: Vec<SweepRecord> = match l {
                Some(l) => vec![eaqec_from_dial(&code, *l, LambdaSource::Canonical, cap).map_err(fail)?],
                None => eaqec_sweep(&code, LambdaSource::Canonical, cap, None).map_err(fail)?,
            };
            let params: Vec<EaqecParams> = records.into_iter().map(|r| r.params).collect();
            Ok(render_params(&params, common.format.unwrap_or(Format::Tsv)))
        }
        Command::Table { q, max_rows, common } => {
            let rows = enumerate_table1(*q, TableLimits { max_rows: *max_rows }).map_err(fail)?;
            Ok(render_params(&rows, common.format.unwrap_or(Format::Tsv)))
        }
        Command::Verify { params, q, n, k, d, c, witness, common } => {
            let p = match params {
                Some(path) => read_params(path)?,
                None => {
                    let missing = |f: &str| fail(format!("--{f} is required without --params"));
                    EaqecParams::new(
                        q.ok_or_else(|| missing("q"))?,
                        n.ok_or_else(|| missing("n"))?,
                        k.ok_or_else(|| missing("k"))?,
                        d.ok_or_else(|| missing("d"))?,
                        c.ok_or_else(|| missing("c"))?,
                        Evidence::Formula,
                        "claim",
                    )
                }
            };
            let w = witness.as_deref().map(read_code).transpose()?;
            let v = verify_claim(&p, w.as_ref(), cap);
            Ok(match common.format.unwrap_or(Format::Json) {
                Format::Json => json(&v),
                _ => {
                    let mut s = format!("{}: {}\n", p.label(), serde_json::to_value(v.status).unwrap().as_str().unwrap());
                    for f in &v.failures {
                        s.push_str(&format!("  {f}\n"));
                    }
                    s
                }
            })
        }
        Command::Distance { input, common } => {
            let code = read_code(input)?;
            let d = code.min_distance_capped(cap).map_err(fail)?;
            let dd = code.dual_distance_capped(cap).map_err(fail)?;
            #[derive(Serialize)]
            struct Out {
                n: usize,
                k: usize,
                d: usize,
                dual_distance: usize,
                mds: bool,
            }
            let o = Out { n: code.n(), k: code.k(), d, dual_distance: dd, mds: d + code.k() == code.n() + 1 };
            Ok(match common.format.unwrap_or(Format::Json) {
                Format::Json => json(&o),
                Format::Tsv => format!("n\tk\td\tdual_distance\tmds\n{}\t{}\t{}\t{}\t{}\n", o.n, o.k, o.d, o.dual_distance, o.mds),
                Format::Pretty => format!("[{}, {}, {}], dual distance {}\n", o.n, o.k, o.d, o.dual_distance),
            })
        }
        Command::Hull { input, kind, common } => {
            let code = read_code(input)?;
            let kind = parse_kind(kind)?;
            let r = code.hull(kind).map_err(fail)?;
            #[derive(Serialize)]
            struct Out {
                kind: HullKind,
                n: usize,
                k: usize,
                dim: usize,
                basis: crate::matrix::MatrixJson,
            }
            let o = Out { kind, n: code.n(), k: code.k(), dim: r.dim, basis: r.basis.to_json() };
            Ok(match common.format.unwrap_or(Format::Json) {
                Format::Json => json(&o),
                Format::Tsv => format!("kind\tn\tk\tdim\n{}\t{}\t{}\t{}\n", kind, o.n, o.k, o.dim),
                Format::Pretty => format!("{} hull of the [{}, {}] code has dimension {}\n", kind, o.n, o.k, o.dim),
            })
        }
    }
}

fn parse_kind(s: &str) -> Result<HullKind, Failure> {
    match s.to_ascii_lowercase().as_str() {
        "hermitian" => Ok(HullKind::Hermitian),
        "euclidean" => Ok(HullKind::Euclidean),
        other => other
            .strip_prefix("galois:")
            .and_then(|l| l.parse().ok())
            .map(HullKind::Galois)
            .ok_or_else(|| fail(format!("unknown hull kind {s:?}"))),
    }
}

fn read_params(path: &Path) -> Result<EaqecParams, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| fail(format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| fail(format!("{}: {e}", path.display())))?;
    let node = match value {
        Value::Array(mut xs) if !xs.is_empty() => xs.swap_remove(0),
        v => v,
    };
    serde_json::from_value(node).map_err(|e| fail(format!("{}: not EAQEC parameters: {e}", path.display())))
}

fn render_params(rows: &[EaqecParams], format: Format) -> String {
    match format {
        Format::Tsv => to_tsv(rows),
        Format::Json => json(&rows),
        Format::Pretty => rows
            .iter()
            .map(|r| format!("{} {} {} [{}]\n", r.label(), r.mds.as_str(), r.evidence.as_str(), r.provenance.join(",")))
            .collect(),
    }
}
