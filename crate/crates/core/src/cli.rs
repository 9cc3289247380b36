//! Command-line front end. [`run`] parses arguments, dispatches to one
//! library entry point per verb and returns the process exit code:
//! 0 on success, 1 when a verification fails, 2 on usage or input errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::arc::{self, is_arc, Arc, ArcData, OPolynomial};
use crate::classify::{census_with, is_conic_arc, CensusOptions};
use crate::codes::LinearCode;
use crate::envelope::{complete_via_envelope, envelope_uniqueness, sbbt_envelope};
use crate::error::{Error, Result};
use crate::extend::{extendability_verdict, Verdict};
use crate::gf::Field;
use crate::tangent::{build_scaled_system, sweep, Check, Sampling};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Seed used by sampled sweeps when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "arclab", version, about = "Arcs in finite projective spaces")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    /// Seed for sampled sweeps.
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an arc from a known family.
    Construct {
        /// nrc, glynn, kestenband, segre-3space, or a hyperoval family
        /// (regular, translation, segre, glynn1, glynn2, payne, cherowitzo,
        /// subiaco1, subiaco2, subiaco3, adelaide).
        #[arg(long)]
        family: String,
        #[arg(long)]
        q: Option<u32>,
        #[arg(long)]
        k: Option<usize>,
        /// Exponent i of a translation hyperoval, or e of the Segre 3-space arc.
        #[arg(long)]
        exponent: Option<u32>,
        /// Also write the arc JSON to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the arc property; fails with a dependent k-subset as witness.
    Verify {
        #[arg(long)]
        arc: PathBuf,
    },
    /// Check the tangent identities on an arc.
    Tangents {
        #[arg(long)]
        arc: PathBuf,
        #[arg(long, value_enum, num_args = 1.., default_values = ["lemma", "scaled", "sums"])]
        verify: Vec<CheckArg>,
        /// Check this many randomly drawn cases instead of all of them.
        #[arg(long)]
        sample: Option<usize>,
    },
    /// Build the envelope φ of the tangent hyperplanes.
    Envelope {
        #[arg(long)]
        arc: PathBuf,
        /// Complete the arc from the linear factors of φ.
        #[arg(long)]
        complete: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Test whether an arc can lie in a larger arc of the target size.
    Extend {
        #[arg(long)]
        arc: PathBuf,
        #[arg(long)]
        target: usize,
    },
    /// Classify arcs of a given size up to projectivity.
    Classify {
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        size: usize,
        /// Keep complete arcs only.
        #[arg(long)]
        complete: bool,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        node_limit: Option<u64>,
    },
    /// The dual arc (columns of a generator of the dual code).
    Dual {
        #[arg(long)]
        arc: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parameters of the code generated by an arc.
    Code {
        #[arg(long)]
        arc: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckArg {
    Lemma,
    Scaled,
    Sums,
    Deltas,
}

impl From<CheckArg> for Check {
    fn from(c: CheckArg) -> Check {
        match c {
            CheckArg::Lemma => Check::Lemma,
            CheckArg::Scaled => Check::Scaled,
            CheckArg::Sums => Check::Sums,
            CheckArg::Deltas => Check::Deltas,
        }
    }
}

/// Result of one verb: a JSON report, a human rendering and whether the
/// verb's verification passed.
struct Report {
    json: Value,
    table: String,
    ok: bool,
}

impl Report {
    fn ok(json: Value, table: String) -> Report {
        Report { json, table, ok: true }
    }
}

fn read_data(path: &Path) -> Result<ArcData> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn read_arc(path: &Path) -> Result<Arc> {
    Arc::try_from(read_data(path)?)
}

fn write_arc(path: &Option<PathBuf>, a: &Arc) -> Result<()> {
    if let Some(p) = path {
        fs::write(p, a.to_json()).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn arc_json(a: &Arc) -> Value {
    serde_json::to_value(a.to_data()).expect("serializable")
}

fn field(q: Option<u32>, default: Option<u32>) -> Result<Field> {
    let q = q.or(default).ok_or_else(|| Error::Precondition("--q is required".into()))?;
    Field::of_order(q)
}

fn construct(family: &str, q: Option<u32>, k: Option<usize>, exponent: Option<u32>) -> Result<Arc> {
    match family {
        "nrc" => arc::nrc(k.unwrap_or(3), &field(q, None)?),
        "glynn" => arc::glynn(&field(q, Some(9))?),
        "kestenband" => arc::kestenband(&field(q, Some(9))?, None),
        "segre-3space" => arc::segre_3space(exponent.unwrap_or(1), &field(q, None)?),
        "hyperoval" => arc::hyperoval(OPolynomial::Regular, &field(q, None)?),
        other => arc::hyperoval(OPolynomial::parse(other, exponent)?, &field(q, None)?),
    }
}

fn execute(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Construct { family, q, k, exponent, out } => {
            let a = construct(family, *q, *k, *exponent)?;
            write_arc(out, &a)?;
            Ok(Report::ok(arc_json(&a), a.to_string()))
        }
        Command::Verify { arc } => {
            let data = read_data(arc)?;
            let pts = data.vectors()?;
            let check = is_arc(&data.field, data.k, &pts)?;
            let mut json = json!({
                "is_arc": check.is_arc,
                "size": pts.len(),
                "k": data.k,
                "q": data.field.q(),
                "witness": check.witness,
            });
            let mut table = format!("{} points in PG({}, {}): ", pts.len(), data.k - 1, data.field.q());
            if check.is_arc {
                let a = Arc::new(&data.field, data.k, pts)?;
                let complete = arc::is_complete(&a)?;
                json["t"] = json!(a.t());
                json["complete"] = json!(complete);
                table += &format!("arc, t = {}, {}", a.t(), if complete { "complete" } else { "not complete" });
            } else {
                table += &format!("not an arc, dependent points {:?}", check.witness.unwrap_or_default());
            }
            Ok(Report { json, table, ok: check.is_arc })
        }
        Command::Tangents { arc, verify, sample } => {
            let a = read_arc(arc)?;
            let sys = build_scaled_system(&a)?;
            let sampling = match sample {
                Some(count) => Sampling::Random { count: *count, seed: cli.seed },
                None => Sampling::Exhaustive,
            };
            let mut reports = Vec::new();
            let mut table = format!("t = {}\n", sys.t());
            for &c in verify {
                let r = sweep(&sys, c.into(), sampling)?;
                table += &format!(
                    "{:<8} {:>8} checked {:>6} failed{}\n",
                    format!("{:?}", r.check).to_lowercase(),
                    r.checked,
                    r.failed,
                    r.first_failure.as_ref().map(|w| format!("  first: {w:?}")).unwrap_or_default()
                );
                reports.push(r);
            }
            let ok = reports.iter().all(|r| r.passed());
            Ok(Report { json: json!({ "t": sys.t(), "checks": reports }), table, ok })
        }
        Command::Envelope { arc, complete, out } => {
            let a = read_arc(arc)?;
            let env = sbbt_envelope(&a)?;
            let uniq = envelope_uniqueness(&a, &env)?;
            let phi: Value = serde_json::from_str(&env.phi.to_json()).expect("valid json");
            let mut json = json!({
                "m": env.m,
                "t": env.t,
                "degree": env.phi.degree(),
                "checked": env.checked,
                "phi": phi,
                "uniqueness": uniq,
            });
            let mut table = format!(
                "φ: degree {} (m = {}, t = {}), {} terms; G = f^m checked at {} pairs\n\
                 vanishing forms of degree {}: {} (with multiplicity: {})\n",
                env.phi.degree(),
                env.m,
                env.t,
                env.phi.num_terms(),
                env.checked,
                env.phi.degree(),
                uniq.plain,
                uniq.with_multiplicity
            );
            if *complete {
                let c = complete_via_envelope(&a)?;
                write_arc(out, &c)?;
                table += &format!("completed to {} points\n{c}", c.len());
                json["completed"] = arc_json(&c);
            }
            Ok(Report::ok(json, table))
        }
        Command::Extend { arc, target } => {
            let g = read_arc(arc)?;
            let v = extendability_verdict(&g, *target)?;
            let show = |w: &Vec<crate::gf::Elem>| -> Vec<String> { w.iter().map(|&x| g.field().show(x)).collect() };
            let json = match &v {
                Verdict::Obstructed { rank, nullity } => json!({"verdict": v.label(), "rank": rank, "nullity": nullity}),
                Verdict::Possible { nullity, count, witnesses } => json!({
                    "verdict": v.label(),
                    "nullity": nullity,
                    "count": count,
                    "witnesses": witnesses.iter().map(show).collect::<Vec<_>>(),
                }),
                Verdict::Undecided { nullity, combinations } => {
                    json!({"verdict": v.label(), "nullity": nullity, "combinations": combinations})
                }
            };
            let table = format!("{} points, target {}: {}", g.len(), target, v.label());
            Ok(Report::ok(json, table))
        }
        Command::Classify { q, k, size, complete, checkpoint, node_limit } => {
            let f = Field::of_order(*q)?;
            let opts = CensusOptions { checkpoint: checkpoint.clone(), node_limit: *node_limit };
            let r = census_with(&f, *k, *size, *complete, &opts)?;
            let mut table = format!(
                "{}arcs of size {} in PG({}, {}): {} class(es); {} arcs found, {} nodes\n",
                if *complete { "complete " } else { "" },
                size,
                k - 1,
                q,
                r.classes,
                r.stats.arcs_found,
                r.stats.nodes
            );
            for (i, a) in r.arcs()?.iter().enumerate() {
                let conic = if *k == 3 && a.len() >= 5 { is_conic_arc(a)? } else { false };
                table += &format!("class {}{}\n{a}", i + 1, if conic { " (conic)" } else { "" });
            }
            Ok(Report::ok(serde_json::to_value(&r).expect("serializable"), table))
        }
        Command::Dual { arc, out } => {
            let d = arc::dual_arc(&read_arc(arc)?)?;
            write_arc(out, &d)?;
            Ok(Report::ok(arc_json(&d), d.to_string()))
        }
        Command::Code { arc } => {
            let a = read_arc(arc)?;
            let c = LinearCode::from_arc(&a)?;
            let d = c.min_distance()?;
            let (n, k) = (c.length(), c.dimension());
            let json = json!({"n": n, "k": k, "d": d, "mds": d == n - k + 1});
            let table = format!("[{n}, {k}, {d}] code over GF({}){}", a.field().q(), if d == n - k + 1 { ", MDS" } else { "" });
            Ok(Report { json, table, ok: d == n - k + 1 })
        }
    }
}

/// Runs the command line `args` (program name first), writing the report to
/// `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{}", e.render()) } else { write!(out, "{}", e.render()) };
            return code;
        }
    };
    let result = match cli.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(Error::Precondition(format!("thread pool: {e}"))),
        },
        None => execute(&cli),
    };
    match result {
        Ok(report) => {
            let _ = match cli.format {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report.json).expect("serializable")),
                Format::Table => writeln!(out, "{}", report.table.trim_end()),
            };
            if report.ok {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        Err(e @ Error::Verification(_)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILED
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}
