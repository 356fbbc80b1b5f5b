//! `localtr`: exact local topological recursion from the command line.
//!
//! Exit codes: 0 success, 1 check failure, 2 usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use localtr::check;
use localtr::cp1::NsPipeline;
use localtr::dictionary::{curve_from_r, r_from_curve, GiventalData};
use localtr::field::{rat_to_string, FieldElement};
use localtr::graphsum::{graph_weight_breakdown, tr_graph_sum};
use localtr::jsonio;
use localtr::psi;
use localtr::recursion::tr_omega;

#[derive(Parser)]
#[command(name = "localtr", version, about = "exact topological recursion on local spectral curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the topological recursion on a curve-spec file
    Omega(OmegaArgs),
    /// Emit the decorated-graph sum with per-graph weights
    Graphsum(GraphsumArgs),
    /// Translate between curve specs and R-series data
    Dictionary {
        #[command(subcommand)]
        direction: DictionaryCommand,
    },
    /// Stationary Gromov-Witten invariants of CP1 and their pin-down checks
    Cp1 {
        #[command(subcommand)]
        action: Cp1Command,
    },
    /// Run a bundled check suite: airy, kdv, graphsum, dictionary, cp1, all
    Check {
        suite: String,
        /// Seed for the randomized fixtures
        #[arg(long, default_value_t = 0x1ea_f00d)]
        seed: u64,
    },
}

#[derive(Args)]
struct OmegaArgs {
    /// Curve-spec JSON file
    #[arg(long)]
    curve: PathBuf,
    #[arg(short)]
    g: u32,
    #[arg(short)]
    n: usize,
    /// Regular-part order; only lowers what the spec file allows
    #[arg(long, default_value_t = 0)]
    order: i64,
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Args)]
struct GraphsumArgs {
    #[arg(long)]
    curve: PathBuf,
    #[arg(short)]
    g: u32,
    #[arg(short)]
    n: usize,
}

#[derive(Subcommand)]
enum DictionaryCommand {
    /// R-series JSON to curve spec
    ToCurve {
        #[arg(long)]
        input: PathBuf,
        /// Square roots of Delta, one rational string per branch
        #[arg(long, value_delimiter = ',')]
        sqrt_delta: Option<Vec<String>>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Curve spec to R-series JSON
    FromCurve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Cp1Command {
    /// Stationary invariant <prod tau_{a_j}(omega)>_g
    Stationary {
        #[arg(long)]
        g: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<i64>,
    },
    /// Run the f-matrix and residue-coefficient pin-downs
    Check,
}

fn psi_cache_path() -> Option<PathBuf> {
    std::env::var_os("LOCALTR_PSI_CACHE").map(|dir| PathBuf::from(dir).join("psi-cache.txt"))
}

fn emit(v: &Value) {
    print!("{}", jsonio::to_canonical_string(v));
}

fn read_json(path: &PathBuf) -> localtr::Result<Value> {
    serde_json::from_str(&std::fs::read_to_string(path)?)
        .map_err(|e| localtr::Error::Parse(e.to_string()))
}

fn run() -> localtr::Result<u8> {
    let cli = Cli::parse();
    if let Some(path) = psi_cache_path() {
        if path.exists() {
            psi::cache_load(&path)?;
        }
    }
    let code = match cli.command {
        Command::Omega(args) => {
            let data = jsonio::curve_from_json(&read_json(&args.curve)?)?;
            let form = tr_omega(&data, args.g, args.n, args.order)?;
            if args.format == "text" {
                for ((b, e), v) in &form.entries {
                    println!("branches {b:?} exponents {e:?}: {v}");
                }
            } else {
                emit(&jsonio::form_to_json(&form));
            }
            0
        }
        Command::Graphsum(args) => {
            let data = jsonio::curve_from_json(&read_json(&args.curve)?)?;
            let rows = graph_weight_breakdown(&data, args.g, args.n)?;
            let graphs: Vec<Value> = rows
                .iter()
                .map(|(graph, weight)| {
                    json!({
                        "vertices": graph.vertices.iter().map(|&(g, i)| json!([g, i])).collect::<Vec<_>>(),
                        "edges": graph.edges.iter()
                            .map(|e| json!([e.v1, e.v2, e.k1, e.k2])).collect::<Vec<_>>(),
                        "leaves": graph.leaves.iter().map(|&(v, k)| json!([v, k])).collect::<Vec<_>>(),
                        "dilaton": graph.dilaton.iter().map(|&(v, k)| json!([v, k])).collect::<Vec<_>>(),
                        "aut": graph.aut,
                        "weight": jsonio::field_to_json(weight),
                    })
                })
                .collect();
            let total = tr_graph_sum(&data, args.g, args.n)?;
            emit(&json!({
                "g": args.g,
                "n": args.n,
                "graphs": graphs,
                "dxi_expansion": jsonio::expansion_to_json(&total),
            }));
            0
        }
        Command::Dictionary { direction } => match direction {
            DictionaryCommand::ToCurve { input, sqrt_delta, output } => {
                let r = jsonio::r_series_from_json(&read_json(&input)?)?;
                let roots = match sqrt_delta {
                    Some(parts) => parts
                        .iter()
                        .map(|p| localtr::field::rat_from_str(p).map(FieldElement::from_rat))
                        .collect::<localtr::Result<Vec<_>>>()?,
                    None => vec![FieldElement::one(); r.dim()],
                };
                let gd = GiventalData::new(r, roots)?;
                let curve = curve_from_r(&gd)?;
                let doc = jsonio::curve_to_json(&curve);
                match output {
                    Some(path) => std::fs::write(path, jsonio::to_canonical_string(&doc))?,
                    None => emit(&doc),
                }
                0
            }
            DictionaryCommand::FromCurve { input, output } => {
                let data = jsonio::curve_from_json(&read_json(&input)?)?;
                let r = r_from_curve(&data)?;
                let doc = jsonio::r_series_to_json(&r);
                match output {
                    Some(path) => std::fs::write(path, jsonio::to_canonical_string(&doc))?,
                    None => emit(&doc),
                }
                0
            }
        },
        Command::Cp1 { action } => match action {
            Cp1Command::Stationary { g, a } => {
                let mut pipeline = NsPipeline::new(g, a.len())?;
                let (value, trace) = pipeline.stationary_with_trace(g, &a)?;
                let u_rows: Vec<Value> = trace
                    .u_coefficients
                    .entries
                    .iter()
                    .map(|(key, v)| {
                        json!({
                            "leaves": key.iter().map(|&(mu, c)| json!([mu, c])).collect::<Vec<_>>(),
                            "value": jsonio::field_to_json(v),
                        })
                    })
                    .collect();
                emit(&json!({
                    "g": g,
                    "a": a,
                    "degree": trace.degree,
                    "value": rat_to_string(&value),
                    "u_basis": u_rows,
                }));
                0
            }
            Cp1Command::Check => {
                let results = vec![check::criterion_f_matrix(), check::criterion_u_residues()];
                report(&results)
            }
        },
        Command::Check { suite, seed } => match check::run_suite(&suite, seed) {
            Some(results) => report(&results),
            None => {
                eprintln!(
                    "unknown suite {suite:?}; expected airy, kdv, graphsum, dictionary, cp1 or all"
                );
                2
            }
        },
    };
    if let Some(path) = psi_cache_path() {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        psi::cache_save(&path)?;
    }
    Ok(code)
}

fn report(results: &[check::CheckResult]) -> u8 {
    let rows: Vec<Value> = results
        .iter()
        .map(|r| {
            json!({
                "name": r.name,
                "passed": r.passed,
                "millis": r.millis,
                "detail": r.detail,
            })
        })
        .collect();
    for r in results {
        eprintln!("{}", r.line());
    }
    emit(&json!({ "results": rows, "passed": results.iter().all(|r| r.passed) }));
    u8::from(!results.iter().all(|r| r.passed))
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
