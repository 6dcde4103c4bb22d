//! Command-line front end: invariant queries, verification suites, Euler
//! characteristic series, and plot-data emission.
//!
//! Exact values are printed as JSON with sorted keys on standard output;
//! computation errors exit 1 with a JSON error object on standard error;
//! usage errors exit 2.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use isoquot::error::Error;
use isoquot::fclass::{f2_closed_m1, f2_intersect};
use isoquot::grw::{grw_og, grw_sg};
use isoquot::invariants::{a_rank1_symm, a_sympl, a_sympl_poly, a_symm_r2, InsertionPoly};
use isoquot::localize::{etop_series, evir_series};
use isoquot::scalar::{log10_abs, rational_string, Rational};
use isoquot::verify;

#[derive(Parser)]
#[command(
    name = "isoquot",
    about = "Exact intersection numbers, GRW invariants and virtual Euler characteristics of isotropic Quot schemes",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Symplectic rank-2 a-class intersection a_1^m1 a_2^m2 (trace engine)
    ASympl(ASymplArgs),
    /// Symplectic rank-2 intersection of a polynomial insertion (pair enumeration)
    ASymplPoly(APolyArgs),
    /// Symmetric rank-2 intersection of a polynomial insertion
    ASymm(APolyArgs),
    /// Symmetric rank-1 top intersection
    ARank1(ARank1Args),
    /// f-class intersection f_2^m Q(a_1,a_2) (operator engine or m=1 closed form)
    FClass(FClassArgs),
    /// Gromov-Ruan-Witten invariants of SG(2,2n) or OG(2,2n+2)
    Grw(GrwArgs),
    /// Euler characteristic series as CSV "d,value"
    Euler(EulerArgs),
    /// Figure data: d, |e_vir|, log10|e_vir| as TSV
    PlotData(PlotDataArgs),
    /// Run the cross-check suites
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ASymplArgs {
    #[arg(long = "N")]
    n: u32,
    #[arg(long)]
    g: u32,
    #[arg(long)]
    d: u32,
    #[arg(long)]
    m1: u32,
    #[arg(long)]
    m2: u32,
}

#[derive(Args)]
struct APolyArgs {
    #[arg(long = "N")]
    n: u32,
    #[arg(long)]
    g: u32,
    #[arg(long)]
    d: u32,
    /// Insertion polynomial as coefficient:m1:m2 triples separated by ';'
    #[arg(long = "Q")]
    q: String,
}

#[derive(Args)]
struct ARank1Args {
    #[arg(long = "N")]
    n: u32,
    #[arg(long)]
    g: u32,
    #[arg(long)]
    d: u32,
}

#[derive(Args)]
struct FClassArgs {
    #[arg(long = "N")]
    n: u32,
    #[arg(long)]
    g: u32,
    #[arg(long)]
    d: u32,
    #[arg(long)]
    m: u32,
    #[arg(long = "Q")]
    q: String,
    /// Use the m = 1 closed form instead of the operator engine
    #[arg(long = "closed-form")]
    closed_form: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Space {
    Sg,
    Og,
}

#[derive(Args)]
struct GrwArgs {
    #[arg(long, value_enum)]
    space: Space,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    g: u32,
    #[arg(long)]
    d: u32,
    #[arg(long)]
    m1: u32,
    #[arg(long)]
    m2: u32,
}

#[derive(Args)]
struct EulerArgs {
    #[arg(long = "N")]
    n: u32,
    #[arg(long)]
    r: u32,
    #[arg(long)]
    dmax: u32,
    /// Emit the topological Euler characteristic series instead
    #[arg(long)]
    topological: bool,
    /// Genus for the topological series (the virtual series is genus 0)
    #[arg(long, default_value_t = 0)]
    g: u32,
}

#[derive(Args)]
struct PlotDataArgs {
    #[arg(long = "N")]
    n: u32,
    #[arg(long)]
    r: u32,
    #[arg(long)]
    dmax: u32,
    #[arg(long)]
    out: std::path::PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name or "all"
    #[arg(long, default_value = "all")]
    suite: String,
}

fn parse_insertion(s: &str) -> Result<InsertionPoly, String> {
    let mut terms = Vec::new();
    for part in s.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let fields: Vec<&str> = part.split(':').collect();
        if fields.len() != 3 {
            return Err(format!(
                "bad insertion term '{part}': expected coefficient:m1:m2"
            ));
        }
        let coeff: Rational = fields[0]
            .parse()
            .map_err(|e| format!("bad coefficient '{}': {e}", fields[0]))?;
        let m1: u32 = fields[1]
            .parse()
            .map_err(|e| format!("bad exponent '{}': {e}", fields[1]))?;
        let m2: u32 = fields[2]
            .parse()
            .map_err(|e| format!("bad exponent '{}': {e}", fields[2]))?;
        terms.push((coeff, m1, m2));
    }
    if terms.is_empty() {
        return Err("empty insertion polynomial".into());
    }
    Ok(InsertionPoly { terms })
}

fn result_json(value: &Rational, params: Value, method: &str, flags: Vec<String>) -> Value {
    json!({
        "flags": flags,
        "method": method,
        "params": params,
        "value": rational_string(value),
    })
}

fn emit(value: Value) {
    println!("{value}");
}

fn fail(err: Error) -> ExitCode {
    let obj = json!({ "error": { "code": err.code(), "message": err.to_string() } });
    eprintln!("{obj}");
    ExitCode::from(1)
}

fn usage_fail(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("ISOQUOT_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => fail(e),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::ASympl(a) => {
            let value = a_sympl(a.n, a.g, a.d, a.m1, a.m2)?;
            emit(result_json(
                &value,
                json!({"N": a.n, "g": a.g, "d": a.d, "m1": a.m1, "m2": a.m2}),
                "closed_form",
                vec![],
            ));
        }
        Command::ASymplPoly(a) => {
            let q = match parse_insertion(&a.q) {
                Ok(q) => q,
                Err(m) => return Ok(usage_fail(&m)),
            };
            let value = a_sympl_poly(a.n, a.g, a.d, &q)?;
            emit(result_json(
                &value,
                json!({"N": a.n, "Q": a.q, "g": a.g, "d": a.d}),
                "closed_form",
                vec![],
            ));
        }
        Command::ASymm(a) => {
            let q = match parse_insertion(&a.q) {
                Ok(q) => q,
                Err(m) => return Ok(usage_fail(&m)),
            };
            let value = a_symm_r2(a.n, a.g, a.d, &q)?;
            let mut flags = Vec::new();
            if a.d < a.g {
                flags.push("unverified_regime".to_string());
            }
            if a.n <= 6 {
                flags.push("small_n_unvalidated".to_string());
            }
            emit(result_json(
                &value,
                json!({"N": a.n, "Q": a.q, "g": a.g, "d": a.d}),
                "closed_form",
                flags,
            ));
        }
        Command::ARank1(a) => {
            let value = a_rank1_symm(a.n, a.g, a.d)?;
            let mut flags = Vec::new();
            if a.d < a.g {
                flags.push("unverified_regime".to_string());
            }
            emit(result_json(
                &value,
                json!({"N": a.n, "g": a.g, "d": a.d}),
                "closed_form",
                flags,
            ));
        }
        Command::FClass(a) => {
            let q = match parse_insertion(&a.q) {
                Ok(q) => q,
                Err(m) => return Ok(usage_fail(&m)),
            };
            if a.closed_form && a.m != 1 {
                return Ok(usage_fail("--closed-form is only available for m = 1"));
            }
            let (value, method) = if a.closed_form {
                (f2_closed_m1(a.n, a.g, a.d, &q)?, "closed_form")
            } else {
                (f2_intersect(a.n, a.g, a.d, a.m, &q)?, "localization")
            };
            emit(result_json(
                &value,
                json!({"N": a.n, "Q": a.q, "g": a.g, "d": a.d, "m": a.m}),
                method,
                vec![],
            ));
        }
        Command::Grw(a) => {
            let value = match a.space {
                Space::Sg => grw_sg(a.n, a.g, a.d, a.m1, a.m2)?,
                Space::Og => grw_og(a.n, a.g, a.d, a.m1, a.m2)?,
            };
            let space = match a.space {
                Space::Sg => "sg",
                Space::Og => "og",
            };
            emit(result_json(
                &value,
                json!({"space": space, "n": a.n, "g": a.g, "d": a.d, "m1": a.m1, "m2": a.m2}),
                "closed_form",
                vec![],
            ));
        }
        Command::Euler(a) => {
            let values = if a.topological {
                etop_series(a.n, a.r, a.g, a.dmax)
            } else {
                if a.g != 0 {
                    return Ok(usage_fail(
                        "the virtual Euler characteristic series is genus 0 only",
                    ));
                }
                evir_series(a.n, a.r, a.dmax, isoquot::invariants::Form::Symplectic)?
            };
            for (d, v) in values.iter().enumerate() {
                println!("{d},{}", rational_string(v));
            }
        }
        Command::PlotData(a) => {
            let values = evir_series(a.n, a.r, a.dmax, isoquot::invariants::Form::Symplectic)?;
            let mut file = std::fs::File::create(&a.out).map_err(|e| {
                Error::UnsupportedFamily(format!("cannot create output file: {e}"))
            })?;
            writeln!(
                file,
                "# d\tabs_evir\tlog10_abs_evir (log10 is the only non-exact column; 12 decimal digits)"
            )
            .ok();
            for (d, v) in values.iter().enumerate() {
                let abs = if v < &Rational::from_integer(0.into()) {
                    -v.clone()
                } else {
                    v.clone()
                };
                writeln!(file, "{d}\t{}\t{}", rational_string(&abs), log10_abs(v)).ok();
            }
        }
        Command::Verify(a) => {
            let results = if a.suite == "all" {
                verify::run_all()
            } else {
                match verify::run_suite(&a.suite) {
                    Some(r) => r,
                    None => {
                        return Ok(usage_fail(&format!(
                            "unknown suite '{}'; available: {} or all",
                            a.suite,
                            verify::SUITE_NAMES.join(", ")
                        )))
                    }
                }
            };
            let all_pass = results.iter().all(|r| r.pass);
            let report: Vec<Value> = results
                .iter()
                .map(|r| {
                    json!({
                        "details": r.details,
                        "name": r.name,
                        "pass": r.pass,
                        "suite": r.suite,
                    })
                })
                .collect();
            emit(json!({"checks": report, "pass": all_pass}));
            if !all_pass {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
