//! `roughbesov`: path norms, signatures, rough-path distances, RDE solves and
//! verification suites from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input/parse error,
//! 3 parameter violation, 4 grid mismatch, 5 solver blow-up.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use rough_besov::distances::{rho_levels, DistanceKind, DistanceSpec};
use rough_besov::io::{read_field_file, read_path_file, signature_to_json, write_path_csv, write_path_file};
use rough_besov::norms::{norm, Exponent, NormKind, NormSpec};
use rough_besov::path::{lift, EuclideanPath, GridInterval};
use rough_besov::rde::{solve_bv, solve_rough, RdeConfig};
use rough_besov::verify::record::{write_csv, write_json, write_summary};
use rough_besov::verify::{failures, run_suite, Suite};
use rough_besov::Error;

#[derive(Parser)]
#[command(name = "roughbesov", version, about = "Besov–Nikolskii path norms, rough-path distances and RDE solvers")]
struct Cli {
    /// Log verbosity: -v info, -vv debug.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Norm of a sampled path.
    Norm {
        input: PathBuf,
        /// Hoelder, QVar, RieszV, MixedV, Nikolskii, RefinedNikolskii or FracSobolev.
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        /// Integrability exponent (`q` for QVar); `inf` allowed where defined.
        #[arg(long, default_value = "2")]
        p: String,
        /// Subinterval `s:t` in time units; both ends must be grid points.
        #[arg(long)]
        interval: Option<String>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Endpoint signature as nested JSON arrays.
    Sig {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// Inhomogeneous distance between the lifts of two paths on one grid.
    Dist {
        first: PathBuf,
        second: PathBuf,
        /// QVarDist, RieszDist, MixedDist or NikolskiiHatDist.
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// Solve `dY = V(Y) dX` driven by a sampled path.
    Solve {
        driver: PathBuf,
        /// Vector-field spec JSON.
        #[arg(long)]
        field: PathBuf,
        /// Comma-separated initial condition.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        y0: Vec<f64>,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long, default_value_t = 1)]
        substeps: usize,
        /// Solution CSV; written to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite and write JSON and CSV reports.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "reports")]
        out: PathBuf,
    },
}

struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::Parse { .. } | Error::Io(_) => 2,
            Error::GridMismatch => 4,
            Error::BlowUp { .. } => 5,
            _ => 3,
        };
        Failure { code, msg: err.to_string() }
    }
}

fn io_failure(path: &Path, err: std::io::Error) -> Failure {
    Failure { code: 2, msg: format!("{}: {err}", path.display()) }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// `%.12g`-style formatting: 12 significant digits, trailing zeros trimmed.
fn sig12(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let s = format!("{:.*}", (11 - exp).max(0) as usize, v);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{v:.11e}");
        let (mant, e) = s.split_once('e').expect("scientific format");
        let mant = if mant.contains('.') { mant.trim_end_matches('0').trim_end_matches('.') } else { mant };
        format!("{mant}e{e}")
    }
}

fn read_path(path: &Path) -> CliResult<EuclideanPath> {
    read_path_file(path).map_err(|e| match e {
        Error::Io(msg) => Failure { code: 2, msg: format!("{}: {msg}", path.display()) },
        other => other.into(),
    })
}

fn parse_interval(spec: Option<&str>, path: &EuclideanPath) -> CliResult<GridInterval> {
    let grid = path.grid();
    let Some(spec) = spec else {
        return Ok(GridInterval::full(grid));
    };
    let bad = |msg: String| Failure { code: 3, msg };
    let (s, t) = spec.split_once(':').ok_or_else(|| bad(format!("interval must be s:t, got '{spec}'")))?;
    let parse = |x: &str| x.trim().parse::<f64>().map_err(|_| bad(format!("invalid interval endpoint '{x}'")));
    let (s, t) = (parse(s)?, parse(t)?);
    let index = |x: f64| grid.index_of(x).ok_or_else(|| bad(format!("interval endpoint {x} is not a grid point")));
    let (i, j) = (index(s)?, index(t)?);
    if i > j {
        return Err(bad(format!("interval start {s} exceeds end {t}")));
    }
    Ok(GridInterval::new(i, j))
}

fn cmd_norm(
    input: &Path,
    kind: &str,
    delta: f64,
    p: &str,
    interval: Option<&str>,
    json_out: Option<&Path>,
) -> CliResult<()> {
    let path = read_path(input)?;
    let kind: NormKind = kind.parse()?;
    let p: Exponent = p.parse()?;
    let spec = NormSpec::new(kind, delta, p);
    spec.validate()?;
    let iv = parse_interval(interval, &path)?;
    let value = norm(&path, &spec, iv)?;
    println!("{}", sig12(value));
    if let Some(out) = json_out {
        let times = path.grid().times();
        let p_json = match p {
            Exponent::Finite(p) => json!(p),
            Exponent::Infinite => json!("inf"),
        };
        let doc = json!({
            "schema_version": rough_besov::io::SCHEMA_VERSION,
            "kind": kind.name(),
            "delta": delta,
            "p": p_json,
            "interval": [times[iv.start], times[iv.end]],
            "value": value,
            "grid_points": path.grid().len(),
        });
        let text = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
        fs::write(out, text + "\n").map_err(|e| io_failure(out, e))?;
    }
    Ok(())
}

fn cmd_sig(input: &Path, depth: usize) -> CliResult<()> {
    let path = read_path(input)?;
    let x = lift(&path, depth)?;
    let end = x.value(path.grid().intervals());
    println!("{}", serde_json::to_string_pretty(&signature_to_json(end)).expect("JSON values serialize"));
    Ok(())
}

fn cmd_dist(first: &Path, second: &Path, kind: &str, delta: f64, p: f64, depth: usize) -> CliResult<()> {
    let (a, b) = (read_path(first)?, read_path(second)?);
    let spec = DistanceSpec::new(kind.parse::<DistanceKind>()?, delta, p);
    spec.validate()?;
    if a.grid() != b.grid() {
        return Err(Error::GridMismatch.into());
    }
    let (x1, x2) = (lift(&a, depth)?, lift(&b, depth)?);
    let levels = rho_levels(&x1, &x2, &spec, GridInterval::full(a.grid()))?;
    let total = levels.iter().copied().fold(0.0, f64::max);
    println!("{}", sig12(total));
    for (k, v) in levels.iter().enumerate() {
        println!("level {}: {}", k + 1, sig12(*v));
    }
    Ok(())
}

fn cmd_solve(
    driver: &Path,
    field: &Path,
    y0: &[f64],
    depth: usize,
    substeps: usize,
    out: Option<&Path>,
) -> CliResult<()> {
    let x = read_path(driver)?;
    let v = read_field_file(field).map_err(|e| match e {
        Error::Io(msg) => Failure { code: 2, msg: format!("{}: {msg}", field.display()) },
        other => other.into(),
    })?;
    let y = if depth == 1 {
        solve_bv(y0, &v, &x, &RdeConfig::euler_bv(substeps))?
    } else {
        let cfg = RdeConfig::rough(depth, substeps);
        cfg.validate()?;
        solve_rough(y0, &v, &lift(&x, depth)?, &cfg)?
    };
    match out {
        Some(file) => write_path_file(&y, file)?,
        None => write_path_csv(&y, std::io::stdout().lock())?,
    }
    let end = y.point(y.grid().intervals()).iter().map(|v| sig12(*v)).collect::<Vec<_>>().join(",");
    if out.is_some() {
        println!("{end}");
    } else {
        eprintln!("terminal value: {end}");
    }
    Ok(())
}

fn cmd_verify(suite: &str, seed: u64, out: &Path) -> CliResult<()> {
    let suite: Suite = suite.parse()?;
    let records = run_suite(suite, seed)?;
    fs::create_dir_all(out).map_err(|e| io_failure(out, e))?;
    write_json(&records, &out.join("report.json"))?;
    write_csv(&records, &out.join("report.csv"))?;
    write_summary(&records, &mut std::io::stdout().lock()).map_err(|e| io_failure(out, e))?;
    let failed = failures(&records);
    println!("{} records, {} failed", records.len(), failed.len());
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure { code: 1, msg: format!("failed checks: {}", failed.join(", ")) })
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Norm { input, kind, delta, p, interval, json } => {
            cmd_norm(&input, &kind, delta, &p, interval.as_deref(), json.as_deref())
        }
        Command::Sig { input, depth } => cmd_sig(&input, depth),
        Command::Dist { first, second, kind, delta, p, depth } => cmd_dist(&first, &second, &kind, delta, p, depth),
        Command::Solve { driver, field, y0, depth, substeps, out } => {
            cmd_solve(&driver, &field, &y0, depth, substeps, out.as_deref())
        }
        Command::Verify { suite, seed, out } => cmd_verify(&suite, seed, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::sig12;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(1.0), "1");
        assert_eq!(sig12(std::f64::consts::PI), "3.14159265359");
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(-2.5e-7), "-2.5e-7");
        assert_eq!(sig12(1.234e15), "1.234e15");
        assert_eq!(sig12(123456.789), "123456.789");
    }
}
