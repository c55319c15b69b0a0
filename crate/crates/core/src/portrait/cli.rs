//! Command line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::{build_portrait, render_svg, report::to_json, write_report, PortraitConfig, SvgStyle};
use crate::error::Error;
use crate::local::hopf_analysis;
use crate::model::{classify_case, discriminants, ExactParams, Params};
use crate::numerics::{conjecture_scan, detect_limit_cycle, write_scan_csv, GridSpec, IntegratorConfig};

/// Environment variable for the scan worker count; `--jobs` wins over it.
pub const THREADS_ENV: &str = "KPORTRAIT_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "kportrait",
    version,
    about = "Global dynamics of a cubic predator-prey Kolmogorov system"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Triple {
    #[arg(long, allow_hyphen_values = true)]
    b: String,
    #[arg(long, allow_hyphen_values = true)]
    c: String,
    #[arg(long, allow_hyphen_values = true)]
    delta: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify a parameter triple (case, region, portrait letter).
    Classify {
        #[command(flatten)]
        params: Triple,
        /// Read the parameters as exact rationals such as 3/10.
        #[arg(long)]
        exact: bool,
        /// Print JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Hopf bifurcation data along b for fixed c and delta.
    Hopf {
        #[arg(long, allow_hyphen_values = true)]
        c: f64,
        #[arg(long, allow_hyphen_values = true)]
        delta: f64,
        #[arg(long)]
        json: bool,
    },
    /// Detect a limit cycle around P2 with the return map.
    Cycle {
        #[command(flatten)]
        params: Triple,
        #[arg(long)]
        json: bool,
    },
    /// Build the global portrait, write an SVG and optionally a JSON report.
    Portrait {
        #[command(flatten)]
        params: Triple,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Scan a (b, c, delta) grid for cycles in the conjectured region.
    Scan {
        /// bmin:bmax:n,cmin:cmax:n,dmin:dmax:n
        #[arg(long)]
        grid: String,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    Usage(String),
    Analysis(String),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Analysis(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams { .. } | Error::InvalidGrid(_) | Error::InvalidConfig(_) => {
                Failure::Usage(e.to_string())
            }
            Error::HopfRequiresCGreaterDelta { .. } => Failure::Usage(e.to_string()),
            other => Failure::Analysis(other.to_string()),
        }
    }
}

fn parse_float(name: &'static str, s: &str) -> Result<f64, Failure> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Failure::Usage(format!("--{name}: `{s}` is not a number (use --exact for fractions)")))
}

fn params_of(t: &Triple, exact: bool) -> Result<Params, Failure> {
    if exact {
        return Ok(Params::from_exact(ExactParams::parse(&t.b, &t.c, &t.delta)?));
    }
    Ok(Params::new(
        parse_float("b", &t.b)?,
        parse_float("c", &t.c)?,
        parse_float("delta", &t.delta)?,
    )?)
}

/// Worker count: `--jobs`, then the environment variable, then all cores.
pub fn resolve_jobs(flag: Option<usize>, env: Option<&str>) -> Result<usize, String> {
    if let Some(n) = flag {
        return if n == 0 {
            Err("--jobs must be at least 1".into())
        } else {
            Ok(n)
        };
    }
    if let Some(v) = env {
        return match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(format!("{THREADS_ENV}=`{v}` is not a positive integer")),
        };
    }
    Ok(std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn execute(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    match cmd {
        Command::Classify { params, exact, json } => {
            let p = params_of(&params, exact)?;
            let label = classify_case(&p);
            let d = discriminants(&p);
            if json {
                #[derive(serde::Serialize)]
                struct Out<'a> {
                    params: super::ParamsRecord,
                    case_label: &'a crate::model::CaseLabel,
                    discriminants: crate::model::Discriminants,
                }
                let out = Out {
                    params: (&p).into(),
                    case_label: &label,
                    discriminants: d,
                };
                write!(stdout, "{}", to_json(&out)?)?;
            } else {
                writeln!(stdout, "{label}")?;
                writeln!(
                    stdout,
                    "A = {:e}, B = {:e}, arithmetic {:?}",
                    d.a, d.b, label.arithmetic
                )?;
            }
        }
        Command::Hopf { c, delta, json } => {
            if !(c > 0.0 && delta > 0.0) {
                return Err(Failure::Usage("--c and --delta must be positive".into()));
            }
            let h = hopf_analysis(c, delta)?;
            if json {
                write!(stdout, "{}", to_json(&h)?)?;
            } else {
                writeln!(stdout, "b0 = {}", h.b0)?;
                writeln!(stdout, "dmu/db(b0) = {}", h.dmu_db_at_b0)?;
                writeln!(stdout, "omega(b0) = {}", h.omega0)?;
                writeln!(stdout, "P2(b0) = ({}, {})", h.equilibrium.x, h.equilibrium.y)?;
                writeln!(stdout, "g20 = {} {:+}i", h.g20.re, h.g20.im)?;
                writeln!(stdout, "g11 = {} {:+}i", h.g11.re, h.g11.im)?;
                writeln!(stdout, "g21 = {} {:+}i", h.g21.re, h.g21.im)?;
                writeln!(
                    stdout,
                    "l1 = {} ({})",
                    h.ell1,
                    if h.is_supercritical() {
                        "supercritical"
                    } else {
                        "subcritical"
                    }
                )?;
            }
        }
        Command::Cycle { params, json } => {
            let p = params_of(&params, false)?;
            let r = detect_limit_cycle(&p, &IntegratorConfig::default())?;
            if json {
                write!(stdout, "{}", to_json(&r)?)?;
            } else {
                writeln!(stdout, "verdict: {}", r.verdict)?;
                writeln!(stdout, "found: {}", r.found)?;
                if let (Some(x), Some(m), Some(t)) = (r.section_x, r.multiplier, r.period) {
                    writeln!(stdout, "section_x = {x}")?;
                    writeln!(stdout, "multiplier = {m}")?;
                    writeln!(stdout, "period = {t}")?;
                    writeln!(stdout, "encloses P2: {}", r.encloses_p2)?;
                }
            }
        }
        Command::Portrait { params, out, report } => {
            let p = params_of(&params, false)?;
            let rep = build_portrait(&p, &PortraitConfig::default());
            std::fs::write(&out, render_svg(&rep, &SvgStyle::default())).map_err(Error::from)?;
            if let Some(path) = report {
                std::fs::write(&path, write_report(&rep)?).map_err(Error::from)?;
            }
            writeln!(stdout, "{}", rep.case_label)?;
            for w in &rep.warnings {
                writeln!(stderr, "warning: {w}")?;
            }
        }
        Command::Scan { grid, jobs, out } => {
            let grid: GridSpec = grid.parse()?;
            let env = std::env::var(THREADS_ENV).ok();
            let jobs = resolve_jobs(jobs, env.as_deref()).map_err(Failure::Usage)?;
            let rows = conjecture_scan(&grid, &IntegratorConfig::default(), jobs)?;
            let file = std::fs::File::create(&out).map_err(Error::from)?;
            write_scan_csv(&rows, std::io::BufWriter::new(file))?;
            let found = rows.iter().filter(|r| r.found_cycle()).count();
            writeln!(stdout, "{} cells scanned, {} with a cycle", rows.len(), found)?;
        }
    }
    Ok(())
}

/// Runs the CLI and returns the process exit status: 0 on success, 2 for
/// invalid arguments, 1 when the analysis fails.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // --help and --version also land here, on stdout
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return 2;
            }
            let _ = write!(stdout, "{}", e.render());
            return 0;
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(stderr, "error: {m}\n\nFor more information, try '--help'.");
            2
        }
        Err(Failure::Analysis(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jobs_precedence() {
        assert_eq!(resolve_jobs(Some(3), Some("5")), Ok(3));
        assert_eq!(resolve_jobs(None, Some("5")), Ok(5));
        assert!(resolve_jobs(None, Some("x")).is_err());
        assert!(resolve_jobs(Some(0), None).is_err());
        assert!(resolve_jobs(None, None).unwrap() >= 1);
    }

    fn capture(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_with(
            std::iter::once("kportrait").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn classify_text_and_json() {
        let (code, out, _) = capture(&["classify", "--b", "0.5", "--c", "1", "--delta", "0.25"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("case 5, region III, portrait B (proven)"));

        let (code, out, _) = capture(&[
            "classify", "--b", "3/5", "--c", "1", "--delta", "1/4", "--exact", "--json",
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["case_label"]["case"], 7);
        assert_eq!(v["case_label"]["boundary"], "a-zero");
        assert_eq!(v["case_label"]["arithmetic"], "exact");
    }

    #[test]
    fn bad_input_goes_to_stderr() {
        for args in [
            &["classify", "--b", "x", "--c", "1", "--delta", "0.25"][..],
            &["scan", "--grid", "1:2", "--out", "/dev/null"],
            &["frobnicate"],
        ] {
            let (code, out, err) = capture(args);
            assert_eq!(code, 2, "{args:?}");
            assert!(out.is_empty() && !err.is_empty());
        }
        let (code, out, _) = capture(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("portrait"));
    }

    #[test]
    fn hopf_json_round_trips() {
        let (code, out, _) = capture(&["hopf", "--c", "1", "--delta", "0.25", "--json"]);
        assert_eq!(code, 0);
        let h: crate::local::HopfData = serde_json::from_str(&out).unwrap();
        assert_eq!(h, hopf_analysis(1.0, 0.25).unwrap());
    }

    #[test]
    fn cycle_json() {
        let (code, out, _) = capture(&["cycle", "--b", "0.5", "--c", "1", "--delta", "0.25", "--json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["verdict"], "cycle-found");
        assert_eq!(v["encloses_p2"], true);
    }

    #[test]
    fn portrait_writes_svg_and_report() {
        let dir = tempfile::tempdir().unwrap();
        let svg = dir.path().join("p.svg");
        let json = dir.path().join("p.json");
        let (code, out, err) = capture(&[
            "portrait",
            "--b",
            "2",
            "--c",
            "1",
            "--delta",
            "0.2",
            "--out",
            svg.to_str().unwrap(),
            "--report",
            json.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{err}");
        assert!(out.starts_with("case 6, region II-a"));
        let s = std::fs::read_to_string(&svg).unwrap();
        assert!(s.starts_with("<svg") && s.contains("portrait C (proven)"));
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
        assert_eq!(v["schema_version"], "1");
        assert_eq!(v["portrait_letter"], "C");
    }

    #[test]
    fn scan_csv_independent_of_jobs() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.csv");
        let grid = "0.8:1.2:2,1:1.5:2,0.2:0.3:2";
        assert_eq!(
            capture(&["scan", "--grid", grid, "--jobs", "1", "--out", a.to_str().unwrap()]).0,
            0
        );
        assert_eq!(
            capture(&["scan", "--grid", grid, "--jobs", "4", "--out", b.to_str().unwrap()]).0,
            0
        );
        let (ca, cb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        assert_eq!(ca, cb);
        assert!(String::from_utf8(ca).unwrap().starts_with("b,c,delta,case,verdict"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(capture(&["classify", "--b", "2", "--c", "1", "--delta", "1"]).0, 0);
        assert_eq!(capture(&["classify", "--b", "-1", "--c", "1", "--delta", "1"]).0, 2);
        assert_eq!(capture(&["classify", "--bogus"]).0, 2);
        assert_eq!(capture(&["hopf", "--c", "1", "--delta", "2"]).0, 2);
        assert_eq!(capture(&["cycle", "--b", "2", "--c", "1", "--delta", "1"]).0, 1);
    }
}
