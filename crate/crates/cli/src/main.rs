mod args;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;

use attain_kit::classify::{classify_with_tol, sweep_gamma, Constants, SweepRow, Verdict};
use attain_kit::constants::{fractional_constant, gns_constant_estimate, sobolev_constant, SharpConstant};
use attain_kit::curves::{sample_curves, CurveParams};
use attain_kit::error::Error;
use attain_kit::extremal::{build_maximizer, GridSpec};
use attain_kit::output::{document, write_curve_csv, write_profile_csv, write_sweep_csv};
use attain_kit::params::{Problem, ProblemParams, Regime, Target};
use attain_kit::verify::{run_all, CheckReport, SuiteConfig};

use args::*;

enum Failure {
    Usage(String),
    Lib(Error),
    Io(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<attain_kit::ParamError> for Failure {
    fn from(e: attain_kit::ParamError) -> Self {
        Failure::Lib(e.into())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn io_err(e: impl std::fmt::Display) -> Failure {
    Failure::Io(e.to_string())
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Lib(e) => match e {
                Error::Param(_)
                | Error::Domain { .. }
                | Error::MissingConstant(_)
                | Error::RegimeMismatch { .. }
                | Error::NoMaximizer(_) => 1,
                _ => 2,
            },
            Failure::Io(_) => 2,
            Failure::Verification => 3,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Io(m) => m.clone(),
            Failure::Lib(e) => e.to_string(),
            Failure::Verification => "verification failed".to_string(),
        }
    }
}

type Run<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let help = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return ExitCode::from(if help { 0 } else { 1 });
        }
    };
    if let Err(f) = init_threads() {
        eprintln!("attain-kit: {}", f.message());
        return ExitCode::from(f.code());
    }
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("attain-kit: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn init_threads() -> Run<()> {
    let Ok(raw) = std::env::var("ATTAIN_KIT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("ATTAIN_KIT_THREADS={raw:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Io(e.to_string()))
}

fn dispatch(cmd: Command) -> Run<()> {
    match cmd {
        Command::Classify(a) => run_classify(a),
        Command::Constants(a) => run_constants(a),
        Command::Curve(a) => run_curve(a),
        Command::Maximizer(a) => run_maximizer(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Verify(a) => run_verify(a),
    }
}

fn sink(path: Option<&Path>) -> Run<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit_json<T: Serialize>(out: &OutputArgs, body: &T) -> Run<()> {
    let mut w = sink(out.out.as_deref())?;
    writeln!(w, "{}", document(body)?)?;
    w.flush()?;
    Ok(())
}

fn build_problem(op: &OperatorArgs, gamma: f64, weight: &WeightArgs) -> Run<Problem> {
    let params = match (op.p, op.s) {
        (Some(p), None) => {
            if weight.beta.is_some() {
                return Err(Failure::Usage("--beta belongs to fractional problems; use --alpha".into()));
            }
            ProblemParams::local(op.n, p, op.q.0, gamma, weight.value())
        }
        (None, Some(s)) => {
            if weight.alpha.is_some() {
                return Err(Failure::Usage("--alpha belongs to local problems; use --beta".into()));
            }
            ProblemParams::fractional(op.n, s, op.q.0, gamma, weight.value())
        }
        _ => return Err(Failure::Usage("give exactly one of --p and --s".into())),
    };
    let problem = Problem::new(params)?;
    for w in &problem.warnings {
        eprintln!("attain-kit: warning: {w}");
    }
    Ok(problem)
}

fn resolve_constant(problem: &Problem, c: &ConstantArgs) -> Run<(Constants, SharpConstant)> {
    let n = problem.n();
    let (p, q) = (problem.exponents.base, problem.exponents.q);
    Ok(match problem.regime {
        Regime::CriticalLocal => {
            let s = sobolev_constant(n, p, c.resolution)?;
            (Constants::sobolev(s.value), s)
        }
        Regime::SubcriticalLocal => {
            let s = match c.gns_constant {
                Some(v) => fractional_constant(v, "--gns-constant")?,
                None => gns_constant_estimate(n, p, q, c.budget)?.constant,
            };
            (Constants::gns(s.value), s)
        }
        Regime::CriticalFractional | Regime::SubcriticalFractional => {
            let v = c.frac_constant.ok_or(Error::MissingConstant(problem.regime))?;
            let s = fractional_constant(v, "--frac-constant")?;
            (Constants::fractional(s.value), s)
        }
    })
}

#[derive(Serialize)]
struct ClassifyReport<'a> {
    #[serde(flatten)]
    verdict: &'a Verdict,
    constant: &'a SharpConstant,
    warnings: Vec<String>,
}

fn run_classify(a: ClassifyArgs) -> Run<()> {
    let problem = build_problem(&a.op, a.gamma, &a.weight)?;
    let (constants, constant) = resolve_constant(&problem, &a.constants)?;
    let verdict = classify_with_tol(&problem, &constants, a.tol)?;
    if a.output.csv {
        return Err(Failure::Usage("classify emits JSON only".into()));
    }
    emit_json(
        &a.output,
        &ClassifyReport {
            verdict: &verdict,
            constant: &constant,
            warnings: problem.warnings.iter().map(|w| w.to_string()).collect(),
        },
    )
}

fn run_constants(a: ConstantsArgs) -> Run<()> {
    if a.output.csv {
        return Err(Failure::Usage("constants emits JSON only".into()));
    }
    let probe = Problem::new(ProblemParams::local(a.n, a.p, a.q.0, 1.0, 0.0))?;
    let c = match probe.regime {
        Regime::CriticalLocal => sobolev_constant(a.n, probe.exponents.base, a.resolution)?,
        _ => gns_constant_estimate(a.n, probe.exponents.base, probe.exponents.q, a.budget)?.constant,
    };
    emit_json(&a.output, &c)
}

#[derive(Serialize)]
struct Rows<'a, T: Serialize> {
    rows: &'a [T],
}

fn run_curve(a: CurveArgs) -> Run<()> {
    let problem = build_problem(&a.op, a.gamma, &a.weight)?;
    let (constants, _) = resolve_constant(&problem, &a.constants)?;
    let cp = CurveParams::for_problem(&problem, constants.weight(&problem)?)?;
    let samples = sample_curves(&cp, a.t_min, a.t_max, a.grid)?;
    if a.output.json {
        return emit_json(&a.output, &Rows { rows: &samples });
    }
    let mut w = sink(a.output.out.as_deref())?;
    write_curve_csv(&mut w, &samples).map_err(io_err)?;
    w.flush()?;
    Ok(())
}

fn run_maximizer(a: MaximizerArgs) -> Run<()> {
    if !matches!(a.q.0, Target::Critical) {
        let problem = Problem::new(ProblemParams::local(a.n, a.p, a.q.0, a.gamma, a.alpha))?;
        if problem.regime != Regime::CriticalLocal {
            return Err(Error::RegimeMismatch {
                found: problem.regime,
                expected: "the critical local regime",
            }
            .into());
        }
    }
    let problem = Problem::new(ProblemParams::local(a.n, a.p, Target::Critical, a.gamma, a.alpha))?;
    let s = sobolev_constant(a.n, problem.exponents.base, a.resolution)?;
    let spec = GridSpec {
        per_decade: a.grid,
        ..GridSpec::default()
    };
    let m = build_maximizer(&problem, s.value, &spec)?;
    match (&a.output.out, a.output.csv) {
        (Some(path), _) => {
            let mut w = sink(Some(path))?;
            write_profile_csv(&mut w, &m.profile).map_err(io_err)?;
            w.flush()?;
            emit_json(&OutputArgs { json: true, csv: false, out: None }, &m)
        }
        (None, true) => {
            let mut w = sink(None)?;
            write_profile_csv(&mut w, &m.profile).map_err(io_err)?;
            w.flush()?;
            Ok(())
        }
        (None, false) => emit_json(&a.output, &m),
    }
}

fn run_sweep(a: SweepArgs) -> Run<()> {
    let grid = &a.gamma_range.0;
    let problem = build_problem(&a.op, grid[0], &a.weight)?;
    let (constants, _) = resolve_constant(&problem, &a.constants)?;
    let rows: Vec<SweepRow> = sweep_gamma(&problem, &constants, grid)?;
    if a.output.json {
        return emit_json(&a.output, &Rows { rows: &rows });
    }
    let mut w = sink(a.output.out.as_deref())?;
    write_sweep_csv(&mut w, &rows).map_err(io_err)?;
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    passed: bool,
    gns_224: f64,
    reports: &'a [CheckReport],
}

fn run_verify(a: VerifyArgs) -> Run<()> {
    if a.output.csv {
        return Err(Failure::Usage("verify emits JSON only".into()));
    }
    let gns = match a.gns_constant {
        Some(v) => v,
        None => gns_constant_estimate(2, 2.0, 4.0, a.budget)?.constant.value,
    };
    let cfg = SuiteConfig {
        seed: a.seed,
        profiles: a.profiles,
        gns_224: gns,
        fractional: a.frac_constant,
        resolution: a.resolution,
    };
    let reports = run_all(&cfg)?;
    let passed = reports.iter().all(|r| r.passed);
    let mut err = io::stderr().lock();
    writeln!(err, "{:<24} {:<6} {:>12} {:>10} {:>7}", "check", "result", "worst", "tolerance", "cases")?;
    for r in &reports {
        writeln!(
            err,
            "{:<24} {:<6} {:>12.3e} {:>10.1e} {:>7}",
            r.name,
            if r.passed { "pass" } else { "FAIL" },
            r.worst_violation,
            r.tolerance,
            r.n_cases
        )?;
        for d in &r.details {
            writeln!(err, "    {d}")?;
        }
    }
    emit_json(
        &a.output,
        &VerifyReport {
            passed,
            gns_224: gns,
            reports: &reports,
        },
    )?;
    if passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}
