mod cli;
mod config;

use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use cascade_core::scan::{compare_models, run_scan_with_threads, sweep_gain, Axis, Constraint, CrossCheck, Parameter, Quantity, ScanSpec};
use cascade_core::{analyze, solve_point, Error, ModelParams64, SolveOptions, Solver};
use clap::Parser;
use num_complex::Complex;
use serde::Serialize;

use cli::{ClassifyArgs, Cli, Command, CompareArgs, Format, ParamArgs, ScanArgs, SolveArgs, SweepGainArgs};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or parameter values.
    Input(String),
    Core(Error),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Input(_) => 2,
            CliError::Core(Error::MultipleRoots { .. }) => 3,
            CliError::Core(Error::CrossCheckFailed { .. }) => 4,
            CliError::Core(Error::StepSizeUnderflow { .. } | Error::StepLimitExceeded { .. }) => 1,
            CliError::Core(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::Io(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(a) => config::resolve(a.clone(), a.config.as_deref()).and_then(solve),
        Command::Classify(a) => config::resolve(a.clone(), a.config.as_deref()).and_then(classify),
        Command::Scan(a) => config::resolve(a.clone(), a.config.as_deref()).and_then(scan),
        Command::SweepGain(a) => config::resolve(a.clone(), a.config.as_deref()).and_then(gain),
        Command::Compare(a) => config::resolve(a.clone(), a.config.as_deref()).and_then(compare),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cascade: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn params(a: &ParamArgs) -> Result<ModelParams64> {
    let idler_given = a.eta_i.is_some() || a.eta_i_phase.is_some() || a.delta_i.is_some();
    if a.degenerate && a.three_mode {
        return Err(CliError::Input("--degenerate and --three-mode are exclusive".into()));
    }
    if (a.degenerate || a.three_mode) && idler_given {
        return Err(CliError::Input("idler couplings are fixed by --degenerate and --three-mode".into()));
    }
    let coupling = |name: &str, modulus: Option<f64>, phase: Option<f64>| -> Result<Complex<f64>> {
        let r = modulus.unwrap_or(0.0);
        if r < 0.0 {
            return Err(CliError::Input(format!("--{name} is a modulus and must be nonnegative (got {r})")));
        }
        Ok(Complex::from_polar(r, phase.unwrap_or(0.0)))
    };
    let mut p = ModelParams64::new(
        coupling("kappa", a.kappa, a.kappa_phase)?,
        coupling("eta-s", a.eta_s, a.eta_s_phase)?,
        coupling("eta-i", a.eta_i, a.eta_i_phase)?,
        a.delta_tilde.unwrap_or(0.0),
        a.delta_s.unwrap_or(0.0),
        a.delta_i.unwrap_or(0.0),
        a.length.unwrap_or(1.0),
    );
    constraint(a).apply(&mut p);
    Ok(p.validate()?)
}

fn constraint(a: &ParamArgs) -> Constraint {
    if a.degenerate {
        Constraint::Degenerate
    } else if a.three_mode {
        Constraint::ThreeMode
    } else {
        Constraint::None
    }
}

fn solver(name: Option<&str>) -> Result<Solver> {
    name.map_or(Ok(Solver::default()), |s| s.parse().map_err(|e: Error| CliError::Input(e.to_string())))
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn json<S: Serialize>(value: &S) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("results serialize");
    text.push('\n');
    text
}

fn solve(a: SolveArgs) -> Result<()> {
    let p = params(&a.params)?;
    let z = a.z.unwrap_or(p.length);
    if !(z >= 0.0) || !z.is_finite() {
        return Err(CliError::Input(format!("--z must be finite and nonnegative (got {z})")));
    }
    let options = SolveOptions {
        solver: solver(a.solver.as_deref())?,
        fallback: !a.no_fallback,
    };
    emit(a.output.as_deref(), &json(&solve_point(&p, z, options)?))
}

fn classify(a: ClassifyArgs) -> Result<()> {
    #[derive(Serialize)]
    struct Report<'a> {
        params: &'a ModelParams64,
        characteristic: cascade_core::CharacteristicData64,
    }
    let p = params(&a.params)?;
    emit(a.output.as_deref(), &json(&Report { params: &p, characteristic: analyze(&p) }))
}

fn axis(flag: &str, text: &str) -> Result<Axis> {
    let bad = |why: String| CliError::Input(format!("--{flag} `{text}`: {why}"));
    let parts: Vec<&str> = text.split(':').collect();
    let parameter: Parameter = parts[0].parse().map_err(|e: Error| bad(e.to_string()))?;
    let number = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(format!("`{s}` is not a number")));
    match parts.len() {
        2 => Ok(Axis::fixed(parameter, number(parts[1])?)),
        4 => {
            let count = parts[3].trim().parse().map_err(|_| bad(format!("`{}` is not a count", parts[3])))?;
            Ok(Axis::new(parameter, number(parts[1])?, number(parts[2])?, count))
        }
        _ => Err(bad("expected NAME:MIN:MAX:COUNT or NAME:VALUE".into())),
    }
}

fn scan(a: ScanArgs) -> Result<()> {
    let base = params(&a.params)?;
    let axis1 = axis("axis1", a.axis1.as_deref().ok_or_else(|| CliError::Input("--axis1 is required".into()))?)?;
    let axis2 = a.axis2.as_deref().map(|t| axis("axis2", t)).transpose()?;
    let quantities = match &a.quantities {
        None => Quantity::ALL.to_vec(),
        Some(list) => list
            .iter()
            .filter(|q| !q.trim().is_empty())
            .map(|q| q.parse().map_err(|e: Error| CliError::Input(e.to_string())))
            .collect::<Result<_>>()?,
    };
    let mut spec = ScanSpec::new(base, axis1, axis2, quantities);
    spec.constraint = constraint(&a.params);
    spec.solver = solver(a.solver.as_deref())?;
    spec.fallback = !a.no_fallback;
    if a.cross_check.is_some() || a.strict {
        let mut check = CrossCheck::new(a.seed.unwrap_or(0), a.strict);
        if let Some(f) = a.cross_check {
            check.fraction = f;
        }
        spec.cross_check = Some(check);
    }
    let result = run_scan_with_threads(&spec, a.threads)?;
    let text = match a.format.unwrap_or(Format::Csv) {
        Format::Csv => result.to_csv(),
        Format::Json => result.to_json() + "\n",
    };
    emit(a.output.as_deref(), &text)?;
    if let Some(report) = &result.cross_check {
        if !report.violations.is_empty() {
            eprintln!(
                "cascade: cross-check found {} disagreeing points among {} checked",
                report.violating_points(),
                report.checked
            );
        }
    }
    Ok(result.enforce_strict()?)
}

fn gain(a: SweepGainArgs) -> Result<()> {
    let dsl = a.delta_s_l.ok_or_else(|| CliError::Input("--delta-s-l is required".into()))?;
    let run = || sweep_gain(dsl, a.ratio.unwrap_or(1.0), a.gamma_max.unwrap_or(6.0), a.points.unwrap_or(61));
    let sweep = match a.threads {
        Some(n) => rayon_pool(n)?.install(run),
        None => run(),
    }?;
    let text = match a.format.unwrap_or(Format::Csv) {
        Format::Csv => sweep.table().to_csv(),
        Format::Json => sweep.to_json() + "\n",
    };
    emit(a.output.as_deref(), &text)
}

fn rayon_pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| CliError::Io(format!("cannot start worker threads: {e}")))
}

fn compare(a: CompareArgs) -> Result<()> {
    let c = compare_models(&params(&a.params)?)?;
    let text = match a.format.unwrap_or(Format::Csv) {
        Format::Csv => c.table().to_csv(),
        Format::Json => json(&c),
    };
    emit(a.output.as_deref(), &text)
}
