//! Parameter sweeps and grids with parallel, order-preserving evaluation.

mod emit;
mod sweep;

pub use emit::{Cell, Table};
pub use sweep::{compare_models, sweep_gain, GainRow, GainSweep, ModelComparison, ModelValues};

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::characteristic::{classify, Area, Regime};
use crate::error::{Error, Result};
use crate::matrix::BogoliubovMatrix;
use crate::observables::{averaged_model, collective_min_variance, photon_numbers, single_mode_min_variance, Mode};
use crate::oracle::integrate_to;
use crate::params::ModelParams;
use crate::solve::{solve_matrix, SolveOptions, Solver};

/// Scannable parameter. Complex couplings are swept in modulus at the base phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parameter {
    Kappa,
    EtaS,
    EtaI,
    DeltaTilde,
    DeltaS,
    DeltaI,
    Length,
}

impl Parameter {
    pub const ALL: [Parameter; 7] = [
        Parameter::Kappa,
        Parameter::EtaS,
        Parameter::EtaI,
        Parameter::DeltaTilde,
        Parameter::DeltaS,
        Parameter::DeltaI,
        Parameter::Length,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Parameter::Kappa => "kappa",
            Parameter::EtaS => "eta_s",
            Parameter::EtaI => "eta_i",
            Parameter::DeltaTilde => "delta_tilde",
            Parameter::DeltaS => "delta_s",
            Parameter::DeltaI => "delta_i",
            Parameter::Length => "length",
        }
    }

    fn apply(self, params: &mut ModelParams<f64>, value: f64) {
        fn modulus(z: &mut Complex<f64>, value: f64) {
            *z = if z.norm() > 0.0 {
                *z * (value / z.norm())
            } else {
                Complex::new(value, 0.0)
            };
        }
        match self {
            Parameter::Kappa => modulus(&mut params.kappa, value),
            Parameter::EtaS => modulus(&mut params.eta_s, value),
            Parameter::EtaI => modulus(&mut params.eta_i, value),
            Parameter::DeltaTilde => params.delta_tilde = value,
            Parameter::DeltaS => params.delta_s = value,
            Parameter::DeltaI => params.delta_i = value,
            Parameter::Length => params.length = value,
        }
    }
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Parameter {
    type Err = Error;

    /// Accepts `eta_s` as well as the modulus spelling `|eta_s|`.
    fn from_str(s: &str) -> Result<Self> {
        let bare = s.trim().trim_start_matches('|').trim_end_matches('|');
        Parameter::ALL
            .into_iter()
            .find(|p| p.as_str() == bare)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown parameter `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Regime,
    NAs,
    NAi,
    NBs,
    NBi,
    MinvarA,
    MinvarB,
    MinvarC,
    GrowthRate,
}

impl Quantity {
    pub const ALL: [Quantity; 9] = [
        Quantity::Regime,
        Quantity::NAs,
        Quantity::NAi,
        Quantity::NBs,
        Quantity::NBi,
        Quantity::MinvarA,
        Quantity::MinvarB,
        Quantity::MinvarC,
        Quantity::GrowthRate,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Quantity::Regime => "regime",
            Quantity::NAs => "n_as",
            Quantity::NAi => "n_ai",
            Quantity::NBs => "n_bs",
            Quantity::NBi => "n_bi",
            Quantity::MinvarA => "minvar_a",
            Quantity::MinvarB => "minvar_b",
            Quantity::MinvarC => "minvar_c",
            Quantity::GrowthRate => "growth_rate",
        }
    }

    /// Whether the value depends on the solver rather than only on the roots.
    pub fn needs_matrix(self) -> bool {
        !matches!(self, Quantity::Regime | Quantity::GrowthRate)
    }

    /// Value from a matrix; `None` where it is undefined (squeezing off degeneracy).
    fn from_matrix(self, m: &BogoliubovMatrix<f64>) -> Option<f64> {
        let n = || photon_numbers(m);
        match self {
            Quantity::NAs => Some(n().n_as),
            Quantity::NAi => Some(n().n_ai),
            Quantity::NBs => Some(n().n_bs),
            Quantity::NBi => Some(n().n_bi),
            Quantity::MinvarA => single_mode_min_variance(m, Mode::A).ok().map(|s| s.min_variance),
            Quantity::MinvarB => single_mode_min_variance(m, Mode::B).ok().map(|s| s.min_variance),
            Quantity::MinvarC => collective_min_variance(m).ok().map(|s| s.min_variance),
            Quantity::Regime | Quantity::GrowthRate => None,
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.as_str() == s.trim())
            .ok_or_else(|| Error::InvalidSpec(format!("unknown quantity `{s}`")))
    }
}

/// Relation imposed on every grid point after the axes are applied.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    #[default]
    None,
    /// `eta_i = eta_s`, `delta_i = delta_s`.
    Degenerate,
    /// `eta_i = 0`, `delta_i = 0`.
    ThreeMode,
}

impl Constraint {
    pub fn apply(self, params: &mut ModelParams<f64>) {
        match self {
            Constraint::None => {}
            Constraint::Degenerate => {
                params.eta_i = params.eta_s;
                params.delta_i = params.delta_s;
            }
            Constraint::ThreeMode => {
                params.eta_i = Complex::new(0.0, 0.0);
                params.delta_i = 0.0;
            }
        }
    }
}

/// Uniform axis from `min` to `max` inclusive. A single-point axis needs `min == max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub parameter: Parameter,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(parameter: Parameter, min: f64, max: f64, count: usize) -> Self {
        Self {
            parameter,
            min,
            max,
            count,
        }
    }

    pub fn fixed(parameter: Parameter, value: f64) -> Self {
        Self::new(parameter, value, value, 1)
    }

    pub fn value(&self, k: usize) -> f64 {
        if k + 1 == self.count {
            self.max
        } else {
            self.min + (self.max - self.min) * (k as f64 / (self.count - 1) as f64)
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|k| self.value(k)).collect()
    }

    fn check(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(Error::InvalidSpec(format!("axis `{}` has non-finite bounds", self.parameter)));
        }
        if self.count == 0 || (self.count == 1 && self.min != self.max) {
            return Err(Error::InvalidSpec(format!(
                "axis `{}` needs count >= 2 (or count 1 with min = max)",
                self.parameter
            )));
        }
        Ok(())
    }
}

/// Random-sample agreement check between the closed form and the oracle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    #[serde(default = "CrossCheck::default_fraction")]
    pub fraction: f64,
    #[serde(default)]
    pub seed: u64,
    /// Turn any disagreement into a scan failure.
    #[serde(default)]
    pub strict: bool,
}

impl CrossCheck {
    pub const RELATIVE_TOLERANCE: f64 = 1e-5;
    pub const ABSOLUTE_FLOOR: f64 = 1e-9;

    fn default_fraction() -> f64 {
        0.05
    }

    pub fn new(seed: u64, strict: bool) -> Self {
        Self {
            fraction: Self::default_fraction(),
            seed,
            strict,
        }
    }
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanSpec {
    pub base: ModelParams<f64>,
    #[serde(default)]
    pub constraint: Constraint,
    pub axis1: Axis,
    #[serde(default)]
    pub axis2: Option<Axis>,
    #[serde(default)]
    pub quantities: Vec<Quantity>,
    #[serde(default)]
    pub solver: Solver,
    /// Use the oracle where the closed form cannot be trusted.
    #[serde(default = "default_true")]
    pub fallback: bool,
    #[serde(default)]
    pub cross_check: Option<CrossCheck>,
}

impl ScanSpec {
    pub fn new(base: ModelParams<f64>, axis1: Axis, axis2: Option<Axis>, quantities: Vec<Quantity>) -> Self {
        Self {
            base,
            constraint: Constraint::None,
            axis1,
            axis2,
            quantities,
            solver: Solver::Analytic,
            fallback: true,
            cross_check: None,
        }
    }

    pub fn len(&self) -> usize {
        self.axis1.count * self.axis2.map_or(1, |a| a.count)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn axes(&self) -> Vec<Axis> {
        std::iter::once(self.axis1).chain(self.axis2).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let axes = self.axes();
        for axis in &axes {
            axis.check()?;
            let tied = matches!(axis.parameter, Parameter::EtaI | Parameter::DeltaI);
            if tied && self.constraint != Constraint::None {
                return Err(Error::InvalidSpec(format!(
                    "axis `{}` is fixed by the {:?} constraint",
                    axis.parameter, self.constraint
                )));
            }
        }
        if axes.len() == 2 && axes[0].parameter == axes[1].parameter {
            return Err(Error::InvalidSpec("both axes sweep the same parameter".into()));
        }
        let mut seen = HashSet::new();
        if let Some(q) = self.quantities.iter().find(|q| !seen.insert(**q)) {
            return Err(Error::InvalidSpec(format!("quantity `{q}` listed twice")));
        }
        if let Some(c) = &self.cross_check {
            if !(c.fraction > 0.0 && c.fraction <= 1.0) {
                return Err(Error::InvalidSpec("cross-check fraction must lie in (0, 1]".into()));
            }
        }
        Ok(())
    }

    /// Axis values of grid point `index` (axis 2 outer, axis 1 inner).
    pub fn coordinates(&self, index: usize) -> Vec<f64> {
        let (i, j) = (index % self.axis1.count, index / self.axis1.count);
        std::iter::once(self.axis1.value(i))
            .chain(self.axis2.map(|a| a.value(j)))
            .collect()
    }

    pub fn params_at(&self, index: usize) -> ModelParams<f64> {
        let mut p = self.base;
        for (axis, value) in self.axes().iter().zip(self.coordinates(index)) {
            axis.parameter.apply(&mut p, value);
        }
        self.constraint.apply(&mut p);
        p
    }

    fn options(&self) -> SolveOptions {
        SolveOptions {
            solver: self.solver,
            fallback: self.fallback,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub index: usize,
    pub axes: Vec<f64>,
    pub values: Vec<Cell>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub index: usize,
    pub axes: Vec<f64>,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub index: usize,
    pub quantity: Quantity,
    pub analytic: f64,
    pub oracle: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossCheckReport {
    pub sampled: usize,
    pub checked: usize,
    /// Sampled points where one side could not be evaluated.
    pub skipped: usize,
    pub violations: Vec<Violation>,
}

impl CrossCheckReport {
    pub fn violating_points(&self) -> usize {
        self.violations.iter().map(|v| v.index).collect::<HashSet<_>>().len()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanResult {
    pub spec: ScanSpec,
    pub rows: Vec<Row>,
    pub failures: Vec<Failure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_check: Option<CrossCheckReport>,
}

impl ScanResult {
    /// Fails when strict cross-checking found any disagreement.
    pub fn enforce_strict(&self) -> Result<()> {
        match (&self.spec.cross_check, &self.cross_check) {
            (Some(c), Some(report)) if c.strict && !report.violations.is_empty() => Err(Error::CrossCheckFailed {
                violations: report.violating_points(),
                checked: report.checked,
            }),
            _ => Ok(()),
        }
    }
}

fn cells(quantities: &[Quantity], regime: Option<&Regime<f64>>, matrix: Option<&BogoliubovMatrix<f64>>) -> Vec<Cell> {
    quantities
        .iter()
        .map(|&q| match q {
            Quantity::Regime => regime.map_or(Cell::Empty, |r| Cell::Label(r.label)),
            Quantity::GrowthRate => regime.map_or(Cell::Empty, |r| Cell::Number(r.max_growth_rate)),
            _ => matrix.and_then(|m| q.from_matrix(m)).map_or(Cell::Empty, Cell::Number),
        })
        .collect()
}

/// Quantity values of a single parameter set, as one scan row would hold them.
pub fn evaluate_point(params: &ModelParams<f64>, quantities: &[Quantity], options: SolveOptions) -> Result<Vec<Cell>> {
    let params = params.validate()?;
    let regime = quantities.iter().any(|q| !q.needs_matrix()).then(|| classify(&params));
    let matrix = if quantities.iter().any(|q| q.needs_matrix()) {
        Some(solve_matrix(&params, params.length, options)?.0)
    } else {
        None
    };
    Ok(cells(quantities, regime.as_ref(), matrix.as_ref()))
}

const CHECKED: [Quantity; 7] = [
    Quantity::NAs,
    Quantity::NAi,
    Quantity::NBs,
    Quantity::NBi,
    Quantity::MinvarA,
    Quantity::MinvarB,
    Quantity::MinvarC,
];

/// Compares closed form and oracle at one point; `None` if either side fails.
fn cross_check_point(spec: &ScanSpec, index: usize) -> Option<Vec<Violation>> {
    let params = spec.params_at(index).validate().ok()?;
    let strict = SolveOptions {
        solver: if spec.solver == Solver::Averaged {
            Solver::Averaged
        } else {
            Solver::Analytic
        },
        fallback: false,
    };
    let (analytic, _) = solve_matrix(&params, params.length, strict).ok()?;
    let target = if spec.solver == Solver::Averaged {
        averaged_model(&params)
    } else {
        params
    };
    let oracle = integrate_to(&target, params.length).ok()?;
    // Photon numbers always; squeezing only when the scan reports it.
    let quantities = CHECKED
        .into_iter()
        .filter(|q| !matches!(q, Quantity::MinvarA | Quantity::MinvarB | Quantity::MinvarC) || spec.quantities.contains(q));
    let mut violations = Vec::new();
    for q in quantities {
        if let (Some(a), Some(o)) = (q.from_matrix(&analytic), q.from_matrix(&oracle)) {
            let band = CrossCheck::RELATIVE_TOLERANCE * a.abs().max(o.abs()) + CrossCheck::ABSOLUTE_FLOOR;
            if !((a - o).abs() <= band) {
                violations.push(Violation {
                    index,
                    quantity: q,
                    analytic: a,
                    oracle: o,
                });
            }
        }
    }
    Some(violations)
}

fn run_cross_check(spec: &ScanSpec, check: &CrossCheck) -> CrossCheckReport {
    let total = spec.len();
    let wanted = ((total as f64 * check.fraction).ceil() as usize).clamp(1, total);
    let mut rng = ChaCha8Rng::seed_from_u64(check.seed);
    let mut indices = sample(&mut rng, total, wanted).into_vec();
    indices.sort_unstable();
    let outcomes: Vec<Option<Vec<Violation>>> = indices.par_iter().map(|&k| cross_check_point(spec, k)).collect();
    let checked = outcomes.iter().filter(|o| o.is_some()).count();
    CrossCheckReport {
        sampled: indices.len(),
        checked,
        skipped: indices.len() - checked,
        violations: outcomes.into_iter().flatten().flatten().collect(),
    }
}

/// Evaluates every grid point on the current rayon pool.
pub fn run_scan(spec: &ScanSpec) -> Result<ScanResult> {
    spec.validate()?;
    let options = spec.options();
    let outcomes: Vec<Result<Vec<Cell>>> = (0..spec.len())
        .into_par_iter()
        .map(|k| evaluate_point(&spec.params_at(k), &spec.quantities, options))
        .collect();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (index, outcome) in outcomes.into_iter().enumerate() {
        let axes = spec.coordinates(index);
        match outcome {
            Ok(values) => rows.push(Row { index, axes, values }),
            Err(e) => failures.push(Failure {
                index,
                axes,
                error: e.tag().to_string(),
            }),
        }
    }
    let cross_check = spec.cross_check.as_ref().map(|c| run_cross_check(spec, c));
    Ok(ScanResult {
        spec: spec.clone(),
        rows,
        failures,
        cross_check,
    })
}

/// [`run_scan`] on a dedicated pool of `threads` workers (`None`: rayon default).
pub fn run_scan_with_threads(spec: &ScanSpec, threads: Option<usize>) -> Result<ScanResult> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidSpec(format!("cannot start worker pool: {e}")))?;
    pool.install(|| run_scan(spec))
}

/// Regime labels only, without solving for matrices.
pub fn regime_grid(spec: &ScanSpec) -> Vec<Option<Area>> {
    (0..spec.len())
        .into_par_iter()
        .map(|k| spec.params_at(k).validate().ok().map(|p| classify(&p).label))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn degenerate_base() -> ModelParams<f64> {
        ModelParams::real(3.0, 0.0, 0.0, 0.0, 0.0, 0.0, 2.0)
    }

    fn degenerate_spec(axis1: Axis, axis2: Option<Axis>, quantities: Vec<Quantity>) -> ScanSpec {
        let mut spec = ScanSpec::new(degenerate_base(), axis1, axis2, quantities);
        spec.constraint = Constraint::Degenerate;
        spec
    }

    #[test]
    fn names_parse() {
        for p in Parameter::ALL {
            assert_eq!(p.as_str().parse::<Parameter>().unwrap(), p);
        }
        assert_eq!("|eta_s|".parse::<Parameter>().unwrap(), Parameter::EtaS);
        for q in Quantity::ALL {
            assert_eq!(q.as_str().parse::<Quantity>().unwrap(), q);
        }
        assert!("gain".parse::<Quantity>().is_err());
    }

    #[test]
    fn axis_values_hit_both_ends() {
        let a = Axis::new(Parameter::DeltaS, -20.0, 20.0, 201);
        let v = a.values();
        assert_eq!((v[0], v[100], v[200]), (-20.0, 0.0, 20.0));
        assert_eq!(Axis::fixed(Parameter::Length, 2.0).values(), vec![2.0]);
        assert!(Axis::new(Parameter::Length, 1.0, 2.0, 1).check().is_err());
        assert!(Axis::new(Parameter::Length, 1.0, f64::NAN, 3).check().is_err());
    }

    #[test]
    fn magnitude_axes_keep_phase() {
        let mut p = ModelParams::new(
            Complex::from_polar(2.0, 0.7),
            Complex::new(0.0, 0.0),
            Complex::new(0.0, 0.0),
            0.0,
            0.0,
            0.0,
            1.0,
        );
        Parameter::Kappa.apply(&mut p, 5.0);
        assert!((p.kappa.norm() - 5.0).abs() < 1e-15 && (p.kappa.arg() - 0.7).abs() < 1e-15);
        Parameter::EtaS.apply(&mut p, 3.0);
        assert_eq!(p.eta_s, Complex::new(3.0, 0.0));
    }

    #[test]
    fn invalid_specs() {
        let q = vec![Quantity::Regime];
        let mut s = degenerate_spec(Axis::new(Parameter::EtaI, 0.0, 1.0, 3), None, q.clone());
        assert!(s.validate().is_err());
        s.constraint = Constraint::None;
        assert!(s.validate().is_ok());
        let s = ScanSpec::new(
            degenerate_base(),
            Axis::new(Parameter::DeltaS, 0.0, 1.0, 3),
            Some(Axis::new(Parameter::DeltaS, 0.0, 1.0, 3)),
            q,
        );
        assert!(matches!(run_scan(&s), Err(Error::InvalidSpec(_))));
        let s = ScanSpec::new(
            degenerate_base(),
            Axis::new(Parameter::DeltaS, 0.0, 1.0, 3),
            None,
            vec![Quantity::NAs, Quantity::NAs],
        );
        assert!(s.validate().is_err());
    }

    #[test]
    fn reference_points_on_a_grid() {
        let spec = degenerate_spec(
            Axis::new(Parameter::DeltaS, 0.0, 10.0, 11),
            Some(Axis::new(Parameter::EtaS, 1.0, 4.0, 4)),
            vec![Quantity::Regime],
        );
        let r = run_scan(&spec).unwrap();
        assert_eq!(r.rows.len() + r.failures.len(), 44);
        let at = |ds: usize, es: usize| r.rows.iter().find(|row| row.index == es * 11 + ds).unwrap();
        assert_eq!(at(10, 0).axes, vec![10.0, 1.0]);
        assert_eq!(at(10, 0).values, vec![Cell::Label(Area::II)]);
        assert_eq!(at(0, 3).values, vec![Cell::Label(Area::III)]);
        assert_eq!(at(0, 0).values, vec![Cell::Label(Area::IV)]);
    }

    #[test]
    fn single_point_grid_matches_direct_solve() {
        let spec = degenerate_spec(
            Axis::fixed(Parameter::DeltaS, 10.0),
            Some(Axis::fixed(Parameter::EtaS, 1.0)),
            Quantity::ALL.to_vec(),
        );
        let r = run_scan(&spec).unwrap();
        assert_eq!(r.rows.len(), 1);
        let p = ModelParams::degenerate(Complex::new(3.0, 0.0), Complex::new(1.0, 0.0), 0.0, 10.0, 2.0);
        let direct = evaluate_point(&p, &Quantity::ALL, SolveOptions::default()).unwrap();
        assert_eq!(r.rows[0].values, direct);
        assert!(direct.iter().all(|c| *c != Cell::Empty));
    }

    #[test]
    fn failures_are_recorded_not_fatal() {
        let spec = ScanSpec::new(
            degenerate_base(),
            Axis::new(Parameter::Length, -1.0, 1.0, 3),
            None,
            vec![Quantity::NAs],
        );
        let r = run_scan(&spec).unwrap();
        assert_eq!(r.rows.len(), 2);
        assert_eq!(r.failures.len(), 1);
        assert_eq!(r.failures[0].error, "negative_length");
        assert_eq!(r.failures[0].axes, vec![-1.0]);
    }

    #[test]
    fn squeezing_is_empty_off_degeneracy() {
        let base = ModelParams::real(3.0, 3.0, 3.0, 30.0, 0.0, 30.0, 2.0);
        let spec = ScanSpec::new(
            base,
            Axis::new(Parameter::DeltaS, 0.0, 10.0, 2),
            None,
            vec![Quantity::NAs, Quantity::MinvarA],
        );
        let r = run_scan(&spec).unwrap();
        assert!(r.rows.iter().all(|row| row.values[1] == Cell::Empty));
        assert!(r.rows.iter().all(|row| matches!(row.values[0], Cell::Number(n) if n > 0.0)));
    }

    #[test]
    fn cross_check_agrees_and_is_seeded() {
        let mut spec = degenerate_spec(
            Axis::new(Parameter::DeltaS, -5.0, 15.0, 9),
            Some(Axis::new(Parameter::EtaS, 0.5, 3.5, 5)),
            vec![Quantity::NAs, Quantity::MinvarA],
        );
        spec.cross_check = Some(CrossCheck {
            fraction: 0.2,
            seed: 7,
            strict: true,
        });
        let a = run_scan(&spec).unwrap();
        let report = a.cross_check.as_ref().unwrap();
        assert_eq!(report.sampled, 9);
        assert!(report.checked > 0);
        assert!(report.violations.is_empty(), "{:?}", report.violations);
        assert!(a.enforce_strict().is_ok());
        assert_eq!(run_scan(&spec).unwrap(), a);
    }

    #[test]
    fn strict_mode_reports_violations() {
        let spec = ScanSpec {
            cross_check: Some(CrossCheck::new(0, true)),
            ..degenerate_spec(Axis::new(Parameter::DeltaS, 0.0, 1.0, 2), None, vec![])
        };
        let mut r = run_scan(&spec).unwrap();
        r.cross_check.as_mut().unwrap().violations.push(Violation {
            index: 0,
            quantity: Quantity::NAs,
            analytic: 1.0,
            oracle: 2.0,
        });
        assert!(matches!(
            r.enforce_strict(),
            Err(Error::CrossCheckFailed { violations: 1, .. })
        ));
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let spec = degenerate_spec(
            Axis::new(Parameter::DeltaS, -20.0, 20.0, 13),
            Some(Axis::new(Parameter::EtaS, 0.0, 8.0, 11)),
            vec![Quantity::Regime, Quantity::NAs, Quantity::MinvarC],
        );
        let one = run_scan_with_threads(&spec, Some(1)).unwrap();
        let four = run_scan_with_threads(&spec, Some(4)).unwrap();
        assert_eq!(one, four);
        assert_eq!(one.rows.len() + one.failures.len(), spec.len());
    }

    #[test]
    fn regime_grid_matches_scan() {
        let spec = degenerate_spec(
            Axis::new(Parameter::DeltaS, -20.0, 20.0, 9),
            Some(Axis::new(Parameter::EtaS, 0.0, 8.0, 9)),
            vec![Quantity::Regime],
        );
        let labels = regime_grid(&spec);
        let r = run_scan(&spec).unwrap();
        for row in &r.rows {
            assert_eq!(row.values[0], Cell::Label(labels[row.index].unwrap()));
        }
    }
}
