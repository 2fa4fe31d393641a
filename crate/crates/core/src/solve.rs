//! Single-point driver tying the solvers and observables together.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analytic::AnalyticSolver;
use crate::characteristic::{analyze, classify, Area, CharacteristicData};
use crate::error::{Error, Result};
use crate::matrix::BogoliubovMatrix;
use crate::observables::{averaged_model, observables, Observables};
use crate::oracle::integrate_to;
use crate::params::ModelParams;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    /// Closed form, falling back to the oracle near multiple roots.
    #[default]
    Analytic,
    /// Adaptive numerical integration.
    Oracle,
    /// Closed form applied to the crystal-averaged parameters.
    Averaged,
}

impl Solver {
    pub fn as_str(self) -> &'static str {
        match self {
            Solver::Analytic => "analytic",
            Solver::Oracle => "oracle",
            Solver::Averaged => "averaged",
        }
    }
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Solver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(Solver::Analytic),
            "oracle" => Ok(Solver::Oracle),
            "averaged" => Ok(Solver::Averaged),
            other => Err(Error::InvalidSpec(format!("unknown solver `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub solver: Solver,
    /// Integrate numerically where the closed form is unreliable instead of failing.
    pub fallback: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            solver: Solver::Analytic,
            fallback: true,
        }
    }
}

/// Matrix of `params` at `z` plus whether the oracle stood in for the closed form.
///
/// The averaged solver transforms `params` first. Multiple roots only matter
/// when the Vandermonde expansion is in use; the decoupled closed forms stay
/// exact there.
pub fn solve_matrix<T: Real>(params: &ModelParams<T>, z: T, options: SolveOptions) -> Result<(BogoliubovMatrix<T>, bool)> {
    let params = params.validate()?;
    let target = match options.solver {
        Solver::Oracle => return Ok((integrate_to(&params, z)?, false)),
        Solver::Analytic => params,
        Solver::Averaged => averaged_model(&params),
    };
    let failure = match AnalyticSolver::new(&target) {
        Ok(solver) => {
            if !solver.uses_vandermonde() || classify(&target).label != Area::V {
                return Ok((solver.matrix_at(z), false));
            }
            Error::MultipleRoots {
                min_separation: solver.roots().min_root_separation.as_f64(),
                forward_error: solver.forward_error().as_f64(),
            }
        }
        Err(e @ Error::MultipleRoots { .. }) => e,
        Err(e) => return Err(e),
    };
    if options.fallback {
        Ok((integrate_to(&target, z)?, true))
    } else {
        Err(failure)
    }
}

/// Everything reported for one parameter set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PointSolution<T> {
    pub params: ModelParams<T>,
    pub solver: Solver,
    /// Set when the oracle replaced the closed form.
    pub oracle_fallback: bool,
    /// Characteristic data of `params` itself, also for the averaged solver.
    pub characteristic: CharacteristicData<T>,
    pub matrix: BogoliubovMatrix<T>,
    pub observables: Observables<T>,
}

pub fn solve_point<T: Real>(params: &ModelParams<T>, z: T, options: SolveOptions) -> Result<PointSolution<T>> {
    let params = params.validate()?;
    let (matrix, oracle_fallback) = solve_matrix(&params, z, options)?;
    Ok(PointSolution {
        params,
        solver: options.solver,
        oracle_fallback,
        characteristic: analyze(&params),
        matrix,
        observables: observables(&matrix),
    })
}
