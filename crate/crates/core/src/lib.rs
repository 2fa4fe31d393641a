//! Spatial quantum dynamics of high-gain parametric down-conversion with
//! cascaded up-conversion in a finite χ⁽²⁾ crystal.
//!
//! The four interacting modes are the down-converted signal and idler
//! (`a_s`, `a_i`) and their up-converted partners (`b_s`, `b_i`). Their
//! evolution is a Bogoliubov transformation with sixteen transfer functions,
//! computed in closed form ([`analytic`]) and by adaptive integration
//! ([`oracle`]). [`characteristic`] classifies amplification regimes from the
//! characteristic quartic, [`observables`] turns matrices into photon numbers
//! and quadrature variances, and [`scan`] runs parallel parameter grids.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the precision. Scans run in `f64`.
//!
//! ```
//! use cascade_core::{ModelParams64, SolveOptions, solve_point};
//! use num_complex::Complex;
//!
//! let p = ModelParams64::degenerate(Complex::new(3.0, 0.0), Complex::new(1.0, 0.0), 0.0, 10.0, 2.0);
//! let s = solve_point(&p, 2.0, SolveOptions::default()).unwrap();
//! assert_eq!(s.characteristic.regime.label.as_str(), "II");
//! ```

pub mod analytic;
pub mod characteristic;
pub mod error;
pub mod matrix;
pub mod observables;
pub mod oracle;
pub mod params;
pub mod scalar;
pub mod scan;
pub mod solve;

pub use analytic::{full_matrix, AnalyticSolver};
pub use characteristic::{analyze, classify, Area, CharacteristicData, QuarticRoots, Regime};
pub use error::{Error, Result};
pub use matrix::BogoliubovMatrix;
pub use observables::{Observables, PhotonNumbers, SqueezingReport};
pub use oracle::{integrate, integrate_to, Trajectory};
pub use params::{derive, ComplexValue, DerivedParams, ModelParams};
pub use scalar::Real;
pub use solve::{solve_matrix, solve_point, PointSolution, SolveOptions, Solver};

pub type ModelParams64 = ModelParams<f64>;
pub type ModelParams32 = ModelParams<f32>;
pub type BogoliubovMatrix64 = BogoliubovMatrix<f64>;
pub type BogoliubovMatrix32 = BogoliubovMatrix<f32>;
pub type CharacteristicData64 = CharacteristicData<f64>;
pub type CharacteristicData32 = CharacteristicData<f32>;
pub type Observables64 = Observables<f64>;
pub type Observables32 = Observables<f32>;
pub type Complex64 = num_complex::Complex<f64>;
pub type Complex32 = num_complex::Complex<f32>;
