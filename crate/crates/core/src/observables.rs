//! Photon numbers, correlators and quadrature squeezing derived from a
//! Bogoliubov matrix, plus the closed-form reference models.
//!
//! Quadratures are `X(θ) = f e^{iθ} + f† e^{−iθ}`, so the vacuum variance is 1.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::BogoliubovMatrix;
use crate::params::ModelParams;
use crate::scalar::{sinc, Real};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhotonNumbers<T> {
    pub n_as: T,
    pub n_ai: T,
    pub n_bs: T,
    pub n_bi: T,
}

/// Vacuum correlators at position `z`.
///
/// `f_a = ⟨a_s a_i⟩`, `f_b = ⟨b_s b_i⟩`, `f_ab = ⟨a_s b_i⟩`, `g_ab = ⟨a_s† b_s⟩`;
/// for degenerate parameters these are `⟨aa⟩`, `⟨bb⟩`, `⟨ab⟩`, `⟨a†b⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Correlators<T> {
    pub f_a: Complex<T>,
    pub f_b: Complex<T>,
    pub f_ab: Complex<T>,
    pub g_ab: Complex<T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SqueezingReport<T> {
    pub min_variance: T,
    pub theta_opt: T,
    /// Optimal relative phase of the collective mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_opt: Option<T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Down-converted mode.
    A,
    /// Up-converted mode.
    B,
}

pub fn photon_numbers<T: Real>(m: &BogoliubovMatrix<T>) -> PhotonNumbers<T> {
    PhotonNumbers {
        n_as: m.v_s.norm_sqr() + m.q_s.norm_sqr(),
        n_ai: m.v_i.norm_sqr() + m.q_i.norm_sqr(),
        n_bs: m.l_s.norm_sqr() + m.n_s.norm_sqr(),
        n_bi: m.l_i.norm_sqr() + m.n_i.norm_sqr(),
    }
}

pub fn correlators<T: Real>(m: &BogoliubovMatrix<T>) -> Correlators<T> {
    Correlators {
        f_a: m.u_s * m.v_i + m.w_s * m.q_i,
        f_b: m.k_s * m.l_i + m.m_s * m.n_i,
        f_ab: m.u_s * m.l_i + m.w_s * m.n_i,
        g_ab: m.v_s.conj() * m.l_s + m.q_s.conj() * m.n_s,
    }
}

/// Relative tolerance for treating the two branches of a matrix as identical.
const DEGENERACY_TOL: f64 = 1e-6;

fn require_degenerate<T: Real>(m: &BogoliubovMatrix<T>) -> Result<()> {
    if m.branches_coincide(T::tol(DEGENERACY_TOL, 1e3)) {
        Ok(())
    } else {
        Err(Error::Constraint {
            constraint: "degenerate",
            detail: "squeezing is defined for degenerate parameters only".into(),
        })
    }
}

/// Quadrature statistics of `f = x₁ a₀ + x₂ b₀ + y₁ a₀† + y₂ b₀†` with `|x|² − |y|² = 1`.
///
/// Returns `(min, max, ⟨ff⟩)`. The minimum `1 + 2|y|² − 2|x·y|` is evaluated as
/// `(1 + 4|x₁ȳ₂ − x₂ȳ₁|²) / (1 + 2|y|² + 2|x·y|)`, which is the same quantity
/// for a canonical row but keeps full relative precision when it is tiny.
fn quadrature<T: Real>(x: [Complex<T>; 2], y: [Complex<T>; 2]) -> (T, T, Complex<T>) {
    let f = x[0] * y[0] + x[1] * y[1];
    let n = y[0].norm_sqr() + y[1].norm_sqr();
    let max = T::one() + T::two() * n + T::two() * f.norm();
    let det = x[0] * y[1].conj() - x[1] * y[0].conj();
    let min = (T::one() + T::lit(4.0) * det.norm_sqr()) / max;
    (min, max, f)
}

fn optimal_angle<T: Real>(f: Complex<T>) -> T {
    (T::PI() - f.arg()) * T::half()
}

fn mode_rows<T: Real>(m: &BogoliubovMatrix<T>, mode: Mode) -> ([Complex<T>; 2], [Complex<T>; 2]) {
    match mode {
        Mode::A => ([m.u_s, m.w_s], [m.v_s, m.q_s]),
        Mode::B => ([m.k_s, m.m_s], [m.l_s, m.n_s]),
    }
}

/// Minimal quadrature variance `1 + 2N_j − 2|F_j|` at `θ = (π − arg F_j)/2`.
pub fn single_mode_min_variance<T: Real>(m: &BogoliubovMatrix<T>, mode: Mode) -> Result<SqueezingReport<T>> {
    require_degenerate(m)?;
    let (x, y) = mode_rows(m, mode);
    let (min, _, f) = quadrature(x, y);
    Ok(SqueezingReport {
        min_variance: min,
        theta_opt: optimal_angle(f),
        delta_opt: None,
    })
}

/// Maximal quadrature variance `1 + 2N_j + 2|F_j|`.
pub fn single_mode_max_variance<T: Real>(m: &BogoliubovMatrix<T>, mode: Mode) -> Result<T> {
    require_degenerate(m)?;
    let (x, y) = mode_rows(m, mode);
    Ok(quadrature(x, y).1)
}

/// Grid resolution of the first pass over the collective-mode phase.
pub const COLLECTIVE_GRID: usize = 1024;

fn collective_at<T: Real>(m: &BogoliubovMatrix<T>, delta: T) -> (T, Complex<T>) {
    let r = T::half().sqrt();
    let e = Complex::from_polar(r, delta);
    let x = [m.u_s * r + m.k_s * e, m.w_s * r + m.m_s * e];
    let y = [m.v_s * r + m.l_s * e, m.q_s * r + m.n_s * e];
    let (min, _, f) = quadrature(x, y);
    (min, f)
}

/// Minimum over `(θ, δ)` of the variance of the collective mode `(a + e^{iδ} b)/√2`.
pub fn collective_min_variance<T: Real>(m: &BogoliubovMatrix<T>) -> Result<SqueezingReport<T>> {
    require_degenerate(m)?;
    let two_pi = T::two() * T::PI();
    let step = two_pi / T::from_count(COLLECTIVE_GRID);
    let mut best = (0usize, T::infinity());
    for k in 0..COLLECTIVE_GRID {
        let v = collective_at(m, step * T::from_count(k)).0;
        if v < best.1 {
            best = (k, v);
        }
    }
    // Golden-section refinement inside the neighbouring grid cells.
    let centre = step * T::from_count(best.0);
    let (mut lo, mut hi) = (centre - step, centre + step);
    let ratio = (T::lit(5.0).sqrt() - T::one()) * T::half();
    let mut c = hi - (hi - lo) * ratio;
    let mut d = lo + (hi - lo) * ratio;
    let (mut fc, mut fd) = (collective_at(m, c).0, collective_at(m, d).0);
    let tol = T::tol(1e-10, 16.0);
    while hi - lo > tol {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - (hi - lo) * ratio;
            fc = collective_at(m, c).0;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + (hi - lo) * ratio;
            fd = collective_at(m, d).0;
        }
    }
    let mut delta = (lo + hi) * T::half();
    let (mut value, mut f) = collective_at(m, delta);
    if best.1 < value {
        delta = centre;
        (value, f) = collective_at(m, delta);
    }
    delta = delta - two_pi * (delta / two_pi).floor();
    Ok(SqueezingReport {
        min_variance: value,
        theta_opt: optimal_angle(f),
        delta_opt: Some(delta),
    })
}

/// Variance of the collective-mode quadrature at explicit angles.
pub fn collective_variance<T: Real>(m: &BogoliubovMatrix<T>, theta: T, delta: T) -> T {
    let n = photon_numbers(m);
    let c = correlators(m);
    let e = Complex::from_polar(T::one(), delta);
    let g = (c.g_ab * e).re;
    let f = c.f_a + c.f_b * e * e + c.f_ab * e * T::two();
    T::one() + n.n_as + n.n_bs + T::two() * g + f.norm() * (T::two() * theta + f.arg()).cos()
}

/// Every observable of one matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Observables<T> {
    #[serde(flatten)]
    pub photons: PhotonNumbers<T>,
    #[serde(flatten)]
    pub correlators: Correlators<T>,
    /// Present for degenerate parameters only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minvar_a: Option<SqueezingReport<T>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minvar_b: Option<SqueezingReport<T>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minvar_c: Option<SqueezingReport<T>>,
}

pub fn observables<T: Real>(m: &BogoliubovMatrix<T>) -> Observables<T> {
    Observables {
        photons: photon_numbers(m),
        correlators: correlators(m),
        minvar_a: single_mode_min_variance(m, Mode::A).ok(),
        minvar_b: single_mode_min_variance(m, Mode::B).ok(),
        minvar_c: collective_min_variance(m).ok(),
    }
}

/// Closed-form PDC without up-conversion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PdcReference<T> {
    pub n_a: T,
    /// Only available for phase-matched PDC.
    pub min_variance: Option<T>,
}

/// `N_a = |κ|²L²[sinh(γL)/(γL)]²` with `γ² = |κ|² − Δ̃²/4`, and `e^{−2|κ|L}` for `Δ̃ = 0`.
pub fn pdc_only_reference<T: Real>(kappa: T, delta_tilde: T, length: T) -> PdcReference<T> {
    let k = kappa.abs();
    let g_sq = k * k - delta_tilde * delta_tilde * T::lit(0.25);
    let ratio = if g_sq > T::zero() {
        let x = g_sq.sqrt() * length;
        if x == T::zero() {
            T::one()
        } else {
            x.sinh() / x
        }
    } else {
        sinc((-g_sq).sqrt() * length)
    };
    let n_a = k * k * length * length * ratio * ratio;
    let min_variance = if delta_tilde == T::zero() || k == T::zero() {
        Some((T::lit(-2.0) * k * length).exp())
    } else {
        None
    };
    PdcReference { n_a, min_variance }
}

/// Small-`ε_b` approximation for strongly mismatched up-conversion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LossyApproximation<T> {
    pub n_a: T,
    pub n_b: T,
    pub min_variance: T,
    /// `|η_s| / |Δ_s|`
    pub epsilon_b: T,
    /// `|κ|L(1 − ε_b²)`
    pub gain: T,
    /// Set when `ε_b > 0.2`, where the expansion is unreliable.
    pub outside_validity: bool,
}

pub fn lossy_approximation<T: Real>(kappa: T, eta_s: T, delta_s: T, length: T) -> Result<LossyApproximation<T>> {
    if delta_s == T::zero() {
        return Err(Error::Constraint {
            constraint: "lossy approximation",
            detail: "requires a nonzero up-conversion mismatch delta_s".into(),
        });
    }
    let eps = eta_s.abs() / delta_s.abs();
    let eps_sq = eps * eps;
    let gain = kappa.abs() * length * (T::one() - eps_sq);
    let sinh_sq = gain.sinh().powi(2);
    Ok(LossyApproximation {
        n_a: (T::one() - eps_sq) * sinh_sq,
        n_b: eps_sq * sinh_sq,
        min_variance: (T::one() - eps_sq) * (T::lit(-2.0) * gain).exp() + eps_sq,
        epsilon_b: eps,
        gain,
        outside_validity: eps > T::lit(0.2),
    })
}

/// `ζ(Δ) = sinc(ΔL/2) e^{iΔL/2}`, the crystal average of `e^{iΔz}`.
pub fn averaging_factor<T: Real>(delta: T, length: T) -> Complex<T> {
    let half = delta * length * T::half();
    Complex::from_polar(sinc(half), half)
}

/// Phase-matched parameters with couplings scaled by their averaging factors.
pub fn averaged_model<T: Real>(params: &ModelParams<T>) -> ModelParams<T> {
    let l = params.length;
    ModelParams {
        kappa: params.kappa * averaging_factor(params.delta_tilde, l),
        eta_s: params.eta_s * averaging_factor(params.delta_s, l),
        eta_i: params.eta_i * averaging_factor(params.delta_i, l),
        delta_tilde: T::zero(),
        delta_s: T::zero(),
        delta_i: T::zero(),
        length: l,
    }
}
