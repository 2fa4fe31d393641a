//! Closed-form Bogoliubov functions for distinct characteristic roots.
//!
//! Each branch is a four-dimensional system in `(Y1, Y2, Y3, Y4)` (see
//! [`BranchCoefficients`]). `Y1` is a sum of four exponentials `C_k e^{α_k z}`
//! whose amplitudes solve a Vandermonde system fixed by the initial values of
//! `Y1` and its first three derivatives; `Y2..Y4` then follow by quadrature.
//! Systems where the pump couplings vanish are solved by their exact 2×2
//! propagators instead, because their characteristic roots are often
//! multiple.

mod kernel;
mod vandermonde;

use num_complex::Complex;

pub use kernel::f_kernel;

use crate::characteristic::{solve_quartic, QuarticRoots};
use crate::error::{Error, Result};
use crate::matrix::BogoliubovMatrix;
use crate::params::{derive, BranchCoefficients, ModelParams};
use crate::scalar::Real;
use kernel::h_kernel;
use vandermonde::Vandermonde;

/// Values `(Y1, Y2, Y3, Y4)` of one branch at one position.
pub type BranchValues<T> = [Complex<T>; 4];

/// Largest estimated forward error of the Vandermonde solve that is accepted.
pub fn forward_error_limit<T: Real>() -> T {
    T::tol(1e-6, 1e4)
}

#[derive(Clone, Copy, Debug)]
enum Plan<T> {
    /// `a = 0`: `(Y1, Y3)` and `(Y2, Y4)` decouple.
    Unpumped,
    /// `b = c = 0`: plain PDC between `Y1` and `Y2`.
    PdcOnly,
    General {
        alpha: [Complex<T>; 4],
        first: [Complex<T>; 4],
        second: [Complex<T>; 4],
    },
}

/// Both branches of one four-dimensional system, prepared for evaluation at many `z`.
#[derive(Clone, Copy, Debug)]
pub struct BranchSolver<T> {
    coeffs: BranchCoefficients<T>,
    plan: Plan<T>,
    forward_error: T,
}

fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

fn i_times<T: Real>(x: Complex<T>) -> Complex<T> {
    c(-x.im, x.re)
}

/// `(C, S)` with `exp(Mz) = C·I + S·M` for a 2×2 matrix with `M² = m_sq·I`.
fn propagator<T: Real>(m_sq: T, z: T) -> (T, T) {
    if m_sq > T::zero() {
        let g = m_sq.sqrt();
        ((g * z).cosh(), (g * z).sinh() / g)
    } else if m_sq < T::zero() {
        let w = (-m_sq).sqrt();
        ((w * z).cos(), (w * z).sin() / w)
    } else {
        (T::one(), z)
    }
}

impl<T: Real> BranchSolver<T> {
    /// `roots` are the characteristic roots of this system.
    pub fn new(coeffs: BranchCoefficients<T>, roots: &QuarticRoots<T>) -> Result<Self> {
        let zero = c(T::zero(), T::zero());
        let mut forward_error = T::zero();
        let plan = if coeffs.a == zero {
            Plan::Unpumped
        } else if coeffs.b == zero && coeffs.c == zero {
            Plan::PdcOnly
        } else {
            let shift = coeffs.exponent_shift();
            let alpha = roots.roots.map(|l| l + shift);
            let system = Vandermonde::new(&alpha);
            forward_error = system.forward_error();
            if roots.near_multiple || !(forward_error <= forward_error_limit::<T>()) {
                return Err(Error::MultipleRoots {
                    min_separation: roots.min_root_separation.as_f64(),
                    forward_error: forward_error.as_f64(),
                });
            }
            let (a_sq, b_sq) = (coeffs.a.norm_sqr(), coeffs.b.norm_sqr());
            let (d1, d2) = (coeffs.d1, coeffs.d2);
            let ib_conj = i_times(coeffs.b.conj());
            let first = system.solve([
                c(T::one(), T::zero()),
                zero,
                c(a_sq - b_sq, T::zero()),
                c(T::zero(), d1 * a_sq - d2 * b_sq),
            ]);
            let second = system.solve([zero, ib_conj, coeffs.b.conj() * (-d2), ib_conj * (a_sq - b_sq - d2 * d2)]);
            Plan::General { alpha, first, second }
        };
        Ok(Self {
            coeffs,
            plan,
            forward_error,
        })
    }

    /// Whether evaluation goes through the Vandermonde expansion, which is
    /// unreliable near multiple roots. The decoupled closed forms are not.
    pub fn uses_vandermonde(&self) -> bool {
        matches!(self.plan, Plan::General { .. })
    }

    /// Estimated forward error of the Vandermonde solve; zero for closed forms.
    pub fn forward_error(&self) -> T {
        self.forward_error
    }

    /// `(branch one, branch two)` at `z`, with initial values `(1,0,0,0)` and `(0,0,1,0)`.
    pub fn eval(&self, z: T) -> (BranchValues<T>, BranchValues<T>) {
        let zero = c(T::zero(), T::zero());
        let one = c(T::one(), T::zero());
        let BranchCoefficients { a, b, c: cc, d1, d2, d3 } = self.coeffs;
        match self.plan {
            Plan::Unpumped => {
                // (Y1, Y3) = (e^{iΔ₂z/2} u, e^{−iΔ₂z/2} w), (u, w)' = M (u, w)
                let (cz, sz) = propagator(-(d2 * d2 * T::lit(0.25) + b.norm_sqr()), z);
                let up = Complex::from_polar(T::one(), d2 * z * T::half());
                let down = up.conj();
                let half = c(T::zero(), d2 * T::half());
                let y1 = up * (c(cz, T::zero()) - half * sz);
                let y3 = down * i_times(b) * sz;
                let w1 = up * i_times(b.conj()) * sz;
                let w3 = down * (c(cz, T::zero()) + half * sz);
                ([y1, zero, y3, zero], [w1, zero, w3, zero])
            }
            Plan::PdcOnly => {
                let (cz, sz) = propagator(a.norm_sqr() - d1 * d1 * T::lit(0.25), z);
                let up = Complex::from_polar(T::one(), d1 * z * T::half());
                let half = c(T::zero(), d1 * T::half());
                let y1 = up * (c(cz, T::zero()) - half * sz);
                let y2 = up.conj() * (-i_times(a.conj())) * sz;
                ([y1, y2, zero, zero], [zero, zero, one, zero])
            }
            Plan::General { alpha, first, second } => {
                let b_sq = b.norm_sqr();
                let delta4 = c(T::zero(), d2 + d3 - d1);
                let mut s = [zero; 4];
                let mut t = [zero; 4];
                for k in 0..4 {
                    let al = alpha[k];
                    let xi1 = al - c(T::zero(), d2);
                    let xi2 = al + c(T::zero(), d3 - d1);
                    let e_al = (al * z).exp();
                    let e_xi1 = (xi1 * z).exp();
                    let f1 = f_kernel(z, xi1);
                    let f2 = f_kernel(z, xi2);
                    let h = h_kernel(z, xi2, delta4);
                    let terms = [e_al, al * e_xi1 + f1 * b_sq, f1, al * f2 + h * b_sq];
                    for j in 0..4 {
                        s[j] += first[k] * terms[j];
                        t[j] += second[k] * terms[j];
                    }
                }
                let ib = i_times(b);
                let ib_conj = i_times(b.conj());
                let to_y2 = Complex::from_polar(T::one(), (d2 - d1) * z) / i_times(a);
                let to_y4 = -(cc.conj() / a);
                let one_branch = [s[0], to_y2 * s[1], ib * s[2], to_y4 * s[3]];
                let two_branch = [
                    t[0],
                    to_y2 * (t[1] - ib_conj),
                    one + ib * t[2],
                    to_y4 * (t[3] - ib_conj * f_kernel(z, delta4)),
                ];
                (one_branch, two_branch)
            }
        }
    }
}

/// Closed-form evaluator for all sixteen functions of one parameter set.
#[derive(Clone, Copy, Debug)]
pub struct AnalyticSolver<T> {
    params: ModelParams<T>,
    roots: QuarticRoots<T>,
    signal: BranchSolver<T>,
    /// `None` for exactly degenerate parameters, where both branches coincide.
    idler: Option<BranchSolver<T>>,
}

impl<T: Real> AnalyticSolver<T> {
    pub fn new(params: &ModelParams<T>) -> Result<Self> {
        let params = params.validate()?;
        let roots = solve_quartic(&derive(&params));
        let signal = BranchSolver::new(params.signal_branch(), &roots)?;
        let idler = if params.is_degenerate() {
            None
        } else {
            Some(BranchSolver::new(params.idler_branch(), &roots.conjugated())?)
        };
        Ok(Self {
            params,
            roots,
            signal,
            idler,
        })
    }

    pub fn params(&self) -> &ModelParams<T> {
        &self.params
    }

    pub fn roots(&self) -> &QuarticRoots<T> {
        &self.roots
    }

    pub fn uses_vandermonde(&self) -> bool {
        self.signal.uses_vandermonde() || self.idler.is_some_and(|s| s.uses_vandermonde())
    }

    pub fn forward_error(&self) -> T {
        let idler = self.idler.map_or(T::zero(), |s| s.forward_error());
        self.signal.forward_error().max(idler)
    }

    pub fn matrix_at(&self, z: T) -> BogoliubovMatrix<T> {
        let (s1, s2) = self.signal.eval(z);
        let (i1, i2) = match &self.idler {
            Some(idler) => idler.eval(z),
            None => (s1, s2),
        };
        BogoliubovMatrix::from_branches(z, s1, s2, i1, i2)
    }
}

/// `(U_s, V_i*, K_s, L_i*)` at `z`; `roots` are those of `params`.
pub fn solve_branch_one<T: Real>(params: &ModelParams<T>, roots: &QuarticRoots<T>, z: T) -> Result<BranchValues<T>> {
    Ok(BranchSolver::new(params.signal_branch(), roots)?.eval(z).0)
}

/// `(W_s, Q_i*, M_s, N_i*)` at `z`; `roots` are those of `params`.
pub fn solve_branch_two<T: Real>(params: &ModelParams<T>, roots: &QuarticRoots<T>, z: T) -> Result<BranchValues<T>> {
    Ok(BranchSolver::new(params.signal_branch(), roots)?.eval(z).1)
}

/// All sixteen Bogoliubov functions at `z`.
pub fn full_matrix<T: Real>(params: &ModelParams<T>, z: T) -> Result<BogoliubovMatrix<T>> {
    Ok(AnalyticSolver::new(params)?.matrix_at(z))
}
