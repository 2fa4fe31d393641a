//! Model parameters, validation, and the derived characteristic coefficients.
//!
//! Couplings and mismatches are in cm⁻¹, the crystal length in cm. The pump
//! amplitude and effective susceptibilities are already folded into the
//! complex couplings `kappa`, `eta_s`, `eta_i`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Complex value used for couplings and Bogoliubov functions.
pub type ComplexValue<T> = Complex<T>;

/// Input parameters of the four-mode interaction.
///
/// JSON form: `{"kappa":[re,im],"eta_s":[re,im],"eta_i":[re,im],
/// "delta_tilde":x,"delta_s":x,"delta_i":x,"length":x}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct ModelParams<T> {
    /// PDC coupling.
    pub kappa: Complex<T>,
    /// Signal up-conversion coupling.
    pub eta_s: Complex<T>,
    /// Idler up-conversion coupling.
    pub eta_i: Complex<T>,
    /// PDC mismatch `k_p - k_as - k_ai`.
    pub delta_tilde: T,
    /// Signal up-conversion mismatch `k_bs - k_as - k_p`.
    pub delta_s: T,
    /// Idler up-conversion mismatch `k_bi - k_ai - k_p`.
    pub delta_i: T,
    /// Crystal length.
    pub length: T,
}

impl<T: Real> ModelParams<T> {
    pub fn new(
        kappa: Complex<T>,
        eta_s: Complex<T>,
        eta_i: Complex<T>,
        delta_tilde: T,
        delta_s: T,
        delta_i: T,
        length: T,
    ) -> Self {
        Self {
            kappa,
            eta_s,
            eta_i,
            delta_tilde,
            delta_s,
            delta_i,
            length,
        }
    }

    /// Frequency-degenerate interaction: `eta_i = eta_s`, `delta_i = delta_s`.
    pub fn degenerate(kappa: Complex<T>, eta: Complex<T>, delta_tilde: T, delta: T, length: T) -> Self {
        Self::new(kappa, eta, eta, delta_tilde, delta, delta, length)
    }

    /// Only the signal wave is up-converted: `eta_i = 0`, `delta_i = 0`.
    pub fn three_mode(kappa: Complex<T>, eta_s: Complex<T>, delta_tilde: T, delta_s: T, length: T) -> Self {
        Self::new(
            kappa,
            eta_s,
            Complex::new(T::zero(), T::zero()),
            delta_tilde,
            delta_s,
            T::zero(),
            length,
        )
    }

    /// PDC without any up-conversion.
    pub fn pdc_only(kappa: Complex<T>, delta_tilde: T, length: T) -> Self {
        let zero = Complex::new(T::zero(), T::zero());
        Self::new(kappa, zero, zero, delta_tilde, T::zero(), T::zero(), length)
    }

    /// Real-valued couplings.
    pub fn real(kappa: T, eta_s: T, eta_i: T, delta_tilde: T, delta_s: T, delta_i: T, length: T) -> Self {
        Self::new(
            Complex::new(kappa, T::zero()),
            Complex::new(eta_s, T::zero()),
            Complex::new(eta_i, T::zero()),
            delta_tilde,
            delta_s,
            delta_i,
            length,
        )
    }

    pub fn validate(self) -> Result<Self> {
        let checks: [(&'static str, T); 10] = [
            ("kappa", self.kappa.re),
            ("kappa", self.kappa.im),
            ("eta_s", self.eta_s.re),
            ("eta_s", self.eta_s.im),
            ("eta_i", self.eta_i.re),
            ("eta_i", self.eta_i.im),
            ("delta_tilde", self.delta_tilde),
            ("delta_s", self.delta_s),
            ("delta_i", self.delta_i),
            ("length", self.length),
        ];
        if let Some((field, _)) = checks.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { field });
        }
        if self.length < T::zero() {
            return Err(Error::NegativeLength(self.length.as_f64()));
        }
        Ok(self)
    }

    /// Exact degeneracy: the idler couplings equal the signal ones bit for bit.
    pub fn is_degenerate(&self) -> bool {
        self.eta_i == self.eta_s && self.delta_i == self.delta_s
    }

    pub fn is_three_mode(&self) -> bool {
        self.eta_i == Complex::new(T::zero(), T::zero()) && self.delta_i == T::zero()
    }

    /// Interchanges the signal and idler up-conversion channels.
    pub fn swapped(&self) -> Self {
        Self {
            eta_s: self.eta_i,
            eta_i: self.eta_s,
            delta_s: self.delta_i,
            delta_i: self.delta_s,
            ..*self
        }
    }

    /// Multiplies all couplings and mismatches by `c`, leaving the length alone.
    pub fn scaled(&self, c: T) -> Self {
        Self {
            kappa: self.kappa * c,
            eta_s: self.eta_s * c,
            eta_i: self.eta_i * c,
            delta_tilde: self.delta_tilde * c,
            delta_s: self.delta_s * c,
            delta_i: self.delta_i * c,
            length: self.length,
        }
    }

    /// Multiplies all three couplings by the common phase `e^{i phase}`.
    pub fn with_common_phase(&self, phase: T) -> Self {
        let rot = Complex::from_polar(T::one(), phase);
        Self {
            kappa: self.kappa * rot,
            eta_s: self.eta_s * rot,
            eta_i: self.eta_i * rot,
            ..*self
        }
    }

    /// Coefficients of the branch that propagates the signal operators.
    pub fn signal_branch(&self) -> BranchCoefficients<T> {
        BranchCoefficients {
            a: self.kappa,
            b: self.eta_s,
            c: self.eta_i,
            d1: self.delta_tilde,
            d2: self.delta_s,
            d3: self.delta_i,
        }
    }

    /// Coefficients of the branch that propagates the idler operators.
    pub fn idler_branch(&self) -> BranchCoefficients<T> {
        self.swapped().signal_branch()
    }
}

/// Coefficients `(a, b, c, Δ₁, Δ₂, Δ₃)` of one four-dimensional linear system
///
/// ```text
/// Y1' =  i a  e^{iΔ₁z} Y2 + i b* e^{iΔ₂z} Y3
/// Y2' = -i a* e^{-iΔ₁z} Y1 - i c e^{-iΔ₃z} Y4
/// Y3' =  i b  e^{-iΔ₂z} Y1
/// Y4' = -i c* e^{iΔ₃z} Y2
/// ```
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchCoefficients<T> {
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub c: Complex<T>,
    pub d1: T,
    pub d2: T,
    pub d3: T,
}

impl<T: Real> BranchCoefficients<T> {
    /// `(P, Q, R)` of `λ⁴ + Pλ² + iQλ + R = 0` for this system.
    pub fn quartic(&self) -> (T, T, T) {
        let quarter = T::lit(0.25);
        let a_sq = self.a.norm_sqr();
        let gb_sq = self.b.norm_sqr() + self.d2 * self.d2 * quarter;
        let gc_sq = self.c.norm_sqr() + self.d3 * self.d3 * quarter;
        let phi = self.d1 - (self.d2 + self.d3) * T::half();
        let p = gb_sq + gc_sq + phi * phi * T::half() - a_sq;
        let q = phi * (gc_sq - gb_sq) - a_sq * (self.d3 - self.d2) * T::half();
        let r = (gb_sq - phi * phi * quarter) * (gc_sq - phi * phi * quarter)
            - a_sq * quarter * (phi - self.d3) * (phi - self.d2);
        (p, q, r)
    }

    /// Offset `i(2Δ₁ + Δ₂ − Δ₃)/4` between the characteristic roots and the
    /// exponents of `Y1`.
    pub fn exponent_shift(&self) -> Complex<T> {
        Complex::new(T::zero(), (T::two() * self.d1 + self.d2 - self.d3) * T::lit(0.25))
    }
}

/// Scalar quantities derived from [`ModelParams`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DerivedParams<T> {
    pub g_s_sq: T,
    pub g_i_sq: T,
    pub phi: T,
    pub p_coef: T,
    pub q_coef: T,
    pub r_coef: T,
    /// `Δ̃ − Δ_s`
    pub phi_cas_s: T,
    /// `Δ̃ − Δ_i`
    pub phi_cas_i: T,
    /// `Δ̃ − Δ_s − Δ_i`
    pub phi_cas_si: T,
}

impl<T: Real> DerivedParams<T> {
    /// Natural magnitude of the coefficients:
    /// `max(1, |P|^{1/2}, |Q|^{1/3}, |R|^{1/4})`.
    pub fn scale(&self) -> T {
        coefficient_scale(self.p_coef, self.q_coef, self.r_coef)
    }
}

pub(crate) fn coefficient_scale<T: Real>(p: T, q: T, r: T) -> T {
    T::one()
        .max(p.abs().sqrt())
        .max(q.abs().cbrt())
        .max(r.abs().sqrt().sqrt())
}

pub fn derive<T: Real>(params: &ModelParams<T>) -> DerivedParams<T> {
    let quarter = T::lit(0.25);
    let (p, q, r) = params.signal_branch().quartic();
    DerivedParams {
        g_s_sq: params.eta_s.norm_sqr() + params.delta_s * params.delta_s * quarter,
        g_i_sq: params.eta_i.norm_sqr() + params.delta_i * params.delta_i * quarter,
        phi: params.delta_tilde - (params.delta_s + params.delta_i) * T::half(),
        p_coef: p,
        q_coef: q,
        r_coef: r,
        phi_cas_s: params.delta_tilde - params.delta_s,
        phi_cas_i: params.delta_tilde - params.delta_i,
        phi_cas_si: params.delta_tilde - params.delta_s - params.delta_i,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type P = ModelParams<f64>;

    #[test]
    fn typical_point_is_accepted() {
        let p = P::real(3.0, 1.0, 1.0, 0.0, 0.0, 0.0, 2.0);
        assert_eq!(p.validate(), Ok(p));
    }

    #[test]
    fn negative_length_is_rejected() {
        let err = P::real(3.0, 1.0, 1.0, 0.0, 0.0, 0.0, -1.0).validate().unwrap_err();
        assert!(err.to_string().contains("length must be nonnegative"));
    }

    #[test]
    fn nan_is_rejected_with_field_name() {
        let mut p = P::real(3.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0);
        p.kappa.re = f64::NAN;
        let err = p.validate().unwrap_err();
        assert!(err.to_string().contains("non-finite parameter"));
        assert!(err.to_string().contains("kappa"));
        p.kappa.re = 1.0;
        p.delta_i = f64::INFINITY;
        assert_eq!(p.validate().unwrap_err(), Error::NonFinite { field: "delta_i" });
    }

    #[test]
    fn zero_parameters_give_zero_coefficients() {
        let d = derive(&P::real(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0));
        assert_eq!((d.g_s_sq, d.g_i_sq, d.phi), (0.0, 0.0, 0.0));
        assert_eq!((d.p_coef, d.q_coef, d.r_coef), (0.0, 0.0, 0.0));
    }

    #[test]
    fn pdc_only_coefficients() {
        let d = derive(&P::real(3.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0));
        assert_eq!((d.p_coef, d.q_coef, d.r_coef), (-9.0, 0.0, 0.0));
    }

    #[test]
    fn cascaded_mismatches() {
        let d = derive(&P::real(3.0, 3.0, 3.0, 30.0, 30.0, 0.0, 2.0));
        assert_eq!((d.phi_cas_s, d.phi_cas_i, d.phi_cas_si), (0.0, 30.0, 0.0));
    }

    #[test]
    fn degenerate_coefficients_match_biquadratic_forms() {
        // P = 2|η|² + Δ² + Δ̃(Δ̃ − 2Δ)/2 − |κ|², R = [|η|² − Δ̃(Δ̃ − 2Δ)/4]² − |κ|²(Δ̃ − 2Δ)²/4
        let (k, e, dt, ds) = (3.0_f64, 1.3, 10.0, 2.5);
        let d = derive(&P::degenerate(Complex::new(k, 0.0), Complex::new(e, 0.0), dt, ds, 2.0));
        let p = 2.0 * e * e + ds * ds + dt * (dt - 2.0 * ds) / 2.0 - k * k;
        let r = (e * e - dt * (dt - 2.0 * ds) / 4.0).powi(2) - k * k / 4.0 * (dt - 2.0 * ds).powi(2);
        assert!((d.p_coef - p).abs() < 1e-12);
        assert_eq!(d.q_coef, 0.0);
        assert!((d.r_coef - r).abs() < 1e-10);
    }

    #[test]
    fn json_field_names() {
        let p = P::real(3.0, 1.0, 0.5, 0.0, 10.0, -2.0, 2.0);
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(
            text,
            r#"{"kappa":[3.0,0.0],"eta_s":[1.0,0.0],"eta_i":[0.5,0.0],"delta_tilde":0.0,"delta_s":10.0,"delta_i":-2.0,"length":2.0}"#
        );
        let back: P = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
    }

    fn arb_params() -> impl Strategy<Value = P> {
        (
            prop::array::uniform6(-10.0..10.0_f64),
            prop::array::uniform3(-10.0..10.0_f64),
        )
            .prop_map(|(c, d)| {
                P::new(
                    Complex::new(c[0], c[1]),
                    Complex::new(c[2], c[3]),
                    Complex::new(c[4], c[5]),
                    d[0],
                    d[1],
                    d[2],
                    1.0,
                )
            })
    }

    proptest! {
        #[test]
        fn coefficients_are_homogeneous(p in arb_params(), c in 0.1..5.0_f64) {
            let d = derive(&p);
            let ds = derive(&p.scaled(c));
            let tol = 1e-10;
            prop_assert!((ds.p_coef - c.powi(2) * d.p_coef).abs() <= tol * (1.0 + ds.p_coef.abs() + c.powi(2) * 400.0));
            prop_assert!((ds.q_coef - c.powi(3) * d.q_coef).abs() <= tol * (1.0 + c.powi(3) * 8000.0));
            prop_assert!((ds.r_coef - c.powi(4) * d.r_coef).abs() <= tol * (1.0 + c.powi(4) * 160000.0));
        }

        #[test]
        fn swap_negates_q(p in arb_params()) {
            let d = derive(&p);
            let ds = derive(&p.swapped());
            prop_assert!((ds.p_coef - d.p_coef).abs() <= 1e-10 * (1.0 + d.p_coef.abs()));
            prop_assert!((ds.q_coef + d.q_coef).abs() <= 1e-10 * (1.0 + d.q_coef.abs() + 1e3));
            prop_assert!((ds.r_coef - d.r_coef).abs() <= 1e-10 * (1.0 + d.r_coef.abs() + 1e4));
        }

        #[test]
        fn g_squared_bounds(p in arb_params()) {
            let d = derive(&p);
            prop_assert!(d.g_s_sq >= p.eta_s.norm_sqr());
            prop_assert!(d.g_i_sq >= p.eta_i.norm_sqr());
        }
    }
}
