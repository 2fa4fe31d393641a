//! Identities that hold because the Bogoliubov transformation is canonical.

use num_complex::Complex;
use serde::Serialize;

use crate::matrix::BogoliubovMatrix;
use crate::scalar::Real;

/// Names of the identities, in the order of [`CanonicalResiduals::values`].
pub const IDENTITY_NAMES: [&str; 10] = [
    "norm_alpha_s",
    "norm_beta_s",
    "norm_alpha_i",
    "norm_beta_i",
    "cross_s",
    "cross_i",
    "sym_alpha",
    "sym_beta",
    "mixed_s",
    "mixed_i",
];

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CanonicalResiduals<T> {
    pub values: [T; 10],
}

impl<T: Real> CanonicalResiduals<T> {
    pub fn max(&self) -> T {
        self.values.iter().fold(T::zero(), |m, &v| m.max(v))
    }

    pub fn named(&self) -> impl Iterator<Item = (&'static str, T)> + '_ {
        IDENTITY_NAMES.iter().copied().zip(self.values.iter().copied())
    }
}

/// Each identity as `lhs − rhs` together with the sum of the magnitudes of its terms.
fn identities<T: Real>(m: &BogoliubovMatrix<T>) -> [(Complex<T>, T); 10] {
    let one = Complex::new(T::one(), T::zero());
    let norm = |p: Complex<T>, q: Complex<T>, r: Complex<T>, s: Complex<T>| {
        let (a, b, c, d) = (p.norm_sqr(), q.norm_sqr(), r.norm_sqr(), s.norm_sqr());
        (Complex::new(a + b, T::zero()) - Complex::new(c + d, T::zero()) - one, a + b + c + d + T::one())
    };
    // x1·y1 + x2·y2 − (x3·y3 + x4·y4)
    let rel = |x1: Complex<T>, y1: Complex<T>, x2: Complex<T>, y2: Complex<T>, x3: Complex<T>, y3: Complex<T>, x4: Complex<T>, y4: Complex<T>| {
        let terms = [x1 * y1, x2 * y2, x3 * y3, x4 * y4];
        let size = terms.iter().fold(T::zero(), |s, t| s + t.norm());
        (terms[0] + terms[1] - terms[2] - terms[3], size)
    };
    let m = *m;
    [
        norm(m.u_s, m.w_s, m.v_s, m.q_s),
        norm(m.k_s, m.m_s, m.l_s, m.n_s),
        norm(m.u_i, m.w_i, m.v_i, m.q_i),
        norm(m.k_i, m.m_i, m.l_i, m.n_i),
        rel(m.u_s.conj(), m.k_s, m.w_s.conj(), m.m_s, m.v_s.conj(), m.l_s, m.q_s.conj(), m.n_s),
        rel(m.u_i.conj(), m.k_i, m.w_i.conj(), m.m_i, m.v_i.conj(), m.l_i, m.q_i.conj(), m.n_i),
        rel(m.u_s, m.v_i, m.w_s, m.q_i, m.u_i, m.v_s, m.w_i, m.q_s),
        rel(m.k_s, m.l_i, m.m_s, m.n_i, m.k_i, m.l_s, m.m_i, m.n_s),
        rel(m.u_s, m.l_i, m.w_s, m.n_i, m.k_i, m.v_s, m.m_i, m.q_s),
        rel(m.u_i, m.l_s, m.w_i, m.n_s, m.k_s, m.v_i, m.m_s, m.q_i),
    ]
}

/// Absolute violation `|lhs − rhs|` of every identity.
pub fn canonical_residuals<T: Real>(m: &BogoliubovMatrix<T>) -> CanonicalResiduals<T> {
    CanonicalResiduals {
        values: identities(m).map(|(d, _)| d.norm()),
    }
}

/// Violations divided by `max(1, Σ |terms|)`, the scale of the rounding error
/// in each identity; meaningful when entries grow large.
pub fn relative_canonical_residuals<T: Real>(m: &BogoliubovMatrix<T>) -> CanonicalResiduals<T> {
    CanonicalResiduals {
        values: identities(m).map(|(d, size)| d.norm() / size.max(T::one())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_zero_residuals() {
        let r = canonical_residuals(&BogoliubovMatrix::<f64>::identity(0.0));
        assert_eq!(r.values, [0.0; 10]);
        assert_eq!(relative_canonical_residuals(&BogoliubovMatrix::<f64>::identity(1.0)).max(), 0.0);
    }

    #[test]
    fn doubled_u_s_breaks_first_normalization() {
        let mut m = BogoliubovMatrix::<f64>::identity(0.0);
        m.u_s = Complex::new(0.6, 0.8);
        m.w_s = Complex::new(0.0, 0.0);
        let base = canonical_residuals(&m);
        assert!(base.values[0] < 1e-15);
        let orig = m.u_s.norm_sqr();
        m.u_s *= 2.0;
        let r = canonical_residuals(&m);
        assert!((r.values[0] - 3.0 * orig).abs() < 1e-14);
        assert_eq!(r.named().next().unwrap().0, "norm_alpha_s");
    }
}
