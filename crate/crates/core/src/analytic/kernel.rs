//! `F(z, γ) = (e^{γz} − 1)/γ` and the divided difference used for the
//! doubly integrated terms, both free of removable singularities.

use num_complex::Complex;

use crate::scalar::Real;

/// `e^x − 1` without cancellation for small `|x|`.
pub(crate) fn expm1<T: Real>(x: Complex<T>) -> Complex<T> {
    let (a, b) = (x.re, x.im);
    let half = (b * T::half()).sin();
    Complex::new(a.exp_m1() * b.cos() - T::two() * half * half, a.exp() * b.sin())
}

/// `φ₁(x) = (e^x − 1)/x`, with `φ₁(0) = 1`.
pub(crate) fn phi1<T: Real>(x: Complex<T>) -> Complex<T> {
    if x.norm() < T::lit(1e-6) {
        let one = Complex::new(T::one(), T::zero());
        one + x * (Complex::new(T::half(), T::zero()) + x * (Complex::new(T::one() / T::lit(6.0), T::zero()) + x / T::lit(24.0)))
    } else {
        expm1(x) / x
    }
}

/// `F(z, γ) = (e^{γz} − 1)/γ`, equal to `z` at `γ = 0`.
pub fn f_kernel<T: Real>(z: T, gamma: Complex<T>) -> Complex<T> {
    phi1(gamma * z) * z
}

/// Divided difference `(φ₁(x₁) − φ₁(x₂))/(x₁ − x₂)`, continuous at `x₁ = x₂`.
pub(crate) fn phi1_divided<T: Real>(x1: Complex<T>, x2: Complex<T>) -> Complex<T> {
    let half = T::half();
    if x1.norm().max(x2.norm()) <= half {
        // Σ_{m≥1} h_{m−1}(x₁, x₂)/(m+1)!, with h_j the complete homogeneous polynomial.
        let mut h = Complex::new(T::one(), T::zero());
        let mut x2_pow = Complex::new(T::one(), T::zero());
        let mut factorial = T::two();
        let mut sum = h / factorial;
        for m in 2..40 {
            x2_pow *= x2;
            h = h * x1 + x2_pow;
            factorial *= T::from_count(m + 1);
            let term = h / factorial;
            sum += term;
            if term.norm() <= T::epsilon() * sum.norm() {
                break;
            }
        }
        sum
    } else if x1.norm() >= x2.norm() {
        ((x2.exp() * phi1(x1 - x2)) - phi1(x2)) / x1
    } else {
        ((x1.exp() * phi1(x2 - x1)) - phi1(x1)) / x2
    }
}

/// `H(z) = [F(z, ξ₂) − F(z, δ)] / (ξ₂ − δ)`.
pub(crate) fn h_kernel<T: Real>(z: T, xi2: Complex<T>, delta: Complex<T>) -> Complex<T> {
    phi1_divided(xi2 * z, delta * z) * (z * z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    type C = Complex<f64>;

    #[test]
    fn kernel_examples() {
        assert_eq!(f_kernel(2.5, C::new(0.0, 0.0)), C::new(2.5, 0.0));
        assert_eq!(f_kernel(0.0, C::new(3.0, -1.0)), C::new(0.0, 0.0));
        let v = f_kernel(1.0, C::new(0.0, PI));
        assert!((v - C::new(0.0, 2.0 / PI)).norm() < 1e-15);
    }

    #[test]
    fn small_arguments_match_direct_formula() {
        for &g in &[C::new(1e-7, 2e-8), C::new(3e-5, -1e-5), C::new(0.2, 0.7), C::new(-4.0, 9.0)] {
            let z = 1.3;
            let direct = ((g * z).exp() - 1.0) / g;
            let tol = if g.norm() < 1e-4 { 1e-9 } else { 1e-14 };
            assert!((f_kernel(z, g) - direct).norm() <= tol * direct.norm(), "{g}");
        }
        // Relative error of the truncated series stays far below 1e-14.
        let g = C::new(9e-7, 0.0);
        let exact = (g.re).exp_m1() / g.re;
        assert!((phi1(g).re - exact).abs() < 1e-15);
    }

    #[test]
    fn divided_difference_matches_quotient() {
        let pairs = [
            (C::new(0.3, 0.1), C::new(-0.2, 0.25)),
            (C::new(2.0, 5.0), C::new(0.5, -1.0)),
            (C::new(0.1, 0.0), C::new(3.0, 4.0)),
            (C::new(-6.0, 1.0), C::new(-6.5, 1.2)),
        ];
        for (a, b) in pairs {
            let quotient = (phi1(a) - phi1(b)) / (a - b);
            assert!((phi1_divided(a, b) - quotient).norm() < 1e-12 * quotient.norm().max(1.0));
        }
    }

    #[test]
    fn divided_difference_is_continuous_on_the_diagonal() {
        // d/dx (e^x − 1)/x = (x e^x − e^x + 1)/x²
        for x in [C::new(0.2, -0.1), C::new(1.5, 2.0)] {
            let derivative = (x * x.exp() - x.exp() + 1.0) / (x * x);
            assert!((phi1_divided(x, x) - derivative).norm() < 1e-13 * derivative.norm());
        }
        assert!((phi1_divided(C::new(0.0, 0.0), C::new(0.0, 0.0)) - C::new(0.5, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn h_kernel_is_iterated_integral() {
        // H = ∫₀ᶻ e^{δt} F(t, ξ₂ − δ) dt, checked by Simpson quadrature.
        let (xi2, delta, z) = (C::new(0.4, 1.1), C::new(-0.3, 0.6), 1.7);
        let n = 2000;
        let h = z / n as f64;
        let f = |t: f64| (delta * t).exp() * f_kernel(t, xi2 - delta);
        let mut acc = f(0.0) + f(z);
        for k in 1..n {
            acc += f(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        let quad = acc * (h / 3.0);
        assert!((h_kernel(z, xi2, delta) - quad).norm() < 1e-10);
    }
}
