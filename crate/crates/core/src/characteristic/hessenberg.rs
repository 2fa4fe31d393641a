//! Eigenvalues of small real upper-Hessenberg matrices by Francis double-shift QR.
//!
//! Matrices are stored 1-based in a fixed `[[T; 5]; 5]` block so the indexing
//! follows the textbook formulation of the algorithm directly (`n <= 4`).

use num_complex::Complex;

use crate::scalar::{copysign, Real};

pub(crate) type Block<T> = [[T; 5]; 5];

const MAX_ITERATIONS: usize = 60;

/// Companion matrix of the monic polynomial `x^n + c[n-1] x^{n-1} + … + c[0]`.
pub(crate) fn companion<T: Real>(coeffs: &[T]) -> Block<T> {
    let n = coeffs.len();
    let mut a = [[T::zero(); 5]; 5];
    for j in 1..=n {
        a[1][j] = -coeffs[n - j];
    }
    for i in 2..=n {
        a[i][i - 1] = T::one();
    }
    a
}

/// Parlett–Reinsch balancing with radix-2 scale factors.
pub(crate) fn balance<T: Real>(a: &mut Block<T>, n: usize) {
    let radix = T::two();
    let sqrdx = radix * radix;
    let mut done = false;
    while !done {
        done = true;
        for i in 1..=n {
            let mut r = T::zero();
            let mut c = T::zero();
            for j in 1..=n {
                if j != i {
                    c += a[j][i].abs();
                    r += a[i][j].abs();
                }
            }
            if c != T::zero() && r != T::zero() {
                let mut g = r / radix;
                let mut f = T::one();
                let s = c + r;
                while c < g {
                    f *= radix;
                    c *= sqrdx;
                }
                g = r * radix;
                while c > g {
                    f /= radix;
                    c /= sqrdx;
                }
                if (c + r) / f < T::lit(0.95) * s {
                    done = false;
                    let ginv = T::one() / f;
                    for j in 1..=n {
                        a[i][j] *= ginv;
                    }
                    for j in 1..=n {
                        a[j][i] *= f;
                    }
                }
            }
        }
    }
}

/// Eigenvalues of the upper-Hessenberg block `a` (destroyed in the process).
///
/// Complex pairs are returned adjacent, positive imaginary part first.
/// Returns `false` alongside the estimates if the iteration budget ran out.
pub(crate) fn hqr<T: Real>(a: &mut Block<T>, n: usize) -> (Vec<Complex<T>>, bool) {
    let zero = T::zero();
    let mut wr = [zero; 5];
    let mut wi = [zero; 5];
    let mut converged = true;

    let mut anorm = zero;
    for i in 1..=n {
        for j in (i.max(2) - 1)..=n {
            anorm += a[i][j].abs();
        }
    }

    let mut nn = n;
    let mut t = zero;
    while nn >= 1 {
        let mut its = 0;
        loop {
            // Look for a single small subdiagonal element.
            let mut l = nn;
            while l >= 2 {
                let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
                if s == zero {
                    s = anorm;
                }
                if a[l][l - 1].abs() + s == s {
                    a[l][l - 1] = zero;
                    break;
                }
                l -= 1;
            }
            let mut x = a[nn][nn];
            if l == nn {
                // One root found.
                wr[nn] = x + t;
                wi[nn] = zero;
                nn -= 1;
                break;
            }
            let mut y = a[nn - 1][nn - 1];
            let mut w = a[nn][nn - 1] * a[nn - 1][nn];
            if l == nn - 1 {
                // Two roots found.
                let p = T::half() * (y - x);
                let q = p * p + w;
                let z = q.abs().sqrt();
                x += t;
                if q >= zero {
                    let z = p + copysign(z, p);
                    wr[nn - 1] = x + z;
                    wr[nn] = x + z;
                    if z != zero {
                        wr[nn] = x - w / z;
                    }
                    wi[nn - 1] = zero;
                    wi[nn] = zero;
                } else {
                    wr[nn - 1] = x + p;
                    wr[nn] = x + p;
                    wi[nn - 1] = z;
                    wi[nn] = -z;
                }
                nn = nn.saturating_sub(2);
                break;
            }
            if its == MAX_ITERATIONS {
                // Give up on this block: report its diagonal as estimates.
                converged = false;
                for i in l..=nn {
                    wr[i] = a[i][i] + t;
                    wi[i] = zero;
                }
                nn = l - 1;
                break;
            }
            if its == 10 || its == 20 || its == 40 {
                // Exceptional shift.
                t += x;
                for i in 1..=nn {
                    a[i][i] -= x;
                }
                let s = a[nn][nn - 1].abs() + a[nn - 1][nn - 2].abs();
                x = T::lit(0.75) * s;
                y = x;
                w = T::lit(-0.4375) * s * s;
            }
            its += 1;

            // Form shift and look for two consecutive small subdiagonal elements.
            let mut m = nn - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = a[m][m];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[m + 1][m] + a[m][m + 1];
                q = a[m + 1][m + 1] - z - rr - ss;
                r = a[m + 2][m + 1];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[m][m - 1].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                if u + v == v {
                    break;
                }
                m -= 1;
            }
            for i in (m + 2)..=nn {
                a[i][i - 2] = zero;
                if i != m + 2 {
                    a[i][i - 3] = zero;
                }
            }

            // Double QR step on rows l..nn and columns m..nn.
            let mut k = m;
            while k < nn {
                if k != m {
                    p = a[k][k - 1];
                    q = a[k + 1][k - 1];
                    r = zero;
                    if k != nn - 1 {
                        r = a[k + 2][k - 1];
                    }
                    x = p.abs() + q.abs() + r.abs();
                    if x != zero {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = copysign((p * p + q * q + r * r).sqrt(), p);
                if s != zero {
                    if k == m {
                        if l != m {
                            a[k][k - 1] = -a[k][k - 1];
                        }
                    } else {
                        a[k][k - 1] = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    let z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nn {
                        let mut pp = a[k][j] + q * a[k + 1][j];
                        if k != nn - 1 {
                            pp += r * a[k + 2][j];
                            a[k + 2][j] -= pp * z;
                        }
                        a[k + 1][j] -= pp * y;
                        a[k][j] -= pp * x;
                    }
                    let mmin = if nn < k + 3 { nn } else { k + 3 };
                    for i in l..=mmin {
                        let mut pp = x * a[i][k] + y * a[i][k + 1];
                        if k != nn - 1 {
                            pp += z * a[i][k + 2];
                            a[i][k + 2] -= pp * r;
                        }
                        a[i][k + 1] -= pp * q;
                        a[i][k] -= pp;
                    }
                }
                k += 1;
            }
            if l >= nn - 1 {
                break;
            }
        }
    }

    let roots = (1..=n).map(|i| Complex::new(wr[i], wi[i])).collect();
    (roots, converged)
}

/// Roots of the real monic polynomial `x^n + c[n-1] x^{n-1} + … + c[0]`
/// for `1 <= n <= 4` via eigenvalues of the balanced companion matrix.
pub(crate) fn polynomial_roots<T: Real>(coeffs: &[T]) -> Vec<Complex<T>> {
    let n = coeffs.len();
    debug_assert!((1..=4).contains(&n));
    let mut a = companion(coeffs);
    balance(&mut a, n);
    hqr(&mut a, n).0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(coeffs: &[f64], x: Complex<f64>) -> Complex<f64> {
        let mut acc = Complex::new(1.0, 0.0);
        for &c in coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    #[test]
    fn quartic_with_known_roots() {
        // (x - 1)(x + 2)(x^2 + 4) = x^4 + x^3 + 2x^2 + 4x - 8
        let coeffs = [-8.0, 4.0, 2.0, 1.0];
        let mut roots = polynomial_roots(&coeffs);
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        let expected = [
            Complex::new(-2.0, 0.0),
            Complex::new(0.0, -2.0),
            Complex::new(0.0, 2.0),
            Complex::new(1.0, 0.0),
        ];
        for (r, e) in roots.iter().zip(expected.iter()) {
            assert!((r - e).norm() < 1e-12, "{r} vs {e}");
        }
    }

    #[test]
    fn residuals_on_badly_scaled_quartic() {
        let coeffs = [1e8, -3e5, 2e3, 0.0];
        for r in polynomial_roots::<f64>(&coeffs) {
            let scale = 1.0 + r.norm().powi(4_i32);
            assert!(eval(&coeffs, r).norm() / scale < 1e-12);
        }
    }

    #[test]
    fn low_degrees() {
        let r = polynomial_roots(&[-3.0_f64]);
        assert_eq!(r, vec![Complex::new(3.0, 0.0)]);
        let mut r = polynomial_roots(&[1.0_f64, 0.0]);
        r.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((r[0] - Complex::new(0.0, -1.0)).norm() < 1e-15);
        assert!((r[1] - Complex::new(0.0, 1.0)).norm() < 1e-15);
    }
}
