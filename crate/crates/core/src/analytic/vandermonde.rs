//! Dense 4×4 complex LU with partial pivoting for the Vandermonde systems
//! `Σ_k C_k α_k^j = rhs_j`.

use num_complex::Complex;

use crate::scalar::Real;

type Mat<T> = [[Complex<T>; 4]; 4];

/// LU factors of a Vandermonde matrix in scaled nodes `α_k / s`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Vandermonde<T> {
    lu: Mat<T>,
    perm: [usize; 4],
    scale: T,
    singular: bool,
    /// 1-norm condition number of the scaled matrix.
    pub condition: T,
}

impl<T: Real> Vandermonde<T> {
    pub(crate) fn new(nodes: &[Complex<T>; 4]) -> Self {
        let scale = nodes.iter().fold(T::one(), |m, a| m.max(a.norm()));
        let mut a: Mat<T> = [[Complex::new(T::zero(), T::zero()); 4]; 4];
        for (k, &node) in nodes.iter().enumerate() {
            let x = node / scale;
            let mut pow = Complex::new(T::one(), T::zero());
            for row in a.iter_mut() {
                row[k] = pow;
                pow *= x;
            }
        }
        let norm = one_norm(&a);
        let (lu, perm, singular) = factor(a);
        let mut this = Self {
            lu,
            perm,
            scale,
            singular,
            condition: T::infinity(),
        };
        if !singular {
            let mut inverse = [[Complex::new(T::zero(), T::zero()); 4]; 4];
            for j in 0..4 {
                let mut e = [Complex::new(T::zero(), T::zero()); 4];
                e[j] = Complex::new(T::one(), T::zero());
                let col = this.substitute(e);
                for i in 0..4 {
                    inverse[i][j] = col[i];
                }
            }
            this.condition = norm * one_norm(&inverse);
        }
        this
    }

    /// Estimated relative forward error of a solve.
    pub(crate) fn forward_error(&self) -> T {
        T::lit(4.0) * T::epsilon() * self.condition
    }

    /// Solves `Σ_k C_k α_k^j = rhs[j]`.
    pub(crate) fn solve(&self, rhs: [Complex<T>; 4]) -> [Complex<T>; 4] {
        let mut b = rhs;
        let mut s = T::one();
        for v in b.iter_mut() {
            *v /= s;
            s *= self.scale;
        }
        if self.singular {
            return [Complex::new(T::nan(), T::nan()); 4];
        }
        self.substitute(b)
    }

    fn substitute(&self, rhs: [Complex<T>; 4]) -> [Complex<T>; 4] {
        let mut x = [Complex::new(T::zero(), T::zero()); 4];
        for i in 0..4 {
            x[i] = rhs[self.perm[i]];
        }
        for i in 0..4 {
            for k in 0..i {
                x[i] -= self.lu[i][k] * x[k];
            }
        }
        for i in (0..4).rev() {
            for k in (i + 1)..4 {
                x[i] -= self.lu[i][k] * x[k];
            }
            x[i] /= self.lu[i][i];
        }
        x
    }
}

fn one_norm<T: Real>(a: &Mat<T>) -> T {
    (0..4)
        .map(|j| (0..4).fold(T::zero(), |s, i| s + a[i][j].norm()))
        .fold(T::zero(), T::max)
}

fn factor<T: Real>(mut a: Mat<T>) -> (Mat<T>, [usize; 4], bool) {
    let mut perm = [0, 1, 2, 3];
    let mut singular = false;
    for k in 0..4 {
        let pivot = (k..4)
            .max_by(|&i, &j| a[i][k].norm().partial_cmp(&a[j][k].norm()).unwrap_or(std::cmp::Ordering::Equal))
            .unwrap_or(k);
        if a[pivot][k].norm() == T::zero() || !a[pivot][k].norm().is_finite() {
            singular = true;
            continue;
        }
        a.swap(k, pivot);
        perm.swap(k, pivot);
        for i in (k + 1)..4 {
            let f = a[i][k] / a[k][k];
            a[i][k] = f;
            for j in (k + 1)..4 {
                let t = a[k][j];
                a[i][j] -= f * t;
            }
        }
    }
    (a, perm, singular)
}
