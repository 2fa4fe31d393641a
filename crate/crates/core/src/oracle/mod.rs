//! Reference solution by direct numerical integration of the four branch
//! systems, with the oscillating factors `e^{iΔz}` evaluated at every stage.

mod canonical;
mod dopri;

use std::io::Write;

use num_complex::Complex;
use serde::Serialize;

pub use canonical::{canonical_residuals, relative_canonical_residuals, CanonicalResiduals, IDENTITY_NAMES};

use crate::error::{Error, Result};
use crate::matrix::BogoliubovMatrix;
use crate::params::{BranchCoefficients, ModelParams};
use crate::scalar::Real;
use dopri::{Options, State};

/// Number of points of the default output grid.
pub const DEFAULT_GRID_POINTS: usize = 512;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Serialize"))]
pub struct Trajectory<T> {
    pub z_grid: Vec<T>,
    pub matrices: Vec<BogoliubovMatrix<T>>,
    pub estimated_error: T,
}

impl<T: Real + Serialize> Trajectory<T> {
    /// One JSON object per line, one line per grid point.
    pub fn write_json_lines<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for m in &self.matrices {
            serde_json::to_writer(&mut out, m)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// `DEFAULT_GRID_POINTS` uniform points on `[0, length]` (just `[0]` when `length = 0`).
pub fn default_grid<T: Real>(length: T) -> Vec<T> {
    if length == T::zero() {
        return vec![T::zero()];
    }
    let last = T::from_count(DEFAULT_GRID_POINTS - 1);
    (0..DEFAULT_GRID_POINTS)
        .map(|k| if k == DEFAULT_GRID_POINTS - 1 { length } else { length * T::from_count(k) / last })
        .collect()
}

fn check_grid<T: Real>(grid: &[T], length: T) -> Result<()> {
    match grid.first() {
        None => return Err(Error::InvalidGrid("grid is empty".into())),
        Some(&z0) if z0 != T::zero() => return Err(Error::InvalidGrid(format!("grid must start at 0 (got {z0})"))),
        _ => {}
    }
    if let Some(w) = grid.windows(2).find(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidGrid(format!("grid must be strictly increasing ({} then {})", w[0], w[1])));
    }
    let last = grid[grid.len() - 1];
    if !last.is_finite() || last > length {
        return Err(Error::InvalidGrid(format!("grid ends at {last}, beyond the crystal length {length}")));
    }
    Ok(())
}

fn branch_rhs<T: Real>(k: &BranchCoefficients<T>, z: T, y: &[Complex<T>]) -> [Complex<T>; 4] {
    let i = Complex::new(T::zero(), T::one());
    let e1 = Complex::from_polar(T::one(), k.d1 * z);
    let e2 = Complex::from_polar(T::one(), k.d2 * z);
    let e3 = Complex::from_polar(T::one(), k.d3 * z);
    [
        i * k.a * e1 * y[1] + i * k.b.conj() * e2 * y[2],
        -(i * k.a.conj() * e1.conj() * y[0]) - i * k.c * e3.conj() * y[3],
        i * k.b * e2.conj() * y[0],
        -(i * k.c.conj() * e3 * y[1]),
    ]
}

/// Integrates all sixteen functions and returns them at each point of `z_grid`
/// (default: [`default_grid`]).
pub fn integrate<T: Real>(params: &ModelParams<T>, z_grid: Option<&[T]>) -> Result<Trajectory<T>> {
    let params = params.validate()?;
    let grid = match z_grid {
        Some(g) => g.to_vec(),
        None => default_grid(params.length),
    };
    check_grid(&grid, params.length)?;
    integrate_grid(&params, grid)
}

/// Matrix at a single position `z ≥ 0`, which may lie beyond the crystal length.
pub fn integrate_to<T: Real>(params: &ModelParams<T>, z: T) -> Result<BogoliubovMatrix<T>> {
    let params = params.validate()?;
    if !(z >= T::zero()) || !z.is_finite() {
        return Err(Error::InvalidGrid(format!("position must be finite and nonnegative (got {z})")));
    }
    let grid = if z == T::zero() { vec![z] } else { vec![T::zero(), z] };
    let mut t = integrate_grid(&params, grid)?;
    Ok(t.matrices.pop().expect("grid is nonempty"))
}

fn integrate_grid<T: Real>(params: &ModelParams<T>, grid: Vec<T>) -> Result<Trajectory<T>> {
    let sig = params.signal_branch();
    let idl = params.idler_branch();
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let mut y0: State<T, 16> = [zero; 16];
    for start in [0, 6, 8, 14] {
        y0[start] = one;
    }
    let rhs = |z: T, y: &State<T, 16>| {
        let mut out = [zero; 16];
        for (block, k) in [(0, &sig), (4, &sig), (8, &idl), (12, &idl)] {
            out[block..block + 4].copy_from_slice(&branch_rhs(k, z, &y[block..block + 4]));
        }
        out
    };
    let sol = dopri::integrate(rhs, y0, &grid, &Options::default())?;
    let matrices = grid
        .iter()
        .zip(&sol.states)
        .map(|(&z, y)| {
            let part = |s: usize| [y[s], y[s + 1], y[s + 2], y[s + 3]];
            BogoliubovMatrix::from_branches(z, part(0), part(4), part(8), part(12))
        })
        .collect();
    Ok(Trajectory {
        z_grid: grid,
        matrices,
        estimated_error: sol.estimated_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = ModelParams<f64>;

    #[test]
    fn zero_couplings_give_identity_everywhere() {
        let p = P::real(0.0, 0.0, 0.0, 1.0, 2.0, 3.0, 1.5);
        let t = integrate(&p, None).unwrap();
        assert_eq!(t.z_grid.len(), DEFAULT_GRID_POINTS);
        assert_eq!(t.z_grid[DEFAULT_GRID_POINTS - 1], 1.5);
        for m in &t.matrices {
            let mut id = BogoliubovMatrix::identity(m.z);
            id.z = m.z;
            assert_eq!(*m, id);
        }
    }

    #[test]
    fn pdc_photon_number() {
        let p = P::pdc_only(Complex::new(3.0, 0.0), 0.0, 1.0);
        let m = integrate_to(&p, 1.0).unwrap();
        let n = m.v_s.norm_sqr();
        assert!((n / 3f64.sinh().powi(2) - 1.0).abs() < 1e-8, "{n}");
    }

    #[test]
    fn grid_validation() {
        let p = P::real(1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0);
        assert!(matches!(integrate(&p, Some(&[0.1, 0.5])), Err(Error::InvalidGrid(_))));
        assert!(matches!(integrate(&p, Some(&[0.0, 0.5, 0.5])), Err(Error::InvalidGrid(_))));
        assert!(matches!(integrate(&p, Some(&[0.0, 2.0])), Err(Error::InvalidGrid(_))));
        assert!(matches!(integrate(&p, Some(&[])), Err(Error::InvalidGrid(_))));
        let t = integrate(&p, Some(&[0.0])).unwrap();
        assert_eq!(t.matrices, vec![BogoliubovMatrix::identity(0.0)]);
    }

    #[test]
    fn json_lines_has_one_object_per_point() {
        let p = P::real(1.0, 0.5, 0.2, 0.0, 1.0, 0.0, 1.0);
        let t = integrate(&p, Some(&[0.0, 0.5, 1.0])).unwrap();
        let mut buf = Vec::new();
        t.write_json_lines(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        let last: BogoliubovMatrix<f64> = serde_json::from_str(lines[2]).unwrap();
        assert_eq!(last, t.matrices[2]);
    }

    #[test]
    fn oscillating_area_three_photon_numbers() {
        // Degenerate κ=3, η=4, phase matched: oscillations on a growing envelope.
        let p = P::degenerate(Complex::new(3.0, 0.0), Complex::new(4.0, 0.0), 0.0, 0.0, 2.0);
        let t = integrate(&p, None).unwrap();
        let n: Vec<f64> = t.matrices.iter().map(|m| m.v_s.norm_sqr() + m.q_s.norm_sqr()).collect();
        let local_maxima = (1..n.len() - 1).filter(|&k| n[k] > n[k - 1] && n[k] > n[k + 1]).count();
        let local_minima = (1..n.len() - 1).filter(|&k| n[k] < n[k - 1] && n[k] < n[k + 1]).count();
        assert!(local_maxima >= 1 && local_minima >= 1);
        assert!(n[n.len() - 1] > 10.0 * n[n.len() / 8]);
    }

    #[test]
    fn self_convergence() {
        let p = P::new(
            Complex::new(2.0, 0.5),
            Complex::new(1.0, -0.3),
            Complex::new(0.7, 0.2),
            1.0,
            -2.0,
            3.0,
            2.0,
        );
        let coarse = integrate_to(&p, 2.0).unwrap();
        let grid = [0.0, 2.0];
        let sig = p.signal_branch();
        let idl = p.idler_branch();
        let zero = Complex::new(0.0, 0.0);
        let mut y0 = [zero; 16];
        for s in [0, 6, 8, 14] {
            y0[s] = Complex::new(1.0, 0.0);
        }
        let opts = Options::<f64> {
            rtol: 5e-11,
            atol: 5e-13,
            ..Options::default()
        };
        let rhs = |z: f64, y: &State<f64, 16>| {
            let mut out = [zero; 16];
            for (block, k) in [(0, &sig), (4, &sig), (8, &idl), (12, &idl)] {
                out[block..block + 4].copy_from_slice(&branch_rhs(k, z, &y[block..block + 4]));
            }
            out
        };
        let loose = integrate(&p, Some(&grid)).unwrap();
        let fine = dopri::integrate(rhs, y0, &grid, &opts).unwrap();
        let y = &fine.states[1];
        let part = |s: usize| [y[s], y[s + 1], y[s + 2], y[s + 3]];
        let fine_m = BogoliubovMatrix::from_branches(2.0, part(0), part(4), part(8), part(12));
        let change = coarse
            .entries()
            .iter()
            .zip(fine_m.entries().iter())
            .map(|(a, b)| (a - b).norm() / a.norm().max(1.0))
            .fold(0.0, f64::max);
        assert!(change < 10.0 * loose.estimated_error.max(1e-14), "{change} vs {}", loose.estimated_error);
    }
}
