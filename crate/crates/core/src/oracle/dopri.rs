//! Dormand–Prince 5(4) with first-same-as-last stages and step clipping at
//! requested output points.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

pub(crate) type State<T, const N: usize> = [Complex<T>; N];

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Options<T> {
    pub rtol: T,
    pub atol: T,
    pub max_steps: usize,
}

impl<T: Real> Default for Options<T> {
    fn default() -> Self {
        Self {
            rtol: T::tol(1e-10, 100.0),
            atol: T::tol(1e-12, 1.0),
            max_steps: 1_000_000,
        }
    }
}

pub(crate) struct Solution<T, const N: usize> {
    pub states: Vec<State<T, N>>,
    /// Sum over accepted steps of the largest scaled local error estimate.
    pub estimated_error: T,
}

fn combine<T: Real, const N: usize>(y: &State<T, N>, h: T, terms: &[(f64, &State<T, N>)]) -> State<T, N> {
    let mut out = *y;
    for &(w, k) in terms {
        if w == 0.0 {
            continue;
        }
        let hw = h * T::lit(w);
        for i in 0..N {
            out[i] += k[i] * hw;
        }
    }
    out
}

/// Integrates `y' = f(z, y)` from `grid[0]` and returns the state at each grid point.
pub(crate) fn integrate<T, const N: usize, F>(
    f: F,
    y0: State<T, N>,
    grid: &[T],
    opts: &Options<T>,
) -> Result<Solution<T, N>>
where
    T: Real,
    F: Fn(T, &State<T, N>) -> State<T, N>,
{
    let mut states = Vec::with_capacity(grid.len());
    states.push(y0);
    let mut estimated_error = T::zero();
    if grid.len() < 2 {
        return Ok(Solution { states, estimated_error });
    }

    let mut z = grid[0];
    let mut y = y0;
    let mut k1 = f(z, &y);
    let span = grid[grid.len() - 1] - z;
    let mut h = initial_step(&y, &k1, span, opts);
    let mut steps = 0usize;
    let mut rejected_last = false;
    let power = T::lit(-0.2);

    for &target in &grid[1..] {
        while z < target {
            if steps >= opts.max_steps {
                return Err(Error::StepLimitExceeded {
                    z: z.as_f64(),
                    max_steps: opts.max_steps,
                });
            }
            let remaining = target - z;
            let landing = h >= remaining;
            let step = if landing { remaining } else { h };
            if step <= T::lit(16.0) * T::epsilon() * z.abs().max(T::one()) {
                return Err(Error::StepSizeUnderflow {
                    z: z.as_f64(),
                    h: step.as_f64(),
                });
            }

            let k2 = f(z + step * T::lit(C2), &combine(&y, step, &[(A21, &k1)]));
            let k3 = f(z + step * T::lit(C3), &combine(&y, step, &[(A31, &k1), (A32, &k2)]));
            let k4 = f(z + step * T::lit(C4), &combine(&y, step, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = f(
                z + step * T::lit(C5),
                &combine(&y, step, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = f(
                z + step,
                &combine(&y, step, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
            );
            let z_new = if landing { target } else { z + step };
            let y_new = combine(&y, step, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
            let k7 = f(z_new, &y_new);

            let mut sum_sq = T::zero();
            let mut local = T::zero();
            for i in 0..N {
                let e = (k1[i] * T::lit(E1)
                    + k3[i] * T::lit(E3)
                    + k4[i] * T::lit(E4)
                    + k5[i] * T::lit(E5)
                    + k6[i] * T::lit(E6)
                    + k7[i] * T::lit(E7))
                    * step;
                let sc = opts.atol + opts.rtol * y[i].norm().max(y_new[i].norm());
                let ratio = e.norm() / sc;
                sum_sq += ratio * ratio;
                local = local.max(e.norm() / T::one().max(y_new[i].norm()));
            }
            let err = (sum_sq / T::from_count(N)).sqrt();
            steps += 1;

            if err <= T::one() {
                z = z_new;
                y = y_new;
                k1 = k7;
                estimated_error += local;
                let fac_max = if rejected_last { T::one() } else { T::lit(5.0) };
                let fac = if err == T::zero() {
                    fac_max
                } else {
                    (T::lit(0.9) * err.powf(power)).min(fac_max).max(T::lit(0.2))
                };
                // A step shortened to land on the output point keeps the longer proposal.
                h = if landing { h.max(step * fac) } else { step * fac };
                rejected_last = false;
            } else {
                let fac = (T::lit(0.9) * err.powf(power)).max(T::lit(0.2)).min(T::one());
                h = step * fac;
                rejected_last = true;
            }
            if !(y.iter().all(|v| v.re.is_finite() && v.im.is_finite())) {
                return Err(Error::StepSizeUnderflow {
                    z: z.as_f64(),
                    h: h.as_f64(),
                });
            }
        }
        states.push(y);
    }
    Ok(Solution { states, estimated_error })
}

fn initial_step<T: Real, const N: usize>(y: &State<T, N>, f0: &State<T, N>, span: T, opts: &Options<T>) -> T {
    let mut d0 = T::zero();
    let mut d1 = T::zero();
    for i in 0..N {
        let sc = opts.atol + opts.rtol * y[i].norm();
        d0 += (y[i].norm() / sc).powi(2);
        d1 += (f0[i].norm() / sc).powi(2);
    }
    let (d0, d1) = (d0.sqrt(), d1.sqrt());
    let h = if d0 < T::lit(1e-5) || d1 < T::lit(1e-5) {
        T::lit(1e-6)
    } else {
        T::lit(0.01) * d0 / d1
    };
    h.min(span).max(T::epsilon() * T::lit(1e3) * span.max(T::one()))
}
