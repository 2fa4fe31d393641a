//! Characteristic quartic `λ⁴ + Pλ² + iQλ + R = 0`: roots, discriminants and
//! the classification of generation regimes.
//!
//! Roots are computed from the real-coefficient form obtained with `μ = iλ`,
//! `μ⁴ − Pμ² + Qμ + R = 0`, as eigenvalues of its companion matrix. Real `μ`
//! map to purely imaginary (oscillating) `λ`; complex `μ` to roots with a
//! nonzero real part (amplification).

mod hessenberg;

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{coefficient_scale, derive, DerivedParams, ModelParams};
use crate::scalar::Real;

pub(crate) use hessenberg::polynomial_roots;

/// Relative band inside which a discriminant or boundary quantity counts as zero.
pub fn classification_tolerance<T: Real>() -> T {
    T::tol(1e-9, 1e3)
}

/// Relative root separation below which roots are reported as nearly multiple.
pub fn multiplicity_tolerance<T: Real>() -> T {
    T::lit(1e-6).max(T::lit(10.0) * T::epsilon().sqrt())
}

/// The four roots of the characteristic quartic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuarticRoots<T> {
    /// Sorted by descending real part, then descending imaginary part.
    pub roots: [Complex<T>; 4],
    pub min_root_separation: T,
    pub near_multiple: bool,
}

impl<T: Real> QuarticRoots<T> {
    fn from_unsorted(mut roots: [Complex<T>; 4]) -> Self {
        roots.sort_by(canonical_order);
        let mut sep = T::infinity();
        for j in 0..4 {
            for k in (j + 1)..4 {
                sep = sep.min((roots[j] - roots[k]).norm());
            }
        }
        let max_abs = roots.iter().fold(T::zero(), |m, r| m.max(r.norm()));
        let near_multiple = sep < multiplicity_tolerance::<T>() * T::one().max(max_abs);
        Self {
            roots,
            min_root_separation: sep,
            near_multiple,
        }
    }

    /// Roots of the quartic with `Q → −Q`, i.e. of the interchanged signal/idler system.
    pub fn conjugated(&self) -> Self {
        Self::from_unsorted(self.roots.map(|r| r.conj()))
    }

    /// Largest real part among the roots.
    pub fn max_growth_rate(&self) -> T {
        self.roots.iter().fold(T::neg_infinity(), |m, r| m.max(r.re))
    }

    pub fn max_abs(&self) -> T {
        self.roots.iter().fold(T::zero(), |m, r| m.max(r.norm()))
    }

    /// `max_k |λ_k⁴ + Pλ_k² + iQλ_k + R|`.
    pub fn max_residual(&self, p: T, q: T, r: T) -> T {
        self.roots
            .iter()
            .map(|&l| quartic_lambda(p, q, r, l).norm())
            .fold(T::zero(), T::max)
    }
}

fn canonical_order<T: Real>(a: &Complex<T>, b: &Complex<T>) -> Ordering {
    b.re
        .partial_cmp(&a.re)
        .unwrap_or(Ordering::Equal)
        .then(b.im.partial_cmp(&a.im).unwrap_or(Ordering::Equal))
}

fn quartic_lambda<T: Real>(p: T, q: T, r: T, l: Complex<T>) -> Complex<T> {
    let l2 = l * l;
    l2 * l2 + l2 * p + l * Complex::new(T::zero(), q) + r
}

fn quartic_mu<T: Real>(p: T, q: T, r: T, m: Complex<T>) -> (Complex<T>, Complex<T>) {
    let m2 = m * m;
    let value = m2 * m2 - m2 * p + m * q + r;
    let slope = m2 * m * T::lit(4.0) - m * (T::two() * p) + q;
    (value, slope)
}

/// A few Newton steps on the μ-quartic, each kept only if it lowers the residual.
fn polish<T: Real>(p: T, q: T, r: T, mut m: Complex<T>) -> Complex<T> {
    let real_root = m.im == T::zero();
    let (mut value, mut slope) = quartic_mu(p, q, r, m);
    for _ in 0..4 {
        if value.norm() == T::zero() || slope.norm() == T::zero() {
            break;
        }
        let mut next = m - value / slope;
        if real_root {
            next.im = T::zero();
        }
        if !(next.re.is_finite() && next.im.is_finite()) {
            break;
        }
        let (v, s) = quartic_mu(p, q, r, next);
        if v.norm() >= value.norm() {
            break;
        }
        m = next;
        value = v;
        slope = s;
    }
    m
}

/// Solves `λ⁴ + Pλ² + iQλ + R = 0`.
pub fn solve_quartic<T: Real>(d: &DerivedParams<T>) -> QuarticRoots<T> {
    solve_depressed(d.p_coef, d.q_coef, d.r_coef)
}

pub(crate) fn solve_depressed<T: Real>(p: T, q: T, r: T) -> QuarticRoots<T> {
    let zero = Complex::new(T::zero(), T::zero());
    let s = coefficient_scale(p, q, r);
    let (ps, qs, rs) = (p / (s * s), q / (s * s * s), r / (s * s * s * s));

    // Roots ν = μ / s of ν⁴ − p̂ν² + q̂ν + r̂; exact zero roots are deflated.
    let scaled: Vec<Complex<T>> = if rs == T::zero() && qs == T::zero() {
        // ν²(ν² − p̂) = 0
        let w = Complex::new(ps, T::zero()).sqrt();
        vec![zero, zero, w, -w]
    } else if rs == T::zero() {
        let mut v = polynomial_roots(&[qs, -ps, T::zero()]);
        v.push(zero);
        v
    } else {
        polynomial_roots(&[rs, qs, -ps, T::zero()])
    };

    let mut mus = Vec::with_capacity(4);
    for m in scaled {
        let m = m * s;
        if m.im < T::zero() {
            continue;
        }
        if m == zero {
            mus.push(m);
            continue;
        }
        let polished = polish(p, q, r, m);
        if m.im > T::zero() {
            let polished = if polished.im > T::zero() { polished } else { m };
            mus.push(polished);
            mus.push(polished.conj());
        } else {
            mus.push(polished);
        }
    }
    debug_assert_eq!(mus.len(), 4);
    let mut roots = [zero; 4];
    for (slot, m) in roots.iter_mut().zip(mus) {
        // λ = −iμ
        *slot = Complex::new(m.im, -m.re);
    }
    QuarticRoots::from_unsorted(roots)
}

/// Discriminant `∏_{j<k} (λ_j − λ_k)²` of the characteristic quartic.
///
/// Identical to the discriminant of the real form `μ⁴ − Pμ² + Qμ + R`:
/// `256R³ − 128P²R² − 144PQ²R − 27Q⁴ + 16P⁴R + 4P³Q²`.
pub fn discriminant_general<T: Real>(d: &DerivedParams<T>) -> T {
    quartic_discriminant(d.p_coef, d.q_coef, d.r_coef)
}

pub(crate) fn quartic_discriminant<T: Real>(p: T, q: T, r: T) -> T {
    discriminant_terms(p, q, r).iter().fold(T::zero(), |acc, &t| acc + t)
}

fn discriminant_terms<T: Real>(p: T, q: T, r: T) -> [T; 6] {
    let l = T::lit;
    let (p2, q2, r2) = (p * p, q * q, r * r);
    [
        l(256.0) * r2 * r,
        l(-128.0) * p2 * r2,
        l(-144.0) * p * q2 * r,
        l(-27.0) * q2 * q2,
        l(16.0) * p2 * p2 * r,
        l(4.0) * p2 * p * q2,
    ]
}

/// Zero band for a quantity of the classification tables: `class_tol · scale⁴`,
/// but never below the rounding error of evaluating it from terms of total
/// magnitude `magnitude`.
fn zero_band<T: Real>(scale: T, magnitude: T) -> T {
    let nominal = classification_tolerance::<T>() * scale.powi(4);
    nominal.max(T::lit(64.0) * T::epsilon() * magnitude)
}

/// Generation regime labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Area {
    /// All roots imaginary: oscillating, no amplification.
    #[serde(rename = "I")]
    I,
    /// Two roots with nonzero real part, two imaginary.
    #[serde(rename = "II")]
    II,
    /// All roots complex with nonzero real and imaginary parts.
    #[serde(rename = "III")]
    III,
    /// All roots real (only distinguished in the degenerate case).
    #[serde(rename = "IV")]
    IV,
    /// Multiple roots.
    #[serde(rename = "V")]
    V,
}

impl Area {
    pub fn as_str(self) -> &'static str {
        match self {
            Area::I => "I",
            Area::II => "II",
            Area::III => "III",
            Area::IV => "IV",
            Area::V => "V",
        }
    }
}

impl fmt::Display for Area {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Area {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "I" => Ok(Area::I),
            "II" => Ok(Area::II),
            "III" => Ok(Area::III),
            "IV" => Ok(Area::IV),
            "V" => Ok(Area::V),
            other => Err(format!("unknown area `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Regime<T> {
    pub label: Area,
    /// Largest real part among the characteristic roots.
    pub max_growth_rate: T,
}

/// Four-mode classification by the sign of the quartic discriminant together
/// with `P` and `R − P²/4`.
///
/// Points with all-real roots in the degenerate case are reported as
/// [`Area::III`], since the four-mode table has no separate row for them;
/// use [`classify_degenerate`] to distinguish them.
pub fn classify_general<T: Real>(d: &DerivedParams<T>) -> Regime<T> {
    let (p, r) = (d.p_coef, d.r_coef);
    let terms = discriminant_terms(p, d.q_coef, r);
    let disc = terms.iter().fold(T::zero(), |acc, &t| acc + t);
    let band = zero_band(d.scale(), terms.iter().fold(T::zero(), |acc, t| acc + t.abs()));
    let label = if disc.abs() <= band {
        Area::V
    } else if disc < T::zero() {
        Area::II
    } else if p > T::zero() && r < p * p * T::lit(0.25) {
        Area::I
    } else {
        Area::III
    };
    Regime {
        label,
        max_growth_rate: solve_quartic(d).max_growth_rate(),
    }
}

/// Roots of the biquadratic `λ⁴ + Pλ² + R = 0`: `λ² = (−P ± √(P² − 4R))/2`.
pub fn biquadratic_roots<T: Real>(p: T, r: T) -> [Complex<T>; 4] {
    let disc = Complex::new(p * p - T::lit(4.0) * r, T::zero()).sqrt();
    let minus_p = Complex::new(-p, T::zero());
    let l1 = ((minus_p + disc) * T::half()).sqrt();
    let l2 = ((minus_p - disc) * T::half()).sqrt();
    let mut roots = [l1, -l1, l2, -l2];
    roots.sort_by(canonical_order);
    roots
}

/// Degenerate-case classification (`η_i = η_s`, `Δ_i = Δ_s`), where `Q = 0`.
pub fn classify_degenerate<T: Real>(params: &ModelParams<T>) -> Result<Regime<T>> {
    if !params.is_degenerate() {
        return Err(Error::Constraint {
            constraint: "degenerate",
            detail: "requires eta_i = eta_s and delta_i = delta_s".into(),
        });
    }
    let d = derive(params);
    let (p, r) = (d.p_coef, d.r_coef);
    let quarter_p_sq = p * p * T::lit(0.25);
    let band = zero_band(d.scale(), r.abs() + quarter_p_sq);
    let label = if r.abs() <= band || (r - quarter_p_sq).abs() <= band {
        Area::V
    } else if r < T::zero() {
        Area::II
    } else if r > quarter_p_sq {
        Area::III
    } else if p > T::zero() {
        Area::I
    } else {
        Area::IV
    };
    let max_growth_rate = biquadratic_roots(p, r)
        .iter()
        .fold(T::neg_infinity(), |m, l| m.max(l.re));
    Ok(Regime {
        label,
        max_growth_rate,
    })
}

/// Three-mode classification data.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThreeModeRegime<T> {
    pub regime: Regime<T>,
    /// Discriminant of the reduced cubic in `λ`; positive means amplification.
    pub cubic_discriminant: T,
    pub p3: T,
    pub q3: T,
    /// The root `iφ/2` that is always present when only the signal is up-converted.
    pub imaginary_root: Complex<T>,
}

/// Three-mode classification (`η_i = 0`, `Δ_i = 0`) from the reduced cubic.
pub fn classify_three_mode<T: Real>(params: &ModelParams<T>) -> Result<ThreeModeRegime<T>> {
    if !params.is_three_mode() {
        return Err(Error::Constraint {
            constraint: "three-mode",
            detail: "requires eta_i = 0 and delta_i = 0".into(),
        });
    }
    let l = T::lit;
    let k_sq = params.kappa.norm_sqr();
    let ds = params.delta_s;
    let g_sq = params.eta_s.norm_sqr() + ds * ds * l(0.25);
    let phi = params.delta_tilde - ds * T::half();
    let p3 = g_sq - k_sq + phi * phi / l(3.0);
    let q3 = ds * k_sq * T::half() - l(2.0) * phi / l(3.0) * (g_sq + k_sq * T::half() - phi * phi / l(9.0));
    // ∏ (λ_j − λ_k)² over the cubic's roots; equals −disc of the μ-cubic.
    let (cube, square) = (l(4.0) * p3 * p3 * p3, l(27.0) * q3 * q3);
    let d3 = square - cube;

    let d = derive(params);
    let band = zero_band(d.scale(), cube.abs() + square);
    let label = if d3.abs() <= band {
        Area::V
    } else if d3 > T::zero() {
        Area::II
    } else {
        Area::I
    };
    Ok(ThreeModeRegime {
        regime: Regime {
            label,
            max_growth_rate: solve_quartic(&d).max_growth_rate(),
        },
        cubic_discriminant: d3,
        p3,
        q3,
        imaginary_root: Complex::new(T::zero(), phi * T::half()),
    })
}

/// Regime from the most specific table that applies: degenerate, then
/// three-mode, then the general four-mode one.
pub fn classify<T: Real>(params: &ModelParams<T>) -> Regime<T> {
    if let Ok(regime) = classify_degenerate(params) {
        regime
    } else if let Ok(three) = classify_three_mode(params) {
        three.regime
    } else {
        classify_general(&derive(params))
    }
}

/// Everything known about the characteristic equation of a parameter set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CharacteristicData<T> {
    pub p: T,
    pub q: T,
    pub r: T,
    pub discriminant: T,
    pub roots: QuarticRoots<T>,
    pub regime: Regime<T>,
}

pub fn analyze<T: Real>(params: &ModelParams<T>) -> CharacteristicData<T> {
    let d = derive(params);
    CharacteristicData {
        p: d.p_coef,
        q: d.q_coef,
        r: d.r_coef,
        discriminant: discriminant_general(&d),
        roots: solve_quartic(&d),
        regime: classify(params),
    }
}
