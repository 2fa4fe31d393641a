//! Gain sweeps comparing the exact, averaged and PDC-only models.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::emit::{Cell, Keyed, Table};
use crate::error::{Error, Result};
use crate::matrix::BogoliubovMatrix;
use crate::observables::{lossy_approximation, photon_numbers, single_mode_min_variance, Mode};
use crate::params::ModelParams;
use crate::solve::{solve_matrix, SolveOptions, Solver};

/// `n_a`, `n_b` and the single-mode minimum of the down-converted mode.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModelValues {
    pub n_a: f64,
    pub n_b: f64,
    /// Defined for degenerate parameters only.
    pub minvar_a: Option<f64>,
}

impl ModelValues {
    fn from_matrix(m: &BogoliubovMatrix<f64>) -> Self {
        let n = photon_numbers(m);
        Self {
            n_a: n.n_as,
            n_b: n.n_bs,
            minvar_a: single_mode_min_variance(m, Mode::A).ok().map(|s| s.min_variance),
        }
    }

    fn cells(values: Option<&Self>) -> [Cell; 3] {
        match values {
            Some(v) => [
                Cell::Number(v.n_a),
                Cell::Number(v.n_b),
                v.minvar_a.map_or(Cell::Empty, Cell::Number),
            ],
            None => [Cell::Empty, Cell::Empty, Cell::Empty],
        }
    }
}

/// Exact solution next to the averaged model and PDC without up-conversion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModelComparison {
    pub params: ModelParams<f64>,
    pub exact: ModelValues,
    pub averaged: ModelValues,
    pub pdc_only: ModelValues,
}

impl ModelComparison {
    /// One column per model, one row per quantity.
    pub fn table(&self) -> Table {
        let header = ["quantity", "exact", "averaged", "pdc_only"].map(String::from).to_vec();
        let models = [&self.exact, &self.averaged, &self.pdc_only];
        let rows = ["n_a", "n_b", "minvar_a"]
            .into_iter()
            .enumerate()
            .map(|(k, name)| {
                let mut row = vec![Cell::Text(name.into())];
                row.extend(models.iter().map(|v| ModelValues::cells(Some(v))[k].clone()));
                row
            })
            .collect();
        Table { header, rows }
    }
}

/// All three models at `z = L`. The PDC-only column drops both up-conversion couplings.
pub fn compare_models(params: &ModelParams<f64>) -> Result<ModelComparison> {
    let params = params.validate()?;
    let at = |p: &ModelParams<f64>, solver| -> Result<ModelValues> {
        let options = SolveOptions { solver, fallback: true };
        Ok(ModelValues::from_matrix(&solve_matrix(p, p.length, options)?.0))
    };
    let zero = Complex::new(0.0, 0.0);
    let pdc = ModelParams {
        eta_s: zero,
        eta_i: zero,
        ..params
    };
    Ok(ModelComparison {
        params,
        exact: at(&params, Solver::Analytic)?,
        averaged: at(&params, Solver::Averaged)?,
        pdc_only: at(&pdc, Solver::Analytic)?,
    })
}

/// Degenerate, PDC-phase-matched sweep over the gain `Γ = |κ|L`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GainSpec {
    /// `Δ_s L`
    pub delta_s_times_l: f64,
    /// `r = |η_s| / |κ|`
    pub ratio_r: f64,
    pub gamma_max: f64,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GainRow {
    pub gamma: f64,
    pub exact: Option<ModelValues>,
    pub averaged: Option<ModelValues>,
    pub pdc_only: Option<ModelValues>,
    /// Small-`ε_b` closed form; absent for `Δ_s = 0`.
    pub approx: Option<ModelValues>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GainSweep {
    pub spec: GainSpec,
    pub rows: Vec<GainRow>,
}

impl GainSweep {
    pub fn gammas(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.gamma).collect()
    }

    pub fn table(&self) -> Table {
        let mut header = vec!["gamma".to_string()];
        for model in ["exact", "averaged", "pdc_only", "approx"] {
            for q in ["n_a", "n_b", "minvar_a"] {
                header.push(format!("{model}_{q}"));
            }
        }
        let with_error = self.rows.iter().any(|r| r.error.is_some());
        if with_error {
            header.push("error".into());
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut row = vec![Cell::Number(r.gamma)];
                for v in [&r.exact, &r.averaged, &r.pdc_only, &r.approx] {
                    row.extend(ModelValues::cells(v.as_ref()));
                }
                if with_error {
                    row.push(r.error.clone().map_or(Cell::Empty, Cell::Text));
                }
                row
            })
            .collect();
        Table { header, rows }
    }

    pub fn to_json(&self) -> String {
        let table = self.table();
        let rows: Vec<Keyed> = table
            .rows
            .iter()
            .map(|row| Keyed {
                header: &table.header,
                row,
            })
            .collect();
        serde_json::to_string_pretty(&serde_json::json!({
            "spec": self.spec,
            "rows": serde_json::to_value(&rows).expect("rows serialize"),
        }))
        .expect("sweep serializes")
    }
}

fn gain_row(spec: &GainSpec, gamma: f64) -> GainRow {
    // Everything depends on L only through Γ, r and Δ_s L, so L = 1.
    let params = ModelParams::degenerate(
        Complex::new(gamma, 0.0),
        Complex::new(spec.ratio_r * gamma, 0.0),
        0.0,
        spec.delta_s_times_l,
        1.0,
    );
    let approx = lossy_approximation(gamma, spec.ratio_r * gamma, spec.delta_s_times_l, 1.0)
        .ok()
        .map(|a| ModelValues {
            n_a: a.n_a,
            n_b: a.n_b,
            minvar_a: Some(a.min_variance),
        });
    match compare_models(&params) {
        Ok(c) => GainRow {
            gamma,
            exact: Some(c.exact),
            averaged: Some(c.averaged),
            pdc_only: Some(c.pdc_only),
            approx,
            error: None,
        },
        Err(e) => GainRow {
            gamma,
            exact: None,
            averaged: None,
            pdc_only: None,
            approx,
            error: Some(e.tag().to_string()),
        },
    }
}

/// Exact, averaged, PDC-only and approximate values for `Γ` uniform on `[0, gamma_max]`.
pub fn sweep_gain(delta_s_times_l: f64, ratio_r: f64, gamma_max: f64, points: usize) -> Result<GainSweep> {
    let spec = GainSpec {
        delta_s_times_l,
        ratio_r,
        gamma_max,
        points,
    };
    if points < 2 {
        return Err(Error::InvalidSpec("a gain sweep needs at least 2 points".into()));
    }
    if ![delta_s_times_l, ratio_r, gamma_max].iter().all(|x| x.is_finite()) || gamma_max < 0.0 {
        return Err(Error::InvalidSpec("gain sweep bounds must be finite with gamma_max >= 0".into()));
    }
    let axis = super::Axis::new(super::Parameter::Kappa, 0.0, gamma_max, points);
    let rows = (0..points)
        .into_par_iter()
        .map(|k| gain_row(&spec, axis.value(k)))
        .collect();
    Ok(GainSweep { spec, rows })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn vacuum_at_zero_gain() {
        let s = sweep_gain(15.0 * PI, 1.0, 6.0, 7).unwrap();
        let r = &s.rows[0];
        assert_eq!(r.gamma, 0.0);
        for v in [r.exact, r.averaged, r.pdc_only, r.approx] {
            let v = v.unwrap();
            assert_eq!((v.n_a, v.n_b), (0.0, 0.0));
            assert!((v.minvar_a.unwrap() - 1.0).abs() < 1e-15);
        }
        assert_eq!(s.gammas().last(), Some(&6.0));
    }

    #[test]
    fn even_multiple_switches_off_averaged_up_conversion() {
        let s = sweep_gain(16.0 * PI, 1.0, 6.0, 13).unwrap();
        for r in &s.rows[1..] {
            assert_eq!(r.averaged.unwrap().n_b, 0.0);
            assert!(r.exact.unwrap().n_b > 0.0);
        }
    }

    #[test]
    fn comparison_without_up_conversion_is_uniform() {
        let p = ModelParams::degenerate(Complex::new(2.0, 0.0), Complex::new(0.0, 0.0), 0.0, 5.0, 1.5);
        let c = compare_models(&p).unwrap();
        assert_eq!(c.exact, c.pdc_only);
        assert_eq!(c.exact, c.averaged);
        let t = c.table();
        assert_eq!(t.rows.len(), 3);
        assert_eq!(t.header, ["quantity", "exact", "averaged", "pdc_only"]);
        assert_eq!(t.rows[1][1], Cell::Number(0.0));
    }

    #[test]
    fn exact_and_pdc_are_comparable_at_moderate_gain() {
        let p = ModelParams::degenerate(Complex::new(4.0, 0.0), Complex::new(4.0, 0.0), 0.0, 15.0 * PI, 1.0);
        let c = compare_models(&p).unwrap();
        let ratio = c.exact.n_a / c.pdc_only.n_a;
        assert!(ratio > 0.1 && ratio < 10.0, "{ratio}");
    }

    #[test]
    fn table_layout() {
        let s = sweep_gain(0.0, 1.0, 1.0, 2).unwrap();
        let t = s.table();
        assert_eq!(t.header.len(), 13);
        assert_eq!(t.rows[1][10], Cell::Empty);
        assert!(sweep_gain(1.0, 1.0, 1.0, 1).is_err());
    }
}
