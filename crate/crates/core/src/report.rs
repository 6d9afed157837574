//! Clone statistics compared against the optimal cloning bounds.

use nalgebra::{DVector, Matrix2};
use serde::{Deserialize, Serialize};

use crate::cloner::{ClonerCircuit, Preparation, Variant};
use crate::error::{invalid, Result};
use crate::fidelity::{fidelity_with_pure, optimal_added_variance, optimal_fidelity};
use crate::state::{GaussianState, VACUUM_VARIANCE};

/// Tolerance for the saturation flags.
pub const SATURATION_TOL: f64 = 1e-9;

/// Quadrature angles `kπ/8`, `k = 0..8`, at which variances are sampled.
pub fn sample_angles() -> Vec<f64> {
    (0..8)
        .map(|k| k as f64 * std::f64::consts::PI / 8.0)
        .collect()
}

/// Moments of one output mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeStats {
    pub mode: usize,
    pub mean: [f64; 2],
    pub cov: [[f64; 2]; 2],
    /// Variances at [`CloneReport::angles`].
    pub variances: Vec<f64>,
}

impl ModeStats {
    fn from_state(state: &GaussianState, mode: usize, angles: &[f64]) -> Result<Self> {
        let mean = state.mode_mean(mode)?;
        let cov = state.mode_cov(mode)?;
        let variances = angles
            .iter()
            .map(|&phi| state.quadrature_variance(mode, phi))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            mode,
            mean: [mean[0], mean[1]],
            cov: [[cov[(0, 0)], cov[(0, 1)]], [cov[(1, 0)], cov[(1, 1)]]],
            variances,
        })
    }

    pub fn cov_matrix(&self) -> Matrix2<f64> {
        Matrix2::new(self.cov[0][0], self.cov[0][1], self.cov[1][0], self.cov[1][1])
    }

    pub fn marginal(&self) -> Result<GaussianState> {
        let c = self.cov_matrix();
        GaussianState::new(
            DVector::from_vec(self.mean.to_vec()),
            nalgebra::DMatrix::from_row_slice(2, 2, c.transpose().as_slice()),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloneStats {
    #[serde(flatten)]
    pub stats: ModeStats,
    /// Fidelity with the prepared input state.
    pub fidelity: f64,
    /// Added noise per sampled angle, `(var/var_in − 1)·Δx²_vac`; for
    /// coherent inputs this is `var − 1/2`.
    pub added_variance: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloneReport {
    pub n: usize,
    pub m: usize,
    pub variant: Variant,
    pub alpha: [f64; 2],
    pub input_squeeze: f64,
    pub ancilla_squeeze: f64,
    pub angles: Vec<f64>,
    pub clones: Vec<CloneStats>,
    pub anticlones: Vec<ModeStats>,
    pub waste: Vec<ModeStats>,
    pub optimal_added_variance: f64,
    pub optimal_fidelity: f64,
    pub max_fidelity_error: f64,
    pub max_added_variance_error: f64,
    pub max_mean_error: f64,
    /// Max-abs distance of each clone covariance from the closest multiple
    /// of the input covariance.
    pub max_isotropy_error: f64,
    pub tolerance: f64,
    pub fidelity_saturated: bool,
    pub noise_saturated: bool,
    pub mean_correct: bool,
    pub saturated: bool,
}

impl CloneReport {
    /// Smallest and largest clone fidelity.
    pub fn fidelity_range(&self) -> (f64, f64) {
        self.clones.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| {
            (lo.min(c.fidelity), hi.max(c.fidelity))
        })
    }

    /// Mean over clones and angles of the added variance.
    pub fn mean_added_variance(&self) -> f64 {
        let all: Vec<f64> = self
            .clones
            .iter()
            .flat_map(|c| c.added_variance.iter().copied())
            .collect();
        all.iter().sum::<f64>() / all.len().max(1) as f64
    }

    /// Recomputes each fidelity from the stored moments.
    pub fn is_consistent(&self, tol: f64) -> bool {
        let reference = GaussianState::squeezed_coherent(self.alpha[0], self.alpha[1], self.input_squeeze);
        self.clones.iter().all(|c| {
            (0.0..=1.0).contains(&c.fidelity)
                && c.stats
                    .marginal()
                    .and_then(|s| fidelity_with_pure(&s, &reference))
                    .map(|f| (f - c.fidelity).abs() <= tol)
                    .unwrap_or(false)
        })
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| invalid(e.to_string()))
    }
}

/// Report for a coherent input `|α⟩`.
pub fn report(cloner: &ClonerCircuit, alpha_re: f64, alpha_im: f64) -> Result<CloneReport> {
    report_with(cloner, &Preparation::coherent(alpha_re, alpha_im))
}

pub fn report_with(cloner: &ClonerCircuit, prep: &Preparation) -> Result<CloneReport> {
    let out = cloner.run(prep)?;
    build_report(cloner, prep, &out)
}

pub(crate) fn build_report(
    cloner: &ClonerCircuit,
    prep: &Preparation,
    out: &GaussianState,
) -> Result<CloneReport> {
    let layout = cloner.layout();
    let angles = sample_angles();
    let reference = prep.reference();
    let ref_mean = reference.mode_mean(0)?;
    let ref_cov = reference.mode_cov(0)?;
    let ref_vars = angles
        .iter()
        .map(|&phi| reference.quadrature_variance(0, phi))
        .collect::<Result<Vec<_>>>()?;
    let opt_var = optimal_added_variance(layout.n, layout.m)?;
    let opt_fid = optimal_fidelity(layout.n, layout.m)?;
    let ref_inv = ref_cov
        .try_inverse()
        .ok_or_else(|| invalid("singular input covariance"))?;

    let mut clones = Vec::with_capacity(layout.clones.len());
    let (mut fid_err, mut var_err, mut mean_err, mut iso_err) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for &mode in &layout.clones {
        let stats = ModeStats::from_state(out, mode, &angles)?;
        let marginal = out.reduced(&[mode])?;
        let fidelity = fidelity_with_pure(&marginal, &reference)?;
        let added_variance: Vec<f64> = stats
            .variances
            .iter()
            .zip(&ref_vars)
            .map(|(v, r)| (v / r - 1.0) * VACUUM_VARIANCE)
            .collect();

        let cov = stats.cov_matrix();
        let scale = (ref_inv * cov).trace() / 2.0;
        iso_err = iso_err.max((cov - ref_cov * scale).amax());
        fid_err = fid_err.max((fidelity - opt_fid).abs());
        for a in &added_variance {
            var_err = var_err.max((a - opt_var).abs());
        }
        mean_err = mean_err.max((out.mode_mean(mode)? - ref_mean).amax());
        clones.push(CloneStats {
            stats,
            fidelity,
            added_variance,
        });
    }

    let anticlones = layout
        .anticlones
        .iter()
        .map(|&m| ModeStats::from_state(out, m, &angles))
        .collect::<Result<Vec<_>>>()?;
    let waste = layout
        .waste
        .iter()
        .map(|&m| ModeStats::from_state(out, m, &angles))
        .collect::<Result<Vec<_>>>()?;

    let fidelity_saturated = fid_err <= SATURATION_TOL;
    let noise_saturated = var_err <= SATURATION_TOL && iso_err <= SATURATION_TOL;
    let mean_correct = mean_err <= SATURATION_TOL;
    Ok(CloneReport {
        n: layout.n,
        m: layout.m,
        variant: layout.variant,
        alpha: [prep.alpha_re, prep.alpha_im],
        input_squeeze: prep.input_squeeze,
        ancilla_squeeze: prep.ancilla_squeeze,
        angles,
        clones,
        anticlones,
        waste,
        optimal_added_variance: opt_var,
        optimal_fidelity: opt_fid,
        max_fidelity_error: fid_err,
        max_added_variance_error: var_err,
        max_mean_error: mean_err,
        max_isotropy_error: iso_err,
        tolerance: SATURATION_TOL,
        fidelity_saturated,
        noise_saturated,
        mean_correct,
        saturated: fidelity_saturated && noise_saturated && mean_correct,
    })
}

/// Moments of the anticlone modes for a coherent input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnticloneReport {
    pub alpha: [f64; 2],
    pub anticlones: Vec<ModeStats>,
    /// `(x₀, −p₀)` for the input mean `(x₀, p₀)`.
    pub conjugate_mean: [f64; 2],
    /// Distance of the single anticlone's mean from `conjugate_mean`; only
    /// set for one-input cloners, where the anticlone is the phase
    /// conjugate of the input.
    pub conjugate_mean_error: Option<f64>,
}

pub fn anticlone_report(
    cloner: &ClonerCircuit,
    alpha_re: f64,
    alpha_im: f64,
) -> Result<AnticloneReport> {
    let layout = cloner.layout();
    if layout.anticlones.is_empty() {
        return Err(invalid("layout has no anticlone modes"));
    }
    let out = cloner.run(&Preparation::coherent(alpha_re, alpha_im))?;
    let angles = sample_angles();
    let anticlones = layout
        .anticlones
        .iter()
        .map(|&m| ModeStats::from_state(&out, m, &angles))
        .collect::<Result<Vec<_>>>()?;
    let x0 = std::f64::consts::SQRT_2 * alpha_re;
    let p0 = std::f64::consts::SQRT_2 * alpha_im;
    let conjugate_mean = [x0, -p0];
    let conjugate_mean_error = (layout.n == 1 && anticlones.len() == 1).then(|| {
        let m = anticlones[0].mean;
        (m[0] - conjugate_mean[0])
            .abs()
            .max((m[1] - conjugate_mean[1]).abs())
    });
    Ok(AnticloneReport {
        alpha: [alpha_re, alpha_im],
        anticlones,
        conjugate_mean,
        conjugate_mean_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cloner::{build_cloner, build_duplicator};

    #[test]
    fn duplicator_report_saturates() {
        let r = report(&build_duplicator(), 1.0, 0.0).unwrap();
        assert!(r.saturated, "{r:?}");
        assert_eq!(r.clones.len(), 2);
        for c in &r.clones {
            assert!((c.fidelity - 2.0 / 3.0).abs() < 1e-12);
            for a in &c.added_variance {
                assert!((a - 0.5).abs() < 1e-12);
            }
        }
        assert!(r.is_consistent(1e-12));
    }

    #[test]
    fn trivial_cloning_report() {
        for v in Variant::ALL {
            let r = report(&build_cloner(3, 3, v).unwrap(), 0.4, -0.9).unwrap();
            assert!(r.saturated);
            for c in &r.clones {
                assert!((c.fidelity - 1.0).abs() < 1e-12);
                assert!(c.added_variance.iter().all(|a| a.abs() < 1e-12));
            }
        }
    }

    #[test]
    fn duplicator_anticlone() {
        let d = build_duplicator();
        let a = anticlone_report(&d, 0.0, 1.0).unwrap();
        let mean = a.anticlones[0].mean;
        assert!(mean[0].abs() < 1e-12);
        assert!((mean[1] + std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!(a.conjugate_mean_error.unwrap() < 1e-12);
        for v in &a.anticlones[0].variances {
            assert!((v - 1.5).abs() < 1e-12);
        }
        let zero = anticlone_report(&d, 0.0, 0.0).unwrap();
        assert!(zero.anticlones[0].mean.iter().all(|m| m.abs() < 1e-15));
    }

    #[test]
    fn percopy_anticlone_error_not_asserted() {
        let c = build_cloner(2, 3, Variant::PerCopy).unwrap();
        let a = anticlone_report(&c, 1.0, 1.0).unwrap();
        assert_eq!(a.anticlones.len(), 2);
        assert!(a.conjugate_mean_error.is_none());
    }

    #[test]
    fn report_json_has_fields() {
        let r = report(&build_duplicator(), 0.5, 0.5).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(v["variant"], "msplitter");
        assert_eq!(v["saturated"], true);
        assert!(v["clones"][0]["fidelity"].as_f64().is_some());
        assert_eq!(v["clones"][0]["variances"].as_array().unwrap().len(), 8);
    }
}
