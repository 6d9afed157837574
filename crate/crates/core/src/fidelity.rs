//! Single-mode fidelities and the optimal N→M cloning bounds.

use nalgebra::Matrix2;

use crate::error::{invalid, Error, Result};
use crate::state::{GaussianState, VACUUM_VARIANCE};

/// Relative tolerance on `det(2V) = 1` when a reference must be pure.
const PURITY_TOL: f64 = 1e-9;

/// Overlap `⟨ψ|ρ|ψ⟩` of a single-mode Gaussian `state` with a pure Gaussian
/// `reference`:
///
/// `F = exp(-½ δᵀ (V + W)⁻¹ δ) / √det(V + W)`, with `δ` the mean difference.
pub fn fidelity_with_pure(state: &GaussianState, reference: &GaussianState) -> Result<f64> {
    if state.n_modes() != 1 {
        return Err(invalid(format!(
            "fidelity needs a single-mode state, got {} modes",
            state.n_modes()
        )));
    }
    if reference.n_modes() != 1 {
        return Err(invalid(format!(
            "fidelity needs a single-mode reference, got {} modes",
            reference.n_modes()
        )));
    }
    let det = reference.scaled_determinant();
    if !((det - 1.0).abs() <= PURITY_TOL) {
        return Err(invalid(format!(
            "reference state is not pure (det(2V) = {det})"
        )));
    }
    let sum: Matrix2<f64> = state.mode_cov(0)? + reference.mode_cov(0)?;
    let delta = state.mode_mean(0)? - reference.mode_mean(0)?;
    let inv = sum
        .try_inverse()
        .ok_or_else(|| invalid("singular covariance sum"))?;
    let exponent = -0.5 * delta.dot(&(inv * delta));
    let f = exponent.exp() / sum.determinant().sqrt();
    Ok(f.clamp(0.0, 1.0))
}

/// Fidelity of a single-mode state with the coherent state `|α⟩`.
pub fn fidelity_vs_coherent(state: &GaussianState, alpha_re: f64, alpha_im: f64) -> Result<f64> {
    fidelity_with_pure(state, &GaussianState::coherent(alpha_re, alpha_im))
}

fn check_counts(n: usize, m: usize) -> Result<()> {
    if n == 0 {
        return Err(invalid("number of inputs N must be at least 1"));
    }
    if m < n {
        return Err(Error::InvalidArgument(format!(
            "number of clones M = {m} is smaller than number of inputs N = {n}"
        )));
    }
    Ok(())
}

/// Minimal added noise per quadrature for symmetric N→M cloning of coherent
/// states: `(2/N − 2/M)·Δx²_vac`.
pub fn optimal_added_variance(n: usize, m: usize) -> Result<f64> {
    check_counts(n, m)?;
    Ok((2.0 / n as f64 - 2.0 / m as f64) * VACUUM_VARIANCE)
}

/// Maximal N→M cloning fidelity `MN / (MN + M − N)`.
pub fn optimal_fidelity(n: usize, m: usize) -> Result<f64> {
    check_counts(n, m)?;
    let (n, m) = (n as f64, m as f64);
    Ok(m * n / (m * n + m - n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, DVector};

    #[test]
    fn coherent_self_fidelity_is_one() {
        for (re, im) in [(0.0, 0.0), (1.0, -2.0), (3.0, 4.0)] {
            let c = GaussianState::coherent(re, im);
            assert_eq!(fidelity_vs_coherent(&c, re, im).unwrap(), 1.0);
        }
    }

    #[test]
    fn isotropic_noise_gives_formula() {
        for (n, m) in [(1usize, 2usize), (2, 3), (3, 7), (4, 4)] {
            let s = 1.0 + 2.0 / n as f64 - 2.0 / m as f64;
            let state = GaussianState::new(
                DVector::from_vec(vec![0.4, -0.2]),
                DMatrix::identity(2, 2) * (s / 2.0),
            )
            .unwrap();
            let (re, im) = state.amplitude(0).unwrap();
            let f = fidelity_vs_coherent(&state, re, im).unwrap();
            assert!((f - optimal_fidelity(n, m).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn multimode_rejected() {
        let v = GaussianState::vacuum(2).unwrap();
        assert!(fidelity_vs_coherent(&v, 0.0, 0.0).is_err());
    }

    #[test]
    fn mixed_reference_rejected() {
        let thermal = GaussianState::new(DVector::zeros(2), DMatrix::identity(2, 2)).unwrap();
        let v = GaussianState::vacuum(1).unwrap();
        assert!(fidelity_with_pure(&v, &thermal).is_err());
    }

    #[test]
    fn orthogonal_ish_states_have_small_fidelity() {
        let far = GaussianState::coherent(10.0, 0.0);
        let f = fidelity_vs_coherent(&far, 0.0, 0.0).unwrap();
        // |⟨0|α⟩|² = e^{-|α|²}
        assert!((f - (-100f64).exp()).abs() < 1e-50);
    }

    #[test]
    fn bounds_examples() {
        assert_eq!(optimal_added_variance(1, 2).unwrap(), 0.5);
        assert_eq!(optimal_added_variance(5, 5).unwrap(), 0.0);
        assert!((optimal_added_variance(2, 3).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert!((optimal_fidelity(1, 2).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(optimal_fidelity(3, 3).unwrap(), 1.0);
        let limit = optimal_fidelity(1, 1_000_000).unwrap();
        assert!((limit - 0.5).abs() < 1e-6 && limit > 0.5);
    }

    #[test]
    fn bounds_reject_m_below_n() {
        assert!(optimal_added_variance(3, 2).is_err());
        assert!(optimal_fidelity(3, 2).is_err());
        assert!(optimal_fidelity(0, 2).is_err());
    }
}
