//! Gaussian states: first and second moments of the quadratures.

use nalgebra::{DMatrix, DVector, Matrix2, SymmetricEigen, Vector2};

use crate::error::{invalid, Error, Result};
use crate::symplectic::{check_distinct, omega, LocalTransform, SymplecticTransform};

/// Quadrature variance of the vacuum (ħ = 1).
pub const VACUUM_VARIANCE: f64 = 0.5;

/// Max-abs asymmetry tolerated in a covariance matrix.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Slack on the `ν ≥ 1/2` uncertainty test.
pub const UNCERTAINTY_TOL: f64 = 1e-9;

fn uncertainty_tolerance_for(cond: f64) -> f64 {
    UNCERTAINTY_TOL + 4.0 * f64::EPSILON * cond
}

/// An `n`-mode Gaussian state.
///
/// `mean` holds `(⟨x0⟩, ⟨p0⟩, ⟨x1⟩, ...)` and `cov` the symmetrized
/// covariance matrix in the same ordering. With `a = (x + ip)/√2` the vacuum
/// has `cov = I/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// Validates shape, symmetry and the uncertainty relation.
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let dim = mean.len();
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(invalid(format!(
                "mean vector must have even positive length, got {dim}"
            )));
        }
        if cov.nrows() != dim || cov.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim / 2,
                found: cov.nrows() / 2,
            });
        }
        let asym = (&cov - cov.transpose()).amax();
        if !(asym <= SYMMETRY_TOL) {
            return Err(invalid(format!("covariance asymmetric by {asym:e}")));
        }
        let state = Self { mean, cov };
        state.check_uncertainty()?;
        Ok(state)
    }

    pub fn vacuum(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(invalid("vacuum state needs at least one mode"));
        }
        let dim = 2 * n_modes;
        Ok(Self {
            mean: DVector::zeros(dim),
            cov: DMatrix::identity(dim, dim) * VACUUM_VARIANCE,
        })
    }

    /// Coherent state `|α⟩`, mean `(√2 Re α, √2 Im α)`.
    pub fn coherent(alpha_re: f64, alpha_im: f64) -> Self {
        Self::squeezed_coherent(alpha_re, alpha_im, 0.0)
    }

    /// Squeezed vacuum with `cov = diag(e^{-2r}/2, e^{2r}/2)`.
    pub fn squeezed_vacuum(r: f64) -> Self {
        Self::squeezed_coherent(0.0, 0.0, r)
    }

    /// Displaced squeezed state: coherent mean, squeezed-vacuum covariance.
    pub fn squeezed_coherent(alpha_re: f64, alpha_im: f64, r: f64) -> Self {
        let s = std::f64::consts::SQRT_2;
        Self {
            mean: DVector::from_vec(vec![s * alpha_re, s * alpha_im]),
            cov: DMatrix::from_diagonal(&DVector::from_vec(vec![
                (-2.0 * r).exp() * VACUUM_VARIANCE,
                (2.0 * r).exp() * VACUUM_VARIANCE,
            ])),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// `⟨a⟩ = (⟨x⟩ + i⟨p⟩)/√2` for one mode, returned as `(re, im)`.
    pub fn amplitude(&self, mode: usize) -> Result<(f64, f64)> {
        let m = self.mode_mean(mode)?;
        let s = std::f64::consts::SQRT_2;
        Ok((m[0] / s, m[1] / s))
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.n_modes() {
            return Err(Error::IndexOutOfRange {
                index: mode,
                n_modes: self.n_modes(),
            });
        }
        Ok(())
    }

    pub fn mode_mean(&self, mode: usize) -> Result<Vector2<f64>> {
        self.check_mode(mode)?;
        Ok(Vector2::new(self.mean[2 * mode], self.mean[2 * mode + 1]))
    }

    pub fn mode_cov(&self, mode: usize) -> Result<Matrix2<f64>> {
        self.check_mode(mode)?;
        Ok(self.cov.fixed_view::<2, 2>(2 * mode, 2 * mode).into_owned())
    }

    /// Product state `self ⊗ other`; `other`'s modes follow `self`'s.
    pub fn tensor(&self, other: &GaussianState) -> GaussianState {
        let (da, db) = (self.mean.len(), other.mean.len());
        let mut mean = DVector::zeros(da + db);
        mean.rows_mut(0, da).copy_from(&self.mean);
        mean.rows_mut(da, db).copy_from(&other.mean);
        let mut cov = DMatrix::zeros(da + db, da + db);
        cov.view_mut((0, 0), (da, da)).copy_from(&self.cov);
        cov.view_mut((da, da), (db, db)).copy_from(&other.cov);
        Self { mean, cov }
    }

    /// Tensor product of a sequence of states, in order.
    pub fn product<'a>(states: impl IntoIterator<Item = &'a GaussianState>) -> Result<Self> {
        let mut it = states.into_iter();
        let first = it
            .next()
            .ok_or_else(|| invalid("product of an empty list of states"))?
            .clone();
        Ok(it.fold(first, |acc, s| acc.tensor(s)))
    }

    /// Marginal on `modes`, in the order given.
    pub fn reduced(&self, modes: &[usize]) -> Result<GaussianState> {
        if modes.is_empty() {
            return Err(invalid("reduced state needs at least one mode"));
        }
        check_distinct(modes)?;
        for &m in modes {
            self.check_mode(m)?;
        }
        let idx: Vec<usize> = modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let mean = DVector::from_iterator(idx.len(), idx.iter().map(|&i| self.mean[i]));
        let cov = DMatrix::from_fn(idx.len(), idx.len(), |a, b| self.cov[(idx[a], idx[b])]);
        Ok(Self { mean, cov })
    }

    /// Variance of `cos φ · x + sin φ · p` on one mode.
    pub fn quadrature_variance(&self, mode: usize, phi: f64) -> Result<f64> {
        let v = self.mode_cov(mode)?;
        let u = Vector2::new(phi.cos(), phi.sin());
        Ok(u.dot(&(v * u)))
    }

    /// `mean <- S mean + d`, `cov <- S cov Sᵀ`.
    pub fn apply(&self, t: &SymplecticTransform) -> Result<GaussianState> {
        if t.n_modes() != self.n_modes() {
            return Err(Error::DimensionMismatch {
                expected: self.n_modes(),
                found: t.n_modes(),
            });
        }
        let deviation = t.symplectic_deviation();
        if !(deviation < crate::symplectic::SYMPLECTIC_TOL) {
            return Err(Error::RejectedTransform { deviation });
        }
        let s = t.matrix();
        Ok(Self {
            mean: s * &self.mean + t.displacement(),
            cov: s * &self.cov * s.transpose(),
        })
    }

    /// Applies a mode-local block in place, touching only its rows and columns.
    pub fn apply_local(&mut self, t: &LocalTransform) -> Result<()> {
        t.check_range(self.n_modes())?;
        t.apply_vector(&mut self.mean);
        t.left_multiply(&mut self.cov);
        t.right_multiply_transpose(&mut self.cov);
        Ok(())
    }

    /// Symplectic eigenvalues `ν_1 ≤ ... ≤ ν_n`, i.e. the moduli of the
    /// eigenvalues of `iΩV`.
    ///
    /// Computed as the singular values of `V^{1/2} Ω V^{1/2}`. Returns zeros
    /// when `V` is not positive definite.
    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        self.symplectic_spectrum().0
    }

    /// Symplectic eigenvalues and the condition number of `V`.
    fn symplectic_spectrum(&self) -> (Vec<f64>, f64) {
        let n = self.n_modes();
        let sym = (&self.cov + self.cov.transpose()) * 0.5;
        let eig = SymmetricEigen::new(sym);
        if eig.eigenvalues.iter().any(|&l| !(l > 0.0)) {
            return (vec![0.0; n], f64::INFINITY);
        }
        let cond = eig.eigenvalues.max() / eig.eigenvalues.min();
        let sqrt_diag = DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt));
        let root = &eig.eigenvectors * sqrt_diag * eig.eigenvectors.transpose();
        let a = &root * omega(n) * &root;
        let mut sv: Vec<f64> = a.singular_values().iter().copied().collect();
        sv.sort_by(f64::total_cmp);
        // each ν appears twice
        let nu = sv.chunks(2).map(|pair| 0.5 * (pair[0] + pair[1])).collect();
        (nu, cond)
    }

    /// Absolute tolerance on `min ν`. A rounding-level perturbation of `V`
    /// moves `ν` by up to about `ε·cond(V)`, so strongly squeezed states get
    /// a wider margin than `UNCERTAINTY_TOL`.
    pub fn uncertainty_tolerance(&self) -> f64 {
        uncertainty_tolerance_for(self.symplectic_spectrum().1)
    }

    /// `cov + iΩ/2 ⪰ 0`, tested as `min ν ≥ 1/2 - uncertainty_tolerance()`.
    pub fn check_uncertainty(&self) -> Result<()> {
        let (nu, cond) = self.symplectic_spectrum();
        let min = nu.into_iter().fold(f64::INFINITY, f64::min);
        if min >= VACUUM_VARIANCE - uncertainty_tolerance_for(cond) {
            Ok(())
        } else {
            Err(Error::Unphysical {
                min_eigenvalue: min,
            })
        }
    }

    /// `det(2·cov)`; equals 1 for pure states.
    pub fn scaled_determinant(&self) -> f64 {
        (&self.cov * 2.0).determinant()
    }

    /// `Tr ρ² = 1/√det(2·cov)`.
    pub fn purity(&self) -> f64 {
        1.0 / self.scaled_determinant().sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, SQRT_2};

    #[test]
    fn vacuum_single_mode() {
        let v = GaussianState::vacuum(1).unwrap();
        assert_eq!(v.mean().as_slice(), &[0.0, 0.0]);
        assert_eq!(v.cov(), &(DMatrix::identity(2, 2) * 0.5));
    }

    #[test]
    fn vacuum_three_modes() {
        let v = GaussianState::vacuum(3).unwrap();
        assert_eq!(v.mean(), &DVector::zeros(6));
        assert_eq!(v.cov(), &(DMatrix::identity(6, 6) * 0.5));
    }

    #[test]
    fn vacuum_zero_modes_is_error() {
        assert!(matches!(
            GaussianState::vacuum(0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn vacuum_symplectic_eigenvalues_are_half() {
        let nu = GaussianState::vacuum(2).unwrap().symplectic_eigenvalues();
        assert_eq!(nu.len(), 2);
        for v in nu {
            assert!((v - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn coherent_zero_is_vacuum() {
        assert_eq!(
            GaussianState::coherent(0.0, 0.0),
            GaussianState::vacuum(1).unwrap()
        );
    }

    #[test]
    fn coherent_mean_convention() {
        let c = GaussianState::coherent(1.0, 0.0);
        assert_eq!(c.mean().as_slice(), &[SQRT_2, 0.0]);
        let (re, im) = GaussianState::coherent(1.0, 2.0).amplitude(0).unwrap();
        assert!((re - 1.0).abs() < 1e-14 && (im - 2.0).abs() < 1e-14);
    }

    #[test]
    fn squeezed_vacuum_ln2() {
        let s = GaussianState::squeezed_vacuum(2f64.ln());
        let c = s.cov();
        assert!((c[(0, 0)] - 0.125).abs() < 1e-15);
        assert!((c[(1, 1)] - 2.0).abs() < 1e-15);
        assert!((c[(0, 0)] * c[(1, 1)] - 0.25).abs() < 1e-15);
        assert!((s.symplectic_eigenvalues()[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn squeezed_zero_is_vacuum() {
        assert_eq!(
            GaussianState::squeezed_vacuum(0.0),
            GaussianState::vacuum(1).unwrap()
        );
    }

    #[test]
    fn tensor_block_structure() {
        let t = GaussianState::coherent(1.0, 0.0).tensor(&GaussianState::squeezed_vacuum(1.0));
        let e2 = (-2f64).exp();
        let expect = DMatrix::from_diagonal(&DVector::from_vec(vec![
            0.5,
            0.5,
            e2 / 2.0,
            1.0 / e2 / 2.0,
        ]));
        assert!((t.cov() - expect).amax() < 1e-15);
        assert_eq!(t.reduced(&[0]).unwrap(), GaussianState::coherent(1.0, 0.0));
        let vv = GaussianState::vacuum(1)
            .unwrap()
            .tensor(&GaussianState::vacuum(1).unwrap());
        assert_eq!(vv, GaussianState::vacuum(2).unwrap());
    }

    #[test]
    fn reduced_full_list_is_identity() {
        let s = GaussianState::coherent(1.0, -1.0).tensor(&GaussianState::squeezed_vacuum(0.3));
        assert_eq!(s.reduced(&[0, 1]).unwrap(), s);
    }

    #[test]
    fn reduced_errors() {
        let s = GaussianState::vacuum(2).unwrap();
        assert!(matches!(
            s.reduced(&[2]),
            Err(Error::IndexOutOfRange { index: 2, .. })
        ));
        assert!(s.reduced(&[1, 1]).is_err());
        assert!(s.reduced(&[]).is_err());
    }

    #[test]
    fn quadrature_variance_values() {
        let v = GaussianState::vacuum(1).unwrap();
        for k in 0..8 {
            let phi = k as f64 * PI / 7.0;
            assert!((v.quadrature_variance(0, phi).unwrap() - 0.5).abs() < 1e-15);
        }
        let r = 0.8;
        let s = GaussianState::squeezed_vacuum(r);
        assert!((s.quadrature_variance(0, 0.0).unwrap() - (-2.0 * r).exp() / 2.0).abs() < 1e-15);
        assert!(v.quadrature_variance(1, 0.0).is_err());
    }

    #[test]
    fn new_rejects_unphysical_cov() {
        let cov = DMatrix::identity(2, 2) * 0.25;
        assert!(matches!(
            GaussianState::new(DVector::zeros(2), cov),
            Err(Error::Unphysical { .. })
        ));
    }

    #[test]
    fn new_rejects_asymmetric_cov() {
        let cov = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
        assert!(GaussianState::new(DVector::zeros(2), cov).is_err());
    }

    #[test]
    fn new_accepts_thermal() {
        let cov = DMatrix::identity(2, 2) * 1.5;
        let s = GaussianState::new(DVector::zeros(2), cov).unwrap();
        assert!((s.symplectic_eigenvalues()[0] - 1.5).abs() < 1e-13);
        assert!((s.purity() - 1.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn apply_identity_leaves_state() {
        let s = GaussianState::coherent(0.3, 0.7);
        let out = s.apply(&SymplecticTransform::identity(1)).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn apply_dimension_mismatch() {
        let s = GaussianState::vacuum(2).unwrap();
        assert!(matches!(
            s.apply(&SymplecticTransform::identity(1)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn strongly_squeezed_pure_state_passes_uncertainty() {
        let s = GaussianState::product(&[
            GaussianState::squeezed_vacuum(7.0),
            GaussianState::squeezed_vacuum(-6.5),
        ])
        .unwrap();
        assert!(s.uncertainty_tolerance() > UNCERTAINTY_TOL);
        assert!(s.check_uncertainty().is_ok());
        let squashed = GaussianState::new(
            DVector::zeros(2),
            DMatrix::from_diagonal(&DVector::from_vec(vec![0.45, 0.5])),
        );
        assert!(matches!(squashed, Err(Error::Unphysical { .. })));
    }
}
