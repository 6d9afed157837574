//! Linear quadrature maps: full-space symplectic transforms, mode-local
//! blocks used by circuit elements, and complex mode unitaries.
//!
//! Quadratures are ordered `x0, p0, x1, p1, ...` throughout.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// Tolerance for the symplectic condition `S Ω Sᵀ = Ω` (max-abs).
pub const SYMPLECTIC_TOL: f64 = 1e-10;

/// Tolerance for `U†U = I` (max-abs).
pub const UNITARY_TOL: f64 = 1e-10;

/// Symplectic form: block-diagonal with `[[0, 1], [-1, 0]]` per mode.
pub fn omega(n_modes: usize) -> DMatrix<f64> {
    let dim = 2 * n_modes;
    let mut w = DMatrix::zeros(dim, dim);
    for k in 0..n_modes {
        w[(2 * k, 2 * k + 1)] = 1.0;
        w[(2 * k + 1, 2 * k)] = -1.0;
    }
    w
}

/// Max-abs deviation of `S Ω Sᵀ` from `Ω`. `s` must be square with even size.
pub fn symplectic_deviation(s: &DMatrix<f64>) -> f64 {
    let w = omega(s.nrows() / 2);
    (s * &w * s.transpose() - w).amax()
}

/// Max-abs deviation of `SᵀS` from the identity.
pub fn orthogonality_deviation(s: &DMatrix<f64>) -> f64 {
    (s.transpose() * s - DMatrix::identity(s.nrows(), s.ncols())).amax()
}

/// An affine symplectic map `r -> S r + d` on the quadratures of `n_modes` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticTransform {
    matrix: DMatrix<f64>,
    displacement: DVector<f64>,
}

impl SymplecticTransform {
    /// Validates shape and the symplectic condition.
    pub fn new(matrix: DMatrix<f64>, displacement: DVector<f64>) -> Result<Self> {
        let dim = matrix.nrows();
        if dim == 0 || !dim.is_multiple_of(2) || matrix.ncols() != dim {
            return Err(invalid(format!(
                "symplectic matrix must be square with even positive size, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if displacement.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim / 2,
                found: displacement.len() / 2,
            });
        }
        let deviation = symplectic_deviation(&matrix);
        if !(deviation < SYMPLECTIC_TOL) {
            return Err(Error::RejectedTransform { deviation });
        }
        Ok(Self {
            matrix,
            displacement,
        })
    }

    /// Linear part only, zero displacement.
    pub fn from_matrix(matrix: DMatrix<f64>) -> Result<Self> {
        let dim = matrix.nrows();
        Self::new(matrix, DVector::zeros(dim))
    }

    pub fn identity(n_modes: usize) -> Self {
        let dim = 2 * n_modes;
        Self {
            matrix: DMatrix::identity(dim, dim),
            displacement: DVector::zeros(dim),
        }
    }

    /// Skips validation; callers guarantee the symplectic condition.
    pub(crate) fn from_parts_unchecked(matrix: DMatrix<f64>, displacement: DVector<f64>) -> Self {
        Self {
            matrix,
            displacement,
        }
    }

    pub fn n_modes(&self) -> usize {
        self.matrix.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn displacement(&self) -> &DVector<f64> {
        &self.displacement
    }

    pub fn symplectic_deviation(&self) -> f64 {
        symplectic_deviation(&self.matrix)
    }

    /// The map that applies `self` first and `next` afterwards.
    pub fn then(&self, next: &SymplecticTransform) -> Result<Self> {
        if next.n_modes() != self.n_modes() {
            return Err(Error::DimensionMismatch {
                expected: self.n_modes(),
                found: next.n_modes(),
            });
        }
        Ok(Self {
            matrix: &next.matrix * &self.matrix,
            displacement: &next.matrix * &self.displacement + &next.displacement,
        })
    }

    /// Inverse map, using `S⁻¹ = -Ω Sᵀ Ω`.
    pub fn inverse(&self) -> Self {
        let w = omega(self.n_modes());
        let inv = -(&w * self.matrix.transpose() * &w);
        let displacement = -(&inv * &self.displacement);
        Self {
            matrix: inv,
            displacement,
        }
    }

    /// Composes mode-local blocks, applied in iteration order.
    pub fn from_local_sequence<'a>(
        n_modes: usize,
        blocks: impl IntoIterator<Item = &'a LocalTransform>,
    ) -> Result<Self> {
        let mut s = DMatrix::identity(2 * n_modes, 2 * n_modes);
        for b in blocks {
            b.check_range(n_modes)?;
            b.left_multiply(&mut s);
        }
        Ok(Self::from_parts_unchecked(s, DVector::zeros(2 * n_modes)))
    }

    /// Row/column block coupling input mode `from` to output mode `to`.
    pub fn block(&self, to: usize, from: usize) -> nalgebra::Matrix2<f64> {
        self.matrix.fixed_view::<2, 2>(2 * to, 2 * from).into_owned()
    }
}

/// A symplectic block acting on a few modes of a larger system.
///
/// `matrix` is `2k x 2k` for `k = modes.len()`; its `i`-th 2x2 block row
/// corresponds to `modes[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalTransform {
    modes: Vec<usize>,
    matrix: DMatrix<f64>,
}

impl LocalTransform {
    pub fn new(modes: Vec<usize>, matrix: DMatrix<f64>) -> Result<Self> {
        let k = modes.len();
        if k == 0 {
            return Err(invalid("local transform needs at least one mode"));
        }
        if matrix.nrows() != 2 * k || matrix.ncols() != 2 * k {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: matrix.nrows() / 2,
            });
        }
        check_distinct(&modes)?;
        let deviation = symplectic_deviation(&matrix);
        if !(deviation < SYMPLECTIC_TOL) {
            return Err(Error::RejectedTransform { deviation });
        }
        Ok(Self { modes, matrix })
    }

    /// Builds from a real `k x k` mode matrix acting identically on x and p.
    pub fn from_real_mode_matrix(modes: Vec<usize>, mode_matrix: &DMatrix<f64>) -> Result<Self> {
        let k = mode_matrix.nrows();
        let mut s = DMatrix::zeros(2 * k, 2 * k);
        for i in 0..k {
            for j in 0..k {
                s[(2 * i, 2 * j)] = mode_matrix[(i, j)];
                s[(2 * i + 1, 2 * j + 1)] = mode_matrix[(i, j)];
            }
        }
        Self::new(modes, s)
    }

    pub fn modes(&self) -> &[usize] {
        &self.modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    fn quadrature_indices(&self) -> Vec<usize> {
        self.modes
            .iter()
            .flat_map(|&m| [2 * m, 2 * m + 1])
            .collect()
    }

    pub(crate) fn check_range(&self, n_modes: usize) -> Result<()> {
        match self.modes.iter().find(|&&m| m >= n_modes) {
            Some(&index) => Err(Error::IndexOutOfRange { index, n_modes }),
            None => Ok(()),
        }
    }

    /// Full `n_modes` embedding (identity elsewhere).
    pub fn embed(&self, n_modes: usize) -> Result<SymplecticTransform> {
        self.check_range(n_modes)?;
        let mut s = DMatrix::identity(2 * n_modes, 2 * n_modes);
        let idx = self.quadrature_indices();
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                s[(i, j)] = self.matrix[(a, b)];
            }
        }
        Ok(SymplecticTransform::from_parts_unchecked(
            s,
            DVector::zeros(2 * n_modes),
        ))
    }

    /// In place: `rows[idx, :] <- B rows[idx, :]`.
    pub(crate) fn left_multiply(&self, target: &mut DMatrix<f64>) {
        let idx = self.quadrature_indices();
        let rows = target.select_rows(idx.iter());
        let updated = &self.matrix * rows;
        for (a, &i) in idx.iter().enumerate() {
            target.row_mut(i).copy_from(&updated.row(a));
        }
    }

    /// In place: `cols[:, idx] <- cols[:, idx] Bᵀ`.
    pub(crate) fn right_multiply_transpose(&self, target: &mut DMatrix<f64>) {
        let idx = self.quadrature_indices();
        let cols = target.select_columns(idx.iter());
        let updated = cols * self.matrix.transpose();
        for (a, &j) in idx.iter().enumerate() {
            target.column_mut(j).copy_from(&updated.column(a));
        }
    }

    pub(crate) fn apply_vector(&self, v: &mut DVector<f64>) {
        let idx = self.quadrature_indices();
        let sub = DVector::from_iterator(idx.len(), idx.iter().map(|&i| v[i]));
        let updated = &self.matrix * sub;
        for (a, &i) in idx.iter().enumerate() {
            v[i] = updated[a];
        }
    }
}

pub(crate) fn check_distinct(modes: &[usize]) -> Result<()> {
    for (i, a) in modes.iter().enumerate() {
        if modes[i + 1..].contains(a) {
            return Err(invalid(format!("mode {a} listed more than once")));
        }
    }
    Ok(())
}

/// A complex unitary acting on mode annihilation operators, `a' = U a`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexModeUnitary {
    matrix: DMatrix<Complex64>,
}

impl ComplexModeUnitary {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() == 0 || matrix.nrows() != matrix.ncols() {
            return Err(invalid(format!(
                "mode unitary must be square and non-empty, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let m = matrix.nrows();
        let deviation = (matrix.adjoint() * &matrix - DMatrix::<Complex64>::identity(m, m))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if !(deviation < UNITARY_TOL) {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Quadrature form of `a' = U a` with `a = (x + ip)/√2`:
    /// each 2x2 block is `[[Re u, -Im u], [Im u, Re u]]`.
    pub fn to_symplectic_block(&self) -> DMatrix<f64> {
        let m = self.dim();
        let mut s = DMatrix::zeros(2 * m, 2 * m);
        for i in 0..m {
            for j in 0..m {
                let u = self.matrix[(i, j)];
                s[(2 * i, 2 * j)] = u.re;
                s[(2 * i, 2 * j + 1)] = -u.im;
                s[(2 * i + 1, 2 * j)] = u.im;
                s[(2 * i + 1, 2 * j + 1)] = u.re;
            }
        }
        s
    }
}

/// Full symplectic transform on `u.dim()` modes for a passive mode unitary.
pub fn symplectic_from_unitary(u: &ComplexModeUnitary) -> SymplecticTransform {
    let dim = 2 * u.dim();
    SymplecticTransform::from_parts_unchecked(u.to_symplectic_block(), DVector::zeros(dim))
}
