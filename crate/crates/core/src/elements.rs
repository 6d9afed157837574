//! Optical elements as symplectic maps.
//!
//! Mode indices are 0-based. A beam splitter `(k, l, θ)` acts on the
//! annihilation operators as
//!
//! ```text
//! c_k' = sin θ · c_k + cos θ · c_l
//! c_l' = cos θ · c_k − sin θ · c_l
//! ```
//!
//! so `θ = asin(1/√2)` is the balanced 50:50 splitter and `θ → 0` is a
//! mirror that exchanges the two modes.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::symplectic::{ComplexModeUnitary, LocalTransform, SymplecticTransform};

/// Phase-free beam splitter between modes `k` and `l`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamSplitterSpec {
    pub k: usize,
    pub l: usize,
    pub theta: f64,
}

impl BeamSplitterSpec {
    pub fn new(k: usize, l: usize, theta: f64) -> Result<Self> {
        let spec = Self { k, l, theta };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == self.l {
            return Err(invalid(format!(
                "beam splitter needs two distinct modes, got {} twice",
                self.k
            )));
        }
        if !self.theta.is_finite() {
            return Err(invalid("beam splitter angle must be finite"));
        }
        Ok(())
    }

    /// The 2x2 mode matrix `[[sin θ, cos θ], [cos θ, −sin θ]]`.
    pub fn mode_matrix(&self) -> DMatrix<f64> {
        let (s, c) = self.theta.sin_cos();
        DMatrix::from_row_slice(2, 2, &[s, c, c, -s])
    }

    pub fn local(&self) -> Result<LocalTransform> {
        self.validate()?;
        LocalTransform::from_real_mode_matrix(vec![self.k, self.l], &self.mode_matrix())
    }
}

/// Ideal phase-insensitive amplifier of power gain `gain` with ancilla mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplifierSpec {
    pub signal: usize,
    pub ancilla: usize,
    pub gain: f64,
}

impl AmplifierSpec {
    pub fn new(signal: usize, ancilla: usize, gain: f64) -> Result<Self> {
        let spec = Self {
            signal,
            ancilla,
            gain,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.signal == self.ancilla {
            return Err(invalid(format!(
                "amplifier signal and ancilla must differ, got {} twice",
                self.signal
            )));
        }
        if !(self.gain.is_finite() && self.gain >= 1.0) {
            return Err(invalid(format!(
                "amplifier gain must be finite and >= 1, got {}",
                self.gain
            )));
        }
        Ok(())
    }

    /// Quadrature form on `(signal, ancilla)`:
    ///
    /// ```text
    /// x_s' =  √G x_s + √(G−1) x_z     p_s' =  √G p_s − √(G−1) p_z
    /// x_z' = √(G−1) x_s + √G x_z      p_z' = −√(G−1) p_s + √G p_z
    /// ```
    pub fn block_matrix(&self) -> DMatrix<f64> {
        let g = self.gain.sqrt();
        let h = (self.gain - 1.0).sqrt();
        DMatrix::from_row_slice(
            4,
            4,
            &[
                g, 0.0, h, 0.0, //
                0.0, g, 0.0, -h, //
                h, 0.0, g, 0.0, //
                0.0, -h, 0.0, g,
            ],
        )
    }

    pub fn local(&self) -> Result<LocalTransform> {
        self.validate()?;
        LocalTransform::new(vec![self.signal, self.ancilla], self.block_matrix())
    }
}

pub fn beam_splitter(n_modes: usize, spec: BeamSplitterSpec) -> Result<SymplecticTransform> {
    spec.local()?.embed(n_modes)
}

pub fn amplifier(n_modes: usize, spec: AmplifierSpec) -> Result<SymplecticTransform> {
    spec.local()?.embed(n_modes)
}

/// Rotation `a → e^{iφ} a` of one mode. Not used by the cloning circuits.
pub fn phase_shift_local(mode: usize, phi: f64) -> Result<LocalTransform> {
    if !phi.is_finite() {
        return Err(invalid("phase must be finite"));
    }
    let (s, c) = phi.sin_cos();
    LocalTransform::new(vec![mode], DMatrix::from_row_slice(2, 2, &[c, -s, s, c]))
}

pub fn phase_shift(n_modes: usize, mode: usize, phi: f64) -> Result<SymplecticTransform> {
    phase_shift_local(mode, phi)?.embed(n_modes)
}

/// Beam splitters of the M-splitter on `modes`, in application order.
///
/// The `j`-th splitter couples `modes[j]` and `modes[j + 1]` at angle
/// `asin(1/√(M − j))`; a unit amplitude entering `modes[0]` leaves every
/// port with amplitude `1/√M`.
pub fn m_splitter_specs(modes: &[usize]) -> Vec<BeamSplitterSpec> {
    let m = modes.len();
    (0..m.saturating_sub(1))
        .map(|j| BeamSplitterSpec {
            k: modes[j],
            l: modes[j + 1],
            theta: (1.0 / ((m - j) as f64).sqrt()).asin(),
        })
        .collect()
}

/// Inverse N-splitter on `modes`: every splitter is its own inverse, so this
/// is the M-splitter sequence in reverse.
pub fn inverse_splitter_specs(modes: &[usize]) -> Vec<BeamSplitterSpec> {
    let mut specs = m_splitter_specs(modes);
    specs.reverse();
    specs
}

/// Real `M x M` mode matrix of the M-splitter.
pub fn m_splitter_mode_matrix(m: usize) -> DMatrix<f64> {
    let mut u = DMatrix::identity(m, m);
    for spec in m_splitter_specs(&(0..m).collect::<Vec<_>>()) {
        let b = spec.mode_matrix();
        let rows = u.select_rows([spec.k, spec.l].iter());
        let updated = b * rows;
        u.row_mut(spec.k).copy_from(&updated.row(0));
        u.row_mut(spec.l).copy_from(&updated.row(1));
    }
    u
}

fn splitter_transform(m: usize, specs: Vec<BeamSplitterSpec>) -> Result<SymplecticTransform> {
    if m == 0 {
        return Err(invalid("splitter needs at least one mode"));
    }
    let locals = specs
        .iter()
        .map(BeamSplitterSpec::local)
        .collect::<Result<Vec<_>>>()?;
    SymplecticTransform::from_local_sequence(m, &locals)
}

/// M-splitter on modes `0..m`.
pub fn m_splitter(m: usize) -> Result<SymplecticTransform> {
    splitter_transform(m, m_splitter_specs(&(0..m).collect::<Vec<_>>()))
}

/// Inverse N-splitter on modes `0..n`; concentrates `n` equal amplitudes
/// into mode 0.
pub fn inverse_n_splitter(n: usize) -> Result<SymplecticTransform> {
    splitter_transform(n, inverse_splitter_specs(&(0..n).collect::<Vec<_>>()))
}

/// Discrete Fourier transform `F_kl = exp(2πi·kl/m)/√m`.
pub fn dft(m: usize) -> Result<ComplexModeUnitary> {
    if m == 0 {
        return Err(invalid("DFT needs at least one mode"));
    }
    let norm = 1.0 / (m as f64).sqrt();
    let matrix = DMatrix::from_fn(m, m, |k, l| {
        // reduce kl mod m so large products keep full phase precision
        let phase = 2.0 * std::f64::consts::PI * ((k * l) % m) as f64 / m as f64;
        Complex64::from_polar(norm, phase)
    });
    ComplexModeUnitary::new(matrix)
}

/// DFT acting on the listed modes, as a local block.
pub fn dft_local(modes: &[usize]) -> Result<LocalTransform> {
    let u = dft(modes.len())?;
    LocalTransform::new(modes.to_vec(), u.to_symplectic_block())
}

/// Arbitrary passive unitary on the listed modes.
pub fn unitary_local(modes: &[usize], u: &ComplexModeUnitary) -> Result<LocalTransform> {
    if u.dim() != modes.len() {
        return Err(Error::DimensionMismatch {
            expected: modes.len(),
            found: u.dim(),
        });
    }
    LocalTransform::new(modes.to_vec(), u.to_symplectic_block())
}
