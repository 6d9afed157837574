//! Ordered element lists acting on a fixed set of modes.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::elements::{self, AmplifierSpec, BeamSplitterSpec};
use crate::error::{invalid, Error, Result};
use crate::state::GaussianState;
use crate::symplectic::{check_distinct, ComplexModeUnitary, LocalTransform, SymplecticTransform};

/// One circuit element. Serialized with a `"type"` tag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum CircuitElement {
    #[serde(rename = "bs")]
    BeamSplitter(BeamSplitterSpec),
    #[serde(rename = "amp")]
    Amplifier(AmplifierSpec),
    /// Mode relabeling: output mode `j` carries input mode `map[j]`.
    #[serde(rename = "perm")]
    Permutation { map: Vec<usize> },
    #[serde(rename = "phase")]
    PhaseShift { mode: usize, phi: f64 },
    /// DFT on `modes`, with `modes[k]` playing the role of index `k`.
    #[serde(rename = "dft")]
    Dft { modes: Vec<usize> },
    /// General passive unitary, real and imaginary parts row-major.
    #[serde(rename = "unitary")]
    Unitary {
        modes: Vec<usize>,
        re: Vec<Vec<f64>>,
        im: Vec<Vec<f64>>,
    },
}

impl CircuitElement {
    pub fn is_beam_splitter(&self) -> bool {
        matches!(self, Self::BeamSplitter(_))
    }

    pub fn is_amplifier(&self) -> bool {
        matches!(self, Self::Amplifier(_))
    }

    /// Modes touched by this element.
    pub fn modes(&self) -> Vec<usize> {
        match self {
            Self::BeamSplitter(b) => vec![b.k, b.l],
            Self::Amplifier(a) => vec![a.signal, a.ancilla],
            Self::Permutation { map } => (0..map.len()).collect(),
            Self::PhaseShift { mode, .. } => vec![*mode],
            Self::Dft { modes } | Self::Unitary { modes, .. } => modes.clone(),
        }
    }

    /// The element as a mode-local symplectic block.
    pub fn local(&self) -> Result<LocalTransform> {
        match self {
            Self::BeamSplitter(b) => b.local(),
            Self::Amplifier(a) => a.local(),
            Self::Permutation { map } => {
                let n = map.len();
                check_distinct(map)?;
                if let Some(&bad) = map.iter().find(|&&m| m >= n) {
                    return Err(Error::IndexOutOfRange {
                        index: bad,
                        n_modes: n,
                    });
                }
                let p = DMatrix::from_fn(n, n, |j, i| if map[j] == i { 1.0 } else { 0.0 });
                LocalTransform::from_real_mode_matrix((0..n).collect(), &p)
            }
            Self::PhaseShift { mode, phi } => elements::phase_shift_local(*mode, *phi),
            Self::Dft { modes } => elements::dft_local(modes),
            Self::Unitary { modes, re, im } => {
                let k = modes.len();
                let shape_ok = re.len() == k
                    && im.len() == k
                    && re.iter().chain(im.iter()).all(|row| row.len() == k);
                if !shape_ok {
                    return Err(invalid(format!(
                        "unitary element on {k} modes needs {k}x{k} re/im parts"
                    )));
                }
                let u = DMatrix::from_fn(k, k, |i, j| Complex64::new(re[i][j], im[i][j]));
                elements::unitary_local(modes, &ComplexModeUnitary::new(u)?)
            }
        }
    }
}

/// A sequence of elements on `n_modes` modes, applied in order.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Circuit {
    pub n_modes: usize,
    pub elements: Vec<CircuitElement>,
}

impl Circuit {
    pub fn new(n_modes: usize) -> Self {
        Self {
            n_modes,
            elements: Vec::new(),
        }
    }

    /// Appends after checking the element against this circuit's modes.
    pub fn push(&mut self, element: CircuitElement) -> Result<()> {
        self.check_element(&element)?;
        self.elements.push(element);
        Ok(())
    }

    fn check_element(&self, element: &CircuitElement) -> Result<()> {
        if let CircuitElement::Permutation { map } = element {
            if map.len() != self.n_modes {
                return Err(Error::DimensionMismatch {
                    expected: self.n_modes,
                    found: map.len(),
                });
            }
        }
        element.local()?.check_range(self.n_modes)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_modes == 0 {
            return Err(invalid("circuit has no modes"));
        }
        self.elements.iter().try_for_each(|e| self.check_element(e))
    }

    pub fn beam_splitter_count(&self) -> usize {
        self.elements.iter().filter(|e| e.is_beam_splitter()).count()
    }

    pub fn amplifier_count(&self) -> usize {
        self.elements.iter().filter(|e| e.is_amplifier()).count()
    }

    pub fn locals(&self) -> Result<Vec<LocalTransform>> {
        self.elements.iter().map(CircuitElement::local).collect()
    }

    /// Composition of all elements.
    pub fn total_transform(&self) -> Result<SymplecticTransform> {
        self.validate()?;
        SymplecticTransform::from_local_sequence(self.n_modes, &self.locals()?)
    }

    /// Propagates `state` element by element.
    pub fn apply(&self, state: &GaussianState) -> Result<GaussianState> {
        if state.n_modes() != self.n_modes {
            return Err(Error::DimensionMismatch {
                expected: self.n_modes,
                found: state.n_modes(),
            });
        }
        self.validate()?;
        let mut out = state.clone();
        for local in self.locals()? {
            out.apply_local(&local)?;
        }
        Ok(out)
    }

    /// Applies only the first `count` elements.
    pub fn apply_prefix(&self, state: &GaussianState, count: usize) -> Result<GaussianState> {
        let prefix = Circuit {
            n_modes: self.n_modes,
            elements: self.elements[..count.min(self.elements.len())].to_vec(),
        };
        prefix.apply(state)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| invalid(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: Circuit = serde_json::from_str(text).map_err(|e| invalid(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_rejects_out_of_range() {
        let mut c = Circuit::new(2);
        let bad = CircuitElement::BeamSplitter(BeamSplitterSpec {
            k: 0,
            l: 2,
            theta: 0.1,
        });
        assert!(c.push(bad).is_err());
        assert!(c.elements.is_empty());
    }

    #[test]
    fn permutation_swaps_modes() {
        let mut c = Circuit::new(3);
        c.push(CircuitElement::Permutation { map: vec![2, 0, 1] })
            .unwrap();
        let input = GaussianState::product(&[
            GaussianState::coherent(1.0, 0.0),
            GaussianState::coherent(2.0, 0.0),
            GaussianState::coherent(3.0, 0.0),
        ])
        .unwrap();
        let out = c.apply(&input).unwrap();
        let amps: Vec<f64> = (0..3).map(|m| out.amplitude(m).unwrap().0).collect();
        for (got, want) in amps.iter().zip([3.0, 1.0, 2.0]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn permutation_must_cover_all_modes() {
        let mut c = Circuit::new(3);
        assert!(c.push(CircuitElement::Permutation { map: vec![1, 0] }).is_err());
        assert!(c
            .push(CircuitElement::Permutation { map: vec![0, 0, 1] })
            .is_err());
    }

    #[test]
    fn json_tags() {
        let mut c = Circuit::new(3);
        c.push(CircuitElement::Amplifier(AmplifierSpec {
            signal: 0,
            ancilla: 2,
            gain: 2.0,
        }))
        .unwrap();
        c.push(CircuitElement::BeamSplitter(BeamSplitterSpec {
            k: 0,
            l: 1,
            theta: 0.5,
        }))
        .unwrap();
        let v: serde_json::Value = serde_json::from_str(&c.to_json().unwrap()).unwrap();
        assert_eq!(v["n_modes"], 3);
        assert_eq!(v["elements"][0]["type"], "amp");
        assert_eq!(v["elements"][0]["signal"], 0);
        assert_eq!(v["elements"][0]["ancilla"], 2);
        assert_eq!(v["elements"][0]["gain"], 2.0);
        assert_eq!(v["elements"][1]["type"], "bs");
        assert_eq!(v["elements"][1]["theta"], 0.5);
        assert_eq!(Circuit::from_json(&c.to_json().unwrap()).unwrap(), c);
    }

    #[test]
    fn from_json_rejects_invalid_element() {
        let text = r#"{"n_modes": 2, "elements": [{"type": "amp", "signal": 0, "ancilla": 1, "gain": 0.5}]}"#;
        assert!(Circuit::from_json(text).is_err());
        let text = r#"{"n_modes": 2, "elements": [{"type": "teleporter"}]}"#;
        assert!(Circuit::from_json(text).is_err());
    }

    #[test]
    fn unitary_element_shape_checked() {
        let e = CircuitElement::Unitary {
            modes: vec![0, 1],
            re: vec![vec![1.0, 0.0]],
            im: vec![vec![0.0, 0.0]],
        };
        assert!(e.local().is_err());
    }

    #[test]
    fn local_application_matches_dense() {
        let mut c = Circuit::new(4);
        c.push(CircuitElement::Amplifier(AmplifierSpec {
            signal: 1,
            ancilla: 3,
            gain: 1.7,
        }))
        .unwrap();
        c.push(CircuitElement::Dft {
            modes: vec![2, 0, 1],
        })
        .unwrap();
        c.push(CircuitElement::PhaseShift { mode: 2, phi: 0.4 })
            .unwrap();
        let input = GaussianState::product(&[
            GaussianState::coherent(0.5, 1.0),
            GaussianState::squeezed_coherent(-1.0, 0.2, 0.3),
            GaussianState::vacuum(1).unwrap(),
            GaussianState::squeezed_vacuum(-0.6),
        ])
        .unwrap();
        let local = c.apply(&input).unwrap();
        let dense = input.apply(&c.total_transform().unwrap()).unwrap();
        assert!((local.mean() - dense.mean()).amax() < 1e-13);
        assert!((local.cov() - dense.cov()).amax() < 1e-13);
    }
}
