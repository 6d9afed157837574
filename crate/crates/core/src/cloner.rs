//! Optimal symmetric N→M cloning circuits for coherent states.
//!
//! Three constructions are provided, all built from one or more ideal
//! phase-insensitive amplifiers of gain `M/N` plus passive optics:
//!
//! * [`Variant::MSplitter`]: inverse N-splitter concentrates the inputs into
//!   mode 0, one amplifier, then an M-splitter distributes over modes `0..M`.
//!   Uses exactly `N + M − 2` beam splitters.
//! * [`Variant::Dft`]: same, with DFT multiports for concentration and
//!   distribution.
//! * [`Variant::PerCopy`]: every input is amplified on its own, split `M`
//!   ways, and the `N` copies of each output port are recombined by an
//!   inverse N-splitter, leaving `M(N−1)` waste modes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, CircuitElement};
use crate::elements::{inverse_splitter_specs, m_splitter_specs, AmplifierSpec};
use crate::error::{invalid, Error, Result};
use crate::state::GaussianState;
use crate::symplectic::SymplecticTransform;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Dft,
    #[serde(rename = "msplitter")]
    MSplitter,
    #[serde(rename = "percopy")]
    PerCopy,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Dft, Variant::MSplitter, Variant::PerCopy];

    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::Dft => "dft",
            Variant::MSplitter => "msplitter",
            Variant::PerCopy => "percopy",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dft" => Ok(Variant::Dft),
            "msplitter" => Ok(Variant::MSplitter),
            "percopy" => Ok(Variant::PerCopy),
            other => Err(invalid(format!(
                "unknown variant {other:?} (expected dft, msplitter or percopy)"
            ))),
        }
    }
}

/// Device used for amplitude concentration and distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Device {
    Dft,
    #[default]
    MSplitter,
}

/// What a mode holds before the circuit runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputRole {
    Input,
    Blank,
    Ancilla,
}

/// What a mode holds after the circuit runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputRole {
    Clone,
    Anticlone,
    Waste,
    Unused,
}

/// Mode roles of a built cloner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClonerLayout {
    pub n: usize,
    pub m: usize,
    pub variant: Variant,
    pub inputs: Vec<usize>,
    pub blanks: Vec<usize>,
    pub ancillas: Vec<usize>,
    pub clones: Vec<usize>,
    pub anticlones: Vec<usize>,
    pub waste: Vec<usize>,
}

impl ClonerLayout {
    pub fn n_modes(&self) -> usize {
        self.inputs.len() + self.blanks.len() + self.ancillas.len()
    }

    pub fn input_role(&self, mode: usize) -> Option<InputRole> {
        if self.inputs.contains(&mode) {
            Some(InputRole::Input)
        } else if self.blanks.contains(&mode) {
            Some(InputRole::Blank)
        } else if self.ancillas.contains(&mode) {
            Some(InputRole::Ancilla)
        } else {
            None
        }
    }

    pub fn output_role(&self, mode: usize) -> Option<OutputRole> {
        if mode >= self.n_modes() {
            None
        } else if self.clones.contains(&mode) {
            Some(OutputRole::Clone)
        } else if self.anticlones.contains(&mode) {
            Some(OutputRole::Anticlone)
        } else if self.waste.contains(&mode) {
            Some(OutputRole::Waste)
        } else {
            Some(OutputRole::Unused)
        }
    }

    /// Role sets are disjoint, cover every mode once, and have the sizes
    /// required by the variant.
    pub fn validate(&self) -> Result<()> {
        let n_modes = self.n_modes();
        let mut seen = vec![false; n_modes];
        for &mode in self.inputs.iter().chain(&self.blanks).chain(&self.ancillas) {
            if mode >= n_modes || std::mem::replace(&mut seen[mode], true) {
                return Err(invalid(format!("mode {mode} has an invalid input role")));
            }
        }
        let mut seen = vec![false; n_modes];
        for &mode in self.clones.iter().chain(&self.anticlones).chain(&self.waste) {
            if mode >= n_modes || std::mem::replace(&mut seen[mode], true) {
                return Err(invalid(format!("mode {mode} has an invalid output role")));
            }
        }
        let expected_waste = match self.variant {
            Variant::PerCopy => self.m * (self.n - 1),
            _ => 0,
        };
        if self.inputs.len() != self.n
            || self.clones.len() != self.m
            || self.waste.len() != expected_waste
        {
            return Err(invalid("layout role counts do not match N, M and variant"));
        }
        Ok(())
    }
}

/// A cloning circuit together with its mode roles. Serializes as
/// `{"n_modes", "elements", "roles"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClonerCircuit {
    #[serde(flatten)]
    pub circuit: Circuit,
    pub roles: ClonerLayout,
}

impl ClonerCircuit {
    pub fn layout(&self) -> &ClonerLayout {
        &self.roles
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| invalid(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: ClonerCircuit = serde_json::from_str(text).map_err(|e| invalid(e.to_string()))?;
        c.circuit.validate()?;
        c.roles.validate()?;
        if c.roles.n_modes() != c.circuit.n_modes {
            return Err(Error::DimensionMismatch {
                expected: c.circuit.n_modes,
                found: c.roles.n_modes(),
            });
        }
        Ok(c)
    }

    /// Prepares the input state and propagates it through the circuit.
    pub fn run(&self, prep: &Preparation) -> Result<GaussianState> {
        let input = prep.input_state(&self.roles)?;
        self.circuit.apply(&input)
    }

    pub fn total_transform(&self) -> Result<SymplecticTransform> {
        self.circuit.total_transform()
    }
}

/// Input preparation: `|α⟩` on every input mode, vacuum elsewhere, with
/// optional squeezing. `input_squeeze` squeezes the inputs (a displaced
/// squeezed state) and `ancilla_squeeze` every blank and ancilla mode, both
/// along the x quadrature for positive values.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Preparation {
    pub alpha_re: f64,
    pub alpha_im: f64,
    pub input_squeeze: f64,
    pub ancilla_squeeze: f64,
}

impl Preparation {
    pub fn coherent(alpha_re: f64, alpha_im: f64) -> Self {
        Self {
            alpha_re,
            alpha_im,
            ..Self::default()
        }
    }

    /// Inputs and all auxiliary modes squeezed alike.
    pub fn matched_squeezing(alpha_re: f64, alpha_im: f64, r: f64) -> Self {
        Self {
            alpha_re,
            alpha_im,
            input_squeeze: r,
            ancilla_squeeze: r,
        }
    }

    /// The single-mode state each input copy is prepared in.
    pub fn reference(&self) -> GaussianState {
        GaussianState::squeezed_coherent(self.alpha_re, self.alpha_im, self.input_squeeze)
    }

    pub fn input_state(&self, layout: &ClonerLayout) -> Result<GaussianState> {
        let finite = [
            self.alpha_re,
            self.alpha_im,
            self.input_squeeze,
            self.ancilla_squeeze,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(invalid("preparation parameters must be finite"));
        }
        let input = self.reference();
        let aux = GaussianState::squeezed_vacuum(self.ancilla_squeeze);
        let modes = (0..layout.n_modes())
            .map(|m| match layout.input_role(m) {
                Some(InputRole::Input) => Ok(&input),
                Some(_) => Ok(&aux),
                None => Err(invalid(format!("mode {m} has no input role"))),
            })
            .collect::<Result<Vec<_>>>()?;
        GaussianState::product(modes)
    }
}

fn check_counts(n: usize, m: usize) -> Result<()> {
    if n == 0 {
        return Err(invalid("number of inputs N must be at least 1"));
    }
    if m < n {
        return Err(invalid(format!(
            "number of clones M = {m} is smaller than number of inputs N = {n}"
        )));
    }
    Ok(())
}

fn push_all(circuit: &mut Circuit, elements: impl IntoIterator<Item = CircuitElement>) -> Result<()> {
    elements.into_iter().try_for_each(|e| circuit.push(e))
}

fn splitters(specs: Vec<crate::elements::BeamSplitterSpec>) -> impl Iterator<Item = CircuitElement> {
    specs.into_iter().map(CircuitElement::BeamSplitter)
}

/// The 1→2 cloner: gain-2 amplifier on (0, ancilla 2), then a 50:50 beam
/// splitter on (0, 1).
pub fn build_duplicator() -> ClonerCircuit {
    build_cloner_dft(1, 2, Device::MSplitter).expect("1→2 is a valid cloner")
}

/// Concentrate / amplify / distribute cloner on `M + 1` modes.
///
/// Modes `0..N` hold the inputs, `N..M` the blanks and mode `M` the amplifier
/// ancilla. The concentrated amplitude ends up in mode 0 for either device.
pub fn build_cloner_dft(n: usize, m: usize, device: Device) -> Result<ClonerCircuit> {
    check_counts(n, m)?;
    let ancilla = m;
    let mut circuit = Circuit::new(m + 1);
    let inputs: Vec<usize> = (0..n).collect();
    let outputs: Vec<usize> = (0..m).collect();

    match device {
        Device::MSplitter => push_all(&mut circuit, splitters(inverse_splitter_specs(&inputs)))?,
        Device::Dft if n > 1 => circuit.push(CircuitElement::Dft {
            modes: inputs.clone(),
        })?,
        Device::Dft => {}
    }
    circuit.push(CircuitElement::Amplifier(AmplifierSpec::new(
        0,
        ancilla,
        m as f64 / n as f64,
    )?))?;
    match device {
        Device::MSplitter => push_all(&mut circuit, splitters(m_splitter_specs(&outputs)))?,
        Device::Dft if m > 1 => circuit.push(CircuitElement::Dft {
            modes: outputs.clone(),
        })?,
        Device::Dft => {}
    }

    let variant = match device {
        Device::Dft => Variant::Dft,
        Device::MSplitter => Variant::MSplitter,
    };
    let roles = ClonerLayout {
        n,
        m,
        variant,
        inputs,
        blanks: (n..m).collect(),
        ancillas: vec![ancilla],
        clones: outputs,
        anticlones: vec![ancilla],
        waste: Vec::new(),
    };
    Ok(ClonerCircuit { circuit, roles })
}

/// Mode index of port `l` of copy `k` in the per-copy layout.
pub fn percopy_mode(m: usize, k: usize, l: usize) -> usize {
    k * m + l
}

/// Per-copy cloner on `N·M + N` modes.
///
/// Copy `k` occupies modes `k·M .. (k+1)·M` (input at `k·M`, blanks after
/// it) and its amplifier ancilla is mode `N·M + k`. After the last stage the
/// clones sit in modes `0..M` and the waste in modes `M..N·M`.
///
/// Elements are ordered: `N` amplifiers, then `N` M-splitters, then `M`
/// inverse N-splitters.
pub fn build_cloner_percopy(n: usize, m: usize) -> Result<ClonerCircuit> {
    check_counts(n, m)?;
    let n_modes = n * m + n;
    let gain = m as f64 / n as f64;
    let mut circuit = Circuit::new(n_modes);

    for k in 0..n {
        circuit.push(CircuitElement::Amplifier(AmplifierSpec::new(
            percopy_mode(m, k, 0),
            n * m + k,
            gain,
        )?))?;
    }
    for k in 0..n {
        let ports: Vec<usize> = (0..m).map(|l| percopy_mode(m, k, l)).collect();
        push_all(&mut circuit, splitters(m_splitter_specs(&ports)))?;
    }
    for l in 0..m {
        let copies: Vec<usize> = (0..n).map(|k| percopy_mode(m, k, l)).collect();
        push_all(&mut circuit, splitters(inverse_splitter_specs(&copies)))?;
    }

    let roles = ClonerLayout {
        n,
        m,
        variant: Variant::PerCopy,
        inputs: (0..n).map(|k| percopy_mode(m, k, 0)).collect(),
        blanks: (0..n)
            .flat_map(|k| (1..m).map(move |l| percopy_mode(m, k, l)))
            .collect(),
        ancillas: (n * m..n_modes).collect(),
        clones: (0..m).collect(),
        anticlones: (n * m..n_modes).collect(),
        waste: (m..n * m).collect(),
    };
    Ok(ClonerCircuit { circuit, roles })
}

pub fn build_cloner(n: usize, m: usize, variant: Variant) -> Result<ClonerCircuit> {
    match variant {
        Variant::Dft => build_cloner_dft(n, m, Device::Dft),
        Variant::MSplitter => build_cloner_dft(n, m, Device::MSplitter),
        Variant::PerCopy => build_cloner_percopy(n, m),
    }
}

/// Variance that the `sources` input modes contribute to quadrature
/// `cos φ·x + sin φ·p` of output mode `out_mode` under `t`, for the input
/// state `input` (cross-correlations with other modes are ignored).
pub fn variance_contribution(
    t: &SymplecticTransform,
    input: &GaussianState,
    out_mode: usize,
    phi: f64,
    sources: &[usize],
) -> Result<f64> {
    if t.n_modes() != input.n_modes() {
        return Err(Error::DimensionMismatch {
            expected: input.n_modes(),
            found: t.n_modes(),
        });
    }
    if out_mode >= t.n_modes() {
        return Err(Error::IndexOutOfRange {
            index: out_mode,
            n_modes: t.n_modes(),
        });
    }
    let sub = input.reduced(sources)?;
    let (c, s) = (phi.cos(), phi.sin());
    let s_mat = t.matrix();
    let row = nalgebra::DVector::from_iterator(
        2 * sources.len(),
        sources.iter().flat_map(|&j| {
            [2 * j, 2 * j + 1]
                .map(|col| c * s_mat[(2 * out_mode, col)] + s * s_mat[(2 * out_mode + 1, col)])
        }),
    );
    Ok(row.dot(&(sub.cov() * &row)))
}

/// Noise carried into port `(k, l)` by the blank modes of copy `k`, right
/// after the per-copy M-splitters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntermediateNoise {
    pub copy: usize,
    pub port: usize,
    pub mode: usize,
    pub var_x: f64,
    pub var_p: f64,
}

pub fn percopy_intermediate_noise(n: usize, m: usize) -> Result<Vec<IntermediateNoise>> {
    let cloner = build_cloner_percopy(n, m)?;
    // N amplifiers followed by N(M−1) splitters
    let stage = Circuit {
        n_modes: cloner.circuit.n_modes,
        elements: cloner.circuit.elements[..n * m].to_vec(),
    };
    let t = stage.total_transform()?;
    let input = Preparation::coherent(0.0, 0.0).input_state(&cloner.roles)?;
    let mut out = Vec::with_capacity(n * m);
    for k in 0..n {
        let blanks: Vec<usize> = (1..m).map(|l| percopy_mode(m, k, l)).collect();
        for l in 0..m {
            let mode = percopy_mode(m, k, l);
            let (var_x, var_p) = if blanks.is_empty() {
                (0.0, 0.0)
            } else {
                (
                    variance_contribution(&t, &input, mode, 0.0, &blanks)?,
                    variance_contribution(&t, &input, mode, std::f64::consts::FRAC_PI_2, &blanks)?,
                )
            };
            out.push(IntermediateNoise {
                copy: k,
                port: l,
                mode,
                var_x,
                var_p,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicator_structure() {
        let d = build_duplicator();
        assert_eq!(d.circuit.n_modes, 3);
        assert_eq!(d.roles.clones, vec![0, 1]);
        assert_eq!(d.roles.anticlones, vec![2]);
        assert_eq!(d.circuit.amplifier_count(), 1);
        assert_eq!(d.circuit.beam_splitter_count(), 1);
        match d.circuit.elements[0] {
            CircuitElement::Amplifier(a) => {
                assert_eq!((a.signal, a.ancilla, a.gain), (0, 2, 2.0));
            }
            ref other => panic!("expected amplifier first, got {other:?}"),
        }
    }

    #[test]
    fn msplitter_one_to_two_equals_duplicator() {
        assert_eq!(
            build_cloner_dft(1, 2, Device::MSplitter).unwrap(),
            build_duplicator()
        );
    }

    #[test]
    fn builders_reject_m_below_n() {
        for v in Variant::ALL {
            assert!(build_cloner(3, 2, v).is_err());
            assert!(build_cloner(0, 2, v).is_err());
        }
    }

    #[test]
    fn trivial_cloner_has_unit_gain() {
        let c = build_cloner_dft(4, 4, Device::MSplitter).unwrap();
        let gains: Vec<f64> = c
            .circuit
            .elements
            .iter()
            .filter_map(|e| match e {
                CircuitElement::Amplifier(a) => Some(a.gain),
                _ => None,
            })
            .collect();
        assert_eq!(gains, vec![1.0]);
    }

    #[test]
    fn percopy_layout_counts() {
        for (n, m) in [(1, 1), (1, 3), (2, 4), (3, 5)] {
            let c = build_cloner_percopy(n, m).unwrap();
            c.roles.validate().unwrap();
            assert_eq!(c.circuit.n_modes, n * m + n);
            assert_eq!(c.roles.waste.len(), m * (n - 1));
            assert_eq!(c.roles.anticlones.len(), n);
            assert_eq!(c.circuit.amplifier_count(), n);
            assert_eq!(c.circuit.beam_splitter_count(), n * (m - 1) + m * (n - 1));
        }
    }

    #[test]
    fn layout_roles() {
        let c = build_cloner_percopy(2, 3).unwrap();
        assert_eq!(c.roles.input_role(3), Some(InputRole::Input));
        assert_eq!(c.roles.input_role(4), Some(InputRole::Blank));
        assert_eq!(c.roles.input_role(7), Some(InputRole::Ancilla));
        assert_eq!(c.roles.input_role(8), None);
        assert_eq!(c.roles.output_role(2), Some(OutputRole::Clone));
        assert_eq!(c.roles.output_role(5), Some(OutputRole::Waste));
        assert_eq!(c.roles.output_role(6), Some(OutputRole::Anticlone));
    }

    #[test]
    fn layout_validate_catches_overlap() {
        let mut c = build_duplicator();
        c.roles.anticlones = vec![1];
        assert!(c.roles.validate().is_err());
    }

    #[test]
    fn variant_parse_roundtrip() {
        for v in Variant::ALL {
            assert_eq!(v.as_str().parse::<Variant>().unwrap(), v);
            assert_eq!(serde_json::to_string(&v).unwrap(), format!("\"{v}\""));
        }
        assert!("reck".parse::<Variant>().is_err());
    }

    #[test]
    fn intermediate_noise_two_to_four() {
        for noise in percopy_intermediate_noise(2, 4).unwrap() {
            assert!((noise.var_x - 3.0 / 8.0).abs() < 1e-12, "{noise:?}");
            assert!((noise.var_p - 3.0 / 8.0).abs() < 1e-12, "{noise:?}");
        }
    }

    #[test]
    fn preparation_rejects_non_finite() {
        let c = build_duplicator();
        assert!(c.run(&Preparation::coherent(f64::NAN, 0.0)).is_err());
    }
}
