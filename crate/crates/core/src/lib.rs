//! Gaussian-state simulation of optimal N→M coherent-state cloners built from
//! beam splitters and a phase-insensitive linear amplifier.
//!
//! States are kept as first and second quadrature moments with `a = (x + ip)/√2`
//! and vacuum variance 1/2. Circuits are ordered lists of elements acting on
//! 0-based mode indices; every element is a symplectic map, so propagation is
//! exact.
//!
//! ```
//! use cvclone::{build_cloner, report, Variant};
//!
//! let cloner = build_cloner(2, 3, Variant::MSplitter).unwrap();
//! let r = report(&cloner, 1.0, -0.5).unwrap();
//! assert!((r.clones[0].fidelity - 6.0 / 7.0).abs() < 1e-12);
//! assert!(r.saturated);
//! ```

pub mod circuit;
pub mod cli;
pub mod cloner;
pub mod elements;
pub mod error;
pub mod fidelity;
pub mod report;
pub mod state;
pub mod symplectic;

pub use circuit::{Circuit, CircuitElement};
pub use cloner::{
    build_cloner, build_cloner_dft, build_cloner_percopy, build_duplicator, ClonerCircuit,
    ClonerLayout, Device, Preparation, Variant,
};
pub use elements::{AmplifierSpec, BeamSplitterSpec};
pub use error::{Error, Result};
pub use fidelity::{fidelity_vs_coherent, fidelity_with_pure, optimal_added_variance, optimal_fidelity};
pub use report::{anticlone_report, report, report_with, AnticloneReport, CloneReport};
pub use state::{GaussianState, VACUUM_VARIANCE};
pub use symplectic::{symplectic_from_unitary, ComplexModeUnitary, SymplecticTransform};
