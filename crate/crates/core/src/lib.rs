//! Atom-light cat-state metrology for optical displacement sensing.
//!
//! The `analytic` module evaluates closed-form sensitivities and quantum
//! Fisher informations in the ideal, cavity-decay, spontaneous-emission and
//! detection-noise regimes. The `simulator` module propagates the joint
//! spin-cavity state exactly for small systems and serves as an oracle.

// `!(x > 0.0)` style guards deliberately reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod kernels;
pub mod linalg;
pub mod moments;
pub mod optimize;
pub mod params;
pub mod simulator;
pub mod spin;

pub use error::{Error, Result};
pub use moments::{auto_phi, metrological_gain, sensitivity_from_moments, GainCurve, MomentSet};
pub use params::{FreqConvention, MeasurementAngle, ProtocolConfig, ProtocolVariant, SystemParams};
pub use spin::{coherent_spin_state, spin_operators, SpinAxis, SpinDensityMatrix};
