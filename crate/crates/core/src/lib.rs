//! Thermodynamics of small quantum systems carried along a laboratory
//! worldline in curved spacetime.
//!
//! * [`frame`] evaluates the second-order Fermi-normal metric, redshift and
//!   time-dilation factor from acceleration and Riemann components.
//! * [`spacetimes`] builds frame data for flat space, uniform gravity and
//!   spatially flat FRW universes (de Sitter in particular).
//! * [`quantum`] holds dense operators on truncated Hilbert spaces, thermal
//!   states, the time-ordered propagator and first-order transition theory.
//! * [`tpm`] implements the two-point-measurement work statistics and the
//!   Crooks/Jarzynski bookkeeping built on top of them.

// `!(x > 0.0)` also rejects NaN; index loops mirror tensor notation
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::excessive_precision)]

pub mod error;
pub mod frame;
pub mod quadrature;
pub mod quantum;
pub mod spacetimes;
pub mod tpm;

pub use error::{Error, Result};
pub use frame::{FrameData, FramePoint, FrameSample, MetricComponents, Validity};
pub use quantum::{EnergyBasis, HermitianOperator, ThermalState, UnitaryOperator};
pub use spacetimes::{FrwFermiMap, ScaleFactor};
pub use tpm::{ProtocolReport, WorkDistribution};

/// Crate version, recorded in run metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
