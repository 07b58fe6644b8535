//! Scenario orchestration on top of [`curvtherm`]: JSON configuration, the
//! Newtonian, de Sitter and custom-table pipelines, flat-file output, an
//! empirical work sampler and the verification suite behind `curvtherm verify`.

// `!(x > 0.0)` also rejects NaN; index loops mirror tensor notation
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod config;
pub mod error;
pub mod output;
pub mod runners;
pub mod sampling;
pub mod tables;
pub mod verify;

pub use config::ScenarioConfig;
pub use error::{ScenarioError, ScenarioResult};
pub use runners::{run, run_custom, run_desitter, run_newtonian, RunArtifacts};
