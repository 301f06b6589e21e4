//! Experiment harness: signal recipes, file ingestion, configuration,
//! artifact export and command orchestration.

pub mod config;
pub mod export;
pub mod recipe;
pub mod run;
pub mod signals;
pub mod wav;

pub use config::{Branch, RunConfig};
pub use recipe::{load_signal, SignalKind, SignalRecipe};
pub use run::{run, Artifact, Command, GenFormat};
