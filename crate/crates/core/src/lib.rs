//! Two coupled qubits driven by correlated stochastic environments.
//!
//! The crate covers the whole pipeline: dense operator algebra for small
//! Hilbert spaces, correlated Ornstein–Uhlenbeck noise statistics, the
//! Lindblad master equation with symmetric/antisymmetric collapse channels,
//! phase-locking analysis of observable trajectories, and correlation
//! measures (mutual information, orthogonal-measurement discord and the
//! diagonal-truncation "degree of quantumness").

pub mod algebra;
pub mod csvfmt;
pub mod error;
pub mod lindblad;
pub mod noise;
pub mod optim;
pub mod qinfo;
pub mod state;
pub mod sync;

pub use algebra::{CMat, Keep, Pauli, SubsystemSplit, C64};
pub use error::{Error, Result};
pub use lindblad::{Channel, EvolutionResult, Liouvillian, ModelParams, Propagator};
pub use qinfo::{DiscordResult, EntropyUnit, MeasurementBasis};
pub use state::DensityMatrix;
pub use sync::{AnalyticSignal, SyncMetrics, TimeSeries};
