//! Multicolor box-ball system toolkit.
//!
//! The crate covers the deterministic dynamics (ball moves, carriers and the
//! combinatorial R), the conserved Young diagrams extracted from the energy
//! matrix, and the numerical side: Schur-function equilibrium values, tilted
//! Markov kernels with their rate functions, highest-state probabilities,
//! closed-form thermodynamic quantities and Monte Carlo experiments.
//!
//! Data-parallel loops go through [`exec::Exec`]; with the default `parallel`
//! feature they run on rayon, otherwise everything runs sequentially.

pub mod bbs;
pub mod carrier;
pub mod equilibrium;
pub mod error;
pub mod exec;
pub mod fmt;
pub mod highest;
pub mod ldp;
pub mod mc;
pub mod partition;
pub mod scalar;
pub mod svg;
pub mod tableau;
pub mod tba;

pub use bbs::{Configuration, Soliton};
pub use carrier::{CarrierPath, EnergyMatrix, VacancyTable, YoungTuple};
pub use equilibrium::DensityVector;
pub use error::{Error, Result};
pub use exec::Exec;
pub use partition::Partition;
pub use tableau::{Letter, ShapedTableau, Tableau};
