//! Fixed-point tools for finite intuitionistic fuzzy metric spaces.
//!
//! - [`algebra`]: t-norms, t-conorms and law checks.
//! - [`space`]: finite instances, the IFM conditions, balls.
//! - [`analysis`]: convergence diagnostics and continuity moduli.
//! - [`maps`]: self-maps, contraction certificates, brute-force oracles.
//! - [`solvers`]: Picard, ball, power-map and chain procedures.

pub mod algebra;
pub mod analysis;
pub mod document;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod maps;
pub mod solvers;
pub mod space;

pub use algebra::{TConorm, TNorm, UnitOperation};
pub use error::{Error, Result};
pub use maps::{Certification, ContractionCertificate, ContractionConstant, SelfMap};
pub use solvers::{SolveReport, SolverConfig};
pub use space::{AxiomReport, Ball, FiniteInstance, PairProfile, PointId};
