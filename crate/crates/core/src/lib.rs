//! Ontological models of quantum mechanics, checked exactly where possible.
//!
//! - [`qstate`]: operators, density matrices, POVMs, rays, Bloch vectors.
//! - [`ontology`]: ontic spaces, epistemic measures, response functions, and
//!   the adequacy / distinguishability checks of an ontological model.
//! - [`zoo`]: the Kochen–Specker, Spekkens, and ψ-ontic qubit models.
//! - [`lp`]: exact rational feasibility with Farkas certificates.
//! - [`theorem`]: support sets, moment systems, and the staged audit showing
//!   that the density-matrix map cannot be injective.

pub mod error;
pub mod field;
pub mod lp;
pub mod ontology;
pub mod qstate;
pub mod theorem;
pub mod zoo;

pub use error::{Error, Result};
pub use field::{Quantity, QSqrt3, Real};
pub use lp::{Certificate, LpOutcome, RationalSystem};
pub use ontology::{EpistemicMeasure, Experiment, OnticSpace, OntologicalModel, QuadratureOrder};
pub use qstate::{DensityMatrix, Effect, Operator, Povm, Ray};
