//! Ontic spaces, epistemic measures, response functions, and the
//! ontological-model checks built on them.

pub mod definition;
mod measure;
mod model;
mod quadrature;
mod space;

pub use definition::{load_model, parse_model, LoadedModel};
pub use measure::{mix, total_variation, EpistemicMeasure};
pub use model::{
    describe_ray, AdequacyReport, ChainLink, ConvexityReport, Coverage, Distinguishability,
    Experiment, Generator, OntologicalModel, OutcomeComparison, OutcomeDistribution, PauliAxis,
    RayPreparer, ResponseFunction, ResponseTable,
};
pub use quadrature::{gauss_legendre, sphere_mesh, QuadratureOrder};
pub use space::{NodeSet, OnticSpace, SpaceKind};
