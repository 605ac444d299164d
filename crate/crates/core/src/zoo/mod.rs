//! Concrete ontological models.

mod ks;
mod psi_ontic;
mod spekkens;

pub use ks::{
    bloch_overlap, ks_model, ks_model_with, ks_noninjectivity_witness, ks_prepare, pauli_rays,
    ray_from_direction, KsPreparer, KsResponse, KsWitness,
};
pub use psi_ontic::{psi_ontic_4, psi_ontic_build, BornResponse};
pub use spekkens::{spekkens_audit, spekkens_model, SpekkensAudit, SpekkensResponse};
