//! Support sets, measure identities, indicator moment systems, and the staged
//! audit of the non-injectivity argument.

mod moments;
mod pipeline;
mod support;
mod triple;

pub use moments::{
    atom_name, build_moment_system, format_identity, solve_feasibility, MomentSystem,
    MAX_INDICATORS,
};
pub use pipeline::{
    abstract_pipeline, find_double_preimage, format_operator, mixture_grid, proof_pipeline_audit,
    DoublePreimage, Mixture, PipelineOptions, PipelineReport, Stage, StageStatus,
};
pub use support::{
    overlap_identity_check, support_set, test_sets, verify_support_identities, IdentityCheck,
    IdentityRecord, OverlapReport, SupportReport, SupportSet, TestSets,
};
pub use triple::{
    moment_report, trine_rays, triple_test, MomentReport, TripleReport, CROSS_CHECK_MAX_INDICATORS,
};
