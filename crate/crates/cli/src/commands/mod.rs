pub mod adequacy;
pub mod pipeline;
pub mod triple;
pub mod witness;
