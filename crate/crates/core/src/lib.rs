//! Explicit neighborly centrally symmetric polytopes built from Hadamard
//! matrices, with exact algebraic certificates and an exact LP oracle.

pub mod blocks;
pub mod certificate;
pub mod construction;
pub mod exact;
pub mod hadamard;
pub mod oracle;
pub mod sampling;

pub use construction::{build, parameters, Construction, ConstructionParams, SignedVertex};
pub use exact::{ExactMatrix, ExactScalar};
pub use hadamard::HadamardMatrix;
