pub mod hf;
pub mod syntax;
pub mod semantics;
pub mod truth;
pub mod proofs;
pub mod bridge;
pub mod schemes;
pub mod artifact;
pub mod report;
pub mod cli;
