//! Command line, JSON formats, the built-in corpus and the verification
//! suite on top of `twistzeta-core`.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod json;
pub mod pipeline;
pub mod verify;
