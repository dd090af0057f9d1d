//! Command-line front end for `hwkit-core`: argument grammar, input files, JSON
//! result envelopes, a content-addressed result cache and the verification battery.

pub mod cache;
pub mod cli;
pub mod commands;
pub mod envelope;
pub mod error;
pub mod input;
pub mod suite;

pub use cli::run;
pub use envelope::ResultEnvelope;
pub use error::{Failure, Status};
