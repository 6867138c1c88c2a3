//! Command-line front end: JSON documents, command runners and emitters.

pub mod doc;
pub mod emit;
pub mod run;
