pub mod bethe;
pub mod error;
pub mod gaudin;
pub mod miura;
pub mod operforms;
pub mod par;
pub mod ratfun;
pub mod repro;
pub mod rootdata;

pub use error::{Error, Result};
pub use par::Execution;
