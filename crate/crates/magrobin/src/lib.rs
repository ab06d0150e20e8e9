//! IO, parameter sweeps, asymptotic fits and the command-line front end built on
//! `magrobin-core`.

pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod io;

pub use error::{AppError, AppResult};
