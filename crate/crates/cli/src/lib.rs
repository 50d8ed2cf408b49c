//! Pipeline stages, run configuration and file formats behind the `cocite`
//! command.

pub mod config;
pub mod io;
pub mod stages;

pub use config::RunConfig;
