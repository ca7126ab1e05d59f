//! File formats, configuration, reports and the command-line driver around
//! [`ldsolve_core`].

pub mod bench;
pub mod cli;
pub mod clock;
pub mod config;
pub mod instance_io;
pub mod report;

pub use ldsolve_core as core;
