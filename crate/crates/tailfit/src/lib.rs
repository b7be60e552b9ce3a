//! File formats, parallel bootstrap and the command line for
//! [`tailfit_core`].

pub mod cli;
pub mod formats;
pub mod parallel;
pub mod report;

pub use tailfit_core as core;
