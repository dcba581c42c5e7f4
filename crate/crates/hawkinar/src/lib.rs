//! File formats, configuration, parallel replicate drivers, two-sample tests
//! and the command line for [`hawkinar_core`].

pub mod cli;
pub mod config;
pub mod error;
pub mod hypothesis;
pub mod io;
pub mod parallel;

pub use error::AppError;
pub use hawkinar_core;
