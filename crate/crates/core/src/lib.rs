//! Simulation and moment engine for INAR(∞) integer-valued time series and
//! Hawkes point processes.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure function
//! of its inputs and an explicit random stream; file formats, parallel
//! replicate drivers and the command line live in the `hawkinar` crate.
//!
//! Module map:
//! - [`kernel`], [`params`], [`series`], [`rng`]: shared parameter objects,
//!   kernel evaluation and the Δ-grid discretization.
//! - [`inar`]: INAR(∞) simulation (recursion and branching forms), exact
//!   moments, residuals and the joint moment-generating function.
//! - [`hawkes`]: cluster and thinning simulators, conditional intensity,
//!   binning and Monte Carlo Laplace functionals.
//! - [`approx`]: the Δ → 0 convergence harness.
//! - [`estimate`]: least-squares INAR(p) fits on bin counts.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose so that NaN is rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod approx;
pub mod error;
pub mod estimate;
pub mod hawkes;
pub mod inar;
pub mod kernel;
mod linalg;
mod math;
pub mod params;
pub mod rng;
pub mod series;
pub mod stats;

pub use error::{Error, Result};
pub use hawkes::{ClusterRealization, HawkesModel, Origin};
pub use inar::{FamilyRealization, FiniteSupportSeq};
pub use kernel::{KernelSpec, ReproductionKernel};
pub use params::{discretize, InarParams};
pub use rng::{RngStream, SimRng};
pub use series::{CountSeries, PointPattern, StepFunction};
pub use stats::Estimate;
