//! Adaptive MCMC mean estimation whose sample consumption follows the
//! inter-trace variance of the chain, together with an exact spectral oracle
//! for small chains and an approximate counter for proper graph colorings.
//!
//! The crate is organized by layer:
//!
//! - [`chain`]: kernels, traces, product/trace/lazy/lumped chains, the cycle family.
//! - [`spectral`]: exact stationary, eigenvalue and trace-variance analysis.
//! - [`estimators`]: two-chain estimators and Hoeffding/Bernstein bounds.
//! - [`dynamite`]: the progressive, trace-chain and warm-started estimators.
//! - [`coloring`]: graphs, Glauber dynamics and telescoping-product counting.
//! - [`planted`]: planted-partition graphs and cut diagnostics.
//! - [`bench`]: estimation methods on explicit chains and the comparison harness.
//! - [`cli`]: the `dynamite` command-line front end.
//!
//! Runnable walkthroughs live in `examples/`.

pub mod bench;
pub mod chain;
pub mod cli;
pub mod coloring;
pub mod dynamite;
pub mod error;
pub mod estimators;
pub mod planted;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
