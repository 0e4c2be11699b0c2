//! Thermodynamic formalism for random countable topological Markov chains,
//! restricted to bases where everything is finitely computable.
//!
//! The objects here live over a finite environment system: a permutation
//! `θ` of finitely many states (a cycle, or a sampled path wrapped into a
//! cycle) together with one transition matrix and one potential table per
//! state.  On top of that the crate computes, exactly or with certified
//! truncation:
//!
//! * admissible words, mixing times and big-image/preimage certificates
//!   ([`shift`]),
//! * Birkhoff sums, variations and distortion constants of locally
//!   constant potentials ([`potential`]),
//! * Gurevich partition functions, preimage counting functions and the
//!   relative Gurevich pressure ([`transfer`]),
//! * induced power series, eigenvalue quotients, conformal measures,
//!   eigenfunctions, Gibbs and recurrence diagnostics ([`spectral`]),
//! * Perron-Frobenius triples of nonnegative matrix cocycles and
//!   stationary distributions of Markov chains in random environments
//!   ([`matrix`]).
//!
//! Each runnable example under `examples/` exercises one capability end to
//! end; the thin `rtmc` binary drives the same pipelines from a JSON config.

pub mod base;
pub mod config;
pub mod error;
pub mod matrix;
pub mod numerics;
pub mod potential;
pub mod report;
pub mod runner;
pub mod shift;
pub mod spectral;
pub mod transfer;

pub use base::{BaseSystem, ReturnStructure, State, StateSet};
pub use error::{Error, Result};
pub use potential::{Potential, PhiMode};
pub use shift::{BipCertificate, RandomShift, Word};
pub use transfer::{AnchorFamily, CylinderFunction, PartitionTables, PressureEstimate};
