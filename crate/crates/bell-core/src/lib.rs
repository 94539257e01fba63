//! Correlation experiments on finite probability spaces.
//!
//! The crate has two halves. The `measure` module is exact machinery for
//! finite Kolmogorov probability: generated σ-algebras, rational measures,
//! measurability, and physical-admissibility checks. The simulation
//! modules build on it to run spin-pair correlation experiments both ways:
//! all measurement contexts sharing one hidden-variable sample, and each
//! context drawing its own disjoint sample. The first setup is bound by
//! |E(a,b) − E(a,b')| + |E(a',b) + E(a',b')| ≤ 1/2 for ±1/2-valued
//! outcomes; the second tracks the quantum correlation all the way to
//! 1/√2 at the optimal angles.

pub mod contextuality;
pub mod error;
pub mod exec;
pub mod hidden;
pub mod input;
pub mod measure;
pub mod quantum;
pub mod report;
pub mod rng;

pub use error::{Error, Result};
