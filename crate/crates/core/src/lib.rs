//! Simulation and verification of (α,β)-thresholded network dynamics.
//!
//! Nodes never store state: every round, each scheduled pair `(u, v)`
//! computes a potential ℰ(u, v) from its local neighborhood and the edge is
//! removed if ℰ < α, kept if α ≤ ℰ < β, and created if ℰ ≥ β. The crate
//! provides the graph, the potentials, schedulers, a synchronous engine with
//! stabilization and cycle detection, a k-core oracle, the Rule-110 gadget
//! construction, and the social and spanning-star extensions.

pub mod cli;
pub mod engine;
pub mod error;
pub mod extensions;
pub mod graph;
pub mod kcore;
pub mod potentials;
pub mod rng;
pub mod rule110;
pub mod schedulers;

pub use error::{Error, Result};
pub use graph::{DynGraph, EdgeDelta, NodeId, Pair};
pub use potentials::Potential;
