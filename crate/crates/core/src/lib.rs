//! Coalition structure detection on signed weighted graphs.
//!
//! The pipeline: build a signed graph from market data or a synthetic
//! generator, then recursively bisect it with min-cut QUBO solves until no
//! cut is profitable. Baselines (k-medoids over correlation distances, with
//! an eigengap heuristic choosing k) and evaluation metrics live alongside.

pub mod baseline;
pub mod error;
pub mod finance;
pub mod gcsq;
pub mod graph;
pub mod metrics;
pub mod qubo;
pub mod synthgen;

pub use error::{Error, Result};
pub use gcsq::{gcsq_cluster, GcsqRun, SplitRecord};
pub use graph::{Cut, Partition, SignedGraph};
pub use qubo::{Backend, QuboInstance, SolveResult, SolverConfig};
pub use synthgen::{DirichletConcentration, SynthSpec};
