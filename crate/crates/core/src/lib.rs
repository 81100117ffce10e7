//! Storage codes over source-labeled graphs.
//!
//! A graph assigns every edge one of `K` independent sources; both endpoints
//! of an edge must be able to recover that source from what they store. This
//! crate classifies the symmetric storage capacity of a graph, builds explicit
//! linear codes that reach it and verifies those codes over prime fields.

mod error;

pub mod classifier;
pub mod code;
pub mod construct;
pub mod field;
pub mod fixtures;
pub mod graph;
pub mod isomorphism;
pub mod structure;
pub mod verify;

pub use classifier::{classify_capacity, CapacityClass, CapacityVerdict, ClassifyOptions};
pub use code::{parse_code, LinearCode};
pub use construct::{construct, Construction, Rule, TargetRate};
pub use error::{Error, Result};
pub use field::FpMatrix;
pub use graph::{parse_graph, Edge, StorageGraph};
pub use structure::DEFAULT_PATH_LIMIT;
pub use verify::{verify_code, VerificationReport, DEFAULT_ORACLE_CAP};
