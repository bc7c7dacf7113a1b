//! Graph-sampling simulator and cross-network analytics toolkit.
//!
//! The crate models how a new ("target") social network bootstraps itself by
//! copying links from an established ("source") network, and provides the
//! measurement suite for comparing copied against natively created subgraphs:
//!
//! - [`graph`]: compact immutable graphs with degree/reciprocity/clustering/
//!   component measurements ([`stats`], [`clustering`], [`components`]).
//! - [`generators`]: seeded synthetic source networks (Erdős–Rényi, power-law
//!   configuration model, ring lattice with rewiring).
//! - [`sampling`]: the two-stage link bootstrap sampling process (node
//!   self-selection at rate p1, per-link selection at rate p2) plus sweep
//!   harnesses for phase-transition studies.
//! - [`theory`]: closed-form predictions (thinned degree distributions, giant
//!   component threshold, reciprocity, clustering) the simulations are
//!   validated against.
//! - [`crossnet`]: copied/native link partitioning and the per-user metric
//!   suite over real or synthetic (target, source, mapping) triples.
//! - [`io`]: TSV ingestion and writers for the file formats used by the CLI.

pub mod clustering;
pub mod components;
pub mod crossnet;
pub mod generators;
pub mod graph;
pub mod io;
pub mod sampling;
pub mod stats;
pub mod theory;

pub use clustering::{global_clustering, local_clustering, ClusteringMode};
pub use components::{connected_components, ComponentKind, ComponentReport};
pub use graph::{BuildReport, Graph, GraphError, NodeId};
pub use stats::{degree_stats, reciprocity, DegreeStats};
