//! Solver library for the Synchronized Planarity problem.
//!
//! Synchronized Planarity asks for a planar embedding of a multigraph in
//! which, for every *pipe* pairing two vertices of equal degree, the cyclic
//! edge orders around the two endpoints line up under the pipe's bijection.
//! The problem generalizes several constrained planarity variants; this crate
//! ships the reduction engine together with translations from Clustered
//! Planarity and Connected SEFE, seeded instance generators, brute-force
//! oracles for desk-scale verification, and a benchmark front end.
//!
//! The solver works in three phases:
//! 1. *make reduced*: repeatedly remove a feasible pipe by encapsulating and
//!    joining cut-vertices, propagating an embedding tree, or simplifying a
//!    pipe whose endpoint rotation is free;
//! 2. *solve reduced*: embed the pipe-free instance, resolving synchronized
//!    reflections through a 2-SAT formula over SPQR-tree rigids;
//! 3. *embed*: undo all operations in reverse while transporting the
//!    embedding back onto the input graph, yielding a certificate.

pub mod bc;
pub mod embedding;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod pctree;
pub mod reductions;
pub mod spqr;
pub mod stats;

pub mod generators;
pub mod solver;

pub use graph::{EdgeId, GraphError, Inc, MultiGraph, VertexId};
