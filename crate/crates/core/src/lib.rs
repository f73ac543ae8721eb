//! Infinite leveled digraphs with Property Z, described by one period of
//! bipartite layers, together with layerwise direct products, associated
//! digraphs, automorphism checks and arc transitivity certificates.
//!
//! The running example is `D = L x L`, where `L` alternates `K_{3,3}` and an
//! alternating 6-cycle on fibers `{-, o, +}` and the second factor is shifted
//! by one level. `D` is highly arc transitive, and its associated digraph is
//! connected and 1-arc transitive but not complete bipartite.

pub mod autos;
pub mod cli;
pub mod digraph;
mod iso;
pub mod product;
pub mod reach;
pub mod transit;
pub mod zoo;

pub use autos::{canonicalize_arc, generators_d, verify_automorphism, LayeredAutomorphism};
pub use digraph::{FiniteBipartiteDigraph, FiniteDigraph, LayerPattern, PeriodicLayeredDigraph, Vertex};
pub use transit::NArc;
