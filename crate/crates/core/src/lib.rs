//! Exact-arithmetic engine for scanning knot diagrams built from algebraic
//! tangles and 4-regular planar graphs (Conway polyhedra).
//!
//! The crate provides:
//! - sparse Laurent-polynomial and Gaussian-integer arithmetic ([`laurent`]),
//! - the algebra of 2-tangles and their Kauffman brackets ([`tangle`]),
//! - the unit-ideal ("trivializability") test for bracket pairs ([`ideal`]),
//! - enumeration of algebraic tangles up to mutation, reflection and mirror
//!   image ([`tangle_table`]),
//! - generation of Conway polyhedra with embeddings and contraction orders
//!   ([`polyhedra`], [`planar`], [`graph`]),
//! - a divide-and-conquer skein contraction engine over crossingless-matching
//!   bases, with a state-sum oracle and determinant evaluation ([`skein`],
//!   [`matching`]),
//! - assembled flat diagrams with PD/DT import and export ([`diagram`]),
//! - a crossing-reducing pass-move detector ([`passmove`]),
//! - the end-to-end scan pipeline with checkpointing ([`scan`]).



pub mod diagram;
pub mod graph;
pub mod ideal;
pub mod laurent;
pub mod matching;
pub mod passmove;
pub mod planar;
pub mod polyhedra;
pub mod scan;
pub mod skein;






pub mod tangle;
pub mod tangle_table;

pub use laurent::{GaussInt, GradedBracket, Int, LaurentInt};
pub use tangle::{ClosedBracket, EndpointPairing, RationalSpec, TangleExpr};
