//! Emptiness decision procedures for signatures, star automata and
//! graph-walking automata.
//!
//! Every decision procedure here goes through signatures: a star automaton
//! or a graph-walking automaton is reduced to a signature whose graphs encode
//! the automaton's accepting computations, and the signature is then decided
//! by searching for a balanced vector of label counts. Witness graphs are
//! synthesized from that vector, decoded back, and certified by running the
//! original automaton on them.
//!
//! Modules:
//! - [`model`]: signatures, graphs, validation.
//! - [`solver`]: balanced vectors, minimal witness search, graph builder,
//!   size bound and the brute-force enumeration oracle.
//! - [`gwa`]: graph-walking automata, simulation and their reduction.
//! - [`star`]: star automata, tilings and their reduction.
//! - [`hardness`]: generators for the 3-colourability and grid constructions.

pub mod error;
pub mod gwa;
pub mod hardness;
pub mod model;
mod naming;
pub mod solver;
pub mod star;

pub use error::{Error, Result};
pub use model::{
    graphs_identical, label_counts, validate_graph, validate_signature, Graph, Signature,
    ValidationReport, Violation,
};
