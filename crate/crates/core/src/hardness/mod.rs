//! Instance generators for the hardness constructions: 3-colourability as a
//! signature, the universal one-state star automaton, and grids encoding
//! Turing machine computations together with the automaton that checks them.

mod coloring;
mod grid;
mod turing;
mod walker;

pub use coloring::{
    canonical_colored_graph, extract_coloring, gen_3col_signature, gen_universal_star_automaton,
    SimpleGraph,
};
pub use grid::{canonical_grid_graph, gen_grid_signature, grid_mutations};
pub use turing::{
    check_computation, find_accepting_computation, Move, TmConfiguration, TmTransition,
    TuringMachine,
};
pub use walker::gen_grid_automaton;
