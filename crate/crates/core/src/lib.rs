//! Treewidth-preserving ladder reductions for general graphs and display
//! graphs of phylogenetic trees, backed by an exact treewidth solver and a
//! tree decomposition validator.

pub mod cli;
pub mod decomposition;
pub mod fixtures;
pub mod generate;
pub mod graph;
pub mod io;
pub mod ladder;
pub mod phylo;
pub mod reducer;
pub mod search;

pub use decomposition::{exact_treewidth, validate, TreeDecomposition};
pub use graph::{Edge, Graph, GraphError, Vertex};
pub use ladder::{Ladder, LadderClass, LadderError};
