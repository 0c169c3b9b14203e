pub mod error;
pub mod gate;
pub mod graph;
pub mod state;
pub mod gadgets;
pub mod compiler;
pub mod analyzer;
pub mod io;
