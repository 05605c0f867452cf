//! Tree games with regular objectives.
//!
//! Plays of a tree game are trees: at branching vertices the play splits
//! into two independent continuations. This crate represents such games
//! and their objectives, reduces games with game-automaton objectives to
//! parity games, checks finite-memory strategies, and searches for
//! winning strategies when the objective is an arbitrary regular tree
//! language.

pub mod automata;
pub mod fixtures;
pub mod game;
pub mod parity;
pub mod random;
pub mod suite;
pub mod symbol;
pub mod text;
pub mod tree;

pub use symbol::{Address, Dir, Symbol};
