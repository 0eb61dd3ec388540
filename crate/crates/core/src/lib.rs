//! Synchronous tree-adjoining grammars under two semantics: the rewriting of
//! derived tree pairs with link inheritance, and pairs of isomorphic
//! derivation trees. Includes a chart parser for component grammars, the
//! parse, map and generate transduction pipeline, projection onto one
//! component, and reduction to a multicomponent TAG.

pub mod cli;
pub mod derivation;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod mctag;
pub mod parser;
pub mod render;
pub mod rewriting;
pub mod synchronous;
pub mod transduce;
pub mod tree;

pub use error::{Error, Result};
