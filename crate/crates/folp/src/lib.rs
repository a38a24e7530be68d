//! A satisfiability reasoner for forest logic programs under the open
//! answer set semantics.
//!
//! The crate is organized around the tableau in [`engine`]: it builds
//! completion structures (labeled extended forests with an atom
//! dependency graph) for a unary predicate and a program whose rules are
//! tree shaped, and extracts open answer sets from complete clash-free
//! structures. The [`oracle`] module implements the ground semantics
//! directly (reducts, least models, bounded brute-force search) and
//! serves as an independent verifier. The [`shoq`] module adds a
//! description-logic front end translated into rules, and [`textio`]
//! holds the parsers, printer and DOT export used by the command line.

pub mod analysis;
pub mod ast;
pub mod depgraph;
pub mod engine;
pub mod forest;
pub mod oracle;
pub mod shoq;
pub mod textio;
pub mod validate;
