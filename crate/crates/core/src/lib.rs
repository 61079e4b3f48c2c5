//! Decision procedures for finitely generated submonoids of free groups.
//!
//! The library works with a submonoid `M` of a free group `F(A)`, given by a
//! finite list of generators as reduced words. Around that object it builds:
//!
//! - exact word arithmetic and ball enumeration in `F(A)` ([`words`]);
//! - the saturated-automaton calculus for rational subsets of `F(A)`,
//!   used for membership in `M`, `M⁻¹M`, factor sets and irreducibles
//!   ([`ratset`]);
//! - a pushdown-automaton/grammar engine for the preimage `α⁻¹(g) ⊆ S*`
//!   of an element under the evaluation map, with emptiness, finiteness,
//!   longest-word and enumeration queries ([`preimage`]);
//! - the gradedness decision (is every element spelled in only finitely
//!   many ways?) plus the factorization statistics `Ξ` and `ζ` ([`graded`]);
//! - quasi-geodesic constants and their empirical verification
//!   ([`geometry`]);
//! - the relation automaton recognizing the word problem of `M` as a
//!   rational relation, with certified and adaptive cutoffs ([`relation`]);
//! - lex-minimal normal forms: the regular cross-section `B` and the
//!   description transducer ([`normal`]);
//! - irreducible elements, the diagonal-containment test, and the
//!   homomorphism/isomorphism decisions ([`decision`]).
//!
//! The `submon` binary exposes all of this on the command line.

pub mod decision;
pub mod error;
pub mod export;
pub mod geometry;
pub mod graded;
pub mod nfa;
pub mod normal;
pub mod preimage;
pub mod ratset;
pub mod relation;
pub mod submonoid;
pub mod words;

pub use error::{Budget, Error, Result};
pub use submonoid::{SWord, SubmonoidSpec};
pub use words::{AmbientSpec, Letter, ReducedWord};
