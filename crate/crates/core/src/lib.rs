//! Square-free words and their extremal variants.
//!
//! A word is square-free when no non-empty factor repeats twice in a row; a
//! square-free word is *extremal* when inserting any single letter at any
//! position destroys square-freeness. This crate provides:
//!
//! * [`word`]: words, square detection, single-letter extensions, and the
//!   extendable / nearly-extremal / extremal classification;
//! * [`digraph`]: block-labeled digraphs, the machine-checked sufficient
//!   conditions under which square-free walks have square-free images, and
//!   the partition-driven construction of arbitrarily long such walks;
//! * [`construction`]: the concrete certified block family and generators
//!   for arbitrarily long nearly extremal and extremal ternary words;
//! * [`nonchalant`]: the greedy rightmost-insertion word sequence;
//! * [`explorer`]: exhaustive canonical search for shortest extremal words
//!   and budgeted randomized probes over larger alphabets.
//!
//! The search and verification kernels are data-parallel with rayon when the
//! default `parallel` feature is active; disabling it leaves sequential
//! fallbacks with identical results.

pub mod construction;
pub mod digraph;
pub mod explorer;
pub mod nonchalant;
pub mod word;

pub use construction::{Construction, ConstructionCertificate};
pub use digraph::BlockDigraph;
pub use word::{Alphabet, Extension, ExtensionReport, SquareWitness, Status, Word};
