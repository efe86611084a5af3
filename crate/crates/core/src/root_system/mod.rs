//! Root data, Weyl groups, reduced words, Bruhat order and coset combinatorics.

mod datum;
mod weyl;

pub use datum::{cartan_for_type, CartanFile, Lattice, Root, RootDatum, RootId, Weight, DEFAULT_MAX_RANK};
pub use weyl::{WeylElement, WeylGroup, Word, DEFAULT_MAX_ORDER};
