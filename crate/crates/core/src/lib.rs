pub mod canon;
pub mod class;
pub mod cli;
pub mod corpus;
pub mod elements;
pub mod error;
pub mod expr;
pub mod extending;
pub mod fixtures;
mod grammar;
pub mod harness;
pub mod io;
pub mod lattice;
pub mod morphism;
pub mod set;

pub use canon::{canonical_form, is_isomorphic, CanonicalForm};
pub use class::ClassSpec;
pub use corpus::{enumerate_lattices, load_corpus, Corpus};
pub use elements::ElementClassTable;
pub use error::{Error, Result};
pub use extending::{Analysis, Property, PropertyVerdict};
pub use lattice::{Interval, Lattice};
pub use morphism::{projection_onto, LinearMorphism};
pub use set::{ElementId, ElementSet, MAX_ELEMENTS};
