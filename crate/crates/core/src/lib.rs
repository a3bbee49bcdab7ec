//! Finite semigroups, their Cayley machines, and the automaton semigroups
//! those machines generate.
//!
//! * [`semigroup`]: multiplication tables, left translations, products and
//!   standard families.
//! * [`green`]: Green's relations, the minimal ideal, inflation tests.
//! * [`machine`]: Mealy machines, the Cayley machine, DOT export.
//! * [`element`]: exact arithmetic in the automaton semigroup.
//! * [`classify`]: structural characterizations with witnesses.
//! * [`corpus`]: exhaustive generation of small semigroups.
//! * [`io`] and [`verify`]: file formats and the corpus cross-checker behind
//!   the `cayley` binary.

pub mod classify;
pub mod corpus;
pub mod element;
pub mod error;
pub mod green;
pub mod io;
pub mod machine;
pub mod par;
mod report;
pub mod semigroup;
pub mod verify;

pub use classify::{classify, free_pair_check, infinite_witness, ClassificationReport};
pub use element::{canonicalize, enumerate, equal, AutElement, EnumerationResult, GenWord};
pub use error::{Error, Result};
pub use green::{green_relations, is_h_trivial, GreenData};
pub use machine::{build_cayley_machine, MealyMachine};
pub use par::Exec;
pub use semigroup::{check_associativity, direct_product, ElemSet, Element, Family, MulTable};
