//! Ternary quadratic forms: representation counts, reduction, genera,
//! Watson transformations and the strongly s-regular search.

pub mod arith;
pub mod catalog;
pub mod dataset;
pub mod enumerate;
pub mod forms;
pub mod genus;
pub mod identities;
pub mod local;
pub mod search;
pub mod ssr;
pub mod watson;

pub use enumerate::{rep_count, short_vectors, theta_prefix, RepCounter};
pub use forms::{BinaryForm, Discriminant4, FormError, TernaryForm, UnimodularMap};
