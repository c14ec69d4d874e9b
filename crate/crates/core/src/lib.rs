//! Finite semigroups, variety reflections and the reflection-property deciders.

pub mod congruence;
pub mod enumeration;
pub mod error;
pub mod galois;
pub mod limits;
pub mod reflection;
pub mod report;
pub mod semigroup;
pub mod sgt;
pub mod survey;
pub mod variety;

pub use error::{Error, Result};
pub use semigroup::{FiniteSemigroup, Homomorphism};
pub use variety::{Identity, VarietyConfig};
