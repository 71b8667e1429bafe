//! Finite Cat-enriched multicategories, symmetric and pseudo symmetric
//! multifunctors, and the rigidification of pseudo symmetric multifunctors
//! into symmetric ones out of `M x EΣ*`, checked by exhaustive enumeration
//! up to an arity bound.

pub mod construct;
pub mod error;
pub mod fincat;
pub mod fixtures;
pub mod functors;
pub mod id;
pub mod multicat;
pub mod mutate;
pub mod perm;
pub mod pseudo;
pub mod report;
pub mod rigidify;

pub use error::{Error, Result};
pub use id::Id;
pub use multicat::{Level, MultiRef, Multicategory, Signature};
pub use perm::Perm;
pub use report::Report;
