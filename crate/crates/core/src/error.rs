use thiserror::Error;

/// Errors raised by constructors, evaluators, and the higher constructions.
///
/// Axiom violations are not errors: checkers return a [`Report`](crate::Report)
/// listing them. Errors are for malformed input (wrong degrees, unknown ids,
/// shapes that do not fit together).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("not a permutation: {0:?}")]
    NotAPermutation(Vec<usize>),

    #[error("unknown signature {0}")]
    UnknownSignature(String),

    #[error("unknown object {0}")]
    UnknownObject(String),

    #[error("unknown morphism {0}")]
    UnknownMorphism(String),

    #[error("morphisms {g} and {f} are not composable")]
    NotComposable { g: String, f: String },

    #[error("component at object {object} has wrong endpoints: {detail}")]
    Endpoint { object: String, detail: String },

    #[error("missing table entry: {0}")]
    MissingEntry(String),

    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("arity bounds differ: {0} vs {1}")]
    ArityBoundMismatch(usize, usize),

    #[error("invalid monoid table: {0}")]
    InvalidMonoid(String),

    #[error("monoid table is not commutative: {0}")]
    NotCommutative(String),

    #[error("invalid Set-multicategory: {0}")]
    InvalidSetMulticat(String),

    #[error("invalid pseudo symmetric multifunctor: {0}")]
    InvalidPseudo(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("rigidification is ambiguous on {0}")]
    Exchange(String),

    #[error("cannot parse id {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
