use thiserror::Error;

/// Errors surfaced by the exact-arithmetic and expansion machinery.
#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomial is reducible over the quotient field K")]
    ReducibleOverK,
    #[error("selector box overlaps both roots and cannot choose between them")]
    AmbiguousSelector,
    #[error("selector box overlaps neither root of the polynomial")]
    SelectorMissesRoots,
    #[error("tie between lattice candidates cannot be certified at the precision cap")]
    AmbiguousTie,
    #[error("a lattice element sits within tolerance of the distance boundary at the precision cap")]
    AmbiguousBoundary,
    #[error("precision cap of {0} bits exceeded")]
    PrecisionCapExceeded(u32),
    #[error("Moebius denominator vanishes at the state value")]
    PoleAtValue,
    #[error("matrix determinant is not +1 or -1")]
    NotUnimodular,
    #[error("chooser failed at step {index}: {reason}")]
    ChooserFailed { index: usize, reason: String },
    #[error("re-expansion of the periodic data violates the iteration condition")]
    InvalidExpansion,
    #[error("the base point is not a zero of the form")]
    NotAZero,
    #[error("form matrix is identically zero")]
    DegenerateForm,
    #[error("constructed circle point lies in K")]
    PointInK,
    #[error("bounded search exhausted without a verified circle")]
    SearchExhausted,
    #[error("point enclosures overlap; cannot separate them by a circle")]
    EnclosuresOverlap,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
