//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// rho_0 = +/-2: the representation formulas divide by 1/beta^2 - beta^2 = 0.
    #[error("degenerate parameters: rho_0 = +/-2")]
    DegenerateParams,

    /// tr(M1 M2) = +/-2 while a positive complex distance was requested.
    #[error("degenerate lines: axes coincide or meet at angle 0/pi")]
    DegenerateLines,

    /// Invariant circle passes through infinity (m21 = 0); conjugate first.
    #[error("degenerate circle: fixed point at infinity")]
    DegenerateCircle,

    /// A Hilbert symbol entry vanishes; the displayed symbol is not a
    /// division-algebra presentation.
    #[error("degenerate Hilbert symbol: entry {0} is zero")]
    DegenerateSymbol(&'static str),

    /// Certified refinement hit the precision cap without deciding.
    #[error("precision exhausted at {0} bits")]
    PrecisionExhausted(u32),

    /// gcd(p, p') is nonconstant.
    #[error("polynomial is not squarefree")]
    NonSquarefree,

    /// A defining polynomial failed the irreducibility check.
    #[error("polynomial is reducible over Q")]
    Reducible,

    /// Irreducibility could not be certified for this degree.
    #[error("irreducibility undecided")]
    IrreducibilityUndecided,

    /// The bounded scan for n_0 ran out before the bound dropped below 1.
    #[error("scan exhausted: no n <= {0} satisfies the bound")]
    ScanExhausted(usize),

    /// Input text did not match the field/element/word grammar.
    #[error("parse error: {0}")]
    Parse(String),

    /// An element was expected to lie in a subfield but does not.
    #[error("element does not lie in the expected subfield")]
    NotInSubfield,

    /// Mismatched number fields in an operation.
    #[error("operands belong to different number fields")]
    FieldMismatch,

    /// Invalid argument outside any more specific category.
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
