//! Crate-wide error taxonomy.
//!
//! Every fallible operation returns one of these variants; the CLI maps the
//! variant name verbatim into its machine-readable `code` field.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Extended-Euclid inversion failed: the element shares a factor with the modulus.
    #[error("element is not invertible modulo the given modulus")]
    NotInvertible,

    /// Power-series inversion requires an invertible constant term.
    #[error("series has a non-unit constant term")]
    NonUnitConstantTerm,

    /// A root of the evaluation set is a pole of the summand.
    #[error("denominator vanishes at a root of unity in the summation set")]
    DenominatorVanishesAtRoot,

    /// A pair of roots in the enumeration is a pole of the summand.
    #[error("denominator vanishes at a pair of roots of unity")]
    DenominatorVanishesAtPair,

    /// A sum that must lie in Q came out irrational (bug or asymmetric input).
    #[error("result of a root-of-unity sum is not rational")]
    NonRationalResult,

    /// theta-power reduction was asked for an exponent above the genus.
    #[error("theta exponent exceeds the genus; the term contributes zero")]
    EllExceedsGenus,

    /// A rational-function input does not have the homogeneity degree the
    /// closed form requires.
    #[error("homogeneous degree of the input does not match the required degree")]
    HomogeneityMismatch,

    /// Coefficient extraction past the truncation order of a series.
    #[error("series truncation order is too shallow for the requested coefficient")]
    TruncationTooShallow,

    /// Insertion degree does not equal the virtual dimension.
    #[error("insertion degree does not match the virtual dimension")]
    DegreeMismatch,

    /// The (form, N, r) combination is outside the implemented families.
    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),

    /// A stated hypothesis of the identity under test fails for these parameters.
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    /// Parameters reach a regime the closed forms do not cover.
    #[error("parameters land in a regime not covered by the closed forms")]
    UnreachableRegime,

    /// Regime explicitly excluded by the formula's validity range (e.g. d < g).
    #[error("parameters land in an unsupported regime (for instance d < g)")]
    UnsupportedRegime,

    /// The chosen equivariant parameter zeroes a factor; retry with another one.
    #[error("equivariant parameter makes a factor degenerate")]
    DegenerateParameter,

    /// Two evaluations at distinct equivariant parameters disagreed.
    #[error("localization result depends on the equivariant parameter (internal bug)")]
    TIndependenceFailure,

    /// A series denominator became non-invertible (weights coincide).
    #[error("denominator series is not a unit (coincident weights)")]
    NonUnitDenominator,
}

impl Error {
    /// Stable machine-readable code for CLI/JSON output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotInvertible => "NotInvertible",
            Error::NonUnitConstantTerm => "NonUnitConstantTerm",
            Error::DenominatorVanishesAtRoot => "DenominatorVanishesAtRoot",
            Error::DenominatorVanishesAtPair => "DenominatorVanishesAtPair",
            Error::NonRationalResult => "NonRationalResult",
            Error::EllExceedsGenus => "EllExceedsGenus",
            Error::HomogeneityMismatch => "HomogeneityMismatch",
            Error::TruncationTooShallow => "TruncationTooShallow",
            Error::DegreeMismatch => "DegreeMismatch",
            Error::UnsupportedFamily(_) => "UnsupportedFamily",
            Error::HypothesisViolated(_) => "HypothesisViolated",
            Error::UnreachableRegime => "UnreachableRegime",
            Error::UnsupportedRegime => "UnsupportedRegime",
            Error::DegenerateParameter => "DegenerateParameter",
            Error::TIndependenceFailure => "TIndependenceFailure",
            Error::NonUnitDenominator => "NonUnitDenominator",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
