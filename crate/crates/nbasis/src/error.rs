//! Error type shared across the crate.

use serde_json::{json, Value};

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong, from bad user input to broken
/// internal invariants. The CLI maps the variants onto exit codes,
/// so keep operational failures and invariant failures distinct.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("not a prime: {0}")]
    NotPrime(u64),
    #[error("prime {0} too large, the characteristic must stay below 2^31")]
    PrimeTooLarge(u64),
    #[error("cardinality {p}^{degree} does not fit in 128 bits")]
    CardinalityTooLarge { p: u128, degree: u64 },
    #[error("field towers may only be built on the prime field or one extension of it")]
    TowerTooDeep,
    #[error("search exhausted: {0}")]
    SearchExhausted(&'static str),
    #[error("operands belong to different field contexts")]
    CtxMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{m} does not divide {n}")]
    NotADivisor { m: u64, n: u64 },
    #[error("element does not lie in the requested subfield")]
    NotInSubfield,
    #[error("{q} and {n} are not coprime")]
    NotCoprime { q: u128, n: u64 },
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial is reducible")]
    Reducible,
    #[error("index {index} out of range, expected a value below {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("no generator found for the unit group modulo {0}")]
    NoGenerator(u64),
    #[error("idempotent identity checks failed")]
    IdentityCheckFailed,
    #[error("the two Gauss period values coincide, the criterion cannot separate the classes")]
    EpsilonCollision,
    #[error("criterion not applicable: {0}")]
    NotApplicable(&'static str),
    #[error("enumeration of {size} elements exceeds the bound {bound}")]
    BoundExceeded { size: u128, bound: u128 },
    #[error("criteria disagree on {}", .0.describe())]
    Disagreement(Box<DisagreementReport>),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("coordinate {value} out of range for characteristic {p}")]
    CoordRange { value: u64, p: u64 },
    #[error("wrong coordinate count: got {got}, need {need}")]
    CoordCount { got: usize, need: usize },
}

impl Error {
    /// True for failures that indicate a broken invariant rather than
    /// bad input or an unlucky search.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::Disagreement(_)
                | Error::Singular
                | Error::EpsilonCollision
                | Error::CtxMismatch
                | Error::DivisionByZero
                | Error::NotInSubfield
                | Error::NoGenerator(_)
                | Error::IdentityCheckFailed
        )
    }
}

/// Full record of a cross-validation failure: which field, which
/// element, and what every criterion said.
#[derive(Debug, Clone)]
pub struct DisagreementReport {
    pub q: u128,
    pub n: u64,
    pub element_index: u128,
    pub element: String,
    pub verdicts: Vec<(String, Option<bool>)>,
}

impl DisagreementReport {
    pub fn describe(&self) -> String {
        format!(
            "element #{} of F_({}^{})",
            self.element_index, self.q, self.n
        )
    }

    pub fn to_json(&self) -> Value {
        let verdicts: Vec<Value> = self
            .verdicts
            .iter()
            .map(|(name, v)| json!({ "criterion": name, "is_nbg": v }))
            .collect();
        json!({
            "q": self.q.to_string(),
            "n": self.n,
            "element_index": self.element_index.to_string(),
            "element": self.element,
            "verdicts": verdicts,
        })
    }
}
