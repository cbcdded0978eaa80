use thiserror::Error;

/// Errors raised by the exact arithmetic layers.
///
/// `PrecisionExhausted`-class errors mean a valuation ledger ran dry;
/// the `NotPRegular` / `NotUnbalanced` / `MultiplicityNotOne` class means a
/// mathematical precondition failed for the requested input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("context mismatch: operands live over different primes or rings")]
    CtxMismatch,
    #[error("not a unit: attempted to invert an element of positive valuation")]
    NotAUnit,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("q-precision exhausted: {0}")]
    QPrecisionExhausted(String),
    #[error("Hecke polynomial is not p-regular at the requested seed")]
    NotPRegular,
    #[error("no unit root: eigenform is not ordinary at p")]
    NoUnitRoot,
    #[error("weight mismatch: {0} vs {1}")]
    WeightMismatch(i64, i64),
    #[error("tail not certified: {0}")]
    TailNotCertified(String),
    #[error("total degree cap exceeded: degree {0} > cap {1}")]
    DegreeOverflow(usize, usize),
    #[error("graded factor vanishes: pole at slot {0} for this weight")]
    PoleAtWeight(usize),
    #[error("Katz basis is degenerate: {0}")]
    BasisDegenerate(String),
    #[error("form not in the computed span: residual valuation {0}")]
    NotInSpan(u32),
    #[error("ordinary block is trivial at this weight")]
    NoOrdinaryBlock,
    #[error("eigenline has multiplicity > 1 at working precision")]
    MultiplicityNotOne,
    #[error("eigenform is not ordinary at p")]
    NotOrdinary,
    #[error("weights are not unbalanced: need k >= l + m with k + l + m even")]
    NotUnbalanced,
    #[error("Eisenstein coefficient is not p-integral: {0}")]
    EisensteinNotIntegral(String),
    #[error("invalid input: {0}")]
    BadInput(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
