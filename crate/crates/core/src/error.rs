use thiserror::Error;

use crate::params::Diagnostic;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("clause contains atom {0} more than once")]
    RepeatedAtom(String),
    #[error("clause {index} repeats an earlier clause")]
    RepeatedClause { index: usize },
    #[error("empty clause")]
    EmptyClause,
    #[error("empty formula")]
    EmptyFormula,
    #[error("{0} index must be at least 1")]
    ZeroIndex(&'static str),
    #[error("formula depth {depth} exceeds declared depth {declared}")]
    DepthExceeded { depth: usize, declared: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("spec syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("negative weight at offset {offset}")]
    Negative { offset: usize },
    #[error("expected {expected} levels of list nesting, found {found}")]
    Nesting { expected: usize, found: usize },
    #[error("length spec needs at least one depth entry")]
    NoDepths,
    #[error("invalid scalar parameter: {0}")]
    Scalar(String),
    #[error("weight does not fit in 64 bits")]
    Overflow,
    #[error("cannot widen {coord}: {reason}")]
    Widen { coord: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid generation parameters:\n{}", render(.0))]
pub struct ParamError(pub Vec<Diagnostic>);

fn render(diags: &[Diagnostic]) -> String {
    diags.iter().map(|d| format!("  {d}")).collect::<Vec<_>>().join("\n")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error(
        "gave up after {attempts} instantiations of shape (K={length}, P={props}) at nesting depth \
         {depth}: atom pool too small for distinct atoms"
    )]
    AtomRejectionCap { depth: usize, length: usize, props: usize, attempts: u64 },
    #[error("gave up after {attempts} redraws of top-level clause {index}: clause space smaller than L")]
    ClauseRejectionCap { index: usize, attempts: u64 },
    #[error(transparent)]
    Params(#[from] ParamError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("intractable for exact oracle: about {estimate} outcomes at nesting depth {depth} (limit {limit})")]
    Intractable { depth: usize, estimate: u128, limit: u128 },
    #[error("shape (K={length}, P={props}) at nesting depth {depth} can never be instantiated with distinct atoms")]
    ImpossibleShape { depth: usize, length: usize, props: usize },
    #[error("as-set probability needs at most {max} clauses, formula has {len}")]
    TooManyClauses { len: usize, max: usize },
    #[error("formula depth {depth} exceeds generator depth {declared}")]
    DepthMismatch { depth: usize, declared: usize },
    #[error("samples must be at least 1")]
    NoSamples,
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Gen(#[from] GenError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error("formula outside the model-enumeration guard: {0}")]
    Guard(String),
    #[error("deadline exceeded")]
    Timeout,
}

#[derive(Debug, Error)]
pub enum CampaignError {
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("invalid campaign: {0}")]
    Invalid(String),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("csv: {0}")]
    Csv(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
