use std::fmt;

/// Shared error type.
///
/// Indeterminacy is a first-class outcome here: a question that cannot be
/// decided at the stored precision must surface loudly instead of being
/// coerced to a default. Several algorithms (classification, retraction)
/// depend on strict valuation comparisons, so precision bugs are made
/// impossible to ignore.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Inverse of zero in the coefficient field.
    DivisionByZero,
    /// A valuation, or a decision that needs one, is not determined at the
    /// stored precision.
    IndeterminateValuation,
    /// An operation would leave an empty significance window.
    PrecisionExhausted,
    /// The twisted equation ε^r σ(y) − y = a needs r > 0.
    InvalidTwist,
    /// Expected a monomial matrix with entries that are exact ε-powers.
    NotMonomial,
    /// Row/column index tuples of consecutive exterior powers fail the
    /// containment the classifier relies on. Impossible for exact inputs;
    /// signals corrupted input or precision loss.
    InconsistentTuples,
    /// Text input violated the grammar.
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    /// Operands live in different coefficient fields, or a literal needs a
    /// larger field than the configured one.
    FieldMismatch,
    /// A congruence-depth test needs more precision than the operand carries.
    IndeterminatePrecision,
    /// An enumeration would exceed the configured size bound.
    TooLarge,
    /// A sampling profile cannot be satisfied.
    Infeasible,
    /// Case reduction reached no canonical family. Should never fire; when it
    /// does, the offending orbit is itself the interesting output.
    NotReducible,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::IndeterminateValuation => {
                write!(f, "valuation indeterminate at this precision")
            }
            Error::PrecisionExhausted => write!(f, "precision exhausted"),
            Error::InvalidTwist => write!(f, "twist exponent must be positive"),
            Error::NotMonomial => write!(f, "matrix is not monomial with exact epsilon powers"),
            Error::InconsistentTuples => {
                write!(f, "minor index tuples inconsistent across exterior powers")
            }
            Error::Syntax { line, col, msg } => {
                write!(f, "syntax error at {line}:{col}: {msg}")
            }
            Error::FieldMismatch => write!(f, "coefficient field mismatch"),
            Error::IndeterminatePrecision => {
                write!(f, "precision too small to decide congruence depth")
            }
            Error::TooLarge => write!(f, "enumeration exceeds the size bound"),
            Error::Infeasible => write!(f, "sampling profile is infeasible"),
            Error::NotReducible => write!(f, "no canonical case family reachable"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
