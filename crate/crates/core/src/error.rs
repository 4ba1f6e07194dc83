use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("characteristic {0} is not supported (p must be an odd prime)")]
    UnsupportedCharacteristic(u64),

    #[error("invalid input: {0}")]
    Domain(String),

    #[error("elements of F_{{{p}^{a}}} and F_{{{p}^{b}}} cannot be combined")]
    FieldMismatch { p: u32, a: usize, b: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("F_{{{p}^{from}}} does not embed in F_{{{p}^{to}}}")]
    NoEmbedding { p: u32, from: usize, to: usize },

    #[error("enumeration of {required} elements exceeds the budget of {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    #[error("no splitting field found up to degree {cap}")]
    SplittingCap { cap: usize },

    #[error("c is not in W: residual {residual:?}")]
    NotInKernel { residual: Vec<u32> },

    #[error("not divisible: remainder has {nonzero} nonzero coefficients")]
    Divisibility { nonzero: usize },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("out of scope: {0}")]
    OutOfScope(String),

    #[error("undecidable within budget: {0}")]
    Undecidable(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by resource limits rather than by the input.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. } | Error::SplittingCap { .. } | Error::Undecidable(_)
        )
    }

    /// True for internal consistency failures.
    pub fn is_invariant(&self) -> bool {
        matches!(self, Error::Invariant(_) | Error::Divisibility { .. })
    }
}
