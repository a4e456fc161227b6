use thiserror::Error;

/// Everything that can go wrong inside the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid root system type {0}{1}")]
    InvalidType(char, usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vector {0:?} is not a root")]
    NotARoot(Vec<i64>),

    #[error("Weyl group enumeration exceeds the budget of {budget} elements")]
    BudgetExceeded { budget: usize },

    #[error("invalid character lattice: {0}")]
    InvalidLattice(String),

    #[error("unknown isogeny form {name:?} for type {type_label}")]
    UnknownIsogeny { name: String, type_label: String },

    #[error("rigid table incomplete: no rigid classes recorded for {0}")]
    RigidTableIncomplete(String),

    #[error("rigid table parse error on line {line}: {message}")]
    RigidTableParse { line: usize, message: String },

    #[error("maps are not closed under composition")]
    NotAGroup,

    #[error("division by zero")]
    DivisionByZero,

    #[error("conductor {from} does not divide {to}")]
    ConductorMismatch { from: u64, to: u64 },

    #[error("variable count mismatch: {0} vs {1}")]
    VariableMismatch(usize, usize),

    #[error("element does not stabilize the subsystem")]
    NotStabilizing,

    #[error("sheet is not a Dixmier sheet (nontrivial unipotent label {0:?}); the categorical quotient only sees semisimple classes, so query the Dixmier sheet of the same pseudo-Levi instead")]
    NotDixmier(String),

    #[error("degree bound {bound} is smaller than the maximal generator degree {needed}")]
    DegreeBoundTooSmall { bound: u32, needed: u32 },

    #[error("dominant monoid search box has {size} points, above the cap {cap}")]
    HeightBoundInsufficient { size: usize, cap: usize },

    #[error("arithmetic overflow in integer lattice computation")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;
