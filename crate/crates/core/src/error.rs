use std::fmt;

/// Errors raised by the algebra routines.
#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("sub-lattice is not contained in the ambient lattice")]
    NotContained,
    #[error("invalid Cartan datum: {0}")]
    InvalidCartan(String),
    #[error("not of finite type: {0}")]
    NotFiniteType(String),
    #[error("index {index} out of range for size {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid root datum: {0}")]
    InvalidRootDatum(String),
    #[error("quadratic form is not Weyl-invariant: {0}")]
    NotWeylInvariant(String),
    #[error("fair bisector construction failed: {0}")]
    FairBisectorConstruction(String),
    #[error("unsupported field configuration: {0}")]
    UnsupportedField(String),
    #[error("lattice window overflow at {0}")]
    WindowOverflow(VecDisplay),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

/// A lattice vector carried inside an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VecDisplay(pub Vec<i64>);

impl fmt::Display for VecDisplay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}
