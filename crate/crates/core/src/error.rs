use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A group or Levi description that cannot exist.
    InvalidLevi(String),
    /// An element that is not in the relative Weyl group of the Levi.
    NotInWeylGroup(String),
    /// Two objects built over different Levi subgroups were combined.
    LeviMismatch { expected: usize, got: usize },
    /// A vector of the wrong length was acted on.
    DimensionMismatch { expected: usize, got: usize },
    /// A subgroup computation produced something that is not an
    /// elementary abelian 2-group. Indicates a bug.
    NotElementaryAbelian(String),
    /// An operation was called outside its precondition.
    Precondition(String),
    /// Parameter-side data violating a type invariant.
    InvalidParameter(String),
    /// A non-self-dual block needs an explicit twisted-dual partner.
    ExplicitPairingRequired(String),
    /// Input outside the supported family/Levi combinations.
    Unsupported(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidLevi(msg) => write!(f, "invalid Levi data: {msg}"),
            Error::NotInWeylGroup(msg) => write!(f, "not an element of W_M: {msg}"),
            Error::LeviMismatch { expected, got } => {
                write!(f, "Levi mismatch: expected {expected} blocks, got {got}")
            }
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::NotElementaryAbelian(msg) => {
                write!(f, "internal consistency failure, not an elementary abelian 2-group: {msg}")
            }
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::ExplicitPairingRequired(msg) => {
                write!(f, "explicit dual pairing required: {msg}")
            }
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
        }
    }
}
