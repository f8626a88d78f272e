use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An enumeration or allocation would exceed the configured cap.
    ResourceLimit { what: &'static str, required: u128, cap: u128 },
    /// A point coordinate lies outside the admissible domain.
    Domain { what: &'static str, value: f64 },
    /// The transform has no inverse (tent, Chebyshev).
    NotInvertible(&'static str),
    /// Lattice search gave up after the configured number of attempts.
    SearchExhausted { attempts: usize, last_size: u64 },
    /// The lattice does not reconstruct the requested frequency set.
    NotReconstructing,
    /// A sampled function value was NaN or infinite.
    NonFiniteSample { node: usize },
    DimensionMismatch { expected: usize, found: usize },
    /// The basis is singular at the boundary of the cube for this weight.
    BoundarySingularity { coordinate: usize, value: f64 },
    InvalidArgument(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ResourceLimit { what, required, cap } => {
                write!(f, "{what}: size {required} exceeds cap {cap}")
            }
            Error::Domain { what, value } => write!(f, "{what}: {value} outside the domain"),
            Error::NotInvertible(kind) => write!(f, "the {kind} transform is not invertible"),
            Error::SearchExhausted { attempts, last_size } => write!(
                f,
                "no reconstructing lattice found after {attempts} attempts (last size {last_size})"
            ),
            Error::NotReconstructing => {
                write!(f, "lattice is not reconstructing for the frequency set")
            }
            Error::NonFiniteSample { node } => write!(f, "non-finite sample at node {node}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::BoundarySingularity { coordinate, value } => write!(
                f,
                "basis is singular at boundary coordinate {coordinate} (value {value})"
            ),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
