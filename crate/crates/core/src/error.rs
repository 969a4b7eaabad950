use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
#[non_exhaustive]
pub enum Error {
    EmptySystem,
    NonFiniteAngle {
        index: usize,
    },
    NonPositiveWeight {
        index: usize,
        weight: f64,
    },
    LengthMismatch {
        weights: usize,
        angles: usize,
    },
    EmptyRange,
    /// A term of a real exponential sum has no conjugate partner.
    UnpairedTerm {
        index: usize,
    },
    /// Evaluation produced an imaginary part above tolerance.
    NotReal {
        nu: i64,
        residual: f64,
    },
    /// The supplied ceiling `M` is exceeded by `|g(ν)|`.
    CeilingTooSmall {
        nu: i64,
        value: f64,
        ceiling: f64,
    },
    NonPositiveCeiling(f64),
    AlphaOutOfDomain(f64),
    NotPrime(u64),
    PrimeTooSmall(u64),
    CertificateViolation {
        nu: u64,
        value: f64,
        expected: f64,
    },
    InvalidConfig(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptySystem => f.write_str("system must contain at least one point"),
            Error::NonFiniteAngle { index } => write!(f, "angle {index} is not finite"),
            Error::NonPositiveWeight { index, weight } => {
                write!(f, "weight {index} = {weight} is not strictly positive")
            }
            Error::LengthMismatch { weights, angles } => {
                write!(f, "{weights} weights given for {angles} angles")
            }
            Error::EmptyRange => f.write_str("evaluation range must contain at least one index"),
            Error::UnpairedTerm { index } => {
                write!(f, "term {index} has no conjugate partner; sum is not real")
            }
            Error::NotReal { nu, residual } => {
                write!(
                    f,
                    "sum is not real at nu = {nu} (imaginary part {residual:e})"
                )
            }
            Error::CeilingTooSmall { nu, value, ceiling } => {
                write!(f, "M too small: |g({nu})| = {value} exceeds M = {ceiling}")
            }
            Error::NonPositiveCeiling(m) => write!(f, "nonpositive M = {m}"),
            Error::AlphaOutOfDomain(a) => write!(f, "alpha = {a} out of domain (need alpha >= 1)"),
            Error::NotPrime(q) => write!(f, "{q} is not prime"),
            Error::PrimeTooSmall(p) => write!(f, "prime {p} too small (need p >= 3)"),
            Error::CertificateViolation {
                nu,
                value,
                expected,
            } => write!(
                f,
                "certificate violation at nu = {nu}: |S| = {value}, expected {expected}"
            ),
            Error::InvalidConfig(why) => write!(f, "invalid config: {why}"),
        }
    }
}

impl core::error::Error for Error {}
