use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument fell outside the domain of the called function.
    #[error("{function}: argument out of domain ({detail})")]
    Domain {
        function: &'static str,
        detail: String,
    },

    /// The elevation angle between two coincident nodes.
    #[error("elevation angle undefined for coincident nodes")]
    UndefinedAngle,

    /// A series term or sum left the representable range.
    #[error("{series}: non-finite value at term {term}")]
    NonFinite { series: &'static str, term: String },

    /// Result exceeds floating point range even in log space.
    #[error("{function}: overflow for argument {x}")]
    Overflow { function: &'static str, x: f64 },

    /// A Monte Carlo functional produced NaN or infinity.
    #[error("functional returned {count} non-finite values (first at frame {first_frame})")]
    NonFiniteSamples { count: u64, first_frame: u64 },

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            function,
            detail: detail.into(),
        }
    }
}
