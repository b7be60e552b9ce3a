use alloc::string::String;
use alloc::vec::Vec;

use crate::distributions::Family;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Arguments outside the operation's domain (bad parameters, empty
    /// data, values below the support).
    #[error("domain error: {0}")]
    Domain(String),

    /// A normalizing series did not certify its remainder within the
    /// iteration cap.
    #[error("series for {family} with parameters {params:?} did not converge after {terms} terms")]
    NoConvergence {
        family: Family,
        params: Vec<f64>,
        terms: u64,
    },

    /// The likelihood has no interior maximum for this data.
    #[error("degenerate data: {0}")]
    DegenerateData(String),

    /// Too many bootstrap replicates failed to refit.
    #[error("{failed} of {replicates} bootstrap replicates failed to refit")]
    ReplicateFailures { failed: usize, replicates: usize },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
