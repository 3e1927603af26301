use thiserror::Error;

/// Errors raised by the lattice constructions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented precondition of the operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// An alternating form is degenerate where it must not be.
    #[error("degenerate form: {0}")]
    Degenerate(String),

    /// A subgroup is not totally isotropic (the scaled form is not integral on its lifts).
    #[error("subgroup is not isotropic: {0}")]
    NotIsotropic(String),

    /// The adjoint of a lattice map does not carry the target lattice into the source lattice.
    #[error("adjoint is not integral: {0}")]
    AdjointNotIntegral(String),

    /// A group is too large for exhaustive subgroup enumeration.
    #[error("enumeration budget exceeded: group order {order} > budget {budget}")]
    Budget { order: u64, budget: u64 },

    /// A certified identity of a construction failed.
    #[error("certification failed for `{identity}`: {detail}")]
    Certification { identity: String, detail: String },

    /// Voltages do not generate Z/m, so the derived cover is disconnected.
    #[error("disconnected cover: {0}")]
    DisconnectedCover(String),

    /// A face of the base ribbon graph carries nonzero voltage (branched cover).
    #[error("ramified cover rejected: {0}")]
    Ramified(String),

    /// Input that is syntactically valid but not supported.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn certification(identity: &str, detail: impl Into<String>) -> Self {
        Error::Certification {
            identity: identity.to_string(),
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
