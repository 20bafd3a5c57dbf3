use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty lattice: p_max = {p_max} is below the first shell radius 2π")]
    EmptyLattice { p_max: f64 },

    #[error("non-finite value in {context}")]
    NonFinite { context: String },

    #[error("integral appears divergent: {0}")]
    Divergent(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("root finding failed: {0}")]
    Solver(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("outside the domain of definition: {0}")]
    Domain(String),

    #[error("consistency check failed: {0}")]
    Consistency(String),
}

impl Error {
    /// Short machine-readable tag, used in CLI error records and sweep rows.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyLattice { .. } => "empty_lattice",
            Error::NonFinite { .. } => "non_finite",
            Error::Divergent(_) => "divergent",
            Error::Quadrature(_) => "quadrature",
            Error::Solver(_) => "solver",
            Error::Input(_) => "input",
            Error::Precondition(_) => "precondition",
            Error::Domain(_) => "domain",
            Error::Consistency(_) => "consistency",
        }
    }

    /// Prefix the message with the name of the term or stage that failed.
    pub fn context(self, what: &str) -> Error {
        match self {
            Error::NonFinite { context } => Error::NonFinite {
                context: format!("{what}: {context}"),
            },
            Error::Divergent(m) => Error::Divergent(format!("{what}: {m}")),
            Error::Quadrature(m) => Error::Quadrature(format!("{what}: {m}")),
            Error::Solver(m) => Error::Solver(format!("{what}: {m}")),
            Error::Input(m) => Error::Input(format!("{what}: {m}")),
            Error::Precondition(m) => Error::Precondition(format!("{what}: {m}")),
            Error::Domain(m) => Error::Domain(format!("{what}: {m}")),
            Error::Consistency(m) => Error::Consistency(format!("{what}: {m}")),
            e @ Error::EmptyLattice { .. } => e,
        }
    }
}

pub(crate) fn ensure_finite(x: f64, context: impl FnOnce() -> String) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonFinite { context: context() })
    }
}
