use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KgError {
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("structural constraint violated for case {case}: {constraint}")]
    StructuralConstraint {
        case: &'static str,
        constraint: &'static str,
    },

    #[error("root refinement did not converge in [{lo}, {hi}] after {iterations} iterations")]
    Convergence { lo: f64, hi: f64, iterations: usize },

    #[error("no eigenvalue with {nodes} nodes found in [{lo}, {hi}]")]
    NoEigenvalue { nodes: usize, lo: f64, hi: f64 },

    #[error("fall to center: {0}")]
    FallToCenter(String),

    #[error("integration overflow at r={r}")]
    Overflow { r: f64 },

    #[error("integrand not square-integrable: {0}")]
    NotIntegrable(String),

    #[error("quadrature did not converge: estimated relative error {estimate:e}")]
    Quadrature { estimate: f64 },

    #[error("{stage} stage failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<KgError>,
    },
}

impl KgError {
    /// Innermost error beneath any stage labels.
    pub fn root_cause(&self) -> &KgError {
        match self {
            KgError::Stage { source, .. } => source.root_cause(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, KgError>;
