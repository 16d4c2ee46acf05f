use thiserror::Error;
use wimp_core::bounds::BoundsError;
use wimp_core::decomposition::{DecompositionError, Violation};
use wimp_core::exact::OracleError;
use wimp_core::experiment::ExperimentError;
use wimp_core::fpt_budget::BudgetError;
use wimp_core::fpt_indegree::FptError;
use wimp_core::generators::GeneratorError;
use wimp_core::graph::GraphError;
use wimp_core::weight::WeightError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    Resource(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Resource(_) => 4,
            CliError::Internal(_) => 70,
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::TooLarge { .. } => CliError::Resource(e.to_string()),
            OracleError::Weight(w) => w.into(),
        }
    }
}

impl From<WeightError> for CliError {
    fn from(e: WeightError) -> Self {
        CliError::Precondition(format!("{e} (try --wide)"))
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<Violation> for CliError {
    fn from(e: Violation) -> Self {
        CliError::Precondition(format!("invalid decomposition: {e}"))
    }
}

impl From<DecompositionError> for CliError {
    fn from(e: DecompositionError) -> Self {
        match e {
            DecompositionError::TooLargeForExact { .. } => CliError::Resource(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<FptError> for CliError {
    fn from(e: FptError) -> Self {
        match e {
            FptError::InvalidDecomposition(v) => v.into(),
            FptError::Weight(w) => w.into(),
            FptError::Infeasible => CliError::Internal(e.to_string()),
        }
    }
}

impl From<BudgetError> for CliError {
    fn from(e: BudgetError) -> Self {
        match e {
            BudgetError::InvalidDecomposition(v) => v.into(),
            BudgetError::Infeasible => CliError::Internal(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::Oracle(o) => o.into(),
            BoundsError::Weight(w) => w.into(),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<GeneratorError> for CliError {
    fn from(e: GeneratorError) -> Self {
        match e {
            GeneratorError::Weight(w) => w.into(),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::BadSize { got, .. } if got > 0 => CliError::Resource(e.to_string()),
            ExperimentError::BadSize { .. } => CliError::Usage(e.to_string()),
            ExperimentError::Generator(g) => g.into(),
            ExperimentError::Oracle(o) => o.into(),
        }
    }
}
