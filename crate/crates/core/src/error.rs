use crate::model::AgentId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point must have at least one coordinate")]
    EmptyPoint,

    #[error("coordinate {index} is not finite")]
    NonFiniteCoordinate { index: usize },

    #[error("{}{field} = {value}: {constraint}", agent.map(|a| format!("agent {a}: ")).unwrap_or_default())]
    Parameter {
        agent: Option<AgentId>,
        field: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("duplicate agent id {0}")]
    DuplicateId(AgentId),

    #[error("unknown agent id {0}")]
    UnknownAgent(AgentId),

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("engine already terminated ({0})")]
    Terminated(crate::engine::Termination),

    #[error("population of {size} exceeds the oracle limit of {limit} agents")]
    PopulationTooLarge { size: usize, limit: usize },

    #[error("cannot render dimension {0}: only 1-D and 2-D populations are drawn, projection is not supported")]
    RenderDimension(usize),

    #[error("{0}")]
    Invalid(String),

    #[error("{location}: {message}")]
    Format { location: String, message: String },
}

impl Error {
    /// Size or render guard violations, as opposed to bad input.
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::PopulationTooLarge { .. } | Error::RenderDimension(_))
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
