use thiserror::Error;

/// Failures raised by direction construction, sampling and the limit combinators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LimitError {
    #[error("point {point} is outside the domain of direction {direction}")]
    Domain { point: String, direction: String },

    #[error("invalid parameter `{field}`: {reason}")]
    Param { field: &'static str, reason: String },

    #[error("no finite sample at chain step {step} (anchor {anchor})")]
    Evaluation { step: usize, anchor: String },

    #[error("no probed anchor keeps |f - {limit}| <= {epsilon}")]
    CertificationFailure { epsilon: f64, limit: f64 },

    #[error("net is not monotone on the probed tail: f({first}) = {first_value}, f({second}) = {second_value}")]
    NotMonotone {
        first: String,
        first_value: f64,
        second: String,
        second_value: f64,
    },

    #[error("ordering f <= g <= h fails at {witness}")]
    OrderingViolated { witness: String },

    #[error("ordering f <= g <= h could not be confirmed within the probe budget")]
    OrderingUnverified,

    #[error("outer limits disagree: lim f = {lower}, lim h = {upper}")]
    SandwichGap { lower: f64, upper: f64 },

    #[error("denominator limit {limit} is zero within tolerance")]
    ZeroDenominatorLimit { limit: f64 },

    #[error("operand `{operand}` does not converge ({verdict})")]
    OperandDiverges { operand: String, verdict: String },
}

pub type Result<T> = std::result::Result<T, LimitError>;
