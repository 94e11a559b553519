use thiserror::Error;

/// Errors shared across the engine.
///
/// Partition-shape problems detected by [`crate::partition::TaggedPartition::validate`]
/// are *data* (a list of violations), not errors; this enum covers the
/// conditions under which an operation cannot produce a result at all.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid interval [{a}, {b}]: {reason}")]
    InvalidInterval { a: f64, b: f64, reason: String },

    #[error("invalid tag: {0}")]
    InvalidTag(String),

    #[error("gauge evaluated to a non-positive or non-finite value {value} at x = {at}")]
    GaugeNonPositive { at: f64, value: f64 },

    #[error("integrand `{name}` evaluated outside its domain [{domain_a}, {domain_b}] at {at}")]
    EvalDomain {
        name: String,
        domain_a: f64,
        domain_b: f64,
        at: f64,
    },

    #[error("cell index {index} out of range for partition with {len} cells")]
    CellIndexOutOfRange { index: usize, len: usize },

    #[error("tag {tag} of cell {index} lies on a cell boundary; nothing to split")]
    TagOnBoundary { index: usize, tag: f64 },

    #[error("cells {index} and {next} are not mergeable: {reason}")]
    NotMergeable {
        index: usize,
        next: usize,
        reason: String,
    },

    #[error(
        "bisection depth {max_depth} exceeded on [{left}, {right}] \
         (gauge {gauge} at the last candidate tag is below what the budget can honor)"
    )]
    DepthExceeded {
        left: f64,
        right: f64,
        max_depth: u32,
        gauge: f64,
    },

    #[error("Riemann sum is not finite (replicate {replicate} at gauge index {index})")]
    NonFiniteSum { index: u32, replicate: usize },

    #[error("catalog entry `{id}` has no reference value")]
    NoReference { id: String },

    #[error("no antiderivative oracle available for `{id}`")]
    OracleMissing { id: String },

    #[error("family is not pointwise monotone: {0}")]
    MonotonicityViolated(String),

    #[error("unknown catalog id `{0}`")]
    UnknownId(String),

    #[error("bad parameters for `{id}`: {reason}")]
    BadParams { id: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
