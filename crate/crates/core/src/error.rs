use crate::phenotype::Phenotype;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{what} out of range: {value} (allowed {min}..={max})")]
    Bounds {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },

    #[error("invalid genotype: {0}")]
    InvalidGenotype(String),

    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown gate function `{0}`")]
    UnknownGate(String),

    #[error("gate function {0} is not in the active gate set")]
    GateNotInSet(String),

    #[error("genotype has no mutable loci")]
    NoMutableLoci,

    /// An estimator ran out of budget before finding the requested number of
    /// genotypes. `estimate` is the value computed over what was found.
    #[error("partial result for {phenotype}: found {achieved} of {requested} genotypes")]
    Partial {
        phenotype: Phenotype,
        achieved: usize,
        requested: usize,
        estimate: Option<f64>,
    },

    #[error("resource limit: {what} needs {required}, limit is {limit}")]
    Resource {
        what: &'static str,
        required: u128,
        limit: u128,
    },

    #[error("no circuit with at most {max_gates} gates found for {phenotype}")]
    NotFound {
        phenotype: Phenotype,
        max_gates: usize,
    },

    #[error("row subsets overlap")]
    Overlap,

    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(&'static str),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed table: {0}")]
    Table(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidGenotype(msg.into())
    }

    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Partial { .. } => 2,
            Error::Resource { .. } => 3,
            _ => 1,
        }
    }
}
