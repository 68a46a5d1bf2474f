use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("cannot place {count} stimuli of size {k} in {n} neurons with pairwise overlap <= {delta}")]
    InfeasibleStimuli {
        n: usize,
        k: usize,
        count: usize,
        delta: usize,
    },

    #[error("unknown area id {0}")]
    UnknownArea(usize),

    #[error("invalid wiring: {0}")]
    Wiring(String),

    #[error("conflicting gate actions on area {area} after round {round}")]
    GateConflict { area: usize, round: u64 },

    #[error("index {index} out of range 0..{len}")]
    OutOfRange { index: usize, len: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbol(char),

    #[error("tape half is empty")]
    EmptyTape,

    #[error("snapshot: {0}")]
    Snapshot(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
