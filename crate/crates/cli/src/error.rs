pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{source_name}: {message}")]
    Schema { source_name: String, message: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] shiftlab_core::Error),
    #[error("spherical construction stalled at ({}, {})", .0.0, .0.1)]
    Stalled((usize, usize)),
    #[error("predicate is not monotone on [{lo}, {hi}]: {detail}")]
    NotMonotone { lo: String, hi: String, detail: String },
    #[error("denominator of {value} at `{path}` has {bits} bits, above the cap of {cap}")]
    DenominatorCap {
        value: String,
        path: String,
        bits: u64,
        cap: u64,
    },
}
