use thiserror::Error;

/// Errors shared across the solver pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid game spec: {0}")]
    InvalidSpec(String),

    #[error("technique {technique} out of range ({techniques} techniques)")]
    TechniqueOutOfRange { technique: usize, techniques: usize },

    #[error("key {key} out of range ({keys} keys per technique)")]
    KeyOutOfRange { key: usize, keys: usize },

    #[error("state index {index} out of range ({states} states)")]
    StateOutOfRange { index: usize, states: usize },

    #[error("{cells} bimatrix cells exceed the budget of {max_cells}")]
    BudgetExceeded { cells: u128, max_cells: u64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("brute-force time list is empty")]
    EmptyBruteForceTimes,

    #[error("slot margin {0} outside (0, 1]")]
    InvalidMargin(f64),

    #[error("initial label {label} outside [1, {labels}]")]
    LabelOutOfRange { label: usize, labels: usize },

    #[error("game of {rows}x{cols} exceeds the support-enumeration limit {max_dim}")]
    OracleDimension {
        rows: usize,
        cols: usize,
        max_dim: usize,
    },

    #[error("pivot count exceeded bound {0}; lexicographic tie-breaking is broken")]
    PivotBound(usize),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("spec document: {0}")]
    Parse(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
