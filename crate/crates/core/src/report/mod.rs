//! Parameter sweeps over `(n, λ)` and their table / CSV rendering.

mod config;
mod render;
mod sweep;

pub use config::{parse_config, ConfigError, OracleMode, OutputFormat, SweepConfig, CONFIG_KEYS};
pub use render::{csv_header, render, series_csv};
pub use sweep::{
    classify_cell, exact_series, run_sweep, CellFlag, OracleCell, PadeCell, ResultRow, ORACLE_PLATEAU_TOLERANCE,
    RSPT_ORACLE_BASIS, TRUNCATED_ORDER,
};
