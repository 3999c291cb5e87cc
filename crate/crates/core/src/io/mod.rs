//! CSV interchange and run configuration.

mod config;
mod export;
mod timeseries;

pub use config::{
    parse_sweep, IntegrationConfig, KmdConfig, RunConfig, SamplingConfig, ScenarioConfig,
    StudyConfig, MANIFEST_FILE,
};
pub use export::{
    estimate_header, leave_one_out_table, spectrum_table, sweep_table, write_leave_one_out_csv,
    write_spectrum_csv, write_sweep_csv, write_text,
};
pub use timeseries::{
    format_value, parse_timeseries_csv, read_timeseries_csv, timeseries_csv, write_timeseries_csv,
    TIME_COLUMN, UNIFORMITY_TOLERANCE,
};
