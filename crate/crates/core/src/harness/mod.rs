//! Scenario configuration, Monte-Carlo execution, baseline receivers,
//! metrics and export.

pub mod config;
pub mod export;
pub mod receivers;
pub mod run;
pub mod scenario;

pub use config::{
    AlgorithmKind, ChannelEstimation, ChannelProfileConfig, InterfererPowers, Mode, ReceiverKind,
    ScenarioConfig, StepConfig,
};
pub use export::{
    export_campaign, export_series, export_sweep, read_series_csv, Format, SeriesRow,
};
pub use receivers::{build_receiver, pd_projection, rake_output, triangular_kernel, Rake};
pub use run::{
    run_campaign, run_sweep, run_trial, Campaign, MetricSeries, Summary, SweepAxis, SweepPoint,
};
pub use scenario::{Observation, Scenario};
