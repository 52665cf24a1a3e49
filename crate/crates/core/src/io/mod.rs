//! Run configuration, binary snapshots and subcommand orchestration.

mod config;
mod runner;
mod snapshot;

pub use config::{
    parse_config, AiryConfig, BilinearConfig, ChecksConfig, CoeffsConfig, CovConfig, GridConfig, InitConfig,
    IntegratorConfig, KindName, ModelConfig, OutputConfig, RunConfig, ScalingConfig, ScatteringConfig,
    StrichartzConfig,
};
pub use runner::{
    coefficient_table, is_complete, run, CheckOutcome, RunReport, Subcommand, CHECKS_FILE, DIAGNOSTICS_FILE,
    DONE_FILE, MANIFEST_FILE,
};
pub use snapshot::{decode_snapshot, encode_snapshot, read_snapshot, write_snapshot, SNAPSHOT_MAGIC, SNAPSHOT_VERSION};
