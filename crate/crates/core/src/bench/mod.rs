//! Batch benchmark harness over a directory of PGM mammograms.

mod batch;
mod config;
mod dataset;
mod tables;

pub use batch::{
    edge_map_path, run_batch, AggregateRow, BatchSummary, RowError, RunConfig, AGGREGATE_HEADER,
};
pub use config::{parse_pairs, ConfigFile, DenominatorSpec};
pub use dataset::{scan_dataset, DatasetEntry};
pub use tables::render_tables;
