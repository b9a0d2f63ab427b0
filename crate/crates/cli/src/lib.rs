//! Support code for the `sweepjoin` command: synthetic data, CSV files,
//! oracle verification, benchmarks and reports.

pub mod bench;
pub mod dataset;
pub mod io;
pub mod report;
pub mod verify;

pub use bench::{batch_gnorf, bench, scaling, scan_benchmark, time_join, BenchError, BenchReport, BenchRow};
pub use dataset::{batch_dataset, gen_synthetic, DatasetSpec};
pub use io::{read_csv, read_pairs_csv, write_csv, write_pairs_csv, CsvError};
pub use report::{sequence_histogram, SequenceHistogram};
pub use verify::{verify_batch, verify_join, verify_pairs, VerifyOutcome};
