//! Benchmark harness: throughput/efficiency formulas, the
//! baseline-vs-accelerated cycle comparison suite, and randomized
//! cross-validation of the extension datapath against the reference
//! model.

pub mod metrics;
pub mod suite;

pub use metrics::{
    area_efficiency, energy_efficiency, throughput_mbps, MetricInputs, MetricReport,
    BLOCK_BITS, DEFAULT_FMAX_MHZ,
};
pub use suite::{
    cross_validate, cross_validate_sequential, published_reference, run_benchmark_suite,
    run_kats, BenchResult, FuzzReport, KatReport, PublishedRow, SuiteConfig, SuiteError,
    SuiteReport, SCHEMA_VERSION,
};
