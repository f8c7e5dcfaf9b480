//! Cryptographic metrics for n-bit to m-bit tables (n, m ≤ 16).

pub mod anf;
pub mod metrics;
pub mod naive;
pub mod report;
pub mod sidechannel;
pub mod walsh;

use thiserror::Error;

pub use anf::{anf, AnfTable};
pub use metrics::{
    algebraic_degree, cycle_structure, ddt_row, differential_uniformity, fixed_points,
    nonlinearity, DdtSummary,
};
pub use report::{analyze, parse_metrics, AnalysisOptions, Metric, MetricsReport};
pub use sidechannel::{snr_dpa, transparency_order, Snr, TransparencyOrder};
pub use walsh::{component_function, coordinate_spectra, fwht, ComponentTT, WalshSpectrum};

/// Optional progress sink for long sweeps; receives short status lines.
pub type Progress<'a> = Option<&'a (dyn Fn(&str) + Sync)>;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("transform length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("metric needs n = m, table is {n}-bit to {m}-bit")]
    WidthMismatch { n: u32, m: u32 },
    #[error("table is not a permutation")]
    NotBijective,
    #[error("all coordinate spectra vanish")]
    DegenerateSnr,
    #[error("worker count must be at least 1")]
    Workers,
    #[error("thread pool: {0}")]
    Pool(String),
}
