//! Exact symbolic and numeric verification toolkit for pseudotoric
//! structures on two-step flag varieties and smooth quadrics.
//!
//! The crate is organised in layers: `exactfield` (exact polynomial and
//! rational-function arithmetic), `forms` (exterior algebra over that
//! field), `models` (the charts of the three families), `symverify`
//! (symbolic identity suites), `numsym` (numeric certification of the
//! Lagrangian torus fibrations) and `combinat` (tables, non-free loci,
//! wall clouds, superpotentials).

pub mod combinat;
pub mod error;
pub mod exactfield;
pub mod forms;
pub mod models;
pub mod numsym;
pub mod symverify;

pub use error::{Error, Result};

/// Execution strategy for the embarrassingly parallel suites. `Parallel`
/// uses a rayon pool when the `parallel` feature is enabled and silently
/// degrades to sequential execution otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExecMode {
    Parallel,
    Sequential,
}

impl ExecMode {
    /// Maps `f` over `0..count`, in parallel when requested and available.
    pub fn run<T, F>(self, count: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == ExecMode::Parallel {
            use rayon::prelude::*;
            return (0..count).into_par_iter().map(f).collect();
        }
        (0..count).map(f).collect()
    }
}

/// Schema version stamped into every serialized report.
pub const SCHEMA_VERSION: u32 = 1;
