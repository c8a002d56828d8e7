//! File formats, sweeps and the `densitylab` command line on top of
//! `densitylab-core`.

pub mod cli;
pub mod formats;
pub mod sweep;

pub use densitylab_core as core;
