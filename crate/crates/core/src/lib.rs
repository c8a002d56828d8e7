//! Exact interval-configuration machinery for the extremal density problem.
//!
//! Everything here works over exact rationals: finite unions of open
//! intervals, configurations `(-inf, 0) ∪ body`, 1-periodic sets, and the
//! density function `omega ↦ λ(S ∩ (c - omega, c + omega)) / 2omega`, which
//! is piecewise monotone between critical radii and can therefore be
//! analysed exactly.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod bounds;
pub mod constructions;
pub mod density;
mod error;
pub mod exact;
pub mod interval;
pub mod periodic;
pub mod poly;
pub mod region;
pub mod report;
pub mod verifier;
pub mod zeta;

pub use error::{Error, Result};
pub use exact::Rational;
pub use interval::{Configuration, Interval, IntervalSet};
pub use periodic::PeriodicSet;
pub use region::Region;
pub use report::{Finding, FindingStatus, Outcome, VerificationReport};
