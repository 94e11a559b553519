//! # gaugelab-core
//!
//! A gauge-based numerical integration engine for the sequential Henstock
//! integral, together with an executable harness that checks the
//! integral's defining properties on a catalog of well-behaved and
//! pathological integrands.
//!
//! The pipeline:
//!
//! 1. [`gauge::Gauge`] — a strictly positive width function `δ(x)`
//!    prescribing how narrow a subinterval tagged at `x` must be, and
//!    [`gauge::GaugeSequence`] — a decreasing family `δ_n(x)`.
//! 2. [`partitioner::cousin_partition`] — constructs a `δ(x)`-fine tagged
//!    partition of a compact interval by candidate-tag bisection.
//! 3. [`integrator::integrate_sequential`] — drives Riemann sums over the
//!    gauge sequence, replicating partitions per index and stopping when
//!    independent replicates agree to within a Cauchy-gap threshold.
//! 4. [`harness`] — encodes the integral's algebraic, fundamental-theorem,
//!    convergence and residual properties as pass/fail checks.
//!
//! Determinism is a contract throughout: every random choice is keyed by
//! explicit seeds, Riemann sums are accumulated strictly left to right,
//! and parallel execution (the `parallel` feature, on by default) yields
//! bit-identical results to sequential execution.

pub mod catalog;
pub mod darboux;
pub mod error;
pub mod gauge;
pub mod harness;
pub mod integrand;
pub mod integrator;
pub mod interval;
pub mod partition;
pub mod partitioner;
pub mod seeded;
pub mod sums;
pub mod tag;

mod parallel;

pub use error::{Error, Result};
pub use gauge::{Gauge, GaugeKind, GaugeSequence};
pub use integrand::{Integrand, Provenance, Reference};
pub use integrator::{cauchy_gap, integrate_sequential, restrict, ConvergenceReport, StoppingRule};
pub use interval::Interval;
pub use partition::{Cell, PartitionValidation, TaggedPartition, Violation};
pub use partitioner::{cousin_partition, subpartition_sample, PartitionBudget, TagPolicy};
pub use sums::{is_delta_fine, riemann_sum, Fineness};
pub use tag::{enumeration_index, rational_enumeration, Rational, Tag};
