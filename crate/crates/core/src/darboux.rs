//! Sampled Darboux lower/upper sums and the bracket cross-check.
//!
//! True per-cell infima and suprema are uncomputable for black-box
//! integrands, so both are approximated by sampling: each cell is
//! evaluated at its endpoints, its tag, and a deterministic set of extra
//! points. Because the tag is always among the samples, the sampled
//! bracket contains the partition's Riemann sum by construction:
//! `lower ≤ S(f, P) ≤ upper`.

use crate::error::{Error, Result};
use crate::gauge::GaugeSequence;
use crate::integrand::Integrand;
use crate::interval::Interval;
use crate::integrator::ConvergenceReport;
use crate::partition::TaggedPartition;
use crate::partitioner::{cousin_partition, PartitionBudget, TagPolicy};
use crate::seeded::{derive, SeedStream};
use crate::tag::Tag;

/// Sampled lower and upper Darboux sums for `f` over `partition`.
///
/// Per cell, `samples_per_cell` points are used: both endpoints, the tag,
/// and `samples_per_cell − 3` further points drawn deterministically from
/// `seed` (so results are reproducible across runs). Requires
/// `samples_per_cell >= 2`; endpoints and tag are always included.
pub fn darboux_sums(
    f: &Integrand,
    partition: &TaggedPartition,
    samples_per_cell: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    assert!(samples_per_cell >= 2, "need at least two samples per cell");
    let domain = f.domain();
    if !partition.interval().is_subinterval_of(&domain) {
        return Err(Error::EvalDomain {
            name: f.name().to_string(),
            domain_a: domain.a(),
            domain_b: domain.b(),
            at: partition.interval().a(),
        });
    }
    let mut lower = 0.0;
    let mut upper = 0.0;
    for (i, cell) in partition.cells().iter().enumerate() {
        let mut cell_min = f.eval(&cell.tag);
        let mut cell_max = cell_min;
        for x in [cell.left, cell.right] {
            let v = f.eval(&Tag::new(x));
            cell_min = cell_min.min(v);
            cell_max = cell_max.max(v);
        }
        let extra = samples_per_cell.saturating_sub(3);
        if extra > 0 {
            let mut stream = SeedStream::new(derive(seed, i as u64));
            for _ in 0..extra {
                let x = stream.next_in(cell.left, cell.right);
                let v = f.eval(&Tag::new(x));
                cell_min = cell_min.min(v);
                cell_max = cell_max.max(v);
            }
        }
        let w = cell.right - cell.left;
        lower += cell_min * w;
        upper += cell_max * w;
    }
    Ok((lower, upper))
}

/// Cross-checks a driver report against sampled Darboux brackets.
///
/// One fine partition per recorded gauge index is regenerated (hint-first
/// random tags, seeds derived from `seed`), its bracket computed, and the
/// check passes when:
///
/// * at the final index the estimate lies inside the bracket, with slack
///   `2·final gap` plus rounding headroom (the estimate comes from other
///   partitions of the same gauge, so it can sit a gap away), and
/// * the bracket width never grows by more than 10% from one index to the
///   next.
pub fn darboux_bracket_check(
    f: &Integrand,
    gauges: &GaugeSequence,
    interval: Interval,
    report: &ConvergenceReport,
    samples_per_cell: usize,
    seed: u64,
) -> Result<bool> {
    let budget = PartitionBudget::default();
    let mut widths = Vec::new();
    let mut final_bracket = None;
    for n in 1..=report.stopped_at {
        let policy = TagPolicy::hint_first(TagPolicy::RandomUniform {
            seed: derive(seed, 0xDA5B * n as u64),
        });
        let partition = cousin_partition(&gauges.at(n).halved(), interval, &policy, &budget)?;
        let (lower, upper) = darboux_sums(f, &partition, samples_per_cell, derive(seed, n as u64))?;
        widths.push(upper - lower);
        if n == report.stopped_at {
            final_bracket = Some((lower, upper));
        }
    }
    let (lower, upper) = final_bracket.expect("report has at least one index");
    let slack = 2.0 * report.final_gap() + 1e-12 * (1.0 + report.estimate.abs());
    let estimate_inside = lower - slack <= report.estimate && report.estimate <= upper + slack;
    let non_increasing = widths.windows(2).all(|w| w[1] <= w[0] * 1.10);
    Ok(estimate_inside && non_increasing)
}
