//! The sequential integration driver.
//!
//! For each gauge index `n` the driver builds several independent
//! `δ_n(x)`-fine partitions (replicates with derived seeds), records their
//! Riemann sums and the largest pairwise gap, and stops once the gap drops
//! below the Cauchy threshold `tau`. Certification by finitely many
//! replicates is the operational stand-in for "all fine partitions agree";
//! it is only informative when the tag policy actually randomizes across
//! replicates — deterministic policies produce identical replicates and a
//! vacuous zero gap.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauge::{Gauge, GaugeSequence};
use crate::integrand::Integrand;
use crate::interval::Interval;
use crate::parallel;
use crate::partitioner::{cousin_partition, PartitionBudget, TagPolicy};
use crate::seeded;
use crate::sums::riemann_sum;

/// When to stop driving the gauge sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StoppingRule {
    /// Cauchy-gap threshold; the run certifies once the max pairwise gap
    /// among replicate sums falls strictly below it.
    pub tau: f64,
    /// Last gauge index to try before reporting the run uncertified.
    pub max_index: u32,
    /// Independent partitions per gauge index (at least 2).
    pub replicates: usize,
}

impl StoppingRule {
    pub fn new(tau: f64, max_index: u32, replicates: usize) -> Self {
        assert!(tau > 0.0, "tau must be positive");
        assert!(max_index >= 1, "need at least one gauge index");
        assert!(replicates >= 2, "need at least two replicates per index");
        Self {
            tau,
            max_index,
            replicates,
        }
    }
}

impl Default for StoppingRule {
    fn default() -> Self {
        Self {
            tau: 1e-6,
            max_index: 40,
            replicates: 3,
        }
    }
}

/// The record of one driver run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConvergenceReport {
    /// Replicate Riemann sums, one inner list per gauge index.
    pub sums: Vec<Vec<f64>>,
    /// Max pairwise `|S(f,P_n) − S(f,Q_n)|` per gauge index.
    pub gaps: Vec<f64>,
    /// Mean of the final index's replicate sums.
    pub estimate: f64,
    /// Whether the final gap fell below `tau`.
    pub certified: bool,
    /// 1-based gauge index at which the run stopped.
    pub stopped_at: u32,
    /// Cells per partition, matching the shape of `sums`.
    pub cell_counts: Vec<Vec<u64>>,
}

impl ConvergenceReport {
    /// Final recorded Cauchy gap.
    pub fn final_gap(&self) -> f64 {
        *self.gaps.last().expect("a report records at least one index")
    }

    /// The first gauge index whose recorded gap is below `eps`.
    ///
    /// This is the constructive bridge back to the ε-δ formulation: the
    /// realized gauge at the returned index serves as a single gauge for
    /// which fine partitions were observed to agree within `eps`.
    pub fn first_index_with_gap_below(&self, eps: f64) -> Option<u32> {
        self.gaps
            .iter()
            .position(|g| *g < eps)
            .map(|i| i as u32 + 1)
    }
}

/// The fallback gauge sequence `δ_n = (b − a) / 2^n`, which reproduces
/// plain Riemann behavior: constant gauges, uniformly halved per index.
pub fn default_gauge_sequence(interval: Interval) -> GaugeSequence {
    let width = interval.width();
    GaugeSequence::new_decreasing(move |n| Gauge::constant(width * 0.5f64.powi(n as i32)))
}

fn replicate_salt(index: u32, replicate: usize) -> u64 {
    ((index as u64) << 32) ^ replicate as u64
}

/// Max pairwise absolute difference; 0.0 for fewer than two values.
fn max_pairwise_gap(values: &[f64]) -> f64 {
    let mut gap: f64 = 0.0;
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            gap = gap.max((a - b).abs());
        }
    }
    gap
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Builds the replicate partitions for one realized gauge and returns
/// `(sum, cells)` per replicate, in replicate order.
#[allow(clippy::too_many_arguments)]
fn run_replicates(
    f: &Integrand,
    realized_half: &Gauge,
    interval: Interval,
    policy: &TagPolicy,
    budget: &PartitionBudget,
    seed: u64,
    index: u32,
    replicates: usize,
) -> Result<Vec<(f64, u64)>> {
    let jobs: Vec<usize> = (0..replicates).collect();
    let results = parallel::map_collect(jobs, |r| {
        let rep_policy = policy.reseeded(seeded::derive(seed, replicate_salt(index, r)));
        let partition = cousin_partition(realized_half, interval, &rep_policy, budget)?;
        let sum = riemann_sum(f, &partition)?;
        if !sum.is_finite() {
            return Err(Error::NonFiniteSum {
                index,
                replicate: r,
            });
        }
        Ok((sum, partition.len() as u64))
    });
    results.into_iter().collect()
}

/// Drives `f` over the gauge sequence on `interval` until the replicate
/// sums at some index agree within `rule.tau`, or `rule.max_index` is
/// reached (an uncertified report means "unknown", not "not integrable").
///
/// Partitions are built against the *halved* realized gauge, so they are
/// width-fine for `δ_n` itself in the strict sense.
pub fn integrate_sequential(
    f: &Integrand,
    gauges: &GaugeSequence,
    interval: Interval,
    rule: &StoppingRule,
    policy: &TagPolicy,
    seed: u64,
) -> Result<ConvergenceReport> {
    assert!(rule.replicates >= 2, "stopping rule needs >= 2 replicates");
    assert!(rule.tau > 0.0, "stopping rule needs a positive tau");
    if !interval.is_subinterval_of(&f.domain()) {
        return Err(Error::EvalDomain {
            name: f.name().to_string(),
            domain_a: f.domain().a(),
            domain_b: f.domain().b(),
            at: interval.a(),
        });
    }
    let budget = PartitionBudget::default();
    let mut sums = Vec::new();
    let mut gaps = Vec::new();
    let mut cell_counts = Vec::new();
    let mut certified = false;
    let mut stopped_at = 0;

    for n in 1..=rule.max_index {
        let realized_half = gauges.at(n).halved();
        let results = run_replicates(
            f,
            &realized_half,
            interval,
            policy,
            &budget,
            seed,
            n,
            rule.replicates,
        )?;
        let index_sums: Vec<f64> = results.iter().map(|(s, _)| *s).collect();
        let index_cells: Vec<u64> = results.iter().map(|(_, c)| *c).collect();
        let gap = max_pairwise_gap(&index_sums);
        sums.push(index_sums);
        gaps.push(gap);
        cell_counts.push(index_cells);
        stopped_at = n;
        if gap < rule.tau {
            certified = true;
            break;
        }
    }

    let estimate = mean(sums.last().expect("at least one index ran"));
    Ok(ConvergenceReport {
        sums,
        gaps,
        estimate,
        certified,
        stopped_at,
        cell_counts,
    })
}

/// Integrates `f` over the subinterval `sub` — the restriction driver.
/// With `sub` equal to the full interval this is exactly
/// [`integrate_sequential`], seeds and all.
pub fn restrict(
    f: &Integrand,
    gauges: &GaugeSequence,
    sub: Interval,
    rule: &StoppingRule,
    policy: &TagPolicy,
    seed: u64,
) -> Result<ConvergenceReport> {
    integrate_sequential(f, gauges, sub, rule, policy, seed)
}

/// Max pairwise gap over `replicates` independently seeded `g`-fine
/// partitions of `interval` under the (reseeded) policy.
pub fn cauchy_gap(
    f: &Integrand,
    gauge: &Gauge,
    interval: Interval,
    replicates: usize,
    policy: &TagPolicy,
    seed: u64,
) -> Result<f64> {
    assert!(replicates >= 2, "a gap needs at least two replicates");
    let results = run_replicates(
        f,
        &gauge.halved(),
        interval,
        policy,
        &PartitionBudget::default(),
        seed,
        0,
        replicates,
    )?;
    let sums: Vec<f64> = results.into_iter().map(|(s, _)| s).collect();
    Ok(max_pairwise_gap(&sums))
}
