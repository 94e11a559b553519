//! Residual bounds for fine subpartitions.
//!
//! For a fine partition `P` and any subset `P*` of its cells, the sum-form
//! residual `|S(f,P*) − Σ per-cell ∫f|` stays within the gauge's agreement
//! tolerance `ε`, and the absolute-form residual
//! `Σ |f(t_i)·w_i − per-cell ∫f|` within `2ε`.
//!
//! The tolerance `ε` for index `n` is probed as the sum *diameter* at the
//! realized gauge: partitions are built under deliberately extreme
//! policies (left tags, right tags, midpoint, and two random draws) and
//! the largest pairwise sum gap is taken. A 25% slack covers the sampling
//! shortfall of that probe. Per-cell integrals come from the declared
//! antiderivative, never from the driver.

use std::ops::RangeInclusive;

use crate::error::Result;
use crate::gauge::GaugeSequence;
use crate::integrand::Integrand;
use crate::interval::Interval;
use crate::partitioner::{cousin_partition, subpartition_sample, PartitionBudget, TagPolicy};
use crate::seeded::{derive, SeedStream};
use crate::sums::riemann_sum;
use crate::tag::Tag;

use super::{Harness, PropertyReport, ReportBuilder};

const SLACK: f64 = 0.25;
/// Float-dust floor so exactly-zero residuals compare cleanly.
const DUST: f64 = 1e-13;

fn diameter_policies(seed: u64) -> Vec<TagPolicy> {
    vec![
        TagPolicy::LeftEndpoint,
        TagPolicy::RightEndpoint,
        TagPolicy::Midpoint,
        TagPolicy::RandomUniform {
            seed: derive(seed, 1),
        },
        TagPolicy::RandomUniform {
            seed: derive(seed, 2),
        },
    ]
}

/// Largest pairwise sum gap over partitions built with the extreme-policy
/// set — the observable stand-in for the gauge's agreement tolerance.
fn probe_epsilon(
    f: &Integrand,
    gauges: &GaugeSequence,
    interval: Interval,
    n: u32,
    seed: u64,
) -> Result<f64> {
    let budget = PartitionBudget::default();
    let gauge = gauges.at(n).halved();
    let mut sums = Vec::new();
    for policy in diameter_policies(seed) {
        let p = cousin_partition(&gauge, interval, &policy, &budget)?;
        sums.push(riemann_sum(f, &p)?);
    }
    let mut gap: f64 = 0.0;
    for (i, a) in sums.iter().enumerate() {
        for b in &sums[i + 1..] {
            gap = gap.max((a - b).abs());
        }
    }
    Ok(gap)
}

/// Checks the two residual bounds over `trials` random subpartitions for
/// every gauge index in `indices`.
#[allow(clippy::too_many_arguments)]
pub fn check_henstock_lemma(
    harness: &Harness,
    f: &Integrand,
    primitive: Option<&Integrand>,
    gauges: &GaugeSequence,
    interval: Interval,
    indices: RangeInclusive<u32>,
    trials: u64,
    seed: u64,
) -> Result<PropertyReport> {
    let primitive = primitive.ok_or_else(|| crate::error::Error::OracleMissing {
        id: f.name().to_string(),
    })?;
    let mut builder = ReportBuilder::new(format!("henstock-residuals[{}]", f.name()));
    builder.tolerance("slack", SLACK);

    let budget = PartitionBudget::default();
    for n in indices {
        let eps = probe_epsilon(f, gauges, interval, n, derive(seed, n as u64))?;
        builder.tolerance(&format!("eps_{n}"), eps);
        let gauge = gauges.at(n).halved();
        for trial in 0..trials {
            let case_seed = derive(seed, (n as u64) << 32 | trial);
            let outcome = run_trial(
                harness, f, primitive, &gauge, interval, &budget, eps, case_seed,
            );
            builder.case(case_seed, outcome);
        }
    }
    Ok(builder.finish())
}

#[allow(clippy::too_many_arguments)]
fn run_trial(
    harness: &Harness,
    f: &Integrand,
    primitive: &Integrand,
    gauge: &crate::gauge::Gauge,
    interval: Interval,
    budget: &PartitionBudget,
    eps: f64,
    case_seed: u64,
) -> Result<Vec<String>> {
    let policy = TagPolicy::RandomUniform {
        seed: derive(case_seed, 1),
    };
    let partition = cousin_partition(gauge, interval, &policy, budget)?;

    // Random subset of cells (about half), at least one cell.
    let mut stream = SeedStream::new(derive(case_seed, 2));
    let mut keep: Vec<usize> = (0..partition.len())
        .filter(|_| stream.next_unit() < 0.5)
        .collect();
    if keep.is_empty() {
        keep.push(0);
    }
    let cells = subpartition_sample(&partition, &keep);

    let cell_integral =
        |l: f64, r: f64| primitive.eval(&Tag::new(r)) - primitive.eval(&Tag::new(l));

    let mut s_star = 0.0;
    let mut integral_sum = 0.0;
    let mut residual_2 = 0.0;
    for cell in &cells {
        let contribution = f.eval(&cell.tag) * (cell.right - cell.left);
        let exact = cell_integral(cell.left, cell.right);
        s_star += contribution;
        integral_sum += exact;
        residual_2 += (contribution - exact).abs();
    }
    // The bias hook shifts the sum the way a broken accumulator would.
    s_star += harness.bias();
    let residual_1 = (s_star - integral_sum).abs();

    let bound_1 = eps * (1.0 + SLACK) + DUST;
    let bound_2 = 2.0 * eps * (1.0 + SLACK) + DUST;
    let mut violations = Vec::new();
    if residual_1 > bound_1 {
        violations.push(format!(
            "sum-form residual {residual_1:.3e} exceeds {bound_1:.3e} ({} of {} cells)",
            cells.len(),
            partition.len()
        ));
    }
    if residual_2 > bound_2 {
        violations.push(format!(
            "absolute-form residual {residual_2:.3e} exceeds {bound_2:.3e}"
        ));
    }
    Ok(violations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::default_gauge_sequence;

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    #[test]
    fn constant_integrand_has_zero_residuals() {
        let f = Integrand::from_fn("c", unit(), |_| 3.0);
        let primitive = Integrand::from_fn("cx", unit(), |x| 3.0 * x);
        let report = check_henstock_lemma(
            &Harness::new(),
            &f,
            Some(&primitive),
            &default_gauge_sequence(unit()),
            unit(),
            2..=4,
            10,
            9,
        )
        .unwrap();
        assert!(report.passed, "{:?}", report.failures);
    }

    #[test]
    fn linear_and_quadratic_residuals_stay_bounded() {
        let gs = default_gauge_sequence(unit());
        for (f, primitive) in [
            (
                Integrand::from_fn("x", unit(), |x| x),
                Integrand::from_fn("x^2/2", unit(), |x| x * x / 2.0),
            ),
            (
                Integrand::from_fn("x^2", unit(), |x| x * x),
                Integrand::from_fn("x^3/3", unit(), |x| x * x * x / 3.0),
            ),
        ] {
            let report = check_henstock_lemma(
                &Harness::new(),
                &f,
                Some(&primitive),
                &gs,
                unit(),
                3..=6,
                15,
                1234,
            )
            .unwrap();
            assert!(report.passed, "{}: {:?}", f.name(), report.failures);
        }
    }

    #[test]
    fn full_partition_residual_is_distance_to_integral() {
        // With every cell kept, the sum-form residual reduces to
        // |S(f,P) − ∫f| over the whole interval.
        let f = Integrand::from_fn("x", unit(), |x| x);
        let primitive = Integrand::from_fn("x^2/2", unit(), |x| x * x / 2.0);
        let gauge = default_gauge_sequence(unit()).at(4).halved();
        let p = cousin_partition(
            &gauge,
            unit(),
            &TagPolicy::RandomUniform { seed: 5 },
            &PartitionBudget::default(),
        )
        .unwrap();
        let s = riemann_sum(&f, &p).unwrap();
        let all: Vec<usize> = (0..p.len()).collect();
        let cells = subpartition_sample(&p, &all);
        let total: f64 = cells
            .iter()
            .map(|c| primitive.eval_at(c.right) - primitive.eval_at(c.left))
            .sum();
        assert!((total - 0.5).abs() < 1e-12);
        assert!((s - 0.5).abs() >= (s - total).abs() - 1e-12);
    }

    #[test]
    fn bias_is_detected() {
        let f = Integrand::from_fn("x", unit(), |x| x);
        let primitive = Integrand::from_fn("x^2/2", unit(), |x| x * x / 2.0);
        let report = check_henstock_lemma(
            &Harness::with_estimate_bias(1.0),
            &f,
            Some(&primitive),
            &default_gauge_sequence(unit()),
            unit(),
            3..=4,
            5,
            31,
        )
        .unwrap();
        assert!(!report.passed);
    }

    #[test]
    fn missing_antiderivative_is_an_error() {
        let f = Integrand::from_fn("x", unit(), |x| x);
        let err = check_henstock_lemma(
            &Harness::new(),
            &f,
            None,
            &default_gauge_sequence(unit()),
            unit(),
            3..=4,
            5,
            31,
        )
        .unwrap_err();
        assert!(matches!(err, crate::error::Error::OracleMissing { .. }));
    }
}
