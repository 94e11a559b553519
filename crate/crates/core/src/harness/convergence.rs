//! Limit interchange for uniformly and monotonically convergent families.

use std::sync::Arc;

use crate::catalog::MonotoneDirection;
use crate::error::{Error, Result};
use crate::integrand::Integrand;
use crate::integrator::{default_gauge_sequence, StoppingRule};
use crate::interval::Interval;
use crate::seeded::{derive, SeedStream};
use crate::tag::Tag;

use super::{Harness, PropertyReport, ReportBuilder};

/// A `k`-indexed family of integrands.
#[derive(Clone)]
pub struct FamilySpec {
    pub name: String,
    pub build: Arc<dyn Fn(u32) -> Result<Integrand> + Send + Sync>,
}

impl FamilySpec {
    pub fn new(
        name: impl Into<String>,
        build: impl Fn(u32) -> Result<Integrand> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            build: Arc::new(build),
        }
    }
}

/// For a family converging uniformly to `limit` with declared sup-norm
/// rate `rate(k)`, checks `|∫f_k − ∫limit| ≤ (b−a)·rate(k) + 2τ` for
/// `k = 1..=k_max`, and that the declared bound itself is non-increasing
/// (the integrals approach the limit "monotonically in bound").
#[allow(clippy::too_many_arguments)]
pub fn check_uniform_convergence(
    harness: &Harness,
    family: &FamilySpec,
    limit: &Integrand,
    rate: impl Fn(u32) -> f64,
    interval: Interval,
    k_max: u32,
    tau: f64,
    seed: u64,
) -> PropertyReport {
    let mut builder = ReportBuilder::new(format!("uniform-convergence[{}]", family.name));
    builder.tolerance("tau", tau);
    builder.tolerance("per_k", 2.0 * tau);

    let rule = StoppingRule::new(tau, 30, 6);
    let gs = default_gauge_sequence(interval);
    let limit_run = harness.estimate(limit, &gs, interval, &rule, derive(seed, 0));
    let int_limit = match limit_run {
        Ok((v, _)) => v,
        Err(e) => {
            builder.case(seed, Err(e));
            return builder.finish();
        }
    };

    let mut prev_rate = f64::INFINITY;
    for k in 1..=k_max {
        let case_seed = derive(seed, k as u64);
        let r_k = rate(k);
        let outcome = (family.build)(k).and_then(|f_k| {
            let (int_k, _) = harness.estimate(&f_k, &gs, interval, &rule, case_seed)?;
            let mut violations = Vec::new();
            let bound = interval.width() * r_k + 2.0 * tau;
            let diff = (int_k - int_limit).abs();
            if diff > bound {
                violations.push(format!(
                    "k={k}: |∫f_k − ∫limit| = {diff:.3e} exceeds (b−a)·rate + 2τ = {bound:.3e}"
                ));
            }
            if r_k > prev_rate {
                violations.push(format!(
                    "k={k}: declared rate {r_k:.3e} is not non-increasing (previous {prev_rate:.3e})"
                ));
            }
            Ok(violations)
        });
        prev_rate = r_k;
        builder.case(case_seed, outcome);
    }
    builder.finish()
}

/// For a pointwise-monotone family with declared limit integral `L` and
/// signed tail `t(k) = ∫f_k − L`, checks that the driven estimates are
/// monotone within `2τ` per step and land within `|t(k_max)| + 2τ` of `L`,
/// and that subtracting the declared tail recovers `L` to `4τ` (the limit
/// interchange). Monotonicity is spot-checked pointwise first; a failure
/// there is a configuration error, distinct from integration failures.
#[allow(clippy::too_many_arguments)]
pub fn check_monotone_convergence(
    harness: &Harness,
    family: &FamilySpec,
    direction: MonotoneDirection,
    limit_integral: f64,
    signed_tail: impl Fn(u32) -> f64,
    interval: Interval,
    k_max: u32,
    tau: f64,
    seed: u64,
) -> Result<PropertyReport> {
    spot_check_monotone(family, direction, interval, k_max, seed)?;

    let mut builder = ReportBuilder::new(format!("monotone-convergence[{}]", family.name));
    builder.tolerance("tau", tau);
    builder.tolerance("step_slack", 2.0 * tau);
    builder.tolerance("per_k", 4.0 * tau);
    builder.tolerance("interchange", 4.0 * tau);

    let rule = StoppingRule::new(tau, 30, 6);
    let gs = default_gauge_sequence(interval);

    let mut estimates = Vec::new();
    for k in 1..=k_max {
        let case_seed = derive(seed, k as u64);
        let outcome = (family.build)(k).and_then(|f_k| {
            let (int_k, report) = harness.estimate(&f_k, &gs, interval, &rule, case_seed)?;
            estimates.push(int_k);
            let mut violations = Vec::new();
            if !report.certified {
                violations.push(format!("k={k}: driver run uncertified"));
            }
            // The declared tail pins each member's integral exactly.
            let expected = limit_integral + signed_tail(k);
            if (int_k - expected).abs() > 4.0 * tau {
                violations.push(format!(
                    "k={k}: ∫f_k = {int_k:.9} is {:.3e} away from declared {expected:.9}",
                    (int_k - expected).abs()
                ));
            }
            Ok(violations)
        });
        builder.case(case_seed, outcome);
    }

    if estimates.len() == k_max as usize {
        let mut violations = Vec::new();
        for (i, w) in estimates.windows(2).enumerate() {
            let ok = match direction {
                MonotoneDirection::NonDecreasing => w[1] >= w[0] - 2.0 * tau,
                MonotoneDirection::NonIncreasing => w[1] <= w[0] + 2.0 * tau,
            };
            if !ok {
                violations.push(format!(
                    "estimates not monotone at k={}: {} -> {}",
                    i + 1,
                    w[0],
                    w[1]
                ));
            }
        }
        let last = *estimates.last().expect("k_max >= 1");
        let tail = signed_tail(k_max);
        if (last - limit_integral).abs() > tail.abs() + 2.0 * tau {
            violations.push(format!(
                "|∫f_K − L| = {:.3e} exceeds declared tail {:.3e} + 2τ",
                (last - limit_integral).abs(),
                tail.abs()
            ));
        }
        let interchange = (last - tail - limit_integral).abs();
        if interchange > 4.0 * tau {
            violations.push(format!(
                "limit interchange residual {interchange:.3e} exceeds 4τ"
            ));
        }
        builder.case(derive(seed, 0xFFFF), Ok(violations));
    }

    Ok(builder.finish())
}

fn spot_check_monotone(
    family: &FamilySpec,
    direction: MonotoneDirection,
    interval: Interval,
    k_max: u32,
    seed: u64,
) -> Result<()> {
    let mut stream = SeedStream::new(derive(seed, 0x5B07));
    let points: Vec<f64> = (0..100)
        .map(|_| stream.next_in(interval.a(), interval.b()))
        .collect();
    for k in 1..k_max {
        let f_k = (family.build)(k)?;
        let f_next = (family.build)(k + 1)?;
        for &x in &points {
            let a = f_k.eval(&Tag::new(x));
            let b = f_next.eval(&Tag::new(x));
            let ok = match direction {
                MonotoneDirection::NonDecreasing => b >= a - 1e-12,
                MonotoneDirection::NonIncreasing => b <= a + 1e-12,
            };
            if !ok {
                return Err(Error::MonotonicityViolated(format!(
                    "{}: f_{}({x}) = {a} vs f_{}({x}) = {b}",
                    family.name,
                    k,
                    k + 1
                )));
            }
        }
    }
    Ok(())
}
