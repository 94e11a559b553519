//! Antiderivative consistency, both directions.
//!
//! Part I: the driven integral of a derivative equals the primitive's
//! endpoint difference. Part II: the cumulative integral, differentiated
//! by centered differences over a documented step schedule, recovers the
//! integrand at interior grid points.

use crate::error::Result;
use crate::gauge::GaugeSequence;
use crate::integrand::Integrand;
use crate::integrator::{default_gauge_sequence, StoppingRule};
use crate::interval::Interval;
use crate::seeded::derive;
use crate::tag::Tag;

use super::{Harness, PropertyReport, ReportBuilder};

/// Knobs for [`check_ftc`].
#[derive(Debug, Clone)]
pub struct FtcOptions {
    /// Include the Part II (differentiation of the cumulative integral)
    /// check. Requires the integrand to be continuous on the interval.
    pub part2: bool,
    /// Driver tolerance for the cumulative-integral runs of Part II.
    pub part2_tau: f64,
}

impl Default for FtcOptions {
    fn default() -> Self {
        Self {
            part2: true,
            part2_tau: 1e-7,
        }
    }
}

/// Part II step schedule: fractions of the interval width.
const H_SCHEDULE: [f64; 3] = [0.04, 0.02, 0.01];
/// Interior grid for Part II: `a + i·(b−a)/10`, `i = 1..=9`.
const GRID_POINTS: usize = 9;

/// Sampled bound for `|f''|` via second differences, used to scale the
/// Part II tolerance.
fn sampled_second_derivative_bound(f: &Integrand, interval: Interval) -> f64 {
    let h = interval.width() * 1e-4;
    let mut m: f64 = 0.0;
    for i in 1..=100 {
        let x = interval.a() + interval.width() * i as f64 / 101.0;
        let dd = (f.eval(&Tag::new(x + h)) - 2.0 * f.eval(&Tag::new(x)) + f.eval(&Tag::new(x - h)))
            / (h * h);
        if dd.is_finite() {
            m = m.max(dd.abs());
        }
    }
    m.max(1e-6)
}

/// Checks a declared antiderivative/derivative pair `(primitive, f)`.
///
/// Part I asserts `|∫f − (F(b) − F(a))| ≤ 10·tau` for the given gauge
/// sequence (`None` uses the constant-halving default). Part II, when
/// enabled, builds `G(x) = ∫_a^x f` with the restriction driver at nine
/// interior grid points and compares `(G(x+h) − G(x−h)) / 2h` with `f(x)`
/// for the step schedule `h ∈ {0.04, 0.02, 0.01}·(b−a)`; the tolerance is
/// `c₂·h²/4 + 4·tau₂/h`, with `c₂` a sampled bound on `|f''|`.
#[allow(clippy::too_many_arguments)]
pub fn check_ftc(
    harness: &Harness,
    primitive: &Integrand,
    f: &Integrand,
    interval: Interval,
    gauges: Option<&GaugeSequence>,
    tau: f64,
    seed: u64,
    options: &FtcOptions,
) -> PropertyReport {
    let mut builder = ReportBuilder::new(format!("ftc[{}]", f.name()));
    let part1_tol = 10.0 * tau;
    builder.tolerance("tau", tau);
    builder.tolerance("part1", part1_tol);

    let default_gs;
    let gs = match gauges {
        Some(gs) => gs,
        None => {
            default_gs = default_gauge_sequence(interval);
            &default_gs
        }
    };

    // Part I.
    let rule = StoppingRule::new(tau, 30, 6);
    let part1_seed = derive(seed, 1);
    builder.case(part1_seed, part_one(harness, primitive, f, interval, gs, &rule, part1_tol, part1_seed));

    // Part II.
    if options.part2 {
        let c2 = sampled_second_derivative_bound(f, interval);
        builder.tolerance("part2_c2", c2);
        builder.tolerance("part2_tau", options.part2_tau);
        for i in 1..=GRID_POINTS {
            let case_seed = derive(seed, 100 + i as u64);
            builder.case(
                case_seed,
                part_two_at(harness, f, interval, c2, options.part2_tau, i, case_seed),
            );
        }
    }

    builder.finish()
}

#[allow(clippy::too_many_arguments)]
fn part_one(
    harness: &Harness,
    primitive: &Integrand,
    f: &Integrand,
    interval: Interval,
    gs: &GaugeSequence,
    rule: &StoppingRule,
    tol: f64,
    seed: u64,
) -> Result<Vec<String>> {
    let (estimate, report) = harness.estimate(f, gs, interval, rule, seed)?;
    let expected =
        primitive.eval(&Tag::new(interval.b())) - primitive.eval(&Tag::new(interval.a()));
    let mut violations = Vec::new();
    if !report.certified {
        violations.push(format!(
            "part I: run uncertified after {} indices (final gap {:.3e})",
            report.stopped_at,
            report.final_gap()
        ));
    }
    let err = (estimate - expected).abs();
    if err > tol {
        violations.push(format!(
            "part I: |∫f − (F(b)−F(a))| = {err:.3e} > {tol:.3e} (estimate {estimate:.9}, expected {expected:.9})"
        ));
    }
    Ok(violations)
}

fn part_two_at(
    harness: &Harness,
    f: &Integrand,
    interval: Interval,
    c2: f64,
    tau2: f64,
    grid_index: usize,
    seed: u64,
) -> Result<Vec<String>> {
    let width = interval.width();
    let x = interval.a() + width * grid_index as f64 / 10.0;
    let rule = StoppingRule::new(tau2, 34, 6);
    let mut violations = Vec::new();
    for (j, frac) in H_SCHEDULE.iter().enumerate() {
        let h = frac * width;
        let lo = Interval::new(interval.a(), x - h)?;
        let hi = Interval::new(interval.a(), x + h)?;
        let g_lo = harness
            .estimate(f, &default_gauge_sequence(lo), lo, &rule, derive(seed, 2 * j as u64))?
            .0;
        let g_hi = harness
            .estimate(f, &default_gauge_sequence(hi), hi, &rule, derive(seed, 2 * j as u64 + 1))?
            .0;
        let centered = (g_hi - g_lo) / (2.0 * h);
        let expected = f.eval(&Tag::new(x));
        let tol = c2 * h * h / 4.0 + 4.0 * tau2 / h;
        let err = (centered - expected).abs();
        if err > tol {
            violations.push(format!(
                "part II: |ΔG/2h − f(x)| = {err:.3e} > {tol:.3e} at x = {x:.3}, h = {h:.4}"
            ));
        }
    }
    Ok(violations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::Gauge;

    #[test]
    fn constant_pair_passes_both_parts() {
        let i = Interval::new(0.0, 1.0).unwrap();
        let primitive = Integrand::from_fn("c*x", i, |x| 2.0 * x);
        let f = Integrand::from_fn("c", i, |_| 2.0);
        let report = check_ftc(
            &Harness::new(),
            &primitive,
            &f,
            i,
            None,
            1e-9,
            3,
            &FtcOptions::default(),
        );
        assert!(report.passed, "{:?}", report.failures);
    }

    #[test]
    fn parabola_pair_passes() {
        let i = Interval::new(0.0, 4.0).unwrap();
        let primitive = Integrand::from_fn("F", i, |x| -x.powi(3) / 3.0 + 2.0 * x * x);
        let f = Integrand::from_fn("f", i, |x| -x * x + 4.0 * x);
        let gs = GaugeSequence::new_decreasing(|n| Gauge::constant(4.0 * 0.5f64.powi(n as i32)));
        let report = check_ftc(
            &Harness::new(),
            &primitive,
            &f,
            i,
            Some(&gs),
            1e-6,
            11,
            &FtcOptions::default(),
        );
        assert!(report.passed, "{:?}", report.failures);
    }

    #[test]
    fn centered_differences_converge_quadratically_for_cubics() {
        // f = x³ has a nonzero third derivative, so the centered-difference
        // error behaves like h² — an independent numerical check on Part II.
        let harness = Harness::new();
        let i = Interval::new(0.0, 1.0).unwrap();
        let f = Integrand::from_fn("x^3", i, |x| x * x * x);
        let rule = StoppingRule::new(1e-9, 34, 6);
        let x = 0.5;
        let mut errs = Vec::new();
        for (j, frac) in H_SCHEDULE.iter().enumerate() {
            let h = frac;
            let lo = Interval::new(0.0, x - h).unwrap();
            let hi = Interval::new(0.0, x + h).unwrap();
            let g_lo = harness
                .estimate(&f, &default_gauge_sequence(lo), lo, &rule, derive(5, 2 * j as u64))
                .unwrap()
                .0;
            let g_hi = harness
                .estimate(&f, &default_gauge_sequence(hi), hi, &rule, derive(5, 2 * j as u64 + 1))
                .unwrap()
                .0;
            errs.push(((g_hi - g_lo) / (2.0 * h) - f.eval_at(x)).abs());
        }
        // err(h) ≈ h² exactly for x³ (f''' = 6, error = f'''·h²/6 = h²).
        for (err, frac) in errs.iter().zip(H_SCHEDULE) {
            assert!(*err <= 1.5 * frac * frac + 1e-6, "err {err} at h={frac}");
        }
        // Quadratic decay between successive steps, within noise.
        assert!(errs[2] < errs[0] / 8.0);
    }

    #[test]
    fn bias_breaks_part_one() {
        let i = Interval::new(0.0, 1.0).unwrap();
        let primitive = Integrand::from_fn("F", i, |x| x * x / 2.0);
        let f = Integrand::from_fn("f", i, |x| x);
        let report = check_ftc(
            &Harness::with_estimate_bias(1.0),
            &primitive,
            &f,
            i,
            None,
            1e-6,
            3,
            &FtcOptions {
                part2: false,
                ..Default::default()
            },
        );
        assert!(!report.passed);
    }
}
