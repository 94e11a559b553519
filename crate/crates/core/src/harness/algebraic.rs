//! The six algebraic identities of the integral, checked over random
//! scalar and subinterval draws.

use crate::error::Result;
use crate::integrand::Integrand;
use crate::integrator::{default_gauge_sequence, StoppingRule};
use crate::interval::Interval;
use crate::seeded::{derive, SeedStream};
use crate::tag::Tag;

use super::{Harness, PropertyReport, ReportBuilder};

/// Sampled upper bound for `|f|` on the interval, padded so it is a true
/// bound for the smooth catalog entries this check runs on.
fn sampled_sup_abs(f: &Integrand, interval: Interval) -> f64 {
    let n = 1000;
    let mut m: f64 = 0.0;
    for i in 0..=n {
        let x = interval.a() + interval.width() * i as f64 / n as f64;
        m = m.max(f.eval(&Tag::new(x)).abs());
    }
    m * 1.001 + 1e-9
}

/// Checks, per case: linearity of the integral in scalars and sums,
/// positivity of squares, monotonicity under pointwise domination, the
/// triangle inequality against `∫|f|`, and the `M·(b−a)` bound.
pub fn check_algebraic(
    harness: &Harness,
    f: &Integrand,
    g: &Integrand,
    interval: Interval,
    tau: f64,
    cases: u64,
    seed: u64,
) -> PropertyReport {
    let mut builder = ReportBuilder::new(format!("algebraic[{},{}]", f.name(), g.name()));
    builder.tolerance("tau", tau);
    builder.tolerance("positivity", tau);
    builder.tolerance("monotonicity", 2.0 * tau);
    builder.tolerance("triangle", 2.0 * tau);
    builder.tolerance("bound", tau);

    for case in 0..cases {
        let case_seed = derive(seed, case);
        builder.case(case_seed, run_case(harness, f, g, interval, tau, case_seed));
    }
    builder.finish()
}

fn run_case(
    harness: &Harness,
    f: &Integrand,
    g: &Integrand,
    interval: Interval,
    tau: f64,
    case_seed: u64,
) -> Result<Vec<String>> {
    let mut stream = SeedStream::new(case_seed);
    let alpha = stream.next_in(-2.0, 2.0);
    let beta = stream.next_in(-2.0, 2.0);

    // Random subinterval covering at least a fifth of the parent.
    let width = interval.width();
    let sub_w = stream.next_in(0.2 * width, width);
    let sub_a = interval.a() + stream.next_in(0.0, width - sub_w);
    let sub = Interval::new(sub_a, sub_a + sub_w)?;

    let rule = StoppingRule::new(tau, 30, 6);
    let gs = default_gauge_sequence(sub);
    let run = |h: &Integrand, salt: u64| -> Result<f64> {
        Ok(harness
            .estimate(h, &gs, sub, &rule, derive(case_seed, salt))?
            .0)
    };

    let int_f = run(f, 1)?;
    let int_g = run(g, 2)?;

    let mut violations = Vec::new();

    // Linearity (scalar multiples and sums together).
    let combo = Integrand::linear_combination("combo", f.domain(), alpha, f, beta, g);
    let int_combo = run(&combo, 3)?;
    let lin_tol = (alpha.abs() + beta.abs() + 1.0) * tau;
    let lin_err = (int_combo - alpha * int_f - beta * int_g).abs();
    if lin_err > lin_tol {
        violations.push(format!(
            "linearity: |∫(αf+βg) − α∫f − β∫g| = {lin_err:.3e} > {lin_tol:.3e} (α={alpha:.3}, β={beta:.3}, sub={sub})"
        ));
    }

    // Positivity on a manifestly nonnegative integrand.
    let square = Integrand::product("f*f", f.domain(), f, f);
    let int_square = run(&square, 4)?;
    if int_square < -tau {
        violations.push(format!("positivity: ∫f² = {int_square:.3e} < -tau"));
    }

    // Monotonicity: f <= f + g² pointwise.
    let dominating = Integrand::linear_combination(
        "f+g^2",
        f.domain(),
        1.0,
        f,
        1.0,
        &Integrand::product("g*g", g.domain(), g, g),
    );
    let int_dom = run(&dominating, 5)?;
    if int_f > int_dom + 2.0 * tau {
        violations.push(format!(
            "monotonicity: ∫f = {int_f:.6e} exceeds ∫(f+g²) = {int_dom:.6e} + 2tau"
        ));
    }

    // Triangle inequality |∫f| <= ∫|f|.
    let int_abs = run(&f.abs(), 6)?;
    if int_f.abs() > int_abs + 2.0 * tau {
        violations.push(format!(
            "triangle: |∫f| = {:.6e} exceeds ∫|f| = {int_abs:.6e} + 2tau",
            int_f.abs()
        ));
    }

    // Uniform bound |∫f| <= M(b−a).
    let m = sampled_sup_abs(f, sub);
    if int_f.abs() > m * sub.width() + tau {
        violations.push(format!(
            "bound: |∫f| = {:.6e} exceeds M(b−a) = {:.6e} + tau",
            int_f.abs(),
            m * sub.width()
        ));
    }

    Ok(violations)
}
