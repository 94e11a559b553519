//! Named check batteries over the standard catalog, used by the CLI.

use crate::catalog::{catalog_get, MonotoneDirection, Params};
use crate::darboux::darboux_bracket_check;
use crate::error::{Error, Result};
use crate::gauge::sequences;
use crate::integrand::Integrand;
use crate::integrator::{integrate_sequential, StoppingRule};
use crate::interval::Interval;
use crate::parallel;
use crate::seeded::derive;

use super::{
    check_algebraic, check_ftc, check_henstock_lemma, check_monotone_convergence,
    check_parts_and_substitution, check_uniform_convergence, FamilySpec, FtcOptions, Harness,
    PartsInput, PropertyReport, ReportBuilder,
};

/// The named suites accepted by `verify --suite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Algebraic,
    Ftc,
    Parts,
    HenstockLemma,
    Uniform,
    Monotone,
    DarbouxBracket,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Algebraic,
        Suite::Ftc,
        Suite::Parts,
        Suite::HenstockLemma,
        Suite::Uniform,
        Suite::Monotone,
        Suite::DarbouxBracket,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Algebraic => "algebraic",
            Suite::Ftc => "ftc",
            Suite::Parts => "parts",
            Suite::HenstockLemma => "henstock-lemma",
            Suite::Uniform => "uniform",
            Suite::Monotone => "monotone",
            Suite::DarbouxBracket => "darboux-bracket",
        }
    }

    /// Parses a suite name; `all` expands to every suite.
    pub fn parse(name: &str) -> Option<Vec<Suite>> {
        if name == "all" {
            return Some(Self::ALL.to_vec());
        }
        Self::ALL
            .into_iter()
            .find(|s| s.name() == name)
            .map(|s| vec![s])
    }
}

fn unit() -> Interval {
    Interval::new(0.0, 1.0).expect("static interval")
}

/// Runs one suite with seeds derived from `seed`. Suites within a `verify
/// all` run execute independently (in parallel when enabled) and merge in
/// fixed order, so output is deterministic either way.
pub fn run_suite(harness: &Harness, suite: Suite, seed: u64) -> Result<Vec<PropertyReport>> {
    match suite {
        Suite::Algebraic => algebraic_suite(harness, seed),
        Suite::Ftc => ftc_suite(harness, seed, None),
        Suite::Parts => parts_suite(harness, seed),
        Suite::HenstockLemma => henstock_suite(harness, seed),
        Suite::Uniform => uniform_suite(harness, seed),
        Suite::Monotone => monotone_suite(harness, seed),
        Suite::DarbouxBracket => darboux_suite(harness, seed),
    }
}

/// Runs several suites and flattens the reports in suite order.
pub fn run_suites(
    harness: &Harness,
    suites: &[Suite],
    seed: u64,
) -> Result<Vec<PropertyReport>> {
    let jobs: Vec<(usize, Suite)> = suites.iter().copied().enumerate().collect();
    let results = parallel::map_collect(jobs, |(i, suite)| {
        run_suite(harness, suite, derive(seed, i as u64))
    });
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

fn algebraic_suite(harness: &Harness, seed: u64) -> Result<Vec<PropertyReport>> {
    let (f, _) = catalog_get("poly", &Params::new().with_list("coeffs", &[0.0, 0.0, 1.0]))?;
    let (g, _) = catalog_get("poly", &Params::new().with_list("coeffs", &[1.0, -1.0]))?;
    Ok(vec![check_algebraic(
        harness,
        &f.on_domain(unit()),
        &g.on_domain(unit()),
        unit(),
        1e-6,
        20,
        derive(seed, 1),
    )])
}

/// The `--pair` filter for the ftc suite.
pub fn ftc_suite(
    harness: &Harness,
    seed: u64,
    pair_filter: Option<&str>,
) -> Result<Vec<PropertyReport>> {
    let mut reports = Vec::new();
    let wants = |name: &str| pair_filter.is_none_or(|p| p == name);

    if wants("parabola") {
        let domain = Interval::new(0.0, 4.0)?;
        let primitive = Integrand::from_fn("parabola-primitive", domain, |x| {
            -x.powi(3) / 3.0 + 2.0 * x * x
        });
        let (f, _) = catalog_get("poly", &Params::new().with_list("coeffs", &[0.0, 4.0, -1.0]))?;
        reports.push(check_ftc(
            harness,
            &primitive,
            &f.on_domain(domain),
            domain,
            Some(&sequences::constant_halving(domain)),
            1e-6,
            derive(seed, 1),
            &FtcOptions::default(),
        ));
    }

    if wants("cubic") {
        let primitive = Integrand::from_fn("x^4/4", unit(), |x| x.powi(4) / 4.0);
        let (f, _) = catalog_get("poly", &Params::new().with_list("coeffs", &[0.0, 0.0, 0.0, 1.0]))?;
        reports.push(check_ftc(
            harness,
            &primitive,
            &f.on_domain(unit()),
            unit(),
            None,
            1e-6,
            derive(seed, 2),
            &FtcOptions::default(),
        ));
    }

    if wants("trig") {
        let domain = Interval::new(0.0, std::f64::consts::PI)?;
        let primitive = Integrand::from_fn("-cos", domain, |x| -x.cos());
        let (f, _) = catalog_get("sin", &Params::new())?;
        reports.push(check_ftc(
            harness,
            &primitive,
            &f.on_domain(domain),
            domain,
            None,
            1e-6,
            derive(seed, 3),
            &FtcOptions::default(),
        ));
    }

    if wants("pathological") {
        // F(x) = x²·sin(1/x²): differentiable everywhere, derivative
        // unbounded near 0. Part II's continuity hypothesis fails, so only
        // part I runs, against a gauge sequence that shrinks cubically at
        // the origin. ∫₀¹ F' = sin(1).
        let (primitive, _) = catalog_get("ftc-pathological-primitive", &Params::new())?;
        let (f, _) = catalog_get("ftc-pathological", &Params::new())?;
        let gauges = sequences::cubic_near_zero(32.0, 0.04);
        reports.push(check_ftc(
            harness,
            &primitive,
            &f,
            unit(),
            Some(&gauges),
            1e-3,
            derive(seed, 4),
            &FtcOptions {
                part2: false,
                ..Default::default()
            },
        ));
    }

    if reports.is_empty() {
        return Err(Error::UnknownId(format!(
            "no ftc pair named `{}`",
            pair_filter.unwrap_or("")
        )));
    }
    Ok(reports)
}

fn parts_suite(harness: &Harness, seed: u64) -> Result<Vec<PropertyReport>> {
    let wide = Interval::new(-10.0, 10.0)?;
    let (sin, _) = catalog_get("sin", &Params::new())?;
    let (cos, _) = catalog_get("cos", &Params::new())?;
    let (x, _) = catalog_get("poly", &Params::new().with_list("coeffs", &[0.0, 1.0]))?;
    let (one, _) = catalog_get("poly", &Params::new().with_list("coeffs", &[1.0]))?;
    let (x2, _) = catalog_get("poly", &Params::new().with_list("coeffs", &[0.0, 0.0, 1.0]))?;
    let (two_x, _) = catalog_get("poly", &Params::new().with_list("coeffs", &[0.0, 2.0]))?;

    let input = PartsInput {
        f1: x.on_domain(wide),
        f1_deriv: one.on_domain(wide),
        f2: sin.on_domain(wide),
        f2_deriv: cos.clone().on_domain(wide),
        psi: x2.on_domain(wide),
        psi_deriv: two_x.on_domain(wide),
        f_deriv: cos.on_domain(wide),
    };
    let pi_interval = Interval::new(0.0, std::f64::consts::PI)?;
    let half = Interval::new(0.5, 1.5)?;
    Ok(vec![
        check_parts_and_substitution(harness, &input, pi_interval, 1e-6, derive(seed, 1)),
        check_parts_and_substitution(harness, &input, half, 1e-6, derive(seed, 2)),
    ])
}

fn henstock_suite(harness: &Harness, seed: u64) -> Result<Vec<PropertyReport>> {
    let gs = sequences::constant_halving(unit());
    let mut reports = Vec::new();
    for (salt, coeffs, prim_coeffs) in [
        (1u64, vec![0.0, 1.0], vec![0.0, 0.0, 0.5]),
        (2u64, vec![0.0, 0.0, 1.0], vec![0.0, 0.0, 0.0, 1.0 / 3.0]),
    ] {
        let (f, _) = catalog_get("poly", &Params::new().with_list("coeffs", &coeffs))?;
        let prim = prim_coeffs.clone();
        let primitive = Integrand::from_fn("primitive", unit(), move |x| {
            prim.iter().rev().fold(0.0, |acc, c| acc * x + c)
        });
        reports.push(check_henstock_lemma(
            harness,
            &f.on_domain(unit()),
            Some(&primitive),
            &gs,
            unit(),
            5..=10,
            50,
            derive(seed, salt),
        )?);
    }
    Ok(reports)
}

fn uniform_suite(harness: &Harness, seed: u64) -> Result<Vec<PropertyReport>> {
    let mut reports = Vec::new();

    let shift = FamilySpec::new("x+1/k", |k| {
        Ok(catalog_get("family-uniform-shift", &Params::new().with("k", f64::from(k)))?.0)
    });
    let (limit, _) = catalog_get("poly", &Params::new().with_list("coeffs", &[0.0, 1.0]))?;
    reports.push(check_uniform_convergence(
        harness,
        &shift,
        &limit.on_domain(unit()),
        |k| 1.0 / f64::from(k),
        unit(),
        8,
        1e-6,
        derive(seed, 1),
    ));

    let pi_interval = Interval::new(0.0, std::f64::consts::PI)?;
    let sin_shrink = FamilySpec::new("sin(x)/k", |k| {
        Ok(catalog_get("family-sin-shrink", &Params::new().with("k", f64::from(k)))?.0)
    });
    let zero = Integrand::from_fn("zero", pi_interval, |_| 0.0);
    reports.push(check_uniform_convergence(
        harness,
        &sin_shrink,
        &zero,
        |k| 1.0 / f64::from(k),
        pi_interval,
        6,
        1e-6,
        derive(seed, 2),
    ));

    Ok(reports)
}

fn monotone_suite(harness: &Harness, seed: u64) -> Result<Vec<PropertyReport>> {
    let mut reports = Vec::new();

    let power = FamilySpec::new("x^k", |k| {
        Ok(catalog_get("family-power", &Params::new().with("k", f64::from(k)))?.0)
    });
    reports.push(check_monotone_convergence(
        harness,
        &power,
        MonotoneDirection::NonIncreasing,
        0.0,
        |k| 1.0 / f64::from(k + 1),
        unit(),
        10,
        2e-5,
        derive(seed, 1),
    )?);

    let capped = FamilySpec::new("min(k,x^-1/2)", |k| {
        Ok(catalog_get("family-capped-invsqrt", &Params::new().with("k", f64::from(k)))?.0)
    });
    reports.push(check_monotone_convergence(
        harness,
        &capped,
        MonotoneDirection::NonDecreasing,
        2.0,
        |k| -1.0 / f64::from(k),
        unit(),
        8,
        2.5e-4,
        derive(seed, 2),
    )?);

    Ok(reports)
}

fn darboux_suite(harness: &Harness, seed: u64) -> Result<Vec<PropertyReport>> {
    let mut builder = ReportBuilder::new("darboux-bracket");
    builder.tolerance("final_width_parabola", 1e-3);

    // The canonical parabola run must land inside its bracket and close
    // the bracket below 1e-3 at the final index.
    {
        let domain = Interval::new(0.0, 4.0)?;
        let (f, _) = catalog_get("poly", &Params::new().with_list("coeffs", &[0.0, 4.0, -1.0]))?;
        let f = f.on_domain(domain);
        let gs = sequences::constant_halving(domain);
        let rule = StoppingRule::new(1e-6, 30, 6);
        let run_seed = derive(seed, 1);
        let outcome = (|| {
            let report = integrate_sequential(
                &f,
                &gs,
                domain,
                &rule,
                &Harness::policy(run_seed),
                run_seed,
            )?;
            let mut report = report;
            report.estimate += harness.bias();
            let mut violations = Vec::new();
            if !report.certified {
                violations.push("parabola run failed to certify".to_string());
            }
            if !darboux_bracket_check(&f, &gs, domain, &report, 8, derive(run_seed, 2))? {
                violations.push("estimate escaped the sampled bracket".to_string());
            }
            // Bracket width at the final index, recomputed for the assert.
            let gauge = gs.at(report.stopped_at).halved();
            let p = crate::partitioner::cousin_partition(
                &gauge,
                domain,
                &Harness::policy(derive(run_seed, 3)),
                &crate::partitioner::PartitionBudget::default(),
            )?;
            let (lower, upper) =
                crate::darboux::darboux_sums(&f, &p, 8, derive(run_seed, 4))?;
            if upper - lower > 1e-3 {
                violations.push(format!(
                    "final bracket width {:.3e} exceeds 1e-3",
                    upper - lower
                ));
            }
            Ok(violations)
        })();
        builder.case(run_seed, outcome);
    }

    // Other Lipschitz entries: bracket containment at default tolerances.
    for (salt, id, coeffs) in [
        (10u64, "poly", Some(vec![0.0, 0.0, 0.0, 1.0])),
        (11u64, "sin", None),
    ] {
        let params = match &coeffs {
            Some(c) => Params::new().with_list("coeffs", c),
            None => Params::new(),
        };
        let (f, _) = catalog_get(id, &params)?;
        let domain = unit();
        let f = f.on_domain(domain);
        let gs = sequences::constant_halving(domain);
        let rule = StoppingRule::new(1e-5, 30, 6);
        let run_seed = derive(seed, salt);
        let outcome = (|| {
            let mut report = integrate_sequential(
                &f,
                &gs,
                domain,
                &rule,
                &Harness::policy(run_seed),
                run_seed,
            )?;
            report.estimate += harness.bias();
            let ok = darboux_bracket_check(&f, &gs, domain, &report, 8, derive(run_seed, 2))?;
            Ok(if ok {
                vec![]
            } else {
                vec![format!("{id}: estimate escaped the sampled bracket")]
            })
        })();
        builder.case(run_seed, outcome);
    }

    Ok(vec![builder.finish()])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(Suite::parse(s.name()), Some(vec![s]));
        }
        assert_eq!(Suite::parse("all").map(|v| v.len()), Some(7));
        assert_eq!(Suite::parse("nonexistent"), None);
    }

    #[test]
    fn algebraic_suite_passes_quickly() {
        let reports = run_suite(&Harness::new(), Suite::Algebraic, 42).unwrap();
        assert!(reports.iter().all(|r| r.passed), "{reports:?}");
    }

    #[test]
    fn ftc_pair_filter_selects() {
        let reports = ftc_suite(&Harness::new(), 42, Some("trig")).unwrap();
        assert_eq!(reports.len(), 1);
        assert!(reports[0].passed, "{:?}", reports[0].failures);
        assert!(ftc_suite(&Harness::new(), 42, Some("nope")).is_err());
    }
}
