//! End-to-end regression: every closed-form catalog entry must agree with
//! the driver at its certified tolerance, and oracle entries must agree
//! with the driver where both are defined.

use gaugelab_core::catalog::{catalog_get, oracle_value, Catalog, Params};
use gaugelab_core::gauge::sequences;
use gaugelab_core::seeded::{derive, SeedStream};
use gaugelab_core::{integrate_sequential, GaugeSequence, Interval, StoppingRule, Tag, TagPolicy};

fn policy(seed: u64) -> TagPolicy {
    TagPolicy::hint_first(TagPolicy::RandomUniform { seed })
}

struct RegressionCase {
    id: &'static str,
    params: Params,
    interval: Interval,
    tau: f64,
    gauges: GaugeSequence,
    tolerance: f64,
}

fn closed_form_cases() -> Vec<RegressionCase> {
    let unit = Interval::new(0.0, 1.0).unwrap();
    let four = Interval::new(0.0, 4.0).unwrap();
    let pi = Interval::new(0.0, std::f64::consts::PI).unwrap();
    vec![
        RegressionCase {
            id: "poly",
            params: Params::new().with_list("coeffs", &[0.0, 4.0, -1.0]),
            interval: four,
            tau: 1e-6,
            gauges: sequences::constant_halving(four),
            tolerance: 1e-6,
        },
        RegressionCase {
            id: "poly",
            params: Params::new().with_list("coeffs", &[2.0, 0.0, 0.0, 1.0]),
            interval: unit,
            tau: 1e-6,
            gauges: sequences::constant_halving(unit),
            tolerance: 5e-6,
        },
        RegressionCase {
            id: "dirichlet",
            params: Params::new(),
            interval: unit,
            tau: 1e-3,
            gauges: sequences::dirichlet_eps_halving(30),
            tolerance: 1e-3,
        },
        RegressionCase {
            id: "step",
            params: Params::new(),
            interval: unit,
            tau: 1e-4,
            gauges: sequences::constant_halving(unit),
            tolerance: 5e-4,
        },
        RegressionCase {
            id: "sin",
            params: Params::new(),
            interval: pi,
            tau: 1e-6,
            gauges: sequences::constant_halving(pi),
            tolerance: 5e-6,
        },
        RegressionCase {
            id: "cos",
            params: Params::new(),
            interval: unit,
            tau: 1e-6,
            gauges: sequences::constant_halving(unit),
            tolerance: 5e-6,
        },
        RegressionCase {
            id: "family-power",
            params: Params::new().with("k", 5.0),
            interval: unit,
            tau: 1e-5,
            gauges: sequences::constant_halving(unit),
            tolerance: 5e-5,
        },
        RegressionCase {
            id: "family-capped-invsqrt",
            params: Params::new().with("k", 4.0),
            interval: unit,
            tau: 2.5e-4,
            gauges: sequences::constant_halving(unit),
            tolerance: 1e-3,
        },
        RegressionCase {
            id: "family-uniform-shift",
            params: Params::new().with("k", 3.0),
            interval: unit,
            tau: 1e-6,
            gauges: sequences::constant_halving(unit),
            tolerance: 5e-6,
        },
        RegressionCase {
            id: "family-sin-shrink",
            params: Params::new().with("k", 2.0),
            interval: pi,
            tau: 1e-6,
            gauges: sequences::constant_halving(pi),
            tolerance: 5e-6,
        },
        RegressionCase {
            id: "ftc-pathological",
            params: Params::new(),
            interval: unit,
            tau: 1e-3,
            gauges: sequences::cubic_near_zero(32.0, 0.04),
            tolerance: 1e-2,
        },
    ]
}

#[test]
fn closed_form_entries_agree_with_the_driver() {
    for (i, case) in closed_form_cases().into_iter().enumerate() {
        let (f, entry) = catalog_get(case.id, &case.params).unwrap();
        assert_eq!(entry.reference_rule.kind(), "closed-form", "{}", case.id);
        let f = f.on_domain(case.interval);
        let (reference, _) = oracle_value(case.id, &case.params, case.interval).unwrap();
        let rule = StoppingRule::new(case.tau, 30, 6);
        let seed = derive(0x9E9, i as u64);
        let report =
            integrate_sequential(&f, &case.gauges, case.interval, &rule, &policy(seed), seed)
                .unwrap();
        assert!(report.certified, "{} [{i}] uncertified", case.id);
        let err = (report.estimate - reference).abs();
        assert!(
            err <= case.tolerance,
            "{} [{i}]: |{} - {reference}| = {err:.3e} > {:.1e}",
            case.id,
            report.estimate,
            case.tolerance
        );
    }
}

#[test]
fn oscillatory_oracle_matches_the_driver_away_from_zero() {
    // On [0.2, 1] there is no singularity; the quartic gauge resolves the
    // oscillation and the independent oracle provides the reference.
    let interval = Interval::new(0.2, 1.0).unwrap();
    let (f, _) = catalog_get("oscillatory-denjoy", &Params::new()).unwrap();
    let f = f.on_domain(interval);
    let (reference, uncertainty) =
        oracle_value("oscillatory-denjoy", &Params::new(), interval).unwrap();
    assert!(uncertainty < 1e-5);
    let gauges = sequences::quartic_near_zero(8.0, 0.04);
    let rule = StoppingRule::new(1e-3, 25, 3);
    let report = integrate_sequential(&f, &gauges, interval, &rule, &policy(0xD3), 0xD3).unwrap();
    assert!(report.certified);
    let err = (report.estimate - reference).abs();
    assert!(
        err <= uncertainty + 5e-3,
        "driver {} vs oracle {reference} ± {uncertainty} (err {err:.3e})",
        report.estimate
    );
}

#[test]
fn full_interval_oscillatory_oracle_is_self_consistent() {
    let unit = Interval::new(0.0, 1.0).unwrap();
    let (v, u) = oracle_value("oscillatory-denjoy", &Params::new(), unit).unwrap();
    assert!(v.is_finite());
    assert!(u > 0.0 && u < 1e-3, "uncertainty {u} out of range");
    // Tail bound: the value over [eta, 1] for small eta differs from the
    // extrapolated value by at most the cubic tail.
    let from_eta = Interval::new(0.02, 1.0).unwrap();
    let (v_eta, u_eta) = oracle_value("oscillatory-denjoy", &Params::new(), from_eta).unwrap();
    let tail = 2.0 / 3.0 * 0.02f64.powi(3);
    assert!(
        (v - v_eta).abs() <= tail + u + u_eta + 1e-6,
        "|{v} - {v_eta}| vs tail {tail:.2e}"
    );
}

#[test]
fn closed_forms_match_an_independent_quadrature() {
    // Composite Simpson on a fine uniform grid, written here and nowhere
    // else, cross-checks the antiderivative arithmetic of smooth entries.
    let cases: Vec<(&str, Params, Interval)> = vec![
        (
            "poly",
            Params::new().with_list("coeffs", &[0.0, 4.0, -1.0]),
            Interval::new(0.0, 4.0).unwrap(),
        ),
        (
            "poly",
            Params::new().with_list("coeffs", &[1.0, -2.0, 0.5, 3.0]),
            Interval::new(-1.0, 2.0).unwrap(),
        ),
        ("sin", Params::new(), Interval::new(0.0, 3.0).unwrap()),
        ("cos", Params::new(), Interval::new(0.2, 1.5).unwrap()),
        (
            "family-uniform-shift",
            Params::new().with("k", 4.0),
            Interval::new(0.0, 1.0).unwrap(),
        ),
        (
            "family-power",
            Params::new().with("k", 7.0),
            Interval::new(0.0, 1.0).unwrap(),
        ),
    ];
    for (id, params, interval) in cases {
        let (f, _) = catalog_get(id, &params).unwrap();
        let (reference, _) = oracle_value(id, &params, interval).unwrap();
        let n = 20_000u64; // even
        let h = interval.width() / n as f64;
        let mut s = f.eval_at(interval.a()) + f.eval_at(interval.b());
        for j in 1..n {
            let x = interval.a() + j as f64 * h;
            s += f.eval_at(x) * if j % 2 == 1 { 4.0 } else { 2.0 };
        }
        s *= h / 3.0;
        assert!(
            (s - reference).abs() <= 1e-9 * (1.0 + reference.abs()),
            "{id}: simpson {s} vs closed form {reference}"
        );
    }
}

#[test]
fn dirichlet_indicator_follows_tag_exactness() {
    let (f, _) = catalog_get("dirichlet", &Params::new()).unwrap();
    let mut stream = SeedStream::new(0xD1);
    for _ in 0..1000 {
        let x = stream.next_unit();
        assert_eq!(f.eval(&Tag::new(x)), 0.0);
        let num = (stream.next_u64() % 1000) as i64;
        let den = 1 + stream.next_u64() % 1000;
        let t = Tag::with_exact(num.min(den as i64), den).unwrap();
        assert_eq!(f.eval(&t), 1.0);
    }
}

#[test]
fn manifest_is_valid_json_and_complete() {
    let manifest = Catalog::global().manifest();
    let ids: Vec<&str> = manifest.iter().map(|m| m.id).collect();
    for required in [
        "poly",
        "dirichlet",
        "oscillatory-denjoy",
        "step",
        "ftc-pathological",
        "family-power",
        "family-capped-invsqrt",
        "family-uniform-shift",
    ] {
        assert!(ids.contains(&required), "missing {required}");
    }
    let json = serde_json::to_string_pretty(&manifest).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert!(parsed.as_array().unwrap().len() >= 8);
}
