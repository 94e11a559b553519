//! Driver-level invariants: uniqueness across gauge sequences, interval
//! additivity through forced tags, and determinism under concurrency.

use gaugelab_core::catalog::{catalog_get, oracle_value, Params};
use gaugelab_core::gauge::sequences;
use gaugelab_core::seeded::derive;
use gaugelab_core::{
    integrate_sequential, restrict, riemann_sum, cousin_partition, Gauge, GaugeSequence,
    Integrand, Interval, PartitionBudget, StoppingRule, TagPolicy,
};

fn policy(seed: u64) -> TagPolicy {
    TagPolicy::hint_first(TagPolicy::RandomUniform { seed })
}

/// Certified runs with different decreasing gauge sequences and disjoint
/// seeds agree within `2·tau` on every closed-form catalog entry.
#[test]
fn uniqueness_across_gauge_sequences() {
    struct Case {
        id: &'static str,
        params: Params,
        interval: Interval,
        tau: f64,
        seq_a: GaugeSequence,
        seq_b: GaugeSequence,
    }
    let unit = Interval::new(0.0, 1.0).unwrap();
    let four = Interval::new(0.0, 4.0).unwrap();
    let pi = Interval::new(0.0, std::f64::consts::PI).unwrap();
    let cases = vec![
        Case {
            id: "poly",
            params: Params::new().with_list("coeffs", &[0.0, 4.0, -1.0]),
            interval: four,
            tau: 1e-6,
            seq_a: sequences::constant_halving(four),
            seq_b: sequences::sloped_halving(four),
        },
        Case {
            id: "poly",
            params: Params::new().with_list("coeffs", &[1.0, -1.0, 0.0, 2.0]),
            interval: unit,
            tau: 1e-6,
            seq_a: sequences::constant_halving(unit),
            seq_b: sequences::constant_thirding(unit),
        },
        Case {
            id: "step",
            params: Params::new(),
            interval: unit,
            tau: 1e-4,
            seq_a: sequences::constant_halving(unit),
            seq_b: sequences::sloped_halving(unit),
        },
        Case {
            id: "sin",
            params: Params::new(),
            interval: pi,
            tau: 1e-6,
            seq_a: sequences::constant_halving(pi),
            seq_b: sequences::constant_thirding(pi),
        },
        Case {
            id: "dirichlet",
            params: Params::new(),
            interval: unit,
            tau: 1e-3,
            seq_a: sequences::dirichlet_eps_halving(30),
            seq_b: sequences::constant_halving(unit),
        },
        Case {
            id: "family-power",
            params: Params::new().with("k", 3.0),
            interval: unit,
            tau: 1e-5,
            seq_a: sequences::constant_halving(unit),
            seq_b: sequences::sloped_halving(unit),
        },
        Case {
            id: "family-capped-invsqrt",
            params: Params::new().with("k", 4.0),
            interval: unit,
            tau: 2.5e-4,
            seq_a: sequences::constant_halving(unit),
            seq_b: sequences::constant_thirding(unit),
        },
        Case {
            id: "family-uniform-shift",
            params: Params::new().with("k", 2.0),
            interval: unit,
            tau: 1e-6,
            seq_a: sequences::constant_halving(unit),
            seq_b: sequences::sloped_halving(unit),
        },
        Case {
            id: "ftc-pathological",
            params: Params::new(),
            interval: unit,
            tau: 1e-3,
            seq_a: sequences::cubic_near_zero(32.0, 0.04),
            seq_b: sequences::cubic_near_zero(24.0, 0.03),
        },
    ];

    for (i, case) in cases.iter().enumerate() {
        let (f, _) = catalog_get(case.id, &case.params).unwrap();
        let f = f.on_domain(case.interval);
        let rule = StoppingRule::new(case.tau, 30, 6);
        let seed_a = derive(0xA11CE, i as u64);
        let seed_b = derive(0xB0B, 1000 + i as u64);
        let a = integrate_sequential(&f, &case.seq_a, case.interval, &rule, &policy(seed_a), seed_a)
            .unwrap();
        let b = integrate_sequential(&f, &case.seq_b, case.interval, &rule, &policy(seed_b), seed_b)
            .unwrap();
        assert!(a.certified && b.certified, "{} [{i}] failed to certify", case.id);
        assert!(
            (a.estimate - b.estimate).abs() <= 2.0 * case.tau,
            "{} [{i}]: {} vs {} differ by {:.3e} > 2tau",
            case.id,
            a.estimate,
            b.estimate,
            (a.estimate - b.estimate).abs()
        );
        // And both sit on the closed-form value.
        let (reference, _) = oracle_value(case.id, &case.params, case.interval).unwrap();
        let tol = if case.id == "ftc-pathological" { 1e-2 } else { 5.0 * case.tau };
        assert!(
            (a.estimate - reference).abs() <= tol,
            "{} [{i}]: estimate {} vs reference {reference}",
            case.id,
            a.estimate
        );
    }
}

/// `∫_a^b = ∫_a^c + ∫_c^b` with the full run forced to tag `c`.
#[test]
fn additivity_at_random_interior_points() {
    let domain = Interval::new(0.0, 4.0).unwrap();
    let (f, _) = catalog_get("poly", &Params::new().with_list("coeffs", &[0.0, 4.0, -1.0])).unwrap();
    let f = f.on_domain(domain);
    let tau = 1e-6;
    let rule = StoppingRule::new(tau, 30, 6);
    let mut stream = gaugelab_core::seeded::SeedStream::new(0xADD);
    for case in 0..10u64 {
        let c = domain.a() + stream.next_in(0.15, 0.85) * domain.width();
        let width = domain.width();
        let full_seq = GaugeSequence::new_decreasing(move |n| {
            let base = Gauge::constant(width * 0.5f64.powi(n as i32));
            Gauge::forced_tag(c, base.clone(), base)
        });
        let left = Interval::new(domain.a(), c).unwrap();
        let right = Interval::new(c, domain.b()).unwrap();
        let s1 = derive(0xADD1, case);
        let s2 = derive(0xADD2, case);
        let s3 = derive(0xADD3, case);
        let whole =
            integrate_sequential(&f, &full_seq, domain, &rule, &policy(s1), s1).unwrap();
        let left_run = restrict(
            &f,
            &sequences::constant_halving(left),
            left,
            &rule,
            &policy(s2),
            s2,
        )
        .unwrap();
        let right_run = restrict(
            &f,
            &sequences::constant_halving(right),
            right,
            &rule,
            &policy(s3),
            s3,
        )
        .unwrap();
        assert!(whole.certified && left_run.certified && right_run.certified);
        let residual = (left_run.estimate + right_run.estimate - whole.estimate).abs();
        assert!(
            residual <= 3.0 * tau,
            "case {case} at c = {c}: additivity residual {residual:.3e}"
        );
    }
}

/// The certified index exhibits a single gauge for the ε-δ formulation:
/// fresh partitions of that gauge agree to within a small multiple of the
/// recorded gap.
#[test]
fn certified_index_yields_an_epsilon_gauge() {
    let unit = Interval::new(0.0, 1.0).unwrap();
    let (f, _) = catalog_get("poly", &Params::new().with_list("coeffs", &[0.0, 0.0, 1.0])).unwrap();
    let f = f.on_domain(unit);
    let gs = sequences::constant_halving(unit);
    let eps = 1e-4;
    let rule = StoppingRule::new(eps, 30, 3);
    let report = integrate_sequential(&f, &gs, unit, &rule, &policy(5), 5).unwrap();
    let index = report
        .first_index_with_gap_below(eps)
        .expect("run certified");
    let gauge = gs.at(index).halved();
    let budget = PartitionBudget::default();
    let sums: Vec<f64> = (0..5)
        .map(|r| {
            let p = cousin_partition(
                &gauge,
                unit,
                &TagPolicy::RandomUniform {
                    seed: derive(0xE9, r),
                },
                &budget,
            )
            .unwrap();
            riemann_sum(&f, &p).unwrap()
        })
        .collect();
    for (i, a) in sums.iter().enumerate() {
        for b in &sums[i + 1..] {
            assert!(
                (a - b).abs() <= 3.0 * eps,
                "fresh partitions disagree by {:.3e}",
                (a - b).abs()
            );
        }
    }
}

/// Integrand evaluation is reentrant: the same sum computed on four
/// concurrent workers is bit-identical.
#[test]
fn concurrent_sums_are_bit_identical() {
    let unit = Interval::new(0.0, 1.0).unwrap();
    let f = Integrand::from_fn("wavy", unit, |x| (13.0 * x).sin() * x + 0.3);
    let p = cousin_partition(
        &Gauge::constant(0.01),
        unit,
        &TagPolicy::RandomUniform { seed: 77 },
        &PartitionBudget::default(),
    )
    .unwrap();
    let baseline = riemann_sum(&f, &p).unwrap();
    let results: Vec<f64> = std::thread::scope(|scope| {
        (0..4)
            .map(|_| scope.spawn(|| riemann_sum(&f, &p).unwrap()))
            .collect::<Vec<_>>()
            .into_iter()
            .map(|h| h.join().unwrap())
            .collect()
    });
    for r in results {
        assert_eq!(r.to_bits(), baseline.to_bits());
    }
}

/// With the parallel feature on, a single-threaded pool must reproduce
/// the default pool's report byte for byte.
#[cfg(feature = "parallel")]
#[test]
fn thread_count_does_not_change_reports() {
    let unit = Interval::new(0.0, 1.0).unwrap();
    let (f, _) = catalog_get("poly", &Params::new().with_list("coeffs", &[0.5, 1.0, -0.5])).unwrap();
    let f = f.on_domain(unit);
    let gs = sequences::constant_halving(unit);
    let rule = StoppingRule::new(1e-6, 25, 3);
    let default_pool = integrate_sequential(&f, &gs, unit, &rule, &policy(9), 9).unwrap();
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| integrate_sequential(&f, &gs, unit, &rule, &policy(9), 9).unwrap());
    assert_eq!(
        serde_json::to_string(&default_pool).unwrap(),
        serde_json::to_string(&single).unwrap()
    );
}
