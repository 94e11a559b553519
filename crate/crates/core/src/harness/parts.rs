//! The two product/composition identities: integration by parts content
//! (`∫f₁'f₂ = f₁f₂|ᵃᵇ − ∫f₁f₂'`) and change of variables content
//! (`∫_{ψ(a)}^{ψ(b)} f' = ∫_a^b (f'∘ψ)·ψ'`). Both are checked by formula,
//! with all derivative partners supplied by the caller.

use crate::error::Result;
use crate::integrand::Integrand;
use crate::integrator::{default_gauge_sequence, StoppingRule};
use crate::interval::Interval;
use crate::seeded::derive;
use crate::tag::Tag;

use super::{Harness, PropertyReport, ReportBuilder};

/// Functions and derivative partners for [`check_parts_and_substitution`].
#[derive(Clone)]
pub struct PartsInput {
    pub f1: Integrand,
    pub f1_deriv: Integrand,
    pub f2: Integrand,
    pub f2_deriv: Integrand,
    /// Substitution map; must be monotone increasing on the interval.
    pub psi: Integrand,
    pub psi_deriv: Integrand,
    /// The integrand `f'` of the change-of-variables identity.
    pub f_deriv: Integrand,
}

pub fn check_parts_and_substitution(
    harness: &Harness,
    input: &PartsInput,
    interval: Interval,
    tau: f64,
    seed: u64,
) -> PropertyReport {
    let mut builder = ReportBuilder::new(format!(
        "parts-substitution[{},{},{}]",
        input.f1.name(),
        input.f2.name(),
        input.psi.name()
    ));
    builder.tolerance("tau", tau);
    builder.tolerance("identity", 3.0 * tau);

    builder.case(derive(seed, 1), identity_a(harness, input, interval, tau, derive(seed, 1)));
    builder.case(derive(seed, 2), identity_b(harness, input, interval, tau, derive(seed, 2)));
    builder.finish()
}

fn identity_a(
    harness: &Harness,
    input: &PartsInput,
    interval: Interval,
    tau: f64,
    seed: u64,
) -> Result<Vec<String>> {
    let rule = StoppingRule::new(tau, 30, 6);
    let gs = default_gauge_sequence(interval);
    let lhs_integrand = Integrand::product("f1'*f2", interval, &input.f1_deriv, &input.f2);
    let rhs_integrand = Integrand::product("f1*f2'", interval, &input.f1, &input.f2_deriv);
    let lhs = harness
        .estimate(&lhs_integrand, &gs, interval, &rule, derive(seed, 1))?
        .0;
    let int_rhs = harness
        .estimate(&rhs_integrand, &gs, interval, &rule, derive(seed, 2))?
        .0;
    let boundary = input.f1.eval(&Tag::new(interval.b())) * input.f2.eval(&Tag::new(interval.b()))
        - input.f1.eval(&Tag::new(interval.a())) * input.f2.eval(&Tag::new(interval.a()));
    let err = (lhs - (boundary - int_rhs)).abs();
    if err > 3.0 * tau {
        Ok(vec![format!(
            "parts identity: |∫f1'f2 − (f1f2|ab − ∫f1f2')| = {err:.3e} > {:.3e}",
            3.0 * tau
        )])
    } else {
        Ok(vec![])
    }
}

fn identity_b(
    harness: &Harness,
    input: &PartsInput,
    interval: Interval,
    tau: f64,
    seed: u64,
) -> Result<Vec<String>> {
    let rule = StoppingRule::new(tau, 30, 6);
    let psi_a = input.psi.eval(&Tag::new(interval.a()));
    let psi_b = input.psi.eval(&Tag::new(interval.b()));
    let image = Interval::new(psi_a, psi_b)?;

    let direct = harness
        .estimate(
            &input.f_deriv.on_domain(image),
            &default_gauge_sequence(image),
            image,
            &rule,
            derive(seed, 1),
        )?
        .0;

    let psi = input.psi.clone();
    let f_deriv = input.f_deriv.clone();
    let psi_deriv = input.psi_deriv.clone();
    let composed = Integrand::new("(f'∘ψ)·ψ'", interval, move |t: &Tag| {
        f_deriv.eval(&Tag::new(psi.eval(t))) * psi_deriv.eval(t)
    });
    let pulled_back = harness
        .estimate(
            &composed,
            &default_gauge_sequence(interval),
            interval,
            &rule,
            derive(seed, 2),
        )?
        .0;

    let err = (direct - pulled_back).abs();
    if err > 3.0 * tau {
        Ok(vec![format!(
            "substitution identity: |∫_ψ(a)^ψ(b) f' − ∫(f'∘ψ)ψ'| = {err:.3e} > {:.3e}",
            3.0 * tau
        )])
    } else {
        Ok(vec![])
    }
}
