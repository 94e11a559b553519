//! The shared corpus of integrands: named families with declared
//! reference values, derivative partners and convergence metadata.
//!
//! Reference values come from two kinds of rules. Closed-form entries
//! evaluate an antiderivative difference. Oracle entries run a documented
//! independent procedure (plain midpoint refinement plus endpoint
//! extrapolation) that shares no code with the gauge integrator, so the
//! two routes can check each other.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::integrand::{Integrand, Provenance};
use crate::interval::Interval;
use crate::parallel;
use crate::tag::Tag;

/// Parameter bag for catalog constructors: scalar and list values by name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params {
    scalars: BTreeMap<String, f64>,
    lists: BTreeMap<String, Vec<f64>>,
}

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.scalars.insert(key.to_string(), value);
        self
    }

    pub fn with_list(mut self, key: &str, values: &[f64]) -> Self {
        self.lists.insert(key.to_string(), values.to_vec());
        self
    }

    pub fn scalar(&self, key: &str) -> Option<f64> {
        self.scalars.get(key).copied()
    }

    pub fn list(&self, key: &str) -> Option<&[f64]> {
        self.lists.get(key).map(|v| v.as_slice())
    }

    fn keys(&self) -> impl Iterator<Item = &str> {
        self.scalars.keys().chain(self.lists.keys()).map(|s| s.as_str())
    }

    fn positive_int(&self, id: &str, key: &str, default: Option<u32>) -> Result<u32> {
        let raw = match (self.scalar(key), default) {
            (Some(v), _) => v,
            (None, Some(d)) => return Ok(d),
            (None, None) => {
                return Err(Error::BadParams {
                    id: id.to_string(),
                    reason: format!("missing required parameter `{key}`"),
                })
            }
        };
        if !(1.0..=1e9).contains(&raw) || raw.fract() != 0.0 {
            return Err(Error::BadParams {
                id: id.to_string(),
                reason: format!("`{key}` must be a positive integer, got {raw}"),
            });
        }
        Ok(raw as u32)
    }
}

type ClosedFormFn = Arc<dyn Fn(&Params, Interval) -> Result<f64> + Send + Sync>;
type OracleFn = Arc<dyn Fn(&Params, Interval) -> Result<(f64, f64)> + Send + Sync>;

/// How the reference value for an entry is produced.
#[derive(Clone)]
pub enum ReferenceRule {
    ClosedForm {
        description: &'static str,
        eval: ClosedFormFn,
    },
    Oracle {
        description: &'static str,
        eval: OracleFn,
    },
    None,
}

impl ReferenceRule {
    pub fn kind(&self) -> &'static str {
        match self {
            ReferenceRule::ClosedForm { .. } => "closed-form",
            ReferenceRule::Oracle { .. } => "oracle",
            ReferenceRule::None => "none",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            ReferenceRule::ClosedForm { description, .. } => description,
            ReferenceRule::Oracle { description, .. } => description,
            ReferenceRule::None => "",
        }
    }
}

impl std::fmt::Debug for ReferenceRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ReferenceRule::{}", self.kind())
    }
}

/// Derivative partners by catalog id.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Partners {
    pub antiderivative: Option<&'static str>,
    pub derivative: Option<&'static str>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonotoneDirection {
    NonDecreasing,
    NonIncreasing,
}

type RateFn = Arc<dyn Fn(u32) -> f64 + Send + Sync>;

/// Convergence metadata for `k`-indexed families.
#[derive(Clone)]
pub struct FamilyMeta {
    /// Pointwise monotonicity of `k ↦ f_k`, if declared.
    pub monotone: Option<MonotoneDirection>,
    /// Declared sup-norm bound `‖f_k − limit‖_∞ ≤ rate(k)`.
    pub uniform_rate: Option<RateFn>,
    /// Declared integral of the pointwise limit over the natural domain.
    pub limit_integral: Option<f64>,
    /// Declared signed tail `∫ f_k − limit_integral`.
    pub signed_tail: Option<RateFn>,
}

impl std::fmt::Debug for FamilyMeta {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FamilyMeta")
            .field("monotone", &self.monotone)
            .field("has_uniform_rate", &self.uniform_rate.is_some())
            .field("limit_integral", &self.limit_integral)
            .finish_non_exhaustive()
    }
}

type BuildFn = Arc<dyn Fn(&Params) -> Result<Integrand> + Send + Sync>;

/// One registered integrand family.
#[derive(Clone)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub params_doc: &'static str,
    allowed_params: &'static [&'static str],
    build: BuildFn,
    pub reference_rule: ReferenceRule,
    pub partners: Partners,
    pub family_meta: Option<FamilyMeta>,
}

impl std::fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CatalogEntry")
            .field("id", &self.id)
            .field("reference_rule", &self.reference_rule)
            .finish_non_exhaustive()
    }
}

/// Manifest row exported for CLI discovery.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ManifestEntry {
    pub id: &'static str,
    pub params: &'static str,
    pub reference_rule: &'static str,
    pub reference_description: &'static str,
    #[serde(skip_serializing_if = "partners_empty")]
    pub partners: Partners,
}

fn partners_empty(p: &Partners) -> bool {
    p.antiderivative.is_none() && p.derivative.is_none()
}

pub struct Catalog {
    entries: BTreeMap<&'static str, CatalogEntry>,
}

impl Catalog {
    /// The global registry; immutable after first use.
    pub fn global() -> &'static Catalog {
        static CATALOG: OnceLock<Catalog> = OnceLock::new();
        CATALOG.get_or_init(build_catalog)
    }

    pub fn ids(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }

    pub fn entry(&self, id: &str) -> Result<&CatalogEntry> {
        self.entries
            .get(id)
            .ok_or_else(|| Error::UnknownId(id.to_string()))
    }

    pub fn manifest(&self) -> Vec<ManifestEntry> {
        self.entries
            .values()
            .map(|e| ManifestEntry {
                id: e.id,
                params: e.params_doc,
                reference_rule: e.reference_rule.kind(),
                reference_description: e.reference_rule.description(),
                partners: e.partners.clone(),
            })
            .collect()
    }
}

/// Builds the integrand for `id` and returns it with its entry.
pub fn catalog_get(id: &str, params: &Params) -> Result<(Integrand, &'static CatalogEntry)> {
    let entry = Catalog::global().entry(id)?;
    for key in params.keys() {
        if !entry.allowed_params.contains(&key) {
            return Err(Error::BadParams {
                id: id.to_string(),
                reason: format!("unknown parameter `{key}`"),
            });
        }
    }
    let integrand = (entry.build)(params)?;
    Ok((integrand, entry))
}

/// Reference value and uncertainty for `id` over `interval`.
///
/// Closed-form entries return an exact antiderivative difference with zero
/// uncertainty; oracle entries run their documented procedure.
pub fn oracle_value(id: &str, params: &Params, interval: Interval) -> Result<(f64, f64)> {
    let entry = Catalog::global().entry(id)?;
    match &entry.reference_rule {
        ReferenceRule::ClosedForm { eval, .. } => Ok((eval(params, interval)?, 0.0)),
        ReferenceRule::Oracle { eval, .. } => eval(params, interval),
        ReferenceRule::None => Err(Error::NoReference { id: id.to_string() }),
    }
}

// --- entry constructions ---------------------------------------------------

const WIDE: f64 = 1e6;

fn wide_domain() -> Interval {
    Interval::new(-WIDE, WIDE).expect("static domain")
}

fn unit_domain() -> Interval {
    Interval::new(0.0, 1.0).expect("static domain")
}

fn poly_coeffs(id: &str, params: &Params) -> Result<Vec<f64>> {
    let coeffs = params
        .list("coeffs")
        .ok_or_else(|| Error::BadParams {
            id: id.to_string(),
            reason: "missing required list parameter `coeffs`".into(),
        })?
        .to_vec();
    if coeffs.is_empty() || coeffs.len() > 32 || coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::BadParams {
            id: id.to_string(),
            reason: "`coeffs` must be 1..=32 finite values (ascending powers)".into(),
        });
    }
    Ok(coeffs)
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Antiderivative of a coefficient list, evaluated at `x`.
fn poly_primitive(coeffs: &[f64], x: f64) -> f64 {
    let prim: Vec<f64> = std::iter::once(0.0)
        .chain(coeffs.iter().enumerate().map(|(i, c)| c / (i as f64 + 1.0)))
        .collect();
    horner(&prim, x)
}

fn dirichlet_eval(t: &Tag) -> f64 {
    if t.is_exact_rational() {
        1.0
    } else {
        0.0
    }
}

/// `F(x) = x² sin(1/x²)` with `F(0) = 0`.
fn pathological_primitive(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x * (1.0 / (x * x)).sin()
    }
}

/// `F'(x) = 2x sin(1/x²) − (2/x) cos(1/x²)` for `x ≠ 0`, `F'(0) = 0`.
fn pathological_derivative(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let u = 1.0 / (x * x);
    if !u.is_finite() {
        // Phase below float resolution; unreachable for budgeted partitions.
        return 0.0;
    }
    2.0 * x * u.sin() - (2.0 / x) * u.cos()
}

/// `(1/x)·sin(1/x³)` with the convention value 0 at the origin.
fn denjoy_eval(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let u = 1.0 / (x * x * x);
    if !u.is_finite() {
        return 0.0;
    }
    u.sin() / x
}

fn capped_invsqrt(k: f64, x: f64) -> f64 {
    if x <= 0.0 {
        k
    } else {
        k.min(1.0 / x.sqrt())
    }
}

/// Antiderivative of `min(k, x^{−1/2})` on `x ≥ 0`.
fn capped_invsqrt_primitive(k: f64, x: f64) -> f64 {
    let cut = 1.0 / (k * k);
    if x <= cut {
        k * x
    } else {
        2.0 * x.sqrt() - 1.0 / k
    }
}

// --- the independent oracle for the oscillatory entry ----------------------

/// Uniform midpoint sum of `g` over `[a, b]` with `m` cells. Chunked so the
/// parallel path combines partial sums in fixed order (bit-identical to
/// the sequential path).
fn midpoint_sum(g: &(impl Fn(f64) -> f64 + Sync), a: f64, b: f64, m: u64) -> f64 {
    const CHUNK: u64 = 1 << 16;
    let h = (b - a) / m as f64;
    let chunks: Vec<(u64, u64)> = (0..m.div_ceil(CHUNK))
        .map(|c| (c * CHUNK, ((c + 1) * CHUNK).min(m)))
        .collect();
    let partials = parallel::map_collect(chunks, |(lo, hi)| {
        let mut s = 0.0;
        for j in lo..hi {
            s += g(a + (j as f64 + 0.5) * h);
        }
        s
    });
    partials.into_iter().sum::<f64>() * h
}

/// Midpoint refinement until two successive doublings agree to `tol`.
/// Returns the finest value and the last observed change.
fn refine_midpoint(
    g: &(impl Fn(f64) -> f64 + Sync),
    a: f64,
    b: f64,
    m0: u64,
    tol: f64,
) -> (f64, f64) {
    let mut m = m0.max(64);
    let mut prev = midpoint_sum(g, a, b, m);
    let mut change = f64::INFINITY;
    for _ in 0..12 {
        m *= 2;
        let next = midpoint_sum(g, a, b, m);
        change = (next - prev).abs();
        prev = next;
        if change < tol {
            break;
        }
    }
    (prev, change)
}

/// Tail-extrapolated reference for the oscillatory integrand: integrate
/// over `[η, b]` by midpoint refinement for a decreasing schedule of `η`,
/// extrapolate the cubic tail to `η → 0`, and report the extrapolation
/// spread (plus refinement residuals and the analytic tail bound) as the
/// uncertainty. No partitions or gauges are involved.
fn denjoy_oracle(interval: Interval) -> Result<(f64, f64)> {
    let g = |x: f64| denjoy_eval(x);
    let b = interval.b();
    if interval.a() > 0.0 {
        // No singularity inside; resolve the oscillation at the left edge.
        let period = std::f64::consts::TAU / 3.0 * interval.a().powi(4);
        let m0 = ((interval.width() / (period / 8.0)).ceil() as u64).clamp(1 << 10, 1 << 27);
        let (value, residual) = refine_midpoint(&g, interval.a(), b, m0, 1e-8);
        return Ok((value, residual + 1e-12));
    }
    let etas: [f64; 3] = [0.05, 0.04, 0.03];
    let mut values = Vec::new();
    let mut residuals = 0.0;
    for eta in etas {
        let period = std::f64::consts::TAU / 3.0 * eta.powi(4);
        let m0 = (((b - eta) / (period / 8.0)).ceil() as u64).clamp(1 << 10, 1 << 27);
        let (v, r) = refine_midpoint(&g, eta, b, m0, 1e-8);
        values.push((eta, v));
        residuals += r;
    }
    // Fit I(η) ≈ I − c·η³ on the two finest pairs and compare.
    let rich = |(e1, v1): (f64, f64), (e2, v2): (f64, f64)| {
        (v2 * e1.powi(3) - v1 * e2.powi(3)) / (e1.powi(3) - e2.powi(3))
    };
    let r01 = rich(values[0], values[1]);
    let r12 = rich(values[1], values[2]);
    let tail_bound = 2.0 / 3.0 * etas[2].powi(3);
    let uncertainty = (r01 - r12).abs() + residuals + tail_bound * 0.1;
    Ok((r12, uncertainty))
}

// --- registry ---------------------------------------------------------------

fn closed_form(
    description: &'static str,
    eval: impl Fn(&Params, Interval) -> Result<f64> + Send + Sync + 'static,
) -> ReferenceRule {
    ReferenceRule::ClosedForm {
        description,
        eval: Arc::new(eval),
    }
}

fn build_catalog() -> Catalog {
    let mut entries: BTreeMap<&'static str, CatalogEntry> = BTreeMap::new();
    let mut add = |e: CatalogEntry| {
        entries.insert(e.id, e);
    };

    add(CatalogEntry {
        id: "poly",
        params_doc: "coeffs: list (ascending powers); a, b: optional domain (default ±1e6)",
        allowed_params: &["coeffs", "a", "b"],
        build: Arc::new(|p| {
            let coeffs = poly_coeffs("poly", p)?;
            let domain = match (p.scalar("a"), p.scalar("b")) {
                (Some(a), Some(b)) => Interval::new(a, b)?,
                _ => wide_domain(),
            };
            Ok(Integrand::from_fn("poly", domain, move |x| {
                horner(&coeffs, x)
            }))
        }),
        reference_rule: closed_form("antiderivative with coefficients c_i/(i+1)", |p, i| {
            let coeffs = poly_coeffs("poly", p)?;
            Ok(poly_primitive(&coeffs, i.b()) - poly_primitive(&coeffs, i.a()))
        }),
        partners: Partners::default(),
        family_meta: None,
    });

    add(CatalogEntry {
        id: "dirichlet",
        params_doc: "(none)",
        allowed_params: &[],
        build: Arc::new(|_| {
            Ok(Integrand::new("dirichlet", unit_domain(), dirichlet_eval)
                .with_reference(0.0, Provenance::ClosedForm))
        }),
        reference_rule: closed_form("zero on every subinterval", |_, _| Ok(0.0)),
        partners: Partners::default(),
        family_meta: None,
    });

    add(CatalogEntry {
        id: "step",
        params_doc: "at (default 0.5), left (default 1), right (default 0); value at `at` is `right`",
        allowed_params: &["at", "left", "right"],
        build: Arc::new(|p| {
            let at = p.scalar("at").unwrap_or(0.5);
            let left = p.scalar("left").unwrap_or(1.0);
            let right = p.scalar("right").unwrap_or(0.0);
            Ok(Integrand::from_fn("step", wide_domain(), move |x| {
                if x < at {
                    left
                } else {
                    right
                }
            }))
        }),
        reference_rule: closed_form("piecewise-linear antiderivative", |p, i| {
            let at = p.scalar("at").unwrap_or(0.5);
            let left = p.scalar("left").unwrap_or(1.0);
            let right = p.scalar("right").unwrap_or(0.0);
            let prim = |x: f64| left * x.min(at) + right * (x - at).max(0.0);
            Ok(prim(i.b()) - prim(i.a()))
        }),
        partners: Partners::default(),
        family_meta: None,
    });

    add(CatalogEntry {
        id: "sin",
        params_doc: "(none)",
        allowed_params: &[],
        build: Arc::new(|_| Ok(Integrand::from_fn("sin", wide_domain(), f64::sin))),
        reference_rule: closed_form("-cos antiderivative", |_, i| Ok(-i.b().cos() + i.a().cos())),
        partners: Partners {
            antiderivative: None,
            derivative: Some("cos"),
        },
        family_meta: None,
    });

    add(CatalogEntry {
        id: "cos",
        params_doc: "(none)",
        allowed_params: &[],
        build: Arc::new(|_| Ok(Integrand::from_fn("cos", wide_domain(), f64::cos))),
        reference_rule: closed_form("sin antiderivative", |_, i| Ok(i.b().sin() - i.a().sin())),
        partners: Partners::default(),
        family_meta: None,
    });

    add(CatalogEntry {
        id: "oscillatory-denjoy",
        params_doc: "(none)",
        allowed_params: &[],
        build: Arc::new(|_| {
            Ok(Integrand::from_fn("oscillatory-denjoy", unit_domain(), denjoy_eval)
                .with_singularities([0.0]))
        }),
        reference_rule: ReferenceRule::Oracle {
            description: "midpoint refinement over [η, b] with cubic-tail extrapolation η → 0",
            eval: Arc::new(|_, i| denjoy_oracle(i)),
        },
        partners: Partners::default(),
        family_meta: None,
    });

    add(CatalogEntry {
        id: "ftc-pathological",
        params_doc: "(none)",
        allowed_params: &[],
        build: Arc::new(|_| {
            Ok(
                Integrand::from_fn("ftc-pathological", unit_domain(), pathological_derivative)
                    .with_singularities([0.0]),
            )
        }),
        reference_rule: closed_form("difference of x²·sin(1/x²)", |_, i| {
            Ok(pathological_primitive(i.b()) - pathological_primitive(i.a()))
        }),
        partners: Partners {
            antiderivative: Some("ftc-pathological-primitive"),
            derivative: None,
        },
        family_meta: None,
    });

    add(CatalogEntry {
        id: "ftc-pathological-primitive",
        params_doc: "(none)",
        allowed_params: &[],
        build: Arc::new(|_| {
            Ok(Integrand::from_fn(
                "ftc-pathological-primitive",
                unit_domain(),
                pathological_primitive,
            ))
        }),
        reference_rule: ReferenceRule::None,
        partners: Partners {
            antiderivative: None,
            derivative: Some("ftc-pathological"),
        },
        family_meta: None,
    });

    add(CatalogEntry {
        id: "family-power",
        params_doc: "k: positive integer exponent",
        allowed_params: &["k"],
        build: Arc::new(|p| {
            let k = p.positive_int("family-power", "k", None)?;
            if k > 60 {
                return Err(Error::BadParams {
                    id: "family-power".into(),
                    reason: "k must be at most 60".into(),
                });
            }
            Ok(Integrand::from_fn(
                format!("x^{k}"),
                unit_domain(),
                move |x| x.powi(k as i32),
            ))
        }),
        reference_rule: closed_form("x^(k+1)/(k+1) antiderivative", |p, i| {
            let k = p.positive_int("family-power", "k", None)? as i32;
            let prim = |x: f64| x.powi(k + 1) / f64::from(k + 1);
            Ok(prim(i.b()) - prim(i.a()))
        }),
        partners: Partners::default(),
        family_meta: Some(FamilyMeta {
            monotone: Some(MonotoneDirection::NonIncreasing),
            uniform_rate: None,
            limit_integral: Some(0.0),
            signed_tail: Some(Arc::new(|k| 1.0 / f64::from(k + 1))),
        }),
    });

    add(CatalogEntry {
        id: "family-capped-invsqrt",
        params_doc: "k: positive integer cap",
        allowed_params: &["k"],
        build: Arc::new(|p| {
            let k = f64::from(p.positive_int("family-capped-invsqrt", "k", None)?);
            Ok(Integrand::from_fn(
                format!("min({k},x^-1/2)"),
                unit_domain(),
                move |x| capped_invsqrt(k, x),
            )
            .with_singularities([0.0]))
        }),
        reference_rule: closed_form("split antiderivative at 1/k²", |p, i| {
            let k = f64::from(p.positive_int("family-capped-invsqrt", "k", None)?);
            Ok(capped_invsqrt_primitive(k, i.b()) - capped_invsqrt_primitive(k, i.a()))
        }),
        partners: Partners::default(),
        family_meta: Some(FamilyMeta {
            monotone: Some(MonotoneDirection::NonDecreasing),
            uniform_rate: None,
            limit_integral: Some(2.0),
            signed_tail: Some(Arc::new(|k| -1.0 / f64::from(k))),
        }),
    });

    add(CatalogEntry {
        id: "family-uniform-shift",
        params_doc: "k: positive integer; f_k(x) = x + 1/k",
        allowed_params: &["k"],
        build: Arc::new(|p| {
            let k = f64::from(p.positive_int("family-uniform-shift", "k", None)?);
            Ok(Integrand::from_fn(
                format!("x+1/{k}"),
                unit_domain(),
                move |x| x + 1.0 / k,
            ))
        }),
        reference_rule: closed_form("x²/2 + x/k antiderivative", |p, i| {
            let k = f64::from(p.positive_int("family-uniform-shift", "k", None)?);
            let prim = |x: f64| 0.5 * x * x + x / k;
            Ok(prim(i.b()) - prim(i.a()))
        }),
        partners: Partners::default(),
        family_meta: Some(FamilyMeta {
            monotone: Some(MonotoneDirection::NonIncreasing),
            uniform_rate: Some(Arc::new(|k| 1.0 / f64::from(k))),
            limit_integral: Some(0.5),
            signed_tail: Some(Arc::new(|k| 1.0 / f64::from(k))),
        }),
    });

    add(CatalogEntry {
        id: "family-sin-shrink",
        params_doc: "k: positive integer; f_k(x) = sin(x)/k",
        allowed_params: &["k"],
        build: Arc::new(|p| {
            let k = f64::from(p.positive_int("family-sin-shrink", "k", None)?);
            Ok(Integrand::from_fn(
                format!("sin(x)/{k}"),
                Interval::new(0.0, std::f64::consts::PI).expect("static domain"),
                move |x| x.sin() / k,
            ))
        }),
        reference_rule: closed_form("-cos(x)/k antiderivative", |p, i| {
            let k = f64::from(p.positive_int("family-sin-shrink", "k", None)?);
            Ok((-i.b().cos() + i.a().cos()) / k)
        }),
        partners: Partners::default(),
        family_meta: Some(FamilyMeta {
            monotone: None,
            uniform_rate: Some(Arc::new(|k| 1.0 / f64::from(k))),
            limit_integral: Some(0.0),
            signed_tail: Some(Arc::new(|k| 2.0 / f64::from(k))),
        }),
    });

    Catalog { entries }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola_reference_is_exact() {
        let params = Params::new().with_list("coeffs", &[0.0, 4.0, -1.0]);
        let (f, entry) = catalog_get("poly", &params).unwrap();
        assert_eq!(f.eval_at(1.0), 3.0);
        assert_eq!(entry.reference_rule.kind(), "closed-form");
        let i = Interval::new(0.0, 4.0).unwrap();
        let (v, u) = oracle_value("poly", &params, i).unwrap();
        assert!((v - 32.0 / 3.0).abs() < 1e-12);
        assert_eq!(u, 0.0);
    }

    #[test]
    fn dirichlet_reads_tag_identity() {
        let (f, entry) = catalog_get("dirichlet", &Params::new()).unwrap();
        assert_eq!(entry.reference_rule.kind(), "closed-form");
        assert_eq!(f.eval(&Tag::with_exact(2, 7).unwrap()), 1.0);
        assert_eq!(f.eval(&Tag::new(0.2857142857)), 0.0);
        let (v, _) = oracle_value("dirichlet", &Params::new(), unit_domain()).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn step_reference_is_piecewise_area() {
        let (v, u) = oracle_value("step", &Params::new(), unit_domain()).unwrap();
        assert_eq!(v, 0.5);
        assert_eq!(u, 0.0);
        let (f, _) = catalog_get("step", &Params::new()).unwrap();
        assert_eq!(f.eval_at(0.4999), 1.0);
        assert_eq!(f.eval_at(0.5), 0.0);
    }

    #[test]
    fn capped_invsqrt_reference() {
        let params = Params::new().with("k", 4.0);
        let (v, _) = oracle_value("family-capped-invsqrt", &params, unit_domain()).unwrap();
        assert!((v - 1.75).abs() < 1e-15);
        let (f, entry) = catalog_get("family-capped-invsqrt", &params).unwrap();
        assert_eq!(f.eval_at(0.0), 4.0);
        assert_eq!(f.eval_at(1.0 / 32.0), 4.0);
        assert!((f.eval_at(0.25) - 2.0).abs() < 1e-15);
        assert!(entry.family_meta.is_some());
    }

    #[test]
    fn denjoy_is_an_oracle_entry() {
        let (f, entry) = catalog_get("oscillatory-denjoy", &Params::new()).unwrap();
        assert_eq!(entry.reference_rule.kind(), "oracle");
        assert_eq!(f.eval_at(0.0), 0.0);
        assert_eq!(f.singularities(), &[0.0]);
    }

    #[test]
    fn unknown_ids_and_bad_params_are_rejected() {
        assert!(matches!(
            catalog_get("missing", &Params::new()),
            Err(Error::UnknownId(_))
        ));
        assert!(matches!(
            catalog_get("dirichlet", &Params::new().with("k", 2.0)),
            Err(Error::BadParams { .. })
        ));
        assert!(matches!(
            catalog_get("family-power", &Params::new().with("k", 2.5)),
            Err(Error::BadParams { .. })
        ));
        assert!(matches!(
            catalog_get("poly", &Params::new()),
            Err(Error::BadParams { .. })
        ));
    }

    #[test]
    fn no_reference_entries_say_so() {
        assert!(matches!(
            oracle_value("ftc-pathological-primitive", &Params::new(), unit_domain()),
            Err(Error::NoReference { .. })
        ));
    }

    #[test]
    fn partner_ids_resolve() {
        let catalog = Catalog::global();
        for id in catalog.ids() {
            let entry = catalog.entry(id).unwrap();
            for partner in [entry.partners.antiderivative, entry.partners.derivative]
                .into_iter()
                .flatten()
            {
                assert!(catalog.entry(partner).is_ok(), "{id} -> {partner}");
            }
        }
    }

    #[test]
    fn manifest_covers_all_entries() {
        let manifest = Catalog::global().manifest();
        assert!(manifest.iter().any(|m| m.id == "dirichlet"));
        assert!(manifest.iter().any(|m| m.id == "oscillatory-denjoy"));
        let json = serde_json::to_string(&manifest).unwrap();
        assert!(json.contains("\"referenceRule\":\"oracle\""));
    }

    #[test]
    fn pathological_pair_is_consistent_near_zero() {
        // F continuous at 0 with |F(x)| <= x².
        for i in 1..=100 {
            let x = i as f64 / 100.0 * 0.1;
            assert!(pathological_primitive(x).abs() <= x * x + 1e-18);
        }
        // Away from 0 the stored derivative matches centered differences.
        let h = 1e-6;
        for i in 1..=9 {
            let x = 0.1 + 0.1 * i as f64;
            let cd = (pathological_primitive(x + h) - pathological_primitive(x - h)) / (2.0 * h);
            assert!(
                (cd - pathological_derivative(x)).abs() < 1e-5,
                "mismatch at {x}"
            );
        }
    }

    #[test]
    fn denjoy_oracle_is_stable_on_singularity_free_subintervals() {
        let i = Interval::new(0.2, 1.0).unwrap();
        let (v, u) = denjoy_oracle(i).unwrap();
        assert!(u < 1e-6);
        // Independent sanity: crude Simpson on a fine grid.
        let n = 400_001u64;
        let h = i.width() / (n - 1) as f64;
        let mut s = 0.0;
        for j in 0..n {
            let x = i.a() + j as f64 * h;
            let w = if j == 0 || j == n - 1 {
                1.0
            } else if j % 2 == 1 {
                4.0
            } else {
                2.0
            };
            s += w * denjoy_eval(x);
        }
        s *= h / 3.0;
        assert!((v - s).abs() < 1e-5, "oracle {v} vs simpson {s}");
    }
}
