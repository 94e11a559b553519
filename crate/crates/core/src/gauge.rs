//! Gauges: strictly positive width functions `δ(x)`, and decreasing
//! families of them.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::tag::{enumeration_index, rational_enumeration, Tag};

/// Hints are materialized eagerly; enormous enumeration depths would bloat
/// every partition call, so the hint list is capped (evaluation itself is
/// exact at any depth).
const HINT_CAP: u64 = 512;

type PointwiseRule = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// The shape of a gauge.
#[derive(Clone)]
pub enum GaugeKind {
    /// `δ(x) = c`.
    Constant(f64),
    /// An arbitrary pure rule on the float value of the point.
    Pointwise(PointwiseRule),
    /// `eps / 2^m` at the `m`-th enumerated rational for `m <= depth`,
    /// `1` elsewhere. Rationality is read off the tag's exact identity.
    Dirichlet { eps: f64, depth: u64 },
    /// Forces `c` to appear as a tag: away from `c` the gauge drops below
    /// half the distance to `c`, so no cell tagged elsewhere can straddle it.
    ForcedTag {
        c: f64,
        left: Box<Gauge>,
        right: Box<Gauge>,
    },
    /// Pointwise minimum of two gauges.
    Min(Box<Gauge>, Box<Gauge>),
    /// `factor · inner`, with `0 < factor <= 1`. Keeps exact-identity
    /// awareness when a gauge has to be shrunk uniformly (a plain
    /// `Pointwise` wrapper would lose the Dirichlet tag handling).
    Scaled { factor: f64, inner: Box<Gauge> },
}

impl std::fmt::Debug for GaugeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GaugeKind::Constant(c) => write!(f, "Constant({c})"),
            GaugeKind::Pointwise(_) => write!(f, "Pointwise(<rule>)"),
            GaugeKind::Dirichlet { eps, depth } => {
                write!(f, "Dirichlet {{ eps: {eps}, depth: {depth} }}")
            }
            GaugeKind::ForcedTag { c, left, right } => f
                .debug_struct("ForcedTag")
                .field("c", c)
                .field("left", left)
                .field("right", right)
                .finish(),
            GaugeKind::Min(a, b) => f.debug_tuple("Min").field(a).field(b).finish(),
            GaugeKind::Scaled { factor, inner } => f
                .debug_struct("Scaled")
                .field("factor", factor)
                .field("inner", inner)
                .finish(),
        }
    }
}

/// A gauge plus candidate tags the partitioner should try first.
#[derive(Debug, Clone)]
pub struct Gauge {
    kind: GaugeKind,
    hints: Vec<Tag>,
}

impl Gauge {
    pub fn constant(c: f64) -> Self {
        Self {
            kind: GaugeKind::Constant(c),
            hints: Vec::new(),
        }
    }

    pub fn pointwise(rule: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            kind: GaugeKind::Pointwise(Arc::new(rule)),
            hints: Vec::new(),
        }
    }

    /// The gauge from the Dirichlet-function construction. The enumerated
    /// rationals up to `depth` (capped) are installed as hints so the
    /// partitioner can actually reach them as tags.
    pub fn dirichlet(eps: f64, depth: u64) -> Self {
        let hints = (1..=depth.min(HINT_CAP)).map(rational_enumeration).collect();
        Self {
            kind: GaugeKind::Dirichlet { eps, depth },
            hints,
        }
    }

    /// Gauge that forces `c` to be a tag of every fine partition, with the
    /// given gauges applying on either side of `c`.
    pub fn forced_tag(c: f64, left: Gauge, right: Gauge) -> Self {
        let mut hints = vec![Tag::new(c)];
        hints.extend_from_slice(&left.hints);
        hints.extend_from_slice(&right.hints);
        let mut g = Self {
            kind: GaugeKind::ForcedTag {
                c,
                left: Box::new(left),
                right: Box::new(right),
            },
            hints: Vec::new(),
        };
        g.hints = dedup_hints(hints);
        g
    }

    pub fn min(a: Gauge, b: Gauge) -> Self {
        let hints = dedup_hints(a.hints.iter().chain(b.hints.iter()).cloned().collect());
        Self {
            kind: GaugeKind::Min(Box::new(a), Box::new(b)),
            hints,
        }
    }

    /// Uniformly scaled copy; `factor` must be in `(0, 1]`.
    pub fn scaled(factor: f64, inner: Gauge) -> Self {
        assert!(
            factor > 0.0 && factor <= 1.0 && factor.is_finite(),
            "scale factor must be in (0, 1]"
        );
        let hints = inner.hints.clone();
        Self {
            kind: GaugeKind::Scaled {
                factor,
                inner: Box::new(inner),
            },
            hints,
        }
    }

    /// `δ/2`, used to turn the partitioner's containment guarantee into
    /// strict width-fineness for the original gauge.
    pub fn halved(&self) -> Gauge {
        Gauge::scaled(0.5, self.clone())
    }

    pub fn kind(&self) -> &GaugeKind {
        &self.kind
    }

    /// Candidate tags worth trying first, in no particular order.
    pub fn hints(&self) -> &[Tag] {
        &self.hints
    }

    /// Adds extra candidate tags.
    pub fn with_hints(mut self, extra: impl IntoIterator<Item = Tag>) -> Self {
        let mut all = self.hints;
        all.extend(extra);
        self.hints = dedup_hints(all);
        self
    }

    /// Points that some `ForcedTag` layer forces to become tags.
    pub fn forced_points(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.collect_forced(&mut out);
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    fn collect_forced(&self, out: &mut Vec<f64>) {
        match &self.kind {
            GaugeKind::ForcedTag { c, left, right } => {
                out.push(*c);
                left.collect_forced(out);
                right.collect_forced(out);
            }
            GaugeKind::Min(a, b) => {
                a.collect_forced(out);
                b.collect_forced(out);
            }
            GaugeKind::Scaled { inner, .. } => inner.collect_forced(out),
            _ => {}
        }
    }

    /// Evaluates the gauge at a tag. Errors if the result is not a strictly
    /// positive finite number.
    pub fn eval(&self, tag: &Tag) -> Result<f64> {
        let v = self.eval_raw(tag);
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(Error::GaugeNonPositive {
                at: tag.value(),
                value: v,
            })
        }
    }

    fn eval_raw(&self, tag: &Tag) -> f64 {
        match &self.kind {
            GaugeKind::Constant(c) => *c,
            GaugeKind::Pointwise(rule) => rule(tag.value()),
            GaugeKind::Dirichlet { eps, depth } => match tag.exact() {
                Some(r) => match enumeration_index(&r, *depth) {
                    Some(m) => eps * 0.5f64.powi(m.min(1 << 30) as i32),
                    None => 1.0,
                },
                None => 1.0,
            },
            GaugeKind::ForcedTag { c, left, right } => {
                let t = tag.value();
                if t < *c {
                    left.eval_raw(tag).min(0.5 * (c - t))
                } else if t > *c {
                    right.eval_raw(tag).min(0.5 * (t - c))
                } else {
                    left.eval_raw(tag).min(right.eval_raw(tag))
                }
            }
            GaugeKind::Min(a, b) => a.eval_raw(tag).min(b.eval_raw(tag)),
            GaugeKind::Scaled { factor, inner } => factor * inner.eval_raw(tag),
        }
    }
}

fn dedup_hints(hints: Vec<Tag>) -> Vec<Tag> {
    let mut seen = std::collections::HashSet::new();
    hints
        .into_iter()
        .filter(|t| seen.insert((t.value().to_bits(), t.exact())))
        .collect()
}

type Generator = Arc<dyn Fn(u32) -> Gauge + Send + Sync>;

/// A sequence of gauges `δ_n(x)`, indexed from 1.
///
/// With `enforce_decreasing` (the default), the realized gauge at index
/// `n + 1` is the pointwise minimum of the generator's output and the
/// realized gauge at `n`, so the family is non-increasing everywhere.
/// Generators that are decreasing by construction can opt out to avoid the
/// min-chain evaluation cost.
#[derive(Clone)]
pub struct GaugeSequence {
    generator: Generator,
    enforce_decreasing: bool,
}

impl std::fmt::Debug for GaugeSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GaugeSequence")
            .field("enforce_decreasing", &self.enforce_decreasing)
            .finish_non_exhaustive()
    }
}

impl GaugeSequence {
    pub fn new(generator: impl Fn(u32) -> Gauge + Send + Sync + 'static) -> Self {
        Self {
            generator: Arc::new(generator),
            enforce_decreasing: true,
        }
    }

    /// For generators that are already pointwise non-increasing in `n`.
    pub fn new_decreasing(generator: impl Fn(u32) -> Gauge + Send + Sync + 'static) -> Self {
        Self {
            generator: Arc::new(generator),
            enforce_decreasing: false,
        }
    }

    pub fn enforces_decreasing(&self) -> bool {
        self.enforce_decreasing
    }

    /// The realized gauge at index `n >= 1`.
    pub fn at(&self, n: u32) -> Gauge {
        assert!(n >= 1, "gauge sequence index is 1-based");
        if !self.enforce_decreasing {
            return (self.generator)(n);
        }
        let mut realized = (self.generator)(1);
        for k in 2..=n {
            realized = Gauge::min((self.generator)(k), realized);
        }
        realized
    }
}

/// Ready-made gauge sequences for the integrand families in the catalog.
///
/// All of them are pointwise non-increasing in the index by construction,
/// so they skip the enforcement min-chain.
pub mod sequences {
    use super::{Gauge, GaugeSequence};
    use crate::interval::Interval;
    use crate::tag::Tag;

    /// `δ_n = (b − a)/2^n`: constant gauges, halved per index.
    pub fn constant_halving(interval: Interval) -> GaugeSequence {
        let w = interval.width();
        GaugeSequence::new_decreasing(move |n| Gauge::constant(w * 0.5f64.powi(n as i32)))
    }

    /// `δ_n = (b − a)/3^n`: a second constant family for cross-checks.
    pub fn constant_thirding(interval: Interval) -> GaugeSequence {
        let w = interval.width();
        GaugeSequence::new_decreasing(move |n| Gauge::constant(w / 3f64.powi(n as i32)))
    }

    /// A sloped family `δ_n(x) = (0.4 + 0.3·sin²(3x))·(b − a)/2^n`; used
    /// where a second, structurally different decreasing sequence is
    /// needed on smooth integrands.
    pub fn sloped_halving(interval: Interval) -> GaugeSequence {
        let w = interval.width();
        GaugeSequence::new_decreasing(move |n| {
            let scale = w * 0.5f64.powi(n as i32);
            Gauge::pointwise(move |x| scale * (0.4 + 0.3 * (3.0 * x).sin().powi(2)))
        })
    }

    /// Dirichlet gauges with `eps_n = 2^{−n}` at fixed enumeration depth.
    pub fn dirichlet_eps_halving(depth: u64) -> GaugeSequence {
        GaugeSequence::new_decreasing(move |n| Gauge::dirichlet(0.5f64.powi(n as i32), depth))
    }

    /// `δ_n(x) = min(2^{−n}, |x|³/scale)` away from the origin, with a
    /// fixed absorbing gauge at `x = 0` (hinted so the origin becomes a
    /// tag). Shrinks cubically toward the origin, which tames integrands
    /// whose oscillation accelerates like `1/x²` there.
    pub fn cubic_near_zero(scale: f64, zero_gauge: f64) -> GaugeSequence {
        GaugeSequence::new_decreasing(move |n| {
            let cap = 0.5f64.powi(n as i32);
            Gauge::pointwise(move |x| {
                if x == 0.0 {
                    zero_gauge
                } else {
                    cap.min((x.abs().powi(3) / scale).max(f64::MIN_POSITIVE))
                }
            })
            .with_hints([Tag::with_exact(0, 1).expect("0/1 is a valid tag")])
        })
    }

    /// Quartic version of [`cubic_near_zero`] for oscillation that
    /// accelerates like `1/x³`.
    pub fn quartic_near_zero(scale: f64, zero_gauge: f64) -> GaugeSequence {
        GaugeSequence::new_decreasing(move |n| {
            let cap = 0.5f64.powi(n as i32);
            Gauge::pointwise(move |x| {
                if x == 0.0 {
                    zero_gauge
                } else {
                    cap.min((x.abs().powi(4) / scale).max(f64::MIN_POSITIVE))
                }
            })
            .with_hints([Tag::with_exact(0, 1).expect("0/1 is a valid tag")])
        })
    }
}
