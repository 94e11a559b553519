//! Constructive gauge-fine partitioning.
//!
//! Given any gauge, [`cousin_partition`] produces a fine tagged partition
//! of a compact interval by candidate-tag bisection: try to cover the
//! current subinterval with a single cell whose tag the policy proposes;
//! if the cell does not fit strictly inside the gauge ball around the tag,
//! bisect at the arithmetic midpoint and recurse.
//!
//! The output satisfies the containment convention (every cell inside the
//! open ball of radius `δ(t)/2` around its tag `t`), hence width-fineness
//! for the doubled gauge. Callers that need width-fineness for `δ` itself
//! pass `δ/2` (see [`Gauge::halved`]).
//!
//! Gauges whose special points must become tags (forced-tag points, the
//! enumerated rationals of a Dirichlet gauge) terminate only under a
//! [`TagPolicy::HintFirst`] policy, which tries those points before the
//! fallback rule.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauge::Gauge;
use crate::interval::Interval;
use crate::partition::{Cell, TaggedPartition};
use crate::seeded;
use crate::tag::Tag;

/// How the candidate tag for a subinterval is chosen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TagPolicy {
    Midpoint,
    LeftEndpoint,
    RightEndpoint,
    /// Uniform draw over the subinterval, keyed by the seed and the
    /// subinterval bits (stateless, so evaluation order cannot matter).
    RandomUniform { seed: u64 },
    /// Try the gauge's hint tags lying inside the subinterval first,
    /// ascending by gauge value, then fall back to the inner policy.
    HintFirst(Box<TagPolicy>),
}

impl TagPolicy {
    pub fn hint_first(fallback: TagPolicy) -> Self {
        TagPolicy::HintFirst(Box::new(fallback))
    }

    /// Rebinds any random seed in the policy by mixing in `salt`.
    /// Policies without randomness are unchanged, so reseeding them yields
    /// identical partitions by design.
    pub fn reseeded(&self, salt: u64) -> TagPolicy {
        match self {
            TagPolicy::RandomUniform { seed } => TagPolicy::RandomUniform {
                seed: seeded::derive(*seed, salt),
            },
            TagPolicy::HintFirst(inner) => TagPolicy::HintFirst(Box::new(inner.reseeded(salt))),
            other => other.clone(),
        }
    }

    fn fallback_tag(&self, left: f64, right: f64) -> Tag {
        match self {
            TagPolicy::Midpoint => Tag::new(left + 0.5 * (right - left)),
            TagPolicy::LeftEndpoint => Tag::new(left),
            TagPolicy::RightEndpoint => Tag::new(right),
            TagPolicy::RandomUniform { seed } => {
                let u = seeded::unit_for_subinterval(*seed, left, right);
                Tag::new(left + u * (right - left))
            }
            TagPolicy::HintFirst(inner) => inner.fallback_tag(left, right),
        }
    }

    fn uses_hints(&self) -> bool {
        matches!(self, TagPolicy::HintFirst(_))
    }
}

/// Termination safeguards for floating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionBudget {
    /// Maximum bisection depth before giving up.
    pub max_depth: u32,
    /// Gauge floor, relative to the interval width; a gauge this small
    /// cannot be honored honestly in double precision.
    pub gauge_floor: f64,
}

impl Default for PartitionBudget {
    fn default() -> Self {
        Self {
            max_depth: 60,
            gauge_floor: 1e-14,
        }
    }
}

struct Ctx<'a> {
    gauge: &'a Gauge,
    policy: &'a TagPolicy,
    budget: &'a PartitionBudget,
    floor_abs: f64,
    /// Hints sorted ascending by gauge value (tightest first), so special
    /// points claim a subinterval as soon as it is small enough for them.
    sorted_hints: Vec<(Tag, f64)>,
}

/// Builds a containment-fine tagged partition of `interval` for `gauge`.
///
/// Fails with [`Error::DepthExceeded`] when the bisection depth passes the
/// budget, which signals a gauge below the representable floor somewhere
/// in the interval, and with [`Error::GaugeNonPositive`] when the gauge is
/// invalid at a candidate tag.
pub fn cousin_partition(
    gauge: &Gauge,
    interval: Interval,
    policy: &TagPolicy,
    budget: &PartitionBudget,
) -> Result<TaggedPartition> {
    let mut sorted_hints = Vec::new();
    if policy.uses_hints() {
        for tag in gauge.hints() {
            if interval.contains(tag.value()) {
                sorted_hints.push((*tag, gauge.eval(tag)?));
            }
        }
        sorted_hints.sort_by(|a, b| {
            a.1.total_cmp(&b.1)
                .then(a.0.value().total_cmp(&b.0.value()))
        });
    }
    let ctx = Ctx {
        gauge,
        policy,
        budget,
        floor_abs: budget.gauge_floor * interval.width(),
        sorted_hints,
    };
    let cells = cover(&ctx, interval.a(), interval.b(), 0)?;
    let mut partition = TaggedPartition::new(interval, cells);

    // Forced points that ended up strictly inside a cell they tag become
    // partition points via the right-left split.
    for c in gauge.forced_points() {
        if c <= interval.a() || c >= interval.b() {
            continue;
        }
        if let Some(idx) = partition
            .cells()
            .iter()
            .position(|cell| cell.tag.value() == c && cell.left < c && c < cell.right)
        {
            partition = partition.right_left_split(idx)?;
        }
    }
    Ok(partition)
}

#[cfg(feature = "parallel")]
const SPAWN_DEPTH: u32 = 5;

fn cover(ctx: &Ctx<'_>, left: f64, right: f64, depth: u32) -> Result<Vec<Cell>> {
    if let Some(cell) = try_cover(ctx, left, right)? {
        return Ok(vec![cell]);
    }
    let mid = bisection_point(ctx, left, right, depth)?;
    #[cfg(feature = "parallel")]
    if depth < SPAWN_DEPTH {
        let (a, b) = rayon::join(
            || cover(ctx, left, mid, depth + 1),
            || cover(ctx, mid, right, depth + 1),
        );
        let mut cells = a?;
        cells.extend(b?);
        return Ok(cells);
    }
    let mut cells = Vec::new();
    cover_seq(ctx, left, mid, depth + 1, &mut cells)?;
    cover_seq(ctx, mid, right, depth + 1, &mut cells)?;
    Ok(cells)
}

fn cover_seq(ctx: &Ctx<'_>, left: f64, right: f64, depth: u32, out: &mut Vec<Cell>) -> Result<()> {
    if let Some(cell) = try_cover(ctx, left, right)? {
        out.push(cell);
        return Ok(());
    }
    let mid = bisection_point(ctx, left, right, depth)?;
    cover_seq(ctx, left, mid, depth + 1, out)?;
    cover_seq(ctx, mid, right, depth + 1, out)
}

/// One covering attempt: hint tags first (under a hint policy), then the
/// fallback tag. A candidate succeeds when the subinterval sits strictly
/// inside the open gauge ball around it.
fn try_cover(ctx: &Ctx<'_>, left: f64, right: f64) -> Result<Option<Cell>> {
    if ctx.policy.uses_hints() {
        for (tag, delta) in &ctx.sorted_hints {
            let t = tag.value();
            if t < left || t > right {
                continue;
            }
            if t - 0.5 * delta < left && right < t + 0.5 * delta {
                return Ok(Some(Cell::new(left, right, *tag)));
            }
        }
    }
    let tag = ctx.policy.fallback_tag(left, right);
    let delta = ctx.gauge.eval(&tag)?;
    let t = tag.value();
    if t - 0.5 * delta < left && right < t + 0.5 * delta {
        return Ok(Some(Cell::new(left, right, tag)));
    }
    Ok(None)
}

fn bisection_point(ctx: &Ctx<'_>, left: f64, right: f64, depth: u32) -> Result<f64> {
    let width = right - left;
    if depth >= ctx.budget.max_depth || width < ctx.floor_abs {
        let probe = ctx
            .gauge
            .eval(&Tag::new(left + 0.5 * width))
            .unwrap_or(f64::NAN);
        return Err(Error::DepthExceeded {
            left,
            right,
            max_depth: ctx.budget.max_depth,
            gauge: probe,
        });
    }
    let mid = left + 0.5 * width;
    if !(left < mid && mid < right) {
        // Float resolution exhausted before the gauge allowed a cover.
        return Err(Error::DepthExceeded {
            left,
            right,
            max_depth: depth,
            gauge: ctx.gauge.eval(&Tag::new(left)).unwrap_or(f64::NAN),
        });
    }
    Ok(mid)
}

/// Selects the cells at `keep` (deduplicated, ascending), preserving order.
/// The result is a fine subpartition whenever the source partition was fine.
pub fn subpartition_sample(partition: &TaggedPartition, keep: &[usize]) -> Vec<Cell> {
    let mut indices: Vec<usize> = keep.to_vec();
    indices.sort_unstable();
    indices.dedup();
    indices
        .into_iter()
        .map(|i| partition.cells()[i].clone())
        .collect()
}
