use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum admissible width, in units of the local floating-point spacing.
const MIN_WIDTH_ULPS: f64 = 64.0;

/// A compact interval `[a, b]` with `a < b`, the integration domain.
///
/// Construction rejects degenerate widths: `b - a` must be at least 64
/// ulps at the scale of `max(|a|, |b|, 1)`. Zero-width (or nearly so)
/// cells would make fineness vacuous and the sums ill-conditioned.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInterval", into = "RawInterval")]
pub struct Interval {
    a: f64,
    b: f64,
}

#[derive(Serialize, Deserialize)]
struct RawInterval {
    a: f64,
    b: f64,
}

impl TryFrom<RawInterval> for Interval {
    type Error = Error;
    fn try_from(raw: RawInterval) -> Result<Self> {
        Interval::new(raw.a, raw.b)
    }
}

impl From<Interval> for RawInterval {
    fn from(i: Interval) -> Self {
        RawInterval { a: i.a, b: i.b }
    }
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidInterval {
                a,
                b,
                reason: "endpoints must be finite".into(),
            });
        }
        if a >= b {
            return Err(Error::InvalidInterval {
                a,
                b,
                reason: "left endpoint must be strictly below right".into(),
            });
        }
        let scale = a.abs().max(b.abs()).max(1.0);
        if b - a < MIN_WIDTH_ULPS * f64::EPSILON * scale {
            return Err(Error::InvalidInterval {
                a,
                b,
                reason: format!(
                    "width {} is below the degeneracy floor {}",
                    b - a,
                    MIN_WIDTH_ULPS * f64::EPSILON * scale
                ),
            });
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    pub fn midpoint(&self) -> f64 {
        self.a + 0.5 * (self.b - self.a)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.a <= x && x <= self.b
    }

    /// `self ⊆ other`.
    pub fn is_subinterval_of(&self, other: &Interval) -> bool {
        other.a <= self.a && self.b <= other.b
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.a, self.b)
    }
}
