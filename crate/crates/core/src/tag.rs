//! Tag points and the fixed enumeration of the rationals in `[0, 1]`.
//!
//! Rationality is structural here: every machine float is rational, so an
//! integrand that needs to distinguish rational from irrational points reads
//! the tag's exact fraction instead of the float. A tag without an exact
//! fraction counts as irrational.
//!
//! # Enumeration order
//!
//! `q_1 = 0/1`, `q_2 = 1/1`, and from `q_3` on the mediant tree between
//! `0/1` and `1/1` is listed breadth-first:
//!
//! ```text
//! m:   1    2    3    4    5    6    7    8    9    10   11   12 ...
//! q:   0    1    1/2  1/3  2/3  1/4  2/5  3/5  3/4  1/5  2/7  3/8 ...
//! ```
//!
//! Each level lists its nodes left to right (the tree is a binary search
//! tree, so that is also ascending numeric order). Every rational in
//! `[0, 1]` appears exactly once. The order is frozen by a golden test;
//! gauge weights depend on the position, so it must never change.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A fraction in lowest terms with a positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rational {
    pub num: i64,
    pub den: u64,
}

impl Rational {
    pub fn new(num: i64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidTag("denominator must be positive".into()));
        }
        let g = gcd(num.unsigned_abs(), den);
        Ok(Self {
            num: num / g as i64,
            den: den / g,
        })
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    fn in_unit_interval(&self) -> bool {
        self.num >= 0 && (self.num as u64) <= self.den
    }
}

impl std::fmt::Display for Rational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b.max(1);
    }
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A point `t` with an optional exact-rational identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tag {
    value: f64,
    exact: Option<Rational>,
}

impl Tag {
    /// A plain floating-point tag; counts as irrational.
    pub fn new(value: f64) -> Self {
        Self { value, exact: None }
    }

    /// A tag carrying its exact fraction. The float value is the rounded
    /// quotient, so it agrees with the fraction to within one ulp.
    pub fn with_exact(num: i64, den: u64) -> Result<Self> {
        let r = Rational::new(num, den)?;
        Ok(Self {
            value: r.to_f64(),
            exact: Some(r),
        })
    }

    /// Rebuilds a tag from serialized parts, enforcing the invariants
    /// (lowest terms, value within one ulp of the fraction).
    pub fn from_parts(value: f64, exact: Option<(i64, u64)>) -> Result<Self> {
        match exact {
            None => Ok(Self::new(value)),
            Some((num, den)) => {
                if den == 0 {
                    return Err(Error::InvalidTag("denominator must be positive".into()));
                }
                let g = gcd(num.unsigned_abs(), den);
                if g != 1 {
                    return Err(Error::InvalidTag(format!(
                        "{num}/{den} is not in lowest terms"
                    )));
                }
                let r = Rational { num, den };
                let q = r.to_f64();
                if (value - q).abs() > value.abs().max(f64::MIN_POSITIVE) * f64::EPSILON {
                    return Err(Error::InvalidTag(format!(
                        "value {value} is more than one ulp away from {r}"
                    )));
                }
                Ok(Self {
                    value,
                    exact: Some(r),
                })
            }
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn exact(&self) -> Option<Rational> {
        self.exact
    }

    pub fn is_exact_rational(&self) -> bool {
        self.exact.is_some()
    }
}

impl From<f64> for Tag {
    fn from(value: f64) -> Self {
        Tag::new(value)
    }
}

/// The `m`-th rational of the fixed enumeration of `ℚ ∩ [0, 1]` (1-based).
///
/// Deterministic across runs; injective (each rational has exactly one
/// index). Panics if `m == 0`.
pub fn rational_enumeration(m: u64) -> Tag {
    assert!(m >= 1, "enumeration index is 1-based");
    match m {
        1 => Tag::with_exact(0, 1).expect("0/1 is valid"),
        2 => Tag::with_exact(1, 1).expect("1/1 is valid"),
        _ => {
            // Heap position within the mediant tree: root = 1.
            let p = m - 2;
            let mut lo = (0u64, 1u64);
            let mut hi = (1u64, 1u64);
            // Walk the bits of p below its leading one: 0 = left, 1 = right.
            let bits = 63 - p.leading_zeros();
            for shift in (0..bits).rev() {
                let mid = (lo.0 + hi.0, lo.1 + hi.1);
                if (p >> shift) & 1 == 0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let mid = (lo.0 + hi.0, lo.1 + hi.1);
            Tag::with_exact(mid.0 as i64, mid.1).expect("mediants are in lowest terms")
        }
    }
}

/// Position of `r` in the enumeration, if it is at most `max_index`.
///
/// Returns `None` for rationals outside `[0, 1]` or whose index exceeds
/// `max_index`. The walk is exact (i128 cross-multiplication), so ties
/// are decided correctly regardless of float rounding.
pub fn enumeration_index(r: &Rational, max_index: u64) -> Option<u64> {
    if !r.in_unit_interval() || max_index == 0 {
        return None;
    }
    let (p, q) = (r.num as u64, r.den);
    if p == 0 {
        return Some(1).filter(|&m| m <= max_index);
    }
    if p == q {
        return Some(2).filter(|&m| m <= max_index);
    }
    let mut lo = (0u64, 1u64);
    let mut hi = (1u64, 1u64);
    let mut pos: u64 = 1;
    loop {
        if pos + 2 > max_index {
            return None;
        }
        let mid = (lo.0 + hi.0, lo.1 + hi.1);
        // Compare p/q with mid exactly.
        let lhs = p as i128 * mid.1 as i128;
        let rhs = mid.0 as i128 * q as i128;
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Equal => return Some(pos + 2),
            std::cmp::Ordering::Less => {
                hi = mid;
                pos = pos.checked_mul(2)?;
            }
            std::cmp::Ordering::Greater => {
                lo = mid;
                pos = pos.checked_mul(2)?.checked_add(1)?;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_entries_are_frozen() {
        let expect: [(i64, u64); 17] = [
            (0, 1),
            (1, 1),
            (1, 2),
            (1, 3),
            (2, 3),
            (1, 4),
            (2, 5),
            (3, 5),
            (3, 4),
            (1, 5),
            (2, 7),
            (3, 8),
            (3, 7),
            (4, 7),
            (5, 8),
            (5, 7),
            (4, 5),
        ];
        for (i, &(n, d)) in expect.iter().enumerate() {
            let t = rational_enumeration(i as u64 + 1);
            assert_eq!(t.exact().unwrap(), Rational { num: n, den: d }, "q_{}", i + 1);
        }
    }

    #[test]
    fn enumeration_is_injective_and_in_range() {
        let mut seen = std::collections::HashSet::new();
        for m in 1..=10_000u64 {
            let t = rational_enumeration(m);
            let r = t.exact().expect("enumerated tags carry exact identity");
            assert!((0.0..=1.0).contains(&t.value()), "q_{m} = {r} out of range");
            assert_eq!(gcd(r.num.unsigned_abs(), r.den), 1, "q_{m} = {r} not reduced");
            assert!(seen.insert(r), "duplicate entry {r} at m = {m}");
        }
    }

    #[test]
    fn index_inverts_enumeration() {
        for m in 1..=2_000u64 {
            let r = rational_enumeration(m).exact().unwrap();
            assert_eq!(enumeration_index(&r, 10_000), Some(m));
            // Tight cap: index equal to m is found, m - 1 is not.
            assert_eq!(enumeration_index(&r, m), Some(m));
            assert_eq!(enumeration_index(&r, m - 1), None);
        }
    }

    #[test]
    fn index_rejects_out_of_unit_rationals() {
        let r = Rational::new(3, 2).unwrap();
        assert_eq!(enumeration_index(&r, 1_000_000), None);
        let r = Rational::new(-1, 2).unwrap();
        assert_eq!(enumeration_index(&r, 1_000_000), None);
    }

    #[test]
    fn exact_tags_reduce_to_lowest_terms() {
        let t = Tag::with_exact(4, 8).unwrap();
        assert_eq!(t.exact().unwrap(), Rational { num: 1, den: 2 });
        assert_eq!(t.value(), 0.5);
    }

    #[test]
    fn from_parts_enforces_invariants() {
        assert!(Tag::from_parts(0.5, Some((2, 4))).is_err());
        assert!(Tag::from_parts(0.75, Some((1, 2))).is_err());
        assert!(Tag::from_parts(0.5, Some((1, 2))).is_ok());
        assert!(Tag::from_parts(0.5, None).is_ok());
    }
}
