//! Tagged partitions and the exact structural operations on them.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::tag::Tag;

/// One subinterval `[left, right]` with its tag.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub left: f64,
    pub right: f64,
    pub tag: Tag,
}

impl Cell {
    pub fn new(left: f64, right: f64, tag: impl Into<Tag>) -> Self {
        Self {
            left,
            right,
            tag: tag.into(),
        }
    }

    pub fn width(&self) -> f64 {
        self.right - self.left
    }
}

// Wire format: {"left": number, "right": number, "tag": number,
// "exact": [num, den] | null}.
#[derive(Serialize, Deserialize)]
struct CellWire {
    left: f64,
    right: f64,
    tag: f64,
    exact: Option<(i64, u64)>,
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CellWire {
            left: self.left,
            right: self.right,
            tag: self.tag.value(),
            exact: self.tag.exact().map(|r| (r.num, r.den)),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Cell {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = CellWire::deserialize(deserializer)?;
        let tag = Tag::from_parts(wire.tag, wire.exact).map_err(D::Error::custom)?;
        Ok(Cell {
            left: wire.left,
            right: wire.right,
            tag,
        })
    }
}

/// An ordered list of tagged cells covering an interval.
///
/// Construction does not validate; [`TaggedPartition::validate`] reports
/// violations as data so that malformed partitions can be inspected.
/// Serializes as a bare JSON array of cells.
#[derive(Debug, Clone, PartialEq)]
pub struct TaggedPartition {
    interval: Interval,
    cells: Vec<Cell>,
}

/// A single failed partition invariant, naming the cell and the rule.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Violation {
    /// `cells[0].left` differs from the interval's left endpoint.
    LeftEndpointMismatch { expected: f64, found: f64 },
    /// The last cell's right endpoint differs from the interval's right.
    RightEndpointMismatch { expected: f64, found: f64 },
    /// `cells[index].right != cells[index + 1].left`.
    GapBetweenCells { index: usize },
    /// `left >= right` for the indexed cell.
    EmptyCell { index: usize },
    /// The tag lies outside its cell.
    TagOutsideCell { index: usize },
    /// The partition has no cells at all.
    NoCells,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::LeftEndpointMismatch { expected, found } => {
                write!(f, "first cell starts at {found}, interval starts at {expected}")
            }
            Violation::RightEndpointMismatch { expected, found } => {
                write!(f, "last cell ends at {found}, interval ends at {expected}")
            }
            Violation::GapBetweenCells { index } => {
                write!(f, "gap between cells {index} and {}", index + 1)
            }
            Violation::EmptyCell { index } => write!(f, "cell {index} has non-positive width"),
            Violation::TagOutsideCell { index } => write!(f, "tag outside cell {index}"),
            Violation::NoCells => write!(f, "partition has no cells"),
        }
    }
}

/// Outcome of [`TaggedPartition::validate`]: ok, or the list of violations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionValidation {
    pub violations: Vec<Violation>,
}

impl PartitionValidation {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl TaggedPartition {
    pub fn new(interval: Interval, cells: Vec<Cell>) -> Self {
        Self { interval, cells }
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn into_cells(self) -> Vec<Cell> {
        self.cells
    }

    /// Checks every structural invariant: endpoint chaining, positive
    /// widths, tags inside their cells. Violations are data, not failures.
    pub fn validate(&self) -> PartitionValidation {
        let mut violations = Vec::new();
        if self.cells.is_empty() {
            return PartitionValidation {
                violations: vec![Violation::NoCells],
            };
        }
        let first = &self.cells[0];
        if first.left != self.interval.a() {
            violations.push(Violation::LeftEndpointMismatch {
                expected: self.interval.a(),
                found: first.left,
            });
        }
        let last = self.cells.last().expect("non-empty");
        if last.right != self.interval.b() {
            violations.push(Violation::RightEndpointMismatch {
                expected: self.interval.b(),
                found: last.right,
            });
        }
        for (i, cell) in self.cells.iter().enumerate() {
            if cell.left >= cell.right || cell.left.is_nan() || cell.right.is_nan() {
                violations.push(Violation::EmptyCell { index: i });
            }
            let t = cell.tag.value();
            if !(cell.left <= t && t <= cell.right) {
                violations.push(Violation::TagOutsideCell { index: i });
            }
            if i + 1 < self.cells.len() && cell.right != self.cells[i + 1].left {
                violations.push(Violation::GapBetweenCells { index: i });
            }
        }
        PartitionValidation { violations }
    }

    /// Splits the indexed cell at its tag, producing two abutting cells
    /// that both carry the tag. The Riemann sum is preserved (the tag's
    /// contribution `f(t)·(r-l)` becomes `f(t)·(t-l) + f(t)·(r-t)`).
    pub fn right_left_split(&self, cell_index: usize) -> Result<TaggedPartition> {
        let cell = self
            .cells
            .get(cell_index)
            .ok_or(Error::CellIndexOutOfRange {
                index: cell_index,
                len: self.cells.len(),
            })?;
        let t = cell.tag.value();
        if t <= cell.left || t >= cell.right {
            return Err(Error::TagOnBoundary {
                index: cell_index,
                tag: t,
            });
        }
        let mut cells = Vec::with_capacity(self.cells.len() + 1);
        cells.extend_from_slice(&self.cells[..cell_index]);
        cells.push(Cell {
            left: cell.left,
            right: t,
            tag: cell.tag,
        });
        cells.push(Cell {
            left: t,
            right: cell.right,
            tag: cell.tag,
        });
        cells.extend_from_slice(&self.cells[cell_index + 1..]);
        Ok(TaggedPartition::new(self.interval, cells))
    }

    /// Joins cells `cell_index` and `cell_index + 1` when they share a tag
    /// equal to their common endpoint — the inverse of
    /// [`right_left_split`](Self::right_left_split).
    pub fn right_left_merge(&self, cell_index: usize) -> Result<TaggedPartition> {
        if cell_index + 1 >= self.cells.len() {
            return Err(Error::CellIndexOutOfRange {
                index: cell_index + 1,
                len: self.cells.len(),
            });
        }
        let a = &self.cells[cell_index];
        let b = &self.cells[cell_index + 1];
        if a.tag != b.tag {
            return Err(Error::NotMergeable {
                index: cell_index,
                next: cell_index + 1,
                reason: format!("tags {} and {} differ", a.tag.value(), b.tag.value()),
            });
        }
        if a.tag.value() != a.right {
            return Err(Error::NotMergeable {
                index: cell_index,
                next: cell_index + 1,
                reason: format!(
                    "shared tag {} does not equal the common endpoint {}",
                    a.tag.value(),
                    a.right
                ),
            });
        }
        let mut cells = Vec::with_capacity(self.cells.len() - 1);
        cells.extend_from_slice(&self.cells[..cell_index]);
        cells.push(Cell {
            left: a.left,
            right: b.right,
            tag: a.tag,
        });
        cells.extend_from_slice(&self.cells[cell_index + 2..]);
        Ok(TaggedPartition::new(self.interval, cells))
    }
}

impl Serialize for TaggedPartition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.cells.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TaggedPartition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let cells = Vec::<Cell>::deserialize(deserializer)?;
        let (first, last) = match (cells.first(), cells.last()) {
            (Some(f), Some(l)) => (f.left, l.right),
            _ => return Err(D::Error::custom("partition must have at least one cell")),
        };
        let interval = Interval::new(first, last).map_err(D::Error::custom)?;
        Ok(TaggedPartition::new(interval, cells))
    }
}
