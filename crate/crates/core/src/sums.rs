//! Riemann sums and the two fineness predicates.

use crate::error::{Error, Result};
use crate::gauge::Gauge;
use crate::integrand::Integrand;
use crate::partition::TaggedPartition;

/// Which fineness convention to check.
///
/// `Width` is the conformance predicate (`right - left < δ(tag)` for every
/// cell). `Containment` is the constructive guarantee the partitioner
/// provides: every cell lies strictly inside the open ball of radius
/// `δ(tag)/2` around its tag. Containment implies width-fineness with the
/// doubled gauge; the converse does not hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Fineness {
    Width,
    Containment,
}

/// Whether `partition` is fine for `gauge` under the given convention.
///
/// Errors if the gauge fails to evaluate to a positive finite value at any
/// tag.
pub fn is_delta_fine(
    partition: &TaggedPartition,
    gauge: &Gauge,
    mode: Fineness,
) -> Result<bool> {
    for cell in partition.cells() {
        let delta = gauge.eval(&cell.tag)?;
        let fine = match mode {
            Fineness::Width => cell.right - cell.left < delta,
            Fineness::Containment => {
                let t = cell.tag.value();
                t - 0.5 * delta < cell.left && cell.right < t + 0.5 * delta
            }
        };
        if !fine {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `S(f, P) = Σ f(t_i)·(x_i − x_{i−1})`, summed strictly left to right.
///
/// The summation order is part of the contract: results are reproducible
/// bit for bit given the same partition, so no pairwise or tree reduction
/// is ever applied here.
pub fn riemann_sum(f: &Integrand, partition: &TaggedPartition) -> Result<f64> {
    let domain = f.domain();
    if !partition.interval().is_subinterval_of(&domain) {
        return Err(Error::EvalDomain {
            name: f.name().to_string(),
            domain_a: domain.a(),
            domain_b: domain.b(),
            at: if partition.interval().a() < domain.a() {
                partition.interval().a()
            } else {
                partition.interval().b()
            },
        });
    }
    let mut sum = 0.0;
    for cell in partition.cells() {
        sum += f.eval(&cell.tag) * (cell.right - cell.left);
    }
    Ok(sum)
}
