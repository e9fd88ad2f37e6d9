//! Ordered branches for a curve of unordered tuples.

use crate::curve::SampledCurve;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::invariants::polarizations;
use crate::scalar::Real;
use crate::tuple::AQPoint;

use super::matching::match_points;
use super::LiftedCurve;

/// Chains optimal matchings between consecutive tuples.
///
/// Each step is optimal on its own; the chain as a whole is greedy. The
/// invariant curve holds the polarized invariants of every sample, so the
/// residual is zero up to rounding.
pub fn lift_tuple_curve<T: Real>(grid: &Grid<T>, samples: &[AQPoint<T>]) -> Result<LiftedCurve<T>> {
    if samples.len() != grid.len() {
        return Err(Error::LengthMismatch {
            expected: grid.len(),
            actual: samples.len(),
        });
    }
    let (q, n) = (samples[0].q(), samples[0].dim());
    if let Some(bad) = samples.iter().position(|s| s.q() != q || s.dim() != n) {
        return Err(Error::ShapeMismatch(format!(
            "sample {bad} has shape ({}, {}), expected ({q}, {n})",
            samples[bad].q(),
            samples[bad].dim()
        )));
    }
    let mut branches = Vec::with_capacity(samples.len());
    branches.push(samples[0].points().to_vec());
    for s in &samples[1..] {
        let prev = branches.last().expect("non-empty chain");
        let (assign, _) = match_points(prev, s.points());
        branches.push(assign.iter().map(|&j| s.points()[j].clone()).collect::<Vec<_>>());
    }
    let invariants: Vec<_> = branches.iter().map(|b| polarizations(b).values).collect();
    let expected: Vec<_> = samples.iter().map(|s| polarizations(s.points()).values).collect();
    let residual = super::max_of(
        invariants
            .iter()
            .zip(&expected)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (*x - *y).norm()).collect::<Vec<T>>()),
    );
    let flat = branches.into_iter().map(|b| b.concat()).collect();
    Ok(LiftedCurve {
        curve: SampledCurve::from_grid(grid.clone(), flat)?,
        invariant: SampledCurve::from_grid(grid.clone(), expected)?,
        branches: q,
        branch_dim: n,
        residual,
        refinement_level: 0,
        unresolved_cells: 0,
    })
}
