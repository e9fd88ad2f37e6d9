//! Concatenation of two lifts of the same invariant curve.

use crate::curve::SampledCurve;
use crate::error::{Error, Result};
use crate::representation::{RepresentationKind, RepresentationSpec};
use crate::scalar::{vec_dist, Real, C};

use super::matching::match_points;
use super::LiftedCurve;

fn branch_points<T: Real>(lift: &LiftedCurve<T>, i: usize) -> Vec<Vec<C<T>>> {
    (0..lift.branches).map(|b| lift.branch_value(i, b).to_vec()).collect()
}

/// Moves `right` by the group element that best matches `left` at the shared
/// junction node and concatenates the two lifts.
///
/// The cyclic kind tries every rotation by a `d`-th root of unity; the
/// symmetric and tuple kinds use the optimal branch permutation.
pub fn glue_lifts<T: Real>(
    left: &LiftedCurve<T>,
    right: &LiftedCurve<T>,
    spec: &RepresentationSpec<T>,
    tol: T,
) -> Result<LiftedCurve<T>> {
    if left.branches != right.branches || left.branch_dim != right.branch_dim {
        return Err(Error::ShapeMismatch("lifts have different branch layouts".into()));
    }
    let junction = left.grid().last();
    if right.grid().first() != junction {
        return Err(Error::ShapeMismatch(format!(
            "left lift ends at {junction}, right lift starts at {}",
            right.grid().first()
        )));
    }
    let last = left.len() - 1;
    let inv_gap = vec_dist(left.invariant.value(last), right.invariant.value(0));
    if inv_gap > tol {
        return Err(Error::NoReconcilingElement {
            mismatch: inv_gap.as_f64(),
        });
    }

    let ends = branch_points(left, last);
    let starts = branch_points(right, 0);
    let moved = match spec.kind() {
        RepresentationKind::Cyclic(d) => {
            let step = T::TAU() / T::lit(*d as f64);
            let (mut best, mut best_gap) = (right.clone(), T::infinity());
            for k in 0..*d {
                let w = C::from_polar(T::one(), step * T::lit(k as f64));
                let rotated = right.rotate(w);
                let gap = vec_dist(left.curve.value(last), rotated.curve.value(0));
                if gap < best_gap {
                    best = rotated;
                    best_gap = gap;
                }
            }
            best
        }
        RepresentationKind::Symmetric(_) | RepresentationKind::QTuple { .. } => {
            let (assign, _) = match_points(&ends, &starts);
            right.permute(&assign)?
        }
        RepresentationKind::FiniteMatrixGroup(_) => {
            return Err(Error::InvalidParameter(
                "gluing is implemented for cyclic, symmetric and tuple kinds".into(),
            ))
        }
    };
    let mismatch = vec_dist(left.curve.value(last), moved.curve.value(0));
    if mismatch > tol {
        return Err(Error::NoReconcilingElement {
            mismatch: mismatch.as_f64(),
        });
    }

    let mut nodes = left.nodes().to_vec();
    nodes.extend_from_slice(&moved.nodes()[1..]);
    let mut values = left.curve.values().to_vec();
    values.extend_from_slice(&moved.curve.values()[1..]);
    let mut inv = left.invariant.values().to_vec();
    inv.extend_from_slice(&right.invariant.values()[1..]);
    Ok(LiftedCurve {
        curve: SampledCurve::new(nodes.clone(), values)?,
        invariant: SampledCurve::new(nodes, inv)?,
        branches: left.branches,
        branch_dim: left.branch_dim,
        residual: left.residual.max(right.residual),
        refinement_level: left.refinement_level.max(right.refinement_level),
        unresolved_cells: left.unresolved_cells + right.unresolved_cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::lifting::{continuous_radical, continuous_roots, LiftConfig};

    fn re(x: f64) -> C<f64> {
        C::new(x, 0.0)
    }

    #[test]
    fn cyclic_rotation_is_found() {
        let cfg = LiftConfig::default();
        let g = |a, b| SampledCurve::scalar_from_fn(Grid::uniform(a, b, 11).unwrap(), |_| re(1.0));
        let left = continuous_radical(&g(0.0, 1.0), 4, None, &cfg).unwrap();
        let right = continuous_radical(&g(1.0, 2.0), 4, None, &cfg)
            .unwrap()
            .rotate(C::new(0.0, 1.0));
        assert!((right.curve.value(0)[0] - C::new(0.0, 1.0)).norm() < 1e-15);
        let spec = RepresentationSpec::cyclic(4).unwrap();
        let glued = glue_lifts(&left, &right, &spec, 1e-8).unwrap();
        assert_eq!(glued.len(), 21);
        assert!(glued.curve.values().iter().all(|v| (v[0] - re(1.0)).norm() < 1e-12));
    }

    #[test]
    fn symmetric_permutation_is_found() {
        let cfg = LiftConfig::default();
        let oracle = |t: f64| crate::invariants::elementary_symmetric(&[re(t), re(2.0 + t), re(-3.0 - t)]);
        let a = |lo, hi| SampledCurve::from_fn(Grid::uniform(lo, hi, 11).unwrap(), oracle).unwrap();
        let left = continuous_roots(&a(0.0, 1.0), None, &cfg).unwrap();
        let right = continuous_roots(&a(1.0, 2.0), None, &cfg)
            .unwrap()
            .permute(&[2, 0, 1])
            .unwrap();
        let spec = RepresentationSpec::symmetric(3).unwrap();
        let glued = glue_lifts(&left, &right, &spec, 1e-8).unwrap();
        for i in 1..glued.len() {
            for b in 0..3 {
                let step = (glued.branch_value(i, b)[0] - glued.branch_value(i - 1, b)[0]).norm();
                assert!(step < 0.2);
            }
        }
    }

    #[test]
    fn different_invariant_curves_do_not_glue() {
        let cfg = LiftConfig::default();
        let left = continuous_radical(
            &SampledCurve::scalar_from_fn(Grid::uniform(0.0, 1.0, 5).unwrap(), |_| re(1.0)),
            2,
            None,
            &cfg,
        )
        .unwrap();
        let right = continuous_radical(
            &SampledCurve::scalar_from_fn(Grid::uniform(1.0, 2.0, 5).unwrap(), |_| re(1.1)),
            2,
            None,
            &cfg,
        )
        .unwrap();
        let spec = RepresentationSpec::cyclic(2).unwrap();
        assert!(matches!(
            glue_lifts(&left, &right, &spec, 1e-8),
            Err(Error::NoReconcilingElement { .. })
        ));
    }
}
