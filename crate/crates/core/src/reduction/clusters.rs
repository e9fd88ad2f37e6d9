//! Splitting the roots of a polynomial curve into separated clusters.
//!
//! Each cluster is recentred at its centroid, which removes the part of the
//! lift that lies in the fixed subspace of the smaller symmetric group.

use crate::curve::SampledCurve;
use crate::error::{Error, Result};
use crate::invariants::elementary_symmetric;
use crate::lifting::polyroots::{monic_coefficients, taylor_shift};
use crate::lifting::LiftedCurve;
use crate::scalar::{Real, C};

/// One cluster of branches.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusterGroup<T> {
    /// Branch indices of the input lift, ascending.
    pub members: Vec<usize>,
    /// The member branches as a lift over the smaller symmetric group.
    pub lift: LiftedCurve<T>,
    /// Mean of the member roots.
    pub centroid: SampledCurve<T>,
    /// Elementary symmetric values of the recentred roots; the first one
    /// vanishes up to rounding.
    pub coefficients: SampledCurve<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClusterSplit<T> {
    pub groups: Vec<ClusterGroup<T>>,
    /// `max_i |sigma(merged groups)(t_i) - a(t_i)|` relative to `max(1, |a|)`.
    pub recombination_residual: T,
}

fn partition<T: Real>(roots: &[C<T>], gap: T) -> Vec<usize> {
    let q = roots.len();
    let mut label: Vec<usize> = (0..q).collect();
    for i in 0..q {
        for j in 0..i {
            if (roots[i] - roots[j]).norm() <= gap {
                let (a, b) = (label[i].max(label[j]), label[i].min(label[j]));
                label.iter_mut().filter(|l| **l == a).for_each(|l| *l = b);
            }
        }
    }
    label
}

fn separated<T: Real>(roots: &[C<T>], label: &[usize], gap: T) -> bool {
    let third = gap / T::lit(3.0);
    for i in 0..roots.len() {
        for j in 0..i {
            let dist = (roots[i] - roots[j]).norm();
            let ok = if label[i] == label[j] { dist < third } else { dist > gap };
            if !ok {
                return false;
            }
        }
    }
    true
}

fn poly_mul<T: Real>(a: &[C<T>], b: &[C<T>]) -> Vec<C<T>> {
    let mut out = vec![C::new(T::zero(), T::zero()); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += *x * *y;
        }
    }
    out
}

/// Splits a lift of `Q` scalar roots into clusters fixed by the partition at
/// the first node. Every node must keep roots of one cluster within `gap/3`
/// of each other and roots of different clusters more than `gap` apart.
pub fn split_clusters<T: Real>(lift: &LiftedCurve<T>, gap: T) -> Result<ClusterSplit<T>> {
    if lift.branch_dim != 1 {
        return Err(Error::ShapeMismatch(format!(
            "cluster splitting needs scalar branches, got dimension {}",
            lift.branch_dim
        )));
    }
    if !(gap > T::zero()) {
        return Err(Error::InvalidParameter(format!("gap = {gap} must be positive")));
    }
    let roots_at = |i: usize| -> &[C<T>] { lift.curve.value(i) };
    let label = partition(roots_at(0), gap);
    for i in 0..lift.len() {
        if !separated(roots_at(i), &label, gap) {
            return Err(Error::ClustersNotSeparated {
                t: lift.nodes()[i].as_f64(),
            });
        }
    }

    let mut leaders: Vec<usize> = label.clone();
    leaders.sort_unstable();
    leaders.dedup();
    let grid = lift.grid().clone();
    let mut groups = Vec::with_capacity(leaders.len());
    for leader in leaders {
        let members: Vec<usize> = (0..label.len()).filter(|&b| label[b] == leader).collect();
        let m = T::lit(members.len() as f64);
        let sub: Vec<Vec<C<T>>> = (0..lift.len())
            .map(|i| members.iter().map(|&b| roots_at(i)[b]).collect())
            .collect();
        let centre: Vec<C<T>> = sub
            .iter()
            .map(|r| r.iter().fold(C::new(T::zero(), T::zero()), |s, z| s + *z) / m)
            .collect();
        let invariant: Vec<Vec<C<T>>> = sub.iter().map(|r| elementary_symmetric(r)).collect();
        let coefficients: Vec<Vec<C<T>>> = sub
            .iter()
            .zip(&centre)
            .map(|(r, c)| elementary_symmetric(&r.iter().map(|z| *z - *c).collect::<Vec<_>>()))
            .collect();
        let invariant = SampledCurve::from_grid(grid.clone(), invariant)?;
        let residual = invariant
            .values()
            .iter()
            .zip(&sub)
            .map(|(e, r)| crate::lifting::polyroots::sigma_residual(r, e))
            .fold(T::zero(), T::max);
        groups.push(ClusterGroup {
            lift: LiftedCurve {
                curve: SampledCurve::from_grid(grid.clone(), sub)?,
                invariant,
                branches: members.len(),
                branch_dim: 1,
                residual,
                refinement_level: lift.refinement_level,
                unresolved_cells: lift.unresolved_cells,
            },
            centroid: SampledCurve::from_grid(grid.clone(), centre.into_iter().map(|c| vec![c]).collect())?,
            coefficients: SampledCurve::from_grid(grid.clone(), coefficients)?,
            members,
        });
    }

    let mut worst = T::zero();
    for i in 0..lift.len() {
        let mut product = vec![C::new(T::one(), T::zero())];
        for g in &groups {
            // p(X) = q(X - c), with q the recentred monic polynomial
            let q = monic_coefficients(g.coefficients.value(i));
            let p = taylor_shift(&q, -g.centroid.value(i)[0]);
            product = poly_mul(&product, &p);
        }
        let e: Vec<C<T>> = product[1..]
            .iter()
            .enumerate()
            .map(|(j, c)| if j % 2 == 0 { -*c } else { *c })
            .collect();
        let a = lift.invariant.value(i);
        let scale = a.iter().map(|z| z.norm()).fold(T::one(), T::max);
        let diff = e.iter().zip(a).map(|(x, y)| (*x - *y).norm()).fold(T::zero(), T::max);
        worst = worst.max(diff / scale);
    }
    Ok(ClusterSplit {
        groups,
        recombination_residual: worst,
    })
}
