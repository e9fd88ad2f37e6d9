//! Extension of lifts by zero across the zero set of the invariant curve.

use crate::analysis::norms::{cell_magnitudes, lp_power_sum};
use crate::curve::{Oracle, SampledCurve};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::scalar::{vec_norm, Real, C};

use super::radical::continuous_radical;
use super::{LiftConfig, LiftedCurve};

/// Node ranges `lo..=hi` of the components of `{a != 0}`, each widened by
/// the adjacent zero nodes. A node is a zero when `|a| <= zero_tol`.
pub fn zero_components<T: Real>(a: &SampledCurve<T>, zero_tol: T) -> Vec<(usize, usize)> {
    let n = a.len();
    let nonzero: Vec<bool> = a.values().iter().map(|v| vec_norm(v) > zero_tol).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        if !nonzero[i] {
            i += 1;
            continue;
        }
        let mut j = i;
        while j + 1 < n && nonzero[j + 1] {
            j += 1;
        }
        out.push((i.saturating_sub(1), (j + 1).min(n - 1)));
        i = j + 1;
    }
    out
}

/// Radical lifts on every component of `{g != 0}`.
pub fn lift_radical_on_components<T: Real>(
    g: &SampledCurve<T>,
    d: usize,
    oracle: Option<Oracle<'_, T>>,
    cfg: &LiftConfig<T>,
) -> Result<Vec<LiftedCurve<T>>> {
    zero_components(g, cfg.zero_tol)
        .into_iter()
        .map(|(lo, hi)| continuous_radical(&g.slice(lo, hi)?, d, oracle, cfg))
        .collect()
}

/// Pieces sorted by position with interior end values checked against `tol`
/// and replaced by zero.
fn prepared_pieces<T: Real>(pieces: &[LiftedCurve<T>], full: &Grid<T>, tol: T) -> Result<Vec<LiftedCurve<T>>> {
    let mut sorted: Vec<LiftedCurve<T>> = pieces.to_vec();
    sorted.sort_by(|a, b| a.grid().first().cmp_total(&b.grid().first()));
    for w in sorted.windows(2) {
        if w[1].grid().first() < w[0].grid().last() {
            return Err(Error::ShapeMismatch(format!(
                "pieces overlap at t = {}",
                w[1].grid().first()
            )));
        }
    }
    for p in sorted.iter_mut() {
        let (first, last) = (p.grid().first(), p.grid().last());
        if first < full.first() || last > full.last() {
            return Err(Error::ShapeMismatch(format!(
                "piece [{first}, {last}] leaves the grid [{}, {}]",
                full.first(),
                full.last()
            )));
        }
        let mut values = p.curve.values().to_vec();
        let n = values.len();
        let ends = [(0usize, first > full.first()), (n - 1, last < full.last())];
        for (i, interior) in ends {
            if !interior {
                continue;
            }
            let v = vec_norm(&values[i]);
            if v > tol {
                return Err(Error::DiscontinuousAtZeroSet {
                    t: p.nodes()[i].as_f64(),
                    value: v.as_f64(),
                });
            }
            values[i].iter_mut().for_each(|z| *z = C::new(T::zero(), T::zero()));
        }
        p.curve = SampledCurve::from_grid(p.grid().clone(), values)?;
    }
    Ok(sorted)
}

/// `||f'||_{L^p}` over the union of the pieces, with the interior ends of
/// every piece set to their limit `0`.
pub fn piecewise_lp_norm<T: Real>(pieces: &[LiftedCurve<T>], full_grid: &Grid<T>, p: T, tol: T) -> Result<T> {
    let mut acc = T::zero();
    for piece in prepared_pieces(pieces, full_grid, tol)? {
        let mags = cell_magnitudes(&piece.curve);
        for (m, w) in mags.iter().zip(piece.grid().widths()) {
            acc += m.powf(p) * w;
        }
    }
    Ok(acc.powf(T::one() / p))
}

/// Extends lifts defined on the components of `{f != 0}` by zero to the
/// whole of `full_grid` and returns the extension with its `L^p`
/// derivative norm.
///
/// Cells outside the pieces have zero slope and add exact zeros to the
/// left-to-right sum, so the norm coincides bit for bit with
/// [`piecewise_lp_norm`]. Without pieces the result is the scalar zero lift.
pub fn extend_through_zeros<T: Real>(
    pieces: &[LiftedCurve<T>],
    full_grid: &Grid<T>,
    p: T,
    tol: T,
) -> Result<(LiftedCurve<T>, T)> {
    let pieces = prepared_pieces(pieces, full_grid, tol)?;
    let (branches, branch_dim, inv_dim) = pieces
        .first()
        .map_or((1, 1, 1), |p| (p.branches, p.branch_dim, p.invariant.dim()));
    let zero = C::new(T::zero(), T::zero());
    let width = branches * branch_dim;
    let full = full_grid.nodes();

    let mut nodes: Vec<T> = Vec::with_capacity(full.len());
    let mut values: Vec<Vec<C<T>>> = Vec::with_capacity(full.len());
    let mut inv: Vec<Vec<C<T>>> = Vec::with_capacity(full.len());
    let mut k = 0;
    let push_zero = |t: T, nodes: &mut Vec<T>, values: &mut Vec<Vec<C<T>>>, inv: &mut Vec<Vec<C<T>>>| {
        if nodes.last().is_none_or(|&l| t > l) {
            nodes.push(t);
            values.push(vec![zero; width]);
            inv.push(vec![zero; inv_dim]);
        }
    };
    let mut residual = T::zero();
    let mut level = 0;
    let mut unresolved = 0;
    for piece in &pieces {
        if piece.branches != branches || piece.branch_dim != branch_dim {
            return Err(Error::ShapeMismatch("pieces have different branch layouts".into()));
        }
        let (first, last) = (piece.grid().first(), piece.grid().last());
        while k < full.len() && full[k] < first {
            push_zero(full[k], &mut nodes, &mut values, &mut inv);
            k += 1;
        }
        while k < full.len() && full[k] <= last {
            if piece.grid().index_of(full[k]).is_none() {
                return Err(Error::ShapeMismatch(format!(
                    "grid node t = {} is missing from the piece [{first}, {last}]",
                    full[k]
                )));
            }
            k += 1;
        }
        for i in 0..piece.len() {
            let t = piece.nodes()[i];
            if nodes.last().is_some_and(|&l| t <= l) {
                // shared zero endpoint of adjacent pieces
                continue;
            }
            nodes.push(t);
            values.push(piece.curve.value(i).to_vec());
            inv.push(piece.invariant.value(i).to_vec());
        }
        residual = residual.max(piece.residual);
        level = level.max(piece.refinement_level);
        unresolved += piece.unresolved_cells;
    }
    while k < full.len() {
        push_zero(full[k], &mut nodes, &mut values, &mut inv);
        k += 1;
    }

    let curve = SampledCurve::new(nodes.clone(), values)?;
    let invariant = SampledCurve::new(nodes, inv)?;
    let mags = cell_magnitudes(&curve);
    let norm = lp_power_sum(&mags, curve.grid().widths(), p).powf(T::one() / p);
    Ok((
        LiftedCurve {
            curve,
            invariant,
            branches,
            branch_dim,
            residual,
            refinement_level: level,
            unresolved_cells: unresolved,
        },
        norm,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> C<f64> {
        C::new(x, 0.0)
    }

    #[test]
    fn components_include_zero_endpoints() {
        let g = SampledCurve::scalar_from_fn(Grid::uniform(-1.0, 1.0, 5).unwrap(), |t| re(t * t));
        assert_eq!(zero_components(&g, 1e-12), vec![(0, 2), (2, 4)]);
    }

    #[test]
    fn square_extension_keeps_l1_norm() {
        let grid = Grid::uniform(-1.0, 1.0, 101).unwrap();
        let g = SampledCurve::scalar_from_fn(grid.clone(), |t| re(t * t));
        let cfg = LiftConfig::default();
        let pieces = lift_radical_on_components(&g, 2, None, &cfg).unwrap();
        assert_eq!(pieces.len(), 2);
        let (ext, norm) = extend_through_zeros(&pieces, &grid, 1.0, cfg.tol).unwrap();
        assert_eq!(ext.len(), 101);
        assert_eq!(norm, piecewise_lp_norm(&pieces, &grid, 1.0, cfg.tol).unwrap());
        assert!((norm - 2.0).abs() < 1e-12);
    }

    #[test]
    fn nonzero_boundary_is_rejected() {
        let grid = Grid::uniform(0.0, 2.0, 5).unwrap();
        let piece_grid = Grid::new(vec![1.0, 1.5, 2.0]).unwrap();
        let curve = SampledCurve::scalar_from_fn(piece_grid, |t| re(t - 0.5));
        let lift = LiftedCurve {
            invariant: curve.clone(),
            curve,
            branches: 1,
            branch_dim: 1,
            residual: 0.0,
            refinement_level: 0,
            unresolved_cells: 0,
        };
        assert!(matches!(
            extend_through_zeros(&[lift], &grid, 1.0, 1e-8),
            Err(Error::DiscontinuousAtZeroSet { .. })
        ));
    }

    #[test]
    fn zero_curve_extends_to_zero() {
        let grid = Grid::uniform(0.0, 1.0, 7).unwrap();
        let (ext, norm) = extend_through_zeros::<f64>(&[], &grid, 2.0, 1e-8).unwrap();
        assert_eq!(norm, 0.0);
        assert!(ext.curve.values().iter().all(|v| v[0] == re(0.0)));
    }
}
