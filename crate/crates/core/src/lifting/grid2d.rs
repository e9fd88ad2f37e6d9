//! Lifting on 2-D grids: continuation along a spanning tree, then a
//! consistency check on every remaining grid edge.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::grid2d::SampledGrid2D;
use crate::representation::{RepresentationKind, RepresentationSpec};
use crate::scalar::{cmp_complex, vec_dist, vec_norm, Real, C};

use super::matching::match_scalars;
use super::polyroots::{polynomial_roots, sigma_residual};
use super::radical::{nearest_root, principal_root};
use super::LiftConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MonodromyStatus {
    Consistent,
    Obstructed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GridIndex {
    pub ix: usize,
    pub iy: usize,
}

/// Result of the edge check. The witness is a closed loop of grid nodes
/// (the last node connects back to the first) and is present exactly when
/// the status is obstructed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonodromyReport {
    pub status: MonodromyStatus,
    pub witness: Vec<GridIndex>,
    /// Winding number around the loop of the scalar invariant (cyclic kind)
    /// or of the discriminant (symmetric kind); `None` if it vanishes on
    /// the loop.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub winding: Option<i64>,
}

/// A lift at every active node; masked nodes hold `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftedGrid2D<T> {
    pub x: Grid<T>,
    pub y: Grid<T>,
    pub values: Vec<Option<Vec<C<T>>>>,
    pub branches: usize,
    pub residual: T,
}

impl<T: Real> LiftedGrid2D<T> {
    pub fn value(&self, ix: usize, iy: usize) -> Option<&[C<T>]> {
        self.values[ix * self.y.len() + iy].as_deref()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Grid2DOutcome<T> {
    Lifted(LiftedGrid2D<T>),
    Obstructed(MonodromyReport),
}

impl<T> Grid2DOutcome<T> {
    pub fn report(&self) -> MonodromyReport {
        match self {
            Self::Lifted(_) => MonodromyReport {
                status: MonodromyStatus::Consistent,
                witness: Vec::new(),
                winding: None,
            },
            Self::Obstructed(r) => r.clone(),
        }
    }
}

enum Fibers<T> {
    /// `(d, g)` per node.
    Cyclic(usize, Vec<C<T>>),
    /// Roots per node.
    Roots(Vec<Vec<C<T>>>),
}

impl<T: Real> Fibers<T> {
    fn is_zero(&self, k: usize, zero_tol: T) -> bool {
        match self {
            Self::Cyclic(_, g) => g[k].norm() <= zero_tol,
            Self::Roots(_) => false,
        }
    }

    fn initial(&self, k: usize) -> Vec<C<T>> {
        match self {
            Self::Cyclic(d, g) => vec![principal_root(g[k], *d)],
            Self::Roots(r) => {
                let mut v = r[k].clone();
                v.sort_by(cmp_complex);
                v
            }
        }
    }

    fn continue_from(&self, reference: &[C<T>], k: usize) -> Vec<C<T>> {
        match self {
            Self::Cyclic(d, g) => vec![nearest_root(g[k], *d, reference[0])],
            Self::Roots(r) => {
                let (assign, _) = match_scalars(reference, &r[k]);
                assign.iter().map(|&j| r[k][j]).collect()
            }
        }
    }

    /// The scalar whose winding detects monodromy.
    fn winding_value(&self, k: usize) -> C<T> {
        match self {
            Self::Cyclic(_, g) => g[k],
            Self::Roots(r) => {
                let mut disc = C::new(T::one(), T::zero());
                for i in 0..r[k].len() {
                    for j in i + 1..r[k].len() {
                        let diff = r[k][i] - r[k][j];
                        disc = disc * diff * diff;
                    }
                }
                disc
            }
        }
    }
}

fn neighbours(ix: usize, iy: usize, nx: usize, ny: usize) -> impl Iterator<Item = (usize, usize)> {
    let mut out = Vec::with_capacity(4);
    if ix > 0 {
        out.push((ix - 1, iy));
    }
    if ix + 1 < nx {
        out.push((ix + 1, iy));
    }
    if iy > 0 {
        out.push((ix, iy - 1));
    }
    if iy + 1 < ny {
        out.push((ix, iy + 1));
    }
    out.into_iter()
}

/// Spanning forest as `(visit order, parent)`. Without a mask it is the
/// comb: row `iy = 0` left to right, then every column upwards.
fn spanning_tree<T: Real>(f: &SampledGrid2D<T>) -> (Vec<usize>, Vec<Option<usize>>) {
    let (nx, ny) = (f.nx(), f.ny());
    let mut parent = vec![None; nx * ny];
    let mut order = Vec::with_capacity(nx * ny);
    if f.mask().is_none() {
        for ix in 0..nx {
            order.push(f.index(ix, 0));
            if ix > 0 {
                parent[f.index(ix, 0)] = Some(f.index(ix - 1, 0));
            }
        }
        for ix in 0..nx {
            for iy in 1..ny {
                order.push(f.index(ix, iy));
                parent[f.index(ix, iy)] = Some(f.index(ix, iy - 1));
            }
        }
        return (order, parent);
    }
    let mut seen = vec![false; nx * ny];
    for start in 0..nx * ny {
        let (sx, sy) = (start / ny, start % ny);
        if seen[start] || !f.active(sx, sy) {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(k) = queue.pop_front() {
            order.push(k);
            for (jx, jy) in neighbours(k / ny, k % ny, nx, ny) {
                let j = f.index(jx, jy);
                if !seen[j] && f.active(jx, jy) {
                    seen[j] = true;
                    parent[j] = Some(k);
                    queue.push_back(j);
                }
            }
        }
    }
    (order, parent)
}

fn path_to_root(k: usize, parent: &[Option<usize>]) -> Vec<usize> {
    let mut path = vec![k];
    let mut cur = k;
    while let Some(p) = parent[cur] {
        path.push(p);
        cur = p;
    }
    path
}

fn winding<T: Real>(loop_nodes: &[usize], fibers: &Fibers<T>) -> Option<i64> {
    let vals: Vec<C<T>> = loop_nodes.iter().map(|&k| fibers.winding_value(k)).collect();
    if vals.iter().any(|v| v.norm() == T::zero()) {
        return None;
    }
    let mut total = T::zero();
    for i in 0..vals.len() {
        let next = vals[(i + 1) % vals.len()];
        total += (next / vals[i]).arg();
    }
    (total / T::TAU()).round().to_i64()
}

/// Lifts `f` along a spanning tree and checks every other edge.
///
/// Nodes are continued from their tree parent; at a zero of the cyclic
/// invariant the reference is an already lifted nonzero neighbour. An edge
/// is consistent when continuing across it from either nonzero end lands on
/// the stored lift. The first inconsistent edge closes a loop with the tree
/// paths, reported as the witness.
pub fn lift_grid_2d<T: Real>(
    f: &SampledGrid2D<T>,
    spec: &RepresentationSpec<T>,
    cfg: &LiftConfig<T>,
) -> Result<Grid2DOutcome<T>> {
    let (nx, ny) = (f.nx(), f.ny());
    let total = nx * ny;
    let active = |k: usize| f.active(k / ny, k % ny);
    let fibers = match spec.kind() {
        RepresentationKind::Cyclic(d) => {
            if f.dim() != 1 {
                return Err(Error::ShapeMismatch(format!(
                    "cyclic kind needs scalar values, got {} components",
                    f.dim()
                )));
            }
            Fibers::Cyclic(*d, f.values().iter().map(|v| v[0]).collect())
        }
        RepresentationKind::Symmetric(q) => {
            if f.dim() != *q {
                return Err(Error::ShapeMismatch(format!(
                    "symmetric kind of degree {q} needs {q} components, got {}",
                    f.dim()
                )));
            }
            Fibers::Roots(f.values().iter().map(|v| polynomial_roots(v).0).collect())
        }
        _ => {
            return Err(Error::InvalidParameter(
                "grid lifting is implemented for cyclic and symmetric kinds".into(),
            ))
        }
    };

    let (order, parent) = spanning_tree(f);
    let mut lift: Vec<Option<Vec<C<T>>>> = vec![None; total];
    for &k in &order {
        let value = match parent[k] {
            None => fibers.initial(k),
            Some(p) if !fibers.is_zero(p, cfg.zero_tol) => {
                fibers.continue_from(lift[p].as_ref().expect("parent lifted first"), k)
            }
            Some(p) => {
                let reference = neighbours(k / ny, k % ny, nx, ny)
                    .map(|(jx, jy)| f.index(jx, jy))
                    .find(|&j| j != p && lift[j].is_some() && !fibers.is_zero(j, cfg.zero_tol));
                match reference {
                    Some(j) => fibers.continue_from(lift[j].as_ref().expect("checked"), k),
                    None => {
                        let pv = lift[p].as_ref().expect("parent lifted first");
                        match parent[p] {
                            Some(gp) => {
                                // continue the incoming direction through the zero
                                let gv = lift[gp].as_ref().expect("grandparent lifted");
                                let guess: Vec<C<T>> = pv.iter().zip(gv).map(|(a, b)| *a + *a - *b).collect();
                                fibers.continue_from(&guess, k)
                            }
                            None => fibers.initial(k),
                        }
                    }
                }
            }
        };
        lift[k] = Some(value);
    }

    let close = |a: &[C<T>], b: &[C<T>]| vec_dist(a, b) <= T::lit(1e-9) * (T::one() + vec_norm(a).max(vec_norm(b)));
    for k in 0..total {
        if !active(k) {
            continue;
        }
        let (kx, ky) = (k / ny, k % ny);
        for (jx, jy) in [(kx + 1, ky), (kx, ky + 1)] {
            if jx >= nx || jy >= ny {
                continue;
            }
            let j = f.index(jx, jy);
            if !active(j) || parent[j] == Some(k) || parent[k] == Some(j) {
                continue;
            }
            let (lk, lj) = (lift[k].as_ref().expect("active"), lift[j].as_ref().expect("active"));
            let forward = fibers.is_zero(k, cfg.zero_tol) || close(&fibers.continue_from(lk, j), lj);
            let backward = fibers.is_zero(j, cfg.zero_tol) || close(&fibers.continue_from(lj, k), lk);
            if forward && backward {
                continue;
            }
            let pk = path_to_root(k, &parent);
            let pj = path_to_root(j, &parent);
            let (mut a, mut b) = (pk.len(), pj.len());
            while a > 0 && b > 0 && pk[a - 1] == pj[b - 1] {
                a -= 1;
                b -= 1;
            }
            // k up to the common ancestor, then down to j
            let mut loop_nodes: Vec<usize> = pk[..=a.min(pk.len() - 1)].to_vec();
            loop_nodes.extend(pj[..b].iter().rev());
            let witness = loop_nodes
                .iter()
                .map(|&n| GridIndex { ix: n / ny, iy: n % ny })
                .collect();
            return Ok(Grid2DOutcome::Obstructed(MonodromyReport {
                status: MonodromyStatus::Obstructed,
                witness,
                winding: winding(&loop_nodes, &fibers),
            }));
        }
    }

    let mut residual = T::zero();
    for k in 0..total {
        if let Some(v) = &lift[k] {
            let r = match &fibers {
                Fibers::Cyclic(d, g) => (crate::invariants::power_map(v[0], *d) - g[k]).norm(),
                Fibers::Roots(_) => sigma_residual(v, &f.values()[k]),
            };
            residual = residual.max(r);
        }
    }
    Ok(Grid2DOutcome::Lifted(LiftedGrid2D {
        x: f.x().clone(),
        y: f.y().clone(),
        values: lift,
        branches: match &fibers {
            Fibers::Cyclic(..) => 1,
            Fibers::Roots(r) => r[0].len(),
        },
        residual,
    }))
}
