//! Sampled curves in `C^n` and their divided-difference calculus.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::scalar::{vec_norm, Real, C};

/// Value oracle: evaluates the exact curve at any parameter value.
pub type Oracle<'a, T> = &'a (dyn Fn(T) -> Vec<C<T>> + Sync);

/// How new samples are produced when cells are bisected.
#[derive(Clone, Copy)]
pub enum Refinement<'a, T> {
    Oracle(Oracle<'a, T>),
    /// Linear interpolation; the new samples are flagged synthetic.
    Interpolate,
}

/// A curve `t -> C^n` known only through its samples on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledCurve<T> {
    grid: Grid<T>,
    values: Vec<Vec<C<T>>>,
    dim: usize,
    synthetic: Vec<bool>,
}

impl<T: Real> SampledCurve<T> {
    /// Validating constructor from raw nodes and per-node vectors.
    pub fn new(nodes: Vec<T>, values: Vec<Vec<C<T>>>) -> Result<Self> {
        let grid = Grid::new(nodes)?;
        Self::from_grid(grid, values)
    }

    pub fn from_grid(grid: Grid<T>, values: Vec<Vec<C<T>>>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                actual: values.len(),
            });
        }
        let dim = values[0].len();
        if dim == 0 {
            return Err(Error::RaggedComponents {
                index: 0,
                expected: 1,
                actual: 0,
            });
        }
        if let Some((index, v)) = values.iter().enumerate().find(|(_, v)| v.len() != dim) {
            return Err(Error::RaggedComponents {
                index,
                expected: dim,
                actual: v.len(),
            });
        }
        let n = grid.len();
        Ok(Self {
            grid,
            values,
            dim,
            synthetic: vec![false; n],
        })
    }

    pub fn from_fn(grid: Grid<T>, f: impl Fn(T) -> Vec<C<T>>) -> Result<Self> {
        let values = grid.nodes().iter().map(|&t| f(t)).collect();
        Self::from_grid(grid, values)
    }

    /// Scalar curve from a complex-valued function.
    pub fn scalar_from_fn(grid: Grid<T>, f: impl Fn(T) -> C<T>) -> Self {
        let values = grid.nodes().iter().map(|&t| vec![f(t)]).collect();
        Self::from_grid(grid, values).expect("scalar samples are well formed")
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn nodes(&self) -> &[T] {
        self.grid.nodes()
    }

    pub fn t(&self, i: usize) -> T {
        self.grid.nodes()[i]
    }

    pub fn values(&self) -> &[Vec<C<T>>] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &[C<T>] {
        &self.values[i]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_synthetic(&self, i: usize) -> bool {
        self.synthetic[i]
    }

    pub fn synthetic_count(&self) -> usize {
        self.synthetic.iter().filter(|s| **s).count()
    }

    /// Component `j` as a scalar curve.
    pub fn component(&self, j: usize) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| vec![v[j]]).collect(),
            dim: 1,
            synthetic: self.synthetic.clone(),
        }
    }

    /// Restriction to the node range `lo..=hi`.
    pub fn slice(&self, lo: usize, hi: usize) -> Result<Self> {
        Ok(Self {
            grid: self.grid.slice(lo, hi)?,
            values: self.values[lo..=hi].to_vec(),
            dim: self.dim,
            synthetic: self.synthetic[lo..=hi].to_vec(),
        })
    }

    /// Applies `f` to every sample vector, keeping the grid.
    pub fn map(&self, f: impl Fn(&[C<T>]) -> Vec<C<T>>) -> Result<Self> {
        let values = self.values.iter().map(|v| f(v)).collect();
        let mut out = Self::from_grid(self.grid.clone(), values)?;
        out.synthetic = self.synthetic.clone();
        Ok(out)
    }

    /// Largest Euclidean norm over the samples.
    pub fn sup_norm(&self) -> T {
        self.values
            .iter()
            .map(|v| vec_norm(v))
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    /// Per-cell slopes `(f(t_{i+1}) - f(t_i)) / (t_{i+1} - t_i)`.
    pub fn slopes(&self) -> Vec<Vec<C<T>>> {
        (0..self.grid.cells())
            .map(|i| {
                let h = self.grid.width(i);
                self.values[i + 1]
                    .iter()
                    .zip(&self.values[i])
                    .map(|(b, a)| (*b - *a) / h)
                    .collect()
            })
            .collect()
    }

    /// Approximation of the `order`-th derivative on the same grid.
    ///
    /// Every node gets an `order`-th divided difference scaled by `order!`.
    /// Interior nodes use a centred stencil (for odd orders the node itself
    /// is skipped); near the ends the stencil is shifted inwards, so the
    /// output grid equals the input grid. Exact on polynomials of degree
    /// `order`.
    pub fn finite_difference(&self, order: usize) -> Result<Self> {
        let n = self.len();
        if order >= n {
            return Err(Error::OrderTooHigh { order, len: n });
        }
        if order == 0 {
            return Ok(self.clone());
        }
        let nodes = self.grid.nodes();
        let fact: T = (1..=order).map(|k| T::lit(k as f64)).fold(T::one(), |a, b| a * b);
        let mut out = Vec::with_capacity(n);
        let mut idx = Vec::with_capacity(order + 2);
        let mut ts = Vec::with_capacity(order + 1);
        let mut ys = Vec::with_capacity(order + 1);
        for i in 0..n {
            stencil(i, order, n, &mut idx);
            ts.clear();
            ts.extend(idx.iter().map(|&k| nodes[k]));
            let mut v = Vec::with_capacity(self.dim);
            for c in 0..self.dim {
                ys.clear();
                ys.extend(idx.iter().map(|&k| self.values[k][c]));
                v.push(divided_difference(&ts, &mut ys) * fact);
            }
            out.push(v);
        }
        Self::from_grid(self.grid.clone(), out)
    }

    /// Bisects the cells listed in `mask` once.
    pub fn refine(&self, mask: &BTreeSet<usize>, mode: Refinement<'_, T>) -> Result<Self> {
        if mask.is_empty() {
            return Ok(self.clone());
        }
        let nodes = self.grid.nodes();
        let mut new_nodes = Vec::with_capacity(self.len() + mask.len());
        let mut values = Vec::with_capacity(self.len() + mask.len());
        let mut synthetic = Vec::with_capacity(self.len() + mask.len());
        for i in 0..self.len() {
            new_nodes.push(nodes[i]);
            values.push(self.values[i].clone());
            synthetic.push(self.synthetic[i]);
            if i + 1 < self.len() && mask.contains(&i) {
                let mid = (nodes[i] + nodes[i + 1]) / T::lit(2.0);
                match mode {
                    Refinement::Oracle(f) => {
                        let v = f(mid);
                        if v.len() != self.dim {
                            return Err(Error::RaggedComponents {
                                index: new_nodes.len(),
                                expected: self.dim,
                                actual: v.len(),
                            });
                        }
                        values.push(v);
                        synthetic.push(false);
                    }
                    Refinement::Interpolate => {
                        let half = T::lit(0.5);
                        values.push(
                            self.values[i]
                                .iter()
                                .zip(&self.values[i + 1])
                                .map(|(a, b)| (*a + *b) * half)
                                .collect(),
                        );
                        synthetic.push(true);
                    }
                }
                new_nodes.push(mid);
            }
        }
        let mut out = Self::new(new_nodes, values)?;
        out.synthetic = synthetic;
        Ok(out)
    }

    /// Bisects every cell.
    pub fn refine_all(&self, mode: Refinement<'_, T>) -> Result<Self> {
        let mask = (0..self.grid.cells()).collect();
        self.refine(&mask, mode)
    }
}

/// Node indices used for the divided difference of `order` at node `i`.
fn stencil(i: usize, order: usize, n: usize, out: &mut Vec<usize>) {
    out.clear();
    if order % 2 == 1 {
        let r = order.div_ceil(2);
        if i >= r && i + r < n {
            out.extend(i - r..i);
            out.extend(i + 1..=i + r);
            return;
        }
    }
    let half = order / 2;
    let start = i.saturating_sub(half).min(n - order - 1);
    out.extend(start..=start + order);
}

/// Newton divided difference `f[t_0, ..., t_m]`; `ys` is overwritten.
pub(crate) fn divided_difference<T: Real>(ts: &[T], ys: &mut [C<T>]) -> C<T> {
    let m = ts.len();
    for level in 1..m {
        for k in 0..m - level {
            ys[k] = (ys[k + 1] - ys[k]) / (ts[k + level] - ts[k]);
        }
    }
    ys[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C<f64> {
        C::new(x, 0.0)
    }

    #[test]
    fn make_curve_of_t_squared() {
        let curve = SampledCurve::new(vec![0.0, 0.5, 1.0], vec![vec![c(0.0)], vec![c(0.25)], vec![c(1.0)]]).unwrap();
        assert_eq!(curve.len(), 3);
        assert_eq!(curve.dim(), 1);
    }

    #[test]
    fn make_curve_errors() {
        assert_eq!(
            SampledCurve::new(vec![0.0, 0.0], vec![vec![c(0.0)], vec![c(0.0)]]).unwrap_err(),
            Error::NonMonotoneGrid { index: 1 }
        );
        assert_eq!(
            SampledCurve::new(vec![0.0, 1.0], vec![vec![c(1.0)], vec![c(2.0)], vec![c(3.0)]]).unwrap_err(),
            Error::LengthMismatch { expected: 2, actual: 3 }
        );
        assert!(matches!(
            SampledCurve::new(vec![0.0, 1.0], vec![vec![c(1.0)], vec![c(2.0), c(3.0)]]),
            Err(Error::RaggedComponents { index: 1, .. })
        ));
    }

    #[test]
    fn first_difference_of_linear_is_one() {
        let g = Grid::uniform(0.0, 1.0, 11).unwrap();
        let f = SampledCurve::scalar_from_fn(g, c);
        let d = f.finite_difference(1).unwrap();
        for v in d.values() {
            assert!((v[0] - c(1.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn second_difference_of_square_is_two() {
        let g = Grid::uniform(-1.0, 2.0, 17).unwrap();
        let f = SampledCurve::scalar_from_fn(g, |t| c(t * t));
        let d = f.finite_difference(2).unwrap();
        assert_eq!(d.len(), 17);
        for v in d.values() {
            assert!((v[0] - c(2.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn order_too_high() {
        let g = Grid::uniform(0.0, 1.0, 3).unwrap();
        let f = SampledCurve::scalar_from_fn(g, c);
        assert_eq!(
            f.finite_difference(5).unwrap_err(),
            Error::OrderTooHigh { order: 5, len: 3 }
        );
    }

    #[test]
    fn refine_with_oracle_and_empty_mask() {
        let g = Grid::uniform(0.0, 1.0, 3).unwrap();
        let f = SampledCurve::scalar_from_fn(g, c);
        let oracle = |t: f64| vec![c(t)];
        let r = f.refine_all(Refinement::Oracle(&oracle)).unwrap();
        assert_eq!(r.len(), 5);
        for (t, v) in r.nodes().iter().zip(r.values()) {
            assert_eq!(v[0], c(*t));
        }
        assert_eq!(r.synthetic_count(), 0);
        assert_eq!(f.refine(&BTreeSet::new(), Refinement::Interpolate).unwrap(), f);
    }

    #[test]
    fn interpolated_midpoints_are_flagged() {
        let g = Grid::uniform(0.0, 1.0, 5).unwrap();
        let h = 0.25;
        let f = SampledCurve::scalar_from_fn(g, |t| c(t * t));
        let r = f.refine_all(Refinement::Interpolate).unwrap();
        for i in 0..r.len() {
            let t = r.t(i);
            if i % 2 == 1 {
                assert!(r.is_synthetic(i));
                // chord of t^2 lies h^2/4 above the parabola at the midpoint
                assert!((r.value(i)[0].re - t * t - h * h / 4.0).abs() < 1e-15);
            } else {
                assert!(!r.is_synthetic(i));
            }
        }
    }
}
