//! Reduction of a curve in the orbit space to a normalized curve near one
//! point: fixed radical selections, the dominant index, maximal admissible
//! intervals and their checks, and root-cluster splitting for `S_Q`.
//!
//! Component and node indices are 0-based throughout.

use rayon::prelude::*;

use crate::curve::{Oracle, SampledCurve};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::lifting::{continuous_radical, LiftConfig, LiftedCurve};
use crate::scalar::{Real, C};

pub mod admissible;
pub mod clusters;

pub use admissible::{
    admissible_at_nodes, check_admissible, check_derivative_bounds, maximal_admissible_interval, AdmissibleData,
    AdmissibleReport, AdmissibleSummary, Conclusion, DerivativeBoundEntry, DerivativeBoundReport, Failure, StopKind,
};
pub use clusters::{split_clusters, ClusterGroup, ClusterSplit};

/// Rounds of joint refinement before the component grids must agree.
const MAX_ROUNDS: usize = 8;

/// One continuous radical `â_j` of every component `a_j`, all on one grid.
#[derive(Clone, Debug, PartialEq)]
pub struct RadicalSelection<T> {
    pub base: SampledCurve<T>,
    /// `â_j^{d_j} = a_j` at every node.
    pub selections: SampledCurve<T>,
    pub degrees: Vec<usize>,
    /// `sum_i |â_j(t_{i+1}) - â_j(t_i)|` per component.
    pub l1_components: Vec<T>,
    /// Sum of `l1_components`.
    pub l1: T,
    /// `max_{i,j} |â_j(t_i)^{d_j} - a_j(t_i)|`.
    pub residual: T,
    pub unresolved_cells: usize,
}

impl<T: Real> RadicalSelection<T> {
    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> &[T] {
        self.base.nodes()
    }

    /// `max_j d_j`.
    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(1)
    }

    /// `â_j(t_i)`.
    pub fn hat(&self, i: usize, j: usize) -> C<T> {
        self.selections.value(i)[j]
    }

    /// Restriction to the node range `lo..=hi`; the L¹ data is recomputed.
    pub fn slice(&self, lo: usize, hi: usize) -> Result<Self> {
        let selections = self.selections.slice(lo, hi)?;
        let l1_components = component_variation(&selections);
        Ok(Self {
            base: self.base.slice(lo, hi)?,
            l1: l1_components.iter().copied().sum(),
            l1_components,
            selections,
            degrees: self.degrees.clone(),
            residual: self.residual,
            unresolved_cells: self.unresolved_cells,
        })
    }

    /// `sum_j |â_j(t_{c+1}) - â_j(t_c)|` for every cell `c`.
    pub fn cell_variation(&self) -> Vec<T> {
        let v = self.selections.values();
        (0..self.len() - 1)
            .map(|c| v[c + 1].iter().zip(&v[c]).map(|(b, a)| (*b - *a).norm()).sum())
            .collect()
    }
}

fn component_variation<T: Real>(curve: &SampledCurve<T>) -> Vec<T> {
    let v = curve.values();
    (0..curve.dim())
        .map(|j| (1..v.len()).map(|i| (v[i][j] - v[i - 1][j]).norm()).sum())
        .collect()
}

fn lift_component<T: Real>(
    base: &SampledCurve<T>,
    j: usize,
    d: usize,
    oracle: Option<Oracle<'_, T>>,
    cfg: &LiftConfig<T>,
) -> Result<LiftedCurve<T>> {
    let g = base.component(j);
    match oracle {
        Some(o) => {
            let oj = move |t: T| vec![o(t)[j]];
            continuous_radical(&g, d, Some(&oj), cfg)
        }
        None => continuous_radical(&g, d, None, cfg),
    }
}

/// Lifts every component `a_j` through its `d_j`-th radical.
///
/// With an oracle, cells refined for one component are resampled for all of
/// them until the grids agree, so the selections share one grid. Without an
/// oracle ambiguous steps are accepted and counted.
pub fn radical_selections<T: Real>(
    a: &SampledCurve<T>,
    degrees: &[usize],
    oracle: Option<Oracle<'_, T>>,
    cfg: &LiftConfig<T>,
) -> Result<RadicalSelection<T>> {
    if degrees.len() != a.dim() {
        return Err(Error::ShapeMismatch(format!(
            "{} degrees for a curve with {} components",
            degrees.len(),
            a.dim()
        )));
    }
    if degrees.contains(&0) {
        return Err(Error::InvalidParameter("radical degrees must be >= 1".into()));
    }
    let mut base = a.clone();
    for _ in 0..MAX_ROUNDS {
        let lifts = (0..degrees.len())
            .into_par_iter()
            .map(|j| lift_component(&base, j, degrees[j], oracle, cfg))
            .collect::<Result<Vec<_>>>()?;
        if lifts.iter().all(|l| l.nodes() == base.nodes()) {
            return Ok(assemble(base, degrees, &lifts));
        }
        // only an oracle can have refined a grid
        let o = oracle.expect("refinement requires an oracle");
        let mut nodes: Vec<T> = lifts.iter().flat_map(|l| l.nodes().iter().copied()).collect();
        nodes.sort_by(|x, y| x.cmp_total(y));
        nodes.dedup();
        base = SampledCurve::from_fn(Grid::new(nodes)?, o)?;
    }
    Err(Error::RefinementBudgetExhausted {
        t: a.grid().first().as_f64(),
        depth: cfg.max_depth,
    })
}

fn assemble<T: Real>(base: SampledCurve<T>, degrees: &[usize], lifts: &[LiftedCurve<T>]) -> RadicalSelection<T> {
    let values: Vec<Vec<C<T>>> = (0..base.len())
        .map(|i| lifts.iter().map(|l| l.curve.value(i)[0]).collect())
        .collect();
    let selections = SampledCurve::from_grid(base.grid().clone(), values).expect("lifts share the base grid");
    let l1_components = component_variation(&selections);
    RadicalSelection {
        l1: l1_components.iter().copied().sum(),
        l1_components,
        residual: lifts.iter().map(|l| l.residual).fold(T::zero(), T::max),
        unresolved_cells: lifts.iter().map(|l| l.unresolved_cells).sum(),
        selections,
        base,
        degrees: degrees.to_vec(),
    }
}

/// The smallest `k` with `|â_k(t_i)| = max_j |â_j(t_i)|`.
pub fn dominant_index<T: Real>(sel: &RadicalSelection<T>, i: usize) -> Result<usize> {
    let v = sel.selections.value(i);
    let mut k = 0;
    for j in 1..v.len() {
        if v[j].norm() > v[k].norm() {
            k = j;
        }
    }
    if v[k].norm() == T::zero() {
        return Err(Error::AllZeroAtPoint { index: i });
    }
    Ok(k)
}

/// `((â_j / â_k)^{d_j})_j`; component `k` is identically one.
pub fn normalized_curve<T: Real>(sel: &RadicalSelection<T>, k: usize) -> Result<SampledCurve<T>> {
    let one = C::new(T::one(), T::zero());
    let mut values = Vec::with_capacity(sel.len());
    for (i, v) in sel.selections.values().iter().enumerate() {
        if v[k].norm() == T::zero() {
            return Err(Error::VanishingDominant {
                t: sel.nodes()[i].as_f64(),
            });
        }
        values.push(
            v.iter()
                .zip(&sel.degrees)
                .enumerate()
                .map(|(j, (z, &d))| if j == k { one } else { (*z / v[k]).powu(d as u32) })
                .collect(),
        );
    }
    SampledCurve::from_grid(sel.base.grid().clone(), values)
}

/// Polygonal length of a curve in the Euclidean norm.
pub fn polygonal_length<T: Real>(curve: &SampledCurve<T>) -> T {
    let v = curve.values();
    (1..v.len()).map(|i| crate::scalar::vec_dist(&v[i], &v[i - 1])).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> C<f64> {
        C::new(x, 0.0)
    }

    fn grid(n: usize) -> Grid<f64> {
        Grid::uniform(-1.0, 1.0, n).unwrap()
    }

    #[test]
    fn square_of_identity_has_unit_variation_each_side() {
        let a = SampledCurve::scalar_from_fn(grid(41), |t| re(t * t));
        let sel = radical_selections(&a, &[2], None, &LiftConfig::default()).unwrap();
        assert!((sel.l1 - 2.0).abs() < 1e-12);
        for i in 0..sel.len() {
            assert!((sel.hat(i, 0).norm() - sel.nodes()[i].abs()).abs() < 1e-12);
        }
    }

    #[test]
    fn variation_does_not_depend_on_the_selection() {
        let a = SampledCurve::scalar_from_fn(grid(101), |t| re(t));
        let sel = radical_selections(&a, &[2], None, &LiftConfig::default()).unwrap();
        let flipped = sel.selections.map(|v| vec![-v[0]]).unwrap();
        let other = component_variation(&flipped);
        assert!((other[0] - sel.l1).abs() < 1e-8);
    }

    #[test]
    fn zero_component_selects_zero() {
        let a = SampledCurve::from_fn(grid(11), |t| vec![re(0.0), re(t)]).unwrap();
        let sel = radical_selections(&a, &[3, 1], None, &LiftConfig::default()).unwrap();
        assert!(sel.selections.values().iter().all(|v| v[0] == re(0.0)));
        assert_eq!(sel.l1_components[0], 0.0);
    }

    #[test]
    fn oracle_refinement_keeps_one_grid() {
        let oracle = |t: f64| vec![re(t * t * t), re(t)];
        let a = SampledCurve::from_fn(grid(8), oracle).unwrap();
        let sel = radical_selections(&a, &[3, 2], Some(&oracle), &LiftConfig::default()).unwrap();
        assert_eq!(sel.selections.len(), sel.base.len());
        assert!(sel.residual < 1e-8);
    }

    fn selection(values: Vec<Vec<C<f64>>>, degrees: &[usize]) -> RadicalSelection<f64> {
        let n = values.len();
        let a = SampledCurve::new((0..n).map(|i| i as f64).collect(), values).unwrap();
        let sel = radical_selections(&a, &vec![1; degrees.len()], None, &LiftConfig::default()).unwrap();
        RadicalSelection {
            degrees: degrees.to_vec(),
            ..sel
        }
    }

    #[test]
    fn dominant_index_rules() {
        let sel = selection(
            vec![vec![re(0.5), re(0.9)], vec![re(0.9), re(0.9)], vec![re(0.0), re(0.0)]],
            &[1, 1],
        );
        assert_eq!(dominant_index(&sel, 0).unwrap(), 1);
        assert_eq!(dominant_index(&sel, 1).unwrap(), 0);
        assert_eq!(dominant_index(&sel, 2), Err(Error::AllZeroAtPoint { index: 2 }));
    }

    #[test]
    fn normalized_examples() {
        let a = SampledCurve::from_fn(Grid::uniform(0.5, 1.0, 6).unwrap(), |t| vec![re(t), re(2.0 * t)]).unwrap();
        let sel = radical_selections(&a, &[1, 1], None, &LiftConfig::default()).unwrap();
        let u = normalized_curve(&sel, 1).unwrap();
        for v in u.values() {
            assert!((v[0] - re(0.5)).norm() < 1e-15);
            assert_eq!(v[1], re(1.0));
        }
        assert_eq!(polygonal_length(&u), 0.0);

        let a = SampledCurve::scalar_from_fn(grid(5), |t| re(t));
        let sel = radical_selections(&a, &[1], None, &LiftConfig::default()).unwrap();
        assert!(matches!(
            normalized_curve(&sel, 0),
            Err(Error::VanishingDominant { .. })
        ));
    }

    #[test]
    fn normalized_curve_is_scale_free() {
        let g = Grid::uniform(0.1, 1.0, 30).unwrap();
        let curve = |s: f64| {
            SampledCurve::from_fn(g.clone(), move |t| {
                vec![
                    re(s * (1.0 + t)),
                    C::new(s * s * t.cos(), s * s * t),
                    re(s.powi(3) * (2.0 - t)),
                ]
            })
            .unwrap()
        };
        let degrees = [1, 2, 3];
        let cfg = LiftConfig::default();
        let base = normalized_curve(&radical_selections(&curve(1.0), &degrees, None, &cfg).unwrap(), 0).unwrap();
        for s in [0.01, 3.0, 250.0] {
            let u = normalized_curve(&radical_selections(&curve(s), &degrees, None, &cfg).unwrap(), 0).unwrap();
            for (x, y) in u.values().iter().zip(base.values()) {
                for (p, q) in x.iter().zip(y) {
                    assert!((*p - *q).norm() <= 1e-10 * q.norm().max(1.0));
                }
            }
        }
    }
}
