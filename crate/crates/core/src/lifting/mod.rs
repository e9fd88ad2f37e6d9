//! Continuous lifts of sampled curves and grids over orbit maps.

use crate::curve::SampledCurve;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::scalar::{Real, C};

pub mod extend;
pub mod glue;
pub mod grid2d;
pub mod matching;
pub mod polyroots;
pub mod radical;
pub mod roots;
pub mod tuple;

pub use extend::{extend_through_zeros, lift_radical_on_components, zero_components};
pub use glue::glue_lifts;
pub use grid2d::{lift_grid_2d, Grid2DOutcome, LiftedGrid2D, MonodromyReport, MonodromyStatus};
pub use matching::{match_points, match_scalars, min_cost_assignment, tuple_distance};
pub use radical::continuous_radical;
pub use roots::continuous_roots;
pub use tuple::lift_tuple_curve;

/// Tolerances and budgets shared by the lifting routines.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LiftConfig<T> {
    /// Bound on the residual `|sigma(lift) - a|` and on junction mismatch.
    pub tol: T,
    /// Invariant values below this magnitude are treated as zero.
    pub zero_tol: T,
    /// Maximum number of nested bisections of one input cell.
    pub max_depth: usize,
    /// Fraction of the root spacing beyond which a radical step is ambiguous.
    pub ambiguity: T,
    /// Safety factor `c` of the matching budget `(c h)^{2/Q}`.
    pub budget_factor: T,
}

impl<T: Real> Default for LiftConfig<T> {
    fn default() -> Self {
        Self {
            tol: T::lit(1e-8),
            zero_tol: T::lit(1e-12),
            max_depth: 20,
            ambiguity: T::lit(0.5),
            budget_factor: T::lit(10.0),
        }
    }
}

/// A lift sampled on a (possibly refined) grid.
///
/// Branch `b`, coordinate `c` is component `b * branch_dim + c` of `curve`.
/// `invariant` holds the lifted invariant values on the same grid.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftedCurve<T> {
    pub curve: SampledCurve<T>,
    pub invariant: SampledCurve<T>,
    pub branches: usize,
    pub branch_dim: usize,
    /// `max_i |sigma(lift(t_i)) - a(t_i)|`.
    pub residual: T,
    /// Deepest bisection applied to any input cell.
    pub refinement_level: usize,
    /// Steps that stayed ambiguous because no oracle was available.
    pub unresolved_cells: usize,
}

impl<T: Real> LiftedCurve<T> {
    pub fn grid(&self) -> &Grid<T> {
        self.curve.grid()
    }

    pub fn nodes(&self) -> &[T] {
        self.curve.nodes()
    }

    pub fn len(&self) -> usize {
        self.curve.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Branch `b` as a curve in `C^branch_dim`.
    pub fn branch(&self, b: usize) -> SampledCurve<T> {
        let lo = b * self.branch_dim;
        let values = self
            .curve
            .values()
            .iter()
            .map(|v| v[lo..lo + self.branch_dim].to_vec())
            .collect();
        SampledCurve::from_grid(self.grid().clone(), values).expect("branch of a valid lift")
    }

    /// Value of branch `b` at node `i`.
    pub fn branch_value(&self, i: usize, b: usize) -> &[C<T>] {
        let lo = b * self.branch_dim;
        &self.curve.value(i)[lo..lo + self.branch_dim]
    }

    /// Applies a per-node transform to the whole lift, keeping the metadata.
    pub fn map_values(&self, f: impl Fn(&[C<T>]) -> Vec<C<T>>) -> Result<Self> {
        Ok(Self {
            curve: self.curve.map(f)?,
            ..self.clone()
        })
    }

    /// Multiplies every value by `w` (a deck rotation for the cyclic kind).
    pub fn rotate(&self, w: C<T>) -> Self {
        self.map_values(|v| v.iter().map(|z| *z * w).collect())
            .expect("rotation keeps the shape")
    }

    /// Relabels branches: new branch `b` is old branch `perm[b]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.branches {
            return Err(Error::ShapeMismatch(format!(
                "permutation of length {} for {} branches",
                perm.len(),
                self.branches
            )));
        }
        let bd = self.branch_dim;
        self.map_values(|v| {
            perm.iter()
                .flat_map(|&p| v[p * bd..(p + 1) * bd].iter().copied())
                .collect()
        })
    }
}

/// A lift together with the failure that stopped it early, if any.
///
/// On failure `lift` covers the nodes up to the failing cell.
#[derive(Clone, Debug)]
pub struct LiftOutcome<T> {
    pub lift: LiftedCurve<T>,
    pub failure: Option<Error>,
}

impl<T> LiftOutcome<T> {
    pub fn into_result(self) -> Result<LiftedCurve<T>> {
        match self.failure {
            None => Ok(self.lift),
            Some(e) => Err(e),
        }
    }
}

/// Scalar curve from the first component of every sample.
pub(crate) fn scalar_values<T: Real>(curve: &SampledCurve<T>) -> Vec<C<T>> {
    curve.values().iter().map(|v| v[0]).collect()
}

pub(crate) fn max_of<T: Real>(xs: impl IntoIterator<Item = T>) -> T {
    xs.into_iter().fold(T::zero(), |m, x| if x > m { x } else { m })
}
