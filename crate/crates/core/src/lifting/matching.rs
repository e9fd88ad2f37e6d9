//! Minimum-cost assignment and the matching metric on unordered tuples.

use crate::error::{Error, Result};
use crate::scalar::{vec_dist_sqr, Real, C};
use crate::tuple::AQPoint;

/// Solves the square assignment problem for `cost` (row-major, `n x n`).
///
/// Returns `assignment[row] = column` and the total cost. Shortest
/// augmenting path variant of the Hungarian method, `O(n^3)`.
pub fn min_cost_assignment<T: Real>(cost: &[Vec<T>]) -> (Vec<usize>, T) {
    let n = cost.len();
    if n == 0 {
        return (Vec::new(), T::zero());
    }
    let inf = T::infinity();
    // 1-based potentials; column 0 is a sentinel
    let mut u = vec![T::zero(); n + 1];
    let mut v = vec![T::zero(); n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            if j1 == 0 {
                // only possible with NaN costs; fall back to any free column
                j1 = (1..=n).find(|&j| !used[j]).expect("a free column exists");
                delta = T::zero();
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        if p[j] > 0 {
            assignment[p[j] - 1] = j - 1;
        }
    }
    // summed in row order so the value does not depend on solver internals
    let total = assignment
        .iter()
        .enumerate()
        .map(|(i, &j)| cost[i][j])
        .fold(T::zero(), |a, b| a + b);
    (assignment, total)
}

/// Squared-distance cost matrix between two ordered point lists.
pub fn squared_cost<T: Real>(from: &[Vec<C<T>>], to: &[Vec<C<T>>]) -> Vec<Vec<T>> {
    from.iter()
        .map(|a| to.iter().map(|b| vec_dist_sqr(a, b)).collect())
        .collect()
}

/// Optimal matching of `from[i]` to `to[assignment[i]]` under squared
/// Euclidean cost; returns the assignment and the total squared cost.
pub fn match_points<T: Real>(from: &[Vec<C<T>>], to: &[Vec<C<T>>]) -> (Vec<usize>, T) {
    min_cost_assignment(&squared_cost(from, to))
}

/// Scalar convenience wrapper of [`match_points`].
pub fn match_scalars<T: Real>(from: &[C<T>], to: &[C<T>]) -> (Vec<usize>, T) {
    let cost: Vec<Vec<T>> = from
        .iter()
        .map(|a| to.iter().map(|b| (*a - *b).norm_sqr()).collect())
        .collect();
    min_cost_assignment(&cost)
}

/// The metric on unordered `Q`-tuples: the square root of the minimal
/// total squared distance over all bijections.
pub fn tuple_distance<T: Real>(a: &AQPoint<T>, b: &AQPoint<T>) -> Result<T> {
    if a.q() != b.q() || a.dim() != b.dim() {
        return Err(Error::ShapeMismatch(format!(
            "tuples of shape ({}, {}) and ({}, {})",
            a.q(),
            a.dim(),
            b.q(),
            b.dim()
        )));
    }
    let (_, cost) = match_points(a.points(), b.points());
    Ok(cost.max(T::zero()).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assignment_small_matrix() {
        let cost = vec![vec![4.0, 1.0, 3.0], vec![2.0, 0.0, 5.0], vec![3.0, 2.0, 2.0]];
        let (a, c) = min_cost_assignment(&cost);
        assert_eq!(c, 5.0);
        assert_eq!(a, vec![1, 0, 2]);
    }

    #[test]
    fn distance_between_equal_tuples_is_zero() {
        let a = AQPoint::<f64>::from_scalars(&[C::new(1.0, 2.0), C::new(-1.0, 0.5)]).unwrap();
        assert_eq!(tuple_distance(&a, &a).unwrap(), 0.0);
        let b = AQPoint::from_scalars(&[C::new(1.0, 2.0), C::new(-1.0, 1.5)]).unwrap();
        assert!((tuple_distance(&a, &b).unwrap() - 1.0).abs() < 1e-15);
    }
}
