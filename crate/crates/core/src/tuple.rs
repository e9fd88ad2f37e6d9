use crate::error::{Error, Result};
use crate::scalar::{cmp_complex_vec, Real, C};

/// An unordered `Q`-tuple of points in `C^n`.
///
/// Points are stored sorted lexicographically by `(re, im)` per coordinate,
/// so derived equality is multiset equality.
#[derive(Clone, Debug, PartialEq)]
pub struct AQPoint<T> {
    points: Vec<Vec<C<T>>>,
}

impl<T: Real> AQPoint<T> {
    pub fn new(mut points: Vec<Vec<C<T>>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::ShapeMismatch("a Q-tuple needs Q >= 1 points".into()));
        }
        let n = points[0].len();
        if n == 0 {
            return Err(Error::ShapeMismatch("points must have n >= 1 coordinates".into()));
        }
        if let Some((index, p)) = points.iter().enumerate().find(|(_, p)| p.len() != n) {
            return Err(Error::RaggedComponents {
                index,
                expected: n,
                actual: p.len(),
            });
        }
        points.sort_by(|a, b| cmp_complex_vec(a, b));
        Ok(Self { points })
    }

    /// Tuple of scalar points (`n = 1`).
    pub fn from_scalars(points: &[C<T>]) -> Result<Self> {
        Self::new(points.iter().map(|p| vec![*p]).collect())
    }

    pub fn q(&self) -> usize {
        self.points.len()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    /// Points in canonical order.
    pub fn points(&self) -> &[Vec<C<T>>] {
        &self.points
    }

    /// Coordinate column `j` as a vector of length `Q`.
    pub fn column(&self, j: usize) -> Vec<C<T>> {
        self.points.iter().map(|p| p[j]).collect()
    }
}
