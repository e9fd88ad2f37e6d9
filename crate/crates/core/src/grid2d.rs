use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::scalar::{Real, C};

/// Samples of a map on a tensor grid in the plane, optionally masked.
///
/// Values are stored row-major in `x`: index `ix * ny + iy`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledGrid2D<T> {
    x: Grid<T>,
    y: Grid<T>,
    values: Vec<Vec<C<T>>>,
    dim: usize,
    mask: Option<Vec<bool>>,
}

impl<T: Real> SampledGrid2D<T> {
    pub fn new(x: Grid<T>, y: Grid<T>, values: Vec<Vec<C<T>>>) -> Result<Self> {
        let expected = x.len() * y.len();
        if values.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: values.len(),
            });
        }
        let dim = values[0].len();
        if let Some((index, v)) = values.iter().enumerate().find(|(_, v)| v.len() != dim) {
            return Err(Error::RaggedComponents {
                index,
                expected: dim,
                actual: v.len(),
            });
        }
        Ok(Self {
            x,
            y,
            values,
            dim,
            mask: None,
        })
    }

    pub fn from_fn(x: Grid<T>, y: Grid<T>, f: impl Fn(T, T) -> Vec<C<T>>) -> Result<Self> {
        let mut values = Vec::with_capacity(x.len() * y.len());
        for &xv in x.nodes() {
            for &yv in y.nodes() {
                values.push(f(xv, yv));
            }
        }
        Self::new(x, y, values)
    }

    /// Restricts the domain to the points where `keep(x, y)` holds.
    pub fn with_mask(mut self, keep: impl Fn(T, T) -> bool) -> Self {
        let mut mask = Vec::with_capacity(self.values.len());
        for &xv in self.x.nodes() {
            for &yv in self.y.nodes() {
                mask.push(keep(xv, yv));
            }
        }
        self.mask = Some(mask);
        self
    }

    pub fn with_mask_vec(mut self, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != self.values.len() {
            return Err(Error::LengthMismatch {
                expected: self.values.len(),
                actual: mask.len(),
            });
        }
        self.mask = Some(mask);
        Ok(self)
    }

    pub fn x(&self) -> &Grid<T> {
        &self.x
    }

    pub fn y(&self) -> &Grid<T> {
        &self.y
    }

    pub fn nx(&self) -> usize {
        self.x.len()
    }

    pub fn ny(&self) -> usize {
        self.y.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        ix * self.ny() + iy
    }

    pub fn value(&self, ix: usize, iy: usize) -> &[C<T>] {
        &self.values[self.index(ix, iy)]
    }

    pub fn values(&self) -> &[Vec<C<T>>] {
        &self.values
    }

    pub fn active(&self, ix: usize, iy: usize) -> bool {
        self.mask.as_ref().is_none_or(|m| m[self.index(ix, iy)])
    }

    pub fn mask(&self) -> Option<&[bool]> {
        self.mask.as_deref()
    }
}
