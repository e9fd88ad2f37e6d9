use crate::error::{Error, Result};
use crate::scalar::Real;

/// A strictly increasing list of parameter values with at least two nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid<T> {
    nodes: Vec<T>,
}

impl<T: Real> Grid<T> {
    pub fn new(nodes: Vec<T>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::GridTooShort { len: nodes.len() });
        }
        for i in 1..nodes.len() {
            if !(nodes[i] > nodes[i - 1]) {
                return Err(Error::NonMonotoneGrid { index: i });
            }
        }
        Ok(Self { nodes })
    }

    /// `n` equispaced nodes on `[a, b]`.
    ///
    /// Node `i` is computed as `(a (n-1-i) + b i) / (n-1)`, so a grid that is
    /// symmetric about zero contains `0` exactly when `n` is odd.
    pub fn uniform(a: T, b: T, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::GridTooShort { len: n });
        }
        let m = T::lit((n - 1) as f64);
        let nodes = (0..n)
            .map(|i| {
                if i == 0 {
                    a
                } else if i == n - 1 {
                    b
                } else {
                    (a * T::lit((n - 1 - i) as f64) + b * T::lit(i as f64)) / m
                }
            })
            .collect();
        Self::new(nodes)
    }

    /// Roughly `n` nodes on `[a, b]`, geometrically graded towards each of
    /// `centers`, with smallest spacing `h_min` next to every center.
    ///
    /// The interval is split at the midpoints between consecutive centers and
    /// each side of each center receives a share of the node budget
    /// proportional to the number of decades it has to bridge.
    pub fn graded(a: T, b: T, centers: &[T], n: usize, h_min: T) -> Result<Self> {
        if !(b > a) {
            return Err(Error::NonMonotoneGrid { index: 1 });
        }
        let mut cs: Vec<T> = centers.iter().copied().filter(|c| *c >= a && *c <= b).collect();
        cs.sort_by(|x, y| x.cmp_total(y));
        cs.dedup();
        if cs.is_empty() {
            return Self::uniform(a, b, n.max(2));
        }

        // (center, signed side length)
        let mut sides: Vec<(T, T)> = Vec::new();
        for (i, &c) in cs.iter().enumerate() {
            let lo = if i == 0 { a } else { (cs[i - 1] + c) / T::lit(2.0) };
            let hi = if i + 1 == cs.len() {
                b
            } else {
                (c + cs[i + 1]) / T::lit(2.0)
            };
            if c > lo {
                sides.push((c, lo - c));
            }
            if hi > c {
                sides.push((c, hi - c));
            }
        }

        let spacing_floor = |c: T| -> T {
            let f = T::epsilon() * T::lit(16.0) * c.abs();
            if h_min > f {
                h_min
            } else {
                f
            }
        };
        let logs: Vec<T> = sides
            .iter()
            .map(|&(c, len)| {
                let h = spacing_floor(c);
                if len.abs() > h {
                    (len.abs() / h).ln()
                } else {
                    T::zero()
                }
            })
            .collect();
        let total_log: T = logs.iter().copied().sum();
        let budget = n.saturating_sub(1 + cs.len()).max(sides.len());

        let mut nodes: Vec<T> = Vec::with_capacity(n + 4);
        nodes.push(a);
        nodes.push(b);
        nodes.extend(cs.iter().copied());
        for (&(c, len), &lg) in sides.iter().zip(&logs) {
            let h = spacing_floor(c);
            let end = c + len;
            if lg <= T::zero() || total_log <= T::zero() {
                nodes.push(end);
                continue;
            }
            let share = (T::lit(budget as f64) * lg / total_log).round();
            let steps = share.to_usize().unwrap_or(1).max(1);
            let ratio = (lg / T::lit(steps as f64)).exp();
            let sign = len.signum();
            let mut offset = h;
            for _ in 0..steps {
                nodes.push(c + sign * offset);
                offset *= ratio;
            }
            nodes.push(end);
        }
        nodes.retain(|t| *t >= a && *t <= b);
        nodes.sort_by(|x, y| x.cmp_total(y));
        nodes.dedup_by(|x, y| !(*x > *y));
        Self::new(nodes)
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> T {
        self.nodes[0]
    }

    pub fn last(&self) -> T {
        self.nodes[self.nodes.len() - 1]
    }

    /// Length of the parameter interval.
    pub fn length(&self) -> T {
        self.last() - self.first()
    }

    pub fn cells(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn width(&self, cell: usize) -> T {
        self.nodes[cell + 1] - self.nodes[cell]
    }

    pub fn widths(&self) -> impl Iterator<Item = T> + '_ {
        self.nodes.windows(2).map(|w| w[1] - w[0])
    }

    /// Index of the cell containing `t` (clamped to the grid).
    pub fn locate(&self, t: T) -> usize {
        let idx = self.nodes.partition_point(|x| *x <= t);
        idx.saturating_sub(1).min(self.cells() - 1)
    }

    /// Index of a node exactly equal to `t`.
    pub fn index_of(&self, t: T) -> Option<usize> {
        self.nodes.binary_search_by(|x| x.cmp_total(&t)).ok()
    }

    /// Sub-grid on the node range `lo..=hi`.
    pub fn slice(&self, lo: usize, hi: usize) -> Result<Self> {
        Self::new(self.nodes[lo..=hi].to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_symmetric_grid_contains_exact_zero() {
        let g = Grid::<f64>::uniform(-1.0, 1.0, 101).unwrap();
        assert_eq!(g.nodes()[50], 0.0);
        assert_eq!(g.len(), 101);
        assert_eq!(g.length(), 2.0);
    }

    #[test]
    fn rejects_repeated_nodes() {
        assert_eq!(
            Grid::new(vec![0.0, 0.0]).unwrap_err(),
            Error::NonMonotoneGrid { index: 1 }
        );
        assert!(matches!(Grid::<f64>::new(vec![1.0]), Err(Error::GridTooShort { .. })));
    }

    #[test]
    fn graded_grid_reaches_requested_spacing() {
        let g = Grid::<f64>::graded(-1.0, 1.0, &[0.0], 4096, 1e-20).unwrap();
        assert!(g.index_of(0.0).is_some());
        let i = g.index_of(0.0).unwrap();
        assert!((g.nodes()[i + 1] - 1e-20).abs() < 1e-30);
        assert!((g.nodes()[i - 1] + 1e-20).abs() < 1e-30);
        assert!((g.len() as i64 - 4096).abs() < 8, "{}", g.len());
        assert_eq!(g.first(), -1.0);
        assert_eq!(g.last(), 1.0);
    }

    #[test]
    fn graded_grid_with_center_on_boundary() {
        let g = Grid::<f64>::graded(0.0, 1.0, &[0.0], 200, 1e-8).unwrap();
        assert_eq!(g.nodes()[1], 1e-8);
        assert!(g.len() >= 190);
    }

    #[test]
    fn locate_finds_containing_cell() {
        let g = Grid::<f64>::uniform(0.0, 1.0, 5).unwrap();
        assert_eq!(g.locate(0.3), 1);
        assert_eq!(g.locate(1.0), 3);
        assert_eq!(g.locate(0.0), 0);
    }
}
