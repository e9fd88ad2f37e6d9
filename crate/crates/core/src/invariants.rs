//! Forward evaluation of the orbit maps: power maps, elementary symmetric
//! functions, their polarizations, and the Noether map of a finite matrix
//! group.
//!
//! The polynomial routines are generic over any commutative ring
//! (`num_traits::Num`), so they run unchanged on `f64`, `Complex<f64>` or
//! exact integer types.

use num_traits::Num;

use crate::error::{Error, Result};
use crate::representation::{MatrixGroup, RepresentationKind, RepresentationSpec};
use crate::scalar::{Real, C};
use crate::tuple::AQPoint;

/// Values of a system of basic invariants at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantValue<S> {
    pub values: Vec<S>,
    pub degrees: Vec<usize>,
}

impl<S> InvariantValue<S> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `z^d` by repeated multiplication.
pub fn power_map<S: Clone + Num>(z: S, d: usize) -> S {
    let mut acc = S::one();
    for _ in 0..d {
        acc = acc * z.clone();
    }
    acc
}

/// `(e_1, ..., e_Q)` with `e_i` the sum of all `i`-fold products of distinct
/// points, i.e. the coefficients of `prod (X + p_i)`.
pub fn elementary_symmetric<S: Clone + Num>(points: &[S]) -> Vec<S> {
    let q = points.len();
    let mut e = vec![S::zero(); q + 1];
    e[0] = S::one();
    for (i, p) in points.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            e[k] = e[k].clone() + p.clone() * e[k - 1].clone();
        }
    }
    e.remove(0);
    e
}

/// Column multisets of the polarized generators, ordered by degree and then
/// lexicographically: `(k, c_1 <= ... <= c_k)`.
pub fn polarization_generators(q: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for k in 1..=q {
        let mut combo = vec![0usize; k];
        loop {
            out.push(combo.clone());
            // next combination with repetition
            let mut i = k;
            while i > 0 && combo[i - 1] == n - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            combo[i - 1] += 1;
            let v = combo[i - 1];
            for c in combo.iter_mut().skip(i) {
                *c = v;
            }
        }
    }
    out
}

pub fn polarization_degrees(q: usize, n: usize) -> Vec<usize> {
    polarization_generators(q, n).iter().map(Vec::len).collect()
}

/// `sigma_k(x^{c_1}, ..., x^{c_k}) = sum over pairwise distinct i_1..i_k of
/// x_{i_1}^{c_1} ... x_{i_k}^{c_k}`, where `x_i^c` is coordinate `c` of
/// point `i`.
///
/// Summed by dynamic programming over subsets of used points, so the cost is
/// `O(2^Q Q)` per generator.
pub fn polarization<S: Clone + Num>(points: &[Vec<S>], columns: &[usize]) -> S {
    let q = points.len();
    let k = columns.len();
    if k > q {
        return S::zero();
    }
    let full = 1usize << q;
    let mut dp = vec![S::zero(); full];
    dp[0] = S::one();
    let mut total = S::zero();
    for mask in 0..full {
        let used = mask.count_ones() as usize;
        if used == k {
            total = total + dp[mask].clone();
            continue;
        }
        if used > k || dp[mask].is_zero() {
            continue;
        }
        let col = columns[used];
        for (i, p) in points.iter().enumerate() {
            if mask & (1 << i) == 0 {
                let next = mask | (1 << i);
                dp[next] = dp[next].clone() + dp[mask].clone() * p[col].clone();
            }
        }
    }
    total
}

/// All polarizations of the elementary symmetric functions of `Q` points in
/// an `n`-dimensional space, without normalising the integer factors.
pub fn polarizations<S: Clone + Num>(points: &[Vec<S>]) -> InvariantValue<S> {
    let q = points.len();
    let n = points.first().map_or(0, Vec::len);
    let gens = polarization_generators(q, n);
    InvariantValue {
        values: gens.iter().map(|g| polarization(points, g)).collect(),
        degrees: gens.iter().map(Vec::len).collect(),
    }
}

pub fn polarized_invariants<T: Real>(tuple: &AQPoint<T>) -> InvariantValue<C<T>> {
    polarizations(tuple.points())
}

/// Invariants of a finite matrix group through the Noether map
/// `p -> (g p)_{g in G}` followed by the polarized invariants of `S_|G|`.
pub fn noether_invariants<T: Real>(group: &MatrixGroup<T>, p: &[T]) -> Result<InvariantValue<T>> {
    if p.len() != group.dim() {
        return Err(Error::ShapeMismatch(format!(
            "point has {} coordinates, group acts on R^{}",
            p.len(),
            group.dim()
        )));
    }
    let orbit: Vec<Vec<T>> = (0..group.order()).map(|g| group.apply(g, p)).collect();
    Ok(polarizations(&orbit))
}

/// A point of the representation space, in the shape each kind expects.
#[derive(Clone, Copy, Debug)]
pub enum SigmaInput<'a, T> {
    /// A single complex number (cyclic kind).
    Scalar(C<T>),
    /// An ordered `Q`-tuple of complex numbers (symmetric kind).
    Roots(&'a [C<T>]),
    Tuple(&'a AQPoint<T>),
    /// A real vector (matrix group kind).
    Real(&'a [T]),
}

/// Evaluates the orbit map of `spec` at `point`.
pub fn evaluate_sigma<T: Real>(spec: &RepresentationSpec<T>, point: SigmaInput<'_, T>) -> Result<InvariantValue<C<T>>> {
    let degrees = spec.degrees().to_vec();
    let values = match (spec.kind(), point) {
        (RepresentationKind::Cyclic(d), SigmaInput::Scalar(z)) => vec![power_map(z, *d)],
        (RepresentationKind::Cyclic(d), SigmaInput::Roots(z)) if z.len() == 1 => {
            vec![power_map(z[0], *d)]
        }
        (RepresentationKind::Symmetric(q), SigmaInput::Roots(z)) if z.len() == *q => elementary_symmetric(z),
        (RepresentationKind::Symmetric(q), SigmaInput::Tuple(t)) if t.q() == *q && t.dim() == 1 => {
            elementary_symmetric(&t.column(0))
        }
        (RepresentationKind::QTuple { q, n }, SigmaInput::Tuple(t)) if t.q() == *q && t.dim() == *n => {
            polarized_invariants(t).values
        }
        (RepresentationKind::FiniteMatrixGroup(g), SigmaInput::Real(p)) => noether_invariants(g, p)?
            .values
            .into_iter()
            .map(|v| C::new(v, T::zero()))
            .collect(),
        (kind, point) => {
            return Err(Error::ShapeMismatch(format!(
                "{point:?} is not a point for {}",
                kind_name(kind)
            )))
        }
    };
    Ok(InvariantValue { values, degrees })
}

pub(crate) fn kind_name<T: Real>(kind: &RepresentationKind<T>) -> String {
    match kind {
        RepresentationKind::Cyclic(d) => format!("cyclic({d})"),
        RepresentationKind::Symmetric(q) => format!("symmetric({q})"),
        RepresentationKind::QTuple { q, n } => format!("qtuple({q},{n})"),
        RepresentationKind::FiniteMatrixGroup(g) => format!("matrix group of order {}", g.order()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C<f64> {
        C::new(re, im)
    }

    #[test]
    fn power_map_examples() {
        assert_eq!(power_map(c(0.0, 1.0), 2), c(-1.0, 0.0));
        assert_eq!(power_map(c(0.0, 0.0), 7), c(0.0, 0.0));
        assert_eq!(power_map(c(1.0, 1.0), 2), c(0.0, 2.0));
    }

    #[test]
    fn elementary_symmetric_examples() {
        assert_eq!(elementary_symmetric(&[1i64, 2, 3]), vec![6, 11, 6]);
        let x = c(0.3, -1.7);
        let e = elementary_symmetric(&[x, -x]);
        assert_eq!(e[0], c(0.0, 0.0));
        assert!((e[1] + x * x).norm() < 1e-15);
    }

    #[test]
    fn polarization_two_term_sum() {
        // u = (1, 2), v = (3, 4) as columns of two points
        let pts = vec![vec![1i64, 3], vec![2, 4]];
        assert_eq!(polarization(&pts, &[0, 1]), 10);
        assert_eq!(polarization(&pts, &[0, 0]), 2 * 2);
        assert_eq!(polarization(&pts, &[0]), 3);
        assert_eq!(polarization(&pts, &[0, 0, 0]), 0);
    }

    #[test]
    fn generator_order() {
        assert_eq!(
            polarization_generators(2, 2),
            vec![vec![0], vec![1], vec![0, 0], vec![0, 1], vec![1, 1]]
        );
        assert_eq!(polarization_generators(3, 1).len(), 3);
    }

    #[test]
    fn noether_sign_group() {
        let g = MatrixGroup::new(1, vec![vec![1.0], vec![-1.0]]).unwrap();
        let v = noether_invariants(&g, &[3.0]).unwrap();
        assert_eq!(v.degrees, vec![1, 2]);
        assert_eq!(v.values[0], 0.0);
        // distinct-index sum: 3 * (-3) + (-3) * 3
        assert_eq!(v.values[1], -18.0);
        assert_eq!(noether_invariants(&g, &[-3.0]).unwrap(), v);
    }

    #[test]
    fn evaluate_sigma_dispatch() {
        let cyc = RepresentationSpec::cyclic(3).unwrap();
        assert_eq!(
            evaluate_sigma(&cyc, SigmaInput::Scalar(c(2.0, 0.0))).unwrap().values,
            vec![c(8.0, 0.0)]
        );
        let sym = RepresentationSpec::symmetric(2).unwrap();
        let v = evaluate_sigma(&sym, SigmaInput::Roots(&[c(1.0, 0.0), c(-1.0, 0.0)])).unwrap();
        assert_eq!(v.values, vec![c(0.0, 0.0), c(-1.0, 0.0)]);
        assert!(matches!(
            evaluate_sigma(&sym, SigmaInput::Roots(&[c(1.0, 0.0)])),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn qtuple_matches_elementary_path_for_n1() {
        let spec = RepresentationSpec::qtuple(2, 1).unwrap();
        let t = AQPoint::from_scalars(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let v = evaluate_sigma(&spec, SigmaInput::Tuple(&t)).unwrap();
        let e = elementary_symmetric(&[c(0.0, 0.0), c(1.0, 0.0)]);
        // sigma_k(u,..,u) = k! e_k
        assert_eq!(v.values[0], e[0]);
        assert_eq!(v.values[1], e[1] * 2.0);
    }
}
