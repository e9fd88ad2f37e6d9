use crate::error::{Error, Result};
use crate::scalar::Real;

/// A finite group of real orthogonal `dim x dim` matrices (row-major).
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixGroup<T> {
    dim: usize,
    elements: Vec<Vec<T>>,
}

impl<T: Real> MatrixGroup<T> {
    /// Checks orthogonality, presence of the identity and closure under
    /// products, each to `1e-9`.
    pub fn new(dim: usize, elements: Vec<Vec<T>>) -> Result<Self> {
        if dim == 0 || elements.is_empty() {
            return Err(Error::NotAGroup("empty group".into()));
        }
        let tol = T::lit(1e-9);
        for (k, m) in elements.iter().enumerate() {
            if m.len() != dim * dim {
                return Err(Error::NotAGroup(format!("element {k} is not {dim}x{dim}")));
            }
            let mmt = mul_transpose(dim, m, m);
            if !close(&mmt, &identity(dim), tol) {
                return Err(Error::NotAGroup(format!("element {k} is not orthogonal")));
            }
        }
        let group = Self { dim, elements };
        if group.find(&identity(dim), tol).is_none() {
            return Err(Error::NotAGroup("identity missing".into()));
        }
        for i in 0..group.order() {
            for j in 0..i {
                if close(&group.elements[i], &group.elements[j], tol) {
                    return Err(Error::NotAGroup(format!("elements {j} and {i} coincide")));
                }
            }
        }
        for a in &group.elements {
            for b in &group.elements {
                let ab = mul(dim, a, b);
                if group.find(&ab, tol).is_none() {
                    return Err(Error::NotAGroup("not closed under products".into()));
                }
            }
        }
        Ok(group)
    }

    /// Cyclic group generated by the rotation through `2 pi / m` in the plane.
    pub fn planar_rotations(m: usize) -> Result<Self> {
        let elements = (0..m)
            .map(|k| {
                let th = T::lit(2.0 * std::f64::consts::PI * k as f64 / m as f64);
                let (s, c) = th.sin_cos();
                vec![c, -s, s, c]
            })
            .collect();
        Self::new(2, elements)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Vec<T>] {
        &self.elements
    }

    pub fn apply(&self, g: usize, p: &[T]) -> Vec<T> {
        let m = &self.elements[g];
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| m[r * self.dim + c] * p[c]).sum())
            .collect()
    }

    fn find(&self, m: &[T], tol: T) -> Option<usize> {
        self.elements.iter().position(|e| close(e, m, tol))
    }
}

fn identity<T: Real>(dim: usize) -> Vec<T> {
    (0..dim * dim)
        .map(|k| if k / dim == k % dim { T::one() } else { T::zero() })
        .collect()
}

fn mul<T: Real>(dim: usize, a: &[T], b: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); dim * dim];
    for r in 0..dim {
        for c in 0..dim {
            out[r * dim + c] = (0..dim).map(|k| a[r * dim + k] * b[k * dim + c]).sum();
        }
    }
    out
}

fn mul_transpose<T: Real>(dim: usize, a: &[T], b: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); dim * dim];
    for r in 0..dim {
        for c in 0..dim {
            out[r * dim + c] = (0..dim).map(|k| a[r * dim + k] * b[c * dim + k]).sum();
        }
    }
    out
}

fn close<T: Real>(a: &[T], b: &[T], tol: T) -> bool {
    a.iter().zip(b).all(|(x, y)| (*x - *y).abs() <= tol)
}

/// Which representation the orbit map belongs to.
#[derive(Clone, Debug, PartialEq)]
pub enum RepresentationKind<T> {
    /// `z -> z^d` on `C`.
    Cyclic(usize),
    /// `S_Q` permuting the roots of a monic degree-`Q` polynomial.
    Symmetric(usize),
    /// Unordered `Q`-tuples of points in `C^n`.
    QTuple {
        q: usize,
        n: usize,
    },
    FiniteMatrixGroup(MatrixGroup<T>),
}

/// A representation together with the degrees of its basic invariants.
#[derive(Clone, Debug, PartialEq)]
pub struct RepresentationSpec<T> {
    kind: RepresentationKind<T>,
    degrees: Vec<usize>,
}

impl<T: Real> RepresentationSpec<T> {
    pub fn cyclic(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("d must be >= 1".into()));
        }
        Ok(Self {
            kind: RepresentationKind::Cyclic(d),
            degrees: vec![d],
        })
    }

    pub fn symmetric(q: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidParameter("Q must be >= 1".into()));
        }
        Ok(Self {
            kind: RepresentationKind::Symmetric(q),
            degrees: (1..=q).collect(),
        })
    }

    pub fn qtuple(q: usize, n: usize) -> Result<Self> {
        if q == 0 || n == 0 {
            return Err(Error::InvalidParameter("Q and n must be >= 1".into()));
        }
        Ok(Self {
            kind: RepresentationKind::QTuple { q, n },
            degrees: crate::invariants::polarization_degrees(q, n),
        })
    }

    pub fn matrix_group(group: MatrixGroup<T>) -> Self {
        let degrees = crate::invariants::polarization_degrees(group.order(), group.dim());
        Self {
            kind: RepresentationKind::FiniteMatrixGroup(group),
            degrees,
        }
    }

    pub fn kind(&self) -> &RepresentationKind<T> {
        &self.kind
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// `d = max_j d_j`.
    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(1)
    }

    /// `d / (d - 1)`, or `None` when `d = 1` (every exponent is admissible).
    pub fn critical_exponent(&self) -> Option<T> {
        let d = self.max_degree();
        (d > 1).then(|| T::lit(d as f64) / T::lit((d - 1) as f64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees_per_kind() {
        assert_eq!(RepresentationSpec::<f64>::cyclic(3).unwrap().degrees(), &[3]);
        assert_eq!(
            RepresentationSpec::<f64>::symmetric(4).unwrap().degrees(),
            &[1, 2, 3, 4]
        );
        let s = RepresentationSpec::<f64>::symmetric(3).unwrap();
        assert_eq!(s.max_degree(), 3);
        assert_eq!(s.critical_exponent(), Some(1.5));
        assert_eq!(RepresentationSpec::<f64>::cyclic(1).unwrap().critical_exponent(), None);
        // Q = 2, n = 2: degree 1 twice, degree 2 three times
        assert_eq!(
            RepresentationSpec::<f64>::qtuple(2, 2).unwrap().degrees(),
            &[1, 1, 2, 2, 2]
        );
    }

    #[test]
    fn group_validation() {
        assert!(MatrixGroup::<f64>::planar_rotations(4).is_ok());
        let sign = MatrixGroup::new(1, vec![vec![1.0], vec![-1.0]]).unwrap();
        assert_eq!(sign.apply(1, &[3.0]), vec![-3.0]);
        // rotation by 90 degrees alone is not closed
        assert!(matches!(
            MatrixGroup::new(2, vec![vec![1.0, 0.0, 0.0, 1.0], vec![0.0, -1.0, 1.0, 0.0]]),
            Err(Error::NotAGroup(_))
        ));
        assert!(matches!(MatrixGroup::new(1, vec![vec![2.0]]), Err(Error::NotAGroup(_))));
        assert!(matches!(
            MatrixGroup::new(1, vec![vec![-1.0]]),
            Err(Error::NotAGroup(_))
        ));
    }
}
