//! The floating-point scalar abstraction shared by every module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, NumAssign};

/// Real scalar used for grid nodes, magnitudes and norms.
///
/// Implemented for `f32` and `f64`. Tolerances throughout the crate are
/// tuned for `f64`; `f32` works for coarse experiments only.
pub trait Real: Float + FloatConst + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static {
    /// Converts an `f64` literal into the scalar type.
    fn lit(x: f64) -> Self;

    /// Lossy conversion used for reports and error payloads.
    fn as_f64(self) -> f64;

    /// Total ordering helper; NaN sorts as equal.
    fn cmp_total(&self, other: &Self) -> std::cmp::Ordering {
        self.partial_cmp(other).unwrap_or(std::cmp::Ordering::Equal)
    }
}

impl Real for f64 {
    #[inline]
    fn lit(x: f64) -> Self {
        x
    }
    #[inline]
    fn as_f64(self) -> f64 {
        self
    }
}

impl Real for f32 {
    #[inline]
    fn lit(x: f64) -> Self {
        x as f32
    }
    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }
}

pub type C<T> = num_complex::Complex<T>;

/// Euclidean norm of a complex vector.
pub fn vec_norm<T: Real>(v: &[C<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// Euclidean distance between two complex vectors of equal length.
pub fn vec_dist<T: Real>(a: &[C<T>], b: &[C<T>]) -> T {
    vec_dist_sqr(a, b).sqrt()
}

pub fn vec_dist_sqr<T: Real>(a: &[C<T>], b: &[C<T>]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (*x - *y).norm_sqr()).sum()
}

/// Lexicographic order on complex numbers by `(re, im)`.
pub fn cmp_complex<T: Real>(a: &C<T>, b: &C<T>) -> std::cmp::Ordering {
    a.re.cmp_total(&b.re).then(a.im.cmp_total(&b.im))
}

/// Lexicographic order on complex vectors, coordinate by coordinate.
pub fn cmp_complex_vec<T: Real>(a: &[C<T>], b: &[C<T>]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = cmp_complex(x, y);
        if o != std::cmp::Ordering::Equal {
            return o;
        }
    }
    a.len().cmp(&b.len())
}
