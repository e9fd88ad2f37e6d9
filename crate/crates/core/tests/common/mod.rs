//! Independent reference computations for the integration tests.
//!
//! Nothing here calls into the library's numerics; every routine is the
//! slow, obvious version of what the library does fast.
#![allow(dead_code)]

use std::f64::consts::PI;

use orbit_lift::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Every permutation of `0..n`, by recursion.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// `min_sigma sum_i |a_i - b_sigma(i)|^2` over all bijections.
pub fn brute_force_matching(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
    permutations(a.len())
        .iter()
        .map(|perm| {
            perm.iter()
                .enumerate()
                .map(|(i, &j)| a[i].iter().zip(&b[j]).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>())
                .sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min)
}

/// `(e_1, ..., e_Q)` as sums over all index subsets of each size.
pub fn elementary_by_subsets(points: &[Complex64]) -> Vec<Complex64> {
    let q = points.len();
    let mut e = vec![re(0.0); q];
    for mask in 1u32..(1 << q) {
        let size = mask.count_ones() as usize;
        let prod = (0..q)
            .filter(|i| mask & (1 << i) != 0)
            .fold(re(1.0), |acc, i| acc * points[i]);
        e[size - 1] += prod;
    }
    e
}

/// Composite five point Gauss-Legendre rule on `panels` equal panels.
pub fn gauss_legendre(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let x = [
        0.0,
        0.538_469_310_105_683_1,
        -0.538_469_310_105_683_1,
        0.906_179_845_938_664,
        -0.906_179_845_938_664,
    ];
    let w = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|k| {
            let mid = a + (k as f64 + 0.5) * h;
            x.iter().zip(&w).map(|(xi, wi)| wi * f(mid + 0.5 * h * xi)).sum::<f64>() * 0.5 * h
        })
        .sum()
}

/// `sum_k c_k cos(k t + phase_k)` with complex amplitudes.
#[derive(Clone, Debug)]
pub struct TrigPoly {
    pub terms: Vec<(Complex64, f64, f64)>,
}

impl TrigPoly {
    /// Random trigonometric polynomial of the given order, amplitudes in
    /// the unit disc scaled by `scale`.
    pub fn random(rng: &mut ChaCha8Rng, order: usize, scale: f64, real: bool) -> Self {
        let terms = (0..=order)
            .map(|k| {
                let amp = if real {
                    re(rng.gen_range(-1.0..1.0))
                } else {
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                };
                (amp * scale / (1.0 + k as f64), k as f64, rng.gen_range(0.0..2.0 * PI))
            })
            .collect();
        Self { terms }
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.terms.iter().map(|(c, k, ph)| c * (k * t + ph).cos()).sum()
    }

    pub fn shifted(mut self, c: Complex64) -> Self {
        self.terms.push((c, 0.0, 0.0));
        self
    }
}

/// `(|Omega|^{-1/p} ||f||_{L^p}, |Omega|^{-1/p} ||f||_{p,w})` for the step
/// function with `values` on cells of `widths`.
///
/// The weak quasinorm is the supremum over thresholds just below each
/// value, where the level set is every cell with a value at least as large.
pub fn step_norms(values: &[f64], widths: &[f64], p: f64) -> (f64, f64) {
    let total: f64 = widths.iter().sum();
    let strong = values
        .iter()
        .zip(widths)
        .map(|(v, w)| v.powf(p) * w)
        .sum::<f64>()
        .powf(1.0 / p);
    let weak = values
        .iter()
        .map(|&r| {
            let measure: f64 = values
                .iter()
                .zip(widths)
                .filter(|(v, _)| **v >= r)
                .map(|(_, w)| w)
                .sum();
            r * measure.powf(1.0 / p)
        })
        .fold(0.0, f64::max);
    let scale = total.powf(-1.0 / p);
    (scale * strong, scale * weak)
}

/// Largest number of open intervals `(a, b)` sharing a point, checked at
/// the midpoint of every pair of consecutive distinct endpoints.
pub fn brute_force_overlap(intervals: &[(f64, f64)]) -> usize {
    let mut ends: Vec<f64> = intervals.iter().flat_map(|&(a, b)| [a, b]).collect();
    ends.sort_by(f64::total_cmp);
    ends.dedup();
    ends.windows(2)
        .map(|w| {
            let m = 0.5 * (w[0] + w[1]);
            intervals.iter().filter(|&&(a, b)| a < m && m < b).count()
        })
        .max()
        .unwrap_or(0)
}
