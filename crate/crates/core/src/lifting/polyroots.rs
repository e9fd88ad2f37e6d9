//! Roots of a monic polynomial given by its elementary symmetric values.
//!
//! `prod (X - lambda_i) = X^Q - e_1 X^{Q-1} + e_2 X^{Q-2} - ...`, solved by
//! simultaneous Aberth-Ehrlich iteration.

use crate::invariants::elementary_symmetric;
use crate::scalar::{Real, C};

const MAX_ITER: usize = 800;

/// Coefficients `c_0 = 1, c_1, ..., c_Q` of `sum c_i X^{Q-i}` with roots
/// whose elementary symmetric values are `e`.
pub fn monic_coefficients<T: Real>(e: &[C<T>]) -> Vec<C<T>> {
    let mut c = Vec::with_capacity(e.len() + 1);
    c.push(C::new(T::one(), T::zero()));
    for (i, ei) in e.iter().enumerate() {
        c.push(if i % 2 == 0 { -*ei } else { *ei });
    }
    c
}

fn horner<T: Real>(c: &[C<T>], z: C<T>) -> (C<T>, C<T>) {
    let mut p = c[0];
    let mut dp = C::new(T::zero(), T::zero());
    for ci in &c[1..] {
        dp = dp * z + p;
        p = p * z + *ci;
    }
    (p, dp)
}

/// Taylor shift: coefficients of `p(X + s)` in the same descending layout.
pub(crate) fn taylor_shift<T: Real>(c: &[C<T>], s: C<T>) -> Vec<C<T>> {
    let mut a = c.to_vec();
    let n = a.len();
    for k in 0..n {
        for j in 1..n - k {
            let prev = a[j - 1];
            a[j] += prev * s;
        }
    }
    a
}

/// Max-norm difference between `elementary_symmetric(roots)` and `e`.
pub fn sigma_residual<T: Real>(roots: &[C<T>], e: &[C<T>]) -> T {
    elementary_symmetric(roots)
        .iter()
        .zip(e)
        .map(|(a, b)| (*a - *b).norm())
        .fold(T::zero(), |m, x| if x > m { x } else { m })
}

/// All `Q` roots (with multiplicity) of the monic polynomial with
/// elementary symmetric values `e`, plus whether the iteration converged.
pub fn polynomial_roots<T: Real>(e: &[C<T>]) -> (Vec<C<T>>, bool) {
    let zero = C::new(T::zero(), T::zero());
    let q = e.len();
    let c = monic_coefficients(e);
    let mut trailing = 0;
    while trailing < q && c[q - trailing] == zero {
        trailing += 1;
    }
    let mut roots = vec![zero; trailing];
    let c = &c[..=q - trailing];
    let r = q - trailing;
    match r {
        0 => return (roots, true),
        1 => {
            roots.push(-c[1]);
            return (roots, true);
        }
        _ => {}
    }

    let rf = T::lit(r as f64);
    let center = -c[1] / rf;
    let shifted = taylor_shift(c, center);
    let mut rho = T::zero();
    for (k, ck) in shifted.iter().enumerate().skip(2) {
        let v = ck.norm().powf(T::one() / T::lit(k as f64));
        if v > rho {
            rho = v;
        }
    }
    if rho == T::zero() {
        roots.extend(std::iter::repeat_n(center, r));
        return (roots, true);
    }
    let tau = T::lit(2.0) * T::PI();
    let mut z: Vec<C<T>> = (0..r)
        .map(|k| {
            let th = tau * T::lit(k as f64) / rf + T::lit(0.4);
            center + C::from_polar(rho, th)
        })
        .collect();

    let eps = T::epsilon() * T::lit(4.0);
    let mut converged = false;
    for _ in 0..MAX_ITER {
        let mut max_rel = T::zero();
        for k in 0..r {
            let (p, dp) = horner(c, z[k]);
            if p == zero {
                continue;
            }
            if dp == zero {
                // nudge off a critical point
                z[k] += C::new(rho * eps.sqrt(), T::zero());
                max_rel = T::one();
                continue;
            }
            let w = p / dp;
            let mut s = zero;
            for j in 0..r {
                if j != k {
                    let diff = z[k] - z[j];
                    if diff != zero {
                        s += diff.inv();
                    }
                }
            }
            let denom = C::new(T::one(), T::zero()) - w * s;
            let corr = if denom == zero { w } else { w / denom };
            if !(corr.re.is_finite() && corr.im.is_finite()) {
                continue;
            }
            z[k] -= corr;
            let scale = z[k].norm().max(rho * eps);
            let rel = corr.norm() / scale;
            if rel > max_rel {
                max_rel = rel;
            }
        }
        if max_rel <= eps {
            converged = true;
            break;
        }
    }
    polish_clusters(&mut z, c, rho);
    roots.extend(z);
    (roots, converged)
}

fn derivative<T: Real>(c: &[C<T>]) -> Vec<C<T>> {
    let deg = c.len() - 1;
    c[..deg]
        .iter()
        .enumerate()
        .map(|(i, ci)| *ci * T::lit((deg - i) as f64))
        .collect()
}

/// Replaces each cluster of `m` nearly coincident roots by the nearby root
/// of `p^{(m-1)}` when that lowers the residual.
///
/// Near a root of multiplicity `m` the iteration stalls at an error of
/// about `eps^{1/m}`, while the root of the `(m-1)`-th derivative is simple
/// and therefore well conditioned.
fn polish_clusters<T: Real>(z: &mut [C<T>], c: &[C<T>], rho: T) {
    let r = z.len();
    let radius = T::lit(1e-5) * (rho + z.iter().map(|v| v.norm()).fold(T::zero(), T::max));
    let mut label: Vec<usize> = (0..r).collect();
    for i in 0..r {
        for j in 0..i {
            if (z[i] - z[j]).norm() < radius {
                let (a, b) = (label[i], label[j]);
                for l in label.iter_mut() {
                    if *l == a {
                        *l = b;
                    }
                }
            }
        }
    }
    let e: Vec<C<T>> = c[1..]
        .iter()
        .enumerate()
        .map(|(i, ci)| if i % 2 == 0 { -*ci } else { *ci })
        .collect();
    for l in 0..r {
        let members: Vec<usize> = (0..r).filter(|&i| label[i] == l).collect();
        let m = members.len();
        if m < 2 {
            continue;
        }
        let mut dc = c.to_vec();
        for _ in 1..m {
            dc = derivative(&dc);
        }
        let mut x = members.iter().fold(C::new(T::zero(), T::zero()), |a, &i| a + z[i]) / T::lit(m as f64);
        for _ in 0..50 {
            let (p, dp) = horner(&dc, x);
            if dp.norm() == T::zero() {
                break;
            }
            let step = p / dp;
            x -= step;
            if step.norm() <= T::epsilon() * x.norm().max(rho) {
                break;
            }
        }
        let mut candidate = z.to_vec();
        for &i in &members {
            candidate[i] = x;
        }
        if sigma_residual(&candidate, &e) < sigma_residual(z, &e) {
            z.copy_from_slice(&candidate);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C<f64> {
        C::new(re, im)
    }

    #[test]
    fn recovers_known_roots() {
        let roots = [c(1.0, 0.0), c(-2.0, 0.5), c(0.3, -1.1), c(4.0, 2.0)];
        let e = elementary_symmetric(&roots);
        let (found, ok) = polynomial_roots(&e);
        assert!(ok);
        assert!(sigma_residual(&found, &e) < 1e-12);
        for r in roots {
            assert!(found.iter().any(|f| (*f - r).norm() < 1e-10));
        }
    }

    #[test]
    fn zero_and_multiple_roots() {
        let e = elementary_symmetric(&[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let (found, _) = polynomial_roots(&e);
        assert!(found.iter().all(|z| z.norm() == 0.0));

        let e = elementary_symmetric(&[c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]);
        let (found, ok) = polynomial_roots(&e);
        assert!(ok);
        assert!(
            sigma_residual(&found, &e) < 1e-14,
            "{found:?} {}",
            sigma_residual(&found, &e)
        );
    }

    #[test]
    fn tiny_scale_cube_roots() {
        // X^3 - 1e-60
        let e = [c(0.0, 0.0), c(0.0, 0.0), c(1e-60, 0.0)];
        let (found, ok) = polynomial_roots(&e);
        assert!(ok);
        for z in found {
            assert!((z.norm() / 1e-20 - 1.0).abs() < 1e-12);
        }
    }
}
