//! Continuous root curves of monic polynomials given by their elementary
//! symmetric coefficient curves.

use rayon::prelude::*;

use crate::curve::{Oracle, SampledCurve};
use crate::error::{Error, Result};
use crate::scalar::{cmp_complex, Real, C};

use super::matching::match_scalars;
use super::polyroots::{polynomial_roots, sigma_residual};
use super::{max_of, LiftConfig, LiftOutcome, LiftedCurve};

/// Roots at one sample; fails when the solver neither converged nor reached
/// the residual tolerance.
pub fn solve_sample<T: Real>(e: &[C<T>], t: T, cfg: &LiftConfig<T>) -> Result<Vec<C<T>>> {
    let (roots, converged) = polynomial_roots(e);
    let residual = sigma_residual(&roots, e);
    let scale = max_of(e.iter().map(|z| z.norm()));
    if !(residual.is_finite()) || (!converged && residual > cfg.tol * (T::one() + scale)) {
        return Err(Error::RootSolveFailure {
            t: t.as_f64(),
            residual: residual.as_f64(),
        });
    }
    Ok(roots)
}

struct Chain<'o, T> {
    q: usize,
    cfg: LiftConfig<T>,
    oracle: Option<Oracle<'o, T>>,
    t: Vec<T>,
    roots: Vec<Vec<C<T>>>,
    coeffs: Vec<Vec<C<T>>>,
    level: usize,
    unresolved: usize,
}

impl<T: Real> Chain<'_, T> {
    fn budget(&self, h: T) -> T {
        (self.cfg.budget_factor * h).powf(T::lit(2.0) / T::lit(self.q as f64))
    }

    fn step(&mut self, t_b: T, e_b: Vec<C<T>>, roots_b: Vec<C<T>>, depth: usize) -> Result<()> {
        let n = self.t.len();
        let t_a = self.t[n - 1];
        let ordered = if self.q == 1 {
            roots_b
        } else {
            let (assign, cost) = match_scalars(&self.roots[n - 1], &roots_b);
            if cost > self.budget(t_b - t_a) {
                if let Some(oracle) = self.oracle {
                    let mid = (t_a + t_b) / T::lit(2.0);
                    if depth >= self.cfg.max_depth || !(mid > t_a && mid < t_b) {
                        return Err(Error::RefinementBudgetExhausted { t: t_a.as_f64(), depth });
                    }
                    let e_m = oracle(mid);
                    let r_m = solve_sample(&e_m, mid, &self.cfg)?;
                    self.step(mid, e_m, r_m, depth + 1)?;
                    return self.step(t_b, e_b, roots_b, depth + 1);
                }
                self.unresolved += 1;
            }
            assign.iter().map(|&j| roots_b[j]).collect()
        };
        self.t.push(t_b);
        self.roots.push(ordered);
        self.coeffs.push(e_b);
        self.level = self.level.max(depth);
        Ok(())
    }

    fn finish(self, failure: Option<Error>) -> LiftOutcome<T> {
        let residual = max_of(self.roots.iter().zip(&self.coeffs).map(|(r, e)| sigma_residual(r, e)));
        let mut nodes = self.t;
        let mut roots = self.roots;
        let mut coeffs = self.coeffs;
        if nodes.len() == 1 {
            nodes.push(nodes[0] + T::one());
            roots.push(roots[0].clone());
            coeffs.push(coeffs[0].clone());
        }
        let q = self.q;
        LiftOutcome {
            lift: LiftedCurve {
                curve: SampledCurve::new(nodes.clone(), roots).expect("chain nodes increase"),
                invariant: SampledCurve::new(nodes, coeffs).expect("chain nodes increase"),
                branches: q,
                branch_dim: 1,
                residual,
                refinement_level: self.level,
                unresolved_cells: self.unresolved,
            },
            failure,
        }
    }
}

/// Runs the root chain and keeps the partial lift when refinement fails.
pub fn roots_run<T: Real>(
    a: &SampledCurve<T>,
    oracle: Option<Oracle<'_, T>>,
    cfg: &LiftConfig<T>,
) -> Result<LiftOutcome<T>> {
    let q = a.dim();
    let nodes = a.nodes();
    let solved: Vec<Vec<C<T>>> = nodes
        .par_iter()
        .zip(a.values().par_iter())
        .map(|(&t, e)| solve_sample(e, t, cfg))
        .collect::<Result<_>>()?;
    let mut first = solved[0].clone();
    first.sort_by(cmp_complex);
    let mut chain = Chain {
        q,
        cfg: *cfg,
        oracle,
        t: vec![nodes[0]],
        roots: vec![first],
        coeffs: vec![a.value(0).to_vec()],
        level: 0,
        unresolved: 0,
    };
    for (i, roots) in solved.into_iter().enumerate().skip(1) {
        if let Err(e) = chain.step(nodes[i], a.value(i).to_vec(), roots, 0) {
            return Ok(chain.finish(Some(e)));
        }
    }
    Ok(chain.finish(None))
}

/// `Q` continuous branches `lambda` with `e(lambda(t_i)) = a(t_i)`, where
/// the components of `a` are read as `(e_1, ..., e_Q)`.
///
/// Consecutive root sets are paired by optimal assignment; a step whose
/// matched cost exceeds `(c h)^{2/Q}` is bisected with `oracle`.
pub fn continuous_roots<T: Real>(
    a: &SampledCurve<T>,
    oracle: Option<Oracle<'_, T>>,
    cfg: &LiftConfig<T>,
) -> Result<LiftedCurve<T>> {
    roots_run(a, oracle, cfg)?.into_result()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;

    fn re(x: f64) -> C<f64> {
        C::new(x, 0.0)
    }

    #[test]
    fn crossing_roots_stay_straight() {
        let oracle = |t: f64| vec![re(0.0), re(-t * t)];
        let a = SampledCurve::from_fn(Grid::uniform(-1.0, 1.0, 101).unwrap(), oracle).unwrap();
        let lift = continuous_roots(&a, Some(&oracle), &LiftConfig::default()).unwrap();
        assert!(lift.residual <= 1e-9);
        let b0 = lift.branch(0);
        let sign = if b0.value(0)[0].re < 0.0 { 1.0 } else { -1.0 };
        for (t, v) in b0.nodes().iter().zip(b0.values()) {
            assert!((v[0] - re(sign * t)).norm() < 1e-9, "t = {t}");
        }
    }

    #[test]
    fn square_root_magnitudes() {
        let oracle = |t: f64| vec![re(0.0), re(t)];
        let a = SampledCurve::from_fn(Grid::uniform(-1.0, 1.0, 101).unwrap(), oracle).unwrap();
        let lift = continuous_roots(&a, Some(&oracle), &LiftConfig::default()).unwrap();
        for i in 0..lift.len() {
            let t = lift.nodes()[i];
            for b in 0..2 {
                assert!((lift.branch_value(i, b)[0].norm() - t.abs().sqrt()).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn cube_roots_magnitudes() {
        let oracle = |t: f64| vec![re(0.0), re(0.0), re(t)];
        let a = SampledCurve::from_fn(Grid::uniform(-1.0, 1.0, 201).unwrap(), oracle).unwrap();
        let lift = continuous_roots(&a, Some(&oracle), &LiftConfig::default()).unwrap();
        assert!(lift.residual <= 1e-9);
        for i in 0..lift.len() {
            let t = lift.nodes()[i];
            for b in 0..3 {
                assert!((lift.branch_value(i, b)[0].norm() - t.abs().cbrt()).abs() < 1e-8);
            }
        }
    }
}
