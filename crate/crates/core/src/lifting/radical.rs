//! Continuous `d`-th roots of a scalar curve.

use crate::curve::{Oracle, SampledCurve};
use crate::error::{Error, Result};
use crate::scalar::{Real, C};

use super::{max_of, scalar_values, LiftConfig, LiftOutcome, LiftedCurve};

/// The root of `z^d = g` with argument in `[0, 2 pi / d)`.
pub fn principal_root<T: Real>(g: C<T>, d: usize) -> C<T> {
    if g.norm() == T::zero() {
        return g;
    }
    let mut arg = g.arg();
    if arg < T::zero() {
        arg += T::TAU();
    }
    let df = T::lit(d as f64);
    C::from_polar(g.norm().powf(T::one() / df), arg / df)
}

/// The `d`-th root of `g` closest to `target`.
pub fn nearest_root<T: Real>(g: C<T>, d: usize, target: C<T>) -> C<T> {
    let r0 = principal_root(g, d);
    if d == 1 || r0.norm() == T::zero() {
        return r0;
    }
    let step = T::TAU() / T::lit(d as f64);
    let mut best = r0;
    let mut best_dist = (r0 - target).norm();
    for k in 1..d {
        let c = r0 * C::from_polar(T::one(), step * T::lit(k as f64));
        let dist = (c - target).norm();
        if dist < best_dist {
            best = c;
            best_dist = dist;
        }
    }
    best
}

struct Chain<'o, T> {
    d: usize,
    cfg: LiftConfig<T>,
    oracle: Option<Oracle<'o, T>>,
    t: Vec<T>,
    f: Vec<C<T>>,
    g: Vec<C<T>>,
    level: usize,
    unresolved: usize,
}

impl<T: Real> Chain<'_, T> {
    fn predicted(&self, t_b: T) -> C<T> {
        let n = self.t.len();
        let f_a = self.f[n - 1];
        if self.g[n - 1].norm() > self.cfg.zero_tol || n < 2 {
            return f_a;
        }
        // the roots coincide at a zero: continue the incoming direction
        let (t_a, t_p, f_p) = (self.t[n - 1], self.t[n - 2], self.f[n - 2]);
        f_a + (f_a - f_p) * ((t_b - t_a) / (t_a - t_p))
    }

    fn step(&mut self, t_b: T, g_b: C<T>, depth: usize) -> Result<()> {
        let n = self.t.len();
        let (t_a, f_a, g_a) = (self.t[n - 1], self.f[n - 1], self.g[n - 1]);
        let chosen = nearest_root(g_b, self.d, self.predicted(t_b));
        let zt = self.cfg.zero_tol;
        let spacing = T::lit(2.0) * f_a.norm() * (T::PI() / T::lit(self.d as f64)).sin();
        let ambiguous =
            self.d > 1 && g_a.norm() > zt && g_b.norm() > zt && (chosen - f_a).norm() > self.cfg.ambiguity * spacing;
        if ambiguous {
            if let Some(oracle) = self.oracle {
                let mid = (t_a + t_b) / T::lit(2.0);
                if depth >= self.cfg.max_depth || !(mid > t_a && mid < t_b) {
                    return Err(Error::RefinementBudgetExhausted { t: t_a.as_f64(), depth });
                }
                let g_m = oracle(mid)[0];
                self.step(mid, g_m, depth + 1)?;
                return self.step(t_b, g_b, depth + 1);
            }
            self.unresolved += 1;
        }
        self.t.push(t_b);
        self.f.push(chosen);
        self.g.push(g_b);
        self.level = self.level.max(depth);
        Ok(())
    }

    fn finish(self, failure: Option<Error>) -> LiftOutcome<T> {
        let d = self.d;
        let residual = max_of(
            self.f
                .iter()
                .zip(&self.g)
                .map(|(f, g)| (crate::invariants::power_map(*f, d) - *g).norm()),
        );
        let mut nodes = self.t;
        let mut f = self.f;
        let mut g = self.g;
        if nodes.len() == 1 {
            // a failure in the very first cell still yields a valid curve
            let t1 = nodes[0] + T::one();
            nodes.push(t1);
            f.push(f[0]);
            g.push(g[0]);
        }
        let curve =
            SampledCurve::new(nodes.clone(), f.into_iter().map(|z| vec![z]).collect()).expect("chain nodes increase");
        let invariant =
            SampledCurve::new(nodes, g.into_iter().map(|z| vec![z]).collect()).expect("chain nodes increase");
        LiftOutcome {
            lift: LiftedCurve {
                curve,
                invariant,
                branches: 1,
                branch_dim: 1,
                residual,
                refinement_level: self.level,
                unresolved_cells: self.unresolved,
            },
            failure,
        }
    }
}

/// Runs the radical chain and keeps the partial lift when refinement fails.
pub fn radical_run<T: Real>(
    g: &SampledCurve<T>,
    d: usize,
    oracle: Option<Oracle<'_, T>>,
    cfg: &LiftConfig<T>,
) -> Result<LiftOutcome<T>> {
    if d == 0 {
        return Err(Error::InvalidParameter("radical degree must be >= 1".into()));
    }
    if g.dim() != 1 {
        return Err(Error::ShapeMismatch(format!(
            "radical lift needs a scalar curve, got {} components",
            g.dim()
        )));
    }
    let gs = scalar_values(g);
    let nodes = g.nodes();
    let mut chain = Chain {
        d,
        cfg: *cfg,
        oracle,
        t: vec![nodes[0]],
        f: vec![principal_root(gs[0], d)],
        g: vec![gs[0]],
        level: 0,
        unresolved: 0,
    };
    for i in 1..nodes.len() {
        if let Err(e) = chain.step(nodes[i], gs[i], 0) {
            return Ok(chain.finish(Some(e)));
        }
    }
    Ok(chain.finish(None))
}

/// A continuous curve `f` with `f^d = g` at every node.
///
/// The first node takes the principal root and every later node the root
/// nearest to its predecessor. Ambiguous steps are bisected with `oracle`;
/// without one they are accepted and counted in `unresolved_cells`.
pub fn continuous_radical<T: Real>(
    g: &SampledCurve<T>,
    d: usize,
    oracle: Option<Oracle<'_, T>>,
    cfg: &LiftConfig<T>,
) -> Result<LiftedCurve<T>> {
    radical_run(g, d, oracle, cfg)?.into_result()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;

    fn re(x: f64) -> C<f64> {
        C::new(x, 0.0)
    }

    #[test]
    fn principal_root_branch() {
        assert_eq!(principal_root(re(1.0), 3), re(1.0));
        let r = principal_root(re(-4.0), 2);
        assert!((r - C::new(0.0, 2.0)).norm() < 1e-15);
        let r = principal_root(C::new(0.0, -1.0), 2);
        assert!(r.arg() > 0.0 && r.arg() < std::f64::consts::PI);
    }

    #[test]
    fn square_root_of_square_keeps_one_sign() {
        let grid = Grid::uniform(-1.0, 1.0, 101).unwrap();
        let g = SampledCurve::scalar_from_fn(grid, |t| re(t * t));
        let oracle = |t: f64| vec![re(t * t)];
        let lift = continuous_radical(&g, 2, Some(&oracle), &LiftConfig::default()).unwrap();
        assert!(lift.residual <= 1e-12);
        let sign = lift.branch_value(0, 0)[0].re.signum() * -1.0;
        for (t, v) in lift.nodes().iter().zip(lift.curve.values()) {
            assert!((v[0] - re(sign * t)).norm() < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn square_root_through_simple_zero() {
        let grid = Grid::uniform(-1.0, 1.0, 201).unwrap();
        let g = SampledCurve::scalar_from_fn(grid, re);
        let oracle = |t: f64| vec![re(t)];
        let lift = continuous_radical(&g, 2, Some(&oracle), &LiftConfig::default()).unwrap();
        for (t, v) in lift.nodes().iter().zip(lift.curve.values()) {
            assert!((v[0].norm() - t.abs().sqrt()).abs() < 1e-10);
            if *t < 0.0 {
                assert!(v[0].re.abs() < 1e-12);
            } else {
                assert!(v[0].im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn constant_cube_root_is_principal() {
        let grid = Grid::uniform(0.0, 1.0, 11).unwrap();
        let g = SampledCurve::scalar_from_fn(grid, |_| re(1.0));
        let lift = continuous_radical(&g, 3, None, &LiftConfig::default()).unwrap();
        assert!(lift.curve.values().iter().all(|v| v[0] == re(1.0)));
    }

    #[test]
    fn budget_exhaustion_returns_partial_lift() {
        // a zero strictly inside a cell cannot be resolved by bisection
        let grid = Grid::new(vec![-1.0, -0.3, 0.7, 1.0]).unwrap();
        let oracle = |t: f64| vec![re(t - 0.1 / 3.0)];
        let g = SampledCurve::from_fn(grid, oracle).unwrap();
        let cfg = LiftConfig {
            max_depth: 6,
            ..LiftConfig::default()
        };
        let out = radical_run(&g, 2, Some(&oracle), &cfg).unwrap();
        assert!(matches!(
            out.failure,
            Some(Error::RefinementBudgetExhausted { depth: 6, .. })
        ));
        assert!(out.lift.len() >= 2);
    }
}
