//! Locating the critical exponent of a lifting problem from the behaviour of
//! `||lift'||_{L^p}` under grid refinement.

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{Oracle, SampledCurve};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::lifting::polyroots::polynomial_roots;
use crate::lifting::{continuous_radical, continuous_roots, LiftConfig, LiftedCurve};
use crate::scalar::{Real, C};

use super::norms::{cell_magnitudes, lp_power_sum, weak_lp_quasinorm_regular};

/// The curves whose lifts are scanned.
#[derive(Clone, Copy)]
pub enum ScanFamily<'a, T> {
    /// `d`-th roots of the scalar curve `g`.
    Radical { d: usize, g: Oracle<'a, T> },
    /// Roots of the monic polynomial with elementary symmetric values `a`.
    Roots { a: Oracle<'a, T> },
}

impl<T: Real> ScanFamily<'_, T> {
    fn oracle(&self) -> Oracle<'_, T> {
        match self {
            Self::Radical { g, .. } => *g,
            Self::Roots { a } => *a,
        }
    }

    /// Maximal invariant degree.
    pub fn degree(&self, probe: T) -> usize {
        match self {
            Self::Radical { d, .. } => *d,
            Self::Roots { a } => a(probe).len(),
        }
    }

    /// Magnitude that vanishes where the lift is singular: `|g|` or the
    /// modulus of the discriminant.
    fn singular_measure(&self, t: T) -> T {
        match self {
            Self::Radical { g, .. } => g(t)[0].norm(),
            Self::Roots { a } => {
                let (r, _) = polynomial_roots(&a(t));
                let mut disc = T::one();
                for i in 0..r.len() {
                    for j in i + 1..r.len() {
                        disc *= (r[i] - r[j]).norm_sqr();
                    }
                }
                disc
            }
        }
    }
}

/// Knobs of the scan; the defaults reproduce the documented experiment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanOptions<T> {
    pub levels: usize,
    /// Level `l` has about `2^{base_log2 + l}` nodes.
    pub base_log2: usize,
    /// Level `l` reaches spacing `10^{-decades_per_level (l + 1)}` next to
    /// each singularity.
    pub decades_per_level: usize,
    /// Nodes of the uniform grid used to locate singularities.
    pub coarse_nodes: usize,
    /// Relative change between the last two levels below which a norm is
    /// stable.
    pub stable_tol: T,
    /// Relative growth per level at or above which a norm diverges.
    pub diverge_tol: T,
    pub lift: LiftConfig<T>,
}

impl<T: Real> Default for ScanOptions<T> {
    fn default() -> Self {
        Self {
            levels: 6,
            base_log2: 12,
            decades_per_level: 10,
            coarse_nodes: 1025,
            stable_tol: T::lit(0.02),
            diverge_tol: T::lit(0.05),
            lift: LiftConfig::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Stable,
    Diverging,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentScanReport<T> {
    pub d: usize,
    /// `d / (d - 1)`, or infinity for `d = 1`.
    pub critical: T,
    pub p_grid: Vec<T>,
    pub singularities: Vec<T>,
    pub grid_sizes: Vec<usize>,
    /// `values[level][i]` is `||lift'||_{L^{p_i}}` at that level.
    pub values: Vec<Vec<T>>,
    pub verdicts: Vec<Verdict>,
    /// `||lift'||_{L^{d'}}` per level.
    pub lp_at_critical: Vec<T>,
    /// Weak `L^{d'}` quasinorm per level.
    pub weak_at_critical: Vec<T>,
    pub p_star: T,
    /// `p_star` sits at an end of the scanned range.
    pub at_boundary: bool,
}

/// `steps` equispaced exponents from `p_min` to `p_max`.
pub fn p_grid<T: Real>(p_min: T, p_max: T, steps: usize) -> Vec<T> {
    if steps < 2 {
        return vec![p_min];
    }
    let last = T::lit((steps - 1) as f64);
    (0..steps)
        .map(|i| p_min + (p_max - p_min) * T::lit(i as f64) / last)
        .collect()
}

/// Singular points of `family` on `[a, b]`: coarse nodes where the measure
/// vanishes, plus golden-section minima of small local minima.
pub fn locate_singularities<T: Real>(family: &ScanFamily<'_, T>, a: T, b: T, coarse_nodes: usize) -> Result<Vec<T>> {
    let grid = Grid::uniform(a, b, coarse_nodes.max(3))?;
    let t = grid.nodes();
    let m: Vec<T> = t.par_iter().map(|&x| family.singular_measure(x)).collect();
    let scale = m.iter().copied().fold(T::zero(), T::max);
    if scale == T::zero() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for i in 0..t.len() {
        let left = if i > 0 { m[i - 1] } else { T::infinity() };
        let right = if i + 1 < t.len() { m[i + 1] } else { T::infinity() };
        if !(m[i] <= left && m[i] <= right) || m[i] > T::lit(1e-3) * scale {
            continue;
        }
        if m[i] == T::zero() {
            out.push(t[i]);
            continue;
        }
        let lo = if i > 0 { t[i - 1] } else { t[i] };
        let hi = if i + 1 < t.len() { t[i + 1] } else { t[i] };
        out.push(golden_min(|x| family.singular_measure(x), lo, hi));
    }
    out.dedup();
    Ok(out)
}

fn golden_min<T: Real>(f: impl Fn(T) -> T, mut lo: T, mut hi: T) -> T {
    let phi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if f1 == T::zero() {
            return x1;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = f(x2);
        }
        if !(hi - lo > T::epsilon() * (lo.abs() + hi.abs())) {
            break;
        }
    }
    if f1 <= f2 {
        x1
    } else {
        x2
    }
}

/// The grid of one scan level.
pub fn level_grid<T: Real>(a: T, b: T, singularities: &[T], level: usize, opts: &ScanOptions<T>) -> Result<Grid<T>> {
    let n = 1usize << (opts.base_log2 + level);
    let h = T::lit(10.0).powi(-((opts.decades_per_level * (level + 1)) as i32));
    Grid::graded(a, b, singularities, n, h)
}

fn lift_level<T: Real>(family: &ScanFamily<'_, T>, grid: Grid<T>, cfg: &LiftConfig<T>) -> Result<LiftedCurve<T>> {
    let oracle = family.oracle();
    let curve = SampledCurve::from_fn(grid, oracle)?;
    match family {
        ScanFamily::Radical { d, .. } => continuous_radical(&curve, *d, Some(oracle), cfg),
        ScanFamily::Roots { .. } => continuous_roots(&curve, Some(oracle), cfg),
    }
}

fn verdict<T: Real>(series: &[T], opts: &ScanOptions<T>) -> Verdict {
    let n = series.len();
    let (prev, last) = (series[n - 2], series[n - 1]);
    if (last - prev).abs() < opts.stable_tol * prev.abs().max(T::min_positive_value()) {
        return Verdict::Stable;
    }
    let growth = T::one() + opts.diverge_tol;
    if series.windows(2).all(|w| w[1] >= growth * w[0]) {
        return Verdict::Diverging;
    }
    Verdict::Inconclusive
}

/// Lifts the family on `levels` graded grids, measures `||lift'||_{L^p}`
/// for every `p` and classifies each exponent.
///
/// `p_star` is the midpoint between the smallest diverging exponent and the
/// largest stable exponent below it.
pub fn critical_exponent_scan<T: Real>(
    family: &ScanFamily<'_, T>,
    interval: (T, T),
    p_values: &[T],
    opts: &ScanOptions<T>,
) -> Result<ExponentScanReport<T>> {
    let (a, b) = interval;
    if opts.levels < 3 {
        return Err(Error::InvalidParameter(format!(
            "a scan needs at least 3 levels, got {}",
            opts.levels
        )));
    }
    if p_values.is_empty() || p_values.iter().any(|p| !(*p >= T::one())) {
        return Err(Error::InvalidParameter("exponents must be >= 1".into()));
    }
    let d = family.degree(a);
    let critical = if d > 1 {
        T::lit(d as f64) / T::lit((d - 1) as f64)
    } else {
        T::infinity()
    };
    let singularities = locate_singularities(family, a, b, opts.coarse_nodes)?;

    let mut values = Vec::with_capacity(opts.levels);
    let mut grid_sizes = Vec::with_capacity(opts.levels);
    let mut lp_at_critical = Vec::with_capacity(opts.levels);
    let mut weak_at_critical = Vec::with_capacity(opts.levels);
    for level in 0..opts.levels {
        let grid = level_grid(a, b, &singularities, level, opts)?;
        let lift = lift_level(family, grid, &opts.lift)?;
        let mags = cell_magnitudes(&lift.curve);
        let widths: Vec<T> = lift.grid().widths().collect();
        let row: Vec<T> = p_values
            .par_iter()
            .map(|&p| lp_power_sum(&mags, widths.iter().copied(), p).powf(T::one() / p))
            .collect();
        if d > 1 {
            let lp = lp_power_sum(&mags, widths.iter().copied(), critical);
            lp_at_critical.push(lp.powf(T::one() / critical));
            weak_at_critical.push(weak_lp_quasinorm_regular(&lift.curve, critical, opts.lift.zero_tol)?.value);
        }
        grid_sizes.push(lift.len());
        values.push(row);
    }

    let verdicts: Vec<Verdict> = (0..p_values.len())
        .map(|i| {
            let series: Vec<T> = values.iter().map(|row| row[i]).collect();
            verdict(&series, opts)
        })
        .collect();
    let first_div = verdicts.iter().position(|v| *v == Verdict::Diverging);
    let (p_star, at_boundary) = match first_div {
        None => (p_values[p_values.len() - 1], true),
        Some(i) => match (0..i).rev().find(|&j| verdicts[j] == Verdict::Stable) {
            None => (p_values[0], true),
            Some(j) => ((p_values[i] + p_values[j]) / T::lit(2.0), false),
        },
    };
    Ok(ExponentScanReport {
        d,
        critical,
        p_grid: p_values.to_vec(),
        singularities,
        grid_sizes,
        values,
        verdicts,
        lp_at_critical,
        weak_at_critical,
        p_star,
        at_boundary,
    })
}

/// Convenience wrapper for `d`-th roots of `g(t) = t` style problems given
/// as plain closures.
pub fn scan_radical<T: Real>(
    d: usize,
    g: &(dyn Fn(T) -> C<T> + Sync),
    interval: (T, T),
    p_values: &[T],
    opts: &ScanOptions<T>,
) -> Result<ExponentScanReport<T>> {
    let oracle = |t: T| vec![g(t)];
    critical_exponent_scan(&ScanFamily::Radical { d, g: &oracle }, interval, p_values, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_grid_endpoints() {
        let g = p_grid(1.0, 4.0, 4);
        assert_eq!(g, vec![1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn locates_simple_zero() {
        let oracle = |t: f64| vec![C::new(t - 0.3, 0.0)];
        let fam = ScanFamily::Radical { d: 2, g: &oracle };
        let s = locate_singularities(&fam, -1.0, 1.0, 101).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s[0] - 0.3).abs() < 1e-12);
    }

    #[test]
    fn small_square_root_scan() {
        let opts = ScanOptions {
            levels: 4,
            base_log2: 10,
            ..ScanOptions::default()
        };
        let ps = p_grid(1.0, 4.0, 31);
        let g = |t: f64| C::new(t, 0.0);
        let r = scan_radical(2, &g, (-1.0, 1.0), &ps, &opts).unwrap();
        assert_eq!(r.verdicts[0], Verdict::Stable);
        assert_eq!(*r.verdicts.last().unwrap(), Verdict::Diverging);
        assert!((r.p_star - 2.0).abs() < 0.25, "p* = {}", r.p_star);
    }
}
