//! Prepared intervals around the nodes where a curve does not vanish, and a
//! subcollection covering those nodes with overlap at most two.
//!
//! `b̂` is interpolated linearly between nodes, so
//! `phi_±(s) = L |s - t1| + ||b̂'||_{L¹ between t1 and s}` is piecewise
//! linear and increasing in `|s - t1|` and can be inverted exactly.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::reduction::{dominant_index, RadicalSelection};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Minus,
    Plus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalKind {
    /// Each side contributes half the budget.
    First,
    /// One side reached the end of the domain; the other absorbs the rest.
    /// If both reach it, `J` is the whole domain and the identity becomes an
    /// inequality.
    Second,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PreparedInterval<T> {
    pub t1: T,
    pub index: usize,
    pub ell: usize,
    pub s_minus: T,
    pub s_plus: T,
    pub kind: IntervalKind,
    /// `D`
    pub budget: T,
    /// `L`
    pub slope: T,
    /// `D |b̂_ell(t1)|`
    pub target: T,
}

impl<T: Real> PreparedInterval<T> {
    pub fn length(&self) -> T {
        self.s_plus - self.s_minus
    }

    /// Closed containment, used for node coverage.
    pub fn contains(&self, t: T) -> bool {
        self.s_minus <= t && t <= self.s_plus
    }
}

/// `sum_j |Δ b̂_j|` per cell.
fn variation<T: Real>(sel: &RadicalSelection<T>) -> Vec<T> {
    sel.cell_variation()
}

/// `phi_±(s)` for the node `t1 = nodes[i1]`.
pub fn phi<T: Real>(sel: &RadicalSelection<T>, i1: usize, slope: T, s: T, side: Side) -> Result<T> {
    phi_with(sel.nodes(), &variation(sel), i1, slope, s, side)
}

fn phi_with<T: Real>(nodes: &[T], var: &[T], i1: usize, slope: T, s: T, side: Side) -> Result<T> {
    let t1 = nodes[i1];
    let inside = match side {
        Side::Plus => s >= t1 && s <= nodes[nodes.len() - 1],
        Side::Minus => s <= t1 && s >= nodes[0],
    };
    if !inside || i1 >= nodes.len() {
        return Err(Error::OutOfRange { s: s.as_f64() });
    }
    let mut acc = slope * (s - t1).abs();
    match side {
        Side::Plus => {
            let mut c = i1;
            while c + 1 < nodes.len() && nodes[c + 1] <= s {
                acc += var[c];
                c += 1;
            }
            if c + 1 < nodes.len() && s > nodes[c] {
                acc += var[c] * (s - nodes[c]) / (nodes[c + 1] - nodes[c]);
            }
        }
        Side::Minus => {
            let mut c = i1;
            while c > 0 && nodes[c - 1] >= s {
                acc += var[c - 1];
                c -= 1;
            }
            if c > 0 && s < nodes[c] {
                acc += var[c - 1] * (nodes[c] - s) / (nodes[c] - nodes[c - 1]);
            }
        }
    }
    Ok(acc)
}

/// Walks away from `t1` until `phi` reaches `level`; returns the point and
/// the value reached (below `level` only at the end of the domain).
fn invert<T: Real>(nodes: &[T], var: &[T], i1: usize, slope: T, level: T, side: Side) -> (T, T) {
    let mut acc = T::zero();
    let mut c = i1;
    loop {
        let next = match side {
            Side::Plus if c + 1 < nodes.len() => c + 1,
            Side::Minus if c > 0 => c - 1,
            _ => return (nodes[c], acc),
        };
        let h = (nodes[next] - nodes[c]).abs();
        let dv = var[c.min(next)];
        let step = slope * h + dv;
        if acc + step >= level && step > T::zero() {
            let frac = ((level - acc) / step).min(T::one()).max(T::zero());
            let s = nodes[c] + (nodes[next] - nodes[c]) * frac;
            return (s, level);
        }
        acc += step;
        c = next;
    }
}

/// The interval `J(t1)` with `phi_-(s_-) + phi_+(s_+) = D |b̂_ell(t1)|`,
/// split evenly between the sides when the domain allows it.
pub fn build_prepared_interval<T: Real>(
    sel: &RadicalSelection<T>,
    i1: usize,
    ell: usize,
    slope: T,
    budget: T,
) -> Result<PreparedInterval<T>> {
    build_with(sel.nodes(), &variation(sel), sel, i1, ell, slope, budget)
}

fn build_with<T: Real>(
    nodes: &[T],
    var: &[T],
    sel: &RadicalSelection<T>,
    i1: usize,
    ell: usize,
    slope: T,
    budget: T,
) -> Result<PreparedInterval<T>> {
    if !(slope >= T::zero() && budget > T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "need L >= 0 and D > 0, got L = {slope}, D = {budget}"
        )));
    }
    let size = sel.hat(i1, ell).norm();
    if size == T::zero() {
        return Err(Error::DominantVanishes { t: nodes[i1].as_f64() });
    }
    let target = budget * size;
    let half = target / T::lit(2.0);
    let (mut s_plus, got_plus) = invert(nodes, var, i1, slope, half, Side::Plus);
    let (mut s_minus, got_minus) = invert(nodes, var, i1, slope, half, Side::Minus);
    let mut kind = IntervalKind::First;
    if got_plus < half {
        kind = IntervalKind::Second;
        s_minus = invert(nodes, var, i1, slope, target - got_plus, Side::Minus).0;
    } else if got_minus < half {
        kind = IntervalKind::Second;
        s_plus = invert(nodes, var, i1, slope, target - got_minus, Side::Plus).0;
    }
    Ok(PreparedInterval {
        t1: nodes[i1],
        index: i1,
        ell,
        s_minus,
        s_plus,
        kind,
        budget,
        slope,
        target,
    })
}

/// `|phi_-(s_-) + phi_+(s_+) - D |b̂_ell(t1)||`, evaluated afresh.
pub fn identity_defect<T: Real>(sel: &RadicalSelection<T>, j: &PreparedInterval<T>) -> Result<T> {
    let lhs = phi(sel, j.index, j.slope, j.s_minus, Side::Minus)? + phi(sel, j.index, j.slope, j.s_plus, Side::Plus)?;
    Ok((lhs - j.target).abs())
}

/// Maximal runs of nodes where `b` does not vanish, as inclusive ranges.
pub fn nonzero_runs<T: Real>(sel: &RadicalSelection<T>) -> Vec<(usize, usize)> {
    let nonzero: Vec<bool> = sel
        .base
        .values()
        .iter()
        .map(|v| v.iter().any(|z| z.norm() > T::zero()))
        .collect();
    let mut runs = Vec::new();
    let mut i = 0;
    while i < nonzero.len() {
        if nonzero[i] {
            let start = i;
            while i + 1 < nonzero.len() && nonzero[i + 1] {
                i += 1;
            }
            runs.push((start, i));
        }
        i += 1;
    }
    runs
}

/// Selected intervals and the measured cover properties.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cover<T> {
    pub intervals: Vec<PreparedInterval<T>>,
    /// Number of prepared intervals built, one per node of `I'`.
    pub built: usize,
    /// Largest number of selected open intervals sharing a point.
    pub max_overlap: usize,
    pub total_length: T,
    /// `|I'|`: each run extends to the neighbouring zero node or domain end.
    pub measure: T,
}

/// Builds a prepared interval at every node of `I' = {b != 0}` and sweeps
/// each run of `I'` from the left, always taking the interval through the
/// first uncovered node that reaches furthest right.
///
/// Coverage of the nodes, overlap at most two and `sum |J| <= 2 |I'|` are
/// checked after selection.
pub fn select_cover<T: Real>(sel: &RadicalSelection<T>, slope: T, budget: T) -> Result<Cover<T>> {
    let runs = nonzero_runs(sel);
    if runs.is_empty() {
        return Err(Error::InvalidParameter("the curve vanishes at every node".into()));
    }
    let nodes = sel.nodes();
    let var = variation(sel);
    let last = nodes.len() - 1;
    let mut built = 0;
    let mut selected: Vec<PreparedInterval<T>> = Vec::new();
    let mut measure = T::zero();
    for &(a, b) in &runs {
        let left = if a > 0 { nodes[a - 1] } else { nodes[0] };
        let right = if b < last { nodes[b + 1] } else { nodes[last] };
        measure += right - left;
        let family = (a..=b)
            .into_par_iter()
            .map(|i| {
                let ell = dominant_index(sel, i)?;
                build_with(nodes, &var, sel, i, ell, slope, budget)
            })
            .collect::<Result<Vec<_>>>()?;
        built += family.len();
        let mut next = a;
        while next <= b {
            let t = nodes[next];
            let best = family
                .iter()
                .filter(|j| j.contains(t))
                .max_by(|x, y| x.s_plus.cmp_total(&y.s_plus).then(y.index.cmp(&x.index)))
                .expect("the interval at a node contains it");
            selected.push(*best);
            while next <= b && nodes[next] <= best.s_plus {
                next += 1;
            }
        }
    }

    for i in runs.iter().flat_map(|&(a, b)| a..=b) {
        if !selected.iter().any(|j| j.contains(nodes[i])) {
            return Err(Error::CoverPropertyViolation {
                property: "coverage".into(),
                t: nodes[i].as_f64(),
            });
        }
    }
    let (max_overlap, at) = max_overlap(&selected);
    if max_overlap > 2 {
        return Err(Error::CoverPropertyViolation {
            property: format!("overlap {max_overlap} > 2"),
            t: at.as_f64(),
        });
    }
    let total_length: T = selected.iter().map(|j| j.length()).sum();
    if total_length > T::lit(2.0) * measure {
        return Err(Error::CoverPropertyViolation {
            property: format!("total length {total_length} > 2 |I'| = {}", T::lit(2.0) * measure),
            t: nodes[0].as_f64(),
        });
    }
    Ok(Cover {
        intervals: selected,
        built,
        max_overlap,
        total_length,
        measure,
    })
}

/// Largest number of open intervals sharing a point, and such a point.
pub fn max_overlap<T: Real>(intervals: &[PreparedInterval<T>]) -> (usize, T) {
    let mut ends: Vec<T> = intervals.iter().flat_map(|j| [j.s_minus, j.s_plus]).collect();
    ends.sort_by(|x, y| x.cmp_total(y));
    ends.dedup();
    let mut best = (0, T::zero());
    for w in ends.windows(2) {
        let mid = (w[0] + w[1]) / T::lit(2.0);
        let count = intervals.iter().filter(|j| j.s_minus < mid && mid < j.s_plus).count();
        if count > best.0 {
            best = (count, mid);
        }
    }
    best
}
