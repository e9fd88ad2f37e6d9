//! Maximal admissible intervals and the inequalities they guarantee.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{Real, C};

use super::{normalized_curve, polygonal_length, RadicalSelection};

/// Relative slack for comparisons that hold with equality in exact
/// arithmetic.
const ROUNDING: f64 = 1e-12;

/// Why the growth of an interval stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopKind {
    /// Adding one more node on a growing side would break the constraint.
    Equality,
    /// The interval is the whole domain and the constraint still holds.
    Boundary,
}

/// An interval `I = [t_lo, t_hi]` around `t0` with
/// `M |I| + ||â'||_{L¹(I)} <= B |â_k(t0)|`.
///
/// `selection` is restricted to `I`; `lo`, `hi` and `t0` index the
/// original grid and `t0 - lo` indexes the restriction.
#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibleData<T> {
    pub selection: RadicalSelection<T>,
    pub lo: usize,
    pub hi: usize,
    pub t0: usize,
    pub k: usize,
    pub b: T,
    pub m: T,
    /// `||â'||_{L¹(I)}`, summed over components.
    pub l1: T,
    pub stop: StopKind,
}

/// The scalar part of [`AdmissibleData`], for reports.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AdmissibleSummary<T> {
    pub t0: T,
    pub t_lo: T,
    pub t_hi: T,
    pub t0_index: usize,
    pub lo: usize,
    pub hi: usize,
    pub k: usize,
    #[serde(rename = "B")]
    pub b: T,
    #[serde(rename = "M")]
    pub m: T,
    pub l1: T,
    /// `|â_k(t0)|`
    pub dominant: T,
    /// `M |I| + l1`, at most `B |â_k(t0)|`.
    pub constraint: T,
    pub stop: StopKind,
}

impl<T: Real> AdmissibleData<T> {
    pub fn local_t0(&self) -> usize {
        self.t0 - self.lo
    }

    /// `|â_k(t0)|`
    pub fn dominant(&self) -> T {
        self.selection.hat(self.local_t0(), self.k).norm()
    }

    pub fn interval_length(&self) -> T {
        let n = self.selection.nodes();
        n[n.len() - 1] - n[0]
    }

    pub fn summary(&self) -> AdmissibleSummary<T> {
        let n = self.selection.nodes();
        AdmissibleSummary {
            t0: n[self.local_t0()],
            t_lo: n[0],
            t_hi: n[n.len() - 1],
            t0_index: self.t0,
            lo: self.lo,
            hi: self.hi,
            k: self.k,
            b: self.b,
            m: self.m,
            l1: self.l1,
            dominant: self.dominant(),
            constraint: self.m * self.interval_length() + self.l1,
            stop: self.stop,
        }
    }
}

/// `|Δ D^{d-1} a_j| / h` per cell and component.
fn lipschitz_cells<T: Real>(sel: &RadicalSelection<T>, d: usize) -> Result<Vec<Vec<T>>> {
    let deriv = sel.base.finite_difference(d - 1)?;
    Ok(deriv
        .slopes()
        .into_iter()
        .map(|row| row.iter().map(|z| z.norm()).collect())
        .collect())
}

/// `max_j Lip_j^{1/d} |â_k(t0)|^{(d - d_j)/d}`.
fn m_constant<T: Real>(lip: &[T], degrees: &[usize], d: usize, dominant: T) -> T {
    let df = T::lit(d as f64);
    lip.iter()
        .zip(degrees)
        .map(|(&l, &dj)| l.powf(T::one() / df) * dominant.powf(T::lit((d - dj) as f64) / df))
        .fold(T::zero(), T::max)
}

/// Grows `I` around node `t0` alternately to the left and right while
/// `M |I| + ||â'||_{L¹(I)} <= B |â_k(t0)|`, with `M` taken over the
/// current candidate. A side stays blocked once it fails, since both terms
/// only grow with `I`.
pub fn maximal_admissible_interval<T: Real>(
    sel: &RadicalSelection<T>,
    t0: usize,
    k: usize,
    b: T,
) -> Result<AdmissibleData<T>> {
    if !(b > T::zero() && b.is_finite()) {
        return Err(Error::InvalidParameter(format!("B = {b} must be positive")));
    }
    if t0 >= sel.len() || k >= sel.degrees.len() {
        return Err(Error::InvalidParameter(format!(
            "node {t0} or component {k} out of range"
        )));
    }
    let dominant = sel.hat(t0, k).norm();
    if dominant == T::zero() {
        return Err(Error::AllZeroAtPoint { index: t0 });
    }
    let d = sel.max_degree();
    let lip_cells = lipschitz_cells(sel, d)?;
    let var = sel.cell_variation();
    let nodes = sel.nodes();
    let target = b * dominant;
    let last = sel.len() - 1;

    let (mut lo, mut hi) = (t0, t0);
    let mut lip = vec![T::zero(); sel.degrees.len()];
    let mut l1 = T::zero();
    let mut m = T::zero();
    let mut blocked = [false, false];
    while !(blocked[0] && blocked[1]) {
        for side in 0..2 {
            if blocked[side] {
                continue;
            }
            let cell = match side {
                0 if lo > 0 => lo - 1,
                1 if hi < last => hi,
                _ => {
                    blocked[side] = true;
                    continue;
                }
            };
            let cand_lip: Vec<T> = lip.iter().zip(&lip_cells[cell]).map(|(a, c)| a.max(*c)).collect();
            let cand_m = m_constant(&cand_lip, &sel.degrees, d, dominant);
            let cand_l1 = l1 + var[cell];
            let (clo, chi) = if side == 0 { (lo - 1, hi) } else { (lo, hi + 1) };
            if cand_m * (nodes[chi] - nodes[clo]) + cand_l1 <= target {
                lo = clo;
                hi = chi;
                lip = cand_lip;
                m = cand_m;
                l1 = cand_l1;
            } else {
                blocked[side] = true;
            }
        }
    }
    if lo == hi {
        // I = {t0} has no cells, so there is nothing to restrict to
        return Err(Error::IntervalUnresolved { t: nodes[t0].as_f64() });
    }
    let stop = if lo == 0 && hi == last {
        StopKind::Boundary
    } else {
        StopKind::Equality
    };
    Ok(AdmissibleData {
        selection: sel.slice(lo, hi)?,
        lo,
        hi,
        t0,
        k,
        b,
        m,
        l1,
        stop,
    })
}

/// Maximal admissible intervals around every node in `nodes` where `â` does
/// not vanish, each with its dominant index.
pub fn admissible_at_nodes<T: Real>(
    sel: &RadicalSelection<T>,
    nodes: &[usize],
    b: T,
) -> Vec<Result<AdmissibleData<T>>> {
    nodes
        .par_iter()
        .map(|&i| {
            let k = super::dominant_index(sel, i)?;
            maximal_admissible_interval(sel, i, k, b)
        })
        .collect()
}

/// The conclusions guaranteed on admissible data, in checking order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    /// `|â_j(t) - â_j(t0)| <= B |â_k(t0)|`
    Displacement,
    /// `2/3 < |â_k(t) / â_k(t0)| < 4/3`
    DominantRatio,
    /// `|â_j(t)| <= 2 |â_k(t)|`
    Domination,
    /// Length of the normalized curve `<= 3 d² 2^d B`.
    Length,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Failure<T> {
    pub conclusion: Conclusion,
    /// First node (in grid order) where the conclusion fails.
    pub t: T,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdmissibleReport<T> {
    /// `B < 1/3`, `|â_k(t0)| = max_j |â_j(t0)| > 0` and
    /// `||â'||_{L¹(I)} <= B |â_k(t0)|`.
    pub precondition: bool,
    pub displacement: bool,
    /// `max |â_j(t) - â_j(t0)| / (B |â_k(t0)|)`
    pub displacement_ratio: T,
    pub dominant_ratio: bool,
    pub ratio_min: T,
    pub ratio_max: T,
    pub domination: bool,
    /// `max |â_j(t)| / |â_k(t)|`
    pub domination_ratio: T,
    pub length_ok: bool,
    pub length: T,
    pub length_bound: T,
    pub first_failure: Option<Failure<T>>,
    pub all_pass: bool,
}

/// Evaluates the four conclusions at every node of `I`.
///
/// Failures are report entries, never errors.
pub fn check_admissible<T: Real>(data: &AdmissibleData<T>) -> AdmissibleReport<T> {
    let sel = &data.selection;
    let nodes = sel.nodes();
    let i0 = data.local_t0();
    let k = data.k;
    let hat0: Vec<C<T>> = sel.selections.value(i0).to_vec();
    let dom0 = hat0[k].norm();
    let slack = T::one() + T::lit(ROUNDING);
    let third = T::one() / T::lit(3.0);
    let precondition =
        data.b < third && dom0 > T::zero() && hat0.iter().all(|z| z.norm() <= dom0) && sel.l1 <= data.b * dom0 * slack;

    let mut failures: Vec<Failure<T>> = Vec::new();
    let mut note = |c: Conclusion, i: usize, seen: &mut bool| {
        if !*seen {
            *seen = true;
            failures.push(Failure {
                conclusion: c,
                t: nodes[i],
            });
        }
    };

    let budget = data.b * dom0;
    let (mut disp, mut seen_disp) = (T::zero(), false);
    let (mut rmin, mut rmax, mut seen_ratio) = (T::infinity(), T::zero(), false);
    let (mut dratio, mut seen_dom) = (T::zero(), false);
    let two_thirds = T::lit(2.0) * third;
    let four_thirds = T::lit(4.0) * third;
    for i in 0..sel.len() {
        let v = sel.selections.value(i);
        let worst = v
            .iter()
            .zip(&hat0)
            .map(|(z, z0)| (*z - *z0).norm())
            .fold(T::zero(), T::max);
        let ratio = if budget > T::zero() {
            worst / budget
        } else {
            T::infinity()
        };
        disp = disp.max(ratio);
        if worst > budget * slack {
            note(Conclusion::Displacement, i, &mut seen_disp);
        }
        let r = v[k].norm() / dom0;
        rmin = rmin.min(r);
        rmax = rmax.max(r);
        if !(r > two_thirds && r < four_thirds) {
            note(Conclusion::DominantRatio, i, &mut seen_ratio);
        }
        let vk = v[k].norm();
        let big = v.iter().map(|z| z.norm()).fold(T::zero(), T::max);
        let q = if vk > T::zero() {
            big / vk
        } else if big > T::zero() {
            T::infinity()
        } else {
            T::one()
        };
        dratio = dratio.max(q);
        if big > T::lit(2.0) * vk * slack {
            note(Conclusion::Domination, i, &mut seen_dom);
        }
    }

    let d = sel.max_degree();
    let df = T::lit(d as f64);
    let length_bound = T::lit(3.0) * df * df * T::lit(2.0).powi(d as i32) * data.b;
    let (length, length_ok) = match normalized_curve(sel, k) {
        Ok(u) => {
            let len = polygonal_length(&u);
            (len, len <= length_bound * slack)
        }
        Err(_) => (T::infinity(), false),
    };
    if !length_ok {
        let t = nodes[nodes.len() - 1];
        failures.push(Failure {
            conclusion: Conclusion::Length,
            t,
        });
    }
    let displacement = !seen_disp;
    let dominant_ratio = !seen_ratio;
    let domination = !seen_dom;
    AdmissibleReport {
        precondition,
        displacement,
        displacement_ratio: disp,
        dominant_ratio,
        ratio_min: rmin,
        ratio_max: rmax,
        domination,
        domination_ratio: dratio,
        length_ok,
        length,
        length_bound,
        all_pass: displacement && dominant_ratio && domination && length_ok,
        first_failure: failures.into_iter().min_by_key(|f| f.conclusion as u8),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DerivativeBoundEntry<T> {
    pub component: usize,
    /// Derivative order; `s = d` stands for the Lipschitz constant of
    /// `a_j^{(d-1)}`.
    pub s: usize,
    pub value: T,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DerivativeBoundReport<T> {
    pub entries: Vec<DerivativeBoundEntry<T>>,
    /// Maximum over `entries`.
    pub constant: T,
}

/// `||a_j^{(s)}||_{L^∞(I)} |I|^s |â_k(t0)|^{-d_j}` for `1 <= s < d`, and
/// `Lip_I(a_j^{(d-1)}) |I|^d |â_k(t0)|^{-d_j}`, with derivatives taken on
/// the nodes of `I` only.
pub fn check_derivative_bounds<T: Real>(data: &AdmissibleData<T>) -> Result<DerivativeBoundReport<T>> {
    let sel = &data.selection;
    let d = sel.max_degree();
    if sel.len() < d.max(2) {
        return Err(Error::OrderTooHigh {
            order: d,
            len: sel.len(),
        });
    }
    let len = data.interval_length();
    let dom = data.dominant();
    let mut entries = Vec::new();
    for s in 1..=d {
        let per_component: Vec<T> = if s < d {
            let fd = sel.base.finite_difference(s)?;
            (0..sel.degrees.len())
                .map(|j| fd.values().iter().map(|v| v[j].norm()).fold(T::zero(), T::max))
                .collect()
        } else {
            let slopes = sel.base.finite_difference(d - 1)?.slopes();
            (0..sel.degrees.len())
                .map(|j| slopes.iter().map(|v| v[j].norm()).fold(T::zero(), T::max))
                .collect()
        };
        for (j, x) in per_component.into_iter().enumerate() {
            let dj = sel.degrees[j] as i32;
            entries.push(DerivativeBoundEntry {
                component: j,
                s,
                value: x * len.powi(s as i32) / dom.powi(dj),
            });
        }
    }
    Ok(DerivativeBoundReport {
        constant: entries.iter().map(|e| e.value).fold(T::zero(), T::max),
        entries,
    })
}
