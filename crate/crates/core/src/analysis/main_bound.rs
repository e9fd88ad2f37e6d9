//! The ratio between the `L^p` norm of a lift's derivative and the
//! `C^{d-1,1}` size of the curve it lifts.

use serde::Serialize;

use crate::curve::SampledCurve;
use crate::error::{Error, Result};
use crate::lifting::LiftedCurve;
use crate::representation::RepresentationSpec;
use crate::scalar::Real;

use super::norms::{holder_norm, lp_derivative_norm};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MainBoundReport<T> {
    pub p: T,
    /// `||lift'||_{L^p}`
    pub lhs: T,
    /// `||a_j||_{C^{d-1,1}}^{1/d_j}` per component.
    pub components: Vec<T>,
    /// Maximum of `components`.
    pub rhs: T,
    /// `lhs / rhs`, an empirical value of the constant; zero when degenerate.
    pub ratio: T,
    /// The curve vanishes identically.
    pub degenerate: bool,
}

/// Measures `||lift'||_{L^p} / max_j ||a_j||^{1/d_j}_{C^{d-1,1}}`.
///
/// Both sides are homogeneous of degree one under `a_j -> s^{d_j} a_j`, so
/// the ratio does not depend on the scale of `a`.
pub fn verify_main_bound<T: Real>(
    a: &SampledCurve<T>,
    lift: &LiftedCurve<T>,
    spec: &RepresentationSpec<T>,
    p: T,
) -> Result<MainBoundReport<T>> {
    if let Some(critical) = spec.critical_exponent() {
        if p >= critical {
            return Err(Error::ExponentOutOfRange {
                p: p.as_f64(),
                critical: critical.as_f64(),
            });
        }
    }
    if a.dim() != spec.degrees().len() {
        return Err(Error::ShapeMismatch(format!(
            "curve has {} components, representation has {} invariants",
            a.dim(),
            spec.degrees().len()
        )));
    }
    let k = spec.max_degree() - 1;
    let lhs = lp_derivative_norm(&lift.curve, p)?.value;
    let components = spec
        .degrees()
        .iter()
        .enumerate()
        .map(|(j, &dj)| {
            let norm = holder_norm(&a.component(j), k, T::one())?.value;
            Ok(norm.powf(T::one() / T::lit(dj as f64)))
        })
        .collect::<Result<Vec<T>>>()?;
    let rhs = components.iter().copied().fold(T::zero(), T::max);
    let degenerate = rhs == T::zero();
    Ok(MainBoundReport {
        p,
        lhs,
        components,
        rhs,
        ratio: if degenerate { T::zero() } else { lhs / rhs },
        degenerate,
    })
}
