//! Inequalities between the normalized norms, and the interpolation
//! inequality bounding intermediate derivatives.

use serde::Serialize;

use crate::curve::SampledCurve;
use crate::error::{Error, Result};
use crate::scalar::Real;

use super::norms::{holder_quotient, image_diameter, normalized_lp_norm, normalized_weak_lp};

/// Additive slack allowed in every comparison.
pub const SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QpReport<T> {
    pub q: T,
    pub p: T,
    /// `||f'||*_{L^q}`
    pub lq: T,
    /// `||f'||*_{L^p}`
    pub lp: T,
    /// `||f'||*_{q,w}`
    pub weak_q: T,
    /// `||f'||*_{p,w}`
    pub weak_p: T,
    /// `(p / (p - q))^{1/q}`
    pub constant: T,
    /// `constant * weak_p + slack - lq`; nonnegative when the upper bound holds.
    pub upper_slack: T,
    /// `lq + slack - weak_q`
    pub lower_slack: T,
    /// `lp + slack - lq`
    pub monotone_slack: T,
    pub holds: bool,
}

/// Compares `||f'||*_{q,w} <= ||f'||*_{L^q} <= (p/(p-q))^{1/q} ||f'||*_{p,w}`
/// and `||f'||*_{L^q} <= ||f'||*_{L^p}` on the normalized norms.
pub fn check_qp_inequality<T: Real>(curve: &SampledCurve<T>, q: T, p: T) -> Result<QpReport<T>> {
    if !(q >= T::one() && q < p) {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= q < p, got q = {q}, p = {p}"
        )));
    }
    let lq = normalized_lp_norm(curve, q)?.value;
    let lp = normalized_lp_norm(curve, p)?.value;
    let weak_q = normalized_weak_lp(curve, q)?.value;
    let weak_p = normalized_weak_lp(curve, p)?.value;
    let constant = (p / (p - q)).powf(T::one() / q);
    let slack = T::lit(SLACK);
    let upper_slack = constant * weak_p + slack - lq;
    let lower_slack = lq + slack - weak_q;
    let monotone_slack = lp + slack - lq;
    Ok(QpReport {
        q,
        p,
        lq,
        lp,
        weak_q,
        weak_p,
        constant,
        upper_slack,
        lower_slack,
        monotone_slack,
        holds: upper_slack >= T::zero() && lower_slack >= T::zero() && monotone_slack >= T::zero(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InterpolationReport<T> {
    pub m: usize,
    pub alpha: T,
    pub s: usize,
    /// `sup |f^{(s)}|`
    pub lhs: T,
    /// `V_I(f)`, the diameter of the image.
    pub variation: T,
    /// `Höld_alpha(f^{(m)})`
    pub holder: T,
    /// `|I|^{-s} (V + V^{(m+alpha-s)/(m+alpha)} H^{s/(m+alpha)} |I|^s)`
    pub bracket: T,
    /// `lhs / bracket`; zero when `lhs` vanishes.
    pub ratio: T,
}

/// The ratio between an intermediate derivative and the bound built from
/// the oscillation of `f` and the Hölder constant of `f^{(m)}`. The
/// universal constant is the quantity being measured.
pub fn check_interpolation_inequality<T: Real>(
    curve: &SampledCurve<T>,
    m: usize,
    alpha: T,
    s: usize,
) -> Result<InterpolationReport<T>> {
    if s == 0 || s > m {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= s <= m, got s = {s}, m = {m}"
        )));
    }
    if !(alpha > T::zero() && alpha <= T::one()) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} must lie in (0, 1]")));
    }
    let lhs = curve.finite_difference(s)?.sup_norm();
    let variation = image_diameter(curve);
    let holder = holder_quotient(&curve.finite_difference(m)?, alpha);
    let len = curve.grid().length();
    let ma = T::lit(m as f64) + alpha;
    let sf = T::lit(s as f64);
    let bracket = len.powf(-sf) * (variation + variation.powf((ma - sf) / ma) * holder.powf(sf / ma) * len.powf(sf));
    let ratio = if lhs == T::zero() { T::zero() } else { lhs / bracket };
    Ok(InterpolationReport {
        m,
        alpha,
        s,
        lhs,
        variation,
        holder,
        bracket,
        ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::scalar::C;

    fn curve(n: usize, f: impl Fn(f64) -> f64) -> SampledCurve<f64> {
        SampledCurve::scalar_from_fn(Grid::uniform(0.0, 1.0, n).unwrap(), |t| C::new(f(t), 0.0))
    }

    #[test]
    fn constant_slope_has_equal_norms() {
        let r = check_qp_inequality(&curve(11, |t| 2.0 * t), 1.0, 2.0).unwrap();
        assert!((r.lq - 2.0).abs() < 1e-12);
        assert!((r.weak_p - 2.0).abs() < 1e-12);
        assert!((r.weak_q - 2.0).abs() < 1e-12);
        assert!(r.constant >= 1.0);
        assert!(r.holds);
    }

    #[test]
    fn rejects_unordered_exponents() {
        assert!(check_qp_inequality(&curve(5, |t| t), 2.0, 1.5).is_err());
    }

    #[test]
    fn interpolation_identity_example() {
        let r = check_interpolation_inequality(&curve(21, |t| t), 1, 1.0, 1).unwrap();
        assert!((r.variation - 1.0).abs() < 1e-15);
        assert!(r.holder.abs() < 1e-12);
        assert!((r.ratio - 1.0).abs() < 1e-9);
        let r = check_interpolation_inequality(&curve(21, |_| 4.0), 1, 1.0, 1).unwrap();
        assert_eq!(r.ratio, 0.0);
    }
}
