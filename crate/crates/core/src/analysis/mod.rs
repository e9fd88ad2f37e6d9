//! Function space measurements of lifts and the empirical checks of the
//! regularity bounds.

pub mod inequalities;
pub mod main_bound;
pub mod norms;
pub mod scan;

pub use inequalities::{check_interpolation_inequality, check_qp_inequality, InterpolationReport, QpReport};
pub use main_bound::{verify_main_bound, MainBoundReport};
pub use norms::{
    holder_norm, lp_derivative_norm, normalized_lp_norm, normalized_weak_lp, weak_lp_quasinorm,
    weak_lp_quasinorm_regular, NormKind, NormReport,
};
pub use scan::{critical_exponent_scan, p_grid, ExponentScanReport, ScanFamily, ScanOptions, Verdict};
