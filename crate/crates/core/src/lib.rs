//! Continuous lifts of curves over the orbit maps of finite group
//! representations, and the measurement of their Sobolev regularity.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the `f64`
//! aliases at the crate root are what the command line tool uses.

pub mod analysis;
pub mod covers;
pub mod curve;
pub mod error;
pub mod grid;
pub mod grid2d;
pub mod invariants;
pub mod io;
pub mod lifting;
pub mod reduction;
pub mod representation;
pub mod scalar;
pub mod tuple;

pub use curve::{Oracle, Refinement, SampledCurve};
pub use error::{Error, Result};
pub use grid::Grid;
pub use grid2d::SampledGrid2D;
pub use invariants::{evaluate_sigma, InvariantValue, SigmaInput};
pub use lifting::{LiftConfig, LiftedCurve};
pub use representation::{MatrixGroup, RepresentationKind, RepresentationSpec};
pub use scalar::{Real, C};
pub use tuple::AQPoint;

pub type Complex64 = C<f64>;
pub type Grid64 = Grid<f64>;
pub type Curve = SampledCurve<f64>;
pub type Curve2D = SampledGrid2D<f64>;
pub type Tuple = AQPoint<f64>;
pub type Spec = RepresentationSpec<f64>;
pub type Lift = LiftedCurve<f64>;
