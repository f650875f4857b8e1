//! Adversarial surrogate risks on finite ground sets, their W-infinity dual
//! problems, and optimality certificates.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix `f64`, which is what the CLI uses.

pub mod certify;
pub mod dense;
pub mod dualsolve;
pub mod error;
pub mod flow;
pub mod ground;
pub mod io;
pub mod losses;
pub mod measures;
pub mod onedim;
pub mod pipeline;
pub mod primalsolve;
pub mod scalar;

pub use error::{Error, Result};
pub use ground::{Field, GroundSet, Norm};
pub use losses::{Loss, SurrogateLoss};
pub use measures::{Coupling, TwoClassMeasure};
pub use scalar::Scalar;

pub type GroundSet64 = ground::GroundSet<f64>;
pub type Field64 = ground::Field<f64>;
pub type Measure64 = measures::TwoClassMeasure<f64>;
pub type Coupling64 = measures::Coupling<f64>;
pub type GroundSet32 = ground::GroundSet<f32>;
pub type Measure32 = measures::TwoClassMeasure<f32>;
