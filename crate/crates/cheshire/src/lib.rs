//! Simulation toolkit for a polarized-neutron Mach-Zehnder (triple-Laue)
//! interferometer with weak path marking: exact quantum predictions, an
//! event-based corpuscular simulator, weak-value calculators and fringe
//! calibration.
//!
//! The crate is split along five concerns:
//!
//! * [`model`]: shared domain types (spinors, the 8-component state vector,
//!   instrument configuration, scenario presets).
//! * [`oracle`]: the exact component-matrix pipeline and the closed-form
//!   detection probabilities used as ground truth.
//! * [`weak`]: weak values, both the procedural intensity-ratio ones and the
//!   textbook pre-/postselected definition for cross checks.
//! * [`des`]: the discrete-event simulator, one messenger at a time through
//!   a network of adaptive beam-splitter units and passive spin units.
//! * [`calibration`]: reflectivity estimators and least-squares fringe fits.
//!
//! Numeric kernels are generic over the floating-point scalar through
//! [`Scalar`]; the crate root exports `f64` aliases for everyday use.

pub mod calibration;
pub mod des;
pub mod model;
pub mod oracle;
pub mod weak;

use num_complex::Complex as NumComplex;

/// Floating-point scalar the math kernels are generic over.
pub trait Scalar:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::FromPrimitive
    + num_traits::NumAssign
    + core::fmt::Debug
    + core::fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`, for tolerances and literal constants.
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("f64 conversion")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Complex number over a generic scalar.
pub type CScalar<F> = NumComplex<F>;

/// Default scalar used by the concrete aliases and the event engine.
pub type Real = f64;
/// Complex number over [`Real`].
pub type Complex = NumComplex<Real>;

/// Two-component spinor over [`Real`].
pub type Spinor = model::Spinor<Real>;
/// Eight-component interferometer state over [`Real`].
pub type StateVector8 = model::StateVector8<Real>;
/// Full instrument configuration over [`Real`].
pub type InterferometerConfig = model::InterferometerConfig<Real>;
/// Scenario preset over [`Real`].
pub type Scenario = model::Scenario<Real>;
/// Weak-value report over [`Real`].
pub type WeakValueReport = weak::WeakValueReport<Real>;
/// Fringe sample series over [`Real`].
pub type FringeSeries = calibration::FringeSeries<Real>;
/// Sinusoid fit result over [`Real`].
pub type FitResult = calibration::FitResult<Real>;

pub use model::{Beam, Path, Postselect};

/// Crate version, recorded in CLI output metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub(crate) fn cplx<F: Scalar>(re: F, im: F) -> CScalar<F> {
    NumComplex::new(re, im)
}

pub(crate) fn cre<F: Scalar>(re: F) -> CScalar<F> {
    NumComplex::new(re, F::zero())
}
