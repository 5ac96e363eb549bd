//! Security analysis of one-way and two-way thermal continuous-variable QKD.
//!
//! Secret-key rates for direct (DR) and reverse (RR) reconciliation under
//! collective entangling-cloner attacks, the Gaussian-state machinery they are
//! built on, and threshold solvers that turn rates into tolerable channel
//! noise, minimum frequency, and maximum distance.
//!
//! Variances are in shot-noise units (vacuum = 1); information is in bits.

pub mod environment;
pub mod error;
pub mod gaussian;
pub mod oneway;
pub mod rate;
pub mod threshold;
pub mod twoway;

pub use environment::{AttenuationModel, ThermalEnvironment};
pub use error::{Error, Result};
pub use gaussian::{CovarianceMatrix, Quadrature, SymplecticSpectrum};
pub use oneway::OneWayParams;
pub use rate::{Direction, Protocol, RateBreakdown, Scheme};
pub use threshold::Threshold;
pub use twoway::{EveCm4Params, TwoWayParams};
