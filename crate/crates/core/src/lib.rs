//! MAP inference for ferromagnetic Potts models with α-expansion, together with the
//! machinery to certify how far any expansion local minimum can be from a MAP labeling.
//!
//! Every expansion local minimum `x` is an exact MAP labeling of the instance whose edge
//! weights are doubled on the edges `x` leaves uncut, and the local LP relaxation is tight on
//! that perturbed instance. [`certify`] turns this into computable upper bounds on the
//! Hamming error and objective gap of every labeling α-expansion can return.

pub mod certify;
pub mod error;
pub mod expansion;
pub mod instances;
pub mod locallp;
pub mod lp;
pub mod model;
pub mod num;
pub mod oracle;
pub mod rounding;

pub use error::{Error, Result};
pub use model::{hamming, perturb, FractionalPoint, Labeling, PerturbedInstance, PottsInstance};
pub use num::Rational;
