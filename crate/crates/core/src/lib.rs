//! Numerical core of `fermi-eos`: p-wave scattering lengths, free Fermi gas
//! thermodynamics, the leading interaction correction to the pressure of a
//! dilute spin-polarized Fermi gas, exact error-exponent programs, and a
//! suite of numerical checks of the supporting estimates.

pub mod dim;
pub mod eos;
pub mod error;
pub mod exponents;
pub mod freegas;
pub mod ode;
pub mod quad;
pub mod scattering;
pub mod specfun;
pub mod verify;

pub use dim::Dimension;
pub use error::{Error, Result};
