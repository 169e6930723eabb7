//! Exact symbolic engine for the gauge-invariant Weyl star product on a
//! charged-particle phase space in a static, nonuniform magnetic field
//! `B(x, y) e_z`, and for the guiding-center reduction of its Hamiltonian.
//!
//! Symbols are truncated double expansions in `hbar` and the magnetization
//! parameter `eps`, with exact Gaussian-rational coefficients.

pub mod bidiff;
pub mod coeff;
pub mod error;
pub mod gc;
pub mod monomial;
pub mod numeric;
pub mod series;
pub mod star;
pub mod text;
pub mod verify;

pub use coeff::Coefficient;
pub use error::{Error, Result};
pub use monomial::{Axis, FieldFactor, Generator, Monomial, MultiIndex};
pub use series::{Chart, GradedSeries, Truncation};
pub use star::{poisson, StarProduct};
