//! Exact truncated q-series and Jacobi series, theta decompositions of
//! weight-zero index-one Jacobi forms, N=4 character coefficients, and
//! floating-point checks of the associated mock modular completions.

pub mod decomp;
pub mod error;
pub mod identities;
pub mod jacobi_series;
pub mod mock;
pub mod numeric;
pub mod qseries;
pub mod rational;
pub mod svoa;
pub mod theta;

pub use error::{Error, Result};
pub use jacobi_series::{JSeries, PhasedJSeries};
pub use qseries::QSeries;
pub use rational::{format_rational, int, parse_rational, rat, Rational};
