//! Multiplicative (geometric) statistics.
//!
//! The crate covers empirical geometric means, variances and standard
//! deviations ([`mparams`]), closed-form multiplicative parameters of common
//! finance and insurance distributions ([`distlib`]), exponential trend
//! regression ([`regress`]), return-series analytics ([`finance`]) and Monte
//! Carlo verification of the estimators ([`mcverify`]). [`specfun`] holds the
//! numerical kernels the rest is built and checked on.
//!
//! ```
//! use mstat::mparams::{geo_mean, Sample};
//!
//! let s = Sample::new(vec![2.0, 8.0]).unwrap();
//! assert!((geo_mean(&s) - 4.0).abs() < 1e-12);
//! ```

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod distlib;
mod error;
pub mod finance;
pub mod mcverify;
pub mod mparams;
pub mod regress;
pub mod specfun;

pub use error::{Error, Result};
