//! Exact p-adic computation for modular forms at the q-expansion level:
//! Mahler-expansion interpolation of operators, the nilpotent local model of
//! the Gauss-Manin connection, the Hecke/theta/depletion operator calculus,
//! ordinary projection, and triple-product / Rankin-Selberg p-adic L-values.
//!
//! The coefficient layer is fixed-precision arithmetic in Z/p^M with per-value
//! precision ledgers, so every downstream quantity carries the number of
//! digits it is actually certified to.

pub mod error;
pub mod padic;
pub mod mahler;
pub mod series;
pub mod interp;
pub mod linalg;
pub mod bernoulli;
pub mod qexp;
pub mod nearly;
pub mod lfun;
pub mod io;
pub mod selftest;

pub use error::{Error, Result};
pub use padic::{PadicCtx, PadicElem, ScaledElem};
pub use series::QSeries;
