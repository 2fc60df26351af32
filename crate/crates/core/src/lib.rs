//! Numerical toolkit for the logarithmic Laplacian log(−Δ) on radial functions.
//!
//! Modules, bottom-up:
//!
//! * [`specfun`]: Γ, ψ, Bessel and Hankel functions, dimensional constants.
//! * [`quadrature`]: adaptive, sphere-subtracted, oscillatory and time integrals.
//! * [`logop`]: the operator itself, by the singular-integral and spectral routes.
//! * [`fundsol`]: fundamental solutions via comparison with the Helmholtz Green's function.
//! * [`distverify`]: renormalized Fourier-side pairings and the identities they satisfy.
//! * [`cli`]: the `loglap` command-line front end.

pub mod cli;
pub mod distverify;
pub mod error;
pub mod fundsol;
pub mod logop;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};
pub use quadrature::{IntegralResult, QuadratureSpec};
