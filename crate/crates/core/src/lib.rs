//! Power-weighted central integral means on `R^n`, their companion means,
//! commutators with CMO symbols, and the machinery used to check the
//! mixed-means and weighted `L^p` inequalities they satisfy.
//!
//! Every function is radial: a profile `g` on `(0, ∞)` stands for
//! `f(x) = g(|x|)`. Integrals over balls centred at the origin reduce
//! exactly to one-dimensional integrals, so the dimension `n` only enters
//! through exponents and the unit-ball volume.
//!
//! The crate is `no_std` and needs only `alloc`. File formats, sweeps and
//! the command-line front end live in the `centmean` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
mod math;

pub mod cmo;
pub mod commutators;
pub mod constants;
pub mod dyadic;
pub mod harness;
pub mod means;
pub mod profiles;
pub mod quadrature;

pub use error::{Error, Result};
pub use means::{MeanParams, Side};
pub use profiles::{CorpusEntry, RadialProfile};
pub use quadrature::{Estimate, QuadratureSpec};
