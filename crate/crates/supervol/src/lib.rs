//! Exact computation of super Weil-Petersson volume polynomials for
//! moduli of spin hyperbolic surfaces with Neveu-Schwarz and Ramond
//! boundary components, via kernel-moment recursions, and of the matching
//! Virasoro-constrained partition functions on the tau-function side.
//!
//! Everything is computed over `Q[p]` with `p` a formal marker for `pi^2`,
//! so all results are exact; floating point appears only in the quadrature
//! oracle that cross-checks the closed-form kernel moments.

pub mod error;
pub mod kappa;
pub mod kernels;
pub mod laurent;
pub mod pipoly;
pub mod quad;
pub mod rat;
pub mod tau;
pub mod tseries;
pub mod verify;
pub mod volpoly;
pub mod volumes;

pub use error::{Error, Result};
pub use pipoly::PiPoly;
pub use rat::Rat;
pub use volpoly::{VolPoly, VolumeSeries};
