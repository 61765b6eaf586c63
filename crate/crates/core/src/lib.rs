//! Carlson symmetric elliptic integrals, the negative Lambert W branch, and the
//! exact fourth-moment closure of the three-dimensional angular central
//! Gaussian (ACG) distribution.
//!
//! The crate is organised bottom-up:
//!
//! * [`carlson`] evaluates R_C, R_F, R_D, R_J and the R_D gradient.
//! * [`lambert`] evaluates W₋₁ on `[-1/e, 0)`.
//! * [`relation`] gives `f(x) = x R_D(1, 1, x²) / 3` in closed form together
//!   with its series and asymptotic inverses.
//! * [`acg`] maps between the second-moment spectrum `a` and the ACG parameter
//!   spectrum `b`, and evaluates the exact, planar and asymptotic closures.
//! * [`oracle`] holds slow brute-force quadratures used to cross-check all of
//!   the above.
//! * [`cli`] implements the sweeps, verification report and output formatting
//!   behind the `acg-closure` binary.

pub mod acg;
pub mod carlson;
pub mod cli;
pub mod error;
pub mod lambert;
pub mod oracle;
pub mod relation;

pub use acg::{ClosureMethod, EigenTriple, SymTensor2, SymTensor4};
pub use error::{Error, Result};
