//! Numerical laboratory for Kreiss-type resolvent conditions and the power
//! growth of finite-dimensional operators.
//!
//! The crate models an operator `T` as a dense complex `d x d` matrix acting
//! on `C^d` with a chosen `p`-norm and provides:
//!
//! * [`operators`]: the matrix type, a gallery of reference operators and the
//!   plain-text matrix file format.
//! * [`norms`]: vector and operator `p`-norms, with certified two-sided bounds
//!   when `p` is not `1`, `2` or `inf`.
//! * [`resolvent`]: lower bounds for the Kreiss constant, the strong Kreiss
//!   constant, the exponential criterion and the partial-sum functional.
//! * [`power`]: profiling of `||T^n||` and regression against
//!   `C n^alpha (log(n+2))^beta`.
//! * [`fourier`]: trigonometric polynomials on the torus, interval
//!   projections, scalar multipliers and `L^p(T; C^d)` norms.
//! * [`decomp`]: empirical `l^q(L^p)` decomposition constants and the
//!   type / cotype / Fourier-type inequalities.
//! * [`positivity`]: inequalities for entrywise nonnegative operators.
//! * [`verify`]: double-double verification of the Poisson-weight estimates
//!   behind the multiplier construction.
//!
//! Data-parallel inner loops run on rayon when the `parallel` feature is
//! enabled (the default) and sequentially otherwise. Every reduction is
//! performed in index order, so results do not depend on scheduling.

pub mod decomp;
pub mod error;
pub mod fourier;
pub mod norms;
pub mod operators;
pub mod par;
pub mod positivity;
pub mod power;
pub mod report;
pub mod resolvent;
pub mod verify;

mod search;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use operators::{ComplexMatrix, OperatorKind, OperatorSpec};

/// Version string embedded in every report.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Schema tag carried by every JSON report.
pub const SCHEMA: &str = "kreisslab/1";
