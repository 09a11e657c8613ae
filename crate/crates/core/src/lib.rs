//! Exact symbolic engine for the star products `*^D` on `C^{n+1} \ {0}`,
//! their reductions `*^D_mu` to `CP^n`, and certificates of non-equivalence
//! between the reduced products.
//!
//! All arithmetic is over the Gaussian rationals and every series is
//! truncated at an explicit order, so each identity is decided by exact
//! comparison.

pub mod classify;
pub mod error;
pub mod format;
pub mod lambda;
pub mod parse;
pub mod random;
pub mod reduction;
pub mod ring;
pub mod scalar;
pub mod series;
pub mod star;
pub mod suites;

pub use classify::{equivalence_verdict, ObstructionReport, Verdict};
pub use error::{Error, Result};
pub use lambda::LambdaFuncSeries;
pub use reduction::{ReducedElement, ReductionContext};
pub use ring::{DiffKind, FuncExpr, Grading, Monomial};
pub use scalar::GaussianRational;
pub use series::TruncUniSeries;
pub use star::{DSeries, KTable};
pub use suites::{run_suite, Suite, SuiteConfig, SuiteReport};
