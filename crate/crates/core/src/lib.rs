//! Gauss-Jacobi and Gauss-Jacobi-Lobatto quadrature for the weight
//! `w(t) = (1 - t)^alpha (1 + t)^beta` on `[-1, 1]`, together with an
//! independent tanh-sinh reference integrator and the diagnostics used to
//! check weight asymptotics and convergence rates of the Lobatto rule.
//!
//! ```
//! use jacobi_lobatto::{lobatto_rule, JacobiExponents};
//!
//! let e = JacobiExponents::new(0.0, 0.0)?;
//! let rule = lobatto_rule(e, 1)?;
//! assert_eq!(rule.nodes(), &[-1.0, 0.0, 1.0]);
//! let integral = rule.integrate(|t| t * t)?;
//! assert!((integral - 2.0 / 3.0).abs() < 1e-15);
//! # Ok::<(), jacobi_lobatto::Error>(())
//! ```

pub mod analysis;
pub mod cli;
pub mod ddouble;
mod error;
pub mod gauss;
pub mod integrand;
pub mod jacobi;
pub mod lobatto;
pub mod oracle;
pub mod special;
pub mod tridiag;

pub use error::{Error, Result};
pub use gauss::{gauss_rule, QuadratureRule, RuleKind};
pub use jacobi::{JacobiExponents, RecurrenceData};
pub use lobatto::{lobatto_rule, LobattoRule};
pub use oracle::{Abscissa, ReferenceMethod, ReferenceValue};
