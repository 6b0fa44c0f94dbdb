//! Polar maps of homogeneous polynomials and homaloidality of products of
//! linear forms.
//!
//! A homogeneous `f` is homaloidal when its polar map `(df/dx0 : ... : df/dxn)`
//! is birational. For products of linear forms this holds exactly when the
//! reduced product has `n+1` independent factors; [`theorems`] decides that
//! structurally and by an inductive restriction certificate, and [`oracle`]
//! checks it independently by counting fibers over finite fields.

pub mod oracle;
pub mod parser;
pub mod polar;
pub mod poly;
pub mod theorems;

pub use oracle::{DegreeReport, OracleConfig, OracleError};
pub use parser::{parse_arrangement, parse_polynomial, ParseError, ReportDocument};
pub use polar::{PolarError, RationalMap};
pub use poly::{Coefficient, Field, LinearFormProduct, PolyError, Polynomial};
pub use theorems::{full_verdict, structural_verdict, TheoremError, VerdictParams};
