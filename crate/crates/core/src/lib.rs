//! Continued fractions built from a pair `(f, g)`: construction, evaluation,
//! telescoping closed forms, reverse solving and numeric recognition.

pub mod cfengine;
pub mod exprlang;
pub mod mpval;
pub mod poly;
pub mod recognizer;
pub mod solver;
pub mod telescope;

pub use cfengine::{CFSpec, CfError, SeriesResult, Verification, VerifyStatus};
pub use exprlang::{parse, Expr, ExprError};
pub use mpval::{BigFloat, MpError};
pub use poly::{QPolynomial, RationalFunction};
pub use recognizer::{default_basis, ConstantBasis, Recognition, RecognizerError, Relation};
pub use solver::{ProofResult, ProofStatus, SolverError};
pub use telescope::{Atom, ClosedForm, RenderStyle, TelescopeError};
