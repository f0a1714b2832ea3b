//! Construction and exhaustive verification of permutation polynomials over
//! finite fields.
//!
//! The crate is organized bottom-up:
//!
//! - [`field`]: GF(p^n) arithmetic, Frobenius, relative trace and norm.
//! - [`poly`]: sparse and composite polynomial expressions, text syntax.
//! - [`perm`]: permutation checks, the monomial criterion and the
//!   root-of-unity criterion for `x^r h(x^((q-1)/d))`.
//! - [`circle`]: the unit circle of GF(2^2m) and quadratic solving in
//!   characteristic 2.
//! - [`families`]: the six parameterized polynomial families and their
//!   hypothesis checklists.
//! - [`scan`]: whole-parameter-space sufficiency and necessity scans with
//!   JSON/CSV reports.
//! - [`cli`]: the `permupoly` command-line front end.
//!
//! With the default `parallel` feature the exhaustive loops run on rayon;
//! without it every [`Exec`] mode falls back to a sequential loop.

pub mod circle;
pub mod cli;
pub mod error;
pub mod exec;
pub mod families;
pub mod field;
pub mod perm;
pub mod poly;
pub mod scan;

pub use error::{Error, Result};
pub use exec::Exec;
pub use field::{Elem, FieldCtx};
pub use perm::{PermReport, Verdict};
pub use poly::{CompositePoly, SparsePoly, Term};
