//! Height zeta functions of projective spaces and Hirzebruch surfaces over
//! the rationals, and their motivic analogues over the projective line.
//!
//! The crate is organised bottom-up:
//!
//! * [`numfield`] holds base-field invariants and Arakelov divisors over Q.
//! * [`specfun`] evaluates Γ, Dedekind zeta and the completed factor ξ(s).
//! * [`arakelov`] models Arakelov bundles as metrized lattices and evaluates
//!   their theta section counts.
//! * [`pcount`] enumerates rational points of bounded height on ℙ(V).
//! * [`zclass`] continues Z(ℙ(V), s) to the complex plane.
//! * [`hirz`] counts points and predicts poles on Hirzebruch surfaces.
//! * [`motivic`] is an exact engine for motivic height zeta functions of
//!   projective bundles over ℙ¹.
//! * [`fqoracle`] counts sections over small finite fields by brute force.
//! * [`cli`] is the command-line front end.

pub mod arakelov;
pub mod cli;
pub mod error;
pub mod fqoracle;
pub mod hirz;
mod lattice;
pub mod motivic;
pub mod numfield;
pub mod pcount;
pub mod quad;
pub mod rational;
pub mod specfun;
pub mod zclass;

pub use arakelov::{ArakelovBundle, BundleOp};
pub use error::{Error, Result};
pub use numfield::{ArithDivisor, FieldDescriptor};
pub use specfun::AnalyticValue;
