//! Numerical toolkit for complex Lie groups and a normal-families laboratory.
//!
//! The layers build on each other:
//!
//! - [`numkernel`]: small dense complex linear algebra (spectral norms, matrix exponentials,
//!   holomorphic finite-difference Jacobians).
//! - [`liegroup`]: concrete complex Lie groups (additive ℂ^m, the torus (ℂ*)^m, GL(n,ℂ),
//!   SL(2,ℂ)) with tangent vectors stored in left-trivialized coordinates.
//! - [`expmap`]: one-parameter subgroups, base-pointed exponentials, the series for the
//!   differential of `exp`, structure constants and the norm bound they give.
//! - [`target`]: complex projective space with the Fubini–Study metric.
//! - [`family`]: holomorphic families into projective space and Marty-type normality scans.
//! - [`zalcman`]: the rescaling construction that turns a non-normal family into a sequence
//!   converging to a nonconstant entire map, plus the diagnostics that certify it.
//!
//! Grid scans and Monte-Carlo sweeps run on rayon when the `parallel` feature is on (the
//! default); see [`par`] for the determinism contract.

pub mod error;
pub mod expmap;
pub mod family;
pub mod liegroup;
pub mod numkernel;
pub mod par;
pub mod target;
pub mod zalcman;

pub use error::{Error, Result};
pub use numkernel::{ComplexMatrix, LinearMapNorm, C64};
pub use par::Exec;
