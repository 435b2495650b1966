//! Exact genus-zero one-point invariants of complete intersections in
//! projective space, computed from localization correlators.
//!
//! The building blocks are truncated cohomology rings ([`ring`]), Laurent
//! polynomials in the equivariant parameter `t` ([`laurent`]) and truncated
//! `q`-series over either ([`series`]). Fano correlators live in
//! [`correlators`], the Calabi–Yau comb recursion in [`calabi_yau`], the
//! mirror change of variables in [`mirror`] and projective bundles over a
//! formal base in [`relative`].

pub mod calabi_yau;
pub mod correlators;
pub mod error;
pub mod exec;
pub mod laurent;
pub mod mirror;
pub mod rational;
pub mod relative;
pub mod ring;
pub mod selftest;
pub mod series;

pub use calabi_yau::{
    aspinwall_morrison, quintic_report, solve_calabi_yau, threefold_report, Comb, CySolution,
    LambdaForm, ThreefoldReport,
};
pub use correlators::{phi, CIModel, Classification};
pub use error::{Error, Result};
pub use exec::Execution;
pub use laurent::LaurentPoly;
pub use mirror::{mirror_coefficients, verify_mirror_identity, MirrorData};
pub use rational::Rational;
pub use relative::RelativeModel;
pub use ring::{CohClass, RingSpec};
pub use series::{QSeries, Series};
