//! # flagvertex
//!
//! Exact computation of K-theoretic vertex functions for cotangent bundles of
//! type-A partial flag varieties, together with the difference and spin-chain
//! operators they are eigenfunctions of.
//!
//! * [`kernel`]: exact rationals, q-Pochhammer symbols, φ-products, series.
//! * [`quiver`]: flag data, torus fixed points, degree assignments.
//! * [`vertex`]: vertex coefficients and series, eigenfunction candidates,
//!   sign-convention calibration and the `ℏ → ∞` limit.
//! * [`trs`]: trigonometric Ruijsenaars–Schneider operators and identity checks.
//! * [`xxz`]: dense exact tensor algebra for the XXZ chain and qKZ operators.
//! * [`bethe`]: multiprecision Bethe ansatz solver and spectral cross-check.
//! * [`report`]: serializable PASS/FAIL reports.

pub mod bethe;
pub mod error;
pub mod kernel;
pub mod quiver;
pub mod report;
pub mod trs;
pub mod vertex;
pub mod xxz;

pub use error::{Error, Result};
pub use kernel::{ParamPoint, PhiProduct, TruncatedSeries, Q};
pub use quiver::{DegreeAssignment, FixedPointChain, FlagData};
pub use report::{Report, Status};
pub use vertex::{CocycleConvention, EigenfunctionCandidate, Insertion, SeriesConvention, VertexSeries};

/// Library version embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
