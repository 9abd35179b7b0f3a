//! Exact arithmetic for degree-2 Hermitian modular forms over imaginary
//! quadratic fields.
//!
//! The crate computes truncated Fourier expansions of Eisenstein-type series
//! (Krieg's explicit coefficient formula), lattice theta series (by exact
//! short-vector enumeration), theta constants over the Gaussian field, and the
//! generators of the graded ring of symmetric modular forms for K = Q(i).
//! On top of those it applies the theta operator and decides mod-p congruences
//! with Sturm-type trace bounds, so congruence statements come back either
//! proved (all coefficients up to the Sturm bound vanish mod p) or refuted
//! with an explicit witness index.
//!
//! Everything is exact: indices are integer coordinate tuples in the lattice
//! of half-integral Hermitian 2x2 matrices, coefficients are arbitrary
//! precision rationals, and mod-p statements require p-integrality.
//!
//! Entry points:
//! - [`number_theory::QuadField`] — field data (discriminant, class number,
//!   unit count) and the Kronecker character with its q-factor decomposition.
//! - [`krieg::krieg_expansion`] — the Eisenstein-type series `F_{k,K}`.
//! - [`theta::theta_series`] — theta series of an even Hermitian Gram matrix.
//! - [`graded_ring::build_generators`] — the five generators over Q(i).
//! - [`congruence::run_named_checks`] — the full verification registry.
//!
//! The `examples/` directory has one runnable program per capability; the
//! `hmf2` binary exposes the same operations as subcommands.

pub mod cache;
pub mod congruence;
pub mod graded_ring;
pub mod krieg;
pub mod lambda2;
pub mod number_theory;
pub mod qseries;
pub mod tables;
pub mod theta;

pub use lambda2::{HermIndex, SiegelIndex};
pub use number_theory::{QuadField, Rat};
pub use qseries::{EllipticQExp, FourierExpansion};
