//! Exact canonicalization of finite metric spectra.
//!
//! A spectrum `0 < x_1 < ... < x_n` is classified by which triangle
//! inequalities `x_i + x_j >= x_k` it satisfies. This crate computes that
//! classification exactly, lifts any spectrum to an equivalent integral one
//! with `y_n <= 2^n` through a vertex of its constraint polyhedron, stretches
//! it into the band `2^i <= y_i <= 2^(n+1)`, and enumerates every class for
//! small `n` to check the tighter box `2^i - 1 <= t_i <= 2^n - 1`.

pub mod canon;
pub mod cover;
pub mod par;
pub mod polytope;
pub mod search;
pub mod spectrum;

pub use canon::{
    canonicalize, canonicalize_batch, conant_band, integral_representative,
    rational_representative, BoundsChecked, CanonError, CanonReport,
};
pub use par::Exec;
pub use spectrum::{
    equivalent, four_value_check, is_metric_triple, monotone_consistent, parse_spectrum, profile,
    scale, CounterexampleReport, ExactScalar, FourValue, IntegralSpectrum, Spectrum, SpectrumError,
    TriangleProfile, TripleIndex,
};

/// Version string embedded in emitted documents.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
