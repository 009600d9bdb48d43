//! Spectrum → polyhedron vertex → integral lift → band.
//!
//! Every bound the construction promises is re-checked on the actual output,
//! and equivalence is always verified by comparing profiles.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;
use thiserror::Error;

use crate::par::Exec;
use crate::polytope::{
    build_system, cramer_solve, feasible_point, purify_to_vertex, ConstraintSystem, PolytopeError,
    RowKind, VertexCertificate,
};
use crate::spectrum::{profile, IntegralSpectrum, Spectrum, SpectrumError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonError {
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error("bound violated: {0}")]
    BoundViolation(String),
    #[error("equivalence violated: {0}")]
    EquivalenceViolation(String),
    #[error("lifted vertex is not integral: {0}")]
    NonIntegral(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundsChecked {
    /// `y_n <= 2^n` on the integral lift.
    pub upper: bool,
    /// `2^(n-i+1) y_i >= y_n` for all `i < n`.
    pub internal: bool,
    /// `2^i <= y_i <= 2^(n+1)` on the band, with `y_n = 2^(n+1)`.
    pub band: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonReport {
    pub input: Spectrum,
    pub vertex: VertexCertificate,
    pub basis_kinds: Vec<RowKind>,
    pub lifted: IntegralSpectrum,
    pub conant_band: IntegralSpectrum,
    pub bounds_checked: BoundsChecked,
}

#[derive(Serialize)]
struct VertexDoc {
    point: Vec<String>,
    basis: Vec<String>,
    basis_det: String,
}

#[derive(Serialize)]
struct CanonDoc<'a> {
    input: String,
    vertex: VertexDoc,
    lifted: &'a IntegralSpectrum,
    conant_band: &'a IntegralSpectrum,
    bounds_checked: &'a BoundsChecked,
}

impl Serialize for CanonReport {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        CanonDoc {
            input: self.input.to_string(),
            vertex: VertexDoc {
                point: self
                    .vertex
                    .point
                    .coords
                    .iter()
                    .map(ToString::to_string)
                    .collect(),
                basis: self.basis_kinds.iter().map(ToString::to_string).collect(),
                basis_det: self.vertex.basis_det.to_string(),
            },
            lifted: &self.lifted,
            conant_band: &self.conant_band,
            bounds_checked: &self.bounds_checked,
        }
        .serialize(serializer)
    }
}

struct Lift {
    system: ConstraintSystem,
    vertex: VertexCertificate,
    lifted: IntegralSpectrum,
}

fn pow2(e: usize) -> BigInt {
    BigInt::one() << e
}

fn lift(x: &Spectrum) -> Result<Lift, CanonError> {
    let n = x.len();
    let target = profile(x);
    let system = build_system(&target)?;
    let start = feasible_point(x)?;
    let vertex = purify_to_vertex(&system, &start)?;
    vertex.verify(&system)?;

    let basis_rows = system.submatrix(&vertex.basis);
    let by_cramer = cramer_solve(&basis_rows, &system.rhs_of(&vertex.basis))?;
    if by_cramer != vertex.point {
        return Err(CanonError::NonIntegral(format!(
            "Cramer solution {by_cramer} differs from vertex {}",
            vertex.point
        )));
    }

    let v = &vertex.point.coords;
    let as_spectrum = Spectrum::new(v.clone())
        .map_err(|e| CanonError::EquivalenceViolation(format!("vertex is not a spectrum: {e}")))?;
    if profile(&as_spectrum) != target {
        return Err(CanonError::EquivalenceViolation(format!(
            "vertex {} has a different profile than the input",
            vertex.point
        )));
    }
    if let Some(i) = internal_violation(v) {
        return Err(CanonError::BoundViolation(format!(
            "vertex fails 2^(n-i+1) v_i >= v_n at i = {}",
            i + 1
        )));
    }

    let det = BigRational::from_integer(vertex.basis_det.abs());
    let mut entries = Vec::with_capacity(n);
    for c in v {
        let scaled = c * &det;
        if !scaled.is_integer() {
            return Err(CanonError::NonIntegral(format!("{scaled}")));
        }
        entries.push(scaled.to_integer());
    }
    let lifted = IntegralSpectrum::new(entries)?;
    if profile(&lifted.to_spectrum()) != target {
        return Err(CanonError::EquivalenceViolation(format!(
            "lift {lifted} has a different profile than the input"
        )));
    }
    if lifted.last() > &pow2(n) {
        return Err(CanonError::BoundViolation(format!(
            "lift {lifted} exceeds 2^{n} in its last entry"
        )));
    }
    Ok(Lift {
        system,
        vertex,
        lifted,
    })
}

/// First 0-based `i < n-1` with `2^(n-i) v_i < v_n`, i.e. the 1-based
/// inequality `2^(n-i+1) v_i >= v_n` failing.
fn internal_violation(v: &[BigRational]) -> Option<usize> {
    let n = v.len();
    let last = &v[n - 1];
    (0..n.saturating_sub(1)).find(|&i| &v[i] * BigRational::from_integer(pow2(n - i)) < *last)
}

/// The rational vertex reached from `x`'s feasible point.
pub fn rational_representative(x: &Spectrum) -> Result<Spectrum, CanonError> {
    let lift = lift(x)?;
    Ok(Spectrum::new(lift.vertex.point.coords)?)
}

/// `|det(basis)|` times the vertex: an equivalent integral spectrum with
/// `y_n <= 2^n` and `2^(n-i+1) y_i >= y_n`.
pub fn integral_representative(x: &Spectrum) -> Result<IntegralSpectrum, CanonError> {
    let lifted = lift(x)?.lifted;
    if let Some(i) = internal_violation(&lifted.to_spectrum().into_entries()) {
        return Err(CanonError::BoundViolation(format!(
            "lift {lifted} fails the internal bound at i = {}",
            i + 1
        )));
    }
    Ok(lifted)
}

/// `y_i = ceil(2^(n+1) z_i / z_n)` for the integral lift `z`.
pub fn conant_band(x: &Spectrum) -> Result<IntegralSpectrum, CanonError> {
    let z = integral_representative(x)?;
    band_from_lift(x, &z)
}

fn band_from_lift(x: &Spectrum, z: &IntegralSpectrum) -> Result<IntegralSpectrum, CanonError> {
    let n = z.len();
    let top = pow2(n + 1);
    let zn = z.last();
    let entries: Vec<BigInt> = z
        .entries()
        .iter()
        .map(|zi| (&top * zi).div_ceil(zn))
        .collect();
    let band = IntegralSpectrum::new(entries)
        .map_err(|e| CanonError::EquivalenceViolation(format!("band is not a spectrum: {e}")))?;
    if band.last() != &top {
        return Err(CanonError::BoundViolation(format!(
            "band {band} does not end at 2^{}",
            n + 1
        )));
    }
    if let Some(i) = (0..n).find(|&i| band.entries()[i] < pow2(i + 1) || band.entries()[i] > top) {
        return Err(CanonError::BoundViolation(format!(
            "band {band} leaves [2^{}, 2^{}] at i = {}",
            i + 1,
            n + 1,
            i + 1
        )));
    }
    if profile(&band.to_spectrum()) != profile(x) {
        return Err(CanonError::EquivalenceViolation(format!(
            "band {band} has a different profile than the input"
        )));
    }
    Ok(band)
}

pub fn canonicalize(x: &Spectrum) -> Result<CanonReport, CanonError> {
    let Lift {
        system,
        vertex,
        lifted,
    } = lift(x)?;
    let n = x.len();
    let upper = lifted.last() <= &pow2(n);
    let internal = internal_violation(&lifted.to_spectrum().into_entries()).is_none();
    if !upper || !internal {
        return Err(CanonError::BoundViolation(format!(
            "lift {lifted} fails its bounds"
        )));
    }
    let band = band_from_lift(x, &lifted)?;
    let basis_kinds = vertex.basis.iter().map(|&r| system.row(r).kind).collect();
    Ok(CanonReport {
        input: x.clone(),
        vertex,
        basis_kinds,
        lifted,
        conant_band: band,
        bounds_checked: BoundsChecked {
            upper,
            internal,
            band: true,
        },
    })
}

/// Canonicalizes independent spectra, in input order.
pub fn canonicalize_batch(xs: &[Spectrum], exec: &Exec) -> Vec<Result<CanonReport, CanonError>> {
    exec.map(xs, canonicalize)
}
