//! The cover order on vectors, the family `F` of difference and signed unit
//! vectors, and the decomposition calculus used to bound determinants.
//!
//! `x ⪯ y` means `x_i y_i >= 0` and `|x_i| <= |y_i|` for every coordinate.
//! `F` holds `p_(i,j) = e_j - e_i` for `i != j` together with `+e_i` and `-e_i`.

use std::fmt;
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::polytope::det_exact;
use crate::spectrum::ExactScalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("cover precondition does not hold")]
    NotCovered,
    #[error("vector is not covered by any element of F")]
    NotFCovered,
    #[error("vector is zero")]
    ZeroVector,
    #[error("matrix is not square")]
    NotSquare,
    #[error("row {0} is not covered by a sum of two elements of F")]
    HypothesisViolated(usize),
    #[error("invalid F element {0:?} for dimension {1}")]
    InvalidElement(FTag, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedVector(pub Vec<ExactScalar>);

impl SignedVector {
    pub fn zeros(n: usize) -> Self {
        SignedVector(vec![BigRational::zero(); n])
    }

    pub fn from_integers(values: &[i64]) -> Self {
        SignedVector(
            values
                .iter()
                .map(|&v| BigRational::from_integer(v.into()))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn sup_norm(&self) -> ExactScalar {
        self.0
            .iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn scaled(&self, factor: &ExactScalar) -> SignedVector {
        SignedVector(self.0.iter().map(|v| v * factor).collect())
    }
}

impl Add for &SignedVector {
    type Output = SignedVector;

    fn add(self, rhs: &SignedVector) -> SignedVector {
        assert_eq!(self.len(), rhs.len(), "vector lengths differ");
        SignedVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &SignedVector {
    type Output = SignedVector;

    fn sub(self, rhs: &SignedVector) -> SignedVector {
        assert_eq!(self.len(), rhs.len(), "vector lengths differ");
        SignedVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for SignedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (idx, v) in self.0.iter().enumerate() {
            if idx > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// `x ⪯ y`.
pub fn is_covered_by(x: &SignedVector, y: &SignedVector) -> Result<bool, CoverError> {
    if x.len() != y.len() {
        return Err(CoverError::DimensionMismatch(x.len(), y.len()));
    }
    Ok(x.0.iter().zip(&y.0).all(|(a, b)| covers_scalar(a, b)))
}

fn covers_scalar(x: &ExactScalar, y: &ExactScalar) -> bool {
    !(x * y).is_negative() && x.abs() <= y.abs()
}

/// Cover test against an integer vector, used on realized `F` sums.
fn covered_by_ints(x: &SignedVector, s: &[i64]) -> bool {
    x.0.iter().zip(s).all(|(a, &b)| {
        if a.is_zero() {
            return true;
        }
        let b = BigRational::from_integer(b.into());
        covers_scalar(a, &b)
    })
}

/// Sign with `sgn(0) = 0`.
pub fn sgn(a: &ExactScalar) -> i32 {
    if a.is_positive() {
        1
    } else if a.is_negative() {
        -1
    } else {
        0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FTag {
    /// `-1` at `i`, `+1` at `j`, 1-based, `i != j`.
    P(usize, usize),
    PlusUnit(usize),
    MinusUnit(usize),
}

impl fmt::Display for FTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FTag::P(i, j) => write!(f, "p({i},{j})"),
            FTag::PlusUnit(i) => write!(f, "+e{i}"),
            FTag::MinusUnit(i) => write!(f, "-e{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FElement {
    tag: FTag,
    vector: Vec<i64>,
}

impl FElement {
    pub fn new(tag: FTag, n: usize) -> Result<Self, CoverError> {
        let in_range = |i: usize| (1..=n).contains(&i);
        let mut vector = vec![0i64; n];
        match tag {
            FTag::P(i, j) if in_range(i) && in_range(j) && i != j => {
                vector[i - 1] = -1;
                vector[j - 1] = 1;
            }
            FTag::PlusUnit(i) if in_range(i) => vector[i - 1] = 1,
            FTag::MinusUnit(i) if in_range(i) => vector[i - 1] = -1,
            _ => return Err(CoverError::InvalidElement(tag, n)),
        }
        Ok(FElement { tag, vector })
    }

    pub fn tag(&self) -> FTag {
        self.tag
    }

    pub fn vector(&self) -> &[i64] {
        &self.vector
    }

    pub fn n(&self) -> usize {
        self.vector.len()
    }

    pub fn to_signed(&self) -> SignedVector {
        SignedVector::from_integers(&self.vector)
    }

    /// Identifies an integer vector with its element of `F`, if it is one.
    pub fn from_vector(v: &[i64]) -> Option<FElement> {
        let n = v.len();
        let nonzero: Vec<usize> = (0..n).filter(|&i| v[i] != 0).collect();
        let tag = match nonzero.as_slice() {
            [i] if v[*i] == 1 => FTag::PlusUnit(i + 1),
            [i] if v[*i] == -1 => FTag::MinusUnit(i + 1),
            [a, b] if v[*a] == -1 && v[*b] == 1 => FTag::P(a + 1, b + 1),
            [a, b] if v[*a] == 1 && v[*b] == -1 => FTag::P(b + 1, a + 1),
            _ => return None,
        };
        FElement::new(tag, n).ok()
    }
}

impl fmt::Display for FElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.tag.fmt(f)
    }
}

/// Tags of `F` in canonical order: `+e_i`, then `-e_i`, then `p_(i,j)` lexicographically.
fn tags(n: usize) -> impl Iterator<Item = FTag> {
    let plus = (1..=n).map(FTag::PlusUnit);
    let minus = (1..=n).map(FTag::MinusUnit);
    let pairs =
        (1..=n).flat_map(move |i| (1..=n).filter(move |&j| j != i).map(move |j| FTag::P(i, j)));
    plus.chain(minus).chain(pairs)
}

/// Coefficient of the realized vector of `tag` at 0-based `idx`.
fn coefficient(tag: FTag, idx: usize) -> i64 {
    let at = idx + 1;
    match tag {
        FTag::P(i, _) if i == at => -1,
        FTag::P(_, j) if j == at => 1,
        FTag::PlusUnit(i) if i == at => 1,
        FTag::MinusUnit(i) if i == at => -1,
        _ => 0,
    }
}

/// Per coordinate, the smallest signed integer magnitude covering `x_i`
/// (`sgn(x_i) * ceil(|x_i|)`), or `None` when some entry exceeds 2 in size and
/// no sum of two elements of `F` can reach it.
fn demand(x: &SignedVector) -> Option<Vec<i64>> {
    x.0.iter()
        .map(|v| {
            let c = v.abs().ceil().to_integer();
            (c <= BigInt::from(2)).then(|| c.to_i64().expect("at most 2") * i64::from(sgn(v)))
        })
        .collect()
}

fn meets(need: i64, have: i64) -> bool {
    need == 0 || (need.signum() == have.signum() && have.abs() >= need.abs())
}

/// All of `F` in canonical order: `+e_i`, then `-e_i`, then `p_(i,j)` lexicographically.
pub fn family(n: usize) -> Vec<FElement> {
    tags(n)
        .map(|t| FElement::new(t, n).expect("valid"))
        .collect()
}

/// First element of `F` covering `x`.
pub fn f_witness(x: &SignedVector) -> Option<FElement> {
    let n = x.len();
    let need = demand(x)?;
    tags(n)
        .find(|&t| {
            need.iter()
                .enumerate()
                .all(|(i, &d)| meets(d, coefficient(t, i)))
        })
        .map(|t| FElement::new(t, n).expect("valid"))
}

pub fn is_f_covered(x: &SignedVector) -> bool {
    f_witness(x).is_some()
}

/// First pair `(f1, f2)` of `F × F` (canonical order, `f1` outer) whose sum
/// covers `x`. The search is exhaustive; elements whose sign clashes with a
/// nonzero coordinate of `x` are skipped up front because no partner can
/// repair a clash while keeping the magnitude.
pub fn ff_witness(x: &SignedVector) -> Option<(FElement, FElement)> {
    let n = x.len();
    let need = demand(x)?;
    let compatible: Vec<FTag> = tags(n)
        .filter(|&t| {
            need.iter()
                .enumerate()
                .all(|(i, &d)| d == 0 || coefficient(t, i) * d >= 0)
        })
        .collect();
    for &f1 in &compatible {
        for &f2 in &compatible {
            let hit = need
                .iter()
                .enumerate()
                .all(|(i, &d)| meets(d, coefficient(f1, i) + coefficient(f2, i)));
            if hit {
                return Some((
                    FElement::new(f1, n).expect("valid"),
                    FElement::new(f2, n).expect("valid"),
                ));
            }
        }
    }
    None
}

pub fn is_ff_covered(x: &SignedVector) -> bool {
    ff_witness(x).is_some()
}

/// Splits `x ⪯ u + v` into `x_u ⪯ u` and `x_v ⪯ v` with `x_u + x_v = x`.
pub fn decompose(
    x: &SignedVector,
    u: &SignedVector,
    v: &SignedVector,
) -> Result<(SignedVector, SignedVector), CoverError> {
    if u.len() != v.len() {
        return Err(CoverError::DimensionMismatch(u.len(), v.len()));
    }
    if !is_covered_by(x, &(u + v))? {
        return Err(CoverError::NotCovered);
    }
    let xu = SignedVector(
        x.0.iter()
            .zip(&u.0)
            .zip(&v.0)
            .map(|((xi, ui), vi)| {
                if (ui * vi).is_negative() {
                    if (ui * xi).is_positive() {
                        xi.clone()
                    } else {
                        BigRational::zero()
                    }
                } else {
                    let mag = std::cmp::min(ui.abs(), xi.abs());
                    mag * BigInt::from(sgn(ui))
                }
            })
            .collect(),
    );
    let xv = x - &xu;
    debug_assert!(is_covered_by(&xu, u)? && is_covered_by(&xv, v)?);
    Ok((xu, xv))
}

/// An element of `F` with some coordinates set to zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Refined {
    pub base: FElement,
    pub zeroed: Vec<bool>,
}

impl Refined {
    pub fn vector(&self) -> Vec<i64> {
        self.base
            .vector()
            .iter()
            .zip(&self.zeroed)
            .map(|(&c, &z)| if z { 0 } else { c })
            .collect()
    }

    /// The refined vector as an element of `F`, or `None` when it is zero.
    pub fn as_element(&self) -> Option<FElement> {
        FElement::from_vector(&self.vector())
    }
}

/// Coordinatewise refinement of `p1`, `p2` so that `x + y ⪯ q1 + q2`.
pub fn refine(
    x: &SignedVector,
    y: &SignedVector,
    p1: &FElement,
    p2: &FElement,
) -> Result<(Refined, Refined), CoverError> {
    let n = x.len();
    for len in [y.len(), p1.n(), p2.n()] {
        if len != n {
            return Err(CoverError::DimensionMismatch(n, len));
        }
    }
    if !covered_by_ints(x, p1.vector()) || !covered_by_ints(y, p2.vector()) {
        return Err(CoverError::NotCovered);
    }
    let z = x + y;
    let mut zero1 = vec![false; n];
    let mut zero2 = vec![false; n];
    for i in 0..n {
        let (a, b) = (p1.vector[i], p2.vector[i]);
        if a * b >= 0 {
            continue;
        }
        if a as i32 * sgn(&z.0[i]) >= 0 {
            zero2[i] = true;
        } else {
            zero1[i] = true;
        }
    }
    Ok((
        Refined {
            base: p1.clone(),
            zeroed: zero1,
        },
        Refined {
            base: p2.clone(),
            zeroed: zero2,
        },
    ))
}

/// Two elements of `F` whose sum covers `x + y`, given `x ⪯ F` and `y ⪯ F`.
///
/// Without a sign clash between the witnesses they are returned as they are.
/// With a clash the refined sum is rewritten: one `+1` and two `-1` entries
/// become `p(b,a) - e_c`, two `+1` and one `-1` become `p(c,a) + e_b`, where
/// the `p` takes the first entry of the repeated sign. Sums with a single
/// nonzero entry double that unit.
pub fn sum_cover(x: &SignedVector, y: &SignedVector) -> Result<(FElement, FElement), CoverError> {
    if x.len() != y.len() {
        return Err(CoverError::DimensionMismatch(x.len(), y.len()));
    }
    let n = x.len();
    let p1 = f_witness(x).ok_or(CoverError::NotFCovered)?;
    let p2 = f_witness(y).ok_or(CoverError::NotFCovered)?;
    let clash = p1.vector.iter().zip(&p2.vector).any(|(a, b)| a * b < 0);
    let pair = if !clash {
        (p1, p2)
    } else {
        let (q1, q2) = refine(x, y, &p1, &p2)?;
        let s: Vec<i64> = q1
            .vector()
            .iter()
            .zip(q2.vector())
            .map(|(a, b)| a + b)
            .collect();
        rewrite_pair(&s, n).ok_or(CoverError::NotFCovered)?
    };
    let total: Vec<i64> = pair
        .0
        .vector
        .iter()
        .zip(&pair.1.vector)
        .map(|(a, b)| a + b)
        .collect();
    debug_assert!(covered_by_ints(&(x + y), &total));
    Ok(pair)
}

fn rewrite_pair(s: &[i64], n: usize) -> Option<(FElement, FElement)> {
    let plus: Vec<usize> = (0..n).filter(|&i| s[i] > 0).collect();
    let minus: Vec<usize> = (0..n).filter(|&i| s[i] < 0).collect();
    let el = |tag| FElement::new(tag, n).ok();
    match (plus.as_slice(), minus.as_slice()) {
        ([a], [b, c]) if s[*a] == 1 && s[*b] == -1 && s[*c] == -1 => {
            Some((el(FTag::P(b + 1, a + 1))?, el(FTag::MinusUnit(c + 1))?))
        }
        ([a, b], [c]) if s[*a] == 1 && s[*b] == 1 && s[*c] == -1 => {
            Some((el(FTag::P(c + 1, a + 1))?, el(FTag::PlusUnit(b + 1))?))
        }
        _ => {
            // Remaining shapes: sums of at most one unit per sign and each
            // coordinate at most 1 in magnitude, or a doubled coordinate.
            let nonzero: Vec<usize> = (0..n).filter(|&i| s[i] != 0).collect();
            match nonzero.as_slice() {
                [i] if s[*i].abs() <= 2 => {
                    let tag = if s[*i] > 0 {
                        FTag::PlusUnit(i + 1)
                    } else {
                        FTag::MinusUnit(i + 1)
                    };
                    Some((el(tag)?, el(tag)?))
                }
                [a, b] if s[*a].abs() == 1 && s[*b].abs() == 1 && s[*a] != s[*b] => {
                    let f = FElement::from_vector(s)?;
                    Some((f.clone(), f))
                }
                _ => {
                    let target = SignedVector::from_integers(s);
                    ff_witness(&target)
                }
            }
        }
    }
}

/// `y - (y_j / x_j) x` where `j` is the first index attaining `‖x‖∞`.
pub fn row_reduce_step(x: &SignedVector, y: &SignedVector) -> Result<SignedVector, CoverError> {
    if x.len() != y.len() {
        return Err(CoverError::DimensionMismatch(x.len(), y.len()));
    }
    if x.is_zero() {
        return Err(CoverError::ZeroVector);
    }
    if !is_f_covered(x) || !is_f_covered(y) {
        return Err(CoverError::NotFCovered);
    }
    let norm = x.sup_norm();
    let j =
        x.0.iter()
            .position(|v| v.abs() == norm)
            .expect("nonzero vector has a max");
    let ratio = &y.0[j] / &x.0[j];
    let out = y - &x.scaled(&ratio);
    if !is_f_covered(&out) {
        return Err(CoverError::NotFCovered);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetBoundCheck {
    /// Rows covered by a single element of `F`.
    pub m: usize,
    /// `2^(n - m)`.
    pub bound: BigInt,
    pub det_abs: ExactScalar,
    pub holds: bool,
}

/// Checks `|det M| <= 2^(n-m)` for a matrix whose rows are all covered by
/// `F + F`, `m` of them by `F` alone.
pub fn check_det_bound(m: &[Vec<ExactScalar>]) -> Result<DetBoundCheck, CoverError> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(CoverError::NotSquare);
    }
    let mut single = 0;
    for (idx, row) in m.iter().enumerate() {
        let row = SignedVector(row.clone());
        if is_f_covered(&row) {
            single += 1;
        } else if !is_ff_covered(&row) {
            return Err(CoverError::HypothesisViolated(idx));
        }
    }
    let det_abs = rational_det(m).abs();
    let bound = BigInt::one() << (n - single);
    let holds = det_abs <= BigRational::from_integer(bound.clone());
    Ok(DetBoundCheck {
        m: single,
        bound,
        det_abs,
        holds,
    })
}

/// Determinant of a rational matrix: clear each row's denominators, take the
/// integer determinant, divide back.
pub fn rational_det(m: &[Vec<ExactScalar>]) -> ExactScalar {
    let mut scale = BigInt::one();
    let ints: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            scale *= &l;
            row.iter().map(|v| (v * &l).to_integer()).collect()
        })
        .collect();
    let det = det_exact(&ints).expect("square by construction");
    BigRational::new(det, scale)
}
