//! The spectral polyhedron `{x : A x >= b}` of a triangle profile, a feasible
//! starting point, purification to a vertex, and exact integer determinants.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::spectrum::{
    monotone_consistent, profile, triples, ExactScalar, Spectrum, TriangleProfile, TripleIndex,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("profile is not monotone consistent, so no spectrum realizes it")]
    InconsistentProfile,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("internal error: scaled spectrum is not in its own polyhedron")]
    InternalInfeasibility,
    #[error("start point violates row {0}")]
    NotFeasible(usize),
    #[error("internal error: unbounded direction from a pointed polyhedron")]
    UnboundedDirection,
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("certificate rejected: {0}")]
    InvalidCertificate(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowKind {
    /// `x_i + x_j - x_k >= 0`
    TriplePos(TripleIndex),
    /// `-(x_i + x_j - x_k) >= 1`
    TripleNeg(TripleIndex),
    /// `x_j - x_i >= 1`, `i < j`
    Gap(usize, usize),
    /// `x_i >= 1`
    Unit(usize),
}

impl fmt::Display for RowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowKind::TriplePos(t) => write!(f, "pos{t}"),
            RowKind::TripleNeg(t) => write!(f, "neg{t}"),
            RowKind::Gap(i, j) => write!(f, "gap({i},{j})"),
            RowKind::Unit(i) => write!(f, "unit({i})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConstraintRow {
    pub kind: RowKind,
    pub coefficients: Vec<i64>,
    pub rhs: i64,
}

impl ConstraintRow {
    fn new(kind: RowKind, n: usize) -> Self {
        let mut coefficients = vec![0i64; n];
        let rhs = match kind {
            RowKind::TriplePos(t) => {
                coefficients[t.i - 1] += 1;
                coefficients[t.j - 1] += 1;
                coefficients[t.k - 1] -= 1;
                0
            }
            RowKind::TripleNeg(t) => {
                coefficients[t.i - 1] -= 1;
                coefficients[t.j - 1] -= 1;
                coefficients[t.k - 1] += 1;
                1
            }
            RowKind::Gap(i, j) => {
                coefficients[i - 1] = -1;
                coefficients[j - 1] = 1;
                1
            }
            RowKind::Unit(i) => {
                coefficients[i - 1] = 1;
                1
            }
        };
        ConstraintRow {
            kind,
            coefficients,
            rhs,
        }
    }

    pub fn dot(&self, x: &[ExactScalar]) -> ExactScalar {
        self.coefficients
            .iter()
            .zip(x)
            .filter(|(c, _)| **c != 0)
            .fold(BigRational::zero(), |acc, (&c, v)| {
                acc + v * BigInt::from(c)
            })
    }

    /// `A_r x - b_r`; non-negative exactly when the row holds.
    pub fn slack(&self, x: &[ExactScalar]) -> ExactScalar {
        self.dot(x) - BigRational::from_integer(self.rhs.into())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConstraintSystem {
    n: usize,
    rows: Vec<ConstraintRow>,
}

/// Rows in fixed order: every triple (lexicographic), every gap `i < j`
/// (lexicographic), every unit (ascending).
pub fn build_system(p: &TriangleProfile) -> Result<ConstraintSystem, PolytopeError> {
    if !monotone_consistent(p) {
        return Err(PolytopeError::InconsistentProfile);
    }
    let n = p.n();
    let mut rows = Vec::with_capacity(p.members().len() + n * (n + 1) / 2);
    for (t, &member) in triples(n).zip(p.members()) {
        let kind = if member {
            RowKind::TriplePos(t)
        } else {
            RowKind::TripleNeg(t)
        };
        rows.push(ConstraintRow::new(kind, n));
    }
    for i in 1..=n {
        for j in (i + 1)..=n {
            rows.push(ConstraintRow::new(RowKind::Gap(i, j), n));
        }
    }
    for i in 1..=n {
        rows.push(ConstraintRow::new(RowKind::Unit(i), n));
    }
    Ok(ConstraintSystem { n, rows })
}

impl ConstraintSystem {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[ConstraintRow] {
        &self.rows
    }

    pub fn row(&self, index: usize) -> &ConstraintRow {
        &self.rows[index]
    }

    /// Integer submatrix made of the given rows, in the given order.
    pub fn submatrix(&self, indices: &[usize]) -> Vec<Vec<BigInt>> {
        indices
            .iter()
            .map(|&r| {
                self.rows[r]
                    .coefficients
                    .iter()
                    .map(|&c| BigInt::from(c))
                    .collect()
            })
            .collect()
    }

    pub fn rhs_of(&self, indices: &[usize]) -> Vec<BigInt> {
        indices
            .iter()
            .map(|&r| BigInt::from(self.rows[r].rhs))
            .collect()
    }

    /// Debug dump: `kind,c_1,...,c_n,rhs` per line. Not a stable format.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("kind");
        for i in 1..=self.n {
            out.push_str(&format!(",x{i}"));
        }
        out.push_str(",rhs\n");
        for row in &self.rows {
            out.push('"');
            out.push_str(&row.kind.to_string());
            out.push('"');
            for c in &row.coefficients {
                out.push_str(&format!(",{c}"));
            }
            out.push_str(&format!(",{}\n", row.rhs));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalPoint {
    pub coords: Vec<ExactScalar>,
}

impl RationalPoint {
    pub fn new(coords: Vec<ExactScalar>) -> Self {
        RationalPoint { coords }
    }

    pub fn from_integers(values: &[i64]) -> Self {
        RationalPoint {
            coords: values
                .iter()
                .map(|&v| BigRational::from_integer(v.into()))
                .collect(),
        }
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (idx, c) in self.coords.iter().enumerate() {
            if idx > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

pub fn contains(sys: &ConstraintSystem, pt: &RationalPoint) -> Result<bool, PolytopeError> {
    check_dim(sys.n, pt.coords.len())?;
    Ok(first_violated(sys, &pt.coords).is_none())
}

fn first_violated(sys: &ConstraintSystem, x: &[ExactScalar]) -> Option<usize> {
    sys.rows.iter().position(|r| r.slack(x).is_negative())
}

fn check_dim(expected: usize, got: usize) -> Result<(), PolytopeError> {
    if expected == got {
        Ok(())
    } else {
        Err(PolytopeError::DimensionMismatch { expected, got })
    }
}

/// `alpha * x` with `alpha = max(1, max_r 1/(A_r x))` over rows with `b_r = 1`.
pub fn feasible_point(x: &Spectrum) -> Result<RationalPoint, PolytopeError> {
    let sys = build_system(&profile(x))?;
    let mut alpha = BigRational::one();
    for row in sys.rows.iter().filter(|r| r.rhs == 1) {
        let s = row.dot(x.entries());
        if !s.is_positive() {
            return Err(PolytopeError::InternalInfeasibility);
        }
        let candidate = s.recip();
        if candidate > alpha {
            alpha = candidate;
        }
    }
    let point = RationalPoint::new(x.entries().iter().map(|e| e * &alpha).collect());
    if first_violated(&sys, &point.coords).is_some() {
        return Err(PolytopeError::InternalInfeasibility);
    }
    Ok(point)
}

/// A vertex together with `n` linearly independent rows that are tight at it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexCertificate {
    pub point: RationalPoint,
    pub basis: Vec<usize>,
    pub basis_det: BigInt,
}

impl VertexCertificate {
    /// Re-checks everything the certificate claims from scratch.
    pub fn verify(&self, sys: &ConstraintSystem) -> Result<(), PolytopeError> {
        let bad = |msg: String| Err(PolytopeError::InvalidCertificate(msg));
        check_dim(sys.n, self.point.coords.len())?;
        if self.basis.len() != sys.n {
            return bad(format!(
                "basis has {} rows, expected {}",
                self.basis.len(),
                sys.n
            ));
        }
        if let Some(&r) = self.basis.iter().find(|&&r| r >= sys.rows.len()) {
            return bad(format!("basis row {r} out of range"));
        }
        let det = det_exact(&sys.submatrix(&self.basis))?;
        if det.is_zero() {
            return bad("basis rows are linearly dependent".into());
        }
        if det != self.basis_det {
            return bad(format!(
                "basis determinant is {det}, certificate says {}",
                self.basis_det
            ));
        }
        if let Some(&r) = self
            .basis
            .iter()
            .find(|&&r| !sys.rows[r].slack(&self.point.coords).is_zero())
        {
            return bad(format!("basis row {r} ({}) is not tight", sys.rows[r].kind));
        }
        if let Some(r) = first_violated(sys, &self.point.coords) {
            return bad(format!("row {r} ({}) is violated", sys.rows[r].kind));
        }
        Ok(())
    }
}

/// Moves `start` along null-space directions of its active rows until the
/// active rows reach rank `n`.
///
/// Each move stops at the nearest row that becomes tight; that row is not in
/// the span of the current active rows, so the rank grows and at most `n`
/// moves are needed. The direction has a 1 at the smallest free column of the
/// reduced active system; `+d` is tried before `-d`.
pub fn purify_to_vertex(
    sys: &ConstraintSystem,
    start: &RationalPoint,
) -> Result<VertexCertificate, PolytopeError> {
    let n = sys.n;
    check_dim(n, start.coords.len())?;
    if let Some(r) = first_violated(sys, &start.coords) {
        return Err(PolytopeError::NotFeasible(r));
    }
    let mut x = start.coords.clone();
    loop {
        let active = active_rows(sys, &x);
        let reduced = Rref::of(
            active
                .iter()
                .map(|&r| to_rational_row(&sys.rows[r].coefficients))
                .collect(),
            n,
        );
        let Some(direction) = reduced.null_vector() else {
            break;
        };
        let step = ray_step(sys, &x, &direction)
            .map(|t| (t, false))
            .or_else(|| {
                let back: Vec<_> = direction.iter().map(|d| -d).collect();
                ray_step(sys, &x, &back).map(|t| (t, true))
            });
        let Some((t, backwards)) = step else {
            return Err(PolytopeError::UnboundedDirection);
        };
        for (xi, di) in x.iter_mut().zip(&direction) {
            let delta = di * &t;
            if backwards {
                *xi -= delta;
            } else {
                *xi += delta;
            }
        }
    }

    let active = active_rows(sys, &x);
    let mut echelon = Echelon::new(n);
    let basis: Vec<usize> = active
        .into_iter()
        .filter(|&r| echelon.insert(to_rational_row(&sys.rows[r].coefficients)))
        .collect();
    debug_assert_eq!(basis.len(), n);
    let basis_det = det_exact(&sys.submatrix(&basis))?;
    let cert = VertexCertificate {
        point: RationalPoint::new(x),
        basis,
        basis_det,
    };
    cert.verify(sys)?;
    Ok(cert)
}

fn active_rows(sys: &ConstraintSystem, x: &[ExactScalar]) -> Vec<usize> {
    (0..sys.rows.len())
        .filter(|&r| sys.rows[r].slack(x).is_zero())
        .collect()
}

/// Largest `t` such that `x + t d` stays feasible, if finite.
fn ray_step(sys: &ConstraintSystem, x: &[ExactScalar], d: &[ExactScalar]) -> Option<ExactScalar> {
    let mut best: Option<ExactScalar> = None;
    for row in &sys.rows {
        let rate = row.dot(d);
        if rate.is_negative() {
            let t = row.slack(x) / -rate;
            if best.as_ref().is_none_or(|b| &t < b) {
                best = Some(t);
            }
        }
    }
    best
}

fn to_rational_row(coefficients: &[i64]) -> Vec<ExactScalar> {
    coefficients
        .iter()
        .map(|&c| BigRational::from_integer(c.into()))
        .collect()
}

/// Reduced row echelon form over the rationals.
struct Rref {
    rows: Vec<Vec<ExactScalar>>,
    pivots: Vec<usize>,
    ncols: usize,
}

impl Rref {
    fn of(mut rows: Vec<Vec<ExactScalar>>, ncols: usize) -> Self {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..ncols {
            let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(rank, p);
            let inv = rows[rank][col].recip();
            for v in rows[rank].iter_mut() {
                *v *= &inv;
            }
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && !row[col].is_zero() {
                    let factor = row[col].clone();
                    for (v, pv) in row.iter_mut().zip(&pivot_row) {
                        *v -= &factor * pv;
                    }
                }
            }
            pivots.push(col);
            rank += 1;
        }
        rows.truncate(rank);
        Rref {
            rows,
            pivots,
            ncols,
        }
    }

    /// Null-space vector with a 1 at the smallest free column, or `None` at full rank.
    fn null_vector(&self) -> Option<Vec<ExactScalar>> {
        let free = (0..self.ncols).find(|c| !self.pivots.contains(c))?;
        let mut d = vec![BigRational::zero(); self.ncols];
        d[free] = BigRational::one();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            d[pc] = -row[free].clone();
        }
        Some(d)
    }
}

/// Incremental row echelon form used to pick independent rows greedily.
struct Echelon {
    rows: Vec<(usize, Vec<ExactScalar>)>,
    ncols: usize,
}

impl Echelon {
    fn new(ncols: usize) -> Self {
        Echelon {
            rows: Vec::new(),
            ncols,
        }
    }

    /// Adds the row if it is independent of those already held.
    fn insert(&mut self, mut row: Vec<ExactScalar>) -> bool {
        if self.rows.len() == self.ncols {
            return false;
        }
        for (pc, prow) in &self.rows {
            if !row[*pc].is_zero() {
                let factor = &row[*pc] / &prow[*pc];
                for (v, pv) in row.iter_mut().zip(prow) {
                    *v -= &factor * pv;
                }
            }
        }
        match row.iter().position(|v| !v.is_zero()) {
            Some(pc) => {
                self.rows.push((pc, row));
                true
            }
            None => false,
        }
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination. A zero pivot is
/// replaced by the first row below it with a nonzero entry in that column.
pub fn det_exact(m: &[Vec<BigInt>]) -> Result<BigInt, PolytopeError> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(PolytopeError::NotSquare);
    }
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match ((k + 1)..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { -det } else { det })
}

/// Solves `B y = rhs` with `y_i = det(B_i) / det(B)`, where `B_i` has column
/// `i` replaced by `rhs`. The solution is checked by substitution.
pub fn cramer_solve(b: &[Vec<BigInt>], rhs: &[BigInt]) -> Result<RationalPoint, PolytopeError> {
    let n = b.len();
    if b.iter().any(|row| row.len() != n) {
        return Err(PolytopeError::NotSquare);
    }
    check_dim(n, rhs.len())?;
    let det = det_exact(b)?;
    if det.is_zero() {
        return Err(PolytopeError::SingularMatrix);
    }
    let mut coords = Vec::with_capacity(n);
    for col in 0..n {
        let replaced: Vec<Vec<BigInt>> = b
            .iter()
            .zip(rhs)
            .map(|(row, r)| {
                let mut row = row.clone();
                row[col] = r.clone();
                row
            })
            .collect();
        coords.push(BigRational::new(det_exact(&replaced)?, det.clone()));
    }
    for (row, r) in b.iter().zip(rhs) {
        let lhs = row
            .iter()
            .zip(&coords)
            .fold(BigRational::zero(), |acc, (c, y)| acc + y * c);
        if lhs != BigRational::from_integer(r.clone()) {
            return Err(PolytopeError::InvalidCertificate(
                "Cramer solution failed back-substitution".into(),
            ));
        }
    }
    Ok(RationalPoint::new(coords))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{rational, TriangleProfile};

    fn sys_of(text: &str) -> ConstraintSystem {
        build_system(&profile(&Spectrum::parse(text).unwrap())).unwrap()
    }

    fn rows_of(sys: &ConstraintSystem) -> Vec<(Vec<i64>, i64)> {
        sys.rows()
            .iter()
            .map(|r| (r.coefficients.clone(), r.rhs))
            .collect()
    }

    fn ints(m: &[&[i64]]) -> Vec<Vec<BigInt>> {
        m.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    #[test]
    fn build_system_examples() {
        assert_eq!(
            rows_of(&sys_of("1,2")),
            vec![
                (vec![2, -1], 0),
                (vec![-1, 1], 1),
                (vec![1, 0], 1),
                (vec![0, 1], 1)
            ]
        );
        assert_eq!(
            rows_of(&sys_of("1,3")),
            vec![
                (vec![-2, 1], 1),
                (vec![-1, 1], 1),
                (vec![1, 0], 1),
                (vec![0, 1], 1)
            ]
        );
        let one = build_system(&TriangleProfile::empty(1)).unwrap();
        assert_eq!(rows_of(&one), vec![(vec![1], 1)]);
    }

    #[test]
    fn build_system_row_order_and_kinds() {
        let sys = sys_of("2,3,4");
        let kinds: Vec<String> = sys.rows().iter().map(|r| r.kind.to_string()).collect();
        assert_eq!(
            kinds,
            [
                "pos(1,1,2)",
                "pos(1,1,3)",
                "pos(1,2,3)",
                "pos(2,2,3)",
                "gap(1,2)",
                "gap(1,3)",
                "gap(2,3)",
                "unit(1)",
                "unit(2)",
                "unit(3)"
            ]
        );
        let csv = sys.to_csv();
        assert_eq!(
            csv.lines().take(2).collect::<Vec<_>>(),
            ["kind,x1,x2,x3,rhs", "\"pos(1,1,2)\",2,-1,0,0"]
        );
    }

    #[test]
    fn inconsistent_profile_is_rejected() {
        let t = TripleIndex::new(1, 1, 3, 3).unwrap();
        let p = TriangleProfile::from_triples(3, &[t]).unwrap();
        assert_eq!(build_system(&p), Err(PolytopeError::InconsistentProfile));
    }

    #[test]
    fn contains_examples() {
        let sys = sys_of("1,2");
        assert!(contains(&sys, &RationalPoint::from_integers(&[1, 2])).unwrap());
        assert!(!contains(&sys, &RationalPoint::from_integers(&[1, 3])).unwrap());
        assert_eq!(
            contains(&sys, &RationalPoint::from_integers(&[1, 2, 3])),
            Err(PolytopeError::DimensionMismatch {
                expected: 2,
                got: 3
            })
        );
    }

    #[test]
    fn feasible_point_examples() {
        let fp = |s: &str| feasible_point(&Spectrum::parse(s).unwrap()).unwrap();
        assert_eq!(fp("1,2"), RationalPoint::from_integers(&[1, 2]));
        assert_eq!(fp("1/2,1"), RationalPoint::from_integers(&[1, 2]));
        assert_eq!(fp("1,3"), RationalPoint::from_integers(&[1, 3]));
        assert_eq!(
            fp("1/10,1/5,1/4").coords,
            vec![rational(2, 1), rational(4, 1), rational(5, 1)]
        );
    }

    #[test]
    fn purify_examples() {
        let sys = sys_of("1,2");
        let cert = purify_to_vertex(&sys, &RationalPoint::from_integers(&[1, 2])).unwrap();
        assert_eq!(cert.point, RationalPoint::from_integers(&[1, 2]));
        let kinds: Vec<String> = cert
            .basis
            .iter()
            .map(|&r| sys.row(r).kind.to_string())
            .collect();
        assert_eq!(kinds, ["pos(1,1,2)", "gap(1,2)"]);
        assert_eq!(cert.basis_det, BigInt::one());

        let sys = sys_of("1,3");
        let cert = purify_to_vertex(&sys, &RationalPoint::from_integers(&[1, 3])).unwrap();
        assert_eq!(cert.point, RationalPoint::from_integers(&[1, 3]));
        let kinds: Vec<String> = cert
            .basis
            .iter()
            .map(|&r| sys.row(r).kind.to_string())
            .collect();
        assert_eq!(kinds, ["neg(1,1,2)", "unit(1)"]);
        assert_eq!(cert.basis_det, BigInt::from(-1));

        let sys = build_system(&TriangleProfile::empty(1)).unwrap();
        let cert = purify_to_vertex(&sys, &RationalPoint::from_integers(&[5])).unwrap();
        assert_eq!(cert.point, RationalPoint::from_integers(&[1]));
    }

    #[test]
    fn purify_rejects_infeasible_start() {
        let sys = sys_of("1,2");
        assert_eq!(
            purify_to_vertex(&sys, &RationalPoint::from_integers(&[1, 3])),
            Err(PolytopeError::NotFeasible(0))
        );
    }

    #[test]
    fn certificate_verification_catches_tampering() {
        let sys = sys_of("2,3,4");
        let start = feasible_point(&Spectrum::parse("2,3,4").unwrap()).unwrap();
        let cert = purify_to_vertex(&sys, &start).unwrap();
        cert.verify(&sys).unwrap();
        let mut moved = cert.clone();
        moved.point.coords[0] += rational(1, 3);
        assert!(moved.verify(&sys).is_err());
        let mut wrong_det = cert.clone();
        wrong_det.basis_det += 1;
        assert!(wrong_det.verify(&sys).is_err());
        let mut short = cert;
        short.basis.pop();
        assert!(short.verify(&sys).is_err());
    }

    #[test]
    fn det_examples() {
        assert_eq!(
            det_exact(&ints(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap(),
            1.into()
        );
        assert_eq!(det_exact(&ints(&[&[2, -1], &[-1, 1]])).unwrap(), 1.into());
        assert_eq!(
            det_exact(&ints(&[&[1, 2, 3], &[4, 5, 6], &[1, 2, 3]])).unwrap(),
            0.into()
        );
        assert_eq!(det_exact(&ints(&[&[0, 1], &[1, 0]])).unwrap(), (-1).into());
        assert_eq!(det_exact(&ints(&[&[0, 0], &[0, 5]])).unwrap(), 0.into());
        assert_eq!(det_exact(&[]).unwrap(), 1.into());
        assert_eq!(det_exact(&ints(&[&[1, 2]])), Err(PolytopeError::NotSquare));
    }

    #[test]
    fn cramer_examples() {
        let v = |xs: &[i64]| xs.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(
            cramer_solve(&ints(&[&[1, 0], &[0, 1]]), &v(&[1, 2])).unwrap(),
            RationalPoint::from_integers(&[1, 2])
        );
        assert_eq!(
            cramer_solve(&ints(&[&[1, 0], &[-1, 1]]), &v(&[1, 1])).unwrap(),
            RationalPoint::from_integers(&[1, 2])
        );
        assert_eq!(
            cramer_solve(&ints(&[&[2, -1], &[-1, 1]]), &v(&[0, 1])).unwrap(),
            RationalPoint::from_integers(&[1, 2])
        );
        assert_eq!(
            cramer_solve(&ints(&[&[2, 0], &[0, 4]]), &v(&[1, 1]))
                .unwrap()
                .coords,
            vec![rational(1, 2), rational(1, 4)]
        );
        assert_eq!(
            cramer_solve(&ints(&[&[1, 1], &[1, 1]]), &v(&[1, 1])),
            Err(PolytopeError::SingularMatrix)
        );
    }
}
