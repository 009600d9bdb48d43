//! Random instance generators shared by the integration suites.
#![allow(dead_code)]

use metric_spectra::cover::{family, FElement, SignedVector};
use metric_spectra::{ExactScalar, Spectrum};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn q(num: i64, den: i64) -> ExactScalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Strictly increasing positive rationals with denominators up to 16.
///
/// Gaps are drawn on a mix of scales so that both dense profiles (every
/// triangle inequality holds) and sparse ones (almost none hold) show up.
pub fn random_spectrum<R: Rng>(rng: &mut R, n: usize) -> Spectrum {
    let style = rng.gen_range(0..3);
    let mut current = q(rng.gen_range(1..=64), rng.gen_range(1..=16));
    let mut entries = Vec::with_capacity(n);
    for _ in 0..n {
        entries.push(current.clone());
        let gap = match style {
            0 => q(rng.gen_range(1..=16), rng.gen_range(1..=16)),
            1 => &current * q(rng.gen_range(1..=40), 16),
            _ => &current * q(rng.gen_range(8..=48), 16) + q(1, rng.gen_range(1..=16)),
        };
        current += gap;
    }
    Spectrum::new(entries).expect("increasing by construction")
}

/// Integer tuple `1 <= t_1 < ... < t_n <= top`.
pub fn random_integral<R: Rng>(rng: &mut R, n: usize, top: i64) -> Vec<i64> {
    let mut pool: Vec<i64> = (1..=top).collect();
    pool.shuffle(rng);
    let mut t = pool[..n].to_vec();
    t.sort_unstable();
    t
}

pub fn random_f<R: Rng>(rng: &mut R, n: usize) -> FElement {
    family(n).choose(rng).expect("family is nonempty").clone()
}

/// A vector `x ⪯ bound` with entries `sign * k / d`, `d <= 16`.
pub fn random_covered<R: Rng>(rng: &mut R, bound: &[BigRational]) -> SignedVector {
    SignedVector(
        bound
            .iter()
            .map(|b| {
                let d = rng.gen_range(1..=16);
                let k = rng.gen_range(0..=d);
                b * q(k, d)
            })
            .collect(),
    )
}

pub fn random_covered_by_f<R: Rng>(rng: &mut R, p: &FElement) -> SignedVector {
    random_covered(rng, &p.to_signed().0)
}

/// A vector with entries `k / d`, `|k| <= 2d`, `d <= 16`.
pub fn random_signed<R: Rng>(rng: &mut R, n: usize) -> SignedVector {
    SignedVector(
        (0..n)
            .map(|_| {
                let d = rng.gen_range(1..=16);
                q(rng.gen_range(-2 * d..=2 * d), d)
            })
            .collect(),
    )
}

/// Cofactor expansion along the first row.
pub fn cofactor_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut total = BigInt::from(0);
    for col in 0..n {
        if m[0][col] == BigInt::from(0) {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != col)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][col] * cofactor_det(&minor);
        if col % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

pub fn int_matrix(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect()
}

/// A vector covered by a random element of `F`.
pub fn random_f_covered<R: Rng>(rng: &mut R, n: usize) -> SignedVector {
    let p = random_f(rng, n);
    random_covered_by_f(rng, &p)
}
