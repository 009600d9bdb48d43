//! Lexicographically least integer spectrum in a box that realizes a
//! (possibly partial) triangle profile.
//!
//! Coordinates are fixed left to right, smallest value first. After every
//! choice the interval bounds of all coordinates are tightened to a fixpoint
//! under the triangle constraints and the strict ordering, so dead branches
//! are cut before they are expanded.

use crate::spectrum::{monotone_consistent, triples, IntegralSpectrum, TriangleProfile};

/// One decided triple, 0-based: `t_k <= t_i + t_j` when `member`, otherwise
/// `t_k >= t_i + t_j + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Constraint {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub member: bool,
}

pub(crate) fn constraints_of(profile: &TriangleProfile) -> Vec<Constraint> {
    triples(profile.n())
        .zip(profile.members())
        .map(|(t, &member)| Constraint {
            i: t.i - 1,
            j: t.j - 1,
            k: t.k - 1,
            member,
        })
        .collect()
}

/// Searches strictly increasing `t` with `lower <= t <= upper` satisfying the
/// profile; returns the lexicographically least such `t`.
pub fn find_in_box(
    profile: &TriangleProfile,
    lower: &[i64],
    upper: &[i64],
) -> Option<IntegralSpectrum> {
    let n = profile.n();
    if lower.len() != n || upper.len() != n || !monotone_consistent(profile) {
        return None;
    }
    let found = search(&constraints_of(profile), lower, upper)?;
    IntegralSpectrum::from_i64s(&found).ok()
}

pub(crate) fn search(cons: &[Constraint], lower: &[i64], upper: &[i64]) -> Option<Vec<i64>> {
    let mut lo: Vec<i64> = lower.iter().map(|&l| l.max(1)).collect();
    let mut hi = upper.to_vec();
    if !propagate(&mut lo, &mut hi, cons) {
        return None;
    }
    descend(0, lo, hi, cons)
}

fn descend(var: usize, lo: Vec<i64>, hi: Vec<i64>, cons: &[Constraint]) -> Option<Vec<i64>> {
    if var == lo.len() {
        return Some(lo);
    }
    for v in lo[var]..=hi[var] {
        let mut lo2 = lo.clone();
        let mut hi2 = hi.clone();
        lo2[var] = v;
        hi2[var] = v;
        if propagate(&mut lo2, &mut hi2, cons) {
            if let Some(found) = descend(var + 1, lo2, hi2, cons) {
                return Some(found);
            }
        }
    }
    None
}

fn tighten_lo(lo: &mut i64, value: i64, changed: &mut bool) {
    if value > *lo {
        *lo = value;
        *changed = true;
    }
}

fn tighten_hi(hi: &mut i64, value: i64, changed: &mut bool) {
    if value < *hi {
        *hi = value;
        *changed = true;
    }
}

/// Bounds propagation to a fixpoint. Returns `false` once some domain is empty.
pub(crate) fn propagate(lo: &mut [i64], hi: &mut [i64], cons: &[Constraint]) -> bool {
    let n = lo.len();
    loop {
        let mut changed = false;
        for idx in 1..n {
            let floor = lo[idx - 1] + 1;
            tighten_lo(&mut lo[idx], floor, &mut changed);
        }
        for idx in (0..n.saturating_sub(1)).rev() {
            let ceil = hi[idx + 1] - 1;
            tighten_hi(&mut hi[idx], ceil, &mut changed);
        }
        for c in cons {
            let (i, j, k) = (c.i, c.j, c.k);
            if c.member {
                let cap = hi[i] + hi[j];
                tighten_hi(&mut hi[k], cap, &mut changed);
                if i == j {
                    let need = (lo[k] + 1).div_euclid(2);
                    tighten_lo(&mut lo[i], need, &mut changed);
                } else {
                    let need_i = lo[k] - hi[j];
                    tighten_lo(&mut lo[i], need_i, &mut changed);
                    let need_j = lo[k] - hi[i];
                    tighten_lo(&mut lo[j], need_j, &mut changed);
                }
            } else {
                let need = lo[i] + lo[j] + 1;
                tighten_lo(&mut lo[k], need, &mut changed);
                if i == j {
                    let cap = (hi[k] - 1).div_euclid(2);
                    tighten_hi(&mut hi[i], cap, &mut changed);
                } else {
                    let cap_i = hi[k] - lo[j] - 1;
                    tighten_hi(&mut hi[i], cap_i, &mut changed);
                    let cap_j = hi[k] - lo[i] - 1;
                    tighten_hi(&mut hi[j], cap_j, &mut changed);
                }
            }
        }
        if lo.iter().zip(hi.iter()).any(|(l, h)| l > h) {
            return false;
        }
        if !changed {
            return true;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{profile, Spectrum, TripleIndex};

    fn prof(n: usize, list: &[(usize, usize, usize)]) -> TriangleProfile {
        let list: Vec<_> = list
            .iter()
            .map(|&(i, j, k)| TripleIndex { i, j, k })
            .collect();
        TriangleProfile::from_triples(n, &list).unwrap()
    }

    fn found(p: &TriangleProfile, lower: &[i64], upper: &[i64]) -> Option<Vec<i64>> {
        find_in_box(p, lower, upper).map(|s| s.to_i64s().unwrap())
    }

    #[test]
    fn examples() {
        assert_eq!(
            found(&prof(2, &[(1, 1, 2)]), &[1, 3], &[3, 3]),
            Some(vec![2, 3])
        );
        assert_eq!(found(&prof(2, &[]), &[1, 3], &[3, 3]), Some(vec![1, 3]));
        assert_eq!(found(&prof(1, &[]), &[1], &[1]), Some(vec![1]));
    }

    #[test]
    fn empty_box_and_unrealizable_profiles() {
        // 2 t_1 >= t_2 is impossible with t_1 = 1, t_2 = 3.
        assert_eq!(found(&prof(2, &[(1, 1, 2)]), &[1, 3], &[1, 3]), None);
        // Inconsistent profile.
        assert_eq!(found(&prof(3, &[(1, 1, 3)]), &[1, 1, 1], &[8, 8, 8]), None);
        assert_eq!(found(&prof(2, &[]), &[1, 1], &[1, 2]), None);
    }

    /// Brute-force lexicographic scan of the box.
    fn scan(p: &TriangleProfile, lower: &[i64], upper: &[i64]) -> Option<Vec<i64>> {
        fn rec(
            idx: usize,
            t: &mut Vec<i64>,
            p: &TriangleProfile,
            lower: &[i64],
            upper: &[i64],
        ) -> Option<Vec<i64>> {
            if idx == lower.len() {
                let ok = triples(p.n())
                    .all(|tr| (t[tr.i - 1] + t[tr.j - 1] >= t[tr.k - 1]) == p.contains(tr));
                return ok.then(|| t.clone());
            }
            let start = if idx == 0 {
                lower[0]
            } else {
                lower[idx].max(t[idx - 1] + 1)
            };
            for v in start..=upper[idx] {
                t.push(v);
                let r = rec(idx + 1, t, p, lower, upper);
                t.pop();
                if r.is_some() {
                    return r;
                }
            }
            None
        }
        rec(0, &mut Vec::new(), p, lower, upper)
    }

    #[test]
    fn agrees_with_brute_force_scan() {
        let mut checked = 0;
        for t1 in 1..=3 {
            for t2 in (t1 + 1)..=6 {
                for t3 in (t2 + 1)..=10 {
                    for t4 in (t3 + 1)..=16 {
                        let p = profile(&Spectrum::from_integers([t1, t2, t3, t4]).unwrap());
                        for (lower, upper) in [
                            ([1, 1, 1, 1], [16, 16, 16, 16]),
                            ([1, 3, 7, 15], [15, 15, 15, 15]),
                            ([2, 2, 5, 5], [9, 12, 14, 16]),
                        ] {
                            assert_eq!(found(&p, &lower, &upper), scan(&p, &lower, &upper));
                            checked += 1;
                        }
                    }
                }
            }
        }
        assert!(checked > 500);
    }
}
