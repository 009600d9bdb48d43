use crate::spectrum::{triples, TriangleProfile, TripleIndex};

/// Largest dimension the enumerators support; `C(9, 3) = 84` triples fit a `u128`.
pub const MAX_N: usize = 8;

/// Profile membership packed into bits, bit `p` for the `p`-th triple in
/// lexicographic order.
pub(crate) type ProfileBits = u128;

/// Precomputed triple bookkeeping for one dimension. Indices are 0-based.
#[derive(Debug, Clone)]
pub(crate) struct TripleTable {
    pub n: usize,
    pub triples: Vec<(usize, usize, usize)>,
    /// For each `k`, the `(i, j, bit)` of every triple ending at `k`.
    pub ending_at: Vec<Vec<(usize, usize, usize)>>,
    /// Triples whose membership is forced by membership of this one.
    pub dominated: Vec<Vec<usize>>,
    /// Triples whose membership forces this one.
    pub dominating: Vec<Vec<usize>>,
}

impl TripleTable {
    pub fn new(n: usize) -> Self {
        assert!(
            (1..=MAX_N).contains(&n),
            "dimension {n} outside 1..={MAX_N}"
        );
        let list: Vec<TripleIndex> = triples(n).collect();
        let triples: Vec<(usize, usize, usize)> =
            list.iter().map(|t| (t.i - 1, t.j - 1, t.k - 1)).collect();
        let mut ending_at = vec![Vec::new(); n];
        for (bit, &(i, j, k)) in triples.iter().enumerate() {
            ending_at[k].push((i, j, bit));
        }
        let count = triples.len();
        let mut dominated = vec![Vec::new(); count];
        let mut dominating = vec![Vec::new(); count];
        for (a, &(i, j, k)) in triples.iter().enumerate() {
            for (b, &(i2, j2, k2)) in triples.iter().enumerate() {
                if a != b && i <= i2 && j <= j2 && k2 <= k {
                    dominated[a].push(b);
                    dominating[b].push(a);
                }
            }
        }
        TripleTable {
            n,
            triples,
            ending_at,
            dominated,
            dominating,
        }
    }

    pub fn count(&self) -> usize {
        self.triples.len()
    }

    /// Bits of the triples ending at `k` that hold for the prefix `t[..=k]`.
    #[inline]
    pub fn bits_ending_at(&self, k: usize, t: &[i64]) -> ProfileBits {
        let mut bits = 0;
        for &(i, j, bit) in &self.ending_at[k] {
            if t[i] + t[j] >= t[k] {
                bits |= 1 << bit;
            }
        }
        bits
    }

    #[cfg(test)]
    pub fn profile_bits(&self, t: &[i64]) -> ProfileBits {
        (1..self.n).fold(0, |acc, k| acc | self.bits_ending_at(k, t))
    }

    pub fn to_profile(&self, bits: ProfileBits) -> TriangleProfile {
        let members = (0..self.count()).map(|b| bits >> b & 1 == 1).collect();
        TriangleProfile::from_members(self.n, members).expect("length matches")
    }

    pub fn encode(&self, p: &TriangleProfile) -> ProfileBits {
        p.members()
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .fold(0, |acc, (b, _)| acc | 1 << b)
    }
}
