//! Spectra, triangle profiles, equivalence and the 4-value condition.
//!
//! A spectrum is a strictly increasing vector of positive exact rationals.
//! Two spectra of the same length are equivalent when they agree on every
//! inequality `x_i + x_j >= x_k` with `i <= j < k`; the set of triples for
//! which that inequality holds is the [`TriangleProfile`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Exact rational scalar. Always kept in lowest terms with a positive denominator.
pub type ExactScalar = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectrumError {
    #[error("empty input")]
    EmptyInput,
    #[error("malformed token {0:?}")]
    MalformedToken(String),
    #[error("entries are not strictly increasing (position {0})")]
    NotStrictlyIncreasing(usize),
    #[error("entry at position {0} is not positive")]
    NonPositiveEntry(usize),
    #[error("metric triple sides must be positive")]
    NonPositiveInput,
    #[error("scale factor must be positive")]
    NonPositiveScalar,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("invalid triple ({0},{1},{2}) for dimension {3}")]
    InvalidTriple(usize, usize, usize, usize),
}

/// Parse a single token: `p/q` with integer `p`, positive integer `q`, or a
/// finite decimal such as `0.75` (converted exactly).
pub fn parse_scalar(token: &str) -> Result<ExactScalar, SpectrumError> {
    let t = token.trim();
    let malformed = || SpectrumError::MalformedToken(t.to_string());
    if t.is_empty() {
        return Err(malformed());
    }
    if let Some((num, den)) = t.split_once('/') {
        let num = parse_integer(num).ok_or_else(malformed)?;
        let den = parse_integer(den).ok_or_else(malformed)?;
        if !den.is_positive() {
            return Err(malformed());
        }
        return Ok(BigRational::new(num, den));
    }
    let (negative, body) = match t.as_bytes()[0] {
        b'-' => (true, &t[1..]),
        b'+' => (false, &t[1..]),
        _ => (false, t),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(malformed());
    }
    if !whole.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return Err(malformed());
    }
    let digits = format!("{whole}{frac}");
    let mantissa: BigInt = digits.parse().map_err(|_| malformed())?;
    let scale = num_traits::pow(BigInt::from(10u32), frac.len());
    let value = BigRational::new(mantissa, scale);
    Ok(if negative { -value } else { value })
}

fn parse_integer(text: &str) -> Option<BigInt> {
    let text = text.trim();
    let digits = text.strip_prefix(['-', '+']).unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse().ok()
}

/// A strictly increasing vector of positive exact rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Spectrum {
    entries: Vec<ExactScalar>,
}

impl Spectrum {
    pub fn new(entries: Vec<ExactScalar>) -> Result<Self, SpectrumError> {
        if entries.is_empty() {
            return Err(SpectrumError::EmptyInput);
        }
        if let Some(pos) = entries.iter().position(|e| !e.is_positive()) {
            return Err(SpectrumError::NonPositiveEntry(pos + 1));
        }
        if let Some(pos) = entries.windows(2).position(|w| w[0] >= w[1]) {
            return Err(SpectrumError::NotStrictlyIncreasing(pos + 2));
        }
        Ok(Spectrum { entries })
    }

    pub fn from_integers<I: IntoIterator<Item = i64>>(values: I) -> Result<Self, SpectrumError> {
        Self::new(
            values
                .into_iter()
                .map(|v| BigRational::from_integer(v.into()))
                .collect(),
        )
    }

    pub fn parse(text: &str) -> Result<Self, SpectrumError> {
        if text.trim().is_empty() {
            return Err(SpectrumError::EmptyInput);
        }
        let entries = text
            .split(',')
            .map(parse_scalar)
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(entries)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[ExactScalar] {
        &self.entries
    }

    /// 1-based access, matching triple indices.
    pub fn at(&self, index: usize) -> &ExactScalar {
        &self.entries[index - 1]
    }

    pub fn into_entries(self) -> Vec<ExactScalar> {
        self.entries
    }
}

impl FromStr for Spectrum {
    type Err = SpectrumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Spectrum::parse(s)
    }
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_joined(f, &self.entries)
    }
}

fn write_joined<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (idx, item) in items.iter().enumerate() {
        if idx > 0 {
            f.write_str(",")?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}

/// Parse a spectrum from its comma-separated text form.
pub fn parse_spectrum(text: &str) -> Result<Spectrum, SpectrumError> {
    Spectrum::parse(text)
}

/// A strictly increasing vector of integers, all at least 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegralSpectrum {
    entries: Vec<BigInt>,
}

impl IntegralSpectrum {
    pub fn new(entries: Vec<BigInt>) -> Result<Self, SpectrumError> {
        if entries.is_empty() {
            return Err(SpectrumError::EmptyInput);
        }
        if let Some(pos) = entries.iter().position(|e| e < &BigInt::one()) {
            return Err(SpectrumError::NonPositiveEntry(pos + 1));
        }
        if let Some(pos) = entries.windows(2).position(|w| w[0] >= w[1]) {
            return Err(SpectrumError::NotStrictlyIncreasing(pos + 2));
        }
        Ok(IntegralSpectrum { entries })
    }

    pub fn from_i64s(values: &[i64]) -> Result<Self, SpectrumError> {
        Self::new(values.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn last(&self) -> &BigInt {
        self.entries.last().expect("integral spectra are non-empty")
    }

    pub fn to_spectrum(&self) -> Spectrum {
        Spectrum {
            entries: self
                .entries
                .iter()
                .map(|e| BigRational::from_integer(e.clone()))
                .collect(),
        }
    }

    /// Entries as machine integers, if they all fit.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.entries.iter().map(|e| e.to_i64()).collect()
    }
}

impl fmt::Display for IntegralSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_joined(f, &self.entries)
    }
}

impl Serialize for IntegralSpectrum {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(self.entries.len()))?;
        for e in &self.entries {
            match e.to_i64() {
                Some(v) => seq.serialize_element(&v)?,
                None => seq.serialize_element(&e.to_string())?,
            }
        }
        seq.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Num(i64),
    Text(String),
}

impl<'de> Deserialize<'de> for IntegralSpectrum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = Vec::<IntRepr>::deserialize(deserializer)?;
        let entries = raw
            .into_iter()
            .map(|r| match r {
                IntRepr::Num(v) => Ok(BigInt::from(v)),
                IntRepr::Text(s) => s.parse::<BigInt>().map_err(D::Error::custom),
            })
            .collect::<Result<Vec<_>, _>>()?;
        IntegralSpectrum::new(entries).map_err(D::Error::custom)
    }
}

/// 1-based index triple with `1 <= i <= j < k <= n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TripleIndex {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl TripleIndex {
    pub fn new(i: usize, j: usize, k: usize, n: usize) -> Result<Self, SpectrumError> {
        if 1 <= i && i <= j && j < k && k <= n {
            Ok(TripleIndex { i, j, k })
        } else {
            Err(SpectrumError::InvalidTriple(i, j, k, n))
        }
    }
}

impl fmt::Display for TripleIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.i, self.j, self.k)
    }
}

/// All valid triples of dimension `n` in lexicographic order.
pub fn triples(n: usize) -> impl Iterator<Item = TripleIndex> {
    (1..=n).flat_map(move |i| {
        (i..=n).flat_map(move |j| ((j + 1)..=n).map(move |k| TripleIndex { i, j, k }))
    })
}

/// Number of valid triples, `C(n+1, 3)`.
pub fn triple_count(n: usize) -> usize {
    (n + 1) * n * n.saturating_sub(1) / 6
}

/// Position of `t` in the lexicographic triple order of dimension `n`.
pub fn triple_position(n: usize, t: TripleIndex) -> usize {
    let mut pos = 0;
    for i in 1..t.i {
        for j in i..=n {
            pos += n - j;
        }
    }
    for j in t.i..t.j {
        pos += n - j;
    }
    pos + (t.k - t.j - 1)
}

/// The set of triples whose triangle inequality holds, stored as a membership
/// vector over [`triples`] order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriangleProfile {
    n: usize,
    members: Vec<bool>,
}

impl TriangleProfile {
    pub fn from_members(n: usize, members: Vec<bool>) -> Result<Self, SpectrumError> {
        if members.len() != triple_count(n) {
            return Err(SpectrumError::DimensionMismatch(
                members.len(),
                triple_count(n),
            ));
        }
        Ok(TriangleProfile { n, members })
    }

    pub fn from_triples(n: usize, list: &[TripleIndex]) -> Result<Self, SpectrumError> {
        let mut members = vec![false; triple_count(n)];
        for t in list {
            let t = TripleIndex::new(t.i, t.j, t.k, n)?;
            members[triple_position(n, t)] = true;
        }
        Ok(TriangleProfile { n, members })
    }

    pub fn full(n: usize) -> Self {
        TriangleProfile {
            n,
            members: vec![true; triple_count(n)],
        }
    }

    pub fn empty(n: usize) -> Self {
        TriangleProfile {
            n,
            members: vec![false; triple_count(n)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[bool] {
        &self.members
    }

    pub fn contains(&self, t: TripleIndex) -> bool {
        self.members[triple_position(self.n, t)]
    }

    pub fn member_triples(&self) -> Vec<TripleIndex> {
        triples(self.n)
            .zip(&self.members)
            .filter(|(_, &m)| m)
            .map(|(t, _)| t)
            .collect()
    }
}

impl fmt::Display for TriangleProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} {{", self.n)?;
        for (idx, t) in self.member_triples().iter().enumerate() {
            if idx > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str("}")
    }
}

#[derive(Serialize, Deserialize)]
struct ProfileDoc {
    n: usize,
    triples: Vec<[usize; 3]>,
}

impl Serialize for TriangleProfile {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ProfileDoc {
            n: self.n,
            triples: self
                .member_triples()
                .iter()
                .map(|t| [t.i, t.j, t.k])
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TriangleProfile {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = ProfileDoc::deserialize(deserializer)?;
        let list = doc
            .triples
            .iter()
            .map(|&[i, j, k]| TripleIndex::new(i, j, k, doc.n))
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        if list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(D::Error::custom(
                "triples must be listed in lexicographic order",
            ));
        }
        TriangleProfile::from_triples(doc.n, &list).map_err(D::Error::custom)
    }
}

/// `(a, b, c)` is a metric triple when each side is at most the sum of the other two.
pub fn is_metric_triple(
    a: &ExactScalar,
    b: &ExactScalar,
    c: &ExactScalar,
) -> Result<bool, SpectrumError> {
    if !a.is_positive() || !b.is_positive() || !c.is_positive() {
        return Err(SpectrumError::NonPositiveInput);
    }
    Ok(metric_unchecked(a, b, c))
}

fn metric_unchecked(a: &ExactScalar, b: &ExactScalar, c: &ExactScalar) -> bool {
    *c <= a + b && *b <= a + c && *a <= b + c
}

pub fn profile(x: &Spectrum) -> TriangleProfile {
    let n = x.len();
    let members = triples(n)
        .map(|t| x.at(t.i) + x.at(t.j) >= *x.at(t.k))
        .collect();
    TriangleProfile { n, members }
}

pub fn equivalent(x: &Spectrum, y: &Spectrum) -> Result<bool, SpectrumError> {
    if x.len() != y.len() {
        return Err(SpectrumError::DimensionMismatch(x.len(), y.len()));
    }
    Ok(profile(x) == profile(y))
}

pub fn scale(x: &Spectrum, alpha: &ExactScalar) -> Result<Spectrum, SpectrumError> {
    if !alpha.is_positive() {
        return Err(SpectrumError::NonPositiveScalar);
    }
    Ok(Spectrum {
        entries: x.entries.iter().map(|e| e * alpha).collect(),
    })
}

/// Checks the dominance closure: membership of `(i,j,k)` forces membership of
/// every valid `(i',j',k')` with `i <= i'`, `j <= j'`, `k' <= k`.
///
/// Any dominance chain can be walked one unit step at a time (raise `j`, then
/// `i`, then lower `k`) without leaving the valid index domain, so checking the
/// three immediate successors of each member is enough.
pub fn monotone_consistent(p: &TriangleProfile) -> bool {
    let n = p.n;
    triples(n)
        .zip(&p.members)
        .filter(|(_, &m)| m)
        .all(|(t, _)| {
            let steps = [
                (t.i < t.j).then(|| TripleIndex { i: t.i + 1, ..t }),
                (t.j + 1 < t.k).then(|| TripleIndex { j: t.j + 1, ..t }),
                (t.k - 1 > t.j).then(|| TripleIndex { k: t.k - 1, ..t }),
            ];
            steps.into_iter().flatten().all(|s| p.contains(s))
        })
}

/// A failing pair of metric triples `(a,b,e)`, `(c,d,e)` for the 4-value
/// condition, given by 1-based entry indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CounterexampleReport {
    pub first: [usize; 3],
    pub second: [usize; 3],
}

impl fmt::Display for CounterexampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, e] = self.first;
        let [c, d, _] = self.second;
        write!(
            f,
            "triples (a{a},a{b},a{e}) and (a{c},a{d},a{e}) admit no completing side"
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FourValue {
    Holds,
    Fails(CounterexampleReport),
}

impl FourValue {
    pub fn holds(&self) -> bool {
        matches!(self, FourValue::Holds)
    }
}

/// Decides the 4-value condition on the entry set of `x`. Pairs are scanned in
/// lexicographic order of `(a, b, e, c, d)` indices and the first failure is
/// reported.
pub fn four_value_check(x: &Spectrum) -> FourValue {
    let s = x.entries();
    let n = s.len();
    let metric: Vec<bool> = (0..n * n * n)
        .map(|idx| metric_unchecked(&s[idx / (n * n)], &s[(idx / n) % n], &s[idx % n]))
        .collect();
    let is_metric = |a: usize, b: usize, c: usize| metric[(a * n + b) * n + c];
    for a in 0..n {
        for b in 0..n {
            for e in 0..n {
                if !is_metric(a, b, e) {
                    continue;
                }
                for c in 0..n {
                    for d in 0..n {
                        if !is_metric(c, d, e) {
                            continue;
                        }
                        if !(0..n).any(|f| is_metric(b, c, f) && is_metric(a, d, f)) {
                            return FourValue::Fails(CounterexampleReport {
                                first: [a + 1, b + 1, e + 1],
                                second: [c + 1, d + 1, e + 1],
                            });
                        }
                    }
                }
            }
        }
    }
    FourValue::Holds
}

#[cfg(test)]
pub(crate) fn rational(num: i64, den: i64) -> ExactScalar {
    BigRational::new(num.into(), den.into())
}
