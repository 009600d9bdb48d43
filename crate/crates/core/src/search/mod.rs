//! Exhaustive enumeration of equivalence classes for small `n`, and the
//! witness search for the box `2^i - 1 <= t_i <= 2^n - 1`.
//!
//! Every class has an integral representative with last entry at most `2^n`,
//! so scanning strictly increasing tuples in `[1, 2^n]^n` reaches every class.
//! Two strategies produce the same atlas:
//!
//! * [`Strategy::Box`] walks the tuples directly, one work unit per value of
//!   `t_1`. The last coordinate is only visited at the points where some
//!   `t_i + t_j` threshold is crossed, since the profile is constant between.
//! * [`Strategy::Profile`] decides triples one at a time in lexicographic
//!   order, keeping only partial profiles that some tuple in the box realizes.
//!
//! Records are sorted by profile and carry the lexicographically least witness
//! in the box, so the output is independent of worker count and scheduling.

mod boxsearch;
mod checkpoint;
mod table;
mod verify;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::par::Exec;
use crate::spectrum::{IntegralSpectrum, TriangleProfile};

pub use boxsearch::find_in_box;
pub use table::MAX_N;
pub use verify::{
    verify_conant, verify_conant_with, VerificationReport, VerifyOptions, MAX_VERIFY_N,
};

use boxsearch::Constraint;
use table::{ProfileBits, TripleTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("dimension {0} is outside the supported range 1..={1}")]
    UnsupportedDimension(usize, usize),
    #[error("work budget exhausted after {done} of {total} units")]
    BudgetExhausted {
        done: usize,
        total: usize,
        atlas: Box<ClassAtlas>,
    },
    #[error("checkpoint is corrupt: {0}")]
    CheckpointCorrupt(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

impl From<std::io::Error> for SearchError {
    fn from(err: std::io::Error) -> Self {
        SearchError::Io(err.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Box,
    Profile,
}

impl Strategy {
    /// Box scan up to `n = 5`, profile search beyond.
    pub fn default_for(n: usize) -> Self {
        if n <= 5 {
            Strategy::Box
        } else {
            Strategy::Profile
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Box => "box",
            Strategy::Profile => "profile",
        })
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "box" => Ok(Strategy::Box),
            "profile" => Ok(Strategy::Profile),
            other => Err(format!(
                "unknown strategy {other:?} (expected box or profile)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConantStatus {
    /// Enumeration only; the tighter box was not searched.
    Unchecked,
    Satisfied,
    NoWitnessFound,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassRecord {
    pub profile: TriangleProfile,
    /// Lexicographically least representative in `[1, 2^n]^n`.
    pub canonical_witness: IntegralSpectrum,
    /// Lexicographically least representative with `2^i - 1 <= t_i <= 2^n - 1`.
    pub conant_witness: Option<IntegralSpectrum>,
    pub status: ConantStatus,
}

#[derive(Serialize)]
struct AtlasLine<'a> {
    n: usize,
    triples: Vec<[usize; 3]>,
    witness: &'a IntegralSpectrum,
    conant_witness: Option<&'a IntegralSpectrum>,
}

impl ClassRecord {
    /// One atlas line: `{"n":..,"triples":[..],"witness":[..],"conant_witness":[..]|null}`.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(&AtlasLine {
            n: self.profile.n(),
            triples: self
                .profile
                .member_triples()
                .iter()
                .map(|t| [t.i, t.j, t.k])
                .collect(),
            witness: &self.canonical_witness,
            conant_witness: self.conant_witness.as_ref(),
        })
        .expect("atlas lines serialize")
    }
}

/// Position in the work-unit list of an interrupted enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cursor {
    pub strategy: Strategy,
    pub next_unit: usize,
    pub total_units: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassAtlas {
    pub n: usize,
    pub strategy: Strategy,
    pub records: Vec<ClassRecord>,
    pub complete: bool,
    /// Set while `complete` is false.
    pub checkpoint: Option<Cursor>,
}

impl ClassAtlas {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn profiles(&self) -> Vec<&TriangleProfile> {
        self.records.iter().map(|r| &r.profile).collect()
    }

    /// Line-delimited JSON, one record per line, newline terminated.
    pub fn to_lines(&self) -> String {
        self.records.iter().fold(String::new(), |mut out, r| {
            out.push_str(&r.to_json_line());
            out.push('\n');
            out
        })
    }

    /// Continues an interrupted enumeration from its cursor.
    pub fn resume(self, budget: Option<usize>, exec: &Exec) -> Result<ClassAtlas, SearchError> {
        let Some(cursor) = self.checkpoint else {
            return Ok(self);
        };
        let plan = Plan::new(self.n, cursor.strategy)?;
        let table = &plan.table;
        let prior: Vec<Found> = self
            .records
            .iter()
            .map(|r| {
                let w = r
                    .canonical_witness
                    .to_i64s()
                    .expect("box witnesses fit in i64");
                (table.encode(&r.profile), w)
            })
            .collect();
        plan.run(cursor.next_unit, budget, prior, exec)
    }
}

pub(crate) type Found = (ProfileBits, Vec<i64>);

/// Deterministic list of independent work units for one dimension and strategy.
pub(crate) struct Plan {
    pub table: TripleTable,
    pub strategy: Strategy,
    units: Vec<Unit>,
}

#[derive(Debug, Clone)]
enum Unit {
    /// All tuples with this first coordinate.
    FirstCoordinate(i64),
    /// All completions of a feasible partial profile.
    Prefix(Node),
}

/// Partial profile deciding the first `depth` triples, with a realizing tuple.
#[derive(Debug, Clone)]
struct Node {
    depth: usize,
    bits: ProfileBits,
    witness: Vec<i64>,
}

/// Triples decided before the profile strategy splits into work units.
const PROFILE_SPLIT_DEPTH: usize = 10;

pub(crate) fn check_dimension(n: usize) -> Result<(), SearchError> {
    if (1..=MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(SearchError::UnsupportedDimension(n, MAX_N))
    }
}

impl Plan {
    pub fn new(n: usize, strategy: Strategy) -> Result<Self, SearchError> {
        check_dimension(n)?;
        let table = TripleTable::new(n);
        let units = match strategy {
            Strategy::Box => {
                let top = 1i64 << n;
                (1..=top - (n as i64 - 1))
                    .map(Unit::FirstCoordinate)
                    .collect()
            }
            Strategy::Profile => {
                let root = Node {
                    depth: 0,
                    bits: 0,
                    witness: (1..=n as i64).collect(),
                };
                let depth = PROFILE_SPLIT_DEPTH.min(table.count());
                let mut frontier = Vec::new();
                collect_frontier(&table, root, depth, &mut frontier);
                frontier.into_iter().map(Unit::Prefix).collect()
            }
        };
        Ok(Plan {
            table,
            strategy,
            units,
        })
    }

    pub fn unit_count(&self) -> usize {
        self.units.len()
    }

    pub fn run_unit(&self, index: usize) -> Vec<Found> {
        match &self.units[index] {
            Unit::FirstCoordinate(first) => box_unit(&self.table, *first),
            Unit::Prefix(node) => {
                let mut out = Vec::new();
                profile_dfs(&self.table, node.clone(), &mut out);
                out
            }
        }
    }

    /// Runs units `start..` (at most `budget` of them) and merges with `prior`.
    pub fn run(
        &self,
        start: usize,
        budget: Option<usize>,
        prior: Vec<Found>,
        exec: &Exec,
    ) -> Result<ClassAtlas, SearchError> {
        let total = self.unit_count();
        let end = budget.map_or(total, |b| start.saturating_add(b).min(total));
        let indices: Vec<usize> = (start..end).collect();
        let results = exec.map(&indices, |&u| self.run_unit(u));
        let merged = merge(prior.into_iter().chain(results.into_iter().flatten()));
        let atlas = self.atlas(merged, end == total, end);
        if atlas.complete {
            Ok(atlas)
        } else {
            Err(SearchError::BudgetExhausted {
                done: end,
                total,
                atlas: Box::new(atlas),
            })
        }
    }

    pub fn atlas(&self, merged: Vec<Found>, complete: bool, next_unit: usize) -> ClassAtlas {
        let mut records: Vec<ClassRecord> = merged
            .into_iter()
            .map(|(bits, w)| ClassRecord {
                profile: self.table.to_profile(bits),
                canonical_witness: IntegralSpectrum::from_i64s(&w).expect("valid witness"),
                conant_witness: None,
                status: ConantStatus::Unchecked,
            })
            .collect();
        records.sort_by(|a, b| a.profile.cmp(&b.profile));
        ClassAtlas {
            n: self.table.n,
            strategy: self.strategy,
            records,
            complete,
            checkpoint: (!complete).then_some(Cursor {
                strategy: self.strategy,
                next_unit,
                total_units: self.unit_count(),
            }),
        }
    }
}

/// Keeps one entry per profile with the lexicographically least witness.
pub(crate) fn merge(found: impl Iterator<Item = Found>) -> Vec<Found> {
    let mut best: BTreeMap<ProfileBits, Vec<i64>> = BTreeMap::new();
    for (bits, w) in found {
        match best.get_mut(&bits) {
            Some(current) if *current <= w => {}
            Some(current) => *current = w,
            None => {
                best.insert(bits, w);
            }
        }
    }
    best.into_iter().collect()
}

fn box_unit(table: &TripleTable, first: i64) -> Vec<Found> {
    let n = table.n;
    let mut found: HashMap<ProfileBits, [i64; MAX_N]> = HashMap::new();
    let mut t = [0i64; MAX_N];
    t[0] = first;
    if n == 1 {
        found.insert(0, t);
    } else {
        box_dfs(table, 1, 0, &mut t, &mut found);
    }
    let mut out: Vec<Found> = found
        .into_iter()
        .map(|(b, w)| (b, w[..n].to_vec()))
        .collect();
    out.sort();
    out
}

fn box_dfs(
    table: &TripleTable,
    k: usize,
    bits: ProfileBits,
    t: &mut [i64; MAX_N],
    found: &mut HashMap<ProfileBits, [i64; MAX_N]>,
) {
    let n = table.n;
    let top = 1i64 << n;
    let max_here = top - (n - 1 - k) as i64;
    let lo = t[k - 1] + 1;
    if k == n - 1 {
        let mut candidates = vec![lo];
        for &(i, j, _) in &table.ending_at[k] {
            let crossing = t[i] + t[j] + 1;
            if crossing > lo && crossing <= top {
                candidates.push(crossing);
            }
        }
        candidates.sort_unstable();
        candidates.dedup();
        for v in candidates.into_iter().filter(|&v| v <= top) {
            t[k] = v;
            let b = bits | table.bits_ending_at(k, &t[..]);
            found.entry(b).or_insert(*t);
        }
        return;
    }
    for v in lo..=max_here {
        t[k] = v;
        let b = bits | table.bits_ending_at(k, &t[..]);
        box_dfs(table, k + 1, b, t, found);
    }
}

fn decided_constraints(table: &TripleTable, depth: usize, bits: ProfileBits) -> Vec<Constraint> {
    table.triples[..depth]
        .iter()
        .enumerate()
        .map(|(b, &(i, j, k))| Constraint {
            i,
            j,
            k,
            member: bits >> b & 1 == 1,
        })
        .collect()
}

fn box_bounds(n: usize) -> (Vec<i64>, Vec<i64>) {
    (vec![1; n], vec![1i64 << n; n])
}

/// Children of `node` deciding the next triple, member first.
fn children(table: &TripleTable, node: &Node) -> Vec<Node> {
    let d = node.depth;
    let (i, j, k) = table.triples[d];
    let witness_member = node.witness[i] + node.witness[j] >= node.witness[k];
    let (lower, upper) = box_bounds(table.n);
    let mut out = Vec::with_capacity(2);
    for member in [true, false] {
        let bits = if member {
            node.bits | 1 << d
        } else {
            node.bits
        };
        let clash = if member {
            table.dominated[d]
                .iter()
                .any(|&q| q < d && bits >> q & 1 == 0)
        } else {
            table.dominating[d]
                .iter()
                .any(|&q| q < d && bits >> q & 1 == 1)
        };
        if clash {
            continue;
        }
        let witness = if member == witness_member {
            Some(node.witness.clone())
        } else {
            boxsearch::search(&decided_constraints(table, d + 1, bits), &lower, &upper)
        };
        if let Some(witness) = witness {
            out.push(Node {
                depth: d + 1,
                bits,
                witness,
            });
        }
    }
    out
}

fn collect_frontier(table: &TripleTable, node: Node, depth: usize, out: &mut Vec<Node>) {
    if node.depth == depth {
        out.push(node);
        return;
    }
    for child in children(table, &node) {
        collect_frontier(table, child, depth, out);
    }
}

fn profile_dfs(table: &TripleTable, node: Node, out: &mut Vec<Found>) {
    if node.depth == table.count() {
        let (lower, upper) = box_bounds(table.n);
        let least = boxsearch::search(
            &decided_constraints(table, node.depth, node.bits),
            &lower,
            &upper,
        )
        .expect("a realized profile has a witness in the box");
        out.push((node.bits, least));
        return;
    }
    for child in children(table, &node) {
        profile_dfs(table, child, out);
    }
}

fn enumerate_with(
    n: usize,
    strategy: Strategy,
    budget: Option<usize>,
    exec: &Exec,
) -> Result<ClassAtlas, SearchError> {
    Plan::new(n, strategy)?.run(0, budget, Vec::new(), exec)
}

/// All classes of dimension `n` by scanning `[1, 2^n]^n`. With a `budget`
/// of work units the scan may stop early with
/// [`SearchError::BudgetExhausted`], carrying a resumable partial atlas.
pub fn enumerate_classes(
    n: usize,
    budget: Option<usize>,
    exec: &Exec,
) -> Result<ClassAtlas, SearchError> {
    enumerate_with(n, Strategy::Box, budget, exec)
}

/// All classes of dimension `n` by extending realizable partial profiles.
pub fn enumerate_classes_by_profile(
    n: usize,
    budget: Option<usize>,
    exec: &Exec,
) -> Result<ClassAtlas, SearchError> {
    enumerate_with(n, Strategy::Profile, budget, exec)
}

/// Either strategy by name.
pub fn enumerate(
    n: usize,
    strategy: Strategy,
    budget: Option<usize>,
    exec: &Exec,
) -> Result<ClassAtlas, SearchError> {
    enumerate_with(n, strategy, budget, exec)
}
