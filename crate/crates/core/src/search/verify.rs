//! Witness search in the box `2^i - 1 <= t_i <= 2^n - 1` for every class.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use serde::Serialize;

use super::checkpoint::{self, Header, Progress, Writer};
use super::table::{ProfileBits, TripleTable};
use super::{
    box_bounds, check_dimension, decided_constraints, merge, ClassAtlas, ConantStatus, Found, Plan,
    SearchError, Strategy,
};
use crate::par::Exec;
use crate::spectrum::{profile, IntegralSpectrum, Spectrum};

type ClassOutcome = (ProfileBits, Option<Vec<i64>>);

/// Largest `n` accepted by [`verify_conant`].
pub const MAX_VERIFY_N: usize = 7;

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub n: usize,
    pub exec: Exec,
    pub checkpoint: Option<PathBuf>,
    /// Defaults to [`Strategy::default_for`].
    pub strategy: Option<Strategy>,
    /// Stop after this many work items (enumeration units plus per-class
    /// searches) in this invocation. The checkpoint keeps what was finished.
    pub budget: Option<usize>,
}

impl VerifyOptions {
    pub fn new(n: usize, exec: Exec) -> Self {
        VerifyOptions {
            n,
            exec,
            checkpoint: None,
            strategy: None,
            budget: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub atlas: ClassAtlas,
    pub satisfied: usize,
    pub no_witness_found: usize,
    pub wall_time: Duration,
    /// Enumeration units and class searches recovered from the checkpoint.
    pub resumed_units: usize,
    pub resumed_classes: usize,
}

#[derive(Serialize)]
struct Summary<'a> {
    version: &'a str,
    n: usize,
    strategy: Strategy,
    classes: usize,
    satisfied: usize,
    no_witness_found: usize,
}

impl VerificationReport {
    pub fn n(&self) -> usize {
        self.atlas.n
    }

    pub fn class_count(&self) -> usize {
        self.atlas.len()
    }

    pub fn all_satisfied(&self) -> bool {
        self.no_witness_found == 0
    }

    /// Summary document. Wall time is left out so the output is reproducible.
    pub fn summary_json(&self) -> String {
        serde_json::to_string(&Summary {
            version: crate::VERSION,
            n: self.atlas.n,
            strategy: self.atlas.strategy,
            classes: self.class_count(),
            satisfied: self.satisfied,
            no_witness_found: self.no_witness_found,
        })
        .expect("summary serializes")
    }
}

/// [`verify_conant_with`] with the default strategy and no budget.
pub fn verify_conant(
    n: usize,
    exec: &Exec,
    checkpoint_path: Option<PathBuf>,
) -> Result<VerificationReport, SearchError> {
    let mut options = VerifyOptions::new(n, *exec);
    options.checkpoint = checkpoint_path;
    verify_conant_with(&options)
}

fn conant_bounds(n: usize) -> (Vec<i64>, Vec<i64>) {
    let top = (1i64 << n) - 1;
    ((1..=n).map(|i| (1i64 << i) - 1).collect(), vec![top; n])
}

fn conant_search(table: &TripleTable, bits: ProfileBits) -> Option<Vec<i64>> {
    let (lower, upper) = conant_bounds(table.n);
    super::boxsearch::search(
        &decided_constraints(table, table.count(), bits),
        &lower,
        &upper,
    )
}

fn reverify(
    table: &TripleTable,
    bits: ProfileBits,
    witness: &[i64],
    lower: &[i64],
    upper: &[i64],
    what: &str,
) -> Result<(), SearchError> {
    let expected = table.to_profile(bits);
    let in_box = witness.len() == table.n
        && witness
            .iter()
            .zip(lower.iter().zip(upper))
            .all(|(w, (lo, hi))| lo <= w && w <= hi);
    let realizes = Spectrum::from_integers(witness.iter().copied())
        .map(|s| profile(&s) == expected)
        .unwrap_or(false);
    if in_box && realizes {
        Ok(())
    } else {
        Err(SearchError::InvariantViolation(format!(
            "{what} {witness:?} does not realize profile {expected:?} inside its box"
        )))
    }
}

pub fn verify_conant_with(options: &VerifyOptions) -> Result<VerificationReport, SearchError> {
    let started = Instant::now();
    let n = options.n;
    check_dimension(n)?;
    if n > MAX_VERIFY_N {
        return Err(SearchError::UnsupportedDimension(n, MAX_VERIFY_N));
    }
    let strategy = options.strategy.unwrap_or(Strategy::default_for(n));
    let plan = Plan::new(n, strategy)?;
    let table = &plan.table;
    let header = Header {
        n,
        strategy,
        units: plan.unit_count(),
    };

    let (progress, writer) = match &options.checkpoint {
        Some(path) => {
            let progress = checkpoint::load(path, header)?;
            (progress, Some(Writer::open(path, header)?))
        }
        None => (Progress::default(), None),
    };
    let resumed_units = progress.units.len();
    let resumed_classes = progress.classes.len();
    if resumed_units + resumed_classes > 0 {
        log::info!("resuming: {resumed_units} units and {resumed_classes} classes already done");
    }
    let mut budget = options.budget.unwrap_or(usize::MAX);

    // Enumeration.
    let pending: Vec<usize> = (0..plan.unit_count())
        .filter(|u| !progress.units.contains_key(u))
        .collect();
    let run_now = &pending[..pending.len().min(budget)];
    budget -= run_now.len();
    let fresh = options.exec.map(run_now, |&u| {
        let found = plan.run_unit(u);
        if let Some(w) = &writer {
            w.unit(u, &found)?;
        }
        Ok(found)
    });
    let fresh: Vec<Vec<Found>> = fresh.into_iter().collect::<Result<_, SearchError>>()?;
    let units_done = resumed_units + run_now.len();
    let merged = merge(
        progress
            .units
            .into_values()
            .flatten()
            .chain(fresh.into_iter().flatten()),
    );
    if units_done < plan.unit_count() {
        let atlas = plan.atlas(merged, false, units_done);
        return Err(SearchError::BudgetExhausted {
            done: units_done,
            total: plan.unit_count() + atlas.len(),
            atlas: Box::new(atlas),
        });
    }

    let (box_lower, box_upper) = box_bounds(n);
    for (bits, w) in &merged {
        reverify(table, *bits, w, &box_lower, &box_upper, "class witness")?;
    }

    // Witness search per class.
    let mut conant: BTreeMap<ProfileBits, Option<Vec<i64>>> = progress.classes;
    let pending: Vec<ProfileBits> = merged
        .iter()
        .map(|(bits, _)| *bits)
        .filter(|bits| !conant.contains_key(bits))
        .collect();
    let run_now = &pending[..pending.len().min(budget)];
    let fresh: Vec<Result<ClassOutcome, SearchError>> = options.exec.map(run_now, |&bits| {
        let found = conant_search(table, bits);
        if let Some(w) = &writer {
            w.class(bits, found.as_deref())?;
        }
        Ok((bits, found))
    });
    for item in fresh {
        let (bits, found) = item?;
        conant.insert(bits, found);
    }

    let classes_done = merged
        .iter()
        .filter(|(b, _)| conant.contains_key(b))
        .count();
    let mut atlas = plan.atlas(merged, true, plan.unit_count());
    if classes_done < atlas.len() {
        let total = plan.unit_count() + atlas.len();
        atlas.complete = false;
        atlas.checkpoint = Some(super::Cursor {
            strategy,
            next_unit: plan.unit_count() + classes_done,
            total_units: total,
        });
        return Err(SearchError::BudgetExhausted {
            done: plan.unit_count() + classes_done,
            total,
            atlas: Box::new(atlas),
        });
    }

    let (lower, upper) = conant_bounds(n);
    let (mut satisfied, mut missing) = (0, 0);
    for record in &mut atlas.records {
        let bits = table.encode(&record.profile);
        match conant.get(&bits).cloned().flatten() {
            Some(w) => {
                reverify(table, bits, &w, &lower, &upper, "box witness")?;
                record.conant_witness =
                    Some(IntegralSpectrum::from_i64s(&w).expect("witness is a spectrum"));
                record.status = ConantStatus::Satisfied;
                satisfied += 1;
            }
            None => {
                log::error!(
                    "n = {n}: no witness with 2^i - 1 <= t_i <= 2^n - 1 for profile {:?} \
                     (class witness {})",
                    record.profile.member_triples(),
                    record.canonical_witness
                );
                record.status = ConantStatus::NoWitnessFound;
                missing += 1;
            }
        }
    }
    let wall_time = started.elapsed();
    log::info!(
        "n = {n}: {} classes, {satisfied} satisfied, {missing} without witness, {:.2?}",
        atlas.len(),
        wall_time
    );
    Ok(VerificationReport {
        atlas,
        satisfied,
        no_witness_found: missing,
        wall_time,
        resumed_units,
        resumed_classes,
    })
}
