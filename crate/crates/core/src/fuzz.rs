//! Seeded fuzz campaigns: realize a random class, apply random regular moves
//! and check that the invariant tuple never changes.
//!
//! Trial `k` of a campaign with seed `s` draws from ChaCha8 stream `k` of
//! seed `s`, so trials are independent and may run in any order or in
//! parallel without changing the report.

use std::thread;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagram::BouquetDiagram;
use crate::error::{Error, Result};
use crate::invariants::{canonical_cyclic_word, invariants, InvariantTuple, Symbol};
use crate::moves::{apply_edit, apply_move, checked, random_move_applied, Script, ScriptStep};
use crate::normal_form::realize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzConfig {
    pub seed: u64,
    pub steps: usize,
    pub trials: usize,
    /// Loop counts are drawn uniformly from `1..=max_loops`.
    pub max_loops: usize,
    /// Worker threads; 0 means one per available core.
    pub threads: usize,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig { seed: 0, steps: 20, trials: 100, max_loops: 3, threads: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FailureKind {
    /// A move changed the invariant tuple.
    InvariantChanged { before: InvariantTuple, after: InvariantTuple },
    /// Generating or applying a move failed.
    MoveFailed(String),
}

/// A failed trial with a script that replays it from its start diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzFailure {
    pub trial: usize,
    /// Index of the offending step in `script.steps` (or of the step that
    /// could not be produced).
    pub step: usize,
    pub kind: FailureKind,
    pub script: Script,
}

impl std::fmt::Display for FuzzFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.kind {
            FailureKind::InvariantChanged { before, after } => {
                write!(f, "trial {} step {}: invariants changed from {before} to {after}", self.trial, self.step)
            }
            FailureKind::MoveFailed(e) => write!(f, "trial {} step {}: {e}", self.trial, self.step),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FuzzReport {
    pub trials: usize,
    pub moves_applied: usize,
    pub failures: Vec<FuzzFailure>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Outcome of one trial: the script it ran and the failure, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    pub script: Script,
    pub failure: Option<FuzzFailure>,
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// A uniformly random invariant tuple for `n` loops.
pub fn random_tuple(n: usize, seed: u64) -> Result<InvariantTuple> {
    if n == 0 {
        return Err(Error::IndexOutOfRange("a bouquet needs at least one loop".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut word: Vec<Symbol> = (0..2 * n).map(Symbol::from_rank).collect();
    word.shuffle(&mut rng);
    let h = (0..n).map(|_| rng.random_bool(0.5)).collect();
    let w = (0..n).map(|_| rng.random_bool(0.5)).collect();
    InvariantTuple::new(canonical_cyclic_word(&word)?, h, w)
}

/// A random valid diagram: a realized random class with `n` in
/// `1..=max_loops`, scrambled by `moves` random regular moves.
pub fn random_diagram(seed: u64, max_loops: usize, moves: usize) -> Result<BouquetDiagram> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=max_loops.max(1));
    let mut d = realize(&random_tuple(n, rng.next_u64())?)?;
    let mut crossings = checked(&d)?;
    for _ in 0..moves {
        (_, d, crossings) = random_move_applied(&d, &crossings, None, rng.next_u64())?;
    }
    Ok(d)
}

/// Run trial `trial` of the campaign seeded with `seed`.
pub fn run_trial(seed: u64, trial: usize, steps: usize, max_loops: usize) -> TrialOutcome {
    let mut rng = trial_rng(seed, trial);
    let n = rng.random_range(1..=max_loops.max(1));
    let tuple_seed = rng.next_u64();
    let mut script = Script::default();
    let fail = |script: &Script, step, kind| FuzzFailure { trial, step, kind, script: script.clone() };
    let start = match random_tuple(n, tuple_seed).and_then(|t| realize(&t)) {
        Ok(d) => d,
        Err(e) => {
            let failure = fail(&script, 0, FailureKind::MoveFailed(format!("realize: {e}")));
            return TrialOutcome { script, failure: Some(failure) };
        }
    };
    script.diagram = Some(start.clone());
    let expected = invariants(&start).expect("realized diagrams are valid");
    let mut crossings = checked(&start).expect("realized diagrams are valid");
    let mut d = start;
    for step in 0..steps {
        let (m, next, after) = match random_move_applied(&d, &crossings, None, rng.next_u64()) {
            Ok(v) => v,
            Err(e) => {
                let failure = fail(&script, step, FailureKind::MoveFailed(e.to_string()));
                return TrialOutcome { script, failure: Some(failure) };
            }
        };
        script.steps.push(ScriptStep::Move(m));
        let kind = match invariants(&next) {
            Ok(got) if got == expected => None,
            Ok(got) => Some(FailureKind::InvariantChanged { before: expected.clone(), after: got }),
            Err(e) => Some(FailureKind::MoveFailed(e.to_string())),
        };
        if let Some(kind) = kind {
            let failure = fail(&script, step, kind);
            return TrialOutcome { script, failure: Some(failure) };
        }
        d = next;
        crossings = after;
    }
    TrialOutcome { script, failure: None }
}

/// Run a whole campaign. Trials are spread over worker threads; the report
/// does not depend on how many.
pub fn run(config: &FuzzConfig) -> FuzzReport {
    let workers = match config.threads {
        0 => thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        t => t,
    }
    .clamp(1, config.trials.max(1));
    let mut results: Vec<(usize, TrialOutcome)> = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    (w..config.trials)
                        .step_by(workers)
                        .map(|k| (k, run_trial(config.seed, k, config.steps, config.max_loops)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("fuzz worker panicked")).collect()
    });
    results.sort_by_key(|(k, _)| *k);
    let mut report = FuzzReport { trials: config.trials, ..FuzzReport::default() };
    for (_, outcome) in results {
        report.moves_applied += outcome.script.steps.len();
        report.failures.extend(outcome.failure);
    }
    report
}

/// Result of replaying a script.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Replay {
    pub diagram: BouquetDiagram,
    /// First regular move that changed the invariants: step index, tuples
    /// before and after.
    pub violation: Option<(usize, InvariantTuple, InvariantTuple)>,
}

/// Replay `script` from its own diagram or from `start`. Regular moves are
/// checked for invariance; edits are applied without checks.
pub fn replay(script: &Script, start: Option<&BouquetDiagram>) -> Result<Replay> {
    let mut d = match (&script.diagram, start) {
        (Some(d), _) | (None, Some(d)) => d.clone(),
        (None, None) => return Err(Error::Parse("script has no DIAGRAM line and no start diagram".into())),
    };
    let mut current = invariants(&d)?;
    for (k, step) in script.steps.iter().enumerate() {
        match step {
            ScriptStep::Move(m) => {
                d = apply_move(&d, m)?;
                let next = invariants(&d)?;
                if next != current {
                    return Ok(Replay { diagram: d, violation: Some((k, current, next)) });
                }
            }
            ScriptStep::Edit(e) => {
                d = apply_edit(&d, e)?;
                current = invariants(&d)?;
            }
        }
    }
    Ok(Replay { diagram: d, violation: None })
}
