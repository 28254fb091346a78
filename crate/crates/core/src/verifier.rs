//! Exhaustive proportional `(k, ℓ)`-choosability.
//!
//! The assignment index space is cut into contiguous chunks handed out in
//! increasing order. Workers share two atomics: the next chunk number and
//! the smallest failing index found so far. A worker stops a chunk as soon
//! as it passes that index, so the reported witness is always the failing
//! assignment with the smallest index, whatever the number of workers.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::assignment::{
    AssignmentError, AssignmentSpace, Color, DigitCursor, EnumerationLimit, EnumerationMode,
    ListAssignment, PaletteSymmetry,
};
use crate::graph::Graph;
use crate::solver::{Pruning, Solver, SolverOptions, VertexOrder};

/// Progress lines go to standard error every this many assignments.
pub const PROGRESS_INTERVAL: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    pub mode: EnumerationMode,
    /// Worker threads; `0` and `1` both mean "run on the calling thread".
    pub jobs: usize,
    pub limit: EnumerationLimit,
    /// Keep going after the first witness and count every failing assignment.
    pub exhaustive: bool,
    pub progress: bool,
    pub solver: SolverOptions,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            mode: EnumerationMode::Full,
            jobs: 1,
            limit: EnumerationLimit::default(),
            exhaustive: false,
            progress: false,
            solver: SolverOptions::default(),
        }
    }
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Assignment(#[from] AssignmentError),
    #[error("assignment {index} failed the search but an independent re-check colored it")]
    WitnessRecheck { index: u64 },
}

impl VerifyError {
    /// Whether the error is a resource limit rather than bad input.
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            VerifyError::Assignment(
                AssignmentError::CapExceeded { .. } | AssignmentError::SpaceTooLarge { .. }
            )
        )
    }
}

/// A `(k, ℓ)`-assignment with no proportional coloring, with its index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub index: u64,
    pub assignment: ListAssignment,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub k: usize,
    pub ell: Color,
    pub choosable: bool,
    pub witness: Option<Witness>,
    /// Assignments (full mode) or orbit representatives (canonical mode)
    /// checked, counting only those with index up to the witness.
    pub assignments_checked: u64,
    /// Set in exhaustive runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_assignments: Option<u64>,
    pub mode: EnumerationMode,
    #[serde(rename = "duration_ms", serialize_with = "as_millis")]
    pub duration: Duration,
}

fn as_millis<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u64(d.as_millis() as u64)
}

#[derive(Debug, Clone)]
struct ChunkResult {
    start: u64,
    checked: u64,
    witness: Option<u64>,
    failures: u64,
}

struct Job<'a> {
    graph: &'a Graph,
    space: &'a AssignmentSpace,
    symmetry: Option<PaletteSymmetry>,
    options: &'a VerifyOptions,
    chunk_size: u64,
    next_chunk: AtomicU64,
    best: AtomicU64,
    processed: AtomicU64,
}

impl Job<'_> {
    fn worker(&self) -> Vec<ChunkResult> {
        let mut solver = Solver::new(self.graph, self.options.solver);
        let mut lists: Vec<&[Color]> = Vec::with_capacity(self.space.n());
        let mut results = Vec::new();
        loop {
            let chunk = self.next_chunk.fetch_add(1, Ordering::Relaxed);
            let Some(start) = chunk
                .checked_mul(self.chunk_size)
                .filter(|&s| s < self.space.len())
            else {
                break;
            };
            if !self.options.exhaustive && start > self.best.load(Ordering::Relaxed) {
                break;
            }
            let end = start.saturating_add(self.chunk_size).min(self.space.len());
            let result = self.run_chunk(&mut solver, &mut lists, start, end);
            self.report_progress(result.checked);
            results.push(result);
        }
        results
    }

    fn run_chunk<'t>(
        &'t self,
        solver: &mut Solver<'_>,
        lists: &mut Vec<&'t [Color]>,
        start: u64,
        end: u64,
    ) -> ChunkResult {
        let table = self.space.table();
        let (k, ell) = (self.space.k(), self.space.ell());
        let mut cursor = DigitCursor::new(self.space, start, end);
        let mut result = ChunkResult {
            start,
            checked: 0,
            witness: None,
            failures: 0,
        };
        loop {
            let next = match &self.symmetry {
                None => cursor.current().map(|(i, _)| i),
                Some(symmetry) => symmetry.seek(&mut cursor),
            };
            let Some(index) = next else { break };
            if !self.options.exhaustive && index > self.best.load(Ordering::Relaxed) {
                break;
            }
            let (_, digits) = cursor.current().expect("cursor positioned in range");
            lists.clear();
            lists.extend(digits.iter().map(|&d| table.get(d)));
            result.checked += 1;
            if !solver.exists(lists, k, ell) {
                result.failures += 1;
                result.witness.get_or_insert(index);
                if !self.options.exhaustive {
                    self.best.fetch_min(index, Ordering::Relaxed);
                    break;
                }
            }
            cursor.step();
        }
        result
    }

    fn report_progress(&self, checked: u64) {
        if !self.options.progress || checked == 0 {
            return;
        }
        let before = self.processed.fetch_add(checked, Ordering::Relaxed);
        let after = before + checked;
        if after / PROGRESS_INTERVAL > before / PROGRESS_INTERVAL {
            eprintln!(
                "verify: {} assignments checked (index space {})",
                after,
                self.space.len()
            );
        }
    }
}

fn chunk_size(len: u64, jobs: usize) -> u64 {
    let target = len / (jobs as u64 * 64).max(1);
    target.clamp(1, 1 << 14)
}

/// Decides whether every `(k, ℓ)`-assignment of `g` admits a proportional
/// coloring. Canonical mode checks one assignment per palette-permutation
/// orbit, which decides the same question because permuting colors maps
/// proportional colorings to proportional colorings.
pub fn verify_choosable(
    g: &Graph,
    k: usize,
    ell: Color,
    options: &VerifyOptions,
) -> Result<Verdict, VerifyError> {
    let started = Instant::now();
    let space = AssignmentSpace::for_graph(g, k, ell)?;
    space.check_limit(options.limit)?;

    let jobs = options.jobs.max(1);
    let job = Job {
        graph: g,
        space: &space,
        symmetry: (options.mode == EnumerationMode::Canonical)
            .then(|| PaletteSymmetry::new(space.table())),
        options,
        chunk_size: chunk_size(space.len(), jobs),
        next_chunk: AtomicU64::new(0),
        best: AtomicU64::new(u64::MAX),
        processed: AtomicU64::new(0),
    };

    let results: Vec<ChunkResult> = if jobs == 1 {
        job.worker()
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..jobs).map(|_| scope.spawn(|| job.worker())).collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("verifier worker panicked"))
                .collect()
        })
    };

    let witness_index = results.iter().filter_map(|r| r.witness).min();
    let assignments_checked = match (witness_index, options.exhaustive) {
        (Some(w), false) => results
            .iter()
            .filter(|r| r.start <= w)
            .map(|r| r.checked)
            .sum(),
        _ => results.iter().map(|r| r.checked).sum(),
    };
    let failing_assignments = options
        .exhaustive
        .then(|| results.iter().map(|r| r.failures).sum());

    let witness = match witness_index {
        None => None,
        Some(index) => {
            let assignment = space.decode(index)?;
            let mut recheck = Solver::new(
                g,
                SolverOptions {
                    order: VertexOrder::Natural,
                    pruning: Pruning::NONE,
                },
            );
            if recheck.solve(&assignment).is_found() {
                return Err(VerifyError::WitnessRecheck { index });
            }
            Some(Witness { index, assignment })
        }
    };

    Ok(Verdict {
        k,
        ell,
        choosable: witness.is_none(),
        witness,
        assignments_checked,
        failing_assignments,
        mode: options.mode,
        duration: started.elapsed(),
    })
}

/// One row of a batch run.
#[derive(Debug, Clone)]
pub struct TableRow {
    pub label: String,
    pub graph: Graph,
    pub k: usize,
    pub ell: Color,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableRowReport {
    pub label: String,
    pub k: usize,
    pub ell: Color,
    #[serde(flatten)]
    pub outcome: RowOutcome,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowOutcome {
    Verdict(Verdict),
    Error(String),
}

impl TableRowReport {
    pub fn choosable(&self) -> Option<bool> {
        match &self.outcome {
            RowOutcome::Verdict(v) => Some(v.choosable),
            RowOutcome::Error(_) => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TableReport {
    pub rows: Vec<TableRowReport>,
}

/// Runs [`verify_choosable`] on every row in order. A failing row records
/// its error and the batch continues.
pub fn verify_table(rows: &[TableRow], options: &VerifyOptions) -> TableReport {
    let rows = rows
        .iter()
        .map(|row| TableRowReport {
            label: row.label.clone(),
            k: row.k,
            ell: row.ell,
            outcome: match verify_choosable(&row.graph, row.k, row.ell, options) {
                Ok(v) => RowOutcome::Verdict(v),
                Err(e) => RowOutcome::Error(e.to_string()),
            },
        })
        .collect();
    TableReport { rows }
}
