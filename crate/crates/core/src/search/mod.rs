//! Exact searches over colorings of `[k]^n`.
//!
//! - [`max_rf_colors`]: branch-and-bound for the largest rainbow-free color count.
//! - [`enumerate_independent_sets`] / [`enumerate_minimal_rf`]: minimal colorings for `k = 3`.
//! - [`complete`] / [`find_forced_cell`]: extension of partial colorings.

mod arrangements;
mod completion;
mod independent;
mod merge;

use std::fmt;
use std::time::{Duration, Instant};

use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::hypercube::LineTemplate;

pub use arrangements::{arrangement, arrangement_codes, ARRANGEMENT_DOMINANT};
pub use completion::{complete, find_forced_cell, ForcedCell};
pub use independent::{enumerate_independent_sets, enumerate_minimal_rf, orbit_representatives};
pub use merge::{lower_bound_unsatisfied, max_rf_colors, MergeState};

/// Budgets and switches shared by every search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub time_limit: Option<Duration>,
    pub worker_count: usize,
    pub symmetry_reduction: bool,
    pub node_limit: Option<u64>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            time_limit: None,
            worker_count: 1,
            symmetry_reduction: true,
            node_limit: None,
        }
    }
}

impl SearchConfig {
    pub fn with_workers(mut self, workers: usize) -> Self {
        self.worker_count = workers;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.worker_count == 0 {
            return Err(Error::InvalidArgument(
                "worker_count must be at least 1".into(),
            ));
        }
        if self.time_limit == Some(Duration::ZERO) {
            return Err(Error::InvalidArgument("time limit must be positive".into()));
        }
        if self.node_limit == Some(0) {
            return Err(Error::InvalidArgument("node limit must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    /// The search space was exhausted; the value is exact.
    Optimal,
    /// A budget ran out; the witness is valid but possibly not best.
    FeasibleOnly,
    /// The search space was exhausted without a solution.
    Infeasible,
    /// A budget ran out before any conclusion.
    Timeout,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Optimal => "OPTIMAL",
            Status::FeasibleOnly => "FEASIBLE_ONLY",
            Status::Infeasible => "INFEASIBLE",
            Status::Timeout => "TIMEOUT",
        })
    }
}

/// Why a completion is impossible, when a short reason exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// The assigned cells already contain this rainbow line.
    RainbowLine(LineTemplate),
    /// No color can be placed on this cell.
    ForcedCell(ForcedCell),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub status: Status,
    /// Number of colors of the witness (or target count for completions).
    pub best_value: usize,
    pub witness: Option<Coloring>,
    pub nodes_explored: u64,
    pub certificate: Option<Certificate>,
}

impl SearchOutcome {
    /// `ah(k, n)` when the search proved optimality.
    pub fn anti_hales_jewett(&self) -> Option<usize> {
        (self.status == Status::Optimal).then_some(self.best_value + 1)
    }
}

/// Re-checks a witness with the coloring module before it is reported.
pub(crate) fn verify_witness(witness: &Coloring, colors: usize) -> Result<()> {
    if !witness.is_total() {
        return Err(Error::WitnessRejected("witness is partial".into()));
    }
    if let Some(line) = witness.rainbow_lines()?.into_iter().next() {
        return Err(Error::WitnessRejected(format!("rainbow line {line}")));
    }
    let distinct = witness.distinct_colors();
    if distinct != colors {
        return Err(Error::WitnessRejected(format!(
            "witness has {distinct} colors, claimed {colors}"
        )));
    }
    Ok(())
}

/// Deadline and node budget shared by cooperating workers.
#[derive(Debug)]
pub(crate) struct Budget {
    deadline: Option<Instant>,
    node_limit: Option<u64>,
    nodes: std::sync::atomic::AtomicU64,
    stopped: std::sync::atomic::AtomicBool,
}

impl Budget {
    pub(crate) fn new(config: &SearchConfig) -> Self {
        Budget {
            deadline: config.time_limit.map(|d| Instant::now() + d),
            node_limit: config.node_limit,
            nodes: Default::default(),
            stopped: Default::default(),
        }
    }

    /// Counts `batch` nodes; returns false once the budget is exhausted.
    pub(crate) fn charge(&self, batch: u64) -> bool {
        use std::sync::atomic::Ordering::Relaxed;
        let total = self.nodes.fetch_add(batch, Relaxed) + batch;
        if self.node_limit.is_some_and(|limit| total > limit)
            || self.deadline.is_some_and(|d| Instant::now() >= d)
        {
            self.stopped.store(true, Relaxed);
        }
        !self.stopped.load(Relaxed)
    }

    pub(crate) fn stopped(&self) -> bool {
        self.stopped.load(std::sync::atomic::Ordering::Relaxed)
    }
}
