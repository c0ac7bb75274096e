//! Search statistics.

use serde::{Deserialize, Serialize};

/// Counters collected during one solve. All counters only grow during a solve.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveStats {
    /// Analyzed conflicts. A conflict at the ground level ends the search and is not counted.
    pub conflicts: u64,
    pub decisions: u64,
    /// Literals taken off the propagation queue.
    pub propagations: u64,
    /// Watch-list clause visits during propagation.
    pub clause_checks: u64,
    /// Assignments removed by conflict backtracks and restarts.
    pub undone_total: u64,
    pub conflicts_multi_candidate: u64,
    pub candidate_count_sum_when_multi: u64,
    /// Assignments in levels newer than the assertion level that a backtrack kept.
    pub locally_saved_total: u64,
    pub restarts: u64,
    pub learned: u64,
    pub deleted: u64,
    pub wall_time: f64,
}

impl SolveStats {
    pub fn undos_per_conflict(&self) -> f64 {
        ratio(self.undone_total, self.conflicts)
    }

    pub fn checks_per_conflict(&self) -> f64 {
        ratio(self.clause_checks, self.conflicts)
    }

    pub fn multi_candidate_fraction(&self) -> f64 {
        ratio(self.conflicts_multi_candidate, self.conflicts)
    }

    pub fn avg_candidates_when_multi(&self) -> f64 {
        ratio(
            self.candidate_count_sum_when_multi,
            self.conflicts_multi_candidate,
        )
    }
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}
