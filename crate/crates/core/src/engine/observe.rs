//! Search events for instrumentation.
//!
//! Snapshots are only built when an observer is installed, so an uninstrumented solve pays
//! nothing for them.

use crate::config::{HeuristicPolicy, OrderMode};
use crate::lit::Lit;
use crate::trail::LevelId;

/// A live level as seen right before a backtrack.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelInfo {
    pub id: LevelId,
    /// Number of assigned literals.
    pub size: usize,
    pub decision: Option<Lit>,
}

/// Full state of one conflict backtrack, captured before any level is deleted.
#[derive(Clone, Debug)]
pub struct BacktrackSnapshot {
    pub order_mode: OrderMode,
    pub policy: HeuristicPolicy,
    pub conflict_level: LevelId,
    /// Learned clause, asserting literal first.
    pub learned: Vec<Lit>,
    /// Levels of the learned clause other than the conflict level, sorted.
    pub clause_levels: Vec<LevelId>,
    /// Sorted candidate assertion levels.
    pub candidates: Vec<LevelId>,
    pub chosen: LevelId,
    /// Live levels, ground included, sorted by id.
    pub levels: Vec<LevelInfo>,
    /// Direct dependencies `(j, i)` meaning `j < i`.
    pub edges: Vec<(LevelId, LevelId)>,
    /// Sorted deleted levels.
    pub deleted: Vec<LevelId>,
    pub undone: usize,
    pub locally_saved: usize,
}

/// A conflict whose learned clause is unit; every non-ground level is deleted.
#[derive(Clone, Debug)]
pub struct UnitRestart {
    pub conflict_level: LevelId,
    pub learned: Lit,
    pub deleted: Vec<LevelInfo>,
    pub undone: usize,
}

pub trait SearchObserver {
    fn on_backtrack(&mut self, _snapshot: &BacktrackSnapshot) {}

    fn on_unit_restart(&mut self, _event: &UnitRestart) {}

    /// A scheduled restart.
    fn on_restart(&mut self, _undone: usize) {}
}
