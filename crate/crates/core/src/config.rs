//! Solver configuration.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::deporder::DEFAULT_MATRIX_THRESHOLD;
use crate::lit::Var;

/// How decision levels are ordered.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum OrderMode {
    /// Classical CDCL: levels form a stack.
    Total,
    /// Levels are ordered by the dependencies recorded during propagation.
    Partial,
}

/// Choice of the assertion level among the candidates of a conflict.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum HeuristicPolicy {
    /// The most recently created candidate.
    Chronological,
    /// Fewest assignments in levels depending on the candidate.
    LeastUndos,
    MostUndos,
    /// Fewest conflict levels not already below the candidate.
    LeastDeps,
    MostDeps,
}

impl HeuristicPolicy {
    pub const ALL: [HeuristicPolicy; 5] = [
        HeuristicPolicy::Chronological,
        HeuristicPolicy::LeastUndos,
        HeuristicPolicy::MostUndos,
        HeuristicPolicy::LeastDeps,
        HeuristicPolicy::MostDeps,
    ];

    pub fn name(self) -> &'static str {
        match self {
            HeuristicPolicy::Chronological => "chrono",
            HeuristicPolicy::LeastUndos => "least-undos",
            HeuristicPolicy::MostUndos => "most-undos",
            HeuristicPolicy::LeastDeps => "least-deps",
            HeuristicPolicy::MostDeps => "most-deps",
        }
    }
}

impl fmt::Display for HeuristicPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown {kind} `{value}`")]
pub struct ConfigParseError {
    kind: &'static str,
    value: String,
}

impl FromStr for HeuristicPolicy {
    type Err = ConfigParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        HeuristicPolicy::ALL
            .into_iter()
            .find(|h| h.name() == s)
            .ok_or_else(|| ConfigParseError {
                kind: "heuristic",
                value: s.to_string(),
            })
    }
}

/// Whether the dependency heuristics treat a transitively implied dependency as existing.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum DepCounting {
    Closure,
    Direct,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum RestartStrategy {
    /// Restart when recent learned clauses have a worse lbd than the global average.
    LbdAdaptive,
    /// Luby sequence scaled by a number of conflicts.
    Luby,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub order_mode: OrderMode,
    /// Ignored in total order mode.
    pub heuristic: HeuristicPolicy,
    pub dep_counting: DepCounting,
    pub phase_saving: bool,
    pub matrix_threshold: usize,
    pub restart_strategy: RestartStrategy,
    pub random_seed: u64,
    /// Probability of a random decision variable.
    pub random_var_freq: f64,
    pub conflict_budget: Option<u64>,
    pub minimize: bool,
    pub var_decay: f64,
    pub clause_decay: f64,
    pub first_reduce: u64,
    pub reduce_increment: u64,
    pub lbd_queue_len: usize,
    pub restart_margin: f64,
    pub luby_unit: u64,
    /// Variables tried first, in order, before falling back to activity.
    pub decision_priority: Option<Vec<Var>>,
    /// Run full-scan invariant checks after every backtrack and at every propagation fixpoint.
    pub check_invariants: bool,
}

impl Default for SolverConfig {
    fn default() -> SolverConfig {
        SolverConfig {
            order_mode: OrderMode::Partial,
            heuristic: HeuristicPolicy::Chronological,
            dep_counting: DepCounting::Closure,
            phase_saving: false,
            matrix_threshold: DEFAULT_MATRIX_THRESHOLD,
            restart_strategy: RestartStrategy::LbdAdaptive,
            random_seed: 0,
            random_var_freq: 0.0,
            conflict_budget: None,
            minimize: true,
            var_decay: 0.95,
            clause_decay: 0.999,
            first_reduce: 20_000,
            reduce_increment: 500,
            lbd_queue_len: 100,
            restart_margin: 0.7,
            luby_unit: 32,
            decision_priority: None,
            check_invariants: false,
        }
    }
}

/// Labels of the compared solver variants, in table order.
pub const PRESET_LABELS: [&str; 7] = [
    "TO",
    "TO-phase",
    "PO",
    "PO-least-undos",
    "PO-most-undos",
    "PO-least-deps",
    "PO-most-deps",
];

impl SolverConfig {
    pub fn total(phase_saving: bool) -> SolverConfig {
        SolverConfig {
            order_mode: OrderMode::Total,
            phase_saving,
            ..SolverConfig::default()
        }
    }

    pub fn partial(heuristic: HeuristicPolicy) -> SolverConfig {
        SolverConfig {
            order_mode: OrderMode::Partial,
            heuristic,
            ..SolverConfig::default()
        }
    }

    /// One of [`PRESET_LABELS`].
    pub fn preset(label: &str) -> Option<SolverConfig> {
        Some(match label {
            "TO" => SolverConfig::total(false),
            "TO-phase" => SolverConfig::total(true),
            "PO" => SolverConfig::partial(HeuristicPolicy::Chronological),
            "PO-least-undos" => SolverConfig::partial(HeuristicPolicy::LeastUndos),
            "PO-most-undos" => SolverConfig::partial(HeuristicPolicy::MostUndos),
            "PO-least-deps" => SolverConfig::partial(HeuristicPolicy::LeastDeps),
            "PO-most-deps" => SolverConfig::partial(HeuristicPolicy::MostDeps),
            _ => return None,
        })
    }
}
