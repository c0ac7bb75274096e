//! A CDCL SAT solver whose decision levels are partially ordered.
//!
//! Propagation records which levels each implied literal depends on. A conflict then only
//! deletes the levels that depend on the chosen assertion level, instead of every level newer
//! than it, and the choice among several valid assertion levels is left to a heuristic. A
//! total-order mode gives classical CDCL for comparison.
//!
//! ```
//! use posat_core::{RawFormula, Solver, SolverConfig, Verdict};
//!
//! let formula = RawFormula::from_dimacs_clauses(&[&[1, 2], &[-1, 2], &[1, -2]]);
//! let mut solver = Solver::new(&formula, SolverConfig::default());
//! assert_eq!(solver.solve(), Verdict::Sat(vec![true, true]));
//! ```

pub mod clausedb;
pub mod config;
pub mod deporder;
pub mod dimacs;
pub mod engine;
pub mod generate;
pub mod lit;
pub mod stats;
pub mod trail;

pub use config::{DepCounting, HeuristicPolicy, OrderMode, RestartStrategy, SolverConfig};
pub use dimacs::{
    parse_cnf, verify_model, write_result, ParseError, RawFormula, UnknownReason, Verdict,
};
pub use engine::Solver;
pub use lit::{Lit, Var};
pub use stats::SolveStats;
pub use trail::{LevelId, LevelSlot};
