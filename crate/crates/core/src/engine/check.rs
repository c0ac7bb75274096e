//! Debug-time invariant checks. Violations are collected rather than raised so that test
//! harnesses can report them.

use crate::config::OrderMode;
use crate::lit::Var;
use crate::trail::{LBool, LevelSlot, Reason};

use super::{ConflictClause, Solver};

const ACYCLIC_CHECK_LIMIT: usize = 200;

impl Solver {
    fn violation(&mut self, what: String) {
        self.violations
            .push(format!("conflict {}: {}", self.stats.conflicts, what));
    }

    /// Checks run at every propagation fixpoint.
    pub(super) fn check_fixpoint(&mut self) {
        let mut found = Vec::new();
        if let Err(e) = self.db.check_watches() {
            found.push(e);
        }
        if let Err(e) = self.trail.check_partition() {
            found.push(e);
        }
        if let Err(e) = self.order.check_transpose() {
            found.push(e);
        }
        if self.order.num_live() <= ACYCLIC_CHECK_LIMIT {
            if let Err(e) = self.order.check_acyclic() {
                found.push(e);
            }
        }
        for (cref, clause) in self.db.iter() {
            let mut unassigned = 0;
            let mut satisfied = false;
            for &l in clause.lits() {
                match self.trail.value(l) {
                    LBool::True => satisfied = true,
                    LBool::Undef => unassigned += 1,
                    LBool::False => {}
                }
            }
            if !satisfied && unassigned <= 1 {
                found.push(format!(
                    "missed inference on clause {:?} {:?} ({} unassigned)",
                    cref,
                    clause.lits(),
                    unassigned
                ));
            }
        }
        for e in found {
            self.violation(e);
        }
    }

    /// Checks that the backtrack about to happen keeps every level of the learned clause.
    pub(super) fn check_candidate(
        &mut self,
        learned: &ConflictClause,
        assertion: LevelSlot,
        conflict_level: LevelSlot,
        dead: &[LevelSlot],
    ) {
        if let Some(l) = learned.levels.iter().find(|l| dead.contains(l)) {
            let msg = format!(
                "backtrack to {:?} deletes level {:?} of the learned clause",
                self.trail.level_id(assertion),
                self.trail.level_id(*l)
            );
            self.violation(msg);
        }
        if self.config.order_mode == OrderMode::Partial
            && !self.order.direct_above(conflict_level).is_empty()
        {
            let msg = format!(
                "conflict level {:?} has dependents",
                self.trail.level_id(conflict_level)
            );
            self.violation(msg);
        }
    }

    /// Checks run right after the levels of a backtrack are deleted, before the learned
    /// clause is asserted.
    pub(super) fn check_after_backtrack(&mut self, learned: &ConflictClause) {
        let mut found = Vec::new();
        if self.trail.value(learned.lits[0]) != LBool::Undef
            || !learned.lits[1..].iter().all(|&l| self.trail.is_false(l))
        {
            found.push(format!(
                "learned clause {:?} is not asserting",
                learned.lits
            ));
        }
        if self.partial() && !self.order.direct_above(self.current).is_empty() {
            found.push(format!(
                "assertion level {:?} still has dependents",
                self.trail.level_id(self.current)
            ));
        }
        for i in 0..self.trail.num_vars() {
            let var = Var::from_index(i);
            if !self.trail.is_assigned(var) {
                continue;
            }
            let Reason::Clause(cref) = self.trail.reason(var) else {
                continue;
            };
            let clause = self.db.clause(cref);
            let lits = clause.lits();
            if clause.is_deleted() || lits[0].var() != var || !self.trail.is_true(lits[0]) {
                found.push(format!(
                    "reason of {:?} does not start with its literal",
                    var
                ));
                continue;
            }
            if !lits[1..].iter().all(|&l| self.trail.is_false(l)) {
                found.push(format!("reason of {:?} has a non-false antecedent", var));
                continue;
            }
            if self.partial() {
                let level = self.trail.slot_of_var(var);
                for &l in &lits[1..] {
                    let m = self.trail.slot_of_var(l.var());
                    if m != level && m != LevelSlot::GROUND && !self.order.has_dep(m, level) {
                        found.push(format!(
                            "reason of {:?} at level {:?} lacks dependency on level {:?}",
                            var,
                            self.trail.level_id(level),
                            self.trail.level_id(m)
                        ));
                    }
                }
            }
        }
        for e in found {
            self.violation(e);
        }
    }
}
