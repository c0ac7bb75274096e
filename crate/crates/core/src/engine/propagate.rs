use crate::clausedb::ClauseRef;
use crate::config::OrderMode;
use crate::trail::{LBool, LevelSlot, Reason};

use super::Solver;

impl Solver {
    /// Unit propagation to fixpoint. Returns a falsified clause if one is found; its level is
    /// left in `conflict_level`.
    pub(super) fn propagate(&mut self) -> Option<ClauseRef> {
        let record = self.config.order_mode == OrderMode::Partial;
        while let Some(p) = self.trail.pop_pending() {
            self.stats.propagations += 1;
            let level = self.trail.slot_of_var(p.var());
            let false_lit = !p;
            let mut watchers = std::mem::take(&mut self.db.watches[false_lit.code()]);
            let mut kept = 0;
            let mut next = 0;
            let mut conflict = None;

            while next < watchers.len() {
                let cref = watchers[next];
                next += 1;
                self.stats.clause_checks += 1;

                let lits = self.db.lits_mut(cref);
                if lits[0] == false_lit {
                    lits.swap(0, 1);
                }
                debug_assert_eq!(lits[1], false_lit);
                let other = lits[0];

                if self.trail.is_true(other) {
                    watchers[kept] = cref;
                    kept += 1;
                    if record {
                        let m = self.trail.slot_of_var(other.var());
                        if m != level {
                            self.order.add_dep(m, level);
                        }
                    }
                    continue;
                }

                if let Some(k) = (2..lits.len()).find(|&k| !self.trail.is_false(lits[k])) {
                    lits.swap(1, k);
                    let watch = lits[1];
                    self.db.watches[watch.code()].push(cref);
                    continue;
                }

                watchers[kept] = cref;
                kept += 1;
                if self.trail.value(other) == LBool::Undef {
                    self.trail.assign(other, level, Reason::Clause(cref));
                    if record {
                        let lits = self.db.clause(cref).lits();
                        for &l in &lits[1..] {
                            let m = self.trail.slot_of_var(l.var());
                            if m != level {
                                self.order.add_dep(m, level);
                            }
                        }
                    }
                } else {
                    conflict = Some(cref);
                    break;
                }
            }

            while next < watchers.len() {
                watchers[kept] = watchers[next];
                kept += 1;
                next += 1;
            }
            watchers.truncate(kept);
            debug_assert!(self.db.watches[false_lit.code()].is_empty());
            self.db.watches[false_lit.code()] = watchers;

            if conflict.is_some() {
                self.conflict_level = level;
                return conflict;
            }
        }
        self.conflict_level = LevelSlot::GROUND;
        None
    }
}
