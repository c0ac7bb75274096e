use crate::clausedb::{compute_lbd, ClauseRef};
use crate::lit::Lit;
use crate::trail::{LevelSlot, Reason};

use super::{ConflictClause, Solver};

impl Solver {
    /// First-UIP analysis of a conflict found while propagating the level in `level`.
    pub(super) fn analyze(&mut self, conflict: ClauseRef, level: LevelSlot) -> ConflictClause {
        let mut learned = vec![Lit::from_dimacs(1)];
        let mut open = 0usize;
        let mut index = self.trail.level(level).sequence().len();
        let mut cref = conflict;
        let mut uip: Option<Lit> = None;

        loop {
            self.touch_clause(cref);
            let start = usize::from(uip.is_some());
            let len = self.db.clause(cref).lits().len();
            for k in start..len {
                let q = self.db.clause(cref).lits()[k];
                let v = q.var();
                if self.seen[v.index()] {
                    continue;
                }
                let slot = self.trail.slot_of_var(v);
                if slot == LevelSlot::GROUND {
                    continue;
                }
                self.seen[v.index()] = true;
                self.vsids.bump(v);
                if slot == level {
                    open += 1;
                } else {
                    learned.push(q);
                }
            }

            let p = loop {
                index -= 1;
                let l = self.trail.level(level).sequence()[index];
                if self.seen[l.var().index()] {
                    break l;
                }
            };
            self.seen[p.var().index()] = false;
            uip = Some(p);
            open -= 1;
            if open == 0 {
                break;
            }
            cref = self
                .reason_clause(p.var())
                .expect("a non-decision literal of the conflict level has a reason clause");
        }
        learned[0] = !uip.unwrap();

        self.to_clear.clear();
        self.to_clear.extend(learned[1..].iter().map(|l| l.var()));
        if self.config.minimize && learned.len() > 1 {
            self.minimize(&mut learned);
        }
        for v in self.to_clear.drain(..) {
            self.seen[v.index()] = false;
        }

        if learned.len() > 1 {
            let newest = (1..learned.len())
                .max_by_key(|&i| self.trail.level_of_var(learned[i].var()).unwrap())
                .unwrap();
            learned.swap(1, newest);
        }
        let mut levels: Vec<LevelSlot> = learned[1..]
            .iter()
            .map(|l| self.trail.slot_of_var(l.var()))
            .collect();
        levels.sort_unstable();
        levels.dedup();
        let lbd = levels.len() as u32 + 1;
        ConflictClause {
            lits: learned,
            levels,
            lbd,
        }
    }

    /// Bumps a clause taking part in the analysis and refreshes the lbd of learned ones.
    fn touch_clause(&mut self, cref: ClauseRef) {
        let clause = self.db.clause(cref);
        if !clause.is_learned() {
            return;
        }
        let trail = &self.trail;
        let lbd = compute_lbd(clause.lits(), |l| trail.level_of_var(l.var()));
        if lbd < clause.lbd() {
            self.db.set_lbd(cref, lbd);
        }
        self.db.bump_clause_activity(cref);
    }

    /// Removes literals implied by the rest of the clause.
    fn minimize(&mut self, learned: &mut Vec<Lit>) {
        let max_slot = learned[1..]
            .iter()
            .map(|l| self.trail.slot_of_var(l.var()).index())
            .max()
            .unwrap();
        if self.level_mark.len() <= max_slot {
            self.level_mark.resize(max_slot + 1, false);
        }
        let marked: Vec<usize> = learned[1..]
            .iter()
            .map(|l| self.trail.slot_of_var(l.var()).index())
            .collect();
        for &slot in &marked {
            self.level_mark[slot] = true;
        }

        let mut keep = 1;
        for i in 1..learned.len() {
            let l = learned[i];
            let redundant =
                matches!(self.trail.reason(l.var()), Reason::Clause(_)) && self.redundant(l);
            if !redundant {
                learned[keep] = l;
                keep += 1;
            }
        }

        for slot in marked {
            self.level_mark[slot] = false;
        }
        learned.truncate(keep);
    }

    /// Whether the false literal `lit` follows from the literals currently marked as seen.
    ///
    /// Every implied literal descends from its level's decision, so a literal whose level is
    /// not among the clause's levels can never be redundant.
    fn redundant(&mut self, lit: Lit) -> bool {
        self.analyze_stack.clear();
        self.analyze_stack.push(lit);
        let top = self.to_clear.len();
        while let Some(q) = self.analyze_stack.pop() {
            let cref = self.reason_clause(q.var()).unwrap();
            let len = self.db.clause(cref).lits().len();
            for k in 1..len {
                let r = self.db.clause(cref).lits()[k];
                let v = r.var();
                let slot = self.trail.slot_of_var(v);
                if self.seen[v.index()] || slot == LevelSlot::GROUND {
                    continue;
                }
                let marked = self.level_mark.get(slot.index()).copied().unwrap_or(false);
                if marked && matches!(self.trail.reason(v), Reason::Clause(_)) {
                    self.seen[v.index()] = true;
                    self.analyze_stack.push(r);
                    self.to_clear.push(v);
                } else {
                    for v in self.to_clear.drain(top..) {
                        self.seen[v.index()] = false;
                    }
                    return false;
                }
            }
        }
        true
    }
}
