//! The search: propagation with dependency recording, conflict analysis, assertion level
//! choice, partial order backtracking, decisions and restarts.
//!
//! In partial order mode the solver keeps the following invariant: the level currently being
//! propagated (the *current* level) has no dependent level. It holds after a decision (a fresh
//! level), after a backtrack to `a` (every dependent of `a` is deleted), and propagation only
//! adds edges into the current level. Consequently the propagation queue only ever holds
//! literals of the current level, a conflict is always found at the current level, and
//! deleting that level alone never strands a dependent.

mod analyze;
mod check;
pub mod heuristic;
pub mod observe;
mod propagate;
pub mod restart;
pub mod vsids;

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clausedb::{ClauseDb, ClauseRef, Ingested};
use crate::config::{OrderMode, SolverConfig};
use crate::deporder::DepOrder;
use crate::dimacs::{RawFormula, UnknownReason, Verdict};
use crate::lit::{Lit, Var};
use crate::stats::SolveStats;
use crate::trail::{LBool, LevelId, LevelSlot, Reason, Trail};

use observe::{BacktrackSnapshot, LevelInfo, SearchObserver, UnitRestart};
use restart::Restarts;
use vsids::Vsids;

/// A learned clause ready for backtracking.
#[derive(Clone, Debug)]
pub struct ConflictClause {
    /// Asserting literal first; position 1 holds a literal of the newest other level.
    /// Assertion moves a literal of the assertion level there before the clause is stored.
    pub lits: Vec<Lit>,
    /// Slots of the levels of `lits[1..]`, deduplicated.
    pub levels: Vec<LevelSlot>,
    pub lbd: u32,
}

pub struct Solver {
    config: SolverConfig,
    db: ClauseDb,
    trail: Trail,
    order: DepOrder,
    vsids: Vsids,
    restarts: Restarts,
    rng: ChaCha8Rng,
    stats: SolveStats,
    current: LevelSlot,
    conflict_level: LevelSlot,
    trivially_unsat: bool,
    next_reduce: u64,
    reduce_interval: u64,
    interrupt: Arc<AtomicBool>,
    observer: Option<Box<dyn SearchObserver>>,
    violations: Vec<String>,
    // conflict analysis scratch
    seen: Vec<bool>,
    level_mark: Vec<bool>,
    to_clear: Vec<Var>,
    analyze_stack: Vec<Lit>,
}

impl Solver {
    pub fn new(formula: &RawFormula, config: SolverConfig) -> Solver {
        let n = formula.num_vars;
        let mut db = ClauseDb::new(n);
        db.set_activity_decay(config.clause_decay);
        let mut solver = Solver {
            db,
            trail: Trail::new(n),
            order: DepOrder::new(config.matrix_threshold),
            vsids: Vsids::new(n, config.var_decay),
            restarts: Restarts::new(&config),
            rng: ChaCha8Rng::seed_from_u64(config.random_seed),
            stats: SolveStats::default(),
            current: LevelSlot::GROUND,
            conflict_level: LevelSlot::GROUND,
            trivially_unsat: false,
            next_reduce: config.first_reduce,
            reduce_interval: config.first_reduce,
            interrupt: Arc::new(AtomicBool::new(false)),
            observer: None,
            violations: Vec::new(),
            seen: vec![false; n],
            level_mark: Vec::new(),
            to_clear: Vec::new(),
            analyze_stack: Vec::new(),
            config,
        };
        for clause in &formula.clauses {
            assert!(
                clause.iter().all(|l| l.var().index() < n),
                "literal outside the declared variables"
            );
            match solver.db.ingest_clause(clause, false) {
                Ingested::Empty => solver.trivially_unsat = true,
                Ingested::Unit(lit) => match solver.trail.value(lit) {
                    LBool::Undef => solver
                        .trail
                        .assign(lit, LevelSlot::GROUND, Reason::GroundUnit),
                    LBool::False => solver.trivially_unsat = true,
                    LBool::True => {}
                },
                Ingested::Stored(_) | Ingested::Tautology => {}
            }
        }
        solver
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn stats(&self) -> &SolveStats {
        &self.stats
    }

    /// Invariant violations found so far (only collected with `check_invariants`).
    pub fn violations(&self) -> &[String] {
        &self.violations
    }

    pub fn trail(&self) -> &Trail {
        &self.trail
    }

    pub fn order(&self) -> &DepOrder {
        &self.order
    }

    pub fn clauses(&self) -> &ClauseDb {
        &self.db
    }

    /// Flag that stops the search at the next conflict or decision once set.
    pub fn interrupt_handle(&self) -> Arc<AtomicBool> {
        Arc::clone(&self.interrupt)
    }

    pub fn set_interrupt(&mut self, flag: Arc<AtomicBool>) {
        self.interrupt = flag;
    }

    pub fn set_observer(&mut self, observer: Box<dyn SearchObserver>) {
        self.observer = Some(observer);
    }

    pub fn take_observer(&mut self) -> Option<Box<dyn SearchObserver>> {
        self.observer.take()
    }

    fn partial(&self) -> bool {
        self.config.order_mode == OrderMode::Partial
    }

    fn interrupted(&self) -> bool {
        self.interrupt.load(Ordering::Relaxed)
    }

    /// Runs the search to completion, budget exhaustion or interruption.
    pub fn solve(&mut self) -> Verdict {
        let start = Instant::now();
        let verdict = self.search();
        self.stats.wall_time = start.elapsed().as_secs_f64();
        verdict
    }

    fn search(&mut self) -> Verdict {
        if self.trivially_unsat {
            return Verdict::Unsat;
        }
        loop {
            if let Some(conflict) = self.propagate() {
                let level = self.conflict_level;
                if level == LevelSlot::GROUND {
                    return Verdict::Unsat;
                }
                if let Some(budget) = self.config.conflict_budget {
                    if self.stats.conflicts >= budget {
                        return Verdict::Unknown(UnknownReason::BudgetExhausted);
                    }
                }
                self.stats.conflicts += 1;
                let learned = self.analyze(conflict, level);
                self.restarts.on_conflict(learned.lbd);
                self.resolve_conflict(learned, level);
                self.vsids.decay();
                self.db.decay_clause_activities();
                if self.interrupted() {
                    return Verdict::Unknown(UnknownReason::Interrupted);
                }
                continue;
            }

            if self.config.check_invariants {
                self.check_fixpoint();
            }
            if self.restarts.should_restart() {
                self.restart();
                continue;
            }
            if self.stats.conflicts >= self.next_reduce {
                self.reduce_db();
            }
            if self.trail.all_assigned() {
                let model = (0..self.trail.num_vars())
                    .map(|i| self.trail.var_value(Var::from_index(i)).unwrap())
                    .collect();
                return Verdict::Sat(model);
            }
            if self.interrupted() {
                return Verdict::Unknown(UnknownReason::Interrupted);
            }
            self.decide();
        }
    }

    fn pick_branch_var(&mut self) -> Option<Var> {
        if let Some(priority) = &self.config.decision_priority {
            if let Some(&v) = priority.iter().find(|v| !self.trail.is_assigned(**v)) {
                return Some(v);
            }
        }
        if self.config.random_var_freq > 0.0 && self.rng.gen::<f64>() < self.config.random_var_freq
        {
            let index = self.rng.gen::<usize>();
            if let Some(v) = self.vsids.nth(index) {
                if !self.trail.is_assigned(v) {
                    return Some(v);
                }
            }
        }
        while let Some(v) = self.vsids.pop() {
            if !self.trail.is_assigned(v) {
                return Some(v);
            }
        }
        None
    }

    /// Opens a new level on the most active unassigned variable.
    pub fn decide(&mut self) -> Lit {
        let var = self
            .pick_branch_var()
            .expect("decide called with every variable assigned");
        let polarity = self.config.phase_saving && self.trail.saved_phase(var);
        let lit = var.lit(polarity);
        let (_, slot) = self.trail.new_level(lit);
        self.order.register(slot);
        self.current = slot;
        self.stats.decisions += 1;
        lit
    }

    fn delete(&mut self, dead: &[LevelSlot]) -> usize {
        let vsids = &mut self.vsids;
        let undone = self.trail.delete_levels(dead, |v| vsids.insert(v));
        self.order.remove_levels(dead);
        undone
    }

    fn non_ground_levels(&self) -> Vec<LevelSlot> {
        self.trail
            .live_levels()
            .map(|l| l.slot())
            .filter(|&s| s != LevelSlot::GROUND)
            .collect()
    }

    /// Deletes every non-ground level.
    fn restart(&mut self) {
        let dead = self.non_ground_levels();
        let undone = self.delete(&dead);
        self.current = LevelSlot::GROUND;
        self.stats.restarts += 1;
        self.stats.undone_total += undone as u64;
        self.restarts.restarted();
        if let Some(obs) = &mut self.observer {
            obs.on_restart(undone);
        }
    }

    fn reduce_db(&mut self) {
        let trail = &self.trail;
        let deleted = self.db.reduce_learned(|cref, clause| {
            let first = clause.lits()[0];
            trail.is_true(first) && trail.reason(first.var()) == Reason::Clause(cref)
        });
        self.stats.deleted += deleted as u64;
        self.reduce_interval += self.config.reduce_increment;
        self.next_reduce = self.stats.conflicts + self.reduce_interval;
    }

    fn level_info(&self, slot: LevelSlot) -> LevelInfo {
        let level = self.trail.level(slot);
        LevelInfo {
            id: level.id(),
            size: level.sequence().len(),
            decision: level.decision(),
        }
    }

    /// Backtracks after a conflict at `conflict_level` and asserts the learned clause.
    fn resolve_conflict(&mut self, learned: ConflictClause, conflict_level: LevelSlot) {
        self.stats.learned += 1;
        if learned.lits.len() == 1 {
            self.unit_restart(learned.lits[0], conflict_level);
            return;
        }

        let (assertion, candidates) = match self.config.order_mode {
            OrderMode::Total => {
                let a = *learned
                    .levels
                    .iter()
                    .max_by_key(|&&s| self.trail.level_id(s))
                    .unwrap();
                (a, vec![a])
            }
            OrderMode::Partial => {
                let candidates = self.order.maximal_of(&learned.levels);
                if candidates.len() > 1 {
                    self.stats.conflicts_multi_candidate += 1;
                    self.stats.candidate_count_sum_when_multi += candidates.len() as u64;
                }
                let a = heuristic::choose_assertion(
                    &candidates,
                    self.config.heuristic,
                    &learned.levels,
                    conflict_level,
                    &mut self.order,
                    &self.trail,
                    self.config.dep_counting,
                );
                (a, candidates)
            }
        };

        let dead = self.dead_levels(assertion, conflict_level);
        if self.config.check_invariants {
            self.check_candidate(&learned, assertion, conflict_level, &dead);
        }
        let assertion_id = self.trail.level_id(assertion);
        let locally_saved: usize = self
            .trail
            .live_levels()
            .filter(|l| l.id() > assertion_id && !dead.contains(&l.slot()))
            .map(|l| l.sequence().len())
            .sum();

        let snapshot = self
            .observer
            .is_some()
            .then(|| self.snapshot(&learned, conflict_level, &candidates, assertion, &dead));

        let undone = self.delete(&dead);
        self.stats.undone_total += undone as u64;
        self.stats.locally_saved_total += locally_saved as u64;
        self.current = assertion;

        if let (Some(mut snapshot), Some(obs)) = (snapshot, self.observer.as_mut()) {
            snapshot.undone = undone;
            snapshot.locally_saved = locally_saved;
            obs.on_backtrack(&snapshot);
        }
        if self.config.check_invariants {
            self.check_after_backtrack(&learned);
        }
        self.assert_learned(&learned, assertion);
    }

    /// Levels deleted by a backtrack to `assertion`.
    fn dead_levels(&mut self, assertion: LevelSlot, conflict_level: LevelSlot) -> Vec<LevelSlot> {
        match self.config.order_mode {
            OrderMode::Total => {
                let a = self.trail.level_id(assertion);
                self.trail
                    .live_levels()
                    .filter(|l| l.id() > a)
                    .map(|l| l.slot())
                    .collect()
            }
            OrderMode::Partial => {
                let mut dead = self.order.dependents_closure(assertion);
                if !dead.contains(&conflict_level) {
                    dead.push(conflict_level);
                }
                dead
            }
        }
    }

    fn snapshot(
        &mut self,
        learned: &ConflictClause,
        conflict_level: LevelSlot,
        candidates: &[LevelSlot],
        assertion: LevelSlot,
        dead: &[LevelSlot],
    ) -> BacktrackSnapshot {
        let id = |s: &LevelSlot| self.trail.level_id(*s);
        let sorted = |slots: &[LevelSlot]| {
            let mut ids: Vec<LevelId> = slots.iter().map(id).collect();
            ids.sort_unstable();
            ids
        };
        let mut levels: Vec<LevelInfo> = self
            .trail
            .live_levels()
            .map(|l| self.level_info(l.slot()))
            .collect();
        levels.sort_by_key(|l| l.id);
        let mut edges: Vec<(LevelId, LevelId)> =
            self.order.edges().map(|(j, i)| (id(&j), id(&i))).collect();
        edges.sort_unstable();
        BacktrackSnapshot {
            order_mode: self.config.order_mode,
            policy: self.config.heuristic,
            conflict_level: id(&conflict_level),
            learned: learned.lits.clone(),
            clause_levels: sorted(&learned.levels),
            candidates: sorted(candidates),
            chosen: id(&assertion),
            levels,
            edges,
            deleted: sorted(dead),
            undone: 0,
            locally_saved: 0,
        }
    }

    /// A unit learned clause: every non-ground level goes and the literal becomes a ground fact.
    fn unit_restart(&mut self, lit: Lit, conflict_level: LevelSlot) {
        let dead = self.non_ground_levels();
        let deleted: Vec<LevelInfo> = if self.observer.is_some() {
            dead.iter().map(|&s| self.level_info(s)).collect()
        } else {
            Vec::new()
        };
        let conflict_id = self.trail.level_id(conflict_level);
        let undone = self.delete(&dead);
        self.stats.undone_total += undone as u64;
        self.current = LevelSlot::GROUND;
        if let Some(obs) = &mut self.observer {
            obs.on_unit_restart(&UnitRestart {
                conflict_level: conflict_id,
                learned: lit,
                deleted,
                undone,
            });
        }
        self.trail
            .assign(lit, LevelSlot::GROUND, Reason::GroundUnit);
    }

    /// Stores the learned clause and propagates its asserting literal at `assertion`.
    ///
    /// The second watch goes to a literal of the assertion level. Any backtrack that
    /// unassigns some literal of the clause then also deletes the assertion level, so both
    /// watches are released together.
    fn assert_learned(&mut self, learned: &ConflictClause, assertion: LevelSlot) {
        let mut lits = learned.lits.clone();
        let at_assertion = (1..lits.len())
            .find(|&i| self.trail.slot_of_var(lits[i].var()) == assertion)
            .expect("the learned clause has a literal at the assertion level");
        lits.swap(1, at_assertion);
        let learned = &ConflictClause {
            lits,
            levels: learned.levels.clone(),
            lbd: learned.lbd,
        };
        let asserting = learned.lits[0];
        assert!(
            self.trail.value(asserting) == LBool::Undef
                && learned.lits[1..].iter().all(|&l| self.trail.is_false(l)),
            "learned clause is not asserting after backtrack"
        );
        let cref = match self.db.ingest_clause(&learned.lits, true) {
            Ingested::Stored(cref) => cref,
            other => panic!("learned clause ingested as {:?}", other),
        };
        self.db.set_lbd(cref, learned.lbd);
        self.db.bump_clause_activity(cref);
        self.trail
            .assign(asserting, assertion, Reason::Clause(cref));
        if self.partial() {
            for &l in &learned.levels {
                if l != assertion {
                    self.order.add_dep(l, assertion);
                }
            }
        }
    }

    /// Truth value of a literal under the current assignment.
    pub fn value(&self, lit: Lit) -> LBool {
        self.trail.value(lit)
    }

    pub(crate) fn reason_clause(&self, var: Var) -> Option<ClauseRef> {
        match self.trail.reason(var) {
            Reason::Clause(c) => Some(c),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests;
