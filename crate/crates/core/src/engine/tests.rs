use super::*;
use crate::config::HeuristicPolicy;

fn solver(clauses: &[&[i32]], num_vars: usize, config: SolverConfig) -> Solver {
    let mut formula = RawFormula::from_dimacs_clauses(clauses);
    formula.num_vars = formula.num_vars.max(num_vars);
    Solver::new(&formula, config)
}

fn lit(x: i32) -> Lit {
    Lit::from_dimacs(x)
}

/// Opens a level on the given literal as a decision would.
fn open(s: &mut Solver, x: i32) -> LevelSlot {
    let (_, slot) = s.trail.new_level(lit(x));
    s.order.register(slot);
    s.current = slot;
    slot
}

fn id(s: &Solver, slot: LevelSlot) -> u64 {
    s.trail.level_id(slot).0
}

#[test]
fn ground_propagation_records_nothing() {
    let mut s = solver(&[&[1], &[-1, 2]], 2, SolverConfig::default());
    assert!(s.propagate().is_none());
    assert!(s.trail.is_true(lit(1)) && s.trail.is_true(lit(2)));
    assert_eq!(s.trail.slot_of_var(lit(2).var()), LevelSlot::GROUND);
    assert_eq!(s.order.num_edges(), 0);
}

#[test]
fn ground_conflict_is_unsat() {
    let mut s = solver(&[&[1], &[-1, 2], &[-2, -1]], 2, SolverConfig::default());
    assert_eq!(s.solve(), Verdict::Unsat);
    assert_eq!(s.stats().conflicts, 0);
    let mut s = solver(&[&[1], &[-1]], 1, SolverConfig::default());
    assert_eq!(s.solve(), Verdict::Unsat);
}

#[test]
fn implied_literal_depends_on_other_levels() {
    let mut s = solver(&[&[-1, -2, 3]], 3, SolverConfig::default());
    let l1 = open(&mut s, 1);
    assert!(s.propagate().is_none());
    let l2 = open(&mut s, 2);
    assert!(s.propagate().is_none());
    assert!(s.trail.is_true(lit(3)));
    assert_eq!(s.trail.slot_of_var(lit(3).var()), l2);
    assert!(s.order.has_dep(l1, l2));
    assert_eq!(s.order.num_edges(), 1);
}

#[test]
fn true_co_watch_adds_dependency() {
    let mut s = solver(&[&[1, -2]], 2, SolverConfig::default());
    let l1 = open(&mut s, 1);
    assert!(s.propagate().is_none());
    let before = s.db.clause(s.db.watches(lit(1))[0]).lits().to_vec();
    let l2 = open(&mut s, 2);
    let checks = s.stats.clause_checks;
    assert!(s.propagate().is_none());
    assert_eq!(s.stats.clause_checks, checks + 1);
    assert!(s.order.has_dep(l1, l2));
    let cref = s.db.watches(lit(1))[0];
    assert_eq!(s.db.clause(cref).lits(), &before[..]);
    assert_eq!(s.db.watches(lit(-2)), &[cref]);
}

#[test]
fn total_mode_records_no_dependencies() {
    let mut s = solver(&[&[-1, -2, 3], &[4, -1]], 4, SolverConfig::total(false));
    open(&mut s, 4);
    assert!(s.propagate().is_none());
    open(&mut s, 1);
    assert!(s.propagate().is_none());
    open(&mut s, 2);
    assert!(s.propagate().is_none());
    assert!(s.trail.is_true(lit(3)));
    assert_eq!(s.order.num_edges(), 0);
}

#[test]
fn backtrack_deletes_dependents_and_conflict_level() {
    let mut s = solver(&[], 9, SolverConfig::default());
    let slots: Vec<LevelSlot> = (1..=9).map(|x| open(&mut s, x)).collect();
    let dead_now: Vec<LevelSlot> = [1, 2, 4, 7, 8].iter().map(|&i| slots[i - 1]).collect();
    s.delete(&dead_now);
    let (l3, l5, l6, l9) = (slots[2], slots[4], slots[5], slots[8]);
    s.order.add_dep(l3, l6);
    let mut dead = s.dead_levels(l3, l9);
    dead.sort_by_key(|&d| id(&s, d));
    assert_eq!(dead, vec![l6, l9]);
    s.delete(&dead);
    let mut alive: Vec<u64> = s.trail.live_levels().map(|l| l.id().0).collect();
    alive.sort_unstable();
    assert_eq!(alive, vec![0, 3, 5]);
    assert!(s.order.is_live(l5));
}

#[test]
fn backtrack_without_dependents_deletes_only_the_conflict_level() {
    let mut s = solver(&[], 3, SolverConfig::default());
    let l1 = open(&mut s, 1);
    open(&mut s, 2);
    let l3 = open(&mut s, 3);
    assert_eq!(s.dead_levels(l1, l3), vec![l3]);
}

#[test]
fn total_backtrack_deletes_newer_levels() {
    let mut s = solver(&[], 4, SolverConfig::total(false));
    let slots: Vec<LevelSlot> = (1..=4).map(|x| open(&mut s, x)).collect();
    let mut dead = s.dead_levels(slots[1], slots[3]);
    dead.sort();
    assert_eq!(dead, vec![slots[2], slots[3]]);
}

#[test]
fn asserted_literal_depends_on_other_clause_levels() {
    let mut s = solver(&[], 5, SolverConfig::default());
    let l1 = open(&mut s, 1);
    let l2 = open(&mut s, 2);
    let l3 = open(&mut s, 3);
    // γ = x5 ∨ ¬x2 ∨ ¬x3 asserted at level 3
    let learned = ConflictClause {
        lits: vec![lit(5), lit(-3), lit(-2)],
        levels: vec![l2, l3],
        lbd: 3,
    };
    s.assert_learned(&learned, l3);
    assert_eq!(s.trail.slot_of_var(lit(5).var()), l3);
    assert!(s.order.has_dep(l2, l3));
    assert!(!s.order.has_dep(l1, l3));

    // only other level is the assertion level itself
    let learned = ConflictClause {
        lits: vec![lit(4), lit(-1)],
        levels: vec![l1],
        lbd: 2,
    };
    let edges = s.order.num_edges();
    s.assert_learned(&learned, l1);
    assert_eq!(s.trail.slot_of_var(lit(4).var()), l1);
    assert_eq!(s.order.num_edges(), edges);
}

#[test]
fn fresh_decision_takes_lowest_variable_negatively() {
    let mut s = solver(&[&[1, 2, 3]], 3, SolverConfig::default());
    assert_eq!(s.decide(), lit(-1));
}

#[test]
fn bumped_variable_is_decided_first() {
    let mut s = solver(&[&[1, 2, 3, 4]], 4, SolverConfig::default());
    for _ in 0..3 {
        s.vsids.bump(lit(3).var());
        s.vsids.decay();
    }
    assert_eq!(s.decide(), lit(-3));
}

#[test]
fn phase_saving_repeats_the_last_value() {
    let config = SolverConfig {
        phase_saving: true,
        ..SolverConfig::default()
    };
    let mut s = solver(&[&[1, 2]], 2, config);
    let l = open(&mut s, 1);
    s.delete(&[l]);
    assert_eq!(s.decide(), lit(1));
}

#[test]
fn decision_priority_is_followed() {
    let config = SolverConfig {
        decision_priority: Some(vec![lit(3).var(), lit(1).var()]),
        ..SolverConfig::default()
    };
    let mut s = solver(&[&[1, 2, 3]], 3, config);
    assert_eq!(s.decide(), lit(-3));
    assert_eq!(s.decide(), lit(-1));
    assert_eq!(s.decide(), lit(-2));
}

#[test]
fn binary_contradiction_is_unsat_in_every_mode() {
    for config in [
        SolverConfig::total(false),
        SolverConfig::partial(HeuristicPolicy::LeastDeps),
    ] {
        let config = SolverConfig {
            check_invariants: true,
            ..config
        };
        let mut s = solver(&[&[1, 2], &[-1, 2], &[1, -2], &[-1, -2]], 2, config);
        assert_eq!(s.solve(), Verdict::Unsat);
        assert!(s.violations().is_empty(), "{:?}", s.violations());
    }
}

#[test]
fn decision_only_conflict_learns_negated_decisions() {
    // x1 and x2 decided false; (x1 ∨ x2 ∨ x3) and (x1 ∨ x2 ∨ ¬x3) then conflict at level 2
    let mut s = solver(&[&[1, 2, 3], &[1, 2, -3]], 3, SolverConfig::default());
    let l1 = open(&mut s, -1);
    assert!(s.propagate().is_none());
    let l2 = open(&mut s, -2);
    let conflict = s.propagate().expect("conflict");
    assert_eq!(s.conflict_level, l2);
    let learned = s.analyze(conflict, l2);
    assert_eq!(learned.lits, vec![lit(2), lit(1)]);
    assert_eq!(learned.levels, vec![l1]);
    assert_eq!(learned.lbd, 2);
}

#[test]
fn budget_limits_conflicts() {
    let formula = crate::generate::pigeonhole(6, 5);
    let config = SolverConfig {
        conflict_budget: Some(10),
        ..SolverConfig::default()
    };
    let mut s = Solver::new(&formula, config);
    assert_eq!(s.solve(), Verdict::Unknown(UnknownReason::BudgetExhausted));
    assert_eq!(s.stats().conflicts, 10);
}

#[test]
fn interrupt_stops_the_search() {
    let formula = crate::generate::pigeonhole(6, 5);
    let mut s = Solver::new(&formula, SolverConfig::default());
    s.interrupt_handle().store(true, Ordering::Relaxed);
    assert_eq!(s.solve(), Verdict::Unknown(UnknownReason::Interrupted));
}
