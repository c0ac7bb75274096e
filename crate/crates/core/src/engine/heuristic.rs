//! Assertion level choice among the candidates of a conflict.

use crate::config::{DepCounting, HeuristicPolicy};
use crate::deporder::DepOrder;
use crate::trail::{LevelId, LevelSlot, Trail};

/// Assignments deleted with the levels depending on `a`, the conflict level excepted (it is
/// deleted whatever the choice).
pub fn undo_cost(order: &mut DepOrder, trail: &Trail, a: LevelSlot, conflict: LevelSlot) -> u64 {
    order
        .dependents_closure(a)
        .into_iter()
        .filter(|&l| l != conflict)
        .map(|l| trail.level(l).sequence().len() as u64)
        .sum()
}

/// Conflict levels (other than `a`) that are not yet below `a`.
pub fn new_deps(
    order: &mut DepOrder,
    a: LevelSlot,
    conflict_levels: &[LevelSlot],
    counting: DepCounting,
) -> u64 {
    match counting {
        DepCounting::Direct => conflict_levels
            .iter()
            .filter(|&&l| l != a && !order.has_dep(l, a))
            .count() as u64,
        DepCounting::Closure => {
            let mut below = order.dependencies_closure(a);
            below.sort_unstable();
            conflict_levels
                .iter()
                .filter(|&&l| l != a && below.binary_search(&l).is_err())
                .count() as u64
        }
    }
}

/// Picks the candidate with the lowest (`minimize`) or highest cost. Ties go to the most
/// recently created level.
pub fn select_by_cost(costs: &[(LevelId, u64)], minimize: bool) -> LevelId {
    assert!(!costs.is_empty(), "no candidate assertion level");
    costs
        .iter()
        .copied()
        .max_by(|&(la, ca), &(lb, cb)| {
            let by_cost = if minimize { cb.cmp(&ca) } else { ca.cmp(&cb) };
            by_cost.then(la.cmp(&lb))
        })
        .unwrap()
        .0
}

/// Chooses the assertion level among `candidates` (slots of live levels).
///
/// `conflict_levels` are the levels of the learned clause without the conflict level.
pub fn choose_assertion(
    candidates: &[LevelSlot],
    policy: HeuristicPolicy,
    conflict_levels: &[LevelSlot],
    conflict: LevelSlot,
    order: &mut DepOrder,
    trail: &Trail,
    counting: DepCounting,
) -> LevelSlot {
    assert!(!candidates.is_empty(), "no candidate assertion level");
    if candidates.len() == 1 {
        return candidates[0];
    }
    let costs: Vec<(LevelId, u64)> = candidates
        .iter()
        .map(|&a| {
            let cost = match policy {
                HeuristicPolicy::Chronological => 0,
                HeuristicPolicy::LeastUndos | HeuristicPolicy::MostUndos => {
                    undo_cost(order, trail, a, conflict)
                }
                HeuristicPolicy::LeastDeps | HeuristicPolicy::MostDeps => {
                    new_deps(order, a, conflict_levels, counting)
                }
            };
            (trail.level_id(a), cost)
        })
        .collect();
    let minimize = matches!(
        policy,
        HeuristicPolicy::LeastUndos | HeuristicPolicy::LeastDeps
    );
    let chosen = select_by_cost(&costs, minimize);
    *candidates
        .iter()
        .find(|&&s| trail.level_id(s) == chosen)
        .unwrap()
}
