#![allow(dead_code)]

use posat_core::config::{HeuristicPolicy, RestartStrategy, SolverConfig};
use posat_core::RawFormula;

/// Satisfiability by trying every assignment.
pub fn brute_force_sat(formula: &RawFormula) -> bool {
    assert!(formula.num_vars <= 20);
    (0u32..1 << formula.num_vars).any(|bits| satisfies(formula, bits))
}

/// Enumeration with 64 assignments per machine word: the six lowest variables vary inside a
/// word, the others are fixed per word.
pub fn brute_force_sat_fast(formula: &RawFormula) -> bool {
    let n = formula.num_vars;
    assert!(n <= 26);
    if n <= 6 {
        return brute_force_sat(formula);
    }
    const PATTERN: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    // per clause: the low-variable mask and the (shifted variable, sign) high literals
    let clauses: Vec<(u64, Vec<(usize, bool)>)> = formula
        .clauses
        .iter()
        .map(|c| {
            let mut low = 0u64;
            let mut high = Vec::new();
            for l in c {
                let v = l.var().index();
                if v < 6 {
                    low |= if l.is_positive() {
                        PATTERN[v]
                    } else {
                        !PATTERN[v]
                    };
                } else {
                    high.push((v - 6, l.is_positive()));
                }
            }
            (low, high)
        })
        .collect();
    (0u64..1 << (n - 6)).any(|h| {
        let mut word = !0u64;
        for (low, high) in &clauses {
            if high.iter().any(|&(v, sign)| ((h >> v) & 1 == 1) == sign) {
                continue;
            }
            word &= low;
            if word == 0 {
                return false;
            }
        }
        true
    })
}

pub fn satisfies(formula: &RawFormula, bits: u32) -> bool {
    formula.clauses.iter().all(|c| {
        c.iter()
            .any(|l| ((bits >> l.var().index()) & 1 == 1) == l.is_positive())
    })
}

/// Both order modes, every heuristic, phase saving on and off.
pub fn all_configs() -> Vec<(String, SolverConfig)> {
    let mut configs = Vec::new();
    for phase in [false, true] {
        for h in HeuristicPolicy::ALL {
            configs.push((
                format!("total/{}/phase={}", h, phase),
                SolverConfig {
                    heuristic: h,
                    ..SolverConfig::total(phase)
                },
            ));
            configs.push((
                format!("partial/{}/phase={}", h, phase),
                SolverConfig {
                    phase_saving: phase,
                    ..SolverConfig::partial(h)
                },
            ));
        }
    }
    configs
}

/// Variants that restart and reduce the clause database very often.
pub fn churn_configs() -> Vec<(String, SolverConfig)> {
    let mut configs = Vec::new();
    for h in HeuristicPolicy::ALL {
        configs.push((
            format!("churn/{}", h),
            SolverConfig {
                first_reduce: 8,
                reduce_increment: 2,
                restart_strategy: RestartStrategy::Luby,
                luby_unit: 2,
                matrix_threshold: 3,
                random_var_freq: 0.1,
                ..SolverConfig::partial(h)
            },
        ));
    }
    configs.push((
        "churn/total".into(),
        SolverConfig {
            first_reduce: 8,
            reduce_increment: 2,
            lbd_queue_len: 4,
            minimize: false,
            ..SolverConfig::total(true)
        },
    ));
    configs
}

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use posat_core::engine::observe::{BacktrackSnapshot, SearchObserver, UnitRestart};
use posat_core::LevelId;

/// Collects every backtrack and unit restart of a solve.
#[derive(Clone, Default)]
pub struct Recorder {
    pub backtracks: Rc<RefCell<Vec<BacktrackSnapshot>>>,
    pub unit_restarts: Rc<RefCell<Vec<UnitRestart>>>,
}

impl SearchObserver for Recorder {
    fn on_backtrack(&mut self, snapshot: &BacktrackSnapshot) {
        self.backtracks.borrow_mut().push(snapshot.clone());
    }

    fn on_unit_restart(&mut self, event: &UnitRestart) {
        self.unit_restarts.borrow_mut().push(event.clone());
    }
}

/// Levels strictly above `a` in the transitive closure of the edges of a snapshot.
pub fn above(edges: &[(LevelId, LevelId)], a: LevelId) -> BTreeSet<LevelId> {
    let mut out = BTreeSet::new();
    let mut frontier = vec![a];
    while let Some(x) = frontier.pop() {
        for &(j, i) in edges {
            if j == x && out.insert(i) {
                frontier.push(i);
            }
        }
    }
    out
}

pub fn below(edges: &[(LevelId, LevelId)], a: LevelId) -> BTreeSet<LevelId> {
    let flipped: Vec<(LevelId, LevelId)> = edges.iter().map(|&(j, i)| (i, j)).collect();
    above(&flipped, a)
}

/// Members of `set` with no other member above them.
pub fn maximal(edges: &[(LevelId, LevelId)], set: &[LevelId]) -> Vec<LevelId> {
    let mut out: Vec<LevelId> = set
        .iter()
        .copied()
        .filter(|&x| {
            let up = above(edges, x);
            !set.iter().any(|y| up.contains(y))
        })
        .collect();
    out.sort();
    out
}

/// Cost of each candidate under a policy's measure, recomputed from the snapshot.
pub fn undo_cost(snapshot: &BacktrackSnapshot, a: LevelId) -> u64 {
    let sizes: HashMap<LevelId, usize> = snapshot.levels.iter().map(|l| (l.id, l.size)).collect();
    above(&snapshot.edges, a)
        .into_iter()
        .filter(|&l| l != snapshot.conflict_level)
        .map(|l| sizes[&l] as u64)
        .sum()
}

pub fn new_deps(snapshot: &BacktrackSnapshot, a: LevelId) -> u64 {
    let down = below(&snapshot.edges, a);
    snapshot
        .clause_levels
        .iter()
        .filter(|&&l| l != a && !down.contains(&l))
        .count() as u64
}

/// Lowest (or highest) cost, ties to the largest id.
pub fn best(costs: &[(LevelId, u64)], minimize: bool) -> LevelId {
    let target = if minimize {
        costs.iter().map(|c| c.1).min()
    } else {
        costs.iter().map(|c| c.1).max()
    }
    .unwrap();
    costs
        .iter()
        .filter(|c| c.1 == target)
        .map(|c| c.0)
        .max()
        .unwrap()
}

/// What the policy of the snapshot should have chosen.
pub fn expected_choice(snapshot: &BacktrackSnapshot) -> LevelId {
    use posat_core::HeuristicPolicy::*;
    let cands = &snapshot.candidates;
    match snapshot.policy {
        Chronological => *cands.iter().max().unwrap(),
        LeastUndos | MostUndos => {
            let costs: Vec<_> = cands.iter().map(|&a| (a, undo_cost(snapshot, a))).collect();
            best(&costs, snapshot.policy == LeastUndos)
        }
        LeastDeps | MostDeps => {
            let costs: Vec<_> = cands.iter().map(|&a| (a, new_deps(snapshot, a))).collect();
            best(&costs, snapshot.policy == LeastDeps)
        }
    }
}
