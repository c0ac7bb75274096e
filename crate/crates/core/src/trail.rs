//! Live decision levels and per-variable assignment state.
//!
//! Unlike a classical single-stack trail, every decision level keeps its own ordered sequence of
//! assigned literals, because a partial order backtrack removes arbitrary sets of levels.
//!
//! Levels have two names. A [`LevelId`] is handed out once per level and never reused, so it
//! orders levels by creation time. A [`LevelSlot`] is a compact index into per-level storage
//! (here and in the dependency order) and is recycled once its level is deleted.

use std::collections::{HashMap, VecDeque};

use crate::clausedb::ClauseRef;
use crate::lit::{Lit, Var};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LevelId(pub u64);

impl LevelId {
    pub const GROUND: LevelId = LevelId(0);

    pub fn is_ground(self) -> bool {
        self == LevelId::GROUND
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LevelSlot(pub u32);

impl LevelSlot {
    pub const GROUND: LevelSlot = LevelSlot(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Why a variable holds its value.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Reason {
    Decision,
    GroundUnit,
    Clause(ClauseRef),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum LBool {
    True,
    False,
    Undef,
}

#[derive(Clone, Debug)]
struct VarState {
    value: LBool,
    level: LevelId,
    slot: LevelSlot,
    reason: Reason,
    position: u32,
    saved_phase: bool,
}

#[derive(Clone, Debug)]
pub struct Level {
    id: LevelId,
    slot: LevelSlot,
    decision: Option<Lit>,
    seq: Vec<Lit>,
    alive: bool,
}

impl Level {
    pub fn id(&self) -> LevelId {
        self.id
    }

    pub fn slot(&self) -> LevelSlot {
        self.slot
    }

    pub fn decision(&self) -> Option<Lit> {
        self.decision
    }

    /// Assigned literals in assignment order, decision first.
    pub fn sequence(&self) -> &[Lit] {
        &self.seq
    }

    pub fn is_alive(&self) -> bool {
        self.alive
    }
}

pub struct Trail {
    vars: Vec<VarState>,
    levels: Vec<Level>,
    free_slots: Vec<LevelSlot>,
    slot_of_id: HashMap<LevelId, LevelSlot>,
    next_id: u64,
    live: usize,
    assigned: usize,
    queue: VecDeque<Lit>,
}

impl Trail {
    pub fn new(num_vars: usize) -> Trail {
        let ground = Level {
            id: LevelId::GROUND,
            slot: LevelSlot::GROUND,
            decision: None,
            seq: Vec::new(),
            alive: true,
        };
        Trail {
            vars: vec![
                VarState {
                    value: LBool::Undef,
                    level: LevelId::GROUND,
                    slot: LevelSlot::GROUND,
                    reason: Reason::Decision,
                    position: 0,
                    saved_phase: false,
                };
                num_vars
            ],
            levels: vec![ground],
            free_slots: Vec::new(),
            slot_of_id: HashMap::from([(LevelId::GROUND, LevelSlot::GROUND)]),
            next_id: 1,
            live: 1,
            assigned: 0,
            queue: VecDeque::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_assigned(&self) -> usize {
        self.assigned
    }

    pub fn all_assigned(&self) -> bool {
        self.assigned == self.vars.len()
    }

    /// Number of live levels, ground included.
    pub fn num_live_levels(&self) -> usize {
        self.live
    }

    pub fn value(&self, lit: Lit) -> LBool {
        match self.vars[lit.var().index()].value {
            LBool::Undef => LBool::Undef,
            LBool::True if lit.is_positive() => LBool::True,
            LBool::False if !lit.is_positive() => LBool::True,
            _ => LBool::False,
        }
    }

    pub fn is_true(&self, lit: Lit) -> bool {
        self.value(lit) == LBool::True
    }

    pub fn is_false(&self, lit: Lit) -> bool {
        self.value(lit) == LBool::False
    }

    pub fn is_assigned(&self, var: Var) -> bool {
        self.vars[var.index()].value != LBool::Undef
    }

    /// Current value of a variable.
    pub fn var_value(&self, var: Var) -> Option<bool> {
        match self.vars[var.index()].value {
            LBool::Undef => None,
            v => Some(v == LBool::True),
        }
    }

    pub fn slot_of_var(&self, var: Var) -> LevelSlot {
        debug_assert!(self.is_assigned(var));
        self.vars[var.index()].slot
    }

    pub fn level_of_var(&self, var: Var) -> Option<LevelId> {
        let state = &self.vars[var.index()];
        (state.value != LBool::Undef).then_some(state.level)
    }

    pub fn reason(&self, var: Var) -> Reason {
        self.vars[var.index()].reason
    }

    pub fn position(&self, var: Var) -> usize {
        self.vars[var.index()].position as usize
    }

    pub fn saved_phase(&self, var: Var) -> bool {
        self.vars[var.index()].saved_phase
    }

    pub fn level(&self, slot: LevelSlot) -> &Level {
        &self.levels[slot.index()]
    }

    pub fn level_id(&self, slot: LevelSlot) -> LevelId {
        self.levels[slot.index()].id
    }

    pub fn slot_of(&self, id: LevelId) -> Option<LevelSlot> {
        self.slot_of_id.get(&id).copied()
    }

    /// Live levels in slot order, ground included.
    pub fn live_levels(&self) -> impl Iterator<Item = &Level> {
        self.levels.iter().filter(|l| l.alive)
    }

    /// Opens a new level whose first assignment is `decision`.
    pub fn new_level(&mut self, decision: Lit) -> (LevelId, LevelSlot) {
        assert!(
            !self.is_assigned(decision.var()),
            "decision on assigned variable {}",
            decision
        );
        let id = LevelId(self.next_id);
        self.next_id += 1;
        let level = Level {
            id,
            slot: LevelSlot::GROUND,
            decision: Some(decision),
            seq: Vec::new(),
            alive: true,
        };
        let slot = match self.free_slots.pop() {
            Some(slot) => {
                let old = std::mem::replace(&mut self.levels[slot.index()], level);
                // keep the allocation of the recycled sequence
                self.levels[slot.index()].seq = old.seq;
                slot
            }
            None => {
                self.levels.push(level);
                LevelSlot(self.levels.len() as u32 - 1)
            }
        };
        self.levels[slot.index()].slot = slot;
        self.slot_of_id.insert(id, slot);
        self.live += 1;
        self.assign(decision, slot, Reason::Decision);
        (id, slot)
    }

    /// Assigns `lit` true at the level in `slot` and enqueues it for propagation.
    pub fn assign(&mut self, lit: Lit, slot: LevelSlot, reason: Reason) {
        let level = &mut self.levels[slot.index()];
        assert!(level.alive, "assignment at dead level");
        let state = &mut self.vars[lit.var().index()];
        assert!(state.value == LBool::Undef, "double assignment of {}", lit);
        debug_assert_eq!(
            reason == Reason::Decision,
            level.seq.is_empty() && level.decision == Some(lit)
        );
        state.value = if lit.is_positive() {
            LBool::True
        } else {
            LBool::False
        };
        state.level = level.id;
        state.slot = slot;
        state.reason = reason;
        state.position = level.seq.len() as u32;
        state.saved_phase = lit.is_positive();
        level.seq.push(lit);
        self.assigned += 1;
        self.queue.push_back(lit);
    }

    /// Unassigns every variable of the given levels and frees their slots.
    ///
    /// Saved phases are kept. Pending propagations of the deleted levels are dropped. Each
    /// unassigned variable is reported to `on_unassign`. Returns the number of unassigned
    /// variables.
    pub fn delete_levels(&mut self, dead: &[LevelSlot], mut on_unassign: impl FnMut(Var)) -> usize {
        let mut count = 0;
        for &slot in dead {
            assert!(
                slot != LevelSlot::GROUND,
                "the ground level cannot be deleted"
            );
            let level = &mut self.levels[slot.index()];
            assert!(level.alive, "level deleted twice");
            level.alive = false;
            self.slot_of_id.remove(&level.id);
            for lit in level.seq.drain(..) {
                self.vars[lit.var().index()].value = LBool::Undef;
                on_unassign(lit.var());
                count += 1;
            }
            self.free_slots.push(slot);
        }
        if count > 0 {
            let vars = &self.vars;
            self.queue
                .retain(|l| vars[l.var().index()].value != LBool::Undef);
        }
        self.assigned -= count;
        self.live -= dead.len();
        count
    }

    pub fn pop_pending(&mut self) -> Option<Lit> {
        self.queue.pop_front()
    }

    pub fn has_pending(&self) -> bool {
        !self.queue.is_empty()
    }

    pub fn pending(&self) -> impl Iterator<Item = &Lit> {
        self.queue.iter()
    }

    /// Full scan of the partition and slot map invariants.
    pub fn check_partition(&self) -> Result<(), String> {
        let mut owner = vec![None; self.vars.len()];
        let mut live = 0;
        let mut ids = Vec::new();
        for level in &self.levels {
            if !level.alive {
                if !level.seq.is_empty() {
                    return Err(format!("dead level {:?} still holds literals", level.id));
                }
                continue;
            }
            live += 1;
            ids.push(level.id);
            if self.slot_of_id.get(&level.id) != Some(&level.slot) {
                return Err(format!("slot map disagrees for level {:?}", level.id));
            }
            if let Some(d) = level.decision {
                if level.seq.first() != Some(&d) {
                    return Err(format!("decision of {:?} is not first", level.id));
                }
            }
            for (pos, &lit) in level.seq.iter().enumerate() {
                let state = &self.vars[lit.var().index()];
                if !self.is_true(lit) || state.slot != level.slot || state.position as usize != pos
                {
                    return Err(format!("literal {} misplaced in level {:?}", lit, level.id));
                }
                if owner[lit.var().index()].replace(level.id).is_some() {
                    return Err(format!("variable of {} appears twice", lit));
                }
                if (state.reason == Reason::Decision) != (level.decision == Some(lit)) {
                    return Err(format!("decision reason mismatch for {}", lit));
                }
            }
        }
        let assigned = self.vars.iter().filter(|s| s.value != LBool::Undef).count();
        if assigned != self.assigned || owner.iter().filter(|o| o.is_some()).count() != assigned {
            return Err("assigned variable outside every live level".into());
        }
        ids.sort_unstable();
        ids.dedup();
        if ids.len() != live || live != self.live || self.slot_of_id.len() != live {
            return Err("live level bookkeeping inconsistent".into());
        }
        Ok(())
    }
}
