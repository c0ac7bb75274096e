//! Clause storage, watch lists and learned clause management.

use std::cmp::Ordering;
use std::collections::HashSet;

use crate::lit::Lit;

/// Stable handle of a stored clause.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClauseRef(u32);

impl ClauseRef {
    #[cfg(test)]
    pub(crate) const fn from_index(index: usize) -> ClauseRef {
        ClauseRef(index as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A stored clause. Positions 0 and 1 hold the watched literals.
#[derive(Clone, Debug)]
pub struct Clause {
    pub(crate) lits: Vec<Lit>,
    learned: bool,
    lbd: u32,
    activity: f64,
    deleted: bool,
}

impl Clause {
    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn is_learned(&self) -> bool {
        self.learned
    }

    pub fn lbd(&self) -> u32 {
        self.lbd
    }

    pub fn activity(&self) -> f64 {
        self.activity
    }

    pub fn is_deleted(&self) -> bool {
        self.deleted
    }
}

/// Result of normalizing and storing a clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ingested {
    Stored(ClauseRef),
    Unit(Lit),
    Empty,
    Tautology,
}

const ACTIVITY_RESCALE_LIMIT: f64 = 1e20;

pub struct ClauseDb {
    clauses: Vec<Clause>,
    free: Vec<ClauseRef>,
    /// `watches[p]` lists the clauses watching `p`; visited when `p` becomes false.
    pub(crate) watches: Vec<Vec<ClauseRef>>,
    learned: Vec<ClauseRef>,
    activity_inc: f64,
    activity_decay: f64,
}

impl ClauseDb {
    pub fn new(num_vars: usize) -> ClauseDb {
        ClauseDb {
            clauses: Vec::new(),
            free: Vec::new(),
            watches: vec![Vec::new(); 2 * num_vars],
            learned: Vec::new(),
            activity_inc: 1.0,
            activity_decay: 0.999,
        }
    }

    pub fn set_activity_decay(&mut self, decay: f64) {
        assert!(decay > 0.0 && decay < 1.0);
        self.activity_decay = decay;
    }

    /// Normalizes a clause and stores it unless it is empty, unit or tautological.
    ///
    /// Duplicates are removed keeping the first occurrence, so the literal order of a learned
    /// clause (asserting literal first) survives ingestion.
    pub fn ingest_clause(&mut self, lits: &[Lit], learned: bool) -> Ingested {
        let mut sorted = lits.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.windows(2).any(|w| w[0] == !w[1]) {
            return Ingested::Tautology;
        }
        let lits = if sorted.len() == lits.len() {
            lits.to_vec()
        } else {
            let mut seen = HashSet::with_capacity(lits.len());
            lits.iter().copied().filter(|&l| seen.insert(l)).collect()
        };
        match lits.len() {
            0 => Ingested::Empty,
            1 => Ingested::Unit(lits[0]),
            _ => Ingested::Stored(self.store(lits, learned)),
        }
    }

    fn store(&mut self, lits: Vec<Lit>, learned: bool) -> ClauseRef {
        let lbd = if learned { lits.len() as u32 } else { 0 };
        let clause = Clause {
            lits,
            learned,
            lbd,
            activity: 0.0,
            deleted: false,
        };
        let cref = match self.free.pop() {
            Some(cref) => {
                self.clauses[cref.index()] = clause;
                cref
            }
            None => {
                self.clauses.push(clause);
                ClauseRef(self.clauses.len() as u32 - 1)
            }
        };
        let c = &self.clauses[cref.index()];
        self.watches[c.lits[0].code()].push(cref);
        self.watches[c.lits[1].code()].push(cref);
        if learned {
            self.learned.push(cref);
        }
        cref
    }

    pub fn clause(&self, cref: ClauseRef) -> &Clause {
        &self.clauses[cref.index()]
    }

    pub(crate) fn lits_mut(&mut self, cref: ClauseRef) -> &mut Vec<Lit> {
        &mut self.clauses[cref.index()].lits
    }

    pub fn watches(&self, lit: Lit) -> &[ClauseRef] {
        &self.watches[lit.code()]
    }

    /// Live clause handles.
    pub fn iter(&self) -> impl Iterator<Item = (ClauseRef, &Clause)> {
        self.clauses
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.deleted)
            .map(|(i, c)| (ClauseRef(i as u32), c))
    }

    pub fn num_learned(&self) -> usize {
        self.learned.len()
    }

    pub fn learned(&self) -> &[ClauseRef] {
        &self.learned
    }

    pub fn set_lbd(&mut self, cref: ClauseRef, lbd: u32) {
        let c = &mut self.clauses[cref.index()];
        debug_assert!(lbd as usize <= c.lits.len());
        c.lbd = lbd;
    }

    pub fn bump_clause_activity(&mut self, cref: ClauseRef) {
        let c = &mut self.clauses[cref.index()];
        c.activity += self.activity_inc;
        if c.activity > ACTIVITY_RESCALE_LIMIT {
            self.rescale_activities();
        }
    }

    pub fn decay_clause_activities(&mut self) {
        self.activity_inc /= self.activity_decay;
        if self.activity_inc > ACTIVITY_RESCALE_LIMIT {
            self.rescale_activities();
        }
    }

    fn rescale_activities(&mut self) {
        let factor = 1.0 / ACTIVITY_RESCALE_LIMIT;
        for &cref in &self.learned {
            self.clauses[cref.index()].activity *= factor;
        }
        self.activity_inc *= factor;
    }

    /// Deletes the worse half of the learned clauses.
    ///
    /// Learned clauses are ranked by increasing lbd, then decreasing activity. Clauses with an
    /// lbd of at most 2 and clauses for which `is_locked` holds are never deleted.
    pub fn reduce_learned(&mut self, is_locked: impl Fn(ClauseRef, &Clause) -> bool) -> usize {
        let clauses = &self.clauses;
        self.learned.sort_by(|&a, &b| {
            let (ca, cb) = (&clauses[a.index()], &clauses[b.index()]);
            ca.lbd.cmp(&cb.lbd).then(
                cb.activity
                    .partial_cmp(&ca.activity)
                    .unwrap_or(Ordering::Equal),
            )
        });
        let first_worse = self.learned.len() - self.learned.len() / 2;
        let mut kept = Vec::with_capacity(self.learned.len());
        let mut deleted = 0;
        for (rank, &cref) in self.learned.iter().enumerate() {
            let c = &self.clauses[cref.index()];
            if rank < first_worse || c.lbd <= 2 || is_locked(cref, c) {
                kept.push(cref);
            } else {
                self.clauses[cref.index()].deleted = true;
                deleted += 1;
            }
        }
        self.learned = kept;
        if deleted > 0 {
            let clauses = &self.clauses;
            for list in &mut self.watches {
                list.retain(|c| !clauses[c.index()].deleted);
            }
            for (i, c) in self.clauses.iter_mut().enumerate() {
                if c.deleted && !c.lits.is_empty() {
                    c.lits = Vec::new();
                    self.free.push(ClauseRef(i as u32));
                }
            }
        }
        deleted
    }

    /// Full scan: every live clause sits in exactly the watch lists of its first two literals.
    pub fn check_watches(&self) -> Result<(), String> {
        let mut counts = vec![0usize; self.clauses.len()];
        for (code, list) in self.watches.iter().enumerate() {
            for &cref in list {
                let c = &self.clauses[cref.index()];
                if c.deleted {
                    return Err(format!("deleted clause {:?} still watched", cref));
                }
                if c.lits[0].code() != code && c.lits[1].code() != code {
                    return Err(format!(
                        "clause {:?} listed under a literal it does not watch",
                        cref
                    ));
                }
                counts[cref.index()] += 1;
            }
        }
        for (cref, c) in self.iter() {
            if c.lits.len() < 2 {
                return Err(format!("stored clause {:?} shorter than 2", cref));
            }
            if counts[cref.index()] != 2 {
                return Err(format!(
                    "clause {:?} appears in {} watch lists",
                    cref,
                    counts[cref.index()]
                ));
            }
        }
        Ok(())
    }
}

/// Number of distinct levels among the literals, as reported by `level_of`.
///
/// Panics if a literal is unassigned.
pub fn compute_lbd<L: Ord>(lits: &[Lit], level_of: impl Fn(Lit) -> Option<L>) -> u32 {
    let mut levels: Vec<L> = lits
        .iter()
        .map(|&l| level_of(l).unwrap_or_else(|| panic!("lbd of unassigned literal {}", l)))
        .collect();
    levels.sort_unstable();
    levels.dedup();
    levels.len() as u32
}
