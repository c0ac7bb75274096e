//! The partial order on live decision levels.
//!
//! Only direct dependencies are stored, in two adjacency lists (one per direction) and,
//! while the number of live levels stays under a threshold, a boolean matrix that answers
//! pair queries in constant time. Transitive reachability is computed by traversal when a
//! conflict needs it and never stored.
//!
//! `add_dep(j, i)` records `j < i`: level `i` depends on level `j`. The ground level is below
//! every level by convention, so edges from ground are never stored.

use crate::trail::LevelSlot;

/// Default live-level count above which the matrix is dropped.
pub const DEFAULT_MATRIX_THRESHOLD: usize = 4096;

#[derive(Clone, Debug)]
struct BitMatrix {
    cap: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(cap: usize) -> BitMatrix {
        let words = cap.div_ceil(64).max(1);
        BitMatrix {
            cap,
            words,
            bits: vec![0; cap * words],
        }
    }

    fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.words + col / 64] >> (col % 64) & 1 == 1
    }

    fn set(&mut self, row: usize, col: usize, value: bool) {
        let word = &mut self.bits[row * self.words + col / 64];
        if value {
            *word |= 1 << (col % 64);
        } else {
            *word &= !(1 << (col % 64));
        }
    }

    fn grow(&mut self, min_cap: usize) {
        let mut grown = BitMatrix::new(min_cap.max(2 * self.cap));
        for row in 0..self.cap {
            let src = &self.bits[row * self.words..(row + 1) * self.words];
            grown.bits[row * grown.words..row * grown.words + self.words].copy_from_slice(src);
        }
        *self = grown;
    }
}

#[derive(Clone, Debug)]
pub struct DepOrder {
    /// `below[i]`: slots `j` with `j < i`.
    below: Vec<Vec<LevelSlot>>,
    /// `above[j]`: slots `i` with `j < i`.
    above: Vec<Vec<LevelSlot>>,
    live: Vec<bool>,
    live_count: usize,
    /// `matrix[j][i]` mirrors `j ∈ below(i)`.
    matrix: Option<BitMatrix>,
    threshold: usize,
    edges: usize,
    mark: Vec<u32>,
    epoch: u32,
    member: Vec<u32>,
    member_epoch: u32,
    stack: Vec<LevelSlot>,
}

impl Default for DepOrder {
    fn default() -> DepOrder {
        DepOrder::new(DEFAULT_MATRIX_THRESHOLD)
    }
}

impl DepOrder {
    /// An order holding only the ground level.
    pub fn new(matrix_threshold: usize) -> DepOrder {
        let mut order = DepOrder {
            below: Vec::new(),
            above: Vec::new(),
            live: Vec::new(),
            live_count: 0,
            matrix: Some(BitMatrix::new(64)),
            threshold: matrix_threshold,
            edges: 0,
            mark: Vec::new(),
            epoch: 0,
            member: Vec::new(),
            member_epoch: 0,
            stack: Vec::new(),
        };
        order.register(LevelSlot::GROUND);
        order
    }

    pub fn matrix_enabled(&self) -> bool {
        self.matrix.is_some()
    }

    /// Once the live-level count exceeds `threshold` the matrix is dropped for good.
    pub fn set_matrix_threshold(&mut self, threshold: usize) {
        self.threshold = threshold;
        self.enforce_threshold();
    }

    fn enforce_threshold(&mut self) {
        if self.live_count > self.threshold {
            self.matrix = None;
        }
    }

    pub fn num_live(&self) -> usize {
        self.live_count
    }

    pub fn num_edges(&self) -> usize {
        self.edges
    }

    pub fn is_live(&self, slot: LevelSlot) -> bool {
        self.live.get(slot.index()).copied().unwrap_or(false)
    }

    /// Makes a freshly allocated slot live with no dependencies.
    pub fn register(&mut self, slot: LevelSlot) {
        let i = slot.index();
        if i >= self.live.len() {
            self.live.resize(i + 1, false);
            self.below.resize_with(i + 1, Vec::new);
            self.above.resize_with(i + 1, Vec::new);
            self.mark.resize(i + 1, 0);
            self.member.resize(i + 1, 0);
        }
        assert!(!self.live[i], "slot registered twice");
        debug_assert!(self.below[i].is_empty() && self.above[i].is_empty());
        self.live[i] = true;
        self.live_count += 1;
        if let Some(m) = &mut self.matrix {
            if i >= m.cap {
                m.grow(i + 1);
            }
        }
        self.enforce_threshold();
    }

    /// Direct edge query.
    pub fn has_dep(&self, j: LevelSlot, i: LevelSlot) -> bool {
        match &self.matrix {
            Some(m) => m.get(j.index(), i.index()),
            None => {
                let (below, above) = (&self.below[i.index()], &self.above[j.index()]);
                if below.len() <= above.len() {
                    below.contains(&j)
                } else {
                    above.contains(&i)
                }
            }
        }
    }

    /// Records `j < i`. Returns whether the direct edge is new; edges from ground are skipped.
    pub fn add_dep(&mut self, j: LevelSlot, i: LevelSlot) -> bool {
        assert!(i != j, "a level cannot depend on itself");
        if j == LevelSlot::GROUND {
            return false;
        }
        assert!(
            i != LevelSlot::GROUND,
            "the ground level cannot depend on a level"
        );
        debug_assert!(self.is_live(i) && self.is_live(j));
        if self.has_dep(j, i) {
            return false;
        }
        self.below[i.index()].push(j);
        self.above[j.index()].push(i);
        if let Some(m) = &mut self.matrix {
            m.set(j.index(), i.index(), true);
        }
        self.edges += 1;
        true
    }

    pub fn direct_below(&self, i: LevelSlot) -> &[LevelSlot] {
        &self.below[i.index()]
    }

    pub fn direct_above(&self, j: LevelSlot) -> &[LevelSlot] {
        &self.above[j.index()]
    }

    /// All direct edges `(j, i)` with `j < i`.
    pub fn edges(&self) -> impl Iterator<Item = (LevelSlot, LevelSlot)> + '_ {
        self.below
            .iter()
            .enumerate()
            .flat_map(|(i, bs)| bs.iter().map(move |&j| (j, LevelSlot(i as u32))))
    }

    fn next_epoch(&mut self) -> u32 {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.epoch = 1;
        }
        self.epoch
    }

    /// Depth-first traversal from `start`, along `above` when `upward` and along `below`
    /// otherwise. Calls `visit` on every reached slot (start excluded); stops early once
    /// `visit` returns true. Returns whether it stopped early.
    fn traverse(
        &mut self,
        start: LevelSlot,
        upward: bool,
        mut visit: impl FnMut(LevelSlot, &[u32], u32) -> bool,
    ) -> bool {
        let epoch = self.next_epoch();
        self.mark[start.index()] = epoch;
        let mut stack = std::mem::take(&mut self.stack);
        stack.clear();
        stack.push(start);
        let mut stopped = false;
        'outer: while let Some(s) = stack.pop() {
            let next = if upward {
                &self.above[s.index()]
            } else {
                &self.below[s.index()]
            };
            for &n in next {
                if self.mark[n.index()] != epoch {
                    self.mark[n.index()] = epoch;
                    if visit(n, &self.member, self.member_epoch) {
                        stopped = true;
                        break 'outer;
                    }
                    stack.push(n);
                }
            }
        }
        self.stack = stack;
        stopped
    }

    /// Every live level that transitively depends on `a` (`a` itself excluded).
    pub fn dependents_closure(&mut self, a: LevelSlot) -> Vec<LevelSlot> {
        let mut out = Vec::new();
        self.traverse(a, true, |s, _, _| {
            out.push(s);
            false
        });
        out
    }

    /// Every live level `a` transitively depends on (`a` itself excluded).
    pub fn dependencies_closure(&mut self, a: LevelSlot) -> Vec<LevelSlot> {
        let mut out = Vec::new();
        self.traverse(a, false, |s, _, _| {
            out.push(s);
            false
        });
        out
    }

    /// Transitive `from < to`.
    pub fn reaches(&mut self, from: LevelSlot, to: LevelSlot) -> bool {
        if from == to {
            return false;
        }
        if self.has_dep(from, to) {
            return true;
        }
        self.traverse(from, true, |s, _, _| s == to)
    }

    /// Members of `set` on which no other member transitively depends.
    pub fn maximal_of(&mut self, set: &[LevelSlot]) -> Vec<LevelSlot> {
        self.member_epoch = self.member_epoch.wrapping_add(1);
        if self.member_epoch == 0 {
            self.member.iter_mut().for_each(|m| *m = 0);
            self.member_epoch = 1;
        }
        for &s in set {
            self.member[s.index()] = self.member_epoch;
        }
        let mut out = Vec::new();
        for &a in set {
            if self.above[a.index()].is_empty() {
                out.push(a);
                continue;
            }
            let dominated = self.traverse(a, true, |s, member, epoch| member[s.index()] == epoch);
            if !dominated {
                out.push(a);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Removes every edge incident to the given slots and releases them.
    pub fn remove_levels(&mut self, dead: &[LevelSlot]) {
        for &d in dead {
            assert!(d != LevelSlot::GROUND, "the ground level cannot be removed");
            assert!(self.is_live(d), "removing a dead level");
            let above = std::mem::take(&mut self.above[d.index()]);
            for &i in &above {
                self.below[i.index()].retain(|&x| x != d);
                if let Some(m) = &mut self.matrix {
                    m.set(d.index(), i.index(), false);
                }
            }
            let below = std::mem::take(&mut self.below[d.index()]);
            for &j in &below {
                self.above[j.index()].retain(|&x| x != d);
                if let Some(m) = &mut self.matrix {
                    m.set(j.index(), d.index(), false);
                }
            }
            self.edges -= above.len() + below.len();
            self.live[d.index()] = false;
            self.live_count -= 1;
        }
    }

    /// Full scan: the adjacency lists are transposes of each other and agree with the matrix.
    pub fn check_transpose(&self) -> Result<(), String> {
        let mut count = 0;
        for (i, bs) in self.below.iter().enumerate() {
            let i = LevelSlot(i as u32);
            if !self.is_live(i) && (!bs.is_empty() || !self.above[i.index()].is_empty()) {
                return Err(format!("dead slot {:?} still has edges", i));
            }
            if i == LevelSlot::GROUND && !bs.is_empty() {
                return Err("ground level has dependencies".into());
            }
            for &j in bs {
                count += 1;
                if !self.above[j.index()].contains(&i) {
                    return Err(format!("edge {:?} < {:?} missing upward", j, i));
                }
                if !self.is_live(j) || j == LevelSlot::GROUND {
                    return Err(format!("edge {:?} < {:?} has an invalid source", j, i));
                }
                if bs.iter().filter(|&&x| x == j).count() != 1 {
                    return Err(format!("edge {:?} < {:?} stored twice", j, i));
                }
            }
        }
        let up: usize = self.above.iter().map(Vec::len).sum();
        if up != count || count != self.edges {
            return Err("adjacency directions disagree".into());
        }
        if let Some(m) = &self.matrix {
            let n = self.live.len().min(m.cap);
            for j in 0..n {
                for i in 0..n {
                    let listed = self.below[i].contains(&LevelSlot(j as u32));
                    if m.get(j, i) != listed {
                        return Err(format!("matrix disagrees on {} < {}", j, i));
                    }
                }
            }
        }
        Ok(())
    }

    /// Full scan for a directed cycle.
    pub fn check_acyclic(&self) -> Result<(), String> {
        // Kahn's algorithm over the live slots
        let n = self.live.len();
        let mut indegree: Vec<usize> = self.below.iter().map(Vec::len).collect();
        let mut ready: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut seen = 0;
        while let Some(j) = ready.pop() {
            seen += 1;
            for &i in &self.above[j] {
                indegree[i.index()] -= 1;
                if indegree[i.index()] == 0 {
                    ready.push(i.index());
                }
            }
        }
        if seen == n {
            Ok(())
        } else {
            Err("dependency order has a cycle".into())
        }
    }
}
