//! Exponential VSIDS decision order.
//!
//! Instead of decaying every activity after a conflict, the bump amount grows by `1 / decay`.
//! All values are scaled down together when they get too large. Among equal activities the
//! variable with the lowest index comes first.

use crate::lit::Var;

const RESCALE_LIMIT: f64 = 1e100;

pub struct Vsids {
    activity: Vec<f64>,
    heap: Vec<Var>,
    position: Vec<Option<usize>>,
    bump: f64,
    inv_decay: f64,
}

impl Vsids {
    pub fn new(num_vars: usize, decay: f64) -> Vsids {
        assert!(decay > 0.0 && decay < 1.0);
        let mut vsids = Vsids {
            activity: vec![0.0; num_vars],
            heap: Vec::with_capacity(num_vars),
            position: vec![None; num_vars],
            bump: 1.0,
            inv_decay: 1.0 / decay,
        };
        for i in 0..num_vars {
            vsids.insert(Var::from_index(i));
        }
        vsids
    }

    pub fn activity(&self, var: Var) -> f64 {
        self.activity[var.index()]
    }

    pub fn bump(&mut self, var: Var) {
        self.activity[var.index()] += self.bump;
        if self.activity[var.index()] > RESCALE_LIMIT {
            self.rescale();
        }
        if let Some(pos) = self.position[var.index()] {
            self.sift_up(pos);
        }
    }

    pub fn decay(&mut self) {
        self.bump *= self.inv_decay;
        if self.bump > RESCALE_LIMIT {
            self.rescale();
        }
    }

    fn rescale(&mut self) {
        let factor = 1.0 / RESCALE_LIMIT;
        for a in &mut self.activity {
            *a *= factor;
        }
        self.bump *= factor;
    }

    pub fn contains(&self, var: Var) -> bool {
        self.position[var.index()].is_some()
    }

    /// Makes a variable available for decisions again.
    pub fn insert(&mut self, var: Var) {
        if self.position[var.index()].is_none() {
            let pos = self.heap.len();
            self.heap.push(var);
            self.position[var.index()] = Some(pos);
            self.sift_up(pos);
        }
    }

    /// Removes and returns the variable of highest activity.
    pub fn pop(&mut self) -> Option<Var> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().unwrap();
        self.position[top.index()] = None;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.position[last.index()] = Some(0);
            self.sift_down(0);
        }
        Some(top)
    }

    /// An arbitrary heap member, selected by `index modulo size`.
    pub fn nth(&self, index: usize) -> Option<Var> {
        if self.heap.is_empty() {
            None
        } else {
            Some(self.heap[index % self.heap.len()])
        }
    }

    fn before(&self, a: Var, b: Var) -> bool {
        let (x, y) = (self.activity[a.index()], self.activity[b.index()]);
        x > y || (x == y && a < b)
    }

    fn sift_up(&mut self, mut pos: usize) {
        let var = self.heap[pos];
        while pos > 0 {
            let parent = (pos - 1) / 2;
            let pvar = self.heap[parent];
            if !self.before(var, pvar) {
                break;
            }
            self.heap[pos] = pvar;
            self.position[pvar.index()] = Some(pos);
            pos = parent;
        }
        self.heap[pos] = var;
        self.position[var.index()] = Some(pos);
    }

    fn sift_down(&mut self, mut pos: usize) {
        let var = self.heap[pos];
        loop {
            let left = 2 * pos + 1;
            if left >= self.heap.len() {
                break;
            }
            let right = left + 1;
            let child = if right < self.heap.len() && self.before(self.heap[right], self.heap[left])
            {
                right
            } else {
                left
            };
            let cvar = self.heap[child];
            if !self.before(cvar, var) {
                break;
            }
            self.heap[pos] = cvar;
            self.position[cvar.index()] = Some(pos);
            pos = child;
        }
        self.heap[pos] = var;
        self.position[var.index()] = Some(pos);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: usize) -> Var {
        Var::from_index(i)
    }

    #[test]
    fn ties_pick_lowest_index() {
        let mut h = Vsids::new(5, 0.95);
        let order: Vec<Var> = std::iter::from_fn(|| h.pop()).collect();
        assert_eq!(order, (0..5).map(v).collect::<Vec<_>>());
    }

    #[test]
    fn bumped_variables_come_first() {
        let mut h = Vsids::new(6, 0.95);
        for _ in 0..3 {
            h.bump(v(4));
            h.decay();
        }
        h.bump(v(2));
        assert_eq!(h.pop(), Some(v(4)));
        assert_eq!(h.pop(), Some(v(2)));
        assert_eq!(h.pop(), Some(v(0)));
        h.insert(v(4));
        assert_eq!(h.pop(), Some(v(4)));
    }

    #[test]
    fn rescaling_preserves_order() {
        let mut h = Vsids::new(3, 0.95);
        h.bump(v(2));
        for _ in 0..5000 {
            h.decay();
            h.bump(v(1));
        }
        assert!(h.activity(v(1)).is_finite());
        assert_eq!(h.pop(), Some(v(1)));
        assert_eq!(h.pop(), Some(v(2)));
    }
}
