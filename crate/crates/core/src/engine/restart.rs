//! Restart scheduling.

use std::collections::VecDeque;

use crate::config::{RestartStrategy, SolverConfig};

/// The `i`-th element (0-based) of the Luby sequence 1, 1, 2, 1, 1, 2, 4, ...
pub fn luby(mut i: u64) -> u64 {
    let mut size = 1;
    let mut seq = 0;
    while size < i + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != i {
        size = (size - 1) >> 1;
        seq -= 1;
        i %= size;
    }
    1 << seq
}

pub struct Restarts {
    strategy: RestartStrategy,
    recent: VecDeque<u32>,
    recent_sum: u64,
    recent_cap: usize,
    margin: f64,
    total_sum: u64,
    total_count: u64,
    since_restart: u64,
    luby_index: u64,
    luby_unit: u64,
}

impl Restarts {
    pub fn new(config: &SolverConfig) -> Restarts {
        Restarts {
            strategy: config.restart_strategy,
            recent: VecDeque::with_capacity(config.lbd_queue_len),
            recent_sum: 0,
            recent_cap: config.lbd_queue_len.max(1),
            margin: config.restart_margin,
            total_sum: 0,
            total_count: 0,
            since_restart: 0,
            luby_index: 0,
            luby_unit: config.luby_unit.max(1),
        }
    }

    /// Records the lbd of the clause learned from a conflict.
    pub fn on_conflict(&mut self, lbd: u32) {
        self.since_restart += 1;
        self.total_sum += lbd as u64;
        self.total_count += 1;
        if self.recent.len() == self.recent_cap {
            self.recent_sum -= self.recent.pop_front().unwrap() as u64;
        }
        self.recent.push_back(lbd);
        self.recent_sum += lbd as u64;
    }

    pub fn should_restart(&self) -> bool {
        match self.strategy {
            RestartStrategy::LbdAdaptive => {
                if self.recent.len() < self.recent_cap {
                    return false;
                }
                let recent = self.recent_sum as f64 / self.recent.len() as f64;
                let global = self.total_sum as f64 / self.total_count as f64;
                recent * self.margin > global
            }
            RestartStrategy::Luby => self.since_restart >= luby(self.luby_index) * self.luby_unit,
        }
    }

    pub fn restarted(&mut self) {
        self.since_restart = 0;
        self.luby_index += 1;
        self.recent.clear();
        self.recent_sum = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn luby_prefix() {
        let seq: Vec<u64> = (0..15).map(luby).collect();
        assert_eq!(seq, vec![1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }

    #[test]
    fn luby_schedule() {
        let config = SolverConfig {
            restart_strategy: RestartStrategy::Luby,
            luby_unit: 2,
            ..SolverConfig::default()
        };
        let mut r = Restarts::new(&config);
        r.on_conflict(3);
        assert!(!r.should_restart());
        r.on_conflict(3);
        assert!(r.should_restart());
        r.restarted();
        r.on_conflict(3);
        assert!(!r.should_restart());
        r.on_conflict(3);
        assert!(r.should_restart());
        r.restarted();
        for _ in 0..3 {
            r.on_conflict(3);
        }
        assert!(!r.should_restart());
        r.on_conflict(3);
        assert!(r.should_restart());
    }

    #[test]
    fn lbd_restart_triggers_on_a_bad_window() {
        let config = SolverConfig {
            lbd_queue_len: 4,
            ..SolverConfig::default()
        };
        let mut r = Restarts::new(&config);
        for _ in 0..3 {
            r.on_conflict(2);
            assert!(!r.should_restart(), "window not yet full");
        }
        for _ in 0..17 {
            r.on_conflict(2);
        }
        assert!(!r.should_restart());
        // window [2, 2, 2, 20]: 6.5 * 0.7 exceeds the global average
        r.on_conflict(20);
        assert!(r.should_restart());
        r.restarted();
        assert!(!r.should_restart());
    }
}
