//! One solver run with an optional wall-clock limit.

use std::sync::atomic::Ordering;
use std::sync::mpsc;
use std::thread;
use std::time::Duration;

use posat_core::{RawFormula, SolveStats, Solver, SolverConfig, UnknownReason, Verdict};

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub verdict: Verdict,
    pub stats: SolveStats,
    /// The wall-clock limit interrupted the search.
    pub timed_out: bool,
}

/// Solves `formula`, interrupting the search once `timeout` has elapsed.
///
/// The interrupt is cooperative: the solver notices it at the next conflict or decision.
pub fn solve_with_timeout(
    formula: &RawFormula,
    config: SolverConfig,
    timeout: Option<Duration>,
) -> RunOutcome {
    let mut solver = Solver::new(formula, config);
    let Some(limit) = timeout else {
        let verdict = solver.solve();
        return RunOutcome {
            verdict,
            stats: solver.stats().clone(),
            timed_out: false,
        };
    };

    let flag = solver.interrupt_handle();
    let (done, wait) = mpsc::channel::<()>();
    let timer = thread::spawn(move || {
        if let Err(mpsc::RecvTimeoutError::Timeout) = wait.recv_timeout(limit) {
            flag.store(true, Ordering::Relaxed);
        }
    });
    let verdict = solver.solve();
    drop(done);
    timer.join().expect("timer thread panicked");

    let timed_out = verdict == Verdict::Unknown(UnknownReason::Interrupted);
    RunOutcome {
        verdict,
        stats: solver.stats().clone(),
        timed_out,
    }
}
