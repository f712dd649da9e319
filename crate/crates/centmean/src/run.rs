//! Multi-threaded evaluation of harness cases.

use std::num::NonZeroUsize;
use std::ops::Range;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use centmean_core::harness::{sort_reports, Checker, Grid, HarnessConfig, InequalityReport, TheoremCase};

use crate::AppError;

/// Worker count from the machine, at least 1.
pub fn default_threads() -> usize {
    thread::available_parallelism().map_or(1, NonZeroUsize::get)
}

/// Runs of adjacent cases sharing theorem, side and profile pair. A run is
/// the unit of work: it keeps one worker's caches warm.
fn groups(cases: &[TheoremCase]) -> Vec<Range<usize>> {
    let key = |c: &TheoremCase| (c.theorem, c.side, c.f_label.clone(), c.b_label.clone());
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=cases.len() {
        if i == cases.len() || key(&cases[i]) != key(&cases[start]) {
            out.push(start..i);
            start = i;
        }
    }
    out
}

/// Evaluates `cases` on `threads` workers and returns the reports sorted by
/// case key. The output does not depend on the thread count.
pub fn run_cases(cases: &[TheoremCase], config: HarnessConfig, threads: usize) -> Vec<InequalityReport> {
    let groups = groups(cases);
    let next = AtomicUsize::new(0);
    let done: Mutex<Vec<InequalityReport>> = Mutex::new(Vec::with_capacity(cases.len()));
    let workers = threads.clamp(1, groups.len().max(1));
    thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| {
                let mut checker = Checker::new(config);
                loop {
                    let g = next.fetch_add(1, Ordering::Relaxed);
                    let Some(range) = groups.get(g) else { break };
                    let reports = checker.run(&cases[range.clone()]);
                    done.lock().expect("report lock").extend(reports);
                }
            });
        }
    });
    let mut reports = done.into_inner().expect("report lock");
    sort_reports(&mut reports);
    reports
}

/// Every admissible case of `grid`, evaluated in parallel.
pub fn sweep(grid: &Grid, config: HarnessConfig, threads: usize) -> Result<Vec<InequalityReport>, AppError> {
    let cases = grid.cases()?;
    Ok(run_cases(&cases, config, threads))
}
