//! Replicates on the rayon pool. Replicate `i` only ever sees its own
//! substream, and results come back in index order, so the output is the same
//! for any thread count.

use hawkinar_core::approx::{ConvergenceReport, SweepPlan};
use hawkinar_core::{Result, RngStream};
use rayon::prelude::*;

/// `f(0), …, f(n − 1)`, evaluated in parallel.
pub fn replicate<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// Like [`replicate`], stopping at the first error (by index).
pub fn try_replicate<T, E, F>(n: usize, f: F) -> std::result::Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> std::result::Result<T, E> + Sync + Send,
{
    replicate(n, f).into_iter().collect()
}

/// Same result as [`hawkinar_core::approx::convergence_sweep`], with the
/// replicates of each grid width run in parallel.
pub fn convergence_sweep(plan: &SweepPlan, stream: RngStream) -> Result<ConvergenceReport> {
    let rows = (0..plan.grid_count())
        .map(|g| {
            let draws = try_replicate(plan.reps(), |r| plan.replicate(g, r, stream))?;
            plan.assemble(g, &draws, stream)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport { rows })
}
