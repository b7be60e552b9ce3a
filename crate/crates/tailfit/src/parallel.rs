//! Multi-threaded goodness-of-fit bootstrap.
//!
//! Replicates are spread over a dedicated rayon pool. Each replicate draws
//! from its own `(seed, index)` stream and outcomes are re-ordered by index
//! before aggregation, so the result is identical for every thread count.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use tailfit_core::gof::{GofSetup, ReplicateOutcome};
use tailfit_core::{CountSample, Family, GofResult};

#[derive(Debug, thiserror::Error)]
pub enum ParallelError {
    #[error(transparent)]
    Model(#[from] tailfit_core::Error),
    #[error("could not start worker threads: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

/// Execution settings that never influence results.
#[derive(Debug, Clone, Copy, Default)]
pub struct Workers {
    /// Worker count; 0 lets rayon pick one per available core.
    pub threads: usize,
    /// Report progress on standard error.
    pub progress: bool,
}

/// [`tailfit_core::gof_test`] with replicates run concurrently.
pub fn gof_test(
    family: Family,
    data: &CountSample,
    n_min: u64,
    replicates: usize,
    seed: u64,
    workers: Workers,
) -> Result<GofResult, ParallelError> {
    let setup = GofSetup::new(family, data, n_min, replicates, seed)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers.threads).build()?;
    let done = AtomicUsize::new(0);
    let step = (replicates / 20).max(1);
    let outcomes: Vec<ReplicateOutcome> = pool.install(|| {
        (1..=replicates as u64)
            .into_par_iter()
            .map(|i| {
                let outcome = setup.replicate(i);
                if workers.progress {
                    let finished = done.fetch_add(1, Ordering::Relaxed) + 1;
                    if finished % step == 0 || finished == replicates {
                        eprintln!("[{}] {finished}/{replicates} replicates", family.short_name());
                    }
                }
                outcome
            })
            .collect::<Result<_, _>>()
    })?;
    Ok(setup.finish(outcomes)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tailfit_core::{sample, ModelSpec, SeededRng};

    #[test]
    fn matches_sequential_for_any_thread_count() {
        let spec = ModelSpec::yule_simon(2.5, 1).unwrap();
        let data = sample(&spec, &mut SeededRng::new(11, 0), 400).unwrap();
        let reference = tailfit_core::gof_test(Family::YuleSimon, &data, 1, 60, 5).unwrap();
        for threads in [1, 3, 8] {
            let workers = Workers { threads, progress: false };
            let r = gof_test(Family::YuleSimon, &data, 1, 60, 5, workers).unwrap();
            assert_eq!(r, reference);
        }
    }
}
