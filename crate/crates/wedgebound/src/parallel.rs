use rayon::prelude::*;
use wedgebound_core::density::{Executor, Moments};

/// Runs estimator blocks on the rayon pool. Results come back in task
/// order, so estimates match [`wedgebound_core::density::Sequential`] bit
/// for bit.
#[derive(Clone, Copy, Debug, Default)]
pub struct Parallel;

impl Executor for Parallel {
    fn map(&self, tasks: usize, f: &(dyn Fn(usize) -> Vec<Moments> + Sync)) -> Vec<Vec<Moments>> {
        (0..tasks).into_par_iter().map(f).collect()
    }
}
