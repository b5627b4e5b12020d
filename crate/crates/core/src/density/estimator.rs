use alloc::vec::Vec;

use libm::sqrt;

use crate::rng::{Antithetic, Stream, UniformSource};
use crate::sampling::BetaInt;
use crate::{Error, Result};

/// Observations per block. Each block owns one counter-based stream.
pub const BLOCK: u64 = 4096;

/// Default number of equal-probability strata on the join parameter.
pub const STRATA: u32 = 16;

/// Running mean and centred second moment (Welford), mergeable.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    #[inline]
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = self.count + other.count;
        let delta = other.mean - self.mean;
        let (na, nb) = (self.count as f64, other.count as f64);
        self.mean += delta * nb / n as f64;
        self.m2 += other.m2 + delta * delta * na * nb / n as f64;
        self.count = n;
    }

    /// Unbiased sample variance; zero below two observations.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }
}

/// Runs independent blocks of work and returns their results in task
/// order. Implementations may run tasks concurrently; results must not
/// depend on scheduling.
pub trait Executor: Sync {
    fn map(&self, tasks: usize, f: &(dyn Fn(usize) -> Vec<Moments> + Sync)) -> Vec<Vec<Moments>>;
}

/// Runs every task on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map(&self, tasks: usize, f: &(dyn Fn(usize) -> Vec<Moments> + Sync)) -> Vec<Vec<Moments>> {
        (0..tasks).map(f).collect()
    }
}

/// A vector-valued integrand over a base whose join parameter follows
/// [`Job::join_law`]. All channels of one observation share the same draw.
pub trait Job: Sync {
    fn channels(&self) -> usize;

    fn join_law(&self) -> BetaInt;

    /// Length of the scratch buffer handed to [`Job::eval`].
    fn scratch_len(&self) -> usize {
        0
    }

    fn eval(&self, t: f64, rng: &mut dyn UniformSource, scratch: &mut [f64], out: &mut [f64]);
}

/// Stratified estimates of every channel of a job.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelEstimate {
    pub means: Vec<f64>,
    pub stderrs: Vec<f64>,
    pub n: u64,
    pub seed: u64,
}

/// Monte-Carlo driver holding the sample budget and seed.
#[derive(Clone, Copy)]
pub struct Estimator<'a> {
    n: u64,
    seed: u64,
    strata: u32,
    antithetic: bool,
    executor: &'a dyn Executor,
}

impl core::fmt::Debug for Estimator<'_> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Estimator")
            .field("n", &self.n)
            .field("seed", &self.seed)
            .field("strata", &self.strata)
            .field("antithetic", &self.antithetic)
            .finish()
    }
}

impl Estimator<'static> {
    pub fn new(n: u64, seed: u64) -> Self {
        Self {
            n,
            seed,
            strata: STRATA,
            antithetic: false,
            executor: &Sequential,
        }
    }
}

impl<'a> Estimator<'a> {
    pub fn with_executor<'b>(self, executor: &'b dyn Executor) -> Estimator<'b> {
        Estimator {
            n: self.n,
            seed: self.seed,
            strata: self.strata,
            antithetic: self.antithetic,
            executor,
        }
    }

    pub fn strata(mut self, strata: u32) -> Self {
        self.strata = strata.max(1);
        self
    }

    /// Pairs every draw with its reflection `u -> 1 - u`; each observation
    /// is the mean of the pair, and `n` counts integrand evaluations.
    pub fn antithetic(mut self, on: bool) -> Self {
        self.antithetic = on;
        self
    }

    pub fn samples(mut self, n: u64) -> Self {
        self.n = n;
        self
    }

    pub fn seed_value(&self) -> u64 {
        self.seed
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn executor(&self) -> &'a dyn Executor {
        self.executor
    }

    pub fn run<J: Job>(&self, job: &J) -> Result<ChannelEstimate> {
        let observations = if self.antithetic { self.n.div_ceil(2) } else { self.n };
        if observations == 0 {
            return Err(Error::Config("sample count must be positive".into()));
        }
        let strata = u64::from(self.strata).min((observations / 2).max(1));
        let per: Vec<u64> = (0..strata)
            .map(|s| observations / strata + u64::from(s < observations % strata))
            .collect();
        let mut tasks: Vec<(u32, u32, u64)> = Vec::new();
        for (s, &count) in per.iter().enumerate() {
            let blocks = count.div_ceil(BLOCK);
            for b in 0..blocks {
                let len = BLOCK.min(count - b * BLOCK);
                tasks.push((s as u32, b as u32, len));
            }
        }
        let channels = job.channels();
        let law = job.join_law();
        let seed = self.seed;
        let antithetic = self.antithetic;
        let strata_f = strata as f64;
        let work = |i: usize| -> Vec<Moments> {
            let (s, b, len) = tasks[i];
            let mut rng = Stream::for_block(seed, s, b);
            let mut scratch = alloc::vec![0.0; job.scratch_len()];
            let mut out = alloc::vec![0.0; channels];
            let mut mirror = alloc::vec![0.0; if antithetic { channels } else { 0 }];
            let mut moments = alloc::vec![Moments::default(); channels];
            for _ in 0..len {
                let snapshot = rng;
                let v = rng.next_f64();
                let t = law.quantile((f64::from(s) + v) / strata_f);
                job.eval(t, &mut rng, &mut scratch, &mut out);
                if antithetic {
                    let mut anti = Antithetic(snapshot);
                    let v = anti.next_f64();
                    let t = law.quantile((f64::from(s) + v) / strata_f);
                    job.eval(t, &mut anti, &mut scratch, &mut mirror);
                    for (o, m) in out.iter_mut().zip(&mirror) {
                        *o = 0.5 * (*o + m);
                    }
                }
                for (m, &x) in moments.iter_mut().zip(&out) {
                    m.push(x);
                }
            }
            moments
        };
        let results = self.executor.map(tasks.len(), &work);

        let mut by_stratum = alloc::vec![alloc::vec![Moments::default(); channels]; strata as usize];
        for ((s, _, _), block) in tasks.iter().zip(&results) {
            for (acc, m) in by_stratum[*s as usize].iter_mut().zip(block) {
                acc.merge(m);
            }
        }
        let mut means = alloc::vec![0.0; channels];
        let mut vars = alloc::vec![0.0; channels];
        for stratum in &by_stratum {
            for c in 0..channels {
                let m = &stratum[c];
                means[c] += m.mean / strata_f;
                vars[c] += m.variance() / (m.count as f64 * strata_f * strata_f);
            }
        }
        Ok(ChannelEstimate {
            means,
            stderrs: vars.into_iter().map(sqrt).collect(),
            n: self.n,
            seed,
        })
    }
}
