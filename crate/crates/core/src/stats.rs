//! Running moments and a scheduling-independent parallel reduction.

use rayon::prelude::*;

/// Welford accumulator. Merging uses Chan's pairwise update, so a constant
/// sample keeps an exact mean and an exactly zero variance.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningStats {
    count: u64,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &RunningStats) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = self.count + other.count;
        let delta = other.mean - self.mean;
        self.mean += delta * (other.count as f64 / n as f64);
        self.m2 += other.m2
            + delta * delta * (self.count as f64 * other.count as f64 / n as f64);
        self.count = n;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance; zero for fewer than two samples.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64).max(0.0)
        }
    }

    /// Sample standard deviation over `sqrt(count)`.
    pub fn stderr(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }
}

/// Outcome of a single Monte Carlo path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathOutcome {
    Scored { value: f64, steps: u64 },
    Discarded { steps: u64 },
}

/// Aggregate over a batch of paths.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PathSummary {
    pub values: RunningStats,
    pub steps: RunningStats,
    pub discarded: u64,
}

impl PathSummary {
    fn push(&mut self, outcome: PathOutcome) {
        match outcome {
            PathOutcome::Scored { value, steps } => {
                self.values.push(value);
                self.steps.push(steps as f64);
            }
            PathOutcome::Discarded { steps } => {
                self.discarded += 1;
                self.steps.push(steps as f64);
            }
        }
    }

    fn merge(&mut self, other: &PathSummary) {
        self.values.merge(&other.values);
        self.steps.merge(&other.steps);
        self.discarded += other.discarded;
    }
}

const CHUNK: u64 = 512;

/// Runs `path(i)` for `i in 0..paths` on the current rayon pool.
///
/// Paths are grouped into fixed-size chunks that are accumulated sequentially
/// and merged in chunk order, so the summary is bit-identical for any number
/// of worker threads.
pub fn reduce_paths<F>(paths: u64, path: F) -> PathSummary
where
    F: Fn(u64) -> PathOutcome + Sync,
{
    let chunks = paths.div_ceil(CHUNK);
    let partials: Vec<PathSummary> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = PathSummary::default();
            for i in c * CHUNK..((c + 1) * CHUNK).min(paths) {
                acc.push(path(i));
            }
            acc
        })
        .collect();
    partials.iter().fold(PathSummary::default(), |mut acc, p| {
        acc.merge(p);
        acc
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn constant_samples_are_exact() {
        let mut s = RunningStats::new();
        for _ in 0..10_001 {
            s.push(0.1);
        }
        assert_eq!(s.mean(), 0.1);
        assert_eq!(s.variance(), 0.0);
        assert_eq!(s.stderr(), 0.0);
    }

    #[test]
    fn empty_and_single_sample() {
        let mut s = RunningStats::new();
        assert_eq!(s.stderr(), 0.0);
        s.push(3.0);
        assert_eq!(s.mean(), 3.0);
        assert_eq!(s.variance(), 0.0);
    }

    proptest! {
        #[test]
        fn merge_matches_sequential(xs in prop::collection::vec(-1e3f64..1e3, 2..200), split in 0usize..200) {
            let split = split.min(xs.len());
            let mut all = RunningStats::new();
            xs.iter().for_each(|&x| all.push(x));
            let mut a = RunningStats::new();
            let mut b = RunningStats::new();
            xs[..split].iter().for_each(|&x| a.push(x));
            xs[split..].iter().for_each(|&x| b.push(x));
            a.merge(&b);
            prop_assert!((a.mean() - all.mean()).abs() <= 1e-9 * (1.0 + all.mean().abs()));
            prop_assert!((a.variance() - all.variance()).abs() <= 1e-7 * (1.0 + all.variance()));
        }
    }

    #[test]
    fn reduction_is_independent_of_thread_count() {
        let f = |i: u64| {
            if i % 97 == 0 {
                PathOutcome::Discarded { steps: i }
            } else {
                PathOutcome::Scored {
                    value: (i as f64).sin(),
                    steps: i % 13,
                }
            }
        };
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| reduce_paths(5_000, f))
        };
        let one = run(1);
        assert_eq!(one, run(3));
        assert_eq!(one, run(8));
        assert_eq!(one.discarded, 52);
        assert_eq!(one.values.count(), 5_000 - 52);
    }
}
