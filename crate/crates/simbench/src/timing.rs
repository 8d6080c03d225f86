//! Wall-clock sampling and summary statistics.

use std::hint::black_box;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimingOptions {
    /// Untimed iterations run first.
    pub warmup: usize,
    /// Timed iterations.
    pub iterations: usize,
}

impl Default for TimingOptions {
    fn default() -> Self {
        Self {
            warmup: 5,
            iterations: 50,
        }
    }
}

/// Five-number summary plus mean, in microseconds.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Summary {
    pub min: f64,
    pub p25: f64,
    pub median: f64,
    pub p75: f64,
    pub max: f64,
    pub mean: f64,
    pub count: usize,
}

impl Summary {
    /// `None` for an empty sample.
    pub fn from_samples(samples: &[f64]) -> Option<Self> {
        if samples.is_empty() {
            return None;
        }
        let mut s = samples.to_vec();
        s.sort_by(f64::total_cmp);
        Some(Self {
            min: s[0],
            p25: percentile(&s, 0.25),
            median: percentile(&s, 0.5),
            p75: percentile(&s, 0.75),
            max: s[s.len() - 1],
            mean: s.iter().sum::<f64>() / s.len() as f64,
            count: s.len(),
        })
    }
}

/// Linear interpolation between closest ranks of a sorted sample.
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Times `routine` on a fresh `setup()` value per iteration; setup is not
/// timed.
pub fn measure<S, R>(opts: TimingOptions, mut setup: impl FnMut() -> S, mut routine: impl FnMut(S) -> R) -> Summary {
    for _ in 0..opts.warmup {
        black_box(routine(setup()));
    }
    let mut samples = Vec::with_capacity(opts.iterations);
    for _ in 0..opts.iterations.max(1) {
        let input = setup();
        let t = Instant::now();
        let out = black_box(routine(input));
        samples.push(t.elapsed().as_secs_f64() * 1e6);
        drop(out);
    }
    Summary::from_samples(&samples).expect("at least one iteration")
}

/// Least-squares slope of ln(y) against ln(x), skipping non-positive pairs.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if logs.len() < 2 {
        return None;
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// [`loglog_slope`] restricted to `x >= max_x / 10`.
pub fn top_decade_slope(points: &[(f64, f64)]) -> Option<f64> {
    let max_x = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let top: Vec<_> = points.iter().copied().filter(|p| p.0 >= max_x / 10.0).collect();
    loglog_slope(&top)
}
