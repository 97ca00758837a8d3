use serde::Serialize;

/// Integer sample moments. Exact, so merging partial results in any order
/// gives identical totals.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Moments {
    pub count: u64,
    pub sum: u128,
    pub sum_sq: u128,
    pub truncated: u64,
}

impl Moments {
    #[inline]
    pub fn push(&mut self, x: u64) {
        self.count += 1;
        self.sum += x as u128;
        self.sum_sq += (x as u128) * (x as u128);
    }

    pub fn merge(&mut self, other: &Moments) {
        self.count += other.count;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self.truncated += other.truncated;
    }

    /// Unbiased sample variance of the raw values.
    pub fn variance(&self) -> f64 {
        let n = self.count as u128;
        if n < 2 {
            return 0.0;
        }
        let centered = n
            .checked_mul(self.sum_sq)
            .and_then(|a| self.sum.checked_mul(self.sum).map(|b| a.saturating_sub(b)));
        match centered {
            Some(c) => c as f64 / (n as f64 * (n - 1) as f64),
            None => {
                let mean = self.sum as f64 / n as f64;
                ((self.sum_sq as f64 - n as f64 * mean * mean) / (n - 1) as f64).max(0.0)
            }
        }
    }
}

/// A Monte Carlo mean with its standard error and run metadata.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
    pub stream_count: u32,
    /// Samples whose cluster hit the size cap; their values are lower bounds.
    pub truncated: u64,
}

impl Estimate {
    /// `scale * x` averaged over the recorded samples.
    pub fn from_moments(m: &Moments, scale: f64, seed: u64, stream_count: u32) -> Self {
        let n = m.count.max(1) as f64;
        Estimate {
            mean: scale * (m.sum as f64 / n),
            stderr: scale * (m.variance() / n).sqrt(),
            samples: m.count,
            seed,
            stream_count,
            truncated: m.truncated,
        }
    }

    /// Whether `value` lies within `k` standard errors of the mean. A zero
    /// standard error requires exact agreement.
    pub fn within(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.stderr + 1e-12 * value.abs().max(1.0)
    }
}
