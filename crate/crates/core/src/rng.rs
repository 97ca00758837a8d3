//! Counter-based uniforms keyed by `(seed, sample, bond)`.
//!
//! Every bond of every Monte Carlo sample gets one uniform in `[0, 1)` that is
//! a pure function of its key. A bond is occupied at density `p` iff its
//! uniform is below `p`, which couples all densities monotonically and makes
//! results independent of how samples are scheduled across workers.

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// The SplitMix64 output function.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[inline]
fn to_unit(h: u64) -> f64 {
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform source for one sample. Construct with [`SampleStream::new`]; the
/// per-sample key is hashed once so each bond lookup costs one mix.
#[derive(Debug, Clone, Copy)]
pub struct SampleStream {
    key: u64,
}

impl SampleStream {
    pub fn new(seed: u64, sample: u64) -> Self {
        let k = mix64(seed.wrapping_add(GOLDEN));
        SampleStream {
            key: mix64(k ^ mix64(sample.wrapping_mul(GOLDEN).wrapping_add(0x632b_e59b_d9b4_e019))),
        }
    }

    /// Derived stream for a sub-experiment (e.g. one level of a nested
    /// expectation) that must be independent of the parent stream.
    pub fn substream(self, tag: u64) -> Self {
        SampleStream {
            key: mix64(self.key ^ mix64(tag.wrapping_add(0xd6e8_feb8_6659_fd93))),
        }
    }

    #[inline]
    pub fn uniform(self, bond: u64) -> f64 {
        to_unit(mix64(self.key ^ bond.wrapping_mul(GOLDEN)))
    }

    #[inline]
    pub fn occupied(self, bond: u64, p: f64) -> bool {
        self.uniform(bond) < p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_in_range() {
        let s = SampleStream::new(7, 3);
        for b in 0..1000 {
            let u = s.uniform(b);
            assert!((0.0..1.0).contains(&u));
            assert_eq!(u, SampleStream::new(7, 3).uniform(b));
        }
    }

    #[test]
    fn streams_differ() {
        let a = SampleStream::new(1, 0);
        let b = SampleStream::new(1, 1);
        let c = SampleStream::new(2, 0);
        assert_ne!(a.uniform(0), b.uniform(0));
        assert_ne!(a.uniform(0), c.uniform(0));
        assert_ne!(a.uniform(0), a.substream(1).uniform(0));
    }

    #[test]
    fn roughly_uniform() {
        let s = SampleStream::new(42, 0);
        let n = 200_000;
        let mut bins = [0u32; 10];
        let mut sum = 0.0;
        for b in 0..n {
            let u = s.uniform(b);
            sum += u;
            bins[(u * 10.0) as usize] += 1;
        }
        assert!((sum / n as f64 - 0.5).abs() < 0.005);
        for c in bins {
            assert!((c as f64 - n as f64 / 10.0).abs() < 600.0);
        }
    }
}
