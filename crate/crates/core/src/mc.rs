//! Seeded, chunked Monte Carlo accumulation. The sample budget is split over a
//! fixed number of chunks, each driven by its own ChaCha stream derived from
//! (seed, chunk index); partial sums are merged in chunk order, so results do
//! not depend on the number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub const MC_CHUNKS: usize = 32;

/// Deterministic generator for one worker chunk.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
}

impl McEstimate {
    /// |mean − expected| ≤ nsigma·σ + slack.
    pub fn agrees(&self, expected: f64, nsigma: f64, slack: f64) -> bool {
        (self.mean - expected).abs() <= nsigma * self.std_error + slack
    }
}

/// Estimates E[f] componentwise: `f` writes one sample of `dim` real values.
pub fn estimate<F>(seed: u64, samples: usize, dim: usize, f: F) -> Vec<McEstimate>
where
    F: Fn(&mut ChaCha8Rng, &mut [f64]) + Sync,
{
    assert!(samples > 1, "need at least two samples");
    let partials: Vec<(Vec<f64>, Vec<f64>)> = (0..MC_CHUNKS)
        .into_par_iter()
        .map(|chunk| {
            let n = samples / MC_CHUNKS + usize::from(chunk < samples % MC_CHUNKS);
            let mut rng = chunk_rng(seed, chunk as u64);
            let mut sum = vec![0.0; dim];
            let mut sq = vec![0.0; dim];
            let mut buf = vec![0.0; dim];
            for _ in 0..n {
                f(&mut rng, &mut buf);
                for k in 0..dim {
                    sum[k] += buf[k];
                    sq[k] += buf[k] * buf[k];
                }
            }
            (sum, sq)
        })
        .collect();
    let mut sum = vec![0.0; dim];
    let mut sq = vec![0.0; dim];
    for (s, q) in &partials {
        for k in 0..dim {
            sum[k] += s[k];
            sq[k] += q[k];
        }
    }
    let n = samples as f64;
    (0..dim)
        .map(|k| {
            let mean = sum[k] / n;
            let var = ((sq[k] / n - mean * mean) * n / (n - 1.0)).max(0.0);
            McEstimate { mean, std_error: (var / n).sqrt(), samples, seed }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn uniform_mean() {
        let e = estimate(7, 20_000, 1, |rng, out| out[0] = rng.random::<f64>());
        assert!(e[0].agrees(0.5, 5.0, 0.0));
        assert!((e[0].std_error - (1.0f64 / 12.0 / 20_000.0).sqrt()).abs() < 1e-4);
    }

    #[test]
    fn reproducible() {
        let f = |rng: &mut ChaCha8Rng, out: &mut [f64]| out[0] = rng.random::<f64>();
        assert_eq!(estimate(3, 1000, 1, f), estimate(3, 1000, 1, f));
        assert_ne!(estimate(3, 1000, 1, f)[0].mean, estimate(4, 1000, 1, f)[0].mean);
    }
}
