use std::collections::BTreeMap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::arrangement::ExperimentalArrangement;
use crate::tensor::MultiIndex;

/// Identifier of the sampling algorithm, written into every report.
///
/// ChaCha8 seeded through `seed_from_u64`; each draw takes the top 53 bits of
/// one `u64` as a uniform in `[0, 1)` and inverts the cumulative potentia
/// (negative round-off clamped to zero) in linear power order.
pub const SAMPLER_ALGORITHM: &str = "chacha8-inverse-cdf-v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleReport {
    pub algorithm: &'static str,
    pub seed: u64,
    pub draws: u64,
    /// Observed outcomes only.
    pub counts: BTreeMap<MultiIndex, u64>,
}

impl SampleReport {
    pub fn count(&self, index: &MultiIndex) -> u64 {
        self.counts.get(index).copied().unwrap_or(0)
    }

    pub fn frequency(&self, index: &MultiIndex) -> f64 {
        if self.draws == 0 {
            return 0.0;
        }
        self.count(index) as f64 / self.draws as f64
    }
}

/// Multinomial draw of `count` outcomes over the potentia of `ea`.
pub fn sample_outcomes(ea: &ExperimentalArrangement, count: u64, seed: u64) -> SampleReport {
    let table = ea.potentia_table();
    let mut cumulative = Vec::with_capacity(table.len());
    let mut acc = 0.0;
    for (_, p) in &table {
        acc += p.max(0.0);
        cumulative.push(acc);
    }
    let total = acc;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tallies = vec![0u64; table.len()];
    for _ in 0..count {
        let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64) * total;
        // First position whose cumulative mass exceeds u; zero-mass powers are
        // never selected.
        let k = cumulative.partition_point(|&c| c <= u).min(table.len() - 1);
        tallies[k] += 1;
    }
    let counts = table
        .into_iter()
        .zip(tallies)
        .filter(|(_, n)| *n > 0)
        .map(|((k, _), n)| (k, n))
        .collect();
    SampleReport {
        algorithm: SAMPLER_ALGORITHM,
        seed,
        draws: count,
        counts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::ScreenConfiguration;

    fn diag(p: &[f64]) -> ExperimentalArrangement {
        ExperimentalArrangement::diagonal(ScreenConfiguration::new(vec![p.len()]).unwrap(), p).unwrap()
    }

    #[test]
    fn certain_outcome() {
        for seed in [0, 1, 99, u64::MAX] {
            let r = sample_outcomes(&diag(&[1.0, 0.0]), 500, seed);
            assert_eq!(r.count(&MultiIndex(vec![1])), 500);
            assert_eq!(r.counts.len(), 1);
        }
    }

    #[test]
    fn binomial_frequency() {
        let r = sample_outcomes(&diag(&[0.7, 0.3]), 10_000, 5);
        let f = r.frequency(&MultiIndex(vec![1]));
        assert!((f - 0.7).abs() <= 3.0 * (0.21f64 / 10_000.0).sqrt(), "frequency {f}");
        assert_eq!(r.algorithm, SAMPLER_ALGORITHM);
    }

    #[test]
    fn seeded_determinism() {
        let ea = diag(&[0.2, 0.5, 0.3]);
        assert_eq!(sample_outcomes(&ea, 1000, 42), sample_outcomes(&ea, 1000, 42));
        assert_ne!(sample_outcomes(&ea, 1000, 42), sample_outcomes(&ea, 1000, 43));
    }

    #[test]
    fn zero_draws() {
        let r = sample_outcomes(&diag(&[0.5, 0.5]), 0, 1);
        assert!(r.counts.is_empty());
        assert_eq!(r.frequency(&MultiIndex(vec![1])), 0.0);
    }
}
