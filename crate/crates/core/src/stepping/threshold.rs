//! Threshold selection for ρ-stepping.

use rand::Rng;

use crate::dist::Distance;
use crate::error::{Error, Result};

/// Estimates the ρ-th smallest of `frontier_size` keys, where `key_at(i)`
/// returns the i-th key.
///
/// Frontiers of at most ρ keys yield their maximum. Otherwise
/// `s = c * (ceil(F / ρ) + ceil(log2 F))` keys are drawn uniformly with
/// replacement, sorted, and the `ceil(ρ * s / F)`-th smallest is returned.
pub fn sample_rho_threshold<R: Rng + ?Sized>(
    frontier_size: usize,
    key_at: impl Fn(usize) -> Distance,
    rho: usize,
    c: usize,
    rng: &mut R,
) -> Result<Distance> {
    if frontier_size == 0 {
        return Err(Error::Domain("threshold of an empty frontier".into()));
    }
    if rho == 0 || c == 0 {
        return Err(Error::Config("rho and the sample constant must be positive".into()));
    }
    if frontier_size <= rho {
        return Ok((0..frontier_size).map(&key_at).max().unwrap());
    }
    let f = frontier_size;
    let log = usize::BITS - (f - 1).leading_zeros();
    let s = c * (f.div_ceil(rho) + log as usize);
    let mut sample: Vec<Distance> = (0..s).map(|_| key_at(rng.gen_range(0..f))).collect();
    sample.sort_unstable();
    let rank = ((rho as u128 * s as u128).div_ceil(f as u128) as usize).clamp(1, s);
    Ok(sample[rank - 1])
}

/// The exact ρ-th smallest key (the maximum when there are at most ρ).
pub fn exact_rho_threshold(mut keys: Vec<Distance>, rho: usize) -> Result<Distance> {
    if keys.is_empty() {
        return Err(Error::Domain("threshold of an empty frontier".into()));
    }
    if rho == 0 {
        return Err(Error::Config("rho must be positive".into()));
    }
    if keys.len() <= rho {
        return Ok(*keys.iter().max().unwrap());
    }
    let (_, kth, _) = keys.select_nth_unstable(rho - 1);
    Ok(*kth)
}

/// ρ for the current step: a reduced fraction during the first dense rounds.
pub fn rho_warmup_adjust(
    dense_rounds_seen: usize,
    dense: bool,
    rho: usize,
    warmup_rounds: usize,
    fraction: f64,
) -> usize {
    if dense && dense_rounds_seen < warmup_rounds {
        ((rho as f64 * fraction).floor() as usize).max(1)
    } else {
        rho
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_frontier_takes_max() {
        let keys = [4u64, 9, 2, 7, 5];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(sample_rho_threshold(5, |i| keys[i], 100, 10, &mut rng).unwrap(), 9);
        assert_eq!(exact_rho_threshold(keys.to_vec(), 100).unwrap(), 9);
    }

    #[test]
    fn equal_keys() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(sample_rho_threshold(5000, |_| 42, 10, 10, &mut rng).unwrap(), 42);
    }

    #[test]
    fn empty_frontier_is_an_error() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(matches!(sample_rho_threshold(0, |_| 0, 1, 10, &mut rng), Err(Error::Domain(_))));
        assert!(exact_rho_threshold(vec![], 3).is_err());
    }

    #[test]
    fn exact_selects_kth() {
        let keys: Vec<u64> = (1..=100).rev().collect();
        assert_eq!(exact_rho_threshold(keys, 10).unwrap(), 10);
    }

    #[test]
    fn sampled_rank_lands_near_rho() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mut good = 0;
        for _ in 0..200 {
            // Keys 1..=10000, so the rank of a key is the key itself.
            let t = sample_rho_threshold(10_000, |i| i as u64 + 1, 1000, 10, &mut rng).unwrap();
            if (500..=2000).contains(&t) {
                good += 1;
            }
        }
        assert!(good >= 190, "{good}/200");
    }

    #[test]
    fn warmup() {
        assert_eq!(rho_warmup_adjust(0, true, 1 << 21, 2, 0.1), 209_715);
        assert_eq!(rho_warmup_adjust(1, true, 1 << 21, 2, 0.1), 209_715);
        assert_eq!(rho_warmup_adjust(2, true, 1 << 21, 2, 0.1), 1 << 21);
        assert_eq!(rho_warmup_adjust(0, false, 1 << 21, 2, 0.1), 1 << 21);
        assert_eq!(rho_warmup_adjust(0, true, 5, 2, 0.1), 1);
    }
}
