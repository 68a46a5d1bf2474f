//! Random connectivity and stimulus generation.
//!
//! Masks are stored src-major: edge `j -> i` of an `ns x nd` bundle lives at
//! bit `j * nd + i`. Dense storage keeps the inner loops branch free; a fiber
//! between two areas of 5000 neurons costs 25M bits plus 25M weights.

use fixedbitset::FixedBitSet;
use rand::distributions::{Bernoulli, Distribution};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::assembly::{Assembly, StimulusSet};
use crate::error::{Error, Result};

/// Default number of rejection-sampling attempts per stimulus set.
pub const STIMULUS_RETRY_BUDGET: usize = 1000;

/// Recurrent `n x n` mask. Every ordered pair `i != j` is present with
/// probability `p`; self-edges are never generated.
pub fn gen_recurrent<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> FixedBitSet {
    let coin = bernoulli(p);
    let mut mask = FixedBitSet::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            if i != j && coin.sample(rng) {
                mask.insert(j * n + i);
            }
        }
    }
    mask
}

/// Bipartite `ns x nd` mask with independent Bernoulli(`p`) edges.
pub fn gen_fiber<R: Rng + ?Sized>(ns: usize, nd: usize, p: f64, rng: &mut R) -> FixedBitSet {
    let coin = bernoulli(p);
    let mut mask = FixedBitSet::with_capacity(ns * nd);
    for idx in 0..ns * nd {
        if coin.sample(rng) {
            mask.insert(idx);
        }
    }
    mask
}

fn bernoulli(p: f64) -> Bernoulli {
    Bernoulli::new(p.clamp(0.0, 1.0)).expect("probability clamped to [0, 1]")
}

/// `count` sets of `k` neurons out of `n` whose pairwise intersections are at
/// most `delta`.
///
/// When the sets fit side by side (`k * count <= n`) they are cut from one
/// random permutation and are therefore disjoint. Otherwise each set is
/// rejection sampled against the ones already accepted, giving up after
/// [`STIMULUS_RETRY_BUDGET`] attempts.
pub fn sample_stimuli<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    count: usize,
    delta: usize,
    rng: &mut R,
) -> Result<Vec<StimulusSet>> {
    let infeasible = || Error::InfeasibleStimuli { n, k, count, delta };
    if k > n {
        return Err(infeasible());
    }
    if k == 0 {
        return Ok(vec![Assembly::empty(); count]);
    }
    if k.saturating_mul(count) <= n {
        let mut perm: Vec<u32> = (0..n as u32).collect();
        perm.shuffle(rng);
        return Ok(perm
            .chunks_exact(k)
            .take(count)
            .map(|c| Assembly::new(c.to_vec()))
            .collect());
    }
    if delta == 0 {
        return Err(infeasible());
    }
    let mut sets: Vec<StimulusSet> = Vec::with_capacity(count);
    for _ in 0..count {
        let mut accepted = None;
        for _ in 0..STIMULUS_RETRY_BUDGET {
            let candidate = random_set(n, k, rng);
            if sets.iter().all(|s| s.intersection_len(&candidate) <= delta) {
                accepted = Some(candidate);
                break;
            }
        }
        sets.push(accepted.ok_or_else(infeasible)?);
    }
    Ok(sets)
}

/// A uniformly random `k`-subset of `0..n`.
pub fn random_set<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Assembly {
    let ids = rand::seq::index::sample(rng, n, k)
        .into_iter()
        .map(|i| i as u32)
        .collect();
    Assembly::new(ids)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeedStream;

    #[test]
    fn complete_graph_without_loops() {
        let mut rng = SeedStream::new(1, 0).rng();
        let n = 7;
        let m = gen_recurrent(n, 1.0, &mut rng);
        assert_eq!(m.count_ones(..), n * (n - 1));
        for i in 0..n {
            assert!(!m.contains(i * n + i));
        }
    }

    #[test]
    fn tiny_p_is_nearly_empty() {
        let mut rng = SeedStream::new(1, 0).rng();
        let m = gen_recurrent(50, 1e-12, &mut rng);
        assert_eq!(m.count_ones(..), 0);
    }

    #[test]
    fn complete_fiber() {
        let mut rng = SeedStream::new(1, 0).rng();
        assert_eq!(gen_fiber(4, 6, 1.0, &mut rng).count_ones(..), 24);
    }

    #[test]
    fn fiber_is_deterministic() {
        let a = gen_fiber(60, 40, 0.3, &mut SeedStream::labeled(9, "x").rng());
        let b = gen_fiber(60, 40, 0.3, &mut SeedStream::labeled(9, "x").rng());
        assert_eq!(a, b);
    }

    #[test]
    fn disjoint_partition() {
        let mut rng = SeedStream::new(3, 0).rng();
        let sets = sample_stimuli(1000, 30, 20, 0, &mut rng).unwrap();
        assert_eq!(sets.len(), 20);
        for (a, s) in sets.iter().enumerate() {
            assert_eq!(s.len(), 30);
            for t in &sets[a + 1..] {
                assert_eq!(s.intersection_len(t), 0);
            }
        }
    }

    #[test]
    fn infeasible_without_overlap() {
        let mut rng = SeedStream::new(3, 0).rng();
        let err = sample_stimuli(100, 30, 4, 0, &mut rng).unwrap_err();
        assert!(matches!(err, Error::InfeasibleStimuli { .. }));
    }

    #[test]
    fn rejection_sampling_respects_delta() {
        let mut rng = SeedStream::new(3, 0).rng();
        let sets = sample_stimuli(100, 30, 6, 15, &mut rng).unwrap();
        for (a, s) in sets.iter().enumerate() {
            for t in &sets[a + 1..] {
                assert!(s.intersection_len(t) <= 15);
            }
        }
    }

    #[test]
    fn rejection_budget_exhausts() {
        let mut rng = SeedStream::new(3, 0).rng();
        assert!(sample_stimuli(40, 30, 3, 1, &mut rng).is_err());
    }
}
