//! Random simple cubic signed graphs via pairing-model sampling.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use sixflow::{Sign, SignedGraph};

#[derive(Debug, Error, PartialEq)]
pub enum GenError {
    #[error("n = {0} must be an even integer >= 4")]
    BadOrder(usize),
    #[error("negative-edge probability {0} must lie in [0, 1]")]
    BadProbability(f64),
    #[error("rejection cap of {0} attempts exceeded")]
    RejectionCapExceeded(usize),
}

const REJECTION_CAP: usize = 100_000;

/// Samples a simple 3-regular graph on `n` vertices uniformly from the
/// pairing model, rejecting pairings with loops or parallel edges, then
/// makes each edge negative independently with probability `neg_prob`.
/// Deterministic for a fixed seed.
pub fn random_cubic_signed(n: usize, neg_prob: f64, seed: u64) -> Result<SignedGraph, GenError> {
    if n < 4 || n % 2 != 0 {
        return Err(GenError::BadOrder(n));
    }
    if !(0.0..=1.0).contains(&neg_prob) {
        return Err(GenError::BadProbability(neg_prob));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for _ in 0..REJECTION_CAP {
        // Three points per vertex, paired up by a uniform shuffle.
        let mut points: Vec<usize> = (0..3 * n).collect();
        for i in (1..points.len()).rev() {
            let j = rng.gen_range(0..=i);
            points.swap(i, j);
        }
        let mut edges: Vec<(usize, usize)> = points
            .chunks_exact(2)
            .map(|p| {
                let (u, v) = (p[0] / 3, p[1] / 3);
                (u.min(v), u.max(v))
            })
            .collect();
        edges.sort_unstable();
        let simple = edges.iter().all(|&(u, v)| u != v) && edges.windows(2).all(|w| w[0] != w[1]);
        if !simple {
            continue;
        }
        let signed: Vec<(usize, usize, Sign)> = edges
            .into_iter()
            .map(|(u, v)| {
                let sign = if rng.gen_bool(neg_prob) {
                    Sign::Negative
                } else {
                    Sign::Positive
                };
                (u, v, sign)
            })
            .collect();
        return Ok(SignedGraph::from_edges(n, &signed));
    }
    Err(GenError::RejectionCapExceeded(REJECTION_CAP))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n4_all_positive_is_k4() {
        let g = random_cubic_signed(4, 0.0, 1).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 6);
        assert!(g.is_cubic());
        assert!(g.signature().is_empty());
    }

    #[test]
    fn fixed_seed_is_deterministic() {
        let a = random_cubic_signed(10, 0.4, 7).unwrap();
        let b = random_cubic_signed(10, 0.4, 7).unwrap();
        assert_eq!(a, b);
        let c = random_cubic_signed(10, 0.4, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn outputs_are_simple_and_cubic() {
        for seed in 0..200 {
            let g = random_cubic_signed(10, 0.5, seed).unwrap();
            assert!(g.is_cubic(), "seed {seed}");
            assert!(!g.has_loops(), "seed {seed}");
            let mut pairs: Vec<(usize, usize)> = g
                .edges()
                .map(|(_, e)| (e.ends[0].min(e.ends[1]), e.ends[0].max(e.ends[1])))
                .collect();
            pairs.sort_unstable();
            let before = pairs.len();
            pairs.dedup();
            assert_eq!(pairs.len(), before, "seed {seed}: parallel edges");
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(random_cubic_signed(3, 0.0, 0), Err(GenError::BadOrder(3)));
        assert_eq!(random_cubic_signed(2, 0.0, 0), Err(GenError::BadOrder(2)));
        assert_eq!(
            random_cubic_signed(4, 1.5, 0),
            Err(GenError::BadProbability(1.5))
        );
    }
}
