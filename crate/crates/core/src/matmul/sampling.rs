use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use super::{projection_probability, MatmulError, MultiRegisterState};

/// `Binomial(shots, p)` hits and `hits / shots`, reproducible from `seed`.
pub fn sample_probability(p: f64, shots: u64, seed: u64) -> Result<(u64, f64), MatmulError> {
    if shots == 0 {
        return Err(MatmulError::NoShots);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hits = Binomial::new(shots, p.clamp(0.0, 1.0)).expect("probability clamped to [0, 1]").sample(&mut rng);
    Ok((hits, hits as f64 / shots as f64))
}

/// Samples the event `Pi_ij` on `state`.
pub fn sample_projector(
    state: &MultiRegisterState,
    i: usize,
    j: usize,
    shots: u64,
    seed: u64,
) -> Result<(u64, f64), MatmulError> {
    sample_probability(projection_probability(state, i, j), shots, seed)
}
