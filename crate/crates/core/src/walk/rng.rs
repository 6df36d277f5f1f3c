//! Counter-based increments: the draw for `(seed, trial, step)` is the
//! `step`-th 64-bit word of the ChaCha8 stream `trial` under key `seed`.

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Sequential reader over one trial's stream.
pub struct TrialStream {
    rng: ChaCha8Rng,
}

impl TrialStream {
    pub fn new(seed: u64, trial: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        Self { rng }
    }

    /// Positions the stream so the next draw is the one for `step`
    /// (steps count from 1).
    pub fn at_step(seed: u64, trial: u64, step: u64) -> Self {
        let mut s = Self::new(seed, trial);
        s.rng.set_word_pos(2 * (step as u128 - 1));
        s
    }

    pub fn next_draw(&mut self) -> u64 {
        self.rng.next_u64()
    }
}

/// The draw for a single `(seed, trial, step)`.
pub fn draw(seed: u64, trial: u64, step: u64) -> u64 {
    TrialStream::at_step(seed, trial, step).next_draw()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_access_matches_sequential() {
        let mut s = TrialStream::new(9, 4);
        for step in 1..=50 {
            assert_eq!(s.next_draw(), draw(9, 4, step));
        }
    }

    #[test]
    fn streams_differ() {
        assert_ne!(draw(1, 0, 1), draw(1, 1, 1));
        assert_ne!(draw(1, 0, 1), draw(2, 0, 1));
    }

    #[test]
    fn golden_values() {
        // Pinned so that any change in the generator is caught.
        let got: Vec<u64> = (1..=3).map(|k| draw(42, 0, k)).collect();
        assert_eq!(got, GOLDEN.to_vec());
    }

    const GOLDEN: [u64; 3] = [12578764544318200737, 17529487244874322312, 7886285670807131020];
}
