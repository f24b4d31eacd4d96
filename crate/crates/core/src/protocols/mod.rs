//! Seeded Monte Carlo protocol demonstrations.

pub mod bc;
pub mod qss;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use bc::{bc_demo, receiver_deviation, BcDemoStats};
pub use qss::{qss_run, QssConfig, QssStats, Strategy, Variant};

/// Independent stream `index` of the generator seeded by `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A binomial proportion with its 3σ radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rate {
    pub value: f64,
    pub successes: u64,
    pub trials: u64,
    pub radius: f64,
}

impl Rate {
    pub fn new(successes: u64, trials: u64) -> Self {
        if trials == 0 {
            return Self { value: 0.0, successes, trials, radius: 0.0 };
        }
        let p = successes as f64 / trials as f64;
        Self { value: p, successes, trials, radius: 3.0 * (p * (1.0 - p) / trials as f64).sqrt() }
    }

    /// Whether `target` lies within the 3σ radius, using the radius at `target`
    /// so that exact estimates are not over-trusted.
    pub fn consistent_with(&self, target: f64) -> bool {
        if self.trials == 0 {
            return false;
        }
        let r = 3.0 * (target * (1.0 - target) / self.trials as f64).sqrt();
        (self.value - target).abs() <= r.max(self.radius) + 1e-12
    }
}
