//! Counter-based normal variates.
//!
//! Backed by ChaCha8, which is a block cipher in counter mode: seeking to
//! any word position is O(1). Draw `i` of a stream always consumes words
//! `[4i, 4i + 4)` (two `u64`), so it is a pure function of
//! `(seed, label, i)` and can be generated out of order by any worker.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// `u32` words consumed per normal draw.
const WORDS_PER_DRAW: u128 = 4;

/// Identifies an independent substream of a seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamLabel(pub u64);

impl StreamLabel {
    /// Dose-response coefficient draws (ASCII "beta").
    pub const DOSE_RESPONSE: StreamLabel = StreamLabel(0x6265_7461);
    /// Anthropogenic anomaly draws (ASCII "dprm").
    pub const ANTHROPOGENIC: StreamLabel = StreamLabel(0x6470_726d);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormalStream {
    seed: u64,
    label: StreamLabel,
}

impl NormalStream {
    pub fn new(seed: u64, label: StreamLabel) -> Self {
        Self { seed, label }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn label(&self) -> StreamLabel {
        self.label
    }

    /// Fills `out` with standard normal draws `start, start + 1, ...`.
    pub fn fill_standard_normal(&self, start: u64, out: &mut [f64]) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.label.0);
        rng.set_word_pos(u128::from(start) * WORDS_PER_DRAW);
        for z in out.iter_mut() {
            let u1 = open_unit(rng.next_u64());
            let u2 = open_unit(rng.next_u64());
            // Box-Muller, cosine branch only.
            *z = (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos();
        }
    }

    /// Standard normal draw number `index`.
    pub fn standard_normal_at(&self, index: u64) -> f64 {
        let mut z = [0.0];
        self.fill_standard_normal(index, &mut z);
        z[0]
    }
}

/// Maps 53 random bits onto `(0, 1]`.
fn open_unit(bits: u64) -> f64 {
    ((bits >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}
