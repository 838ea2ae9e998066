//! Seeded random draws of physical parameters and loads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{ExtResistance, GenParams, LoadSet, MosParams};

/// Resistances are log-uniform in [1, 1e7] ohms, `gm` log-uniform in
/// [0.1, 100] mS and `beta` uniform in [20, 500]. With corners on, each
/// resistance is `0` or `INF` with probability 1/8 each.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn log_uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo.ln()..hi.ln()).exp()
    }

    pub fn resistance(&mut self, corners: bool) -> ExtResistance {
        if corners {
            match self.rng.random_range(0..8) {
                0 => return ExtResistance::ZERO,
                1 => return ExtResistance::INF,
                _ => {}
            }
        }
        ExtResistance::ohms(self.log_uniform(1.0, 1e7))
    }

    pub fn loads(&mut self, corners: bool) -> LoadSet {
        LoadSet::new(
            self.resistance(corners),
            self.resistance(corners),
            self.resistance(corners),
            self.resistance(corners),
        )
    }

    pub fn gm(&mut self) -> f64 {
        self.log_uniform(1e-4, 0.1)
    }

    pub fn beta(&mut self) -> f64 {
        self.rng.random_range(20.0..500.0)
    }

    pub fn bjt(&mut self, corners: bool) -> GenParams {
        let gm = self.gm();
        let ro = self.resistance(corners);
        GenParams::bjt(gm, self.beta(), ro).expect("positive gm and beta")
    }

    /// `gmb` is zero with probability 0.3, otherwise up to `0.3 gm`.
    pub fn mos(&mut self, corners: bool) -> MosParams {
        let gm = self.gm();
        let ro = self.resistance(corners);
        let gmb = if self.rng.random_bool(0.3) {
            0.0
        } else {
            gm * self.rng.random_range(0.0..0.3)
        };
        MosParams::new(gm, gmb, ro).expect("positive gm")
    }
}
