//! Fixtures shared by the benchmarks in `benches/`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hodge_core::biextension::{build_biextension, random_spec};
use hodge_core::height::OrientedMhs;
use hodge_core::random::{random_deligne_system, RandomDeligneSystem};

pub const TOL: f64 = 1e-9;

/// Deterministic points in the annulus `0.1 < |z| < 3`, off the real axis.
pub fn sample_points(count: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| Complex64::from_polar(rng.random_range(0.1..3.0), rng.random_range(0.05..3.1)))
        .collect()
}

/// Random generalized biextension with at least `min_dim` coordinates.
pub fn biextension(min_dim: usize, seed: u64) -> OrientedMhs<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let spec = random_spec::<f64>(&mut rng, min_dim + 2);
        if spec.dim() >= min_dim {
            return build_biextension(&spec, TOL).expect("random specs are valid");
        }
    }
}

/// Random admissible Deligne system of dimension at least `min_dim`.
pub fn deligne_system(min_dim: usize, seed: u64) -> RandomDeligneSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let s = random_deligne_system(&mut rng, min_dim + 2);
        if s.w.ambient() >= min_dim {
            return s;
        }
    }
}
