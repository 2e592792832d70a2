//! Reproducible random streams.
//!
//! Every run uses PCG-XSH-RR 64/32 (`rand_pcg::Pcg32`). Independent rows of
//! an experiment get their own stream: the state and stream selector are
//! derived by SplitMix64 hashing of `(seed, row)`, so results do not depend
//! on thread scheduling.

use rand_distr::{Distribution, StandardNormal};
use rand_pcg::Pcg32;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for row `row` of a run seeded with `seed`.
pub fn stream(seed: u64, row: u64) -> Pcg32 {
    let state = splitmix64(seed ^ splitmix64(row));
    let selector = splitmix64(state ^ 0xD1B5_4A32_D192_ED03);
    Pcg32::new(state, selector)
}

/// Stable identifier for a labelled row, e.g. `"table2/h=0.01/delta=0.1"`.
pub fn row_id(label: &str) -> u64 {
    label.bytes().fold(0xCBF2_9CE4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x1000_0000_01B3)
    })
}

/// Seed for one labelled row of a run.
pub fn derive_seed(seed: u64, label: &str) -> u64 {
    splitmix64(seed ^ row_id(label))
}

pub fn standard_normals(rng: &mut Pcg32, count: usize) -> Vec<f64> {
    (0..count).map(|_| StandardNormal.sample(rng)).collect()
}
