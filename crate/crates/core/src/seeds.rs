//! Deterministic derivation of per-case random seeds.
//!
//! Every randomized routine in this crate (intensity noise, Monte Carlo
//! repetitions, hidden-variable fuzzing) derives each case's seed from a
//! master seed and the case index, so results are independent of execution
//! order and reproducible bit-for-bit.

/// Mix a master seed with a case index (splitmix64 finalizer).
pub fn mix_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
