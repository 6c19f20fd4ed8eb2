//! Deterministic seed derivation so every parallel work item gets an
//! independent, reproducible RNG stream.

/// Derives a child seed from a master seed, a replica index, and a stream
/// tag (e.g. parents vs offspring) by chained SplitMix64 finalization. The
/// function is fixed, documented, and platform-independent, so a run is
/// reproducible from (master, index, tag) alone; distinct inputs collide
/// only with probability ~2^-64.
pub fn derive_seed(master: u64, replica_index: u64, stream_tag: u64) -> u64 {
    const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut z = master;
    z = split_mix(z.wrapping_add(GOLDEN.wrapping_mul(replica_index.wrapping_add(1))));
    z = split_mix(z ^ GOLDEN.wrapping_mul(stream_tag.wrapping_add(1)).rotate_left(31));
    z
}

fn split_mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
