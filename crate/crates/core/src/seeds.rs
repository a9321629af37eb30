//! Deterministic seed derivation.
//!
//! Every random stage in the crate draws its seed from one root seed through
//! [`derive`], so independent stages consume independent RNG streams and no
//! result depends on the order stages happen to run in. The derivation is a
//! plain SplitMix64 step: `derive(root, k)` is the k-th output of the
//! SplitMix64 sequence seeded with `root`.

/// Weyl increment used by SplitMix64.
const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
#[must_use]
pub fn splitmix64(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive the seed for stream `stream` from a root seed.
#[must_use]
pub fn derive(root: u64, stream: u64) -> u64 {
    splitmix64(root.wrapping_add(stream.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Two-level derivation: a numbered substream within a named stage.
#[must_use]
pub fn derive2(root: u64, stage: u64, index: u64) -> u64 {
    derive(derive(root, stage), index)
}

/// Fixed stage numbers. Keeping them in one place documents which stream
/// each stage consumes; reusing a number across stages would correlate them.
pub mod stage {
    pub const DISPOSITIONS: u64 = 1;
    pub const GRAPH: u64 = 2;
    pub const POST_TIMES: u64 = 3;
    pub const CLASS_CHOICE: u64 = 4;
    pub const TEXT: u64 = 5;
    pub const BASELINE: u64 = 6;
    pub const BETA_ASSIGNMENT: u64 = 7;
}
