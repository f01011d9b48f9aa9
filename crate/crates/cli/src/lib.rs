//! Benchmark harness for the bimatrix toolkit: plan expansion from a
//! key-value config, parallel seeded execution with warm-up and timeout
//! handling, crash-safe CSV records, and summary tables.

pub mod config;
pub mod harness;
pub mod registry;
pub mod tables;

/// FNV-1a, used for config digests and per-task seed derivation.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}
