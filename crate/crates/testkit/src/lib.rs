//! Test support: brute-force reference implementations and random input
//! generators. Nothing here is used by the shipped crates.
//!
//! The oracles deliberately take the slow, obvious route (score everything,
//! sort everything, try every entity at every position) so they share no
//! selection logic with the code under test.

pub mod gen;
pub mod oracle;

use std::path::PathBuf;

/// Path of a file under the repository's `fixtures/` directory.
pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}
