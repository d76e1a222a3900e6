//! Seeded random generators for gmde models, and reference implementations
//! written independently of `gmde-core` to check its results against.

pub mod gen;
pub mod oracle;

use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Directory holding the shipped fixtures.
pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn read_fixture(name: &str) -> String {
    let p = fixtures_dir().join(name);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("reading {}: {e}", p.display()))
}

/// Parses and translates a fixture architecture.
pub fn fixture_arch(name: &str) -> gmde_core::Architecture {
    let text = read_fixture(name);
    let ast = gmde_core::dsl::parse_architecture(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
    gmde_core::dsl::translate_to_core(&ast).unwrap_or_else(|d| panic!("{name}: {d}"))
}
