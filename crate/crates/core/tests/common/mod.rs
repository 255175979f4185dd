#![allow(dead_code)]

use ck_lattice::{CliffordField, Complex64, LatticeGrid, Multivector, Signature};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn coeff(r: &mut impl Rng) -> Complex64 {
    Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
}

/// A multivector with `terms` random blades.
pub fn random_multivector(sig: Signature, terms: usize, r: &mut impl Rng) -> Multivector {
    let blades = 1u32 << sig.generator_count();
    let mut m = Multivector::zero(sig);
    for _ in 0..terms {
        m.accumulate(r.gen_range(0..blades), coeff(r));
    }
    m
}

pub fn random_field(grid: LatticeGrid, terms: usize, r: &mut impl Rng) -> CliffordField {
    let sig = grid.signature();
    CliffordField::from_fn(grid, |_| random_multivector(sig, terms, r))
}

pub fn random_scalar_field(grid: LatticeGrid, r: &mut impl Rng) -> CliffordField {
    CliffordField::scalar_fn(grid, |_| coeff(r))
}

pub fn max_of(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, f64::max)
}

pub fn binary() -> std::process::Command {
    std::process::Command::new(env!("CARGO_BIN_EXE_ck-lattice"))
}

pub fn golden(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}
