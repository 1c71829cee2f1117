//! Reproducible random lattice collections.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lattice::{random_sublattice, CoverLattice, LatticeError};

/// One generated lattice and the seed it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub index: usize,
    pub seed: u64,
    pub lattice: CoverLattice,
}

/// `count` lattices with ground size drawn from `1..=max_n` and between one
/// and four random generators each. The same arguments always give the
/// same corpus.
pub fn random_corpus(count: usize, max_n: usize, seed: u64) -> Result<Vec<CorpusEntry>, LatticeError> {
    let max_n = max_n.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|index| {
            let n = rng.gen_range(1..=max_n);
            let gens = rng.gen_range(1..=4);
            let s = rng.gen::<u64>();
            random_sublattice(n, gens, s).map(|lattice| CorpusEntry { index, seed: s, lattice })
        })
        .collect()
}

/// Like [`random_corpus`] but every lattice has ground size exactly `n`.
pub fn random_corpus_fixed(count: usize, n: usize, seed: u64) -> Result<Vec<CorpusEntry>, LatticeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|index| {
            let gens = rng.gen_range(1..=4);
            let s = rng.gen::<u64>();
            random_sublattice(n, gens, s).map(|lattice| CorpusEntry { index, seed: s, lattice })
        })
        .collect()
}

/// The corpus used throughout the test suite: 200 lattices, `n <= 6`, seed 42.
pub fn standard_corpus() -> Vec<CorpusEntry> {
    random_corpus(200, 6, 42).expect("n <= 6 is within range")
}
