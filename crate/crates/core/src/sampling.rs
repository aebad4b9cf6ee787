//! Seeded random generation of integral test matrices. All sampling in the
//! crate flows through `ChaCha8Rng` so runs are reproducible across
//! platforms for a fixed seed.

use num_bigint::BigInt;
use num_traits::Signed;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::matrix::IntMatrix;

pub use rand::SeedableRng;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Elementary transvection I + c*E_{ij}, i != j.
pub fn transvection(n: usize, i: usize, j: usize, c: &BigInt) -> IntMatrix {
    debug_assert!(i != j && i < n && j < n);
    IntMatrix::from_fn(n, |r, s| {
        if r == s {
            BigInt::from(1)
        } else if r == i && s == j {
            c.clone()
        } else {
            BigInt::from(0)
        }
    })
}

/// Random element of SL(n, Z) as a word of `word_len` elementary
/// transvections with nonzero coefficients bounded by `coeff_bound`.
pub fn random_special_linear(
    n: usize,
    rng: &mut ChaCha8Rng,
    word_len: usize,
    coeff_bound: i64,
) -> IntMatrix {
    assert!(n >= 2 && coeff_bound >= 1);
    let mut acc = IntMatrix::identity(n);
    for _ in 0..word_len {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let mut c = rng.gen_range(-coeff_bound..coeff_bound);
        if c >= 0 {
            c += 1;
        }
        acc = acc
            .mat_mul(&transvection(n, i, j, &BigInt::from(c)))
            .expect("dimensions agree");
    }
    acc
}

/// Random element of SL(n, Z) with all entries bounded by `entry_bound` in
/// absolute value, found by rejection over short transvection words.
pub fn random_special_linear_bounded(
    n: usize,
    rng: &mut ChaCha8Rng,
    entry_bound: i64,
) -> IntMatrix {
    let bound = BigInt::from(entry_bound);
    loop {
        let len = rng.gen_range(2..=5);
        let candidate = random_special_linear(n, rng, len, 1);
        if candidate.entries().iter().all(|e| e.abs() <= bound) {
            return candidate;
        }
    }
}

/// Random integer matrix with zero diagonal and off-diagonal entries in
/// `[-bound, bound]`.
pub fn random_zero_diagonal(n: usize, rng: &mut ChaCha8Rng, bound: i64) -> IntMatrix {
    IntMatrix::from_fn(n, |i, j| {
        if i == j {
            BigInt::from(0)
        } else {
            BigInt::from(rng.gen_range(-bound..=bound))
        }
    })
}
