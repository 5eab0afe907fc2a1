use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::IntMatrix;

/// Product of `steps` seeded elementary row operations: add a multiple in
/// `[-3, 3]` of one row to another, swap two rows, or negate a row.
///
/// Deterministic in `(n, seed, steps)`. Panics when `n == 0`.
pub fn random_unimodular(n: usize, seed: u64, steps: usize) -> IntMatrix {
    assert!(n >= 1, "random_unimodular needs n >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = IntMatrix::identity(n);
    for _ in 0..steps {
        let op = if n == 1 { 2 } else { rng.random_range(0..3u8) };
        match op {
            0 => {
                let (i, j) = distinct_pair(&mut rng, n);
                let c: i64 = rng.random_range(-3..=3);
                m.add_row_multiple(i, j, &BigInt::from(c));
            }
            1 => {
                let (i, j) = distinct_pair(&mut rng, n);
                m.swap_rows(i, j);
            }
            _ => {
                let i = rng.random_range(0..n);
                m.negate_row(i);
            }
        }
    }
    m
}

fn distinct_pair(rng: &mut impl Rng, n: usize) -> (usize, usize) {
    let i = rng.random_range(0..n);
    let mut j = rng.random_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    (i, j)
}
