use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twostep::linalg::{
    column_hnf, integer_kernel, int_vec, random_unimodular, row_hnf, skew_canonical_form, snf, IntMatrix,
    SkewIntMatrix,
};

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    IntMatrix::from_vec(
        rows,
        cols,
        (0..rows * cols).map(|_| BigInt::from(rng.random_range(-bound..=bound))).collect(),
    )
}

#[test]
fn smith_form_reconstructs_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let (r, c) = (rng.random_range(1..=5), rng.random_range(1..=5));
        let m = random_matrix(&mut rng, r, c, 9);
        let s = snf(&m);
        assert!(s.left.is_unimodular() && s.right.is_unimodular());
        assert_eq!(&(&s.left * &m) * &s.right, s.diagonal);
        let d = s.divisors();
        for i in 0..r {
            for j in 0..c {
                if i != j {
                    assert!(s.diagonal[(i, j)].is_zero());
                }
            }
        }
        assert!(d.iter().all(|x| x.is_positive()));
        assert!(d.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
    }
}

#[test]
fn kernel_of_single_row_matches_brute_force() {
    let m = IntMatrix::from_rows(&[[1, 2, 3]]);
    let k = integer_kernel(&m);
    assert_eq!(k, IntMatrix::from_columns(3, &[int_vec(&[1, 1, -1]), int_vec(&[0, 3, -2])]));
    // every small kernel vector lies in the lattice, and only those
    for x in -4i64..=4 {
        for y in -4i64..=4 {
            for z in -4i64..=4 {
                let v = int_vec(&[x, y, z]);
                let in_kernel = x + 2 * y + 3 * z == 0;
                assert_eq!(twostep::linalg::hnf_contains(&k, &v), in_kernel, "{v:?}");
            }
        }
    }
}

#[test]
fn kernel_is_canonical_under_row_operations() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for seed in 0..200 {
        let (r, c) = (rng.random_range(1..=3), rng.random_range(2..=5));
        let m = random_matrix(&mut rng, r, c, 6);
        let u = random_unimodular(r, seed, 8);
        assert_eq!(integer_kernel(&m), integer_kernel(&(&u * &m)));
        let k = integer_kernel(&m);
        assert!((&m * &k).is_zero());
        assert_eq!(k.cols(), c - snf(&m).rank());
    }
}

#[test]
fn hermite_forms_are_unique_per_lattice() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for seed in 0..200 {
        let m = random_matrix(&mut rng, 3, 4, 7);
        let u = random_unimodular(3, seed, 10);
        assert_eq!(row_hnf(&m).form, row_hnf(&(&u * &m)).form);
        let v = random_unimodular(4, seed + 1000, 10);
        assert_eq!(column_hnf(&m), column_hnf(&(&m * &v)));
    }
}

#[test]
fn random_unimodular_golden() {
    let u = random_unimodular(2, 7, 20);
    assert!(u.is_unimodular());
    assert_eq!(u, random_unimodular(2, 7, 20));
    assert_eq!(u.to_string(), "[[-4,9],[-13,29]]");
}

fn skew_strategy(n: usize) -> impl Strategy<Value = SkewIntMatrix> {
    prop::collection::vec(-9i64..=9, n * (n - 1) / 2)
        .prop_map(move |u| SkewIntMatrix::from_upper(n, &int_vec(&u)))
}

proptest! {
    #[test]
    fn skew_divisors_are_congruence_invariant((m, seed) in (2usize..=6).prop_flat_map(|n| (skew_strategy(n), any::<u64>()))) {
        let q = random_unimodular(m.n(), seed, 12);
        let c1 = skew_canonical_form(&m);
        let c2 = skew_canonical_form(&m.congruence(&q));
        prop_assert_eq!(&c1.divisors, &c2.divisors);
        prop_assert_eq!(m.matrix().congruence(&c1.transform), c1.block_form(m.n()));
        prop_assert!(c1.divisors.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
    }

    #[test]
    fn skew_divisors_pair_smith_divisors(m in (1usize..=6).prop_flat_map(skew_strategy)) {
        let skew = skew_canonical_form(&m).divisors;
        let paired: Vec<BigInt> = skew.iter().flat_map(|d| [d.clone(), d.clone()]).collect();
        prop_assert_eq!(snf(m.matrix()).divisors(), paired);
    }

    #[test]
    fn determinant_of_unimodular_is_unit(n in 1usize..=5, seed in any::<u64>(), steps in 0usize..30) {
        let u = random_unimodular(n, seed, steps);
        prop_assert!(u.det().abs().is_one());
    }
}
