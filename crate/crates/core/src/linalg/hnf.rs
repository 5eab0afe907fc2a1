use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{snf, IntMatrix};

/// Row-style Hermite normal form with the unimodular transform that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowHermite {
    /// `form = transform · input`; zero rows are kept at the bottom.
    pub form: IntMatrix,
    pub transform: IntMatrix,
    pub rank: usize,
}

/// Row Hermite normal form: pivots move strictly right going down, each
/// pivot is positive, and entries above a pivot lie in `[0, pivot)`.
/// Canonical for the row lattice of the input.
pub fn row_hnf(m: &IntMatrix) -> RowHermite {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut t = IntMatrix::identity(rows);
    let mut r = 0;

    for c in 0..cols {
        if r == rows {
            break;
        }
        // Euclid down column c among rows r.. until a single nonzero remains.
        loop {
            let pivot = (r..rows)
                .filter(|&i| !a[(i, c)].is_zero())
                .min_by(|&x, &y| a[(x, c)].abs().cmp(&a[(y, c)].abs()));
            let Some(p) = pivot else { break };
            a.swap_rows(r, p);
            t.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if a[(i, c)].is_zero() {
                    continue;
                }
                let q = -a[(i, c)].div_floor(&a[(r, c)]);
                a.add_row_multiple(i, r, &q);
                t.add_row_multiple(i, r, &q);
                done &= a[(i, c)].is_zero();
            }
            if done {
                break;
            }
        }
        if a[(r, c)].is_zero() {
            continue;
        }
        if a[(r, c)].is_negative() {
            a.negate_row(r);
            t.negate_row(r);
        }
        for i in 0..r {
            let q = -a[(i, c)].div_floor(&a[(r, c)]);
            a.add_row_multiple(i, r, &q);
            t.add_row_multiple(i, r, &q);
        }
        r += 1;
    }
    RowHermite {
        form: a,
        transform: t,
        rank: r,
    }
}

/// Column Hermite normal form of the lattice spanned by the columns of `m`,
/// with zero columns dropped. Pivot rows increase left to right, pivots are
/// positive, and entries left of a pivot lie in `[0, pivot)`.
pub fn column_hnf(m: &IntMatrix) -> IntMatrix {
    let h = row_hnf(&m.transpose());
    let mut kept = IntMatrix::zeros(h.rank, m.rows());
    for i in 0..h.rank {
        for j in 0..m.rows() {
            kept[(i, j)] = h.form[(i, j)].clone();
        }
    }
    kept.transpose()
}

/// Basis of `{x : M x = 0}` as the columns of a matrix in column HNF.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let s = snf(m);
    let rank = s.rank();
    let basis = s.right.select_columns(rank..m.cols());
    column_hnf(&basis)
}

/// Tests whether `v` lies in the lattice spanned by the columns of `basis`,
/// which must be in column HNF.
pub fn hnf_contains(basis: &IntMatrix, v: &[BigInt]) -> bool {
    assert_eq!(basis.rows(), v.len(), "vector length mismatch");
    let mut v = v.to_vec();
    for j in 0..basis.cols() {
        let Some(p) = (0..basis.rows()).find(|&i| !basis[(i, j)].is_zero()) else {
            continue;
        };
        let (q, rem) = v[p].div_rem(&basis[(p, j)]);
        if !rem.is_zero() {
            return false;
        }
        for (i, x) in v.iter_mut().enumerate() {
            *x -= &q * &basis[(i, j)];
        }
    }
    v.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_vec;

    #[test]
    fn zero_matrix_kernel_is_everything() {
        assert_eq!(integer_kernel(&IntMatrix::zeros(2, 2)), IntMatrix::identity(2));
    }

    #[test]
    fn jordan_block_kernel() {
        let k = integer_kernel(&IntMatrix::from_rows(&[[0, 1], [0, 0]]));
        assert_eq!(k, IntMatrix::from_rows(&[[1], [0]]));
    }

    #[test]
    fn row_hnf_transform_reproduces_form() {
        let m = IntMatrix::from_rows(&[[4, 6, 2], [2, 3, 1], [0, 5, 5]]);
        let h = row_hnf(&m);
        assert_eq!(&h.transform * &m, h.form);
        assert!(h.transform.is_unimodular());
        assert_eq!(h.rank, 2);
    }

    #[test]
    fn membership() {
        let b = column_hnf(&IntMatrix::from_rows(&[[2, 0], [0, 3]]));
        assert!(hnf_contains(&b, &int_vec(&[4, -3])));
        assert!(!hnf_contains(&b, &int_vec(&[1, 0])));
        assert!(!hnf_contains(&IntMatrix::zeros(2, 0), &int_vec(&[0, 1])));
        assert!(hnf_contains(&IntMatrix::zeros(2, 0), &int_vec(&[0, 0])));
    }

    #[test]
    fn hnf_is_basis_independent() {
        let a = IntMatrix::from_rows(&[[1, 0], [1, 3], [-1, -2]]);
        let b = IntMatrix::from_rows(&[[-2, -3], [1, 0], [0, 1]]);
        assert_eq!(column_hnf(&a), column_hnf(&b));
    }
}
