use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;
use crate::error::{Error, Result};

/// An integer skew-symmetric matrix, `M[i][j] = -M[j][i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SkewIntMatrix(IntMatrix);

impl SkewIntMatrix {
    pub fn new(m: IntMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::dims(format!("skew matrix must be square, got {}x{}", m.rows(), m.cols())));
        }
        for i in 0..m.rows() {
            for j in i..m.cols() {
                if m[(i, j)] != -&m[(j, i)] {
                    return Err(Error::NotSkew(format!("[{i}][{j}]")));
                }
            }
        }
        Ok(SkewIntMatrix(m))
    }

    pub fn zero(n: usize) -> Self {
        SkewIntMatrix(IntMatrix::zeros(n, n))
    }

    /// Skew matrix from its strictly-upper entries in the order (0,1), (0,2), …, (n-2,n-1).
    pub fn from_upper(n: usize, upper: &[BigInt]) -> Self {
        assert_eq!(upper.len(), n * n.saturating_sub(1) / 2, "upper entry count");
        let mut m = IntMatrix::zeros(n, n);
        let mut it = upper.iter();
        for i in 0..n {
            for j in i + 1..n {
                let x = it.next().unwrap();
                m[(i, j)] = x.clone();
                m[(j, i)] = -x;
            }
        }
        SkewIntMatrix(m)
    }

    pub fn n(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.0[(i, j)]
    }

    /// Strictly-upper entries in lexicographic pair order.
    pub fn upper_entries(&self) -> Vec<BigInt> {
        let n = self.n();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| self.0[(i, j)].clone())
            .collect()
    }

    /// `Pᵀ M P`, which is again skew.
    pub fn congruence(&self, p: &IntMatrix) -> Self {
        SkewIntMatrix(self.0.congruence(p))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

/// Result of [`skew_canonical_form`]: `transformᵀ · M · transform` is the
/// block-diagonal matrix `[[0,d₁],[-d₁,0]] ⊕ … ⊕ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewCanonical {
    pub divisors: Vec<BigInt>,
    pub transform: IntMatrix,
}

impl SkewCanonical {
    /// The block-diagonal normal form of size `n`.
    pub fn block_form(&self, n: usize) -> IntMatrix {
        let mut b = IntMatrix::zeros(n, n);
        for (k, d) in self.divisors.iter().enumerate() {
            b[(2 * k, 2 * k + 1)] = d.clone();
            b[(2 * k + 1, 2 * k)] = -d;
        }
        b
    }
}

// Congruence by an elementary operation on basis vectors, mirrored into the transform.
struct Congruence {
    m: IntMatrix,
    u: IntMatrix,
}

impl Congruence {
    fn swap(&mut self, a: usize, b: usize) {
        self.m.swap_rows(a, b);
        self.m.swap_cols(a, b);
        self.u.swap_cols(a, b);
    }

    fn negate(&mut self, a: usize) {
        self.m.negate_row(a);
        self.m.negate_col(a);
        self.u.negate_col(a);
    }

    /// e_dst ← e_dst + c·e_src
    fn add(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.m.add_col_multiple(dst, src, c);
        self.m.add_row_multiple(dst, src, c);
        self.u.add_col_multiple(dst, src, c);
    }
}

/// Symplectic Smith form of a skew integer matrix under `GL(n, Z)` congruence.
///
/// Works two indices at a time: the smallest nonzero entry of the trailing
/// block becomes the pivot `M[p][p+1]`, rows `p` and `p+1` are cleared by
/// division with remainder, and a trailing entry not divisible by the pivot is
/// folded into row `p` so the next pass finds a smaller pivot.
pub fn skew_canonical_form(m: &SkewIntMatrix) -> SkewCanonical {
    let n = m.n();
    let mut c = Congruence {
        m: m.matrix().clone(),
        u: IntMatrix::identity(n),
    };
    let mut divisors = Vec::new();
    let mut p = 0;
    while p + 1 < n {
        loop {
            let mut best: Option<(usize, usize, BigInt)> = None;
            for i in p..n {
                for j in i + 1..n {
                    let x = c.m[(i, j)].abs();
                    if !x.is_zero() && best.as_ref().is_none_or(|(_, _, b)| &x < b) {
                        best = Some((i, j, x));
                    }
                }
            }
            let Some((i, j, _)) = best else {
                return SkewCanonical {
                    divisors,
                    transform: c.u,
                };
            };
            // p <= i < j, so the first swap leaves column j in place.
            c.swap(i, p);
            c.swap(j, p + 1);
            if c.m[(p, p + 1)].is_negative() {
                c.negate(p + 1);
            }
            let d = c.m[(p, p + 1)].clone();

            let mut dirty = false;
            for k in p + 2..n {
                // M[p][k] - q·d via e_k ← e_k - q·e_{p+1}
                if !c.m[(p, k)].is_zero() {
                    let q = c.m[(p, k)].div_floor(&d);
                    c.add(k, p + 1, &-q);
                    dirty |= !c.m[(p, k)].is_zero();
                }
                // M[p+1][k] + q·M[p+1][p] = M[p+1][k] - q·d via e_k ← e_k + q·e_p
                if !c.m[(p + 1, k)].is_zero() {
                    let q = c.m[(p + 1, k)].div_floor(&d);
                    c.add(k, p, &q);
                    dirty |= !c.m[(p + 1, k)].is_zero();
                }
            }
            if dirty {
                continue;
            }
            let bad = (p + 2..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !c.m[(i, j)].is_multiple_of(&d));
            match bad {
                Some((i, _)) => c.add(p, i, &BigInt::one()),
                None => break,
            }
        }
        divisors.push(c.m[(p, p + 1)].clone());
        p += 2;
    }
    SkewCanonical {
        divisors,
        transform: c.u,
    }
}
