use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::exterior::{trace_low_degree, wedge, ExteriorElement};
use super::{frac, Character};
use crate::error::{Error, Result};
use crate::group::SkewTriple;

/// The real skew form `ω_χ = χ ∘ ω` on `B`, entries reduced mod 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiberForm {
    n: usize,
    entries: Vec<BigRational>,
}

impl FiberForm {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.n + j]
    }

    /// `ω_χ(x ∧ y) = Σᵢⱼ xᵢ yⱼ ω_χ[i][j] mod 1`.
    pub fn evaluate(&self, x: &[BigInt], y: &[BigInt]) -> BigRational {
        let mut acc = BigRational::zero();
        for i in 0..self.n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.n {
                if y[j].is_zero() || i == j {
                    continue;
                }
                acc += self.entry(i, j) * BigRational::from_integer(&x[i] * &y[j]);
            }
        }
        frac(&acc)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Entrywise sum mod 1.
    pub fn add(&self, other: &FiberForm) -> FiberForm {
        assert_eq!(self.n, other.n);
        FiberForm {
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| frac(&(a + b))).collect(),
        }
    }
}

impl fmt::Display for FiberForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.entry(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

fn check_character(t: &SkewTriple, chi: &Character) -> Result<()> {
    if chi.dim() != t.m() {
        return Err(Error::dims(format!("character has {} coordinates but m = {}", chi.dim(), t.m())));
    }
    Ok(())
}

/// `ω_χ[i][j] = Σₖ χₖ · ωₖ[i][j] mod 1`.
pub fn fiber_form(t: &SkewTriple, chi: &Character) -> Result<FiberForm> {
    check_character(t, chi)?;
    let n = t.n();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let a: Vec<BigInt> = t.forms().iter().map(|f| f.get(i, j).clone()).collect();
            entries.push(chi.evaluate(&a));
        }
    }
    Ok(FiberForm { n, entries })
}

/// The fiber over χ is the untwisted group algebra of `B` exactly when χ ∘ ω
/// is integer valued.
pub fn is_fiber_untwisted(t: &SkewTriple, chi: &Character) -> Result<bool> {
    Ok(fiber_form(t, chi)?.is_zero())
}

/// `τ_χ([b₁] ∪ [b₂]) = χ(ω(b₁ ∧ b₂)) mod 1`, computed as the low-degree trace
/// of the wedge of the two degree-one K₁ classes.
pub fn trace_pairing(t: &SkewTriple, chi: &Character, b1: &[BigInt], b2: &[BigInt]) -> Result<BigRational> {
    if b1.len() != t.n() || b2.len() != t.n() {
        return Err(Error::dims(format!("pairing arguments must have length {}", t.n())));
    }
    let theta = fiber_form(t, chi)?;
    let cup = wedge(&ExteriorElement::from_vector(b1), &ExteriorElement::from_vector(b2))?;
    trace_low_degree(&theta, &cup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_vec;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn heisenberg_fibers() {
        let h = SkewTriple::heisenberg();
        assert!(fiber_form(&h, &Character::trivial(1)).unwrap().is_zero());
        let f = fiber_form(&h, &Character::from_ratios(&[(1, 3)])).unwrap();
        assert_eq!(f.entry(0, 1), &q(1, 3));
        assert_eq!(f.entry(1, 0), &q(2, 3));
        assert!(!is_fiber_untwisted(&h, &Character::from_ratios(&[(1, 3)])).unwrap());
        assert!(is_fiber_untwisted(&h, &Character::trivial(1)).unwrap());
    }

    #[test]
    fn scaled_form_reduces() {
        let t = SkewTriple::from_i64(2, &[vec![vec![0, 3], vec![-3, 0]]]).unwrap();
        let f = fiber_form(&t, &Character::from_ratios(&[(2, 3)])).unwrap();
        assert!(f.entry(0, 1).is_zero());
        assert!(is_fiber_untwisted(&t, &Character::from_ratios(&[(1, 3)])).unwrap());
    }

    #[test]
    fn pairings() {
        let h = SkewTriple::heisenberg();
        let third = Character::from_ratios(&[(1, 3)]);
        assert_eq!(trace_pairing(&h, &third, &int_vec(&[1, 0]), &int_vec(&[0, 1])).unwrap(), q(1, 3));
        assert!(trace_pairing(&h, &third, &int_vec(&[2, 5]), &int_vec(&[2, 5])).unwrap().is_zero());
        let half = Character::from_ratios(&[(1, 2)]);
        assert!(trace_pairing(&h, &half, &int_vec(&[2, 0]), &int_vec(&[0, 1])).unwrap().is_zero());
    }

    #[test]
    fn pairing_matches_direct_evaluation() {
        let t = SkewTriple::from_i64(3, &[vec![vec![0, 2, -1], vec![-2, 0, 3], vec![1, -3, 0]]]).unwrap();
        let chi = Character::from_ratios(&[(5, 7)]);
        let (b1, b2) = (int_vec(&[1, -2, 4]), int_vec(&[3, 0, -1]));
        let direct = chi.evaluate(&t.omega(&b1, &b2));
        assert_eq!(trace_pairing(&t, &chi, &b1, &b2).unwrap(), direct);
        assert_eq!(fiber_form(&t, &chi).unwrap().evaluate(&b1, &b2), direct);
    }

    #[test]
    fn dimension_errors() {
        let h = SkewTriple::heisenberg();
        assert!(fiber_form(&h, &Character::trivial(2)).is_err());
        assert!(trace_pairing(&h, &Character::trivial(1), &int_vec(&[1]), &int_vec(&[0, 1])).is_err());
    }
}
