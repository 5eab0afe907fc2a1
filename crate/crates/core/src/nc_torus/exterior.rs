use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{frac, FiberForm};
use crate::error::{Error, Result};

/// An element of the integral exterior algebra `Λ*Zⁿ`, the K-theory of the
/// n-torus and of every fiber over it. Keys are strictly increasing index tuples.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExteriorElement {
    n: usize,
    terms: BTreeMap<Vec<usize>, BigInt>,
}

impl ExteriorElement {
    pub fn zero(n: usize) -> Self {
        ExteriorElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// The unit `1 ∈ Λ⁰`.
    pub fn one(n: usize) -> Self {
        Self::monomial(n, vec![], BigInt::one()).unwrap()
    }

    /// `coeff · e_{i₁} ∧ … ∧ e_{iₖ}`; the indices are sorted with the matching sign.
    pub fn monomial(n: usize, indices: Vec<usize>, coeff: BigInt) -> Result<Self> {
        if let Some(&i) = indices.iter().find(|&&i| i >= n) {
            return Err(Error::dims(format!("index {i} out of range for rank {n}")));
        }
        let mut out = Self::zero(n);
        if let Some((sorted, sign)) = sort_with_sign(indices) {
            let c = if sign { -coeff } else { coeff };
            out.add_term(sorted, c);
        }
        Ok(out)
    }

    /// The degree-one class `Σ bᵢ eᵢ` of a unitary `λ(b)`.
    pub fn from_vector(b: &[BigInt]) -> Self {
        let mut out = Self::zero(b.len());
        for (i, x) in b.iter().enumerate() {
            out.add_term(vec![i], x.clone());
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, BigInt> {
        &self.terms
    }

    pub fn coefficient(&self, indices: &[usize]) -> BigInt {
        self.terms.get(indices).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest degree with a nonzero coefficient.
    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(Vec::len).max()
    }

    fn add_term(&mut self, key: Vec<usize>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "rank mismatch");
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = Self::zero(self.n);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }
}

/// Sorts a tuple of distinct indices, reporting whether the permutation was odd.
/// Returns `None` when an index repeats.
fn sort_with_sign(mut idx: Vec<usize>) -> Option<(Vec<usize>, bool)> {
    let mut odd = false;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((idx, odd))
    }
}

/// Graded-commutative product on `Λ*Zⁿ`.
pub fn wedge(x: &ExteriorElement, y: &ExteriorElement) -> Result<ExteriorElement> {
    if x.n != y.n {
        return Err(Error::dims(format!("wedge of ranks {} and {}", x.n, y.n)));
    }
    let mut out = ExteriorElement::zero(x.n);
    for (kx, cx) in &x.terms {
        for (ky, cy) in &y.terms {
            let joined: Vec<usize> = kx.iter().chain(ky).copied().collect();
            if let Some((sorted, odd)) = sort_with_sign(joined) {
                let c = cx * cy;
                out.add_term(sorted, if odd { -c } else { c });
            }
        }
    }
    Ok(out)
}

/// Ranks of `K₀ = Λ^even Zⁿ` and `K₁ = Λ^odd Zⁿ`, counted over basis subsets.
/// Supports `n ≤ 127`.
pub fn k_ranks(n: usize) -> (u128, u128) {
    assert!(n < 128, "k_ranks supports n < 128");
    let mut binom: u128 = 1;
    let (mut even, mut odd) = (0u128, 0u128);
    for k in 0..=n {
        if k % 2 == 0 {
            even += binom;
        } else {
            odd += binom;
        }
        // C(n, k+1) = C(n, k)·(n−k)/(k+1)
        binom = binom * (n - k) as u128 / (k + 1) as u128;
    }
    (even, odd)
}

/// The trace on `K₀` of the fiber with form θ, restricted to degrees 0 and 2:
/// `τ(c·1 + Σ cᵢⱼ eᵢ∧eⱼ) = c + Σ cᵢⱼ θᵢⱼ mod 1`. Higher exterior degrees need the
/// full exponential formula and are rejected.
pub fn trace_low_degree(theta: &FiberForm, x: &ExteriorElement) -> Result<BigRational> {
    if theta.n() != x.n {
        return Err(Error::dims(format!("fiber rank {} vs class rank {}", theta.n(), x.n)));
    }
    let mut acc = BigRational::zero();
    for (k, c) in &x.terms {
        let c = BigRational::from_integer(c.clone());
        match k.as_slice() {
            [] => acc += c,
            [i, j] => acc += c * theta.entry(*i, *j),
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "trace is only evaluated on degrees 0 and 2, found degree {}",
                    k.len()
                )))
            }
        }
    }
    Ok(frac(&acc))
}

impl fmt::Display for ExteriorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                if k.is_empty() {
                    c.to_string()
                } else {
                    let idx: String = k.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join("");
                    format!("{c}·e{idx}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
