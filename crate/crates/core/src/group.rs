//! The group `A ⋊_σ B` attached to a skew triple, in Mal'cev coordinates.
//!
//! Elements are pairs `(a, b) ∈ Zᵐ × Zⁿ` multiplied through the strictly
//! upper-triangular cocycle
//! `σ(b₁, b₂)ₖ = Σ_{i<j} ωₖ[i][j] · b₁ᵢ · b₂ⱼ`, whose skew-symmetrisation is ω.
//! Elements carry no reference to their triple; every operation takes it
//! explicitly.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{column_hnf, hnf_contains, integer_kernel, snf, IntMatrix, SkewIntMatrix};

/// A presentation `(A ≅ Zᵐ, B ≅ Zⁿ, ω : Λ²B → A)` of a torsion-free 2-step
/// nilpotent group. `forms[k][i][j]` is the k-th coordinate of `ω(eᵢ ∧ eⱼ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SkewTriple {
    m: usize,
    n: usize,
    forms: Vec<SkewIntMatrix>,
}

impl SkewTriple {
    pub fn new(n: usize, forms: Vec<SkewIntMatrix>) -> Result<Self> {
        if let Some((k, f)) = forms.iter().enumerate().find(|(_, f)| f.n() != n) {
            return Err(Error::dims(format!("forms[{k}] has size {} but n = {n}", f.n())));
        }
        Ok(SkewTriple {
            m: forms.len(),
            n,
            forms,
        })
    }

    /// Small-integer constructor: `forms[k]` given as rows.
    pub fn from_i64(n: usize, forms: &[Vec<Vec<i64>>]) -> Result<Self> {
        let mut out = Vec::with_capacity(forms.len());
        for f in forms {
            if f.len() != n || f.iter().any(|r| r.len() != n) {
                return Err(Error::dims(format!("each form must be {n}x{n}")));
            }
            out.push(SkewIntMatrix::new(IntMatrix::from_rows(f))?);
        }
        Self::new(n, out)
    }

    /// The zero form on `(Zᵐ, Zⁿ)`: an abelian group.
    pub fn zero(m: usize, n: usize) -> Self {
        SkewTriple {
            m,
            n,
            forms: vec![SkewIntMatrix::zero(n); m],
        }
    }

    /// The integer Heisenberg group.
    pub fn heisenberg() -> Self {
        Self::from_i64(2, &[vec![vec![0, 1], vec![-1, 0]]]).unwrap()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn forms(&self) -> &[SkewIntMatrix] {
        &self.forms
    }

    pub fn is_abelian(&self) -> bool {
        self.forms.iter().all(SkewIntMatrix::is_zero)
    }

    /// `ω(x ∧ y) ∈ Zᵐ`.
    pub fn omega(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        self.forms.iter().map(|f| f.matrix().bilinear(x, y)).collect()
    }

    /// The `m × C(n,2)` matrix whose row k lists `forms[k][i][j]` for `i < j`.
    pub fn coefficient_matrix(&self) -> IntMatrix {
        let cols = self.n * self.n.saturating_sub(1) / 2;
        let data = self.forms.iter().flat_map(|f| f.upper_entries()).collect();
        IntMatrix::from_vec(self.m, cols, data)
    }

    /// Pulls the triple back along `(P, Q)`: the new forms are
    /// `Σₖ P[l][k] · Qᵀ ωₖ Q`. This is a right action:
    /// `t.act(P, Q).act(P', Q') = t.act(P'·P, Q·Q')`.
    pub fn act(&self, p: &IntMatrix, q: &IntMatrix) -> SkewTriple {
        assert_eq!((p.cols(), q.rows()), (self.m, self.n), "act: dimension mismatch");
        let pulled: Vec<IntMatrix> = self.forms.iter().map(|f| f.matrix().congruence(q)).collect();
        let n = q.cols();
        let forms = (0..p.rows())
            .map(|l| {
                let mut acc = IntMatrix::zeros(n, n);
                for (k, f) in pulled.iter().enumerate() {
                    if !p[(l, k)].is_zero() {
                        acc = acc.add(&f.scale(&p[(l, k)]));
                    }
                }
                SkewIntMatrix::new(acc).expect("congruence preserves skewness")
            })
            .collect();
        SkewTriple {
            m: p.rows(),
            n,
            forms,
        }
    }

    fn check_vec(&self, v: &[BigInt], len: usize, what: &str) -> Result<()> {
        if v.len() != len {
            return Err(Error::dims(format!("{what} has length {} but expected {len}", v.len())));
        }
        Ok(())
    }

    fn check_element(&self, x: &GroupElement) -> Result<()> {
        self.check_vec(&x.a, self.m, "central coordinate")?;
        self.check_vec(&x.b, self.n, "quotient coordinate")
    }
}

/// Mal'cev coordinates `(a, b)` of an element of `A ⋊_σ B`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub a: Vec<BigInt>,
    pub b: Vec<BigInt>,
}

impl GroupElement {
    pub fn new(a: Vec<BigInt>, b: Vec<BigInt>) -> Self {
        GroupElement { a, b }
    }

    pub fn from_i64(a: &[i64], b: &[i64]) -> Self {
        GroupElement {
            a: a.iter().map(|&x| BigInt::from(x)).collect(),
            b: b.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn identity(t: &SkewTriple) -> Self {
        GroupElement {
            a: vec![BigInt::zero(); t.m],
            b: vec![BigInt::zero(); t.n],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.a.iter().chain(&self.b).all(Zero::is_zero)
    }

    /// Coordinates as one vector of `Zᵐ⁺ⁿ`.
    pub fn flat(&self) -> Vec<BigInt> {
        self.a.iter().chain(&self.b).cloned().collect()
    }
}

/// `a1,..,am;b1,..,bn`
impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[BigInt]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        write!(f, "{};{}", join(&self.a), join(&self.b))
    }
}

fn vadd(x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

fn vneg(x: &[BigInt]) -> Vec<BigInt> {
    x.iter().map(|a| -a).collect()
}

/// `σ(b₁, b₂)ₖ = Σ_{i<j} ωₖ[i][j] · b₁ᵢ · b₂ⱼ`.
pub fn standard_cocycle(t: &SkewTriple, b1: &[BigInt], b2: &[BigInt]) -> Result<Vec<BigInt>> {
    t.check_vec(b1, t.n, "b1")?;
    t.check_vec(b2, t.n, "b2")?;
    Ok(cocycle_unchecked(t, b1, b2))
}

fn cocycle_unchecked(t: &SkewTriple, b1: &[BigInt], b2: &[BigInt]) -> Vec<BigInt> {
    t.forms
        .iter()
        .map(|f| {
            let mut s = BigInt::zero();
            for i in 0..t.n {
                if b1[i].is_zero() {
                    continue;
                }
                for j in i + 1..t.n {
                    s += f.get(i, j) * &b1[i] * &b2[j];
                }
            }
            s
        })
        .collect()
}

/// `(a₁, b₁)(a₂, b₂) = (a₁ + a₂ + σ(b₁, b₂), b₁ + b₂)`.
pub fn multiply(t: &SkewTriple, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
    t.check_element(x)?;
    t.check_element(y)?;
    let s = cocycle_unchecked(t, &x.b, &y.b);
    Ok(GroupElement {
        a: vadd(&vadd(&x.a, &y.a), &s),
        b: vadd(&x.b, &y.b),
    })
}

/// `(a, b)⁻¹ = (−a + σ(b, b), −b)`.
pub fn inverse(t: &SkewTriple, x: &GroupElement) -> Result<GroupElement> {
    t.check_element(x)?;
    let s = cocycle_unchecked(t, &x.b, &x.b);
    Ok(GroupElement {
        a: vadd(&vneg(&x.a), &s),
        b: vneg(&x.b),
    })
}

/// `[x, y] = x y x⁻¹ y⁻¹ = (ω(b_x ∧ b_y); 0)`.
pub fn commutator(t: &SkewTriple, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
    t.check_element(x)?;
    t.check_element(y)?;
    Ok(GroupElement {
        a: t.omega(&x.b, &y.b),
        b: vec![BigInt::zero(); t.n],
    })
}

/// `g x g⁻¹ = (a_x + ω(b_g ∧ b_x); b_x)`.
pub fn conjugate(t: &SkewTriple, g: &GroupElement, x: &GroupElement) -> Result<GroupElement> {
    t.check_element(g)?;
    t.check_element(x)?;
    Ok(GroupElement {
        a: vadd(&x.a, &t.omega(&g.b, &x.b)),
        b: x.b.clone(),
    })
}

/// `xᵏ` for any integer `k`, by repeated multiplication.
pub fn power(t: &SkewTriple, x: &GroupElement, k: i64) -> Result<GroupElement> {
    let base = if k < 0 { inverse(t, x)? } else { x.clone() };
    let mut acc = GroupElement::identity(t);
    for _ in 0..k.unsigned_abs() {
        acc = multiply(t, &acc, &base)?;
    }
    Ok(acc)
}

/// A subgroup of `Z^rank` stored as a column-HNF basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sublattice {
    ambient: usize,
    basis: IntMatrix,
}

impl Sublattice {
    /// Lattice spanned by the columns of `generators`.
    pub fn span(generators: &IntMatrix) -> Self {
        Sublattice {
            ambient: generators.rows(),
            basis: column_hnf(generators),
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        hnf_contains(&self.basis, v)
    }
}

/// `rad ω = {b : ω(b ∧ x) = 0 for all x}`, the kernel of the stacked forms.
pub fn radical_basis(t: &SkewTriple) -> Sublattice {
    let stack: Vec<IntMatrix> = t.forms.iter().map(|f| f.matrix().clone()).collect();
    let stacked = IntMatrix::vstack(&stack, t.n);
    Sublattice {
        ambient: t.n,
        basis: integer_kernel(&stacked),
    }
}

/// `Z(G) = A ⊕ rad ω` inside `Zᵐ⁺ⁿ`.
pub fn center_basis(t: &SkewTriple) -> Sublattice {
    let rad = radical_basis(t);
    let total = t.m + t.n;
    let mut gens = IntMatrix::zeros(total, t.m + rad.rank());
    for k in 0..t.m {
        gens[(k, k)] = BigInt::from(1);
    }
    for c in 0..rad.rank() {
        for i in 0..t.n {
            gens[(t.m + i, t.m + c)] = rad.basis[(i, c)].clone();
        }
    }
    Sublattice::span(&gens)
}

pub fn is_central(t: &SkewTriple, x: &GroupElement) -> Result<bool> {
    t.check_element(x)?;
    Ok(center_basis(t).contains(&x.flat()))
}

/// 0 for the trivial group, 1 for nontrivial abelian, 2 otherwise.
pub fn nilpotency_class(t: &SkewTriple) -> u8 {
    if t.m + t.n == 0 {
        0
    } else if t.is_abelian() {
        1
    } else {
        2
    }
}

/// Ranks of the successive subquotients `Zᵢ / Zᵢ₋₁` of the upper central series.
pub fn upper_central_series(t: &SkewTriple) -> Vec<usize> {
    match nilpotency_class(t) {
        0 => vec![],
        1 => vec![t.m + t.n],
        _ => {
            let r = radical_basis(t).rank();
            vec![t.m + r, t.n - r]
        }
    }
}

/// The conjugacy class of `x` is `{(a_x + ω(b_g ∧ b_x); b_x)}`, which is
/// finite exactly when it is a single point, i.e. when `b_x ∈ rad ω`.
pub fn is_fc_element(t: &SkewTriple, x: &GroupElement) -> Result<bool> {
    t.check_element(x)?;
    Ok(radical_basis(t).contains(&x.b))
}

/// A unimodular `n × n` matrix whose last `r` columns span the radical.
fn radical_completion(t: &SkewTriple, rad: &Sublattice) -> IntMatrix {
    let n = t.n;
    let r = rad.rank();
    // Prefer unit vectors for the complement when they complete the radical.
    let pivots: Vec<usize> = (0..r)
        .map(|c| (0..n).find(|&i| !rad.basis[(i, c)].is_zero()).unwrap())
        .collect();
    let mut cols: Vec<Vec<BigInt>> = (0..n)
        .filter(|i| !pivots.contains(i))
        .map(|i| {
            let mut e = vec![BigInt::zero(); n];
            e[i] = BigInt::from(1);
            e
        })
        .collect();
    cols.extend(rad.basis.columns());
    let w = IntMatrix::from_columns(n, &cols);
    if w.is_unimodular() {
        return w;
    }
    // General case: a saturated lattice has all Smith divisors 1, so U⁻¹ completes it.
    let s = snf(&rad.basis);
    let u_inv = crate::linalg::unimodular_inverse(&s.left).expect("left Smith factor is unimodular");
    // Columns 0..r of U⁻¹·V⁻¹-adjusted span the radical; the rest complete it.
    let v_inv = crate::linalg::unimodular_inverse(&s.right).expect("right Smith factor is unimodular");
    let mut head = u_inv.select_columns(0..r);
    head = &head * &v_inv;
    let tail = u_inv.select_columns(r..n);
    let mut cols = tail.columns();
    cols.extend(head.columns());
    IntMatrix::from_columns(n, &cols)
}

/// Passes to `(Z(G), G/Z(G), ω_G)`: the radical moves into the center and ω
/// is restricted to a complement of it.
pub fn canonical_triple(t: &SkewTriple) -> SkewTriple {
    let rad = radical_basis(t);
    let r = rad.rank();
    if r == 0 {
        return t.clone();
    }
    let w = radical_completion(t, &rad);
    let complement = w.select_columns(0..t.n - r);
    let mut forms: Vec<SkewIntMatrix> = t.forms.iter().map(|f| f.congruence(&complement)).collect();
    forms.extend((0..r).map(|_| SkewIntMatrix::zero(t.n - r)));
    SkewTriple {
        m: t.m + r,
        n: t.n - r,
        forms,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_vec;

    fn e(a: &[i64], b: &[i64]) -> GroupElement {
        GroupElement::from_i64(a, b)
    }

    fn degenerate() -> SkewTriple {
        SkewTriple::from_i64(3, &[vec![vec![0, 1, 0], vec![-1, 0, 0], vec![0, 0, 0]]]).unwrap()
    }

    #[test]
    fn heisenberg_cocycle() {
        let h = SkewTriple::heisenberg();
        assert_eq!(standard_cocycle(&h, &int_vec(&[1, 0]), &int_vec(&[0, 1])).unwrap(), int_vec(&[1]));
        assert_eq!(standard_cocycle(&h, &int_vec(&[0, 1]), &int_vec(&[1, 0])).unwrap(), int_vec(&[0]));
        assert_eq!(standard_cocycle(&h, &int_vec(&[5, -2]), &int_vec(&[0, 0])).unwrap(), int_vec(&[0]));
        assert!(standard_cocycle(&h, &int_vec(&[1]), &int_vec(&[0, 0])).is_err());
    }

    #[test]
    fn heisenberg_products() {
        let h = SkewTriple::heisenberg();
        assert_eq!(multiply(&h, &e(&[0], &[1, 0]), &e(&[0], &[0, 1])).unwrap(), e(&[1], &[1, 1]));
        assert_eq!(multiply(&h, &e(&[0], &[0, 1]), &e(&[0], &[1, 0])).unwrap(), e(&[0], &[1, 1]));
        let x = e(&[4], &[-3, 7]);
        assert_eq!(multiply(&h, &GroupElement::identity(&h), &x).unwrap(), x);
    }

    #[test]
    fn heisenberg_inverse() {
        let h = SkewTriple::heisenberg();
        let x = e(&[0], &[1, 1]);
        let xi = inverse(&h, &x).unwrap();
        assert_eq!(xi, e(&[1], &[-1, -1]));
        assert!(multiply(&h, &x, &xi).unwrap().is_identity());
        let id = GroupElement::identity(&h);
        assert_eq!(inverse(&h, &id).unwrap(), id);
    }

    #[test]
    fn heisenberg_commutator_and_conjugate() {
        let h = SkewTriple::heisenberg();
        let (x, y) = (e(&[0], &[1, 0]), e(&[0], &[0, 1]));
        assert_eq!(commutator(&h, &x, &y).unwrap(), e(&[1], &[0, 0]));
        assert!(commutator(&h, &x, &x).unwrap().is_identity());
        assert_eq!(conjugate(&h, &x, &y).unwrap(), e(&[1], &[0, 1]));
        let id = GroupElement::identity(&h);
        assert_eq!(conjugate(&h, &id, &y).unwrap(), y);
        let z = e(&[5], &[0, 0]);
        assert_eq!(conjugate(&h, &x, &z).unwrap(), z);
    }

    #[test]
    fn dimension_errors() {
        let h = SkewTriple::heisenberg();
        let bad = e(&[0, 0], &[1, 0]);
        assert!(matches!(multiply(&h, &bad, &bad), Err(Error::DimensionMismatch(_))));
        assert!(inverse(&h, &bad).is_err());
        assert!(is_fc_element(&h, &bad).is_err());
    }

    #[test]
    fn radicals_and_centers() {
        let h = SkewTriple::heisenberg();
        assert_eq!(radical_basis(&h).rank(), 0);
        assert_eq!(center_basis(&h).rank(), 1);
        assert_eq!(radical_basis(&SkewTriple::zero(1, 3)).rank(), 3);
        assert_eq!(center_basis(&SkewTriple::zero(2, 3)).rank(), 5);
        let d = degenerate();
        assert_eq!(radical_basis(&d).basis(), &IntMatrix::from_rows(&[[0], [0], [1]]));
        assert_eq!(center_basis(&d).rank(), 2);
    }

    #[test]
    fn classes_and_series() {
        let h = SkewTriple::heisenberg();
        assert_eq!(nilpotency_class(&h), 2);
        assert_eq!(upper_central_series(&h), vec![1, 2]);
        assert_eq!(nilpotency_class(&SkewTriple::zero(0, 2)), 1);
        assert_eq!(upper_central_series(&SkewTriple::zero(0, 2)), vec![2]);
        assert_eq!(nilpotency_class(&SkewTriple::zero(0, 0)), 0);
        assert!(upper_central_series(&SkewTriple::zero(0, 0)).is_empty());
        assert_eq!(upper_central_series(&degenerate()), vec![2, 2]);
    }

    #[test]
    fn fc_elements() {
        let h = SkewTriple::heisenberg();
        assert!(is_fc_element(&h, &e(&[3], &[0, 0])).unwrap());
        assert!(!is_fc_element(&h, &e(&[0], &[1, 0])).unwrap());
        let z = SkewTriple::zero(1, 2);
        assert!(is_fc_element(&z, &e(&[1], &[2, 3])).unwrap());
    }

    #[test]
    fn canonical_triples() {
        let h = SkewTriple::heisenberg();
        assert_eq!(canonical_triple(&h), h);
        let expected = SkewTriple::from_i64(2, &[vec![vec![0, 1], vec![-1, 0]], vec![vec![0, 0], vec![0, 0]]]).unwrap();
        assert_eq!(canonical_triple(&degenerate()), expected);
        assert_eq!(canonical_triple(&SkewTriple::zero(1, 2)), SkewTriple::zero(3, 0));
    }

    #[test]
    fn canonical_with_non_unit_radical_pivot() {
        // ω = x₁∧x₂ pulled back along a shear: radical spanned by (2, 3, 1)-type vector
        let f = vec![vec![0, 1, -3], vec![-1, 0, 2], vec![3, -2, 0]];
        let t = SkewTriple::from_i64(3, &[f]).unwrap();
        let rad = radical_basis(&t);
        assert_eq!(rad.rank(), 1);
        let c = canonical_triple(&t);
        assert_eq!((c.m(), c.n()), (2, 2));
        assert_eq!(radical_basis(&c).rank(), 0);
        assert_eq!(canonical_triple(&c), c);
    }

    #[test]
    fn act_is_right_action() {
        let t = SkewTriple::from_i64(3, &[vec![vec![0, 2, -1], vec![-2, 0, 3], vec![1, -3, 0]], vec![vec![0, 1, 1], vec![-1, 0, 0], vec![-1, 0, 0]]]).unwrap();
        let p1 = IntMatrix::from_rows(&[[1, 1], [0, 1]]);
        let p2 = IntMatrix::from_rows(&[[0, 1], [-1, 2]]);
        let q1 = IntMatrix::from_rows(&[[1, 0, 2], [0, 1, 0], [0, 0, 1]]);
        let q2 = IntMatrix::from_rows(&[[0, 1, 0], [1, 0, 0], [0, -1, 1]]);
        assert_eq!(t.act(&p1, &q1).act(&p2, &q2), t.act(&(&p2 * &p1), &(&q1 * &q2)));
    }
}
