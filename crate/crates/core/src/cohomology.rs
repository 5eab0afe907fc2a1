//! Bilinear 2-cocycles on `Zⁿ`, their skew-symmetrisations, and the
//! equivalence problem for triples under `GL(m, Z) × GL(n, Z)`.
//!
//! Two triples are equivalent when there are unimodular `φ_A`, `φ_B` with
//! `φ_A ∘ ω = ω̃ ∘ (φ_B ∧ φ_B)`. In matrix terms:
//! `Σₖ φ_A[l][k] · ωₖ = φ_Bᵀ · ω̃ₗ · φ_B` for every `l`, which is
//! `t1.act(φ_A, I) == t2.act(I, φ_B)`.
//!
//! The decision is complete for `m ≤ 1` (skew Smith divisors) and for
//! `n ≤ 3` (the second compound of `GL(3, Z)` is all of `GL(3, Z)` up to sign,
//! so Smith divisors of the coefficient matrix decide). Otherwise a bounded
//! search looks for a certified witness and reports `Unknown` on exhaustion.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::group::{radical_basis, SkewTriple};
use crate::linalg::{row_hnf, skew_canonical_form, snf, unimodular_inverse, IntMatrix, SkewIntMatrix};

/// A bilinear map `Zⁿ × Zⁿ → Zᵐ`, `σ(b₁, b₂)ₖ = b₁ᵀ · mats[k] · b₂`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearCocycle {
    n: usize,
    mats: Vec<IntMatrix>,
}

impl BilinearCocycle {
    pub fn new(n: usize, mats: Vec<IntMatrix>) -> Result<Self> {
        if let Some(k) = mats.iter().position(|x| x.rows() != n || x.cols() != n) {
            return Err(Error::dims(format!("mats[{k}] must be {n}x{n}")));
        }
        Ok(BilinearCocycle { n, mats })
    }

    pub fn m(&self) -> usize {
        self.mats.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mats(&self) -> &[IntMatrix] {
        &self.mats
    }

    pub fn eval(&self, b1: &[BigInt], b2: &[BigInt]) -> Result<Vec<BigInt>> {
        if b1.len() != self.n || b2.len() != self.n {
            return Err(Error::dims(format!("cocycle arguments must have length {}", self.n)));
        }
        Ok(self.mats.iter().map(|x| x.bilinear(b1, b2)).collect())
    }

    /// Adds a symmetric bilinear part, which does not change the class.
    pub fn shifted(&self, symmetric: &[IntMatrix]) -> Result<Self> {
        if symmetric.len() != self.mats.len() || symmetric.iter().any(|s| !s.is_symmetric() || s.rows() != self.n) {
            return Err(Error::InvalidArgument("shift must be m symmetric n x n matrices".into()));
        }
        let mats = self.mats.iter().zip(symmetric).map(|(a, s)| a.add(s)).collect();
        Ok(BilinearCocycle { n: self.n, mats })
    }
}

/// `σ ↦ (b₁ ∧ b₂ ↦ σ(b₁, b₂) − σ(b₂, b₁))`.
pub fn skew_symmetrize(sigma: &BilinearCocycle) -> SkewTriple {
    let forms = sigma
        .mats
        .iter()
        .map(|x| SkewIntMatrix::new(x.sub(&x.transpose())).expect("M - Mᵀ is skew"))
        .collect();
    SkewTriple::new(sigma.n, forms).expect("dimensions already checked")
}

/// The strictly upper-triangular lift, inverse to [`skew_symmetrize`].
pub fn cocycle_from_form(t: &SkewTriple) -> BilinearCocycle {
    BilinearCocycle {
        n: t.n(),
        mats: t.forms().iter().map(|f| f.matrix().strict_upper()).collect(),
    }
}

/// A bilinear cocycle is a coboundary iff it is symmetric.
pub fn is_trivial_class(sigma: &BilinearCocycle) -> bool {
    sigma.mats.iter().all(IntMatrix::is_symmetric)
}

pub fn is_centrally_nondegenerate(t: &SkewTriple) -> bool {
    radical_basis(t).rank() == 0
}

/// Invariants of a triple under `GL(m, Z) × GL(n, Z)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    pub m: usize,
    pub n: usize,
    pub radical_rank: usize,
    /// Nonzero Smith divisors of the `m × C(n,2)` coefficient matrix.
    pub lambda2_divisors: Vec<BigInt>,
    /// Skew canonical divisors, present only when `m == 1`.
    pub skew_divisors: Option<Vec<BigInt>>,
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[BigInt]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
        write!(f, "({}, {}, {}, [{}]", self.m, self.n, self.radical_rank, list(&self.lambda2_divisors))?;
        if let Some(d) = &self.skew_divisors {
            write!(f, ", ({})", list(d))?;
        }
        write!(f, ")")
    }
}

pub fn invariant_fingerprint(t: &SkewTriple) -> Fingerprint {
    Fingerprint {
        m: t.m(),
        n: t.n(),
        radical_rank: radical_basis(t).rank(),
        lambda2_divisors: snf(&t.coefficient_matrix()).divisors(),
        skew_divisors: (t.m() == 1).then(|| skew_canonical_form(&t.forms()[0]).divisors),
    }
}

/// Outcome of [`triples_equivalent`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivalenceVerdict {
    /// `phi_a` (m × m) and `phi_b` (n × n) are unimodular and intertwine the forms.
    Equivalent { phi_a: IntMatrix, phi_b: IntMatrix },
    NotEquivalent { obstruction: String },
    Unknown,
}

impl EquivalenceVerdict {
    pub fn tag(&self) -> &'static str {
        match self {
            EquivalenceVerdict::Equivalent { .. } => "Equivalent",
            EquivalenceVerdict::NotEquivalent { .. } => "NotEquivalent",
            EquivalenceVerdict::Unknown => "Unknown",
        }
    }

    pub fn is_equivalent(&self) -> bool {
        matches!(self, EquivalenceVerdict::Equivalent { .. })
    }
}

/// Checks `Σₖ φ_A[l][k]·ω₁ₖ = φ_Bᵀ·ω₂ₗ·φ_B` for all `l`, with both maps unimodular.
pub fn verify_witness(t1: &SkewTriple, t2: &SkewTriple, phi_a: &IntMatrix, phi_b: &IntMatrix) -> bool {
    let (m, n) = (t1.m(), t1.n());
    if (t2.m(), t2.n()) != (m, n)
        || (phi_a.rows(), phi_a.cols()) != (m, m)
        || (phi_b.rows(), phi_b.cols()) != (n, n)
        || !phi_a.is_unimodular()
        || !phi_b.is_unimodular()
    {
        return false;
    }
    t1.act(phi_a, &IntMatrix::identity(n)) == t2.act(&IntMatrix::identity(m), phi_b)
}

/// Decides equivalence of two triples. `budget` bounds the witness search
/// depth (generators per side) in the cases without a complete procedure.
pub fn triples_equivalent(t1: &SkewTriple, t2: &SkewTriple, budget: usize) -> EquivalenceVerdict {
    if (t1.m(), t1.n()) != (t2.m(), t2.n()) {
        return not_equivalent("dimensions");
    }
    let (m, n) = (t1.m(), t1.n());
    if t1 == t2 {
        return certified(t1, t2, IntMatrix::identity(m), IntMatrix::identity(n));
    }
    if m == 1 {
        return decide_single_form(t1, t2);
    }
    let (f1, f2) = (invariant_fingerprint(t1), invariant_fingerprint(t2));
    if f1.radical_rank != f2.radical_rank {
        return not_equivalent("radical rank");
    }
    if f1.lambda2_divisors != f2.lambda2_divisors {
        return not_equivalent("lambda2 divisors");
    }
    if n <= 3 {
        return decide_small_rank(t1, t2);
    }
    search_witness(t1, t2, budget)
}

fn not_equivalent(what: &str) -> EquivalenceVerdict {
    EquivalenceVerdict::NotEquivalent {
        obstruction: what.to_string(),
    }
}

fn certified(t1: &SkewTriple, t2: &SkewTriple, phi_a: IntMatrix, phi_b: IntMatrix) -> EquivalenceVerdict {
    assert!(
        verify_witness(t1, t2, &phi_a, &phi_b),
        "internal error: constructed witness fails verification"
    );
    EquivalenceVerdict::Equivalent { phi_a, phi_b }
}

/// Combines `t1.act(P1, Q1) == t2.act(P2, Q2)` into a witness `(P2⁻¹P1, Q2Q1⁻¹)`.
fn witness_from_meeting(
    t1: &SkewTriple,
    t2: &SkewTriple,
    (p1, q1): (&IntMatrix, &IntMatrix),
    (p2, q2): (&IntMatrix, &IntMatrix),
) -> EquivalenceVerdict {
    let p2_inv = unimodular_inverse(p2).expect("unimodular");
    let q1_inv = unimodular_inverse(q1).expect("unimodular");
    certified(t1, t2, &p2_inv * p1, q2 * &q1_inv)
}

// m = 1: both forms are congruent to their block normal forms, which agree
// exactly when the divisor lists agree.
fn decide_single_form(t1: &SkewTriple, t2: &SkewTriple) -> EquivalenceVerdict {
    let c1 = skew_canonical_form(&t1.forms()[0]);
    let c2 = skew_canonical_form(&t2.forms()[0]);
    if c1.divisors != c2.divisors {
        return not_equivalent("skew divisors");
    }
    let id = IntMatrix::identity(1);
    witness_from_meeting(t1, t2, (&id, &c1.transform), (&id, &c2.transform))
}

/// Second compound matrix: `C₂(Q)[(k,l)][(i,j)]` is the 2×2 minor on rows
/// `k<l` and columns `i<j`. The coefficient matrix transforms as
/// `coeff(t.act(P, Q)) = P · coeff(t) · C₂(Q)`.
pub fn second_compound(q: &IntMatrix) -> IntMatrix {
    let n = q.rows();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut c = IntMatrix::zeros(pairs.len(), pairs.len());
    for (r, &(k, l)) in pairs.iter().enumerate() {
        for (s, &(i, j)) in pairs.iter().enumerate() {
            c[(r, s)] = &q[(k, i)] * &q[(l, j)] - &q[(l, i)] * &q[(k, j)];
        }
    }
    c
}

/// For `n = 3`, a `Q ∈ GL(3, Z)` with `C₂(Q) = det(X)·X`.
///
/// Uses `C₂(Q) = det(Q)·D·R·Q⁻ᵀ·Rᵀ·D`, where `R` sends the pair `(k,l)` to
/// its complementary index and `D = diag((-1)^(k+l))`.
fn compound_preimage_3(x: &IntMatrix) -> IntMatrix {
    // pairs (0,1), (0,2), (1,2) ↦ complements 2, 1, 0 with signs −, +, −
    let complement = [2usize, 1, 0];
    let sign = [-1i64, 1, -1];
    let mut r = IntMatrix::zeros(3, 3);
    let mut d = IntMatrix::zeros(3, 3);
    for p in 0..3 {
        r[(p, complement[p])] = BigInt::one();
        d[(p, p)] = BigInt::from(sign[p]);
    }
    let y = &(&(&(&r.transpose() * &d) * x) * &d) * &r;
    unimodular_inverse(&y).expect("unimodular").transpose()
}

// n ≤ 3: the B-side acts on Λ² through all of GL(C(n,2), Z) up to sign, so
// both coefficient matrices reduce to the same Smith form.
fn decide_small_rank(t1: &SkewTriple, t2: &SkewTriple) -> EquivalenceVerdict {
    let n = t1.n();
    let lift = |t: &SkewTriple| -> (IntMatrix, IntMatrix) {
        let s = snf(&t.coefficient_matrix());
        let v = s.right;
        let (q, sign) = match n {
            // Λ² is trivial or one-dimensional: C₂(Q) = det Q.
            0 | 1 => (IntMatrix::identity(n), BigInt::one()),
            2 => {
                let q = if v[(0, 0)].is_negative() {
                    IntMatrix::diagonal(&[BigInt::from(-1), BigInt::one()])
                } else {
                    IntMatrix::identity(2)
                };
                (q, BigInt::one())
            }
            _ => (compound_preimage_3(&v), v.det()),
        };
        (s.left.scale(&sign), q)
    };
    let (p1, q1) = lift(t1);
    let (p2, q2) = lift(t2);
    let (a, b) = (t1.act(&p1, &q1), t2.act(&p2, &q2));
    if a != b {
        // Unreachable once fingerprints agree; kept as a guard against convention drift.
        return EquivalenceVerdict::Unknown;
    }
    witness_from_meeting(t1, t2, (&p1, &q1), (&p2, &q2))
}

/// A-side canonical representative: the row HNF of the coefficient matrix,
/// with the `P` that produces it.
fn a_canonical(t: &SkewTriple) -> (IntMatrix, IntMatrix) {
    let h = row_hnf(&t.coefficient_matrix());
    (h.form, h.transform)
}

fn size(key: &IntMatrix) -> BigInt {
    key.entries().iter().map(|x| x.abs()).sum()
}

/// Elementary `GL(n, Z)` generators: transvections, swaps, negations.
fn generators(n: usize) -> Vec<IntMatrix> {
    let mut gens = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for c in [1i64, -1] {
                let mut g = IntMatrix::identity(n);
                g[(i, j)] = BigInt::from(c);
                gens.push(g);
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut g = IntMatrix::identity(n);
            g.swap_cols(i, j);
            gens.push(g);
        }
    }
    for i in 0..n {
        let mut g = IntMatrix::identity(n);
        g[(i, i)] = BigInt::from(-1);
        gens.push(g);
    }
    gens
}

/// Greedy descent on the size of the A-canonical key; returns the accumulated `Q`.
fn greedy_reduce(t: &SkewTriple, gens: &[IntMatrix]) -> IntMatrix {
    let n = t.n();
    let mut q = IntMatrix::identity(n);
    let mut current = t.clone();
    let mut best_key = a_canonical(&current).0;
    for _ in 0..256 {
        let mut step: Option<(IntMatrix, IntMatrix, SkewTriple)> = None;
        for g in gens {
            let cand = current.act(&IntMatrix::identity(t.m()), g);
            let key = a_canonical(&cand).0;
            let better_than = |other: &IntMatrix| (size(&key), key.entries()) < (size(other), other.entries());
            let improves = match &step {
                Some((k, _, _)) => better_than(k),
                None => better_than(&best_key),
            };
            if improves {
                step = Some((key, g.clone(), cand));
            }
        }
        match step {
            Some((key, g, cand)) => {
                best_key = key;
                q = &q * &g;
                current = cand;
            }
            None => break,
        }
    }
    q
}

struct Frontier {
    seen: HashMap<IntMatrix, IntMatrix>,
    layer: Vec<(SkewTriple, IntMatrix)>,
}

impl Frontier {
    fn new(t: &SkewTriple, q: IntMatrix) -> Self {
        let start = t.act(&IntMatrix::identity(t.m()), &q);
        let mut seen = HashMap::new();
        seen.insert(a_canonical(&start).0, q.clone());
        Frontier {
            seen,
            layer: vec![(start, q)],
        }
    }

    fn expand(&mut self, gens: &[IntMatrix]) {
        let mut next = Vec::new();
        for (s, q) in &self.layer {
            for g in gens {
                let cand = s.act(&IntMatrix::identity(s.m()), g);
                let key = a_canonical(&cand).0;
                if self.seen.contains_key(&key) {
                    continue;
                }
                let q2 = q * g;
                self.seen.insert(key, q2.clone());
                next.push((cand, q2));
            }
        }
        self.layer = next;
    }
}

// Meet-in-the-middle over B-side generators, keyed on the A-canonical form.
fn search_witness(t1: &SkewTriple, t2: &SkewTriple, budget: usize) -> EquivalenceVerdict {
    let gens = generators(t1.n());
    let mut f1 = Frontier::new(t1, greedy_reduce(t1, &gens));
    let mut f2 = Frontier::new(t2, greedy_reduce(t2, &gens));
    let meet = |f1: &Frontier, f2: &Frontier| -> Option<(IntMatrix, IntMatrix)> {
        f1.seen
            .iter()
            .find_map(|(k, q1)| f2.seen.get(k).map(|q2| (q1.clone(), q2.clone())))
    };
    for depth in 0..=budget {
        if let Some((q1, q2)) = meet(&f1, &f2) {
            let p1 = a_canonical(&t1.act(&IntMatrix::identity(t1.m()), &q1)).1;
            let p2 = a_canonical(&t2.act(&IntMatrix::identity(t2.m()), &q2)).1;
            return witness_from_meeting(t1, t2, (&p1, &q1), (&p2, &q2));
        }
        if depth < budget {
            f1.expand(&gens);
            f2.expand(&gens);
        }
    }
    EquivalenceVerdict::Unknown
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int_vec, random_unimodular};

    fn upper_cocycle() -> BilinearCocycle {
        BilinearCocycle::new(2, vec![IntMatrix::from_rows(&[[0, 1], [0, 0]])]).unwrap()
    }

    #[test]
    fn symmetrize_examples() {
        let sym = BilinearCocycle::new(2, vec![IntMatrix::from_rows(&[[3, 1], [1, -2]])]).unwrap();
        assert!(skew_symmetrize(&sym).is_abelian());
        assert_eq!(skew_symmetrize(&upper_cocycle()), SkewTriple::heisenberg());
        assert_eq!(cocycle_from_form(&SkewTriple::heisenberg()), upper_cocycle());
        assert_eq!(cocycle_from_form(&SkewTriple::zero(2, 3)).mats(), &[IntMatrix::zeros(3, 3), IntMatrix::zeros(3, 3)]);
        assert!(cocycle_from_form(&SkewTriple::zero(1, 1)).mats()[0].is_zero());
    }

    #[test]
    fn triviality() {
        let sym = BilinearCocycle::new(2, vec![IntMatrix::from_rows(&[[3, 1], [1, -2]])]).unwrap();
        assert!(is_trivial_class(&sym));
        assert!(!is_trivial_class(&upper_cocycle()));
        assert!(is_trivial_class(&cocycle_from_form(&SkewTriple::zero(1, 2))));
        // shifting by a coboundary keeps the class
        let shifted = upper_cocycle().shifted(&[IntMatrix::from_rows(&[[1, 2], [2, 0]])]).unwrap();
        assert_eq!(skew_symmetrize(&shifted), SkewTriple::heisenberg());
    }

    #[test]
    fn nondegeneracy() {
        assert!(is_centrally_nondegenerate(&SkewTriple::heisenberg()));
        assert!(!is_centrally_nondegenerate(&SkewTriple::zero(1, 1)));
        assert!(is_centrally_nondegenerate(&SkewTriple::zero(2, 0)));
    }

    #[test]
    fn fingerprints() {
        let h = invariant_fingerprint(&SkewTriple::heisenberg());
        assert_eq!(h.to_string(), "(1, 2, 0, [1], (1))");
        let z = invariant_fingerprint(&SkewTriple::zero(1, 2));
        assert_eq!(z.to_string(), "(1, 2, 2, [], ())");
        assert_eq!(z.lambda2_divisors, Vec::<BigInt>::new());
    }

    #[test]
    fn self_equivalence_is_identity() {
        let h = SkewTriple::heisenberg();
        assert_eq!(
            triples_equivalent(&h, &h, 0),
            EquivalenceVerdict::Equivalent {
                phi_a: IntMatrix::identity(1),
                phi_b: IntMatrix::identity(2)
            }
        );
    }

    #[test]
    fn divisor_mismatch_is_refuted() {
        let h2 = SkewTriple::from_i64(2, &[vec![vec![0, 2], vec![-2, 0]]]).unwrap();
        assert_eq!(
            triples_equivalent(&SkewTriple::heisenberg(), &h2, 3),
            EquivalenceVerdict::NotEquivalent {
                obstruction: "skew divisors".into()
            }
        );
    }

    #[test]
    fn scrambled_single_form() {
        let t = SkewTriple::new(4, vec![SkewIntMatrix::from_upper(4, &int_vec(&[2, -4, 6, 0, 8, 2]))]).unwrap();
        let q = random_unimodular(4, 11, 25);
        let s = t.act(&IntMatrix::from_rows(&[[-1]]), &q);
        match triples_equivalent(&t, &s, 0) {
            EquivalenceVerdict::Equivalent { phi_a, phi_b } => assert!(verify_witness(&t, &s, &phi_a, &phi_b)),
            v => panic!("expected Equivalent, got {v:?}"),
        }
    }

    #[test]
    fn second_compound_matches_action() {
        let t = SkewTriple::from_i64(3, &[vec![vec![0, 2, -1], vec![-2, 0, 3], vec![1, -3, 0]]]).unwrap();
        let q = random_unimodular(3, 5, 12);
        let p = IntMatrix::identity(1);
        let lhs = t.act(&p, &q).coefficient_matrix();
        let rhs = &t.coefficient_matrix() * &second_compound(&q);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn compound_preimage_for_rank_three() {
        for seed in 0..30 {
            let x = random_unimodular(3, seed, 15);
            let q = compound_preimage_3(&x);
            assert_eq!(second_compound(&q), x.scale(&x.det()), "seed {seed}");
        }
    }

    #[test]
    fn scrambled_pairs_rank_three() {
        let t = SkewTriple::from_i64(
            3,
            &[
                vec![vec![0, 2, -1], vec![-2, 0, 3], vec![1, -3, 0]],
                vec![vec![0, 1, 4], vec![-1, 0, 0], vec![-4, 0, 0]],
            ],
        )
        .unwrap();
        for seed in 0..10 {
            let s = t.act(&random_unimodular(2, seed, 10), &random_unimodular(3, seed + 100, 10));
            match triples_equivalent(&t, &s, 0) {
                EquivalenceVerdict::Equivalent { phi_a, phi_b } => assert!(verify_witness(&t, &s, &phi_a, &phi_b)),
                v => panic!("seed {seed}: {v:?}"),
            }
        }
    }

    #[test]
    fn search_finds_shallow_scramble() {
        let t = SkewTriple::new(
            4,
            vec![
                SkewIntMatrix::from_upper(4, &int_vec(&[1, 0, 0, 0, 0, 1])),
                SkewIntMatrix::from_upper(4, &int_vec(&[0, 1, 0, 0, 2, 0])),
            ],
        )
        .unwrap();
        let mut q = IntMatrix::identity(4);
        q[(0, 3)] = BigInt::from(1);
        let s = t.act(&IntMatrix::from_rows(&[[0, 1], [1, 0]]), &q);
        match triples_equivalent(&t, &s, 2) {
            EquivalenceVerdict::Equivalent { phi_a, phi_b } => assert!(verify_witness(&t, &s, &phi_a, &phi_b)),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn dimension_mismatch_is_refuted() {
        let v = triples_equivalent(&SkewTriple::zero(1, 2), &SkewTriple::zero(2, 2), 1);
        assert_eq!(v.tag(), "NotEquivalent");
    }

    #[test]
    fn rank_two_many_centers() {
        let a = SkewTriple::from_i64(2, &[vec![vec![0, 4], vec![-4, 0]], vec![vec![0, 6], vec![-6, 0]]]).unwrap();
        let b = SkewTriple::from_i64(2, &[vec![vec![0, -2], vec![2, 0]], vec![vec![0, 0], vec![0, 0]]]).unwrap();
        let v = triples_equivalent(&a, &b, 0);
        assert!(v.is_equivalent(), "{v:?}");
    }
}
