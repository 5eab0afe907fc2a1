use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::frac;
use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// A `q`-dimensional projective representation of `Z²` whose generators
/// satisfy `λ(e₁)λ(e₂)λ(e₁)⁻¹λ(e₂)⁻¹ = e^{2πiθ}·I` with `θ = p/q`.
///
/// `λ(e₁)` is the clock `diag(ζ⁰, …, ζ^{q−1})`, `ζ = e^{2πip/q}`, and `λ(e₂)`
/// the cyclic shift `eₖ ↦ e_{k+1}`.
#[derive(Debug, Clone)]
pub struct UnitaryRep {
    theta: BigRational,
    q: usize,
    clock: CMatrix,
    shift: CMatrix,
}

impl UnitaryRep {
    pub fn q(&self) -> usize {
        self.q
    }

    /// `θ` reduced to `[0, 1)` in lowest terms.
    pub fn theta(&self) -> &BigRational {
        &self.theta
    }

    pub fn clock(&self) -> &CMatrix {
        &self.clock
    }

    pub fn shift(&self) -> &CMatrix {
        &self.shift
    }

    /// `λ(b) = clock^{b₁} · shift^{b₂}`, powers taken by repeated multiplication
    /// (adjoints for negative exponents).
    pub fn lambda(&self, b: [i64; 2]) -> CMatrix {
        power(&self.clock, b[0]) * power(&self.shift, b[1])
    }

    /// `‖λ(e₁)λ(e₂) − e^{2πiθ}·λ(e₂)λ(e₁)‖_F`, an upper bound for the operator norm.
    pub fn commutation_residual(&self) -> f64 {
        let phase = Complex64::from_polar(1.0, TAU * self.theta.to_f64().unwrap_or(0.0));
        let lhs = &self.clock * &self.shift;
        let rhs = (&self.shift * &self.clock) * phase;
        (lhs - rhs).norm()
    }

    /// `‖λ(e₁)λ(e₂)λ(e₁)⁻¹λ(e₂)⁻¹ − e^{2πiθ}·I‖_F`.
    pub fn group_commutator_residual(&self) -> f64 {
        let phase = Complex64::from_polar(1.0, TAU * self.theta.to_f64().unwrap_or(0.0));
        let c = &self.clock * &self.shift * self.clock.adjoint() * self.shift.adjoint();
        (c - CMatrix::identity(self.q, self.q) * phase).norm()
    }

    /// Largest `‖UU* − I‖_F` over the two generators.
    pub fn unitarity_residual(&self) -> f64 {
        let id = CMatrix::identity(self.q, self.q);
        [&self.clock, &self.shift]
            .iter()
            .map(|u| (*u * u.adjoint() - &id).norm())
            .fold(0.0, f64::max)
    }
}

fn power(u: &CMatrix, k: i64) -> CMatrix {
    let base = if k < 0 { u.adjoint() } else { u.clone() };
    let mut acc = CMatrix::identity(u.nrows(), u.ncols());
    for _ in 0..k.unsigned_abs() {
        acc = &acc * &base;
    }
    acc
}

/// Builds the clock-shift pair for `θ`, reduced mod 1 and to lowest terms.
pub fn clock_shift_rep(theta: &BigRational) -> Result<UnitaryRep> {
    let theta = frac(theta);
    let q = theta
        .denom()
        .to_usize()
        .filter(|&q| q <= 4096)
        .ok_or_else(|| Error::InvalidArgument(format!("denominator of {theta} too large")))?;
    let p = theta.numer().to_f64().unwrap_or(0.0);
    let mut clock = CMatrix::zeros(q, q);
    let mut shift = CMatrix::zeros(q, q);
    for k in 0..q {
        // exponent p·k reduced mod q keeps the angle small
        let e = (p * k as f64).rem_euclid(q as f64);
        clock[(k, k)] = Complex64::from_polar(1.0, TAU * e / q as f64);
        shift[((k + 1) % q, k)] = Complex64::new(1.0, 0.0);
    }
    Ok(UnitaryRep {
        theta,
        q,
        clock,
        shift,
    })
}

/// `|tr(λ(b))/q − [b ≡ 0 mod q]|`: the canonical trace vanishes off the identity.
pub fn canonical_trace_check(rep: &UnitaryRep, b: [i64; 2]) -> f64 {
    trace_residual(rep, &rep.lambda(b), b)
}

fn trace_residual(rep: &UnitaryRep, lambda: &CMatrix, b: [i64; 2]) -> f64 {
    let q = rep.q as i64;
    let expected = if b[0].is_multiple_of(&q) && b[1].is_multiple_of(&q) {
        Complex64::one()
    } else {
        Complex64::zero()
    };
    (lambda.trace() / rep.q as f64 - expected).norm()
}

/// Worst canonical-trace residual over `max(|b₁|, |b₂|) ≤ radius`. Powers are
/// accumulated once per generator and reused.
pub fn max_trace_residual(rep: &UnitaryRep, radius: i64) -> f64 {
    let powers = |u: &CMatrix| -> Vec<CMatrix> {
        let mut pos = vec![CMatrix::identity(rep.q, rep.q)];
        let mut neg = vec![CMatrix::identity(rep.q, rep.q)];
        let ua = u.adjoint();
        for k in 1..=radius as usize {
            pos.push(&pos[k - 1] * u);
            neg.push(&neg[k - 1] * &ua);
        }
        neg.reverse();
        neg.pop();
        neg.extend(pos);
        neg
    };
    let cp = powers(&rep.clock);
    let sp = powers(&rep.shift);
    let mut worst: f64 = 0.0;
    for b1 in -radius..=radius {
        for b2 in -radius..=radius {
            let l = &cp[(b1 + radius) as usize] * &sp[(b2 + radius) as usize];
            worst = worst.max(trace_residual(rep, &l, [b1, b2]));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn trivial_theta_commutes() {
        let r = clock_shift_rep(&theta(0, 1)).unwrap();
        assert_eq!(r.q(), 1);
        assert!(r.commutation_residual() < 1e-12);
    }

    #[test]
    fn third_root_of_unity() {
        let r = clock_shift_rep(&theta(1, 3)).unwrap();
        assert_eq!(r.q(), 3);
        assert!(r.commutation_residual() < 1e-9);
        assert!(r.group_commutator_residual() < 1e-9);
        assert!(r.unitarity_residual() < 1e-9);
    }

    #[test]
    fn pauli_type() {
        let r = clock_shift_rep(&theta(1, 2)).unwrap();
        assert_eq!(r.q(), 2);
        assert!(r.commutation_residual() < 1e-9);
    }

    #[test]
    fn normalizes_theta() {
        let r = clock_shift_rep(&theta(8, 6)).unwrap();
        assert_eq!(r.theta(), &theta(1, 3));
        assert_eq!(r.q(), 3);
    }

    #[test]
    fn trace_values() {
        let r = clock_shift_rep(&theta(1, 3)).unwrap();
        assert!(canonical_trace_check(&r, [0, 0]) < 1e-12);
        assert!(canonical_trace_check(&r, [1, 0]) < 1e-9);
        let scalar = r.lambda([3, 0]).trace() / 3.0;
        assert!((scalar.norm() - 1.0).abs() < 1e-9);
        assert!(max_trace_residual(&r, 6) < 1e-9);
    }
}
