//! Recovering a skew triple from fiberwise trace pairings.
//!
//! An oracle exposes only the rank `m` of the Glimm torus, the rank `n` of the
//! unitary image in K₁, and the pairing `f_{b₁∧b₂}(χ) = τ_χ(b₁ ∪ b₂) ∈ R/Z`.
//! The k-th coordinate of `ω(eᵢ ∧ eⱼ)` is the winding number of
//! `t ↦ f_{eᵢ∧eⱼ}(t·eₖ)` around the k-th generator loop of the torus.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cohomology::{cocycle_from_form, is_centrally_nondegenerate, triples_equivalent, BilinearCocycle, EquivalenceVerdict};
use crate::error::{Error, Result};
use crate::group::{canonical_triple, radical_basis, SkewTriple};
use crate::linalg::{random_unimodular, IntMatrix, SkewIntMatrix};
use crate::nc_torus::{frac, Character};

/// A point of `R/Z`, exact or floating.
#[derive(Debug, Clone, PartialEq)]
pub enum Phase {
    Exact(BigRational),
    Approx(f64),
}

impl Phase {
    pub fn to_f64(&self) -> f64 {
        match self {
            Phase::Exact(x) => x.to_f64().unwrap_or(f64::NAN),
            Phase::Approx(x) => *x,
        }
    }
}

/// The data a bundle of noncommutative tori exposes to reconstruction.
/// Implementations must be safe to call concurrently.
pub trait BundleOracle: Sync {
    /// Rank of `π₁` of the Glimm space.
    fn glimm_dim(&self) -> usize;
    /// Rank of the image of the unitary group in K₁ of the base fiber.
    fn unit_rank(&self) -> usize;
    /// `τ_χ(b₁ ∪ b₂)` in `[0, 1)`.
    fn pairing(&self, b1: &[BigInt], b2: &[BigInt], chi: &Character) -> Phase;
}

/// Deterministic ±ε perturbation, antisymmetric in `(b₁, b₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Noise {
    pub amplitude: BigRational,
    pub seed: u64,
}

/// The oracle of the group `A ⋊_σ B`, optionally hiding its bases and cocycle
/// representative and optionally adding seeded noise.
#[derive(Debug, Clone)]
pub struct TripleOracle {
    m: usize,
    n: usize,
    cocycle: BilinearCocycle,
    noise: Option<(f64, u64)>,
}

impl TripleOracle {
    /// The triple actually used to answer queries (after any scrambling).
    pub fn hidden_form(&self) -> SkewTriple {
        crate::cohomology::skew_symmetrize(&self.cocycle)
    }
}

fn scramble_steps(dim: usize) -> usize {
    dim + 2
}

fn seeded_unimodular(dim: usize, seed: u64) -> IntMatrix {
    if dim == 0 {
        IntMatrix::identity(0)
    } else {
        random_unimodular(dim, seed, scramble_steps(dim))
    }
}

/// Builds the oracle of `t`. With `scramble_seed`, the bases of `A` and `B`
/// are replaced by seeded unimodular images and the cocycle is shifted by a
/// random symmetric (coboundary) part. With `noise`, every pairing is
/// perturbed by `±amplitude`, which must be below `1/8`.
pub fn oracle_from_triple(t: &SkewTriple, scramble_seed: Option<u64>, noise: Option<Noise>) -> Result<TripleOracle> {
    let noise = match noise {
        Some(nz) => {
            if nz.amplitude.is_negative() || nz.amplitude >= BigRational::new(BigInt::one(), BigInt::from(8)) {
                return Err(Error::NoiseTooLarge(nz.amplitude.to_string()));
            }
            Some((nz.amplitude.to_f64().unwrap_or(0.0), nz.seed))
        }
        None => None,
    };
    let cocycle = match scramble_seed {
        None => cocycle_from_form(t),
        Some(seed) => {
            let p = seeded_unimodular(t.m(), seed.wrapping_mul(2));
            let q = seeded_unimodular(t.n(), seed.wrapping_mul(2).wrapping_add(1));
            let hidden = t.act(&p, &q);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_c0b0);
            let shift: Vec<IntMatrix> = (0..t.m())
                .map(|_| {
                    let mut s = IntMatrix::zeros(t.n(), t.n());
                    for i in 0..t.n() {
                        for j in i..t.n() {
                            let x = BigInt::from(rng.random_range(-3i64..=3));
                            s[(i, j)] = x.clone();
                            s[(j, i)] = x;
                        }
                    }
                    s
                })
                .collect();
            cocycle_from_form(&hidden).shifted(&shift)?
        }
    };
    Ok(TripleOracle {
        m: t.m(),
        n: t.n(),
        cocycle,
        noise,
    })
}

fn mix(mut h: u64, x: u64) -> u64 {
    // splitmix64 finaliser over a running state
    h ^= x.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(h << 6).wrapping_add(h >> 2);
    h = (h ^ (h >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    h = (h ^ (h >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    h ^ (h >> 31)
}

fn mix_bigint(h: u64, x: &BigInt) -> u64 {
    x.to_signed_bytes_le()
        .chunks(8)
        .fold(mix(h, 0xb16), |acc, c| {
            let mut w = [0u8; 8];
            w[..c.len()].copy_from_slice(c);
            mix(acc, u64::from_le_bytes(w))
        })
}

fn noise_sign(seed: u64, b1: &[BigInt], b2: &[BigInt], chi: &Character) -> f64 {
    let mut h = mix(seed, b1.len() as u64);
    for x in b1.iter().chain(b2) {
        h = mix_bigint(h, x);
    }
    for c in chi.coords() {
        h = mix_bigint(h, c.numer());
        h = mix_bigint(h, c.denom());
    }
    if h & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl BundleOracle for TripleOracle {
    fn glimm_dim(&self) -> usize {
        self.m
    }

    fn unit_rank(&self) -> usize {
        self.n
    }

    fn pairing(&self, b1: &[BigInt], b2: &[BigInt], chi: &Character) -> Phase {
        let s12 = self.cocycle.eval(b1, b2).expect("oracle query dimension");
        let s21 = self.cocycle.eval(b2, b1).expect("oracle query dimension");
        let diff: Vec<BigInt> = s12.iter().zip(&s21).map(|(a, b)| a - b).collect();
        let exact = chi.evaluate(&diff);
        let Some((eps, seed)) = self.noise else {
            return Phase::Exact(exact);
        };
        let offset = match b1.cmp(b2) {
            std::cmp::Ordering::Equal => 0.0,
            std::cmp::Ordering::Less => eps * noise_sign(seed, b1, b2, chi),
            std::cmp::Ordering::Greater => -eps * noise_sign(seed, b2, b1, chi),
        };
        Phase::Approx((exact.to_f64().unwrap_or(0.0) + offset).rem_euclid(1.0))
    }
}

/// Integer winding of a sampled closed loop in `R/Z`.
#[derive(Debug, Clone, PartialEq)]
pub struct Winding {
    pub turns: BigInt,
    /// Distance of the summed increments from the nearest integer (0 in exact mode).
    pub residual: f64,
    /// Largest lifted increment magnitude.
    pub max_step: f64,
}

fn unstable(reason: impl Into<String>) -> Error {
    Error::WindingUnstable {
        location: None,
        reason: reason.into(),
    }
}

/// Sums the increments between consecutive samples, each lifted to
/// `(−1/2, 1/2)`. An increment of exactly one half is ambiguous and rejected.
/// Exact samples must close up to an integer; float samples must land within
/// `tol` of one.
pub fn winding_number(samples: &[Phase], tol: f64) -> Result<Winding> {
    let exact: Option<Vec<&BigRational>> = samples
        .iter()
        .map(|s| match s {
            Phase::Exact(x) => Some(x),
            Phase::Approx(_) => None,
        })
        .collect();
    match exact {
        Some(xs) => {
            let half = BigRational::new(BigInt::one(), BigInt::from(2));
            let mut total = BigRational::zero();
            let mut max_step = BigRational::zero();
            for w in xs.windows(2) {
                let mut d = frac(&(w[1] - w[0]));
                if d == half {
                    return Err(unstable("increment of exactly 1/2 is ambiguous"));
                }
                if d > half {
                    d -= BigRational::one();
                }
                max_step = max_step.max(d.abs());
                total += d;
            }
            if !total.is_integer() {
                return Err(unstable(format!("exact samples do not close: total {total}")));
            }
            Ok(Winding {
                turns: total.to_integer(),
                residual: 0.0,
                max_step: max_step.to_f64().unwrap_or(f64::NAN),
            })
        }
        None => {
            let mut total = 0.0;
            let mut max_step: f64 = 0.0;
            for w in samples.windows(2) {
                let mut d = (w[1].to_f64() - w[0].to_f64()).rem_euclid(1.0);
                if d > 0.5 {
                    d -= 1.0;
                }
                max_step = max_step.max(d.abs());
                total += d;
            }
            let rounded = total.round();
            let residual = (total - rounded).abs();
            if residual.is_nan() || residual > tol {
                return Err(unstable(format!("residual {residual:e} exceeds tolerance {tol:e}")));
            }
            Ok(Winding {
                turns: BigInt::from(rounded as i64),
                residual,
                max_step,
            })
        }
    }
}

/// A loop around the k-th generator of the Glimm torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoopShape {
    pub reverse: bool,
    pub repeats: u32,
}

impl Default for LoopShape {
    fn default() -> Self {
        LoopShape {
            reverse: false,
            repeats: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RecoveryConfig {
    /// Float-mode tolerance on the distance to the nearest integer.
    pub tol: f64,
    /// Cap on samples per traversal.
    pub max_samples: usize,
    /// Base point of the loops; `None` means the trivial character.
    pub base: Option<Character>,
}

impl Default for RecoveryConfig {
    fn default() -> Self {
        RecoveryConfig {
            tol: 1e-6,
            max_samples: 1 << 20,
            base: None,
        }
    }
}

pub const INITIAL_SAMPLES: usize = 16;
/// Consecutive agreeing rounds required before a winding is accepted.
pub const AGREEING_ROUNDS: usize = 3;

/// Per-entry record of the adaptive sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct EntryDiagnostic {
    pub k: usize,
    pub i: usize,
    pub j: usize,
    pub value: BigInt,
    /// Samples per traversal in the accepted round.
    pub samples: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveredData {
    pub form: SkewTriple,
    pub diagnostics: Vec<EntryDiagnostic>,
}

impl RecoveredData {
    pub fn max_residual(&self) -> f64 {
        self.diagnostics.iter().map(|d| d.residual).fold(0.0, f64::max)
    }
}

fn unit(n: usize, i: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    v[i] = BigInt::one();
    v
}

fn sample_loop<O: BundleOracle + ?Sized>(
    oracle: &O,
    (k, i, j): (usize, usize, usize),
    base: &Character,
    lp: LoopShape,
    per_turn: usize,
) -> Vec<Phase> {
    let n = oracle.unit_rank();
    let (ei, ej) = (unit(n, i), unit(n, j));
    // `per_turn` distinct points, so `per_turn − 1` intervals per traversal
    let intervals = per_turn - 1;
    let total = intervals * lp.repeats as usize;
    let denom = BigInt::from(intervals);
    (0..=total)
        .map(|s| {
            let mut step = BigRational::new(BigInt::from(s), denom.clone());
            if lp.reverse {
                step = -step;
            }
            let mut coords = base.coords().to_vec();
            coords[k] += step;
            oracle.pairing(&ei, &ej, &Character::new(coords))
        })
        .collect()
}

/// Winding of `f_{eᵢ∧eⱼ}` along the given loop around generator `k`, doubling
/// the sampling density from 16 points per traversal until consecutive rounds
/// agree. A round with `N` points sees the winding only modulo `N − 1`, so
/// agreement of the rounds with 15, 31 and 63 intervals fixes it modulo 9765.
pub fn loop_winding<O: BundleOracle + ?Sized>(
    oracle: &O,
    (k, i, j): (usize, usize, usize),
    lp: LoopShape,
    cfg: &RecoveryConfig,
) -> Result<EntryDiagnostic> {
    let m = oracle.glimm_dim();
    let base = cfg.base.clone().unwrap_or_else(|| Character::trivial(m));
    if base.dim() != m {
        return Err(Error::dims(format!("base point has {} coordinates but m = {m}", base.dim())));
    }
    if lp.repeats == 0 {
        return Err(Error::InvalidArgument("loop must be traversed at least once".into()));
    }
    let locate = |e: Error| match e {
        Error::WindingUnstable { reason, .. } => Error::WindingUnstable {
            location: Some((k, i, j)),
            reason,
        },
        other => other,
    };
    let mut per_turn = INITIAL_SAMPLES;
    let mut streak: Option<(BigInt, usize)> = None;
    let mut last_err = None;
    while per_turn <= cfg.max_samples {
        let samples = sample_loop(oracle, (k, i, j), &base, lp, per_turn);
        match winding_number(&samples, cfg.tol) {
            Ok(w) => {
                let run = match &streak {
                    Some((v, c)) if *v == w.turns => c + 1,
                    _ => 1,
                };
                if run == AGREEING_ROUNDS {
                    return Ok(EntryDiagnostic {
                        k,
                        i,
                        j,
                        value: w.turns,
                        samples: per_turn,
                        residual: w.residual,
                    });
                }
                streak = Some((w.turns, run));
            }
            Err(e) => {
                streak = None;
                last_err = Some(e);
            }
        }
        per_turn *= 2;
    }
    Err(locate(last_err.unwrap_or_else(|| {
        unstable(format!("no {AGREEING_ROUNDS} consecutive rounds agreed within {} samples", cfg.max_samples))
    })))
}

/// Rebuilds `ω` entry by entry from winding numbers along the generator loops.
pub fn recover_form<O: BundleOracle + ?Sized>(oracle: &O, cfg: &RecoveryConfig) -> Result<RecoveredData> {
    let (m, n) = (oracle.glimm_dim(), oracle.unit_rank());
    let tasks: Vec<(usize, usize, usize)> = (0..m)
        .flat_map(|k| (0..n).flat_map(move |i| (i + 1..n).map(move |j| (k, i, j))))
        .collect();
    let diagnostics = tasks
        .par_iter()
        .map(|&task| loop_winding(oracle, task, LoopShape::default(), cfg))
        .collect::<Result<Vec<_>>>()?;
    let mut mats = vec![IntMatrix::zeros(n, n); m];
    for d in &diagnostics {
        mats[d.k][(d.i, d.j)] = d.value.clone();
        mats[d.k][(d.j, d.i)] = -&d.value;
    }
    let forms = mats
        .into_iter()
        .map(|x| SkewIntMatrix::new(x).expect("filled antisymmetrically"))
        .collect();
    Ok(RecoveredData {
        form: SkewTriple::new(n, forms)?,
        diagnostics,
    })
}

#[derive(Debug, Clone)]
pub struct RoundTrip {
    pub recovered: RecoveredData,
    pub canonical: SkewTriple,
    pub verdict: EquivalenceVerdict,
}

/// Hides `t` behind a scrambled oracle, recovers a triple from it and decides
/// equivalence with `canonical_triple(t)`. The verdict's witness maps the
/// recovered triple onto the canonical one.
pub fn roundtrip_check(t: &SkewTriple, scramble_seed: Option<u64>, budget: usize) -> Result<RoundTrip> {
    if !is_centrally_nondegenerate(t) {
        return Err(Error::Degenerate(radical_basis(t).rank()));
    }
    let oracle = oracle_from_triple(t, scramble_seed, None)?;
    let recovered = recover_form(&oracle, &RecoveryConfig::default())?;
    let canonical = canonical_triple(t);
    let verdict = triples_equivalent(&recovered.form, &canonical, budget);
    Ok(RoundTrip {
        recovered,
        canonical,
        verdict,
    })
}
