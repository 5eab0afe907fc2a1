//! The acceptance suite: eight seeded, self-contained checks, each producing a
//! one-line report. Shared by the `acceptance` test target and `twostep selftest`.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cohomology::{invariant_fingerprint, is_centrally_nondegenerate, triples_equivalent, verify_witness, EquivalenceVerdict};
use crate::group::{
    center_basis, commutator, inverse, is_central, is_fc_element, multiply, nilpotency_class, radical_basis,
    upper_central_series, GroupElement, SkewTriple,
};
use crate::linalg::{random_unimodular, skew_canonical_form, IntMatrix, SkewIntMatrix};
use crate::nc_torus::{clock_shift_rep, frac, k_ranks, max_trace_residual, trace_pairing, Character};
use crate::reconstruction::{oracle_from_triple, recover_form, roundtrip_check, Noise, RecoveryConfig};

pub const ROUNDTRIP_CASES: usize = 200;
pub const ROUNDTRIP_TIME_LIMIT: Duration = Duration::from_secs(60);
pub const ROUNDTRIP_BUDGET: usize = 3;
pub const RECOVERY_CASES: usize = 100;
pub const GROUP_LAW_CASES: usize = 10_000;
pub const SINGLE_FORM_CASES: usize = 1_000;
pub const CLOCK_SHIFT_MAX_Q: i64 = 12;
pub const CLOCK_SHIFT_TOL: f64 = 1e-9;
pub const CLOCK_SHIFT_TIME_LIMIT: Duration = Duration::from_secs(5);
pub const NOISE_CASES: usize = 50;
pub const NOISE_TOL: f64 = 1e-6;
pub const SCRAMBLE_CASES: usize = 1_000;
pub const K_RANK_MAX_N: usize = 10;
pub const ANTISYMMETRY_CASES: usize = 10_000;
pub const ENTRY_BOUND: i64 = 9;

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({:.2}s)", self.summary(), self.elapsed.as_secs_f64())
    }
}

impl CriterionReport {
    /// The report line without the timing, for byte-stable output.
    pub fn summary(&self) -> String {
        format!(
            "[{}] {} {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail
        )
    }
}

fn timed(id: u8, name: &'static str, body: impl FnOnce() -> (bool, String)) -> CriterionReport {
    let start = Instant::now();
    let (passed, detail) = body();
    CriterionReport {
        id,
        name,
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

/// A triple with every upper entry drawn uniformly from `[−bound, bound]`.
pub fn random_triple<R: Rng>(rng: &mut R, m: usize, n: usize, bound: i64) -> SkewTriple {
    let forms = (0..m)
        .map(|_| {
            let upper: Vec<BigInt> = (0..n * n.saturating_sub(1) / 2)
                .map(|_| BigInt::from(rng.random_range(-bound..=bound)))
                .collect();
            SkewIntMatrix::from_upper(n, &upper)
        })
        .collect();
    SkewTriple::new(n, forms).expect("consistent dimensions")
}

/// Rejection-samples a centrally non-degenerate triple with `n` drawn from
/// `sizes`. Sizes with no non-degenerate triple (odd `n` when `m = 1`) are skipped.
pub fn random_nondegenerate<R: Rng>(rng: &mut R, m: usize, sizes: &[usize], bound: i64) -> SkewTriple {
    let sizes: Vec<usize> = sizes.iter().copied().filter(|&n| !(m == 1 && n % 2 == 1)).collect();
    loop {
        let n = sizes[rng.random_range(0..sizes.len())];
        let t = random_triple(rng, m, n, bound);
        if is_centrally_nondegenerate(&t) {
            return t;
        }
    }
}

fn random_vec<R: Rng>(rng: &mut R, len: usize, bound: i64) -> Vec<BigInt> {
    (0..len).map(|_| BigInt::from(rng.random_range(-bound..=bound))).collect()
}

fn random_element<R: Rng>(rng: &mut R, t: &SkewTriple, bound: i64) -> GroupElement {
    GroupElement::new(random_vec(rng, t.m(), bound), random_vec(rng, t.n(), bound))
}

/// Half the time a central element (`b` in the radical), otherwise arbitrary.
fn random_mixed_element<R: Rng>(rng: &mut R, t: &SkewTriple, bound: i64) -> GroupElement {
    if rng.random_bool(0.5) {
        return random_element(rng, t, bound);
    }
    let rad = radical_basis(t);
    let mut b = vec![BigInt::zero(); t.n()];
    for c in 0..rad.rank() {
        let k = BigInt::from(rng.random_range(-3i64..=3));
        for (i, bi) in b.iter_mut().enumerate() {
            *bi += &k * &rad.basis()[(i, c)];
        }
    }
    GroupElement::new(random_vec(rng, t.m(), bound), b)
}

fn scramble_pair(t: &SkewTriple, seed: u64) -> (IntMatrix, IntMatrix) {
    let unimod = |d: usize, s: u64| if d == 0 { IntMatrix::identity(0) } else { random_unimodular(d, s, 2 * d + 4) };
    (unimod(t.m(), seed.wrapping_mul(3)), unimod(t.n(), seed.wrapping_mul(3).wrapping_add(1)))
}

pub fn roundtrip_superrigidity() -> CriterionReport {
    timed(1, "round-trip superrigidity", || {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        let start = Instant::now();
        let (mut certified, mut fingerprint_only, mut failures) = (0usize, 0usize, Vec::new());
        for case in 0..ROUNDTRIP_CASES {
            let m = 1 + case % 2;
            let t = random_nondegenerate(&mut rng, m, &[2, 3, 4], ENTRY_BOUND);
            let rt = match roundtrip_check(&t, Some(1000 + case as u64), ROUNDTRIP_BUDGET) {
                Ok(rt) => rt,
                Err(e) => {
                    failures.push(format!("case {case}: {e}"));
                    continue;
                }
            };
            match &rt.verdict {
                EquivalenceVerdict::Equivalent { phi_a, phi_b }
                    if verify_witness(&rt.recovered.form, &rt.canonical, phi_a, phi_b) =>
                {
                    certified += 1
                }
                _ if m == 2
                    && invariant_fingerprint(&rt.recovered.form) == invariant_fingerprint(&rt.canonical) =>
                {
                    fingerprint_only += 1
                }
                v => failures.push(format!("case {case} (m = {m}): {}", v.tag())),
            }
        }
        let elapsed = start.elapsed();
        let ok = failures.is_empty() && elapsed < ROUNDTRIP_TIME_LIMIT;
        let mut detail = format!(
            "{certified} certified witnesses, {fingerprint_only} fingerprint matches (m = 2) of {ROUNDTRIP_CASES}"
        );
        if let Some(f) = failures.first() {
            detail.push_str(&format!("; {} failures, first: {f}", failures.len()));
        }
        if elapsed >= ROUNDTRIP_TIME_LIMIT {
            detail.push_str(&format!("; over time limit {ROUNDTRIP_TIME_LIMIT:?}"));
        }
        (ok, detail)
    })
}

pub fn exact_recovery() -> CriterionReport {
    timed(2, "exact unscrambled recovery", || {
        let mut rng = ChaCha8Rng::seed_from_u64(202);
        let mut failures = Vec::new();
        for case in 0..RECOVERY_CASES {
            let m = 1 + case % 3;
            let t = random_nondegenerate(&mut rng, m, &[2, 3, 4], ENTRY_BOUND);
            let oracle = oracle_from_triple(&t, None, None).expect("noiseless oracle");
            match recover_form(&oracle, &RecoveryConfig::default()) {
                Ok(r) if r.form == t && r.max_residual() == 0.0 => {}
                Ok(r) => failures.push(format!("case {case}: recovered {:?}", r.form)),
                Err(e) => failures.push(format!("case {case}: {e}")),
            }
        }
        let detail = match failures.first() {
            None => format!("{RECOVERY_CASES}/{RECOVERY_CASES} exact, zero residual"),
            Some(f) => format!("{} failures, first: {f}", failures.len()),
        };
        (failures.is_empty(), detail)
    })
}

pub fn group_laws() -> CriterionReport {
    timed(3, "group-law suite", || {
        let mut rng = ChaCha8Rng::seed_from_u64(303);
        let mut failures: Vec<String> = Vec::new();
        let mut central_seen = 0usize;
        for case in 0..GROUP_LAW_CASES {
            let (m, n) = (rng.random_range(0..=3usize), rng.random_range(0..=4usize));
            let t = random_triple(&mut rng, m, n, ENTRY_BOUND);
            let x = random_mixed_element(&mut rng, &t, ENTRY_BOUND);
            let y = random_element(&mut rng, &t, ENTRY_BOUND);
            let z = random_element(&mut rng, &t, ENTRY_BOUND);
            let mul = |p: &GroupElement, q: &GroupElement| multiply(&t, p, q).expect("dims");
            let inv = |p: &GroupElement| inverse(&t, p).expect("dims");
            let e = GroupElement::identity(&t);
            let comm = commutator(&t, &x, &y).expect("dims");
            let central = is_central(&t, &x).expect("dims");
            central_seen += usize::from(central);
            let checks = [
                ("associativity", mul(&mul(&x, &y), &z) == mul(&x, &mul(&y, &z))),
                ("identity", mul(&x, &e) == x && mul(&e, &x) == x),
                ("inverse", mul(&x, &inv(&x)).is_identity() && mul(&inv(&x), &x).is_identity()),
                ("commutator", comm == mul(&mul(&x, &y), &mul(&inv(&x), &inv(&y)))),
                ("derived in center", is_central(&t, &comm).expect("dims")),
                ("fc centre", is_fc_element(&t, &x).expect("dims") == central),
                ("center commutes", !central || mul(&x, &y) == mul(&y, &x)),
            ];
            for (name, ok) in checks {
                if !ok {
                    failures.push(format!("case {case}: {name}"));
                }
            }
        }
        let detail = match failures.first() {
            None => format!("{GROUP_LAW_CASES} cases, 7 identities each ({central_seen} central samples)"),
            Some(f) => format!("{} failures, first: {f}", failures.len()),
        };
        (failures.is_empty(), detail)
    })
}

pub fn heisenberg_goldens() -> CriterionReport {
    timed(4, "Heisenberg fixture", || {
        let h = SkewTriple::heisenberg();
        let comm = commutator(&h, &GroupElement::from_i64(&[0], &[1, 0]), &GroupElement::from_i64(&[0], &[0, 1]));
        let divisors = skew_canonical_form(&h.forms()[0]).divisors;
        let checks = [
            ("class 2", nilpotency_class(&h) == 2),
            ("center rank 1", center_basis(&h).rank() == 1),
            ("ucs (1, 2)", upper_central_series(&h) == vec![1, 2]),
            ("divisors (1)", divisors == vec![BigInt::one()]),
            ("commutator (1;0,0)", comm.ok() == Some(GroupElement::from_i64(&[1], &[0, 0]))),
        ];
        let bad: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
        let detail = if bad.is_empty() {
            "class 2, center rank 1, ucs (1, 2), divisors (1), [(0;1,0),(0;0,1)] = (1;0,0)".to_string()
        } else {
            format!("mismatched: {}", bad.join(", "))
        };
        (bad.is_empty(), detail)
    })
}

pub fn single_form_completeness() -> CriterionReport {
    timed(5, "m = 1 classification completeness", || {
        let mut rng = ChaCha8Rng::seed_from_u64(505);
        let (mut equivalent, mut distinguished, mut unknown) = (0usize, 0usize, 0usize);
        let mut failures = Vec::new();
        for case in 0..SINGLE_FORM_CASES {
            let n = rng.random_range(1..=6usize);
            let t = random_triple(&mut rng, 1, n, ENTRY_BOUND);
            let (_, q) = scramble_pair(&t, 5000 + case as u64);
            let sign = IntMatrix::from_rows(&[[if rng.random_bool(0.5) { 1i64 } else { -1 }]]);
            let scrambled = t.act(&sign, &q);
            match triples_equivalent(&t, &scrambled, 1) {
                EquivalenceVerdict::Equivalent { .. } => equivalent += 1,
                EquivalenceVerdict::Unknown => unknown += 1,
                v => failures.push(format!("scramble {case}: {}", v.tag())),
            }
            let other = random_triple(&mut rng, 1, n, ENTRY_BOUND);
            let same = skew_canonical_form(&t.forms()[0]).divisors == skew_canonical_form(&other.forms()[0]).divisors;
            match (same, triples_equivalent(&t, &other, 1)) {
                (false, EquivalenceVerdict::NotEquivalent { .. }) => distinguished += 1,
                (true, EquivalenceVerdict::Equivalent { .. }) => equivalent += 1,
                (_, EquivalenceVerdict::Unknown) => unknown += 1,
                (_, v) => failures.push(format!("pair {case}: {} with same divisors = {same}", v.tag())),
            }
        }
        let mut detail = format!("{equivalent} Equivalent, {distinguished} NotEquivalent, {unknown} Unknown");
        if let Some(f) = failures.first() {
            detail.push_str(&format!("; {} failures, first: {f}", failures.len()));
        }
        (failures.is_empty() && unknown == 0, detail)
    })
}

pub fn clock_shift_numerics() -> CriterionReport {
    timed(6, "clock-shift numerics", || {
        let start = Instant::now();
        let (mut worst_comm, mut worst_trace, mut count) = (0.0f64, 0.0f64, 0usize);
        for q in 1..=CLOCK_SHIFT_MAX_Q {
            for p in 0..q {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                let rep = clock_shift_rep(&BigRational::new(p.into(), q.into())).expect("small denominator");
                worst_comm = worst_comm.max(rep.commutation_residual()).max(rep.group_commutator_residual());
                worst_trace = worst_trace.max(max_trace_residual(&rep, 2 * q));
                count += 1;
            }
        }
        let elapsed = start.elapsed();
        let ok = worst_comm < CLOCK_SHIFT_TOL && worst_trace < CLOCK_SHIFT_TOL && elapsed < CLOCK_SHIFT_TIME_LIMIT;
        let mut detail = format!(
            "{count} values of θ, max commutator residual {worst_comm:.1e}, max trace residual {worst_trace:.1e} (tol {CLOCK_SHIFT_TOL:e}, limit {CLOCK_SHIFT_TIME_LIMIT:?})"
        );
        if elapsed >= CLOCK_SHIFT_TIME_LIMIT {
            detail.push_str("; over time limit");
        }
        (ok, detail)
    })
}

pub fn winding_robustness() -> CriterionReport {
    timed(7, "winding robustness under noise 1/16", || {
        let mut rng = ChaCha8Rng::seed_from_u64(707);
        let cfg = RecoveryConfig {
            tol: NOISE_TOL,
            ..RecoveryConfig::default()
        };
        let mut failures = Vec::new();
        let mut max_residual = 0.0f64;
        for case in 0..NOISE_CASES {
            let (m, n) = (rng.random_range(1..=2usize), rng.random_range(2..=4usize));
            let mut t = random_triple(&mut rng, m, n, ENTRY_BOUND);
            // pin one extreme entry so every case exercises the full range
            let mut forms: Vec<IntMatrix> = t.forms().iter().map(|f| f.matrix().clone()).collect();
            let extreme = if case % 2 == 0 { ENTRY_BOUND } else { -ENTRY_BOUND };
            forms[0][(0, 1)] = BigInt::from(extreme);
            forms[0][(1, 0)] = BigInt::from(-extreme);
            t = SkewTriple::new(n, forms.into_iter().map(|f| SkewIntMatrix::new(f).expect("skew")).collect())
                .expect("dims");
            let noise = Noise {
                amplitude: BigRational::new(1.into(), 16.into()),
                seed: 7000 + case as u64,
            };
            let oracle = oracle_from_triple(&t, None, Some(noise)).expect("noise below bound");
            match recover_form(&oracle, &cfg) {
                Ok(r) if r.form == t => max_residual = max_residual.max(r.max_residual()),
                Ok(_) => failures.push(format!("case {case}: wrong integers")),
                Err(e) => failures.push(format!("case {case}: {e}")),
            }
        }
        let detail = match failures.first() {
            None => format!("{NOISE_CASES}/{NOISE_CASES} exact, max residual {max_residual:.1e}"),
            Some(f) => format!("{} failures, first: {f}", failures.len()),
        };
        (failures.is_empty(), detail)
    })
}

pub fn invariance() -> CriterionReport {
    timed(8, "invariance suite", || {
        let mut rng = ChaCha8Rng::seed_from_u64(808);
        let mut failures = Vec::new();
        for case in 0..SCRAMBLE_CASES {
            let (m, n) = (rng.random_range(1..=2usize), rng.random_range(1..=5usize));
            let t = random_triple(&mut rng, m, n, ENTRY_BOUND);
            let (p, q) = scramble_pair(&t, 8000 + case as u64);
            let s = t.act(&p, &q);
            if invariant_fingerprint(&s) != invariant_fingerprint(&t) {
                failures.push(format!("fingerprint {case}"));
            }
            for f in t.forms() {
                if skew_canonical_form(&f.congruence(&q)).divisors != skew_canonical_form(f).divisors {
                    failures.push(format!("divisors {case}"));
                }
            }
        }
        for n in 0..=K_RANK_MAX_N {
            let (even, odd) = k_ranks(n);
            if even + odd != 1u128 << n {
                failures.push(format!("k_ranks({n})"));
            }
        }
        for case in 0..ANTISYMMETRY_CASES {
            let (m, n) = (rng.random_range(1..=3usize), rng.random_range(1..=4usize));
            let t = random_triple(&mut rng, m, n, ENTRY_BOUND);
            let chi = Character::new(
                (0..m)
                    .map(|_| BigRational::new(rng.random_range(-30i64..=30).into(), rng.random_range(1i64..=12).into()))
                    .collect(),
            );
            let (b1, b2) = (random_vec(&mut rng, n, ENTRY_BOUND), random_vec(&mut rng, n, ENTRY_BOUND));
            let s = trace_pairing(&t, &chi, &b1, &b2).expect("dims") + trace_pairing(&t, &chi, &b2, &b1).expect("dims");
            if !frac(&s).is_zero() {
                failures.push(format!("antisymmetry {case}"));
            }
        }
        let detail = match failures.first() {
            None => format!(
                "{SCRAMBLE_CASES} scrambles, k_ranks n <= {K_RANK_MAX_N}, {ANTISYMMETRY_CASES} antisymmetry checks"
            ),
            Some(f) => format!("{} failures, first: {f}", failures.len()),
        };
        (failures.is_empty(), detail)
    })
}

/// Runs one criterion by number (1 to 8).
pub fn run_criterion(id: u8) -> Option<CriterionReport> {
    Some(match id {
        1 => roundtrip_superrigidity(),
        2 => exact_recovery(),
        3 => group_laws(),
        4 => heisenberg_goldens(),
        5 => single_form_completeness(),
        6 => clock_shift_numerics(),
        7 => winding_robustness(),
        8 => invariance(),
        _ => return None,
    })
}

pub fn run_all() -> Vec<CriterionReport> {
    (1..=8).filter_map(run_criterion).collect()
}
