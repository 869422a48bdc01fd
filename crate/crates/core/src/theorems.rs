//! Decidable membership criteria for primes in `S(G)` and checkers for the
//! identities they rest on.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{ControlFlow, RangeInclusive};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactdet::{self, FastTheta};
use crate::group::{Assignment, CollapsePart, FiniteGroup};
use crate::primes;
use crate::search::{with_pool, BoxEnum, ORACLE_SAMPLE_PERIOD};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Member,
    Nonmember,
    OutsideScope,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Member => "member",
            Verdict::Nonmember => "nonmember",
            Verdict::OutsideScope => "outside-scope",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    /// `C_{p^n}`: `q^(p-1) = 1 mod p`.
    CyclicModP,
    /// `C_p x H`, `|G| = p^n`, `n >= 2`: `q^(p-1) = 1 mod p^n`.
    CpFactorModPn,
    /// `q = p` is never a determinant of a p-group.
    QEqualsP,
    NoTheoremApplies,
}

impl Criterion {
    pub fn as_str(self) -> &'static str {
        match self {
            Criterion::CyclicModP => "cyclic-mod-p",
            Criterion::CpFactorModPn => "cp-factor-mod-pn",
            Criterion::QEqualsP => "q-equals-p",
            Criterion::NoTheoremApplies => "no-theorem-applies",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub verdict: Verdict,
    pub criterion: Criterion,
    pub prime: u64,
    pub modulus: BigInt,
    /// `q^(p-1) mod modulus`.
    pub residue: BigInt,
}

impl Decision {
    pub fn is_member(&self) -> bool {
        self.verdict == Verdict::Member
    }

    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict.as_str(),
            "criterion": self.criterion.as_str(),
            "p": self.prime.to_string(),
            "modulus": self.modulus.to_string(),
            "residue": self.residue.to_string(),
        })
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({}, modulus {}, residue {})",
            self.verdict.as_str(),
            self.criterion.as_str(),
            self.modulus,
            self.residue
        )
    }
}

/// `(p, n)` with `|G| = p^n`, for an abelian p-group.
fn p_group_shape(group: &FiniteGroup) -> Result<(u64, u32)> {
    group.abelian_factors()?;
    let p = group
        .prime()
        .ok_or_else(|| Error::NotPGroup(group.to_string()))?;
    let mut order = group.order() as u64;
    let mut n = 0;
    while order > 1 {
        order /= p;
        n += 1;
    }
    Ok((p, n))
}

fn ensure_prime(q: u64) -> Result<()> {
    if primes::is_prime(q) {
        Ok(())
    } else {
        Err(Error::Composite(q.to_string()))
    }
}

/// Decides whether the prime `q` is a group determinant of the abelian
/// p-group `G`.
pub fn decide(group: &FiniteGroup, q: u64) -> Result<Decision> {
    let (p, n) = p_group_shape(group)?;
    ensure_prime(q)?;
    let factors = group.factors().expect("abelian");
    let cyclic = factors.iter().filter(|&&f| f > 1).count() <= 1;
    let has_cp = factors.iter().any(|&f| f as u64 == p);

    let p_big = BigInt::from(p);
    let (criterion, modulus) = if q == p {
        let m = if cyclic { p_big.clone() } else { p_big.pow(n) };
        (Criterion::QEqualsP, m)
    } else if cyclic {
        (Criterion::CyclicModP, p_big.clone())
    } else if has_cp {
        (Criterion::CpFactorModPn, p_big.pow(n))
    } else {
        (Criterion::NoTheoremApplies, p_big.pow(n))
    };
    let residue = BigInt::from(q).modpow(&BigInt::from(p - 1), &modulus);
    let verdict = match criterion {
        Criterion::NoTheoremApplies => Verdict::OutsideScope,
        _ if residue.is_one() => Verdict::Member,
        _ => Verdict::Nonmember,
    };
    Ok(Decision {
        verdict,
        criterion,
        prime: p,
        modulus,
        residue,
    })
}

/// Both sides of the congruence
/// `theta_G(a) = theta_H(collapse(a))^(p^l) mod p^(n-l+1)`, where factor
/// `factor` of `G` is `C_{p^l}` and `H` is the rest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cor5Sides {
    pub modulus: BigInt,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

pub fn cor5_sides(group: &FiniteGroup, factor: usize, a: &Assignment) -> Result<Cor5Sides> {
    let (p, n) = p_group_shape(group)?;
    let factors = group.factors().expect("abelian");
    let cp_l = *factors.get(factor).ok_or(Error::FactorOutOfRange {
        index: factor,
        count: factors.len(),
    })?;
    let mut l = 0;
    let mut rest = cp_l as u64;
    while rest > 1 {
        rest /= p;
        l += 1;
    }
    if l == 0 || n - l < 1 {
        return Err(Error::Shape(format!(
            "{group}: need a nontrivial factor C_(p^l) with n - l >= 1 (n = {n}, l = {l})"
        )));
    }
    let modulus = BigInt::from(p).pow(n - l + 1);
    let lhs = exactdet::theta(group, a)?.mod_floor(&modulus);
    let (sub, collapsed) = group.collapse(CollapsePart::Factor(factor), a)?;
    let base = exactdet::theta(&sub, &collapsed)?;
    let rhs = base.modpow(&BigInt::from(cp_l), &modulus);
    Ok(Cor5Sides { modulus, lhs, rhs })
}

/// Whether the congruence above holds; expected to be true on every input.
pub fn check_cor5(group: &FiniteGroup, factor: usize, a: &Assignment) -> Result<bool> {
    let sides = cor5_sides(group, factor, a)?;
    Ok(sides.lhs == sides.rhs)
}

/// `a^(p^(n-1)) - k p^n` for each `k` in the range; all lie in `S(G)`.
pub fn cor6_values(group: &FiniteGroup, a: &BigInt, ks: RangeInclusive<i64>) -> Result<Vec<BigInt>> {
    let (p, n) = p_group_shape(group)?;
    if !a.gcd(&BigInt::from(p)).is_one() {
        return Err(Error::NotCoprime {
            a: a.to_string(),
            p,
        });
    }
    let p_big = BigInt::from(p);
    let head = a.pow(p_big.pow(n - 1).try_into().map_err(|_| {
        Error::InvalidArgument(format!("exponent p^(n-1) too large for {group}"))
    })?);
    let step = p_big.pow(n);
    Ok(ks.map(|k| &head - &step * k).collect())
}

/// `2^(p-1) = 1 mod p^2`.
pub fn wieferich(p: u64) -> Result<bool> {
    ensure_prime(p)?;
    Ok(wieferich_unchecked(p))
}

fn wieferich_unchecked(p: u64) -> bool {
    let m = p as u128 * p as u128;
    if m > u64::MAX as u128 {
        return BigInt::from(2u32)
            .modpow(&BigInt::from(p - 1), &BigInt::from(m))
            .is_one();
    }
    // m < 2^64, so every product below stays under 2^128.
    let mut acc: u128 = 1;
    let mut base: u128 = 2 % m;
    let mut e = p - 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc == 1
}

/// Wieferich primes `<= limit`, increasing.
pub fn wieferich_scan(limit: u64, workers: usize) -> Result<Vec<u64>> {
    if limit < 2 {
        return Err(Error::InvalidArgument(format!("Wieferich scan limit must be >= 2, got {limit}")));
    }
    let candidates = primes::primes_up_to(limit);
    Ok(with_pool(workers, || {
        candidates
            .into_par_iter()
            .filter(|&p| wieferich_unchecked(p))
            .collect()
    }))
}

/// Points scanned when the box is too large to enumerate.
pub const THEOREM3_SAMPLE_POINTS: u64 = 1_000_000;
const THEOREM3_CHUNK: u64 = 1_000;
/// Largest radius scanned exhaustively.
pub const THEOREM3_EXHAUSTIVE_BOUND: u32 = 2;
const MAX_RECORDED_VIOLATIONS: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub assignment: Vec<i64>,
    pub value: BigInt,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem3Report {
    pub group: String,
    pub bound: u32,
    pub exhaustive: bool,
    pub seed: u64,
    pub scanned: u64,
    pub primes_found: Vec<u64>,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
}

impl Theorem3Report {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "group": self.group,
            "bound": self.bound,
            "strategy": if self.exhaustive { "exhaustive" } else { "sampled" },
            "seed": self.seed.to_string(),
            "scanned": self.scanned.to_string(),
            "primes_found": self.primes_found.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "violation_count": self.violation_count.to_string(),
            "violations": self.violations.iter().map(|v| json!({
                "assignment": v.assignment.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "value": v.value.to_string(),
                "reason": v.reason,
            })).collect::<Vec<_>>(),
            "note": "scans find primes and test them; they cannot prove nonmembership",
        })
    }
}

#[derive(Default)]
struct ChunkResult {
    first_prime_witness: BTreeMap<u64, Vec<i64>>,
    violation_count: u64,
    violations: Vec<Violation>,
}

struct Theorem3Scanner<'a> {
    fast: &'a FastTheta,
    prime_cache: HashMap<u64, bool>,
    out: ChunkResult,
}

impl Theorem3Scanner<'_> {
    fn visit(&mut self, ordinal: Option<u64>, point: &[i64]) -> Result<()> {
        if ordinal.is_some_and(|o| o % ORACLE_SAMPLE_PERIOD == 0) {
            self.fast.cross_check(point)?;
        }
        let (lin, quad) = match self.fast.frobenius(point) {
            Some((l, q)) => (BigInt::from(l), BigInt::from(q)),
            None => {
                let parts = crate::cyclo::frobenius_factors(self.fast.group(), &Assignment::from_i64s(point))?;
                (parts.linear_part, parts.quadratic_det)
            }
        };
        let value = &lin * &quad * &quad;
        if value.sign() != num_bigint::Sign::Plus {
            return Ok(());
        }
        let q = u64::try_from(&value).map_err(|_| Error::PrimalityRange {
            value: value.to_string(),
        })?;
        let prime = *self.prime_cache.entry(q).or_insert_with(|| primes::is_prime(q));
        if !prime {
            return Ok(());
        }
        self.out.first_prime_witness.entry(q).or_insert_with(|| point.to_vec());
        let mut reasons = Vec::new();
        if lin != value {
            reasons.push(format!("abelianized determinant {lin} differs from {value}"));
        }
        if quad != BigInt::one() && quad != -BigInt::one() {
            reasons.push(format!("degree-2 factor {quad} is not a unit"));
        }
        if !reasons.is_empty() {
            self.out.violation_count += 1;
            if self.out.violations.len() < MAX_RECORDED_VIOLATIONS {
                self.out.violations.push(Violation {
                    assignment: point.to_vec(),
                    value,
                    reason: reasons.join("; "),
                });
            }
        }
        Ok(())
    }
}

/// Scans `[-bound, bound]^8` on Q8 or D4 for prime determinants and checks
/// each one is `1 mod 4`, equals the abelianized determinant, and has a unit
/// degree-2 factor. Radii above [`THEOREM3_EXHAUSTIVE_BOUND`] are sampled
/// with `seed`.
pub fn check_theorem3(group: &FiniteGroup, bound: u32, seed: u64, workers: usize) -> Result<Theorem3Report> {
    if group.builtin_tag().is_none() {
        return Err(Error::Unsupported(format!("{group} (Theorem 3 checker needs Q8 or D4)")));
    }
    if bound < 1 {
        return Err(Error::InvalidArgument("bound must be at least 1".into()));
    }
    let fast = FastTheta::new(group);
    let exhaustive = bound <= THEOREM3_EXHAUSTIVE_BOUND;

    let run_chunk = |chunk: usize| -> Result<ChunkResult> {
        let mut scanner = Theorem3Scanner {
            fast: &fast,
            prime_cache: HashMap::new(),
            out: ChunkResult::default(),
        };
        if exhaustive {
            let enumeration = BoxEnum::new(8, bound);
            let mut failure = None;
            enumeration.visit_slice(chunk, |ordinal, point| match scanner.visit(Some(ordinal), point) {
                Ok(()) => ControlFlow::Continue(()),
                Err(e) => {
                    failure = Some(e);
                    ControlFlow::Break(())
                }
            });
            if let Some(e) = failure {
                return Err(e);
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk as u64);
            let b = bound as i64;
            let mut point = [0i64; 8];
            for i in 0..THEOREM3_CHUNK {
                point.iter_mut().for_each(|x| *x = rng.gen_range(-b..=b));
                let ordinal = chunk as u64 * THEOREM3_CHUNK + i;
                scanner.visit(Some(ordinal), &point)?;
            }
        }
        Ok(scanner.out)
    };

    let (chunks, scanned) = if exhaustive {
        let e = BoxEnum::new(8, bound);
        (e.slices(), e.slice_len() * e.slices() as u64)
    } else {
        ((THEOREM3_SAMPLE_POINTS / THEOREM3_CHUNK) as usize, THEOREM3_SAMPLE_POINTS)
    };
    let results: Vec<Result<ChunkResult>> =
        with_pool(workers, || (0..chunks).into_par_iter().map(run_chunk).collect());

    let mut first: BTreeMap<u64, Vec<i64>> = BTreeMap::new();
    let mut violation_count = 0;
    let mut violations = Vec::new();
    for r in results {
        let r = r?;
        for (q, w) in r.first_prime_witness {
            first.entry(q).or_insert(w);
        }
        violation_count += r.violation_count;
        for v in r.violations {
            if violations.len() < MAX_RECORDED_VIOLATIONS {
                violations.push(v);
            }
        }
    }
    let v4 = FiniteGroup::abelian(vec![2, 2]).expect("valid group");
    for (&q, w) in &first {
        if !decide(&v4, q)?.is_member() {
            violation_count += 1;
            if violations.len() < MAX_RECORDED_VIOLATIONS {
                violations.push(Violation {
                    assignment: w.clone(),
                    value: BigInt::from(q),
                    reason: format!("prime {q} is not a determinant of C2xC2 ({q} mod 4 = {})", q % 4),
                });
            }
        }
    }
    Ok(Theorem3Report {
        group: group.to_string(),
        bound,
        exhaustive,
        seed,
        scanned,
        primes_found: first.into_keys().collect(),
        violation_count,
        violations,
    })
}

/// Number of odd primes `p <= limit` where the Wieferich test and the
/// decider for `C_p x C_p` disagree about `2`.
pub fn wieferich_decider_disagreements(limit: u64) -> Result<Vec<u64>> {
    let mut bad = Vec::new();
    for p in primes::primes_up_to(limit).into_iter().filter(|&p| p > 2) {
        let grp = FiniteGroup::abelian(vec![p as usize, p as usize])?;
        if wieferich(p)? != decide(&grp, 2)?.is_member() {
            bad.push(p);
        }
    }
    Ok(bad)
}
