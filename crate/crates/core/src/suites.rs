//! Named verification suites. Each one runs a family of exact checks and
//! returns a JSON report; the report depends only on the seed, never on the
//! worker count.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cyclo;
use crate::error::{Error, Result};
use crate::exactdet::{convolve, theta};
use crate::group::{Assignment, FiniteGroup};
use crate::primes;
use crate::search::{find_witness, scan_values, SearchConfig};
use crate::theorems;

/// Abelian groups of order at most 16 covered by the randomized suites.
pub const ABELIAN_GROUPS: [&str; 12] = [
    "C2", "C4", "C8", "C16", "C2xC2", "C4xC2", "C2xC2xC2", "C3", "C9", "C3xC3", "C4xC4", "C6",
];

/// `(group, factor index, l)` shapes for the congruence suite.
pub const COR5_SHAPES: [(&str, usize, u32); 6] = [
    ("C2xC2", 0, 1),
    ("C4xC2", 1, 1),
    ("C4xC2", 0, 2),
    ("C2xC2xC2", 0, 1),
    ("C3xC3", 0, 1),
    ("C9xC3", 1, 1),
];

pub const SAMPLES: usize = 100;
pub const FROBENIUS_SAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Dedekind,
    Theorem1,
    Cor5,
    AlphaBeta,
    Wieferich,
    Theorem3,
    Frobenius,
    Monoid,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Dedekind,
        Suite::Theorem1,
        Suite::Cor5,
        Suite::AlphaBeta,
        Suite::Wieferich,
        Suite::Theorem3,
        Suite::Frobenius,
        Suite::Monoid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Dedekind => "dedekind",
            Suite::Theorem1 => "theorem1",
            Suite::Cor5 => "cor5",
            Suite::AlphaBeta => "alphabeta",
            Suite::Wieferich => "wieferich",
            Suite::Theorem3 => "theorem3",
            Suite::Frobenius => "frobenius",
            Suite::Monoid => "monoid",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub seed: u64,
    pub workers: usize,
    /// Groups for the Theorem 3 suite; Q8 and D4 when empty.
    pub theorem3_groups: Vec<FiniteGroup>,
    pub theorem3_bound: u32,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0,
            workers: 1,
            theorem3_groups: Vec::new(),
            theorem3_bound: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.name(),
            "seed": self.seed.to_string(),
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "passed": c.passed,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
        })
    }
}

fn group(spec: &str) -> FiniteGroup {
    spec.parse().expect("built-in suite group")
}

/// Seeded generator for one named stream inside a suite.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn random_assignment(rng: &mut ChaCha8Rng, len: usize, bound: i64) -> Assignment {
    let v: Vec<i64> = (0..len).map(|_| rng.gen_range(-bound..=bound)).collect();
    Assignment::from_i64s(&v)
}

fn strings<T: ToString>(items: impl IntoIterator<Item = T>) -> Vec<String> {
    items.into_iter().map(|x| x.to_string()).collect()
}

pub fn run(suite: Suite, opts: &SuiteOptions) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::Dedekind => dedekind(opts)?,
        Suite::Theorem1 => theorem1(opts)?,
        Suite::Cor5 => cor5(opts)?,
        Suite::AlphaBeta => alphabeta(opts)?,
        Suite::Wieferich => wieferich(opts)?,
        Suite::Theorem3 => theorem3(opts)?,
        Suite::Frobenius => frobenius(opts)?,
        Suite::Monoid => monoid(opts)?,
    };
    Ok(SuiteReport {
        suite,
        seed: opts.seed,
        checks,
    })
}

fn dedekind(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (i, spec) in ABELIAN_GROUPS.iter().enumerate() {
        let grp = group(spec);
        let mut rng = rng_for(opts.seed, i as u64);
        let mut mismatches = Vec::new();
        for _ in 0..SAMPLES {
            let a = random_assignment(&mut rng, grp.order(), 5);
            let via_chars = cyclo::dedekind_theta(&grp, &a)?;
            let direct = theta(&grp, &a)?;
            if via_chars != direct {
                mismatches.push(json!({
                    "assignment": strings(a.values()),
                    "dedekind": via_chars.to_string(),
                    "theta": direct.to_string(),
                }));
            }
        }
        checks.push(Check {
            name: format!("dedekind == theta on {spec}"),
            passed: mismatches.is_empty(),
            detail: json!({ "samples": SAMPLES, "mismatches": mismatches }),
        });
    }
    Ok(checks)
}

/// Scans a box and checks every prime value against the decider.
fn decider_consistency(spec: &str, bound: u32, opts: &SuiteOptions) -> Result<(Check, Vec<BigInt>)> {
    let grp = group(spec);
    let cfg = SearchConfig::exhaustive(bound).with_workers(opts.workers);
    let scan = scan_values(&grp, &cfg)?;
    let mut primes_found = Vec::new();
    let mut nonmembers = Vec::new();
    for v in scan.values.keys() {
        if crate::search::is_prime_value(v)? {
            let q: u64 = v.try_into().expect("prime fits u64");
            if !theorems::decide(&grp, q)?.is_member() {
                nonmembers.push(q.to_string());
            }
            primes_found.push(v.clone());
        }
    }
    let check = Check {
        name: format!("every prime in the {spec} box of radius {bound} is decided member"),
        passed: nonmembers.is_empty(),
        detail: json!({
            "scanned": scan.scanned.to_string(),
            "distinct_values": scan.values.len(),
            "primes_found": strings(&primes_found),
            "decided_nonmember": nonmembers,
        }),
    };
    Ok((check, scan.value_set()))
}

fn theorem1(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    // p = 2: C2xC2, radius 6.
    let (consistency, values) = decider_consistency("C2xC2", 6, opts)?;
    checks.push(consistency);
    let primes_found: Vec<u64> = values
        .iter()
        .filter(|v| crate::search::is_prime_value(v).unwrap_or(false))
        .map(|v| v.try_into().unwrap())
        .collect();
    let bad_residue: Vec<u64> = primes_found.iter().copied().filter(|q| q % 4 != 1).collect();
    checks.push(Check {
        name: "C2xC2 radius 6: every prime value is 1 mod 4".into(),
        passed: bad_residue.is_empty() && !primes_found.is_empty(),
        detail: json!({ "primes_found": strings(&primes_found), "not_1_mod_4": strings(&bad_residue) }),
    });
    // -3 = theta(0, 1, 1, 1) is a value, so only the positive primes 3 and 7 are excluded.
    let forbidden: Vec<i64> = [2, -2, 3, 7]
        .into_iter()
        .filter(|&v| values.contains(&BigInt::from(v)))
        .collect();
    let four = BigInt::from(4);
    let odd_not_1_mod_4: Vec<String> = values
        .iter()
        .filter(|v| v.is_odd() && v.mod_floor(&four) != BigInt::one())
        .map(|v| v.to_string())
        .collect();
    checks.push(Check {
        name: "C2xC2 radius 6: no +-2, 3 or 7, and every odd value is 1 mod 4".into(),
        passed: forbidden.is_empty() && odd_not_1_mod_4.is_empty(),
        detail: json!({ "found_forbidden": strings(&forbidden), "odd_not_1_mod_4": odd_not_1_mod_4 }),
    });

    let v4 = group("C2xC2");
    let mut missing = Vec::new();
    let mut witnesses = Vec::new();
    for q in primes::primes_up_to(99).into_iter().filter(|q| q % 4 == 1) {
        let bound = (q + 3).div_ceil(4) as u32;
        let cfg = SearchConfig::exhaustive(bound).with_workers(opts.workers);
        match find_witness(&v4, &BigInt::from(q), &cfg)? {
            Some(w) => witnesses.push(json!({
                "q": q.to_string(),
                "bound": bound,
                "witness": strings(w.values()),
            })),
            None => missing.push(q.to_string()),
        }
    }
    checks.push(Check {
        name: "C2xC2: every prime q < 100 with q = 1 mod 4 has a witness within ceil((q+3)/4)".into(),
        passed: missing.is_empty(),
        detail: json!({ "witnesses": witnesses, "missing": missing }),
    });

    // p = 3: C3xC3, radius 2.
    let (consistency, values) = decider_consistency("C3xC3", 2, opts)?;
    checks.push(consistency);
    let primes_found: Vec<u64> = values
        .iter()
        .filter(|v| crate::search::is_prime_value(v).unwrap_or(false))
        .map(|v| v.try_into().unwrap())
        .collect();
    let bad: Vec<u64> = primes_found
        .iter()
        .copied()
        .filter(|&q| primes::pow_mod(q, 2, 9) != 1)
        .collect();
    checks.push(Check {
        name: "C3xC3 radius 2: every prime value q has q^2 = 1 mod 9".into(),
        passed: bad.is_empty() && !primes_found.is_empty(),
        detail: json!({ "primes_found": strings(&primes_found), "violations": strings(&bad) }),
    });

    // Cyclic criterion: C8 radius 3.
    let (consistency, _) = decider_consistency("C8", 3, opts)?;
    checks.push(consistency);
    Ok(checks)
}

fn cor5(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (i, (spec, factor, l)) in COR5_SHAPES.iter().enumerate() {
        let grp = group(spec);
        let mut rng = rng_for(opts.seed, 100 + i as u64);
        let mut failures = Vec::new();
        let mut modulus = BigInt::zero();
        for _ in 0..SAMPLES {
            let a = random_assignment(&mut rng, grp.order(), 5);
            let sides = theorems::cor5_sides(&grp, *factor, &a)?;
            modulus = sides.modulus.clone();
            if sides.lhs != sides.rhs {
                failures.push(json!({
                    "assignment": strings(a.values()),
                    "lhs": sides.lhs.to_string(),
                    "rhs": sides.rhs.to_string(),
                }));
            }
        }
        checks.push(Check {
            name: format!("congruence on {spec} with l = {l}"),
            passed: failures.is_empty(),
            detail: json!({ "samples": SAMPLES, "modulus": modulus.to_string(), "failures": failures }),
        });
    }
    Ok(checks)
}

fn alphabeta(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (i, spec) in ["C3xC3", "C9xC3", "C2xC2"].iter().enumerate() {
        let grp = group(spec);
        let odd = grp.prime() != Some(2);
        let mut rng = rng_for(opts.seed, 200 + i as u64);
        let (mut product_fail, mut negative_beta, mut positive_beta) = (0usize, 0usize, 0usize);
        for _ in 0..SAMPLES {
            let a = random_assignment(&mut rng, grp.order(), 5);
            let ab = cyclo::alpha_beta(&grp, &a)?;
            if &ab.alpha * &ab.beta != theta(&grp, &a)? {
                product_fail += 1;
            }
            if ab.beta.is_negative() {
                negative_beta += 1;
            } else if ab.beta.is_positive() {
                positive_beta += 1;
            }
        }
        let detail = json!({
            "samples": SAMPLES,
            "product_failures": product_fail,
            "negative_beta": negative_beta,
            "positive_beta": positive_beta,
        });
        if odd {
            checks.push(Check {
                name: format!("{spec}: alpha*beta == theta and beta >= 0"),
                passed: product_fail == 0 && negative_beta == 0,
                detail,
            });
        } else {
            checks.push(Check {
                name: format!("{spec}: alpha*beta == theta, beta takes both signs"),
                passed: product_fail == 0 && negative_beta > 0 && positive_beta > 0,
                detail,
            });
        }
    }
    Ok(checks)
}

fn wieferich(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let found = theorems::wieferich_scan(5000, opts.workers)?;
    let disagreements = theorems::wieferich_decider_disagreements(1000)?;
    Ok(vec![
        Check {
            name: "Wieferich primes up to 5000 are exactly 1093 and 3511".into(),
            passed: found == [1093, 3511],
            detail: json!({ "found": strings(&found) }),
        },
        Check {
            name: "wieferich(p) <=> 2 in S(CpxCp) per the decider, odd p <= 1000".into(),
            passed: disagreements.is_empty(),
            detail: json!({ "disagreements": strings(&disagreements) }),
        },
    ])
}

fn theorem3(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let groups = if opts.theorem3_groups.is_empty() {
        vec![FiniteGroup::q8(), FiniteGroup::d4()]
    } else {
        opts.theorem3_groups.clone()
    };
    let mut checks = Vec::new();
    for grp in groups {
        let report = theorems::check_theorem3(&grp, opts.theorem3_bound, opts.seed, opts.workers)?;
        checks.push(Check {
            name: format!("{grp} radius {}: prime determinants come from the abelianization", opts.theorem3_bound),
            passed: report.passed(),
            detail: report.to_json(),
        });
    }
    Ok(checks)
}

fn frobenius(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (i, grp) in [FiniteGroup::q8(), FiniteGroup::d4()].into_iter().enumerate() {
        let mut rng = rng_for(opts.seed, 300 + i as u64);
        let mut failures = Vec::new();
        for _ in 0..FROBENIUS_SAMPLES {
            let a = random_assignment(&mut rng, 8, 3);
            // frobenius_factors asserts the degree-2 determinant is rational.
            let parts = cyclo::frobenius_factors(&grp, &a)?;
            let direct = theta(&grp, &a)?;
            if parts.theta() != direct {
                failures.push(json!({
                    "assignment": strings(a.values()),
                    "linear_part": parts.linear_part.to_string(),
                    "quadratic_det": parts.quadratic_det.to_string(),
                    "theta": direct.to_string(),
                }));
            }
        }
        checks.push(Check {
            name: format!("{grp}: theta == linear_part * quadratic_det^2"),
            passed: failures.is_empty(),
            detail: json!({ "samples": FROBENIUS_SAMPLES, "failures": failures }),
        });
    }
    Ok(checks)
}

fn monoid(opts: &SuiteOptions) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut groups: Vec<FiniteGroup> = ABELIAN_GROUPS.iter().map(|s| group(s)).collect();
    groups.push(FiniteGroup::q8());
    groups.push(FiniteGroup::d4());
    for (i, grp) in groups.iter().enumerate() {
        let mut rng = rng_for(opts.seed, 400 + i as u64);
        let mut failures = Vec::new();
        for _ in 0..SAMPLES {
            let a = random_assignment(&mut rng, grp.order(), 5);
            let b = random_assignment(&mut rng, grp.order(), 5);
            let c = convolve(grp, &a, &b)?;
            let (ta, tb, tc) = (theta(grp, &a)?, theta(grp, &b)?, theta(grp, &c)?);
            if tc != &ta * &tb {
                failures.push(json!({
                    "a": strings(a.values()),
                    "b": strings(b.values()),
                    "theta_ab": tc.to_string(),
                    "product": (&ta * &tb).to_string(),
                }));
            }
        }
        checks.push(Check {
            name: format!("{grp}: theta(a * b) == theta(a) theta(b)"),
            passed: failures.is_empty(),
            detail: json!({ "pairs": SAMPLES, "failures": failures }),
        });
    }
    for spec in ["C3", "C9", "C3xC3"] {
        let grp = group(spec);
        let cfg = SearchConfig::exhaustive(1).with_workers(opts.workers);
        let w = find_witness(&grp, &-BigInt::one(), &cfg)?;
        checks.push(Check {
            name: format!("-1 is a determinant of {spec} within radius 1"),
            passed: w.is_some(),
            detail: json!({ "witness": w.map(|w| strings(w.values())) }),
        });
    }
    Ok(checks)
}
