//! Brute-force witness search and value scans over coefficient boxes.
//!
//! A box of radius `B` is enumerated as an odometer in canonical element
//! order. Each coordinate runs from `+B` down to `-B` and the identity
//! coordinate is the most significant digit, so `(B, B, .., B)` comes first
//! and `(-B, .., -B)` last. The "first" witness is the first one met in this
//! order. Work is split into slices by the leading coordinate; slices are
//! merged in order, so results do not depend on the worker count.

use std::collections::{BTreeMap, HashMap};
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactdet::{self, FastTheta};
use crate::group::{Assignment, FiniteGroup};
use crate::primes;

pub const DEFAULT_MAX_EVALS: u64 = 100_000_000;

/// Every this-many visited points, the fast evaluator is checked against the
/// Bareiss determinant.
pub const ORACLE_SAMPLE_PERIOD: u64 = 10_000;

pub const MAX_EXHAUSTIVE_ORDER: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Exhaustive,
    /// Radius `bound`, then `bound + 1`, up to `max_bound`.
    Deepening,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub bound: u32,
    pub max_bound: u32,
    pub strategy: Strategy,
    pub prime_filter: bool,
    pub seed: u64,
    pub workers: usize,
    pub max_evals: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            bound: 1,
            max_bound: 1,
            strategy: Strategy::Exhaustive,
            prime_filter: false,
            seed: 0,
            workers: 1,
            max_evals: DEFAULT_MAX_EVALS,
        }
    }
}

impl SearchConfig {
    pub fn exhaustive(bound: u32) -> Self {
        SearchConfig {
            bound,
            max_bound: bound,
            ..Default::default()
        }
    }

    pub fn deepening(bound: u32, max_bound: u32) -> Self {
        SearchConfig {
            bound,
            max_bound,
            strategy: Strategy::Deepening,
            ..Default::default()
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_max_evals(mut self, max_evals: u64) -> Self {
        self.max_evals = max_evals;
        self
    }

    pub fn with_primes(mut self, prime_filter: bool) -> Self {
        self.prime_filter = prime_filter;
        self
    }

    fn radii(&self) -> Result<Vec<u32>> {
        if self.bound < 1 {
            return Err(Error::InvalidArgument("search bound must be at least 1".into()));
        }
        match self.strategy {
            Strategy::Exhaustive => Ok(vec![self.bound]),
            Strategy::Deepening if self.max_bound < self.bound => Err(Error::InvalidArgument(format!(
                "deepening cap {} is below the starting bound {}",
                self.max_bound, self.bound
            ))),
            Strategy::Deepening => Ok((self.bound..=self.max_bound).collect()),
        }
    }
}

/// Runs `f` on a rayon pool with `workers` threads.
pub(crate) fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool")
        .install(f)
}

/// `(2B+1)^n`, or `None` beyond `u128`.
pub fn box_size(n: usize, bound: u32) -> Option<u128> {
    (2 * bound as u128 + 1).checked_pow(n as u32)
}

fn check_ceiling(total: Option<u128>, ceiling: u64) -> Result<u64> {
    match total {
        Some(t) if t <= ceiling as u128 => Ok(t as u64),
        Some(t) => Err(Error::BoxTooLarge {
            evals: t.to_string(),
            ceiling,
        }),
        None => Err(Error::BoxTooLarge {
            evals: "more than 2^128".into(),
            ceiling,
        }),
    }
}

/// The coefficient box `[-B, B]^n` in enumeration order.
#[derive(Debug, Clone, Copy)]
pub(crate) struct BoxEnum {
    pub n: usize,
    pub bound: i64,
}

impl BoxEnum {
    pub fn new(n: usize, bound: u32) -> Self {
        BoxEnum {
            n,
            bound: bound as i64,
        }
    }

    pub fn slices(&self) -> usize {
        (2 * self.bound + 1) as usize
    }

    pub fn slice_len(&self) -> u64 {
        (2 * self.bound as u64 + 1).pow(self.n as u32 - 1)
    }

    /// The point with the given position in enumeration order.
    pub fn point(&self, ordinal: u64) -> Vec<i64> {
        let base = 2 * self.bound as u64 + 1;
        let mut rest = ordinal;
        let mut out = vec![0i64; self.n];
        for slot in out.iter_mut().rev() {
            *slot = self.bound - (rest % base) as i64;
            rest /= base;
        }
        out
    }

    /// Visits slice `s` (leading coordinate `B - s`) in order, passing each
    /// point's global ordinal.
    pub fn visit_slice(&self, s: usize, mut f: impl FnMut(u64, &[i64]) -> ControlFlow<()>) {
        let b = self.bound;
        let mut point = vec![b; self.n];
        point[0] = b - s as i64;
        let mut ordinal = s as u64 * self.slice_len();
        loop {
            if f(ordinal, &point).is_break() {
                return;
            }
            ordinal += 1;
            let mut i = self.n;
            loop {
                if i == 1 {
                    return;
                }
                i -= 1;
                if point[i] > -b {
                    point[i] -= 1;
                    break;
                }
                point[i] = b;
            }
        }
    }
}

fn sampled_check(fast: &FastTheta, ordinal: u64, point: &[i64]) -> Result<()> {
    if ordinal % ORACLE_SAMPLE_PERIOD == 0 {
        fast.cross_check(point)?;
    }
    Ok(())
}

fn first_in_box(
    fast: &FastTheta,
    enumeration: BoxEnum,
    target: &BigInt,
    workers: usize,
) -> Result<Option<Vec<i64>>> {
    let target_small = target.to_i128();
    let per_slice = |s: usize| -> Result<Option<Vec<i64>>> {
        let mut found = None;
        let mut failure = None;
        enumeration.visit_slice(s, |ordinal, point| {
            if let Err(e) = sampled_check(fast, ordinal, point) {
                failure = Some(e);
                return ControlFlow::Break(());
            }
            let hit = match (fast.eval(point), target_small) {
                (Some(v), Some(t)) => v == t,
                (Some(_), None) => false,
                (None, _) => fast.eval_exact(point) == *target,
            };
            if hit {
                found = Some(point.to_vec());
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        match failure {
            Some(e) => Err(e),
            None => Ok(found),
        }
    };
    let hit = with_pool(workers, || {
        (0..enumeration.slices())
            .into_par_iter()
            .map(per_slice)
            .find_first(|r| !matches!(r, Ok(None)))
    });
    hit.unwrap_or(Ok(None))
}

/// Finds the first assignment in the box with `theta = target`, or `None`.
///
/// With [`Strategy::Deepening`] the radii `bound..=max_bound` are tried in
/// turn and the first witness at the smallest successful radius is returned.
pub fn find_witness(group: &FiniteGroup, target: &BigInt, cfg: &SearchConfig) -> Result<Option<Assignment>> {
    let n = group.order();
    if n > MAX_EXHAUSTIVE_ORDER {
        return Err(Error::InvalidArgument(format!(
            "exhaustive search needs |G| <= {MAX_EXHAUSTIVE_ORDER}, {group} has order {n}"
        )));
    }
    let radii = cfg.radii()?;
    let total = radii
        .iter()
        .try_fold(0u128, |acc, &b| box_size(n, b).and_then(|s| acc.checked_add(s)));
    check_ceiling(total, cfg.max_evals)?;

    let fast = FastTheta::new(group);
    for b in radii {
        if let Some(point) = first_in_box(&fast, BoxEnum::new(n, b), target, cfg.workers)? {
            let witness = Assignment::from_i64s(&point);
            let exact = exactdet::theta(group, &witness)?;
            if exact != *target {
                return Err(Error::OracleMismatch {
                    point,
                    fast: target.to_string(),
                    exact: exact.to_string(),
                });
            }
            return Ok(Some(witness));
        }
    }
    Ok(None)
}

/// Distinct determinant values over a box, each with its first witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueScan {
    pub group: String,
    pub bound: u32,
    pub primes_only: bool,
    pub scanned: u64,
    pub values: BTreeMap<BigInt, Vec<i64>>,
}

impl ValueScan {
    pub fn contains(&self, v: i64) -> bool {
        self.values.contains_key(&BigInt::from(v))
    }

    pub fn value_set(&self) -> Vec<BigInt> {
        self.values.keys().cloned().collect()
    }
}

#[derive(Default)]
struct SliceValues {
    small: HashMap<i128, u64>,
    big: BTreeMap<BigInt, u64>,
}

/// The set `{theta(a) : a in [-B, B]^|G|}`, optionally restricted to primes.
/// `cfg.bound` is the radius and may be 0 here.
pub fn scan_values(group: &FiniteGroup, cfg: &SearchConfig) -> Result<ValueScan> {
    let n = group.order();
    let scanned = check_ceiling(box_size(n, cfg.bound), cfg.max_evals)?;
    let fast = FastTheta::new(group);
    let enumeration = BoxEnum::new(n, cfg.bound);

    let per_slice = |s: usize| -> Result<SliceValues> {
        let mut out = SliceValues::default();
        let mut failure = None;
        enumeration.visit_slice(s, |ordinal, point| {
            if let Err(e) = sampled_check(&fast, ordinal, point) {
                failure = Some(e);
                return ControlFlow::Break(());
            }
            match fast.eval(point) {
                Some(v) => {
                    out.small.entry(v).or_insert(ordinal);
                }
                None => {
                    out.big.entry(fast.eval_exact(point)).or_insert(ordinal);
                }
            }
            ControlFlow::Continue(())
        });
        failure.map_or(Ok(out), Err)
    };
    let slices: Vec<Result<SliceValues>> =
        with_pool(cfg.workers, || (0..enumeration.slices()).into_par_iter().map(per_slice).collect());

    // Slices arrive in enumeration order, so the first insert wins.
    let mut first: BTreeMap<BigInt, u64> = BTreeMap::new();
    for slice in slices {
        let slice = slice?;
        let mut small: Vec<(i128, u64)> = slice.small.into_iter().collect();
        small.sort_unstable();
        for (v, ord) in small {
            first.entry(BigInt::from(v)).or_insert(ord);
        }
        for (v, ord) in slice.big {
            first.entry(v).or_insert(ord);
        }
    }
    let mut values = BTreeMap::new();
    for (v, ord) in first {
        if cfg.prime_filter && !is_prime_value(&v)? {
            continue;
        }
        values.insert(v, enumeration.point(ord));
    }
    Ok(ValueScan {
        group: group.to_string(),
        bound: cfg.bound,
        primes_only: cfg.prime_filter,
        scanned,
        values,
    })
}

/// Primality of a (possibly negative) determinant value. Primes are positive.
pub(crate) fn is_prime_value(v: &BigInt) -> Result<bool> {
    if v.sign() != num_bigint::Sign::Plus {
        return Ok(false);
    }
    let small = v.to_u64().ok_or_else(|| Error::PrimalityRange { value: v.to_string() })?;
    Ok(primes::is_prime(small))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FiniteGroup {
        s.parse().unwrap()
    }

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn enumeration_order_and_ordinals() {
        let e = BoxEnum::new(3, 1);
        let mut seen = Vec::new();
        for s in 0..e.slices() {
            e.visit_slice(s, |ord, p| {
                assert_eq!(e.point(ord), p);
                seen.push(p.to_vec());
                ControlFlow::Continue(())
            });
        }
        assert_eq!(seen.len(), 27);
        assert_eq!(seen[0], vec![1, 1, 1]);
        assert_eq!(seen[1], vec![1, 1, 0]);
        assert_eq!(seen[3], vec![1, 0, 1]);
        assert_eq!(seen[26], vec![-1, -1, -1]);
        let mut sorted = seen.clone();
        sorted.sort_by(|a, b| b.cmp(a));
        assert_eq!(seen, sorted);

        let single = BoxEnum::new(1, 2);
        let mut pts = Vec::new();
        for s in 0..single.slices() {
            single.visit_slice(s, |_, p| {
                pts.push(p[0]);
                ControlFlow::Continue(())
            });
        }
        assert_eq!(pts, vec![2, 1, 0, -1, -2]);
    }

    // Brute force: enumerate every point, evaluate with Bareiss, take the
    // first match in the documented order.
    fn brute_first(grp: &FiniteGroup, target: i64, bound: u32) -> Option<Vec<i64>> {
        let e = BoxEnum::new(grp.order(), bound);
        (0..box_size(grp.order(), bound).unwrap() as u64)
            .map(|o| e.point(o))
            .find(|p| exactdet::theta(grp, &Assignment::from_i64s(p)).unwrap() == bi(target))
    }

    #[test]
    fn witness_examples() {
        let v4 = g("C2xC2");
        let w = find_witness(&v4, &bi(5), &SearchConfig::exhaustive(2)).unwrap();
        assert_eq!(w, Some(Assignment::from_i64s(&[2, 1, 1, 1])));
        assert_eq!(brute_first(&v4, 5, 2), Some(vec![2, 1, 1, 1]));

        for s in ["C2", "C3", "C4", "C2xC2", "C6", "C8", "C3xC3", "Q8"] {
            let grp = g(s);
            let w = find_witness(&grp, &bi(1), &SearchConfig::exhaustive(1)).unwrap();
            assert_eq!(w, Some(Assignment::delta(grp.order(), 0)), "{s}");
        }
        // Here a unit precedes delta_e in enumeration order.
        for s in ["C5", "D4"] {
            let grp = g(s);
            let w = find_witness(&grp, &bi(1), &SearchConfig::exhaustive(1)).unwrap().unwrap();
            assert_ne!(w, Assignment::delta(grp.order(), 0));
            assert_eq!(exactdet::theta(&grp, &w).unwrap(), bi(1), "{s}");
        }

        assert_eq!(find_witness(&v4, &bi(2), &SearchConfig::exhaustive(6)).unwrap(), None);

        let c3 = g("C3");
        let w = find_witness(&c3, &bi(-1), &SearchConfig::exhaustive(1)).unwrap().unwrap();
        assert_eq!(exactdet::theta(&c3, &w).unwrap(), bi(-1));
    }

    #[test]
    fn witnesses_match_brute_force_order() {
        for (s, b) in [("C3", 2), ("C4", 1), ("C2xC2", 2)] {
            let grp = g(s);
            for t in -12..=12 {
                let fast = find_witness(&grp, &bi(t), &SearchConfig::exhaustive(b))
                    .unwrap()
                    .map(|a| a.to_i64s().unwrap());
                assert_eq!(fast, brute_first(&grp, t, b), "{s} target {t}");
            }
        }
    }

    #[test]
    fn deepening_returns_smallest_radius() {
        let v4 = g("C2xC2");
        let cfg = SearchConfig::deepening(1, 4);
        let w = find_witness(&v4, &bi(13), &cfg).unwrap().unwrap();
        assert_eq!(exactdet::theta(&v4, &w).unwrap(), bi(13));
        // 13 first appears at radius 4: (4, 3, 3, 3).
        assert!(find_witness(&v4, &bi(13), &SearchConfig::exhaustive(3)).unwrap().is_none());
        let at4 = find_witness(&v4, &bi(13), &SearchConfig::exhaustive(4)).unwrap();
        assert_eq!(Some(w), at4);
        assert!(find_witness(&v4, &bi(13), &SearchConfig::deepening(3, 2)).is_err());
    }

    #[test]
    fn refuses_oversized_boxes() {
        let cfg = SearchConfig::exhaustive(5).with_max_evals(1000);
        assert!(matches!(
            find_witness(&g("C2xC2xC2"), &bi(3), &cfg),
            Err(Error::BoxTooLarge { .. })
        ));
        assert!(matches!(scan_values(&g("C16"), &cfg), Err(Error::BoxTooLarge { .. })));
        assert!(find_witness(&g("C17"), &bi(3), &SearchConfig::exhaustive(1)).is_err());
        assert!(find_witness(&g("C2"), &bi(3), &SearchConfig::exhaustive(0)).is_err());
    }

    #[test]
    fn scan_examples() {
        let c2 = g("C2");
        let scan = scan_values(&c2, &SearchConfig::exhaustive(2)).unwrap();
        assert_eq!(scan.value_set(), [-4, -3, -1, 0, 1, 3, 4].map(bi).to_vec());
        // a^2 - b^2 over the same box, by hand.
        let mut brute: Vec<i64> = (-2..=2i64)
            .flat_map(|a| (-2..=2i64).map(move |b| a * a - b * b))
            .collect();
        brute.sort();
        brute.dedup();
        assert_eq!(scan.value_set(), brute.into_iter().map(bi).collect::<Vec<_>>());

        let zero = scan_values(&c2, &SearchConfig::exhaustive(0)).unwrap();
        assert_eq!(zero.value_set(), vec![bi(0)]);

        let primes = scan_values(&g("C2xC2"), &SearchConfig::exhaustive(2).with_primes(true)).unwrap();
        assert_eq!(primes.value_set(), vec![bi(5)]);
        for v in primes.values.keys() {
            assert_eq!(v % 4, bi(1), "{v}");
        }
    }

    #[test]
    fn scan_witnesses_are_first_occurrences() {
        let grp = g("C3");
        let scan = scan_values(&grp, &SearchConfig::exhaustive(2)).unwrap();
        for (v, w) in &scan.values {
            let t = v.to_i64().unwrap();
            assert_eq!(Some(w.clone()), brute_first(&grp, t, 2));
        }
    }

    #[test]
    fn scans_are_monotone_and_worker_independent() {
        for s in ["C4", "C2xC2", "D4"] {
            let grp = g(s);
            let b1 = scan_values(&grp, &SearchConfig::exhaustive(1)).unwrap();
            let b2 = scan_values(&grp, &SearchConfig::exhaustive(2).with_workers(4)).unwrap();
            for v in b1.values.keys() {
                assert!(b2.values.contains_key(v), "{s}: {v}");
            }
            let b2_serial = scan_values(&grp, &SearchConfig::exhaustive(2)).unwrap();
            assert_eq!(b2, b2_serial);
        }
        let grp = g("C2xC2");
        for t in [5, 9, 13, -3, 0] {
            let one = find_witness(&grp, &bi(t), &SearchConfig::exhaustive(3)).unwrap();
            let many = find_witness(&grp, &bi(t), &SearchConfig::exhaustive(3).with_workers(8)).unwrap();
            assert_eq!(one, many);
        }
    }
}
