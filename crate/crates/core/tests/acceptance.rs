//! Acceptance criteria 1-10. Every criterion prints one PASS/FAIL line; the
//! test fails at the end if any criterion failed.

use std::io::Write;
use std::time::Instant;

use groupdet::exactdet::{convolve, theta};
use groupdet::primes::primes_up_to;
use groupdet::search::{find_witness, SearchConfig};
use groupdet::suites::{self, Check, Suite, SuiteOptions, SuiteReport};
use groupdet::theorems::{decide, wieferich_scan};
use groupdet::{Assignment, FiniteGroup};
use num_bigint::BigInt;
use num_traits::One;

fn run_all(workers: usize) -> Vec<SuiteReport> {
    let opts = SuiteOptions {
        workers,
        ..SuiteOptions::default()
    };
    Suite::ALL
        .iter()
        .map(|&s| suites::run(s, &opts).expect("suite runs"))
        .collect()
}

fn report(reports: &[SuiteReport], suite: Suite) -> &SuiteReport {
    reports.iter().find(|r| r.suite == suite).unwrap()
}

fn checks<'a>(r: &'a SuiteReport, filter: impl Fn(&Check) -> bool + 'a) -> Vec<&'a Check> {
    r.checks.iter().filter(|c| filter(c)).collect()
}

fn all_pass(cs: &[&Check]) -> bool {
    !cs.is_empty() && cs.iter().all(|c| c.passed)
}

fn g(s: &str) -> FiniteGroup {
    s.parse().unwrap()
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let reports = run_all(8);
    let mut results: Vec<(u32, &str, bool)> = Vec::new();

    // 1. Dedekind product against the determinant.
    let r = report(&reports, Suite::Dedekind);
    results.push((1, "Dedekind product equals the group determinant", all_pass(&checks(r, |_| true)) && r.checks.len() == 12));

    // 2. p = 2, plus the explicit witness family for q = 1 mod 4.
    let r = report(&reports, Suite::Theorem1);
    let mut ok = all_pass(&checks(r, |c| c.name.contains("C2xC2")));
    let v4 = g("C2xC2");
    for q in primes_up_to(99).into_iter().filter(|q| q % 4 == 1) {
        let k = (q as i64 - 1) / 4;
        let family = Assignment::from_i64s(&[k + 1, k, k, k]);
        ok &= theta(&v4, &family).unwrap() == BigInt::from(q);
    }
    results.push((2, "C2xC2: prime values are 1 mod 4 and every such q < 100 has a witness", ok));

    // 3. p = 3.
    let c3 = checks(r, |c| c.name.contains("C3xC3") || c.name.contains("C8"));
    results.push((3, "C3xC3 radius 2: prime values satisfy q^2 = 1 mod 9", all_pass(&c3)));

    // 4. Congruence shapes.
    let r = report(&reports, Suite::Cor5);
    results.push((4, "coset-collapse congruence holds on all six shapes", all_pass(&checks(r, |_| true)) && r.checks.len() == 6));

    // 5. alpha/beta split.
    let r = report(&reports, Suite::AlphaBeta);
    results.push((5, "alpha * beta == theta, beta sign behaviour", all_pass(&checks(r, |_| true))));

    // 6. Wieferich primes, with an independent modexp recount.
    let r = report(&reports, Suite::Wieferich);
    let mut ok = all_pass(&checks(r, |_| true));
    let oracle: Vec<u64> = primes_up_to(5000)
        .into_iter()
        .filter(|&p| {
            let m = BigInt::from(p) * BigInt::from(p);
            BigInt::from(2).modpow(&BigInt::from(p - 1), &m).is_one()
        })
        .collect();
    ok &= oracle == vec![1093, 3511] && wieferich_scan(5000, 8).unwrap() == oracle;
    for p in primes_up_to(1000).into_iter().skip(1) {
        let grp = FiniteGroup::abelian(vec![p as usize, p as usize]).unwrap();
        ok &= decide(&grp, 2).unwrap().is_member() == oracle.contains(&p);
    }
    results.push((6, "Wieferich scan and decider equivalence", ok));

    // 7. Q8 and D4 at radius 2, exhaustive.
    let r = report(&reports, Suite::Theorem3);
    let exhaustive = r
        .checks
        .iter()
        .all(|c| c.detail["strategy"] == "exhaustive");
    results.push((7, "Q8 and D4 radius 2: no violations", all_pass(&checks(r, |_| true)) && r.checks.len() == 2 && exhaustive));

    // 8. Frobenius factorization.
    let r = report(&reports, Suite::Frobenius);
    results.push((8, "theta == linear_part * quadratic_det^2 on Q8 and D4", all_pass(&checks(r, |_| true))));

    // 9. Monoid property and -1 witnesses, rechecked directly.
    let r = report(&reports, Suite::Monoid);
    let mut ok = all_pass(&checks(r, |_| true));
    for s in ["C3", "C9", "C3xC3"] {
        let grp = g(s);
        let w = find_witness(&grp, &BigInt::from(-1), &SearchConfig::exhaustive(1)).unwrap();
        ok &= matches!(w, Some(ref a) if theta(&grp, a).unwrap() == BigInt::from(-1));
    }
    let c4 = g("C4");
    let (a, b) = (Assignment::from_i64s(&[1, 2, 0, -1]), Assignment::from_i64s(&[3, 0, 1, 1]));
    let ab = convolve(&c4, &a, &b).unwrap();
    ok &= theta(&c4, &ab).unwrap() == theta(&c4, &a).unwrap() * theta(&c4, &b).unwrap();
    results.push((9, "theta is multiplicative under convolution; -1 found for odd order", ok));

    // 10. Worker count does not change the reports.
    let serial = run_all(1);
    let ser = |rs: &[SuiteReport]| -> Vec<String> { rs.iter().map(|r| r.to_json().to_string()).collect() };
    results.push((10, "reports are byte-identical for 1 and 8 workers", ser(&serial) == ser(&reports)));

    // Written to the real stdout so the lines survive the test harness capture.
    let mut out = std::io::stdout().lock();
    for (n, name, passed) in &results {
        writeln!(out, "criterion {n:>2}: {} {name}", if *passed { "PASS" } else { "FAIL" }).unwrap();
    }
    writeln!(out, "acceptance elapsed: {:.1}s", start.elapsed().as_secs_f64()).unwrap();
    drop(out);
    let failed: Vec<u32> = results.iter().filter(|r| !r.2).map(|r| r.0).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
