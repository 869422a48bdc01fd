use groupdet::cyclo::alpha_beta;
use groupdet::exactdet::{convolve, theta};
use groupdet::primes::primes_up_to;
use groupdet::search::{scan_values, SearchConfig};
use groupdet::suites::{random_assignment, rng_for, ABELIAN_GROUPS};
use groupdet::theorems::decide;
use groupdet::{Assignment, FiniteGroup};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

fn g(s: &str) -> FiniteGroup {
    s.parse().unwrap()
}

#[test]
fn multiplicative_on_small_groups() {
    let specs = ABELIAN_GROUPS.iter().copied().chain(["Q8", "D4"]);
    for (i, spec) in specs.enumerate() {
        let grp = g(spec);
        let mut rng = rng_for(11, i as u64);
        for _ in 0..20 {
            let a = random_assignment(&mut rng, grp.order(), 3);
            let b = random_assignment(&mut rng, grp.order(), 3);
            let ab = convolve(&grp, &a, &b).unwrap();
            assert_eq!(
                theta(&grp, &ab).unwrap(),
                theta(&grp, &a).unwrap() * theta(&grp, &b).unwrap(),
                "{spec}"
            );
        }
    }
}

#[test]
fn scan_witnesses_compose() {
    for spec in ["C3", "C2xC2", "C4", "Q8"] {
        let grp = g(spec);
        let scan = scan_values(&grp, &SearchConfig::exhaustive(2)).unwrap();
        let found: Vec<(&BigInt, &Vec<i64>)> = scan.values.iter().filter(|(v, _)| !v.is_zero()).collect();
        let mut pairs = 0;
        'outer: for (s, wa) in &found {
            for (t, wb) in &found {
                let a = Assignment::from_i64s(wa);
                let b = Assignment::from_i64s(wb);
                let ab = convolve(&grp, &a, &b).unwrap();
                assert_eq!(theta(&grp, &ab).unwrap(), *s * *t, "{spec}");
                pairs += 1;
                if pairs == 20 {
                    break 'outer;
                }
            }
        }
        assert_eq!(pairs, 20, "{spec}");
    }
}

#[test]
fn decider_consistent_on_c3xc3_radius_3() {
    let grp = g("C3xC3");
    let scan = scan_values(&grp, &SearchConfig::exhaustive(3).with_primes(true).with_workers(8)).unwrap();
    assert!(!scan.values.is_empty());
    for v in scan.values.keys() {
        let q: u64 = v.try_into().unwrap();
        assert!(decide(&grp, q).unwrap().is_member(), "{q}");
        assert_eq!((q * q) % 9, 1, "{q}");
    }
}

#[test]
fn c2xc2_necessity_exhaustive_radius_4() {
    let grp = g("C2xC2");
    let four = BigInt::from(4);
    for a0 in -4..=4i64 {
        for a1 in -4..=4i64 {
            for a2 in -4..=4i64 {
                for a3 in -4..=4i64 {
                    let a = Assignment::from_i64s(&[a0, a1, a2, a3]);
                    let t = theta(&grp, &a).unwrap();
                    let split = alpha_beta(&grp, &a).unwrap();
                    let r = t.mod_floor(&four);
                    assert_eq!(r, (&split.alpha * &split.alpha).mod_floor(&four), "{a:?}");
                    assert!(r != BigInt::from(2), "{a:?}");
                    if t.is_positive() && groupdet::primes::is_prime(u64::try_from(&t).unwrap()) {
                        assert!(r.is_one(), "{a:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn member_implies_mod_p_squared() {
    for spec in ["C2xC2", "C4xC2", "C3xC3", "C9xC3", "C5xC5", "C2xC2xC2"] {
        let grp = g(spec);
        let p = grp.prime().unwrap();
        for q in primes_up_to(2000) {
            let d = decide(&grp, q).unwrap();
            if d.is_member() {
                let m = BigInt::from(p * p);
                assert!(BigInt::from(q).modpow(&BigInt::from(p - 1), &m).is_one(), "{spec} {q}");
            }
        }
    }
}
