use num_integer::Integer;
use proptest::prelude::*;

use chernslope::density::{bridge_value, lambda_fn};
use chernslope::geometry::{build_resolution, log_chern_closed, log_chern_pair, ArrangementParams};
use chernslope::girstmair::{bad_set, is_bad_by_definition};
use chernslope::numtheory::{c_value, dedekind_sum, dedekind_sum_naive, hj_expand, is_prime, next_prime};
use chernslope::prank::{frobenius_orbits, genus, prank_upper_bound, CyclicCoverData};
use chernslope::rational::{frac, int, parse_decimal, Rational};
use chernslope::rootcover::node_residue;

fn coprime_pair(max_q: i64) -> impl Strategy<Value = (i64, i64)> {
    (2..=max_q)
        .prop_flat_map(|q| (Just(q), 1..q))
        .prop_filter("coprime", |(q, a)| q.gcd(a) == 1)
}

proptest! {
    #[test]
    fn fast_dedekind_matches_definition((q, a) in coprime_pair(3000)) {
        prop_assert_eq!(dedekind_sum(q, a).unwrap(), dedekind_sum_naive(q, a).unwrap());
    }

    #[test]
    fn dedekind_sum_is_odd_in_a((q, a) in coprime_pair(100_000)) {
        prop_assert_eq!(dedekind_sum(q, q - a).unwrap(), -dedekind_sum(q, a).unwrap());
    }

    #[test]
    fn hj_expansion_evaluates_back((q, a) in coprime_pair(100_000)) {
        let hj = hj_expand(q, a).unwrap();
        prop_assert!(hj.digits.iter().all(|&d| d >= 2));
        prop_assert_eq!(hj.evaluate(), frac(q, a));
        let c = c_value(q, a).unwrap();
        prop_assert_eq!(c, dedekind_sum(q, a).unwrap() * int(12) + int(hj.length() as i64));
    }

    #[test]
    fn node_residue_solves_congruence(q in 3i64..5000, x in 1i64..5000, y in 1i64..5000) {
        let q = next_prime(q);
        prop_assume!(x % q != 0 && y % q != 0);
        let a = node_residue(x, y, q);
        prop_assert!(0 < a && a < q);
        prop_assert_eq!((x * a + y).rem_euclid(q), 0);
    }

    #[test]
    fn bad_set_matches_definition(q in 17i64..600, seed in 0usize..1000) {
        let q = next_prime(q);
        let set = bad_set(q, &int(1)).unwrap();
        for a in (1..q).skip(seed % 7).step_by(7) {
            prop_assert_eq!(set.contains(a), is_bad_by_definition(q, &int(1), a));
        }
    }

    #[test]
    fn lambda_is_symmetric(n in 1i64..10_000, d in 1i64..10_000) {
        let t = frac(n, d);
        prop_assert_eq!(lambda_fn(&t).unwrap(), lambda_fn(&t.recip()).unwrap());
        prop_assert!(lambda_fn(&t).unwrap() >= int(0));
    }

    #[test]
    fn bridge_identity(u in 1u64..100_000, d in 3u64..100_000) {
        let v = 2 * d - 1 + u;
        let (ur, vr) = (int(u as i64), int(v as i64));
        let rhs = lambda_fn(&Rational::new(u.into(), v.into())).unwrap()
            - ur.recip() - vr.recip() + int(3) / (int(4) * &ur * &vr);
        prop_assert_eq!(bridge_value(u, d), rhs);
    }

    #[test]
    fn closed_forms_match_configuration(
        p in prop::sample::select(vec![2u64, 3, 5]),
        r in 1u32..3,
        e in 1u64..3,
        d in 3u64..6,
        g in 0u64..3,
        u in 0u64..3,
        w in 0u64..3,
    ) {
        for params in [
            ArrangementParams::a0(p, r, e, d, g),
            ArrangementParams::a(p, r, e, d, g, u, w),
            ArrangementParams::aprime(p, r, e, d),
        ] {
            let pair = log_chern_pair(&build_resolution(&params).unwrap());
            let closed = log_chern_closed(&params).unwrap();
            prop_assert_eq!((pair.c1sq, pair.c2), (closed.c1sq, closed.c2));
        }
    }

    #[test]
    fn prank_bound_below_genus(
        q in 2u64..80,
        p in prop::sample::select(vec![2u64, 3, 5, 7]),
        raw in prop::collection::vec(1u64..1000, 1..6),
    ) {
        prop_assume!(q % p != 0);
        let mut mults: Vec<u64> = raw.iter().map(|&a| 1 + a % (q - 1).max(1)).filter(|&a| a < q).collect();
        let fix = (q - mults.iter().sum::<u64>() % q) % q;
        if fix != 0 {
            mults.push(fix);
        }
        let Ok(data) = CyclicCoverData::new(q, p, mults) else { return Ok(()) };
        let b = prank_upper_bound(&data);
        prop_assert!(b <= genus(&data));
        let sizes: usize = frobenius_orbits(p, q).iter().map(Vec::len).sum();
        prop_assert_eq!(sizes as u64, q - 1);
    }

    #[test]
    fn decimal_parsing_is_exact(n in -1_000_000i64..1_000_000, k in 0u32..8) {
        let text = format!("{}e-{}", n, k);
        let expected = Rational::new(n.into(), 10i64.pow(k).into());
        prop_assert_eq!(parse_decimal(&text).unwrap(), expected);
    }

    #[test]
    fn next_prime_is_prime(n in 0i64..1_000_000) {
        let p = next_prime(n);
        prop_assert!(p >= n && is_prime(p));
        prop_assert!((n..p).all(|m| !is_prime(m)));
    }
}
