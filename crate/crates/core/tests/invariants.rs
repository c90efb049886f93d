//! Property tests tying the fast paths to their oracles.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use lacunary_core::diophantine::GammaTable;
use lacunary_core::discrepancy::{
    brute_force_discrepancy, extremal_discrepancy_exact, star_discrepancy_exact,
    DiscrepancyKind, ExactPoints,
};
use lacunary_core::lil::{fold_chain_check, koksma_check, symmetric_koksma_check};
use lacunary_core::rational::UnitRational;
use lacunary_core::sigma::{sigma_sq_closed_form_theorem1, sigma_sq_series, BVFunctionSpec};
use lacunary_core::SequenceFamily;

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// A random point of [0,1] as p/q with bounded denominator.
fn unit_rat() -> impl Strategy<Value = BigRational> {
    (1i64..=60, 0i64..=60).prop_map(|(q, p)| rat(p.min(q), q))
}

fn point_set() -> impl Strategy<Value = ExactPoints> {
    proptest::collection::vec(unit_rat(), 1..40)
        .prop_map(|v| ExactPoints::new(v).expect("in range"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Modular fractional parts agree with the full big-integer product.
    #[test]
    fn frac_part_matches_bigint(p in 1i64..1000, q in 2i64..1000, k in 1u64..=12) {
        prop_assume!(p < q);
        let x = UnitRational::new(BigInt::from(p), BigInt::from(q)).unwrap();
        for fam in [
            SequenceFamily::Theorem1,
            SequenceFamily::geometric(2).unwrap(),
            SequenceFamily::powers_minus_one(3).unwrap(),
        ] {
            let fast = fam.frac_part(k, &x).unwrap();
            let full = BigRational::from(fam.term(k).unwrap())
                * BigRational::new(BigInt::from(p), BigInt::from(q));
            let want = &full - full.floor();
            prop_assert_eq!(fast.as_rational(), want);
        }
    }

    /// `D* <= D <= 2 D*` on arbitrary rational point sets.
    #[test]
    fn star_extremal_sandwich(ps in point_set()) {
        let star = star_discrepancy_exact(&ps).value;
        let ext = extremal_discrepancy_exact(&ps).value;
        prop_assert!(star <= ext);
        prop_assert!(ext <= rat(2, 1) * &star);
    }

    /// Sorted-points formulas match the endpoint-enumeration oracle.
    #[test]
    fn closed_formulas_match_oracle(ps in point_set()) {
        let star = star_discrepancy_exact(&ps).value;
        let oracle = brute_force_discrepancy(&ps, DiscrepancyKind::Star).unwrap().value;
        prop_assert_eq!(star, oracle);
        let ext = extremal_discrepancy_exact(&ps).value;
        let oracle = brute_force_discrepancy(&ps, DiscrepancyKind::Extremal).unwrap().value;
        prop_assert_eq!(ext, oracle);
    }

    /// The variation bound holds exactly for random arcs and point sets.
    #[test]
    fn variation_bound_holds(ps in point_set(), a in unit_rat(), len_num in 1i64..=9) {
        let len = rat(len_num, 10);
        let b = &a + &len;
        let f = BVFunctionSpec::indicator(a, b).unwrap();
        let c = koksma_check(&f, &ps).unwrap();
        prop_assert!(c.holds, "lhs {} rhs {}", c.lhs, c.rhs);
    }

    /// The halved bound holds for arcs centered at 1/2.
    #[test]
    fn symmetric_bound_holds(ps in point_set(), half_len in 1i64..=9) {
        let a = rat(10 - half_len, 20);
        let b = rat(10 + half_len, 20);
        let f = BVFunctionSpec::indicator(a, b).unwrap();
        let c = symmetric_koksma_check(&f, &ps).unwrap();
        prop_assert!(c.holds, "lhs {} rhs {}", c.lhs, c.rhs);
    }

    /// Folding to `min(x, 1-x)` and doubling never increases the discrepancy.
    #[test]
    fn fold_chain_holds(ps in point_set()) {
        let c = fold_chain_check(&ps);
        prop_assert!(c.holds, "lhs {} rhs {}", c.lhs, c.rhs);
    }

    /// Closed-form variance agrees with the truncated series within its
    /// rigorous tail bound.
    #[test]
    fn closed_form_within_series_tail(a in unit_rat(), x in unit_rat()) {
        prop_assume!(a < rat(1, 1)); // [0,1] is not an arc
        let table = GammaTable::theorem1(1500);
        let exact = sigma_sq_closed_form_theorem1(&a, &x).unwrap();
        let f = BVFunctionSpec::indicator(rat(0, 1), a).unwrap();
        let s = sigma_sq_series(&f, &table, x.to_f64().unwrap(), 1500, None);
        let diff = (s.value - exact.to_f64().unwrap()).abs();
        prop_assert!(diff <= s.tail_bound + 1e-12, "diff {} tail {}", diff, s.tail_bound);
    }
}
