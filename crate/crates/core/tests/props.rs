//! Property-based checks of the algebra kernel and the closed-form
//! invariants.

use proptest::prelude::*;

use resingular::ideal::Ideal;
use resingular::invariants::bernstein_normal_crossing;
use resingular::parse::parse_poly;
use resingular::poly::{rat, Poly};
use resingular::ring::Ring;
use resingular::univar::{rational_roots, UnivariatePoly};
use resingular::Rat;

fn small_poly() -> impl Strategy<Value = (Vec<(i64, u32, u32)>,)> {
    // terms (coefficient, exponent of x, exponent of y)
    (proptest::collection::vec((-4i64..=4, 0u32..4, 0u32..4), 0..6),)
}

fn build(ring: &std::sync::Arc<Ring>, terms: &[(i64, u32, u32)]) -> Poly {
    let mut p = Poly::zero(ring);
    for &(c, a, b) in terms {
        let term = Poly::var(ring, 0)
            .pow(a)
            .scale(&rat(c));
        let term = &term * &Poly::var(ring, 1).pow(b);
        p = &p + &term;
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn polynomial_ring_axioms((ta,) in small_poly(), (tb,) in small_poly(), (tc,) in small_poly()) {
        let r = Ring::new(vec!["x", "y"]);
        let (a, b, c) = (build(&r, &ta), build(&r, &tb), build(&r, &tc));
        // commutativity, associativity, distributivity
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        let left = &a * &(&b + &c);
        let right = &(&a * &b) + &(&a * &c);
        prop_assert_eq!(left, right);
    }

    #[test]
    fn division_roundtrip((ta,) in small_poly(), (tb,) in small_poly()) {
        let r = Ring::new(vec!["x", "y"]);
        let (a, b) = (build(&r, &ta), build(&r, &tb));
        prop_assume!(!b.is_zero());
        let prod = &a * &b;
        let q = prod.try_div(&b).expect("product divisible by factor");
        prop_assert_eq!(q, a);
    }

    #[test]
    fn ideal_contains_random_combination((ta,) in small_poly(), (tb,) in small_poly(), (tc,) in small_poly()) {
        let r = Ring::new(vec!["x", "y"]);
        let (a, b, c) = (build(&r, &ta), build(&r, &tb), build(&r, &tc));
        prop_assume!(!a.is_zero() || !b.is_zero());
        let i = Ideal::new(&r, vec![a.clone(), b.clone()]);
        let combo = &(&a * &c) + &b;
        prop_assert!(i.contains(&combo));
    }

    #[test]
    fn univariate_gcd_divides_both(ca in proptest::collection::vec(-5i64..=5, 1..6),
                                   cb in proptest::collection::vec(-5i64..=5, 1..6)) {
        let a = UnivariatePoly::from_coeffs(ca.iter().map(|&c| rat(c)).collect());
        let b = UnivariatePoly::from_coeffs(cb.iter().map(|&c| rat(c)).collect());
        prop_assume!(!a.is_zero() && !b.is_zero());
        let g = a.gcd(&b);
        prop_assert!(a.try_div(&g).is_some());
        prop_assert!(b.try_div(&g).is_some());
    }

    #[test]
    fn bernstein_roots_are_minus_k_over_r(r in proptest::collection::vec(1u32..5, 0..4)) {
        let b = bernstein_normal_crossing(&r);
        let expected_degree: u32 = r.iter().sum();
        prop_assert_eq!(b.degree(), Some(expected_degree as usize));
        for (root, _) in rational_roots(&b) {
            let neg = -root;
            let ok = r.iter().any(|&ri| {
                (1..=ri).any(|k| neg == Rat::new((k as i64).into(), (ri as i64).into()))
            });
            prop_assert!(ok, "unexpected Bernstein root");
        }
        // every root is in (−∞, 0): evaluation at any s ≥ 0 is positive
        prop_assert!(b.eval(&rat(0)) > rat(0));
        prop_assert!(b.eval(&rat(7)) > rat(0));
    }

    #[test]
    fn groebner_ideal_membership_of_generators(terms in proptest::collection::vec(
        (-3i64..=3, 0u32..3, 0u32..3), 1..4))
    {
        let r = Ring::new(vec!["x", "y"]);
        let g1 = build(&r, &terms);
        prop_assume!(!g1.is_zero());
        let g2 = parse_poly("x*y - 1", &r).unwrap();
        let i = Ideal::new(&r, vec![g1.clone(), g2.clone()]);
        prop_assert!(i.contains(&g1));
        prop_assert!(i.contains(&g2));
        prop_assert!(i.contains(&(&g1 * &g2)));
    }
}
