mod common;

use common::{build_form, cyclic_action, homogeneous_part, raw_terms, torus_action};
use invariant_forms::euler::{bracket_defect, dmu, horizontal_piece, EulerOperator};
use invariant_forms::invariant::{
    hilbert_basis, hilbert_basis_certificate, invariant_form_generators, monoid_hilbert_series,
};
use invariant_forms::piece::{graded_piece_basis, invariant_monomials};
use invariant_forms::smoothness::{monoid_smooth, pseudo_reflections, shephard_todd_smooth, RouteVerdict};
use invariant_forms::ActionSpec;
use proptest::prelude::*;

fn sign(k: usize) -> num_rational::BigRational {
    num_rational::BigRational::from_integer(if k % 2 == 0 { 1 } else { -1 }.into())
}

proptest! {
    #[test]
    fn euler_squares_to_zero(a in torus_action(), k in 0usize..=4, raw in raw_terms(6)) {
        let k = k.min(a.n);
        let f = build_form(a.n, k, &raw);
        let e = EulerOperator::new(&a, 0).unwrap();
        prop_assert!(e.apply(&e.apply(&f)).is_zero());
    }

    #[test]
    fn euler_leibniz(a in torus_action(), k in 0usize..=2, l in 0usize..=2, r1 in raw_terms(4), r2 in raw_terms(4)) {
        let (k, l) = (k.min(a.n), l.min(a.n));
        let f = build_form(a.n, k, &r1);
        let g = build_form(a.n, l, &r2);
        let e = EulerOperator::new(&a, 0).unwrap();
        // e(f∧g) = f∧e(g) + (-1)^l e(f)∧g
        let lhs = e.apply(&f.wedge(&g).unwrap());
        let rhs = &f.wedge(&e.apply(&g)).unwrap() + &e.apply(&f).wedge(&g).unwrap().scale(&sign(l));
        prop_assert!((&lhs - &rhs).is_zero());
    }

    #[test]
    fn d_squares_to_zero(n in 1usize..=4, k in 0usize..=3, raw in raw_terms(6)) {
        let f = build_form(n, k.min(n), &raw);
        prop_assert!(f.exterior_derivative().exterior_derivative().is_zero());
    }

    #[test]
    fn d_leibniz(n in 1usize..=4, k in 0usize..=2, l in 0usize..=2, r1 in raw_terms(4), r2 in raw_terms(4)) {
        let (k, l) = (k.min(n), l.min(n));
        let f = build_form(n, k, &r1);
        let g = build_form(n, l, &r2);
        let lhs = f.wedge(&g).unwrap().exterior_derivative();
        let rhs = &f.exterior_derivative().wedge(&g).unwrap()
            + &f.wedge(&g.exterior_derivative()).unwrap().scale(&sign(k));
        prop_assert!((&lhs - &rhs).is_zero());
    }

    #[test]
    fn bracket_is_weight_times_identity(a in torus_action(), k in 0usize..=4, raw in raw_terms(6)) {
        let f = homogeneous_part(&a, &build_form(a.n, k.min(a.n), &raw));
        prop_assert!(bracket_defect(&a, 0, &f).unwrap().is_zero());
    }

    #[test]
    fn weights_add_under_wedge(a in torus_action(), k in 0usize..=2, l in 0usize..=2, r1 in raw_terms(3), r2 in raw_terms(3)) {
        let f = homogeneous_part(&a, &build_form(a.n, k.min(a.n), &r1));
        let g = homogeneous_part(&a, &build_form(a.n, l.min(a.n), &r2));
        let fg = f.wedge(&g).unwrap();
        prop_assume!(!fg.is_zero());
        let expected = a.add_weights(&a.weight_of_form(&f).unwrap(), &a.weight_of_form(&g).unwrap());
        prop_assert_eq!(a.weight_of_form(&fg).unwrap(), expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn horizontal_forms_are_killed_by_every_factor(w1 in prop::collection::vec(-2i64..=2, 3), w2 in prop::collection::vec(-2i64..=2, 3), k in 1usize..=2, d in 1u32..=4) {
        let a = ActionSpec { n: 3, torus_rank: 2, finite_orders: vec![], weight_matrix: vec![w1, w2] };
        let zero = a.zero_weight();
        for f in horizontal_piece(&a, k, d, &zero).unwrap() {
            prop_assert!(dmu(&a, &f).iter().all(|g| g.is_zero()));
        }
    }

    #[test]
    fn hilbert_series_matches_enumeration(a in cyclic_action(6, 2..=3)) {
        let hb = hilbert_basis(&a, hilbert_basis_certificate(&a).max(1)).unwrap();
        prop_assert!(hb.complete);
        let direct: Vec<usize> = (0..=8).map(|d| invariant_monomials(&a, d).len()).collect();
        prop_assert_eq!(monoid_hilbert_series(&hb, 8).coefficients, direct);
    }

    #[test]
    fn form_generators_are_minimal(a in cyclic_action(5, 2..=2), k in 1usize..=2) {
        let module = invariant_form_generators(&a, k, false, 8).unwrap();
        let zero = a.zero_weight();
        for (i, g) in module.generators.iter().enumerate() {
            let d = g.total_degree().unwrap();
            let all = graded_piece_basis(&module.generators, d, &zero, &a).unwrap().len();
            let rest: Vec<_> = module.generators.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, h)| h.clone()).collect();
            let without = graded_piece_basis(&rest, d, &zero, &a).unwrap().len();
            prop_assert!(without < all, "generator {} is redundant", g);
        }
    }

    #[test]
    fn pseudo_reflections_closed_under_inverse(a in cyclic_action(8, 2..=3)) {
        let prs = pseudo_reflections(&a).unwrap();
        for g in &prs {
            prop_assert!(prs.contains(&g.inverse(&a)));
        }
    }

    #[test]
    fn reflection_groups_are_exactly_free_monoids(a in cyclic_action(8, 2..=3)) {
        let hb = hilbert_basis(&a, hilbert_basis_certificate(&a).max(1)).unwrap();
        let st = shephard_todd_smooth(&a).unwrap();
        prop_assert_eq!(monoid_smooth(&hb), if st { RouteVerdict::Smooth } else { RouteVerdict::Singular });
    }
}
