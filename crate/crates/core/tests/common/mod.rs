#![allow(dead_code)]

use invariant_forms::{ActionSpec, Blade, PolyForm, Polynomial};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

/// Raw material for one term: blade choice, exponents, coefficient.
pub type RawTerm = (usize, [u32; 4], i32);

pub fn raw_terms(max_terms: usize) -> impl Strategy<Value = Vec<RawTerm>> {
    prop::collection::vec((0usize..64, [0u32..4, 0u32..4, 0u32..4, 0u32..4], -5i32..=5), 1..=max_terms)
}

/// A k-form on `n` variables with polynomial degree at most 6.
pub fn build_form(n: usize, k: usize, raw: &[RawTerm]) -> PolyForm {
    let blades = Blade::all(n, k);
    let mut f = PolyForm::zero(n, k);
    for (b, e, c) in raw {
        let mut exp: Vec<u32> = e[..n].to_vec();
        while exp.iter().sum::<u32>() > 6 {
            let i = exp.iter().position(|&x| x > 0).unwrap();
            exp[i] -= 1;
        }
        f.add_term(blades[b % blades.len()], exp, BigRational::from_integer(BigInt::from(*c)));
    }
    f
}

/// The part of `f` whose terms share the weight of its first term.
pub fn homogeneous_part(action: &ActionSpec, f: &PolyForm) -> PolyForm {
    let mut out = PolyForm::zero(f.nvars(), f.degree());
    let mut target = None;
    for (b, e, c) in f.terms() {
        let w = action.weight_of_term(b, e);
        let t = target.get_or_insert_with(|| w.clone());
        if *t == w {
            out.add_term(b, e.clone(), c.clone());
        }
    }
    out
}

pub fn torus_action() -> impl Strategy<Value = ActionSpec> {
    (2usize..=4).prop_flat_map(|n| prop::collection::vec(-3i64..=3, n).prop_map(|w| ActionSpec::torus(&w)))
}

pub fn cyclic_action(max_m: u64, ns: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = ActionSpec> {
    (2u64..=max_m, ns).prop_flat_map(|(m, n)| {
        prop::collection::vec(0i64..m as i64, n).prop_map(move |w| ActionSpec::cyclic(m, &w))
    })
}

pub fn poly(n: usize, raw: &[RawTerm]) -> Polynomial {
    build_form(n, 0, raw).component(Blade::EMPTY).cloned().unwrap_or_else(|| Polynomial::zero(n))
}
