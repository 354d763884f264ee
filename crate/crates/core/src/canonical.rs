//! The canonical module of the quotient, realized as invariant horizontal
//! top forms and compared with the interior monomials of the weight-zero
//! cone.
//!
//! Series are indexed by total degree: `f dx_I` counts in degree
//! `deg f + |I|`, so it is compared with interior monomials of that degree.

use serde::Serialize;

use crate::action::ActionSpec;
use crate::error::{Error, Result};
use crate::invariant::{hilbert_basis, hilbert_series_of, monoid_cone, FormModule, GradedSubmodule, HilbertSeries};
use crate::piece::invariant_monomials;
use crate::pullback::compare;
use crate::smoothness::{monoid_smooth, pseudo_reflections, quotient_dimension, GroupElement, RouteVerdict};

/// Minimal generators of the invariant horizontal `dim Y`-forms.
pub fn canonical_invariants(action: &ActionSpec, bound: u32) -> Result<GradedSubmodule> {
    let n_y = quotient_dimension(action);
    let hb = hilbert_basis(action, bound.max(1))?;
    Ok(FormModule::compute(action, &hb, n_y, true, bound)?.submodule())
}

/// Counts of weight-zero monomials in the relative interior of the
/// weight-zero cone, degrees `0..=d`.
pub fn toric_canonical_series(action: &ActionSpec, d: u32) -> HilbertSeries {
    let rays = monoid_cone(action).extreme_rays();
    let support: Vec<usize> = (0..action.n)
        .filter(|&i| rays.iter().any(|r| r.generator[i] > 0))
        .collect();
    let coefficients = (0..=d)
        .map(|deg| {
            invariant_monomials(action, deg)
                .iter()
                .filter(|m| support.iter().all(|&i| m[i] > 0))
                .count()
        })
        .collect();
    HilbertSeries { coefficients }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainRow {
    pub degree: u32,
    pub image_dim: usize,
    pub target_dim: usize,
    pub strict: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainCheck {
    pub k: usize,
    pub rows: Vec<ChainRow>,
    pub strict_degrees: Vec<u32>,
    pub smooth: RouteVerdict,
}

/// Checks `dim(image) ≤ dim(target)` in every degree up to `bound`, with
/// equality throughout when the quotient is smooth. A violation is an
/// engine inconsistency.
pub fn containment_chain_check(action: &ActionSpec, k: usize, bound: u32) -> Result<ChainCheck> {
    let hb = hilbert_basis(action, bound.max(1))?;
    let target = FormModule::compute(action, &hb, k, true, bound)?;
    let check = compare(action, &hb, &target)?;
    let smooth = monoid_smooth(&hb);
    let rows: Vec<ChainRow> = check
        .table
        .rows
        .iter()
        .map(|r| ChainRow {
            degree: r.degree,
            image_dim: r.image_dim,
            target_dim: r.target_dim,
            strict: r.image_dim < r.target_dim,
        })
        .collect();
    if let Some(r) = rows.iter().find(|r| r.image_dim > r.target_dim) {
        return Err(Error::Inconsistency(format!(
            "image exceeds target in degree {}",
            r.degree
        )));
    }
    let strict_degrees: Vec<u32> = rows.iter().filter(|r| r.strict).map(|r| r.degree).collect();
    if smooth == RouteVerdict::Smooth && !strict_degrees.is_empty() {
        return Err(Error::Inconsistency(format!(
            "smooth quotient but the pullback of {}-forms is not onto in degrees {:?}",
            k, strict_degrees
        )));
    }
    Ok(ChainCheck {
        k,
        rows,
        strict_degrees,
        smooth,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalComparison {
    pub form_degree: usize,
    pub forms: Vec<usize>,
    pub toric: Vec<usize>,
    pub matches: bool,
    /// Whether the top-form generators are certified through the truncation.
    pub certified: bool,
}

/// Pseudo-reflections of the finite part, ignoring any torus factor.
pub fn finite_part_pseudo_reflections(action: &ActionSpec) -> Result<Vec<GroupElement>> {
    if action.finite_rank() == 0 {
        return Ok(vec![]);
    }
    let finite = ActionSpec {
        n: action.n,
        torus_rank: 0,
        finite_orders: action.finite_orders.clone(),
        weight_matrix: action.weight_matrix[action.torus_rank..].to_vec(),
    };
    pseudo_reflections(&finite)
}

/// Compares the series of the invariant horizontal top forms with the
/// interior-monomial series through degree `d`, without the small-group
/// precondition.
pub fn canonical_comparison(action: &ActionSpec, d: u32) -> Result<CanonicalComparison> {
    let canonical = canonical_invariants(action, d)?;
    let forms = hilbert_series_of(&canonical, action, d)?.coefficients;
    let toric = toric_canonical_series(action, d).coefficients;
    Ok(CanonicalComparison {
        form_degree: canonical.form_degree,
        matches: forms == toric,
        forms,
        toric,
        certified: canonical.certified,
    })
}

/// Whether the two canonical series agree through degree `d`. Requires a
/// finite part without pseudo-reflections.
pub fn canonical_duality_check(action: &ActionSpec, d: u32) -> Result<CanonicalComparison> {
    let prs = finite_part_pseudo_reflections(action)?;
    if !prs.is_empty() {
        let names: Vec<String> = prs.iter().map(|g| format!("{:?}", g.exponents)).collect();
        return Err(Error::Precondition(format!(
            "finite part contains pseudo-reflections {}",
            names.join(", ")
        )));
    }
    canonical_comparison(action, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_generators() {
        let c = canonical_invariants(&ActionSpec::cyclic(2, &[1, 1]), 6).unwrap();
        assert_eq!(c.generators.len(), 1);
        assert_eq!(c.generators[0].to_string(), "dx1∧dx2");
        let c = canonical_invariants(&ActionSpec::cyclic(3, &[1, 1]), 6).unwrap();
        let shown: Vec<String> = c.generators.iter().map(|g| g.to_string()).collect();
        assert_eq!(shown, vec!["x1*dx1∧dx2", "x2*dx1∧dx2"]);
        let c = canonical_invariants(&ActionSpec::torus(&[1, -1]), 6).unwrap();
        assert_eq!(c.form_degree, 1);
        assert_eq!(c.generators.len(), 1);
        assert_eq!(c.generators[0].to_string(), "x1*dx2 + x2*dx1");
    }

    #[test]
    fn toric_series_examples() {
        let s = toric_canonical_series(&ActionSpec::cyclic(2, &[1, 1]), 4);
        assert_eq!(s.coefficients, vec![0, 0, 1, 0, 3]);
        let s = toric_canonical_series(&ActionSpec::cyclic(2, &[1, 0]), 3);
        assert_eq!(s.coefficients, vec![0, 0, 0, 1]);
        let s = toric_canonical_series(&ActionSpec::torus(&[1, -1]), 4);
        assert_eq!(s.coefficients, vec![0, 0, 1, 0, 1]);
    }

    #[test]
    fn duality_examples() {
        let c = canonical_duality_check(&ActionSpec::cyclic(2, &[1, 1]), 6).unwrap();
        assert!(c.matches);
        assert_eq!(c.forms, vec![0, 0, 1, 0, 3, 0, 5]);
        let c = canonical_duality_check(&ActionSpec::cyclic(3, &[1, 1]), 6).unwrap();
        assert!(c.matches);
        assert_eq!(c.forms, vec![0, 0, 0, 2, 0, 0, 5]);
        let c = canonical_duality_check(&ActionSpec::torus(&[1, -1]), 4).unwrap();
        assert!(c.matches);
        assert!(matches!(
            canonical_duality_check(&ActionSpec::cyclic(2, &[1, 0]), 4),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn chain_examples() {
        let c = containment_chain_check(&ActionSpec::cyclic(2, &[1, 1]), 1, 6).unwrap();
        assert_eq!(c.strict_degrees, vec![2]);
        let c = containment_chain_check(&ActionSpec::cyclic(2, &[1, 0]), 1, 6).unwrap();
        assert!(c.strict_degrees.is_empty());
        for k in 0..=2 {
            let c = containment_chain_check(&ActionSpec::trivial(2), k, 4).unwrap();
            assert!(c.strict_degrees.is_empty());
        }
    }
}
