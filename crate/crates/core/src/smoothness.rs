//! Smoothness of the quotient by three routes: pseudo-reflections of the
//! finite part, freeness of the weight-zero monoid, and surjectivity of the
//! invariant pullback in every form degree up to `dim Y`.
//!
//! A fourth, dual-cone computation locates the singular locus: the quotient
//! is the affine toric variety of the weight-zero monoid, which is smooth
//! along the orbit of a face exactly when the matching face of the dual cone
//! is part of a lattice basis.

use std::collections::{BTreeSet, VecDeque};

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::action::ActionSpec;
use crate::cone::span_dimension;
use crate::error::{Error, Result};
use crate::invariant::{monoid_cone, MonoidBasis};
use crate::lattice::{coordinates, is_part_of_basis, lattice_basis};
use crate::pullback::{Surjectivity, SurjectivityCheck};

/// Largest finite group the element enumeration accepts.
pub const MAX_GROUP_ORDER: u64 = 1_000_000;

/// An element of the finite part, one residue per cyclic factor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GroupElement {
    pub exponents: Vec<u64>,
}

impl GroupElement {
    pub fn inverse(&self, action: &ActionSpec) -> GroupElement {
        GroupElement {
            exponents: self
                .exponents
                .iter()
                .zip(&action.finite_orders)
                .map(|(&g, &m)| (m - g) % m)
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.exponents.iter().all(|&g| g == 0)
    }
}

fn finite_group_order(action: &ActionSpec) -> Result<u64> {
    let mut order: u64 = 1;
    for &m in &action.finite_orders {
        order = order
            .checked_mul(m)
            .filter(|&o| o <= MAX_GROUP_ORDER)
            .ok_or_else(|| {
                Error::Resource(format!(
                    "finite group has more than {} elements",
                    MAX_GROUP_ORDER
                ))
            })?;
    }
    Ok(order)
}

fn element_at(action: &ActionSpec, mut index: u64) -> GroupElement {
    let exponents = action
        .finite_orders
        .iter()
        .map(|&m| {
            let r = index % m;
            index /= m;
            r
        })
        .collect();
    GroupElement { exponents }
}

fn index_of(action: &ActionSpec, g: &GroupElement) -> u64 {
    let mut index = 0;
    for (&r, &m) in g.exponents.iter().zip(&action.finite_orders).rev() {
        index = index * m + r;
    }
    index
}

/// Whether `g` acts nontrivially on each coordinate.
pub fn moved_coordinates(action: &ActionSpec, g: &GroupElement) -> Vec<bool> {
    let l = action.finite_orders.iter().fold(1u64, |a, &m| a.lcm(&m));
    (0..action.n)
        .map(|i| {
            let phase: u128 = (0..action.finite_rank())
                .map(|j| {
                    let m = action.finite_orders[j];
                    let w = action.finite_row(j)[i].rem_euclid(m as i64) as u128;
                    g.exponents[j] as u128 * w * (l / m) as u128
                })
                .sum();
            phase % l as u128 != 0
        })
        .collect()
}

/// Codimension of the fixed locus of `g`.
pub fn fixed_locus_codimension(action: &ActionSpec, g: &GroupElement) -> usize {
    moved_coordinates(action, g).iter().filter(|&&m| m).count()
}

fn require_finite(action: &ActionSpec) -> Result<u64> {
    if action.torus_rank > 0 {
        return Err(Error::UnsupportedRoute(
            "pseudo-reflections are defined for finite groups only; use the monoid route".into(),
        ));
    }
    finite_group_order(action)
}

/// Elements moving exactly one coordinate, in enumeration order.
pub fn pseudo_reflections(action: &ActionSpec) -> Result<Vec<GroupElement>> {
    let order = require_finite(action)?;
    Ok((1..order)
        .into_par_iter()
        .map(|i| element_at(action, i))
        .filter(|g| fixed_locus_codimension(action, g) == 1)
        .collect())
}

/// Number of group elements by fixed-locus codimension, index = codimension.
pub fn codimension_profile(action: &ActionSpec) -> Result<Vec<usize>> {
    let order = require_finite(action)?;
    let mut counts = vec![0; action.n + 1];
    for i in 0..order {
        counts[fixed_locus_codimension(action, &element_at(action, i))] += 1;
    }
    Ok(counts)
}

/// Order of the subgroup generated by `gens`, by breadth-first closure.
fn generated_order(action: &ActionSpec, order: u64, gens: &[GroupElement]) -> u64 {
    let mut seen = vec![false; order as usize];
    let mut queue = VecDeque::from([GroupElement {
        exponents: vec![0; action.finite_rank()],
    }]);
    seen[0] = true;
    let mut count = 1;
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = GroupElement {
                exponents: g
                    .exponents
                    .iter()
                    .zip(&s.exponents)
                    .zip(&action.finite_orders)
                    .map(|((a, b), m)| (a + b) % m)
                    .collect(),
            };
            let idx = index_of(action, &h) as usize;
            if !seen[idx] {
                seen[idx] = true;
                count += 1;
                queue.push_back(h);
            }
        }
    }
    count
}

/// Whether the group is generated by pseudo-reflections together with the
/// elements acting trivially, i.e. its image in `GL_n` is a reflection group.
pub fn shephard_todd_smooth(action: &ActionSpec) -> Result<bool> {
    let order = require_finite(action)?;
    let mut gens = pseudo_reflections(action)?;
    gens.extend(
        (1..order)
            .map(|i| element_at(action, i))
            .filter(|g| fixed_locus_codimension(action, g) == 0),
    );
    Ok(generated_order(action, order, &gens) == order)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RouteVerdict {
    Smooth,
    Singular,
    Inconclusive,
}

impl RouteVerdict {
    fn from_bool(smooth: bool) -> Self {
        if smooth {
            RouteVerdict::Smooth
        } else {
            RouteVerdict::Singular
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            RouteVerdict::Smooth => Some(true),
            RouteVerdict::Singular => Some(false),
            RouteVerdict::Inconclusive => None,
        }
    }
}

/// Freeness of the weight-zero monoid. A normal affine monoid is free iff its
/// Hilbert basis is linearly independent, since the basis generates the
/// monoid's group.
pub fn monoid_smooth(hb: &MonoidBasis) -> RouteVerdict {
    if !hb.complete {
        return RouteVerdict::Inconclusive;
    }
    let rank = crate::linalg::rank(hb.generators.iter().map(|g| {
        g.iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i, c.into()))
            .collect()
    }));
    RouteVerdict::from_bool(rank == hb.generators.len())
}

/// Dimension of the quotient: the dimension of the weight-zero cone.
pub fn quotient_dimension(action: &ActionSpec) -> usize {
    span_dimension(&monoid_cone(action).extreme_rays())
}

/// Smoothness along the torus orbits of the quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularLocus {
    /// Smooth at the origin, hence everywhere.
    pub smooth: bool,
    /// Singular at most at the origin.
    pub isolated: bool,
    /// Dimension of the largest singular orbit closure, `None` when smooth.
    pub dimension: Option<usize>,
}

/// Singular locus of the quotient from the dual cone of the weight-zero
/// monoid. Needs a complete Hilbert basis.
pub fn singular_locus(action: &ActionSpec, hb: &MonoidBasis) -> Result<SingularLocus> {
    if !hb.complete {
        return Err(Error::Precondition(
            "singular locus needs a certified Hilbert basis".into(),
        ));
    }
    let n = action.n;
    let gens: Vec<Vec<i64>> = hb
        .generators
        .iter()
        .map(|g| g.iter().map(|&c| c as i64).collect())
        .collect();
    let basis = lattice_basis(&gens);
    let d = basis.len();
    if d == 0 {
        return Ok(SingularLocus {
            smooth: true,
            isolated: true,
            dimension: None,
        });
    }
    // Faces of the cone, each recorded by the set of basis elements it holds.
    let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
    for mask in 0u32..(1 << n) {
        let face: Vec<usize> = (0..gens.len())
            .filter(|&j| (0..n).all(|i| mask & (1 << i) == 0 || gens[j][i] == 0))
            .collect();
        faces.insert(face);
    }
    let face_dim = |f: &[usize]| lattice_basis(&f.iter().map(|&j| gens[j].clone()).collect::<Vec<_>>()).len();
    // Primitive inward normals of the facets, in coordinates dual to `basis`.
    let mut facets: Vec<(Vec<usize>, Vec<i64>)> = Vec::new();
    for f in faces.iter().filter(|f| face_dim(f) + 1 == d) {
        let i = (0..n)
            .find(|&i| f.iter().all(|&j| gens[j][i] == 0) && gens.iter().any(|g| g[i] != 0))
            .ok_or_else(|| Error::Inconsistency("facet without a vanishing coordinate".into()))?;
        let mut normal: Vec<i64> = basis.iter().map(|b| b[i]).collect();
        let g = normal.iter().fold(0i64, |a, &c| a.gcd(&c));
        normal.iter_mut().for_each(|c| *c /= g);
        facets.push((f.clone(), normal));
    }
    for g in &gens {
        if coordinates(&basis, g).is_none() {
            return Err(Error::Inconsistency("generator outside its own lattice".into()));
        }
    }
    let mut smooth = true;
    let mut isolated = true;
    let mut dimension: Option<usize> = None;
    for f in &faces {
        let normals: Vec<Vec<i64>> = facets
            .iter()
            .filter(|(facet, _)| f.iter().all(|j| facet.contains(j)))
            .map(|(_, v)| v.clone())
            .collect();
        if is_part_of_basis(&normals) {
            continue;
        }
        let dim = face_dim(f);
        if dim > 0 {
            isolated = false;
        }
        smooth = false;
        dimension = Some(dimension.map_or(dim, |x: usize| x.max(dim)));
    }
    Ok(SingularLocus {
        smooth,
        isolated,
        dimension,
    })
}

/// Per-route smoothness verdicts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothnessVerdict {
    /// `None` when the action has a torus part.
    pub shephard_todd: Option<RouteVerdict>,
    pub monoid: RouteVerdict,
    /// Smooth iff surjective for every k in `1..=dim Y`.
    pub surjectivity: RouteVerdict,
    /// All conclusive routes give the same answer.
    pub agreement: bool,
    pub verdict: RouteVerdict,
    pub reasons: Vec<String>,
}

/// The surjectivity route from per-k checks for k in `1..=dim Y`.
pub fn surjectivity_route(checks: &[SurjectivityCheck]) -> RouteVerdict {
    if checks
        .iter()
        .any(|c| matches!(c.verdict, Surjectivity::NotSurjective { .. }))
    {
        RouteVerdict::Singular
    } else if checks.iter().all(|c| c.verdict == Surjectivity::Surjective) {
        RouteVerdict::Smooth
    } else {
        RouteVerdict::Inconclusive
    }
}

/// The Shephard–Todd route: `None` with a torus part, inconclusive with a
/// reason when the group is too large to enumerate.
pub fn shephard_todd_route(action: &ActionSpec) -> Result<(Option<RouteVerdict>, Option<String>)> {
    if action.torus_rank > 0 {
        return Ok((None, None));
    }
    match shephard_todd_smooth(action) {
        Ok(b) => Ok((Some(RouteVerdict::from_bool(b)), None)),
        Err(Error::Resource(reason)) => Ok((Some(RouteVerdict::Inconclusive), Some(reason))),
        Err(e) => Err(e),
    }
}

/// Combines the route verdicts. `checks` must cover k = 1..=dim Y.
pub fn combine_routes(
    shephard_todd: Option<RouteVerdict>,
    hb: &MonoidBasis,
    checks: &[SurjectivityCheck],
) -> SmoothnessVerdict {
    let monoid = monoid_smooth(hb);
    let surjectivity = surjectivity_route(checks);
    let mut reasons = Vec::new();
    if monoid == RouteVerdict::Inconclusive {
        reasons.push(format!(
            "Hilbert basis searched to degree {} but certified only at {}",
            hb.search_bound, hb.certificate_degree
        ));
    }
    if surjectivity == RouteVerdict::Inconclusive {
        for c in checks {
            if let Surjectivity::Inconclusive { reason } = &c.verdict {
                reasons.push(format!("k={}: {}", c.k, reason));
            }
        }
    }
    let routes: Vec<RouteVerdict> = shephard_todd.into_iter().chain([monoid, surjectivity]).collect();
    let conclusive: Vec<bool> = routes.iter().filter_map(|r| r.as_bool()).collect();
    let agreement = conclusive.windows(2).all(|w| w[0] == w[1]);
    let verdict = if routes.contains(&RouteVerdict::Inconclusive) || !agreement {
        RouteVerdict::Inconclusive
    } else {
        routes[0]
    };
    if !agreement {
        reasons.push("conclusive routes disagree".into());
    }
    SmoothnessVerdict {
        shephard_todd,
        monoid,
        surjectivity,
        agreement,
        verdict,
        reasons,
    }
}

/// Runs every applicable route at degree bound `bound`.
pub fn smoothness_verdict(action: &ActionSpec, bound: u32) -> Result<SmoothnessVerdict> {
    let hb = crate::invariant::hilbert_basis(action, bound.max(1))?;
    let dim_y = quotient_dimension(action);
    let checks = (1..=dim_y)
        .into_par_iter()
        .map(|k| {
            let target = crate::invariant::FormModule::compute(action, &hb, k, true, bound)?;
            crate::pullback::compare(action, &hb, &target)
        })
        .collect::<Result<Vec<_>>>()?;
    let (st, st_reason) = shephard_todd_route(action)?;
    let mut v = combine_routes(st, &hb, &checks);
    v.reasons.extend(st_reason);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariant::hilbert_basis;

    fn ge(e: &[u64]) -> GroupElement {
        GroupElement { exponents: e.to_vec() }
    }

    #[test]
    fn pseudo_reflection_examples() {
        assert!(pseudo_reflections(&ActionSpec::cyclic(2, &[1, 1])).unwrap().is_empty());
        assert_eq!(pseudo_reflections(&ActionSpec::cyclic(2, &[1, 0])).unwrap(), vec![ge(&[1])]);
        let z6 = ActionSpec::cyclic(6, &[1, 3]);
        assert_eq!(pseudo_reflections(&z6).unwrap(), vec![ge(&[2]), ge(&[4])]);
        assert!(!shephard_todd_smooth(&z6).unwrap());
    }

    #[test]
    fn z6_oracle() {
        // Brute force: list the subgroups generated by each subset of
        // pseudo-reflections directly as residue sets.
        let z6 = ActionSpec::cyclic(6, &[1, 3]);
        let mut closure = BTreeSet::from([0u64]);
        loop {
            let next: BTreeSet<u64> = closure
                .iter()
                .flat_map(|&a| [2u64, 4].map(|r| (a + r) % 6))
                .chain(closure.iter().copied())
                .collect();
            if next == closure {
                break;
            }
            closure = next;
        }
        assert_eq!(closure, BTreeSet::from([0, 2, 4]));
        assert_eq!(fixed_locus_codimension(&z6, &ge(&[3])), 2);
        assert_eq!(codimension_profile(&z6).unwrap(), vec![1, 2, 3]);
    }

    #[test]
    fn torus_route_is_unsupported() {
        assert!(matches!(
            pseudo_reflections(&ActionSpec::torus(&[1, -1])),
            Err(Error::UnsupportedRoute(_))
        ));
    }

    #[test]
    fn order_guard() {
        let big = ActionSpec {
            n: 2,
            torus_rank: 0,
            finite_orders: vec![1001, 1001],
            weight_matrix: vec![vec![1, 1], vec![1, 0]],
        };
        assert!(matches!(pseudo_reflections(&big), Err(Error::Resource(_))));
    }

    #[test]
    fn monoid_route_examples() {
        let hb = hilbert_basis(&ActionSpec::cyclic(2, &[1, 1]), 4).unwrap();
        assert_eq!(monoid_smooth(&hb), RouteVerdict::Singular);
        let hb = hilbert_basis(&ActionSpec::cyclic(2, &[1, 0]), 4).unwrap();
        assert_eq!(monoid_smooth(&hb), RouteVerdict::Smooth);
        let hb = hilbert_basis(&ActionSpec::torus(&[1, -1]), 4).unwrap();
        assert_eq!(monoid_smooth(&hb), RouteVerdict::Smooth);
        let hb = hilbert_basis(&ActionSpec::cyclic(7, &[1, 3]), 3).unwrap();
        assert_eq!(monoid_smooth(&hb), RouteVerdict::Inconclusive);
    }

    #[test]
    fn consolidated_examples() {
        let v = smoothness_verdict(&ActionSpec::cyclic(2, &[1, 1]), 6).unwrap();
        assert_eq!(v.shephard_todd, Some(RouteVerdict::Singular));
        assert_eq!(v.monoid, RouteVerdict::Singular);
        assert_eq!(v.surjectivity, RouteVerdict::Singular);
        assert!(v.agreement);
        let v = smoothness_verdict(&ActionSpec::cyclic(2, &[1, 0]), 6).unwrap();
        assert_eq!(v.verdict, RouteVerdict::Smooth);
        assert!(v.agreement);
        let v = smoothness_verdict(&ActionSpec::torus(&[1, -1]), 6).unwrap();
        assert_eq!(v.shephard_todd, None);
        assert_eq!(v.monoid, RouteVerdict::Smooth);
        assert_eq!(v.surjectivity, RouteVerdict::Smooth);
        assert!(v.agreement);
    }

    #[test]
    fn singular_loci() {
        let a1 = ActionSpec::cyclic(2, &[1, 1]);
        let hb = hilbert_basis(&a1, 4).unwrap();
        let s = singular_locus(&a1, &hb).unwrap();
        assert!(!s.smooth && s.isolated);
        assert_eq!(s.dimension, Some(0));
        // Z/2 acting by -1 on two of three coordinates: A1 times a line.
        let a = ActionSpec::cyclic(2, &[1, 1, 0]);
        let hb = hilbert_basis(&a, 4).unwrap();
        let s = singular_locus(&a, &hb).unwrap();
        assert!(!s.smooth && !s.isolated);
        assert_eq!(s.dimension, Some(1));
        let c = ActionSpec::torus(&[1, 1, -1, -1]);
        let hb = hilbert_basis(&c, crate::invariant::hilbert_basis_certificate(&c)).unwrap();
        let s = singular_locus(&c, &hb).unwrap();
        assert!(!s.smooth && s.isolated);
        let r = ActionSpec::cyclic(3, &[1, 0]);
        let hb = hilbert_basis(&r, 4).unwrap();
        assert!(singular_locus(&r, &hb).unwrap().smooth);
    }

    #[test]
    fn inverse_closure() {
        let a = ActionSpec::cyclic(8, &[1, 4, 2]);
        let prs = pseudo_reflections(&a).unwrap();
        for g in &prs {
            assert!(prs.contains(&g.inverse(&a)));
        }
    }
}
