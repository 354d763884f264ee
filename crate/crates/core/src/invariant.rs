//! Invariant rings and invariant form modules.
//!
//! The invariant ring of a diagonal action is spanned by the weight-zero
//! monomials, so it is the semigroup ring of the weight-zero monoid. Its
//! Hilbert basis is found by degreewise enumeration and certified complete
//! from extreme-ray degree bounds of the monoid's cone. Modules of invariant
//! (horizontal) k-forms are computed one `(degree, weight 0)` piece at a time;
//! by graded Nakayama, the new generators in degree `D` are a complement of
//! `A_+ · M` inside `M_D`.

use std::collections::HashSet;

use serde::Serialize;

use crate::action::ActionSpec;
use crate::cone::LatticeCone;
use crate::error::{Error, Result};
use crate::euler::horizontal_invariant_vectors;
use crate::form::{Blade, PolyForm};
use crate::linalg::{Echelon, SparseVec};
use crate::piece::{graded_piece_basis, invariant_monomials, Piece};
use crate::poly::{total_degree, Exponent};

/// Minimal generators of the weight-zero monoid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonoidBasis {
    pub generators: Vec<Exponent>,
    /// True when the search reached the certified degree bound.
    pub complete: bool,
    /// Largest total degree explored.
    pub search_bound: u32,
    /// Degree beyond which no Hilbert-basis element can exist.
    pub certificate_degree: u32,
}

impl MonoidBasis {
    pub fn max_degree(&self) -> u32 {
        self.generators.iter().map(|g| total_degree(g)).max().unwrap_or(0)
    }
}

/// Per-degree dimensions, index = total degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertSeries {
    pub coefficients: Vec<usize>,
}

impl HilbertSeries {
    pub fn zeros(d: u32) -> Self {
        HilbertSeries {
            coefficients: vec![0; d as usize + 1],
        }
    }
}

fn cone_with_blade(action: &ActionSpec, blade: Option<Blade>) -> LatticeCone {
    let extra = blade.is_some() as usize;
    let blade_weight = blade.map(|b| action.weight_of_term(b, &vec![0; action.n]));
    let equations = (0..action.torus_rank)
        .map(|j| {
            let mut row = action.torus_row(j).to_vec();
            if let Some(w) = &blade_weight {
                row.push(w.torus[j]);
            }
            row
        })
        .collect();
    let congruences = (0..action.finite_rank())
        .map(|j| {
            let mut row = action.finite_row(j).to_vec();
            if let Some(w) = &blade_weight {
                row.push(w.finite[j] as i64);
            }
            (row, action.finite_orders[j])
        })
        .collect();
    LatticeCone {
        dim: action.n + extra,
        equations,
        congruences,
        degrees: vec![1; action.n + extra],
    }
}

/// The real cone spanned by the weight-zero monoid, with its lattice.
pub fn monoid_cone(action: &ActionSpec) -> LatticeCone {
    cone_with_blade(action, None)
}

/// Degree bound for Hilbert-basis elements. For a finite group the Noether
/// bound `|G|` is used when it is smaller.
pub fn hilbert_basis_certificate(action: &ActionSpec) -> u32 {
    let ray_bound = monoid_cone(action).hilbert_degree_bound();
    let bound = if action.is_finite_only() {
        ray_bound.min(action.finite_order().unwrap_or(u64::MAX))
    } else {
        ray_bound
    };
    bound.min(u32::MAX as u64) as u32
}

/// Minimal weight-zero monomials of total degree at most `bound`.
pub fn hilbert_basis(action: &ActionSpec, bound: u32) -> Result<MonoidBasis> {
    if bound < 1 {
        return Err(Error::Precondition("Hilbert basis bound must be at least 1".into()));
    }
    let cert = hilbert_basis_certificate(action);
    let search = bound.min(cert.max(1));
    let mut gens: Vec<Exponent> = Vec::new();
    for d in 1..=search {
        for m in invariant_monomials(action, d) {
            let reducible = gens
                .iter()
                .any(|g| g.iter().zip(&m).all(|(a, b)| a <= b));
            if !reducible {
                gens.push(m);
            }
        }
    }
    Ok(MonoidBasis {
        generators: gens,
        complete: bound >= cert,
        search_bound: search,
        certificate_degree: cert,
    })
}

/// Bound on the coefficient degree of minimal monomial generators of the
/// `dx_I` component of invariant k-forms; `None` when that component is zero.
fn fiber_coefficient_bound(action: &ActionSpec, blade: Blade) -> Option<u32> {
    let cone = cone_with_blade(action, Some(blade));
    let rays = cone.extreme_rays();
    if !rays.iter().any(|r| r.generator[action.n] > 0) {
        return None;
    }
    let b = cone.hilbert_degree_bound().saturating_sub(1);
    let b = if action.is_finite_only() {
        b.min(action.finite_order().unwrap_or(u64::MAX).saturating_sub(1))
    } else {
        b
    };
    Some(b.min(u32::MAX as u64) as u32)
}

fn plain_certificate(action: &ActionSpec, blades: impl Iterator<Item = Blade>) -> u32 {
    blades
        .filter_map(|b| fiber_coefficient_bound(action, b).map(|c| c + b.len() as u32))
        .max()
        .unwrap_or(0)
}

/// Degree bound on minimal generators of invariant (horizontal) k-forms, when
/// one is available.
///
/// With one torus factor the Euler complex is a Koszul complex on the
/// coordinates of nonzero weight, so the horizontal forms are the Euler
/// images of invariant (k+1)-forms plus the forms in the zero-weight
/// directions. No bound is derived for two or more torus factors.
pub fn form_generator_certificate(action: &ActionSpec, k: usize, horizontal: bool) -> Option<u32> {
    let n = action.n;
    if k > n {
        return Some(0);
    }
    if !horizontal || action.torus_rank == 0 {
        return Some(plain_certificate(action, Blade::all(n, k).into_iter()));
    }
    if action.torus_rank > 1 {
        return None;
    }
    let row = action.torus_row(0);
    let zero_dirs: u64 = (0..n).filter(|&i| row[i] == 0).map(|i| 1u64 << i).sum();
    let images = if k < n {
        plain_certificate(action, Blade::all(n, k + 1).into_iter())
    } else {
        0
    };
    let flat = plain_certificate(
        action,
        Blade::all(n, k).into_iter().filter(|b| b.0 & !zero_dirs == 0),
    );
    Some(images.max(flat))
}

/// A submodule of invariant k-forms given by minimal homogeneous generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSubmodule {
    pub form_degree: usize,
    pub generators: Vec<PolyForm>,
    /// Generators are minimal and complete through this total degree.
    pub generator_bound: u32,
    /// Whether the generator list is known complete.
    pub certified: bool,
    pub warnings: Vec<String>,
}

impl GradedSubmodule {
    pub fn generator_degrees(&self) -> Vec<u32> {
        self.generators
            .iter()
            .map(|g| g.total_degree().unwrap_or(0))
            .collect()
    }

    pub fn is_free_rank_one_candidate(&self) -> bool {
        self.generators.len() == 1
    }
}

/// Degreewise data of a module of invariant (horizontal) k-forms.
#[derive(Clone, Debug)]
pub struct FormModule {
    pub k: usize,
    pub horizontal: bool,
    pub bound: u32,
    pub pieces: Vec<Piece>,
    /// Basis of each piece of the module, in piece coordinates.
    pub bases: Vec<Vec<SparseVec>>,
    pub generators: Vec<(u32, SparseVec)>,
    pub certified: bool,
    pub warnings: Vec<String>,
}

impl FormModule {
    pub fn compute(
        action: &ActionSpec,
        hb: &MonoidBasis,
        k: usize,
        horizontal: bool,
        bound: u32,
    ) -> Result<Self> {
        let mut pieces = Vec::with_capacity(bound as usize + 1);
        let mut bases: Vec<Vec<SparseVec>> = Vec::with_capacity(bound as usize + 1);
        let mut generators = Vec::new();
        let hb_degrees: Vec<u32> = hb.generators.iter().map(|g| total_degree(g)).collect();
        for d in 0..=bound {
            let piece = Piece::invariant(action, k, d);
            let basis = if horizontal && action.torus_rank > 0 {
                horizontal_invariant_vectors(action, &piece)?
            } else {
                (0..piece.dim()).map(Piece::unit).collect()
            };
            let mut ech = Echelon::new();
            for (h, &hd) in hb.generators.iter().zip(&hb_degrees) {
                if hd > d {
                    continue;
                }
                let src = (d - hd) as usize;
                for v in &bases[src] {
                    let shifted = piece.shifted(&pieces[src], v, h).ok_or_else(|| {
                        Error::Inconsistency("invariant multiple left the invariant piece".into())
                    })?;
                    ech.insert(shifted);
                    if ech.rank() == basis.len() {
                        break;
                    }
                }
            }
            for v in &basis {
                if ech.rank() == basis.len() {
                    break;
                }
                if ech.insert(v.clone()) {
                    generators.push((d, v.clone()));
                }
            }
            pieces.push(piece);
            bases.push(basis);
        }
        let max_gen = generators.iter().map(|(d, _)| *d).max().unwrap_or(0);
        let mut warnings = Vec::new();
        let certified = if !hb.complete {
            warnings.push(format!(
                "Hilbert basis incomplete at bound {} (certificate degree {})",
                bound, hb.certificate_degree
            ));
            false
        } else {
            match form_generator_certificate(action, k, horizontal) {
                Some(c) => {
                    if bound < c {
                        warnings.push(format!(
                            "generators certified only through degree {}, need {}",
                            bound, c
                        ));
                    }
                    bound >= c
                }
                None => {
                    let needed = 2 * max_gen.max(hb.max_degree()).max(k as u32);
                    if bound < needed {
                        warnings.push(format!(
                            "generator search has not stabilized: bound {} < {}",
                            bound, needed
                        ));
                    }
                    bound >= needed
                }
            }
        };
        Ok(FormModule {
            k,
            horizontal,
            bound,
            pieces,
            bases,
            generators,
            certified,
            warnings,
        })
    }

    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(|b| b.len()).collect()
    }

    pub fn submodule(&self) -> GradedSubmodule {
        GradedSubmodule {
            form_degree: self.k,
            generators: self
                .generators
                .iter()
                .map(|(d, v)| self.pieces[*d as usize].form_of(v).normalized())
                .collect(),
            generator_bound: self.bound,
            certified: self.certified,
            warnings: self.warnings.clone(),
        }
    }
}

/// Minimal generators over the invariant ring of invariant k-forms, or of
/// invariant horizontal k-forms when `horizontal` is set.
pub fn invariant_form_generators(
    action: &ActionSpec,
    k: usize,
    horizontal: bool,
    bound: u32,
) -> Result<GradedSubmodule> {
    if bound < k as u32 {
        return Err(Error::Precondition(format!(
            "bound {} is below the form degree {}",
            bound, k
        )));
    }
    let hb = hilbert_basis(action, bound.max(1))?;
    Ok(FormModule::compute(action, &hb, k, horizontal, bound)?.submodule())
}

/// Hilbert function of the invariant ring generated by a monoid basis.
pub fn monoid_hilbert_series(basis: &MonoidBasis, d: u32) -> HilbertSeries {
    let mut layers: Vec<HashSet<Exponent>> = Vec::with_capacity(d as usize + 1);
    let n = basis.generators.first().map(|g| g.len());
    for deg in 0..=d {
        let mut layer = HashSet::new();
        if deg == 0 {
            if let Some(n) = n {
                layer.insert(vec![0; n]);
            }
        }
        for g in &basis.generators {
            let gd = total_degree(g);
            if gd == 0 || gd > deg {
                continue;
            }
            for e in &layers[(deg - gd) as usize] {
                layer.insert(e.iter().zip(g).map(|(a, b)| a + b).collect());
            }
        }
        layers.push(layer);
    }
    let mut coefficients: Vec<usize> = layers.iter().map(|l| l.len()).collect();
    if n.is_none() && !coefficients.is_empty() {
        coefficients[0] = 1;
    }
    HilbertSeries { coefficients }
}

/// Hilbert function of the weight-zero part of the module spanned by the
/// generators.
pub fn hilbert_series_of(submodule: &GradedSubmodule, action: &ActionSpec, d: u32) -> Result<HilbertSeries> {
    let zero = action.zero_weight();
    let coefficients = (0..=d)
        .map(|deg| graded_piece_basis(&submodule.generators, deg, &zero, action).map(|b| b.len()))
        .collect::<Result<Vec<_>>>()?;
    Ok(HilbertSeries { coefficients })
}
