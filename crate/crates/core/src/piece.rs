//! Finite-dimensional graded pieces of the module of k-forms.
//!
//! A piece is addressed by `(k, total degree, weight)` and has the monomial
//! forms `x^a dx_I` with `|I| = k`, `|a| + k = degree` and the given weight as
//! its basis. Basis order is blade order, then descending exponent.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::action::{ActionSpec, Weight};
use crate::error::{Error, Result};
use crate::form::{Blade, PolyForm};
use crate::linalg::{sparse_from_rationals, Echelon, SparseVec};
use crate::poly::{monomials_of_degree, Exponent};

#[derive(Clone, Debug)]
pub struct Piece {
    pub nvars: usize,
    pub k: usize,
    pub degree: u32,
    terms: Vec<(Blade, Exponent)>,
    index: HashMap<(Blade, Exponent), usize>,
}

impl Piece {
    fn build(nvars: usize, k: usize, degree: u32, keep: impl Fn(Blade, &[u32]) -> bool) -> Self {
        let mut terms = Vec::new();
        if degree as usize >= k && k <= nvars {
            let monos = monomials_of_degree(nvars, degree - k as u32);
            for b in Blade::all(nvars, k) {
                for e in &monos {
                    if keep(b, e) {
                        terms.push((b, e.clone()));
                    }
                }
            }
        }
        Self::from_terms(nvars, k, degree, terms)
    }

    pub(crate) fn from_terms(nvars: usize, k: usize, degree: u32, terms: Vec<(Blade, Exponent)>) -> Self {
        let index = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Piece {
            nvars,
            k,
            degree,
            terms,
            index,
        }
    }

    /// Every monomial k-form of the given total degree.
    pub fn full(nvars: usize, k: usize, degree: u32) -> Self {
        Self::build(nvars, k, degree, |_, _| true)
    }

    pub fn with_weight(action: &ActionSpec, k: usize, degree: u32, weight: &Weight) -> Self {
        Self::build(action.n, k, degree, |b, e| action.weight_of_term(b, e) == *weight)
    }

    /// The invariant (weight-zero) piece.
    pub fn invariant(action: &ActionSpec, k: usize, degree: u32) -> Self {
        Self::build(action.n, k, degree, |b, e| action.is_invariant_term(b, e))
    }

    pub fn dim(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[(Blade, Exponent)] {
        &self.terms
    }

    pub fn position(&self, blade: Blade, exp: &Exponent) -> Option<usize> {
        self.index.get(&(blade, exp.clone())).copied()
    }

    /// Coordinates of a form; `None` if it has a term outside the piece.
    pub fn vector_of(&self, form: &PolyForm) -> Option<SparseVec> {
        let mut entries = Vec::new();
        for (b, e, c) in form.terms() {
            let i = self.position(b, e)?;
            entries.push((i, c.clone()));
        }
        Some(sparse_from_rationals(entries))
    }

    /// Unscaled integer coordinates, for building matrix columns. `None` if a
    /// term lies outside the piece or has a non-integer coefficient.
    pub fn exact_vector_of(&self, form: &PolyForm) -> Option<SparseVec> {
        let mut v = Vec::new();
        for (b, e, c) in form.terms() {
            if !c.is_integer() {
                return None;
            }
            v.push((self.position(b, e)?, c.to_integer()));
        }
        v.sort_by_key(|(i, _)| *i);
        Some(v)
    }

    pub fn form_of(&self, v: &SparseVec) -> PolyForm {
        let mut f = PolyForm::zero(self.nvars, self.k);
        for (i, c) in v {
            let (b, e) = &self.terms[*i];
            f.add_term(*b, e.clone(), BigRational::from_integer(c.clone()));
        }
        f
    }

    /// Coordinates of `x^shift * v` where `v` lives in `from`; `None` if the
    /// product leaves this piece.
    pub fn shifted(&self, from: &Piece, v: &SparseVec, shift: &[u32]) -> Option<SparseVec> {
        let mut out: Vec<(usize, BigInt)> = Vec::with_capacity(v.len());
        for (i, c) in v {
            let (b, e) = &from.terms[*i];
            let ne: Exponent = e.iter().zip(shift).map(|(a, s)| a + s).collect();
            out.push((self.position(*b, &ne)?, c.clone()));
        }
        out.sort_by_key(|(i, _)| *i);
        Some(out)
    }

    /// Unit vector of basis element `i`.
    pub fn unit(i: usize) -> SparseVec {
        vec![(i, BigInt::from(1))]
    }
}

/// Weight-zero monomials of total degree `d`.
pub fn invariant_monomials(action: &ActionSpec, d: u32) -> Vec<Exponent> {
    monomials_of_degree(action.n, d)
        .into_iter()
        .filter(|e| action.is_invariant_term(Blade::EMPTY, e))
        .collect()
}

fn homogeneous_data(action: &ActionSpec, g: &PolyForm) -> Result<Option<(u32, Weight)>> {
    if g.is_zero() {
        return Ok(None);
    }
    let w = action.weight_of_form(g)?;
    let degrees = g.total_degrees();
    if degrees.len() != 1 {
        return Err(Error::Precondition(format!(
            "generator {} is not homogeneous in total degree (degrees {:?})",
            g, degrees
        )));
    }
    Ok(Some((degrees[0], w)))
}

/// A basis of the `(degree, weight)` piece of the submodule generated over
/// the polynomial ring by `generators`.
///
/// The basis is drawn greedily from products `x^a * g` in generator order,
/// then monomial order, so it is deterministic.
pub fn graded_piece_basis(
    generators: &[PolyForm],
    degree: u32,
    weight: &Weight,
    action: &ActionSpec,
) -> Result<Vec<PolyForm>> {
    let Some(first) = generators.first() else {
        return Ok(vec![]);
    };
    let k = first.degree();
    for g in generators {
        action.check_form(g)?;
        if g.degree() != k {
            return Err(Error::Structure(format!(
                "generators of mixed form degree {} and {}",
                k,
                g.degree()
            )));
        }
    }
    if (degree as usize) < k {
        return Ok(vec![]);
    }
    let piece = Piece::with_weight(action, k, degree, weight);
    let mut ech = Echelon::new();
    let mut basis = Vec::new();
    for g in generators {
        let Some((gd, gw)) = homogeneous_data(action, g)? else {
            continue;
        };
        if gd > degree {
            continue;
        }
        for m in monomials_of_degree(action.n, degree - gd) {
            let mw = action.weight_of_monomial(&m)?;
            if action.add_weights(&mw, &gw) != *weight {
                continue;
            }
            let prod = g.mul_monomial(&m);
            let v = piece
                .vector_of(&prod)
                .ok_or_else(|| Error::Inconsistency(format!("product {} escaped its piece", prod)))?;
            if ech.insert(v) {
                basis.push(prod);
            }
        }
    }
    Ok(basis)
}
