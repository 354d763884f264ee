//! Euler derivations, horizontal forms and the homology of `(Ω, e)`.
//!
//! For a torus factor with coordinate weights `w_i`, the Euler derivation is
//! the degree -1 operator determined by `e(dx_i) = w_i x_i` and
//!
//! ```text
//! e(df_1 ∧ ... ∧ df_k) = Σ_i (-1)^(k-i) e(df_i) df_1 ∧ ... ^df_i^ ... ∧ df_k
//! ```
//!
//! It is linear over functions, satisfies `e∘e = 0`, and `e(df) = |f| f` for
//! homogeneous `f`. A form is horizontal when every torus factor's `e` kills
//! it. Finite factors have a zero Lie algebra and impose no condition.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::action::{ActionSpec, Weight};
use crate::error::{Error, Result};
use crate::form::{Blade, PolyForm};
use crate::linalg::{self, SparseVec};
use crate::piece::Piece;

/// The Euler derivation of one torus factor.
#[derive(Clone, Debug)]
pub struct EulerOperator<'a> {
    action: &'a ActionSpec,
    torus_index: usize,
}

impl<'a> EulerOperator<'a> {
    pub fn new(action: &'a ActionSpec, torus_index: usize) -> Result<Self> {
        if torus_index >= action.torus_rank {
            return Err(Error::Precondition(format!(
                "torus index {} outside torus rank {}",
                torus_index, action.torus_rank
            )));
        }
        Ok(EulerOperator {
            action,
            torus_index,
        })
    }

    pub fn torus_index(&self) -> usize {
        self.torus_index
    }

    /// Image of the single term `c x^exp dx_I`, accumulated into `out`.
    fn contract_term(&self, blade: Blade, exp: &[u32], c: &BigRational, out: &mut PolyForm) {
        let k = blade.len() as u32;
        let row = self.action.torus_row(self.torus_index);
        for i in blade.indices() {
            if row[i] == 0 {
                continue;
            }
            let pos = blade.count_below(i) + 1;
            let mut coeff = c * BigRational::from_integer(BigInt::from(row[i]));
            if (k - pos) % 2 == 1 {
                coeff = -coeff;
            }
            let mut ne = exp.to_vec();
            ne[i] += 1;
            out.add_term(blade.without(i), ne, coeff);
        }
    }

    pub fn apply(&self, form: &PolyForm) -> PolyForm {
        if form.degree() == 0 {
            return PolyForm::zero(form.nvars(), 0);
        }
        let mut out = PolyForm::zero(form.nvars(), form.degree() - 1);
        for (b, e, c) in form.terms() {
            self.contract_term(b, e, c, &mut out);
        }
        out
    }

    /// Matrix of `e` from `from` into `to`, one sparse column per basis element.
    /// Columns are not rescaled, so kernels are kernels of `e` itself.
    pub(crate) fn columns(&self, from: &Piece, to: &Piece) -> Result<Vec<SparseVec>> {
        from.terms()
            .iter()
            .map(|(b, e)| {
                let mut img = PolyForm::zero(from.nvars, from.k.saturating_sub(1));
                if from.k > 0 {
                    self.contract_term(*b, e, &BigRational::from_integer(1.into()), &mut img);
                }
                to.exact_vector_of(&img).ok_or_else(|| {
                    Error::Inconsistency(format!("Euler image {} left its graded piece", img))
                })
            })
            .collect()
    }
}

/// `e_j(form)` for torus factor `j`.
pub fn euler_contract(op: &EulerOperator<'_>, form: &PolyForm) -> PolyForm {
    op.apply(form)
}

/// One component per torus factor; empty for a finite group.
pub fn dmu(action: &ActionSpec, form: &PolyForm) -> Vec<PolyForm> {
    (0..action.torus_rank)
        .map(|j| EulerOperator { action, torus_index: j }.apply(form))
        .collect()
}

/// Kernel of the stacked Euler maps of the listed torus factors on `piece`,
/// as vectors in piece coordinates.
pub(crate) fn kernel_in_piece(
    action: &ActionSpec,
    piece: &Piece,
    target_of: impl Fn(usize) -> Piece,
    factors: &[usize],
) -> Result<Vec<SparseVec>> {
    if factors.is_empty() || piece.k == 0 {
        return Ok((0..piece.dim()).map(Piece::unit).collect());
    }
    let mut stacked: Vec<SparseVec> = vec![Vec::new(); piece.dim()];
    let mut offset = 0;
    for &j in factors {
        let target = target_of(j);
        let op = EulerOperator::new(action, j)?;
        for (col, img) in op.columns(piece, &target)?.into_iter().enumerate() {
            stacked[col].extend(img.into_iter().map(|(i, c)| (i + offset, c)));
        }
        offset += target.dim();
    }
    Ok(linalg::kernel(&stacked))
}

/// Horizontal vectors of the weight-zero piece `(k, degree)`.
pub(crate) fn horizontal_invariant_vectors(
    action: &ActionSpec,
    piece: &Piece,
) -> Result<Vec<SparseVec>> {
    let factors: Vec<usize> = (0..action.torus_rank).collect();
    kernel_in_piece(
        action,
        piece,
        |_| Piece::invariant(action, piece.k.saturating_sub(1), piece.degree),
        &factors,
    )
}

/// Basis of the `(degree, weight)` piece of the horizontal k-forms.
pub fn horizontal_piece(
    action: &ActionSpec,
    k: usize,
    degree: u32,
    weight: &Weight,
) -> Result<Vec<PolyForm>> {
    let piece = Piece::with_weight(action, k, degree, weight);
    let factors: Vec<usize> = (0..action.torus_rank).collect();
    let vecs = kernel_in_piece(
        action,
        &piece,
        |_| Piece::with_weight(action, k.saturating_sub(1), degree, weight),
        &factors,
    )?;
    Ok(vecs.iter().map(|v| piece.form_of(v)).collect())
}

/// Which graded piece of `(Ω, e_j)` to take homology of.
#[derive(Clone, Debug)]
pub struct HomologyQuery {
    pub torus_index: usize,
    /// `None` takes the direct sum over all weights of the given degree.
    pub weight: Option<Weight>,
    pub degree: u32,
    /// Restrict to forms invariant under the other factors and horizontal
    /// for the other torus factors.
    pub restrict_invariant_horizontal: bool,
    /// Demand all weights of the chosen torus factor be positive, so the
    /// torus quotient is a point and the complex should be exact.
    pub require_point_quotient: bool,
}

impl HomologyQuery {
    pub fn new(torus_index: usize, degree: u32) -> Self {
        HomologyQuery {
            torus_index,
            weight: None,
            degree,
            restrict_invariant_horizontal: false,
            require_point_quotient: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyTable {
    pub degree: u32,
    /// Dimension of the piece in form degree `k = 0..=n`.
    pub piece_dims: Vec<usize>,
    pub homology: Vec<usize>,
}

/// Homology dimensions of `(Ω, e_j)` on one graded piece, per form degree.
pub fn euler_homology(action: &ActionSpec, query: &HomologyQuery) -> Result<HomologyTable> {
    if action.torus_rank == 0 {
        return Err(Error::Precondition(
            "the Euler complex needs a torus factor; this action is finite".into(),
        ));
    }
    let j = query.torus_index;
    EulerOperator::new(action, j)?;
    if query.require_point_quotient {
        if let Some(i) = action.torus_row(j).iter().position(|&w| w <= 0) {
            return Err(Error::Precondition(format!(
                "coordinate x{} has torus weight {} <= 0; the action is not quasi-conical with a point quotient",
                i + 1,
                action.torus_row(j)[i]
            )));
        }
    }
    let others: Vec<usize> = (0..action.torus_rank).filter(|&i| i != j).collect();
    let keep = |b: Blade, e: &[u32]| -> bool {
        let w = action.weight_of_term(b, e);
        if let Some(target) = &query.weight {
            if w != *target {
                return false;
            }
        }
        if query.restrict_invariant_horizontal {
            let others_zero = others.iter().all(|&i| w.torus[i] == 0);
            if !others_zero || w.finite.iter().any(|&r| r != 0) {
                return false;
            }
        }
        true
    };
    let n = action.n;
    let pieces: Vec<Piece> = (0..=n)
        .map(|k| {
            let full = Piece::full(n, k, query.degree);
            let kept: Vec<(Blade, Vec<u32>)> = full
                .terms()
                .iter()
                .filter(|(b, e)| keep(*b, e))
                .cloned()
                .collect();
            Piece::from_terms(n, k, query.degree, kept)
        })
        .collect();
    // Subspaces V_k of each piece.
    let mut spaces: Vec<Vec<SparseVec>> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let v = if query.restrict_invariant_horizontal && !others.is_empty() && k > 0 {
            kernel_in_piece(action, &pieces[k], |_| pieces[k - 1].clone(), &others)?
        } else {
            (0..pieces[k].dim()).map(Piece::unit).collect()
        };
        spaces.push(v);
    }
    let op = EulerOperator::new(action, j)?;
    let mut ranks = vec![0usize; n + 2];
    for k in 1..=n {
        let cols = op.columns(&pieces[k], &pieces[k - 1])?;
        let images = spaces[k].iter().map(|v| linalg::combine_basis(v, &cols));
        ranks[k] = linalg::rank(images);
    }
    let piece_dims: Vec<usize> = spaces.iter().map(|s| s.len()).collect();
    let homology = (0..=n)
        .map(|k| {
            let h = piece_dims[k] as i64 - ranks[k] as i64 - ranks[k + 1] as i64;
            debug_assert!(h >= 0);
            h.max(0) as usize
        })
        .collect();
    Ok(HomologyTable {
        degree: query.degree,
        piece_dims,
        homology,
    })
}

/// `e(dα) - d(e(α)) - (-1)^k |α| α` for the chosen torus factor; always zero.
pub fn bracket_defect(action: &ActionSpec, torus_index: usize, form: &PolyForm) -> Result<PolyForm> {
    let op = EulerOperator::new(action, torus_index)?;
    let w = action.weight_of_form(form)?.torus[torus_index];
    let k = form.degree();
    let lhs = &op.apply(&form.exterior_derivative()) - &op.apply(form).exterior_derivative();
    let sign = if k % 2 == 0 { w } else { -w };
    let rhs = form.scale(&BigRational::from_integer(BigInt::from(sign)));
    lhs.try_add(&-&rhs)
}
