//! The invariant pullback of Kähler differentials to the quotient.
//!
//! The quotient's differentials are never presented by generators and
//! relations. The kernel of the invariant pullback is the torsion of the
//! quotient's Kähler differentials, so its image, the module spanned over the
//! invariant ring by wedges `d(m_1) ∧ ... ∧ d(m_k)` of invariant generators,
//! is a faithful model of the torsion-free part. It is compared degreewise
//! with the invariant horizontal forms.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::action::ActionSpec;
use crate::cone::subsets;
use crate::error::{Error, Result};
use crate::form::{differential, PolyForm};
use crate::invariant::{hilbert_basis, FormModule, MonoidBasis};
use crate::linalg::{self, Echelon, SparseVec};
use crate::poly::{total_degree, Polynomial};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PullbackImage {
    pub k: usize,
    /// Nonzero wedges of differentials of invariant generators, deduplicated
    /// per graded piece.
    pub wedge_generators: Vec<PolyForm>,
    pub certified_bound: u32,
    /// Set when the invariant generators are not certified complete.
    pub inconclusive: bool,
}

/// Nonzero wedges of differentials of `hb`'s generators, independent within
/// each total degree, paired with their degree.
fn wedges(action: &ActionSpec, hb: &MonoidBasis, k: usize, bound: u32) -> Result<Vec<(u32, PolyForm)>> {
    let n = action.n;
    if k > n {
        return Ok(vec![]);
    }
    let diffs: Vec<PolyForm> = hb
        .generators
        .iter()
        .map(|g| differential(&Polynomial::monomial(n, g.clone(), BigRational::from_integer(1.into()))))
        .collect();
    let degrees: Vec<u32> = hb.generators.iter().map(|g| total_degree(g)).collect();
    let mut by_degree: Vec<(Echelon, Option<crate::piece::Piece>)> =
        (0..=bound).map(|_| (Echelon::new(), None)).collect();
    let mut out = Vec::new();
    if k == 0 {
        return Ok(vec![(0, PolyForm::function(Polynomial::one(n)))]);
    }
    for idx in subsets(diffs.len(), k) {
        let deg: u32 = idx.iter().map(|&i| degrees[i]).sum();
        if deg > bound {
            continue;
        }
        let mut w = diffs[idx[0]].clone();
        for &i in &idx[1..] {
            w = w.wedge(&diffs[i])?;
            if w.is_zero() {
                break;
            }
        }
        if w.is_zero() {
            continue;
        }
        let slot = &mut by_degree[deg as usize];
        let piece = slot
            .1
            .get_or_insert_with(|| crate::piece::Piece::invariant(action, k, deg));
        let v = piece
            .vector_of(&w)
            .ok_or_else(|| Error::Inconsistency(format!("wedge {} is not invariant", w)))?;
        if slot.0.insert(v) {
            out.push((deg, w));
        }
    }
    Ok(out)
}

/// All k-fold wedges of differentials of the invariant generators.
pub fn pullback_image(action: &ActionSpec, k: usize, bound: u32) -> Result<PullbackImage> {
    let hb = hilbert_basis(action, bound.max(1))?;
    let ws = wedges(action, &hb, k, bound)?;
    Ok(PullbackImage {
        k,
        wedge_generators: ws.into_iter().map(|(_, w)| w).collect(),
        certified_bound: bound,
        inconclusive: !hb.complete,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CokernelRow {
    pub degree: u32,
    pub target_dim: usize,
    pub image_dim: usize,
    pub cokernel_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CokernelTable {
    pub k: usize,
    pub rows: Vec<CokernelRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Surjectivity {
    Surjective,
    NotSurjective { witness_degrees: Vec<u32> },
    Inconclusive { reason: String },
}

impl Surjectivity {
    pub fn is_surjective(&self) -> Option<bool> {
        match self {
            Surjectivity::Surjective => Some(true),
            Surjectivity::NotSurjective { .. } => Some(false),
            Surjectivity::Inconclusive { .. } => None,
        }
    }
}

/// A cokernel class representative, orthogonal to the image within the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub degree: u32,
    pub form: PolyForm,
}

#[derive(Clone, Debug)]
pub struct SurjectivityCheck {
    pub k: usize,
    pub verdict: Surjectivity,
    pub table: CokernelTable,
    pub witnesses: Vec<Witness>,
    /// Degrees of the minimal generators of the target module.
    pub target_generator_degrees: Vec<u32>,
    pub target_certified: bool,
    pub warnings: Vec<String>,
}

/// Degreewise span of the pullback image inside the target pieces.
pub(crate) struct ImagePieces {
    pub bases: Vec<Vec<SparseVec>>,
}

pub(crate) fn image_pieces(
    action: &ActionSpec,
    hb: &MonoidBasis,
    target: &FormModule,
) -> Result<ImagePieces> {
    let k = target.k;
    let bound = target.bound;
    let ws = wedges(action, hb, k, bound)?;
    let hb_degrees: Vec<u32> = hb.generators.iter().map(|g| total_degree(g)).collect();
    let mut bases: Vec<Vec<SparseVec>> = Vec::with_capacity(bound as usize + 1);
    for d in 0..=bound {
        let piece = &target.pieces[d as usize];
        let full = target.bases[d as usize].len();
        let mut ech = Echelon::new();
        let mut basis = Vec::new();
        let push = |v: SparseVec, ech: &mut Echelon, basis: &mut Vec<SparseVec>| {
            if ech.insert(v.clone()) {
                basis.push(v);
            }
        };
        for (wd, w) in &ws {
            if *wd == d && ech.rank() < full {
                let v = piece
                    .vector_of(w)
                    .ok_or_else(|| Error::Inconsistency("wedge outside its piece".into()))?;
                push(v, &mut ech, &mut basis);
            }
        }
        'outer: for (h, &hd) in hb.generators.iter().zip(&hb_degrees) {
            if hd > d {
                continue;
            }
            let src = (d - hd) as usize;
            for v in &bases[src] {
                if ech.rank() >= full {
                    break 'outer;
                }
                let s = piece
                    .shifted(&target.pieces[src], v, h)
                    .ok_or_else(|| Error::Inconsistency("image multiple left its piece".into()))?;
                push(s, &mut ech, &mut basis);
            }
        }
        if ech.rank() > full {
            return Err(Error::Inconsistency(format!(
                "image piece of dimension {} exceeds target dimension {} in degree {}",
                ech.rank(),
                full,
                d
            )));
        }
        bases.push(basis);
    }
    Ok(ImagePieces { bases })
}

/// Target vectors orthogonal to the image, one per cokernel dimension.
fn orthogonal_witnesses(target: &[SparseVec], image: &[SparseVec]) -> Vec<SparseVec> {
    let cols: Vec<SparseVec> = target
        .iter()
        .map(|t| {
            image
                .iter()
                .enumerate()
                .map(|(j, g)| (j, linalg::dot(t, g)))
                .filter(|(_, c)| c != &BigInt::from(0))
                .collect()
        })
        .collect();
    linalg::kernel(&cols)
        .iter()
        .map(|c| linalg::combine_basis(c, target))
        .collect()
}

/// Compares the pullback image with the invariant horizontal k-forms in every
/// degree up to the target's bound.
pub(crate) fn compare(action: &ActionSpec, hb: &MonoidBasis, target: &FormModule) -> Result<SurjectivityCheck> {
    let image = image_pieces(action, hb, target)?;
    let mut rows = Vec::new();
    let mut witnesses = Vec::new();
    let mut witness_degrees = Vec::new();
    for d in 0..=target.bound {
        let t = &target.bases[d as usize];
        let im = &image.bases[d as usize];
        let cok = t.len() - im.len();
        rows.push(CokernelRow {
            degree: d,
            target_dim: t.len(),
            image_dim: im.len(),
            cokernel_dim: cok,
        });
        if cok > 0 {
            witness_degrees.push(d);
            for v in orthogonal_witnesses(t, im) {
                witnesses.push(Witness {
                    degree: d,
                    form: target.pieces[d as usize].form_of(&v).normalized(),
                });
            }
        }
    }
    let mut warnings = target.warnings.clone();
    let verdict = if !witness_degrees.is_empty() {
        Surjectivity::NotSurjective {
            witness_degrees: witness_degrees.clone(),
        }
    } else if target.certified {
        Surjectivity::Surjective
    } else {
        let reason = format!(
            "no cokernel through degree {} but target generators are not certified there",
            target.bound
        );
        warnings.push(reason.clone());
        Surjectivity::Inconclusive { reason }
    };
    Ok(SurjectivityCheck {
        k: target.k,
        verdict,
        table: CokernelTable { k: target.k, rows },
        witnesses,
        target_generator_degrees: target.generators.iter().map(|(d, _)| *d).collect(),
        target_certified: target.certified,
        warnings,
    })
}

/// Decides whether the invariant pullback of k-forms onto the invariant
/// horizontal k-forms is surjective, with the full cokernel table.
pub fn surjectivity_check(action: &ActionSpec, k: usize, bound: u32) -> Result<SurjectivityCheck> {
    let hb = hilbert_basis(action, bound.max(1))?;
    let target = FormModule::compute(action, &hb, k, true, bound)?;
    compare(action, &hb, &target)
}

/// Generic rank of the pullback image: `C(dim Y, k)`.
///
/// The wedge matrix is evaluated at a point with all coordinates nonzero.
/// For monomial generators the Jacobian there is the exponent matrix scaled
/// by invertible diagonals, so the rank is the generic one.
pub fn torsion_free_rank(action: &ActionSpec, k: usize) -> Result<usize> {
    let n = action.n;
    if k > n {
        return Ok(0);
    }
    let cert = crate::invariant::hilbert_basis_certificate(action).max(1);
    let hb = hilbert_basis(action, cert)?;
    let point: Vec<BigRational> = (0..n)
        .map(|i| BigRational::from_integer(BigInt::from(PRIMES[i % PRIMES.len()])))
        .collect();
    let blades = crate::form::Blade::all(n, k);
    let rows: Vec<SparseVec> = subsets(hb.generators.len(), k)
        .into_iter()
        .filter_map(|idx| {
            let mut w = PolyForm::function(Polynomial::one(n));
            for i in idx {
                let m = Polynomial::monomial(n, hb.generators[i].clone(), BigRational::from_integer(1.into()));
                w = w.wedge(&differential(&m)).ok()?;
            }
            let entries = blades
                .iter()
                .enumerate()
                .filter_map(|(j, b)| w.component(*b).map(|p| (j, p.evaluate(&point))));
            Some(linalg::sparse_from_rationals(entries))
        })
        .collect();
    Ok(linalg::rank(rows))
}

const PRIMES: [i64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];
