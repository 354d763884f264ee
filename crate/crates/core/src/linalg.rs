//! Fraction-free sparse row echelon forms over the integers.
//!
//! Every graded piece handled by the engine is a finite-dimensional rational
//! vector space with a monomial basis. Vectors are cleared of denominators and
//! reduced with integer row operations, dividing out the content after each
//! step so entries stay small. Spans over Q are unaffected by the scaling.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Sorted `(column, value)` pairs with nonzero values.
pub type SparseVec = Vec<(usize, BigInt)>;

/// Builds a sparse vector from arbitrary `(column, rational)` pairs, summing
/// repeats and clearing denominators.
pub fn sparse_from_rationals<I>(entries: I) -> SparseVec
where
    I: IntoIterator<Item = (usize, BigRational)>,
{
    let mut acc: HashMap<usize, BigRational> = HashMap::new();
    for (i, c) in entries {
        *acc.entry(i).or_insert_with(BigRational::zero) += c;
    }
    let mut den = BigInt::one();
    for c in acc.values() {
        den = den.lcm(c.denom());
    }
    let mut v: SparseVec = acc
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.numer() * (&den / c.denom())))
        .collect();
    v.sort_by_key(|(i, _)| *i);
    make_primitive(&mut v, &mut Vec::new());
    v
}

fn content(v: &SparseVec, tag: &SparseVec) -> BigInt {
    let mut g = BigInt::zero();
    for (_, c) in v.iter().chain(tag.iter()) {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn make_primitive(v: &mut SparseVec, tag: &mut SparseVec) {
    let g = content(v, tag);
    if g.is_zero() || g.is_one() {
        return;
    }
    for (_, c) in v.iter_mut().chain(tag.iter_mut()) {
        *c /= &g;
    }
}

/// `a * u - b * w`, both sorted.
fn combine(a: &BigInt, u: &SparseVec, b: &BigInt, w: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(u.len() + w.len());
    let (mut i, mut j) = (0, 0);
    while i < u.len() || j < w.len() {
        let take_u = j >= w.len() || (i < u.len() && u[i].0 < w[j].0);
        let take_w = i >= u.len() || (j < w.len() && w[j].0 < u[i].0);
        if take_u {
            out.push((u[i].0, a * &u[i].1));
            i += 1;
        } else if take_w {
            out.push((w[j].0, -(b * &w[j].1)));
            j += 1;
        } else {
            let c = a * &u[i].1 - b * &w[j].1;
            if !c.is_zero() {
                out.push((u[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[derive(Clone, Debug)]
struct Row {
    vec: SparseVec,
    tag: SparseVec,
}

/// An incrementally built echelon basis with distinct leading columns.
///
/// Optional tags record each row as a combination of the inserted inputs, so
/// that inputs reducing to zero yield kernel relations.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<Row>,
    pivot_of: HashMap<usize, usize>,
}

/// Outcome of a tagged insertion.
pub enum Inserted {
    /// The vector was independent; it now leads at this column.
    Pivot(usize),
    /// The vector was dependent; the tag combination is a relation.
    Relation(SparseVec),
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r.vec[0].0)
    }

    fn reduce_tagged(&self, mut v: SparseVec, mut tag: SparseVec) -> (SparseVec, SparseVec) {
        while let Some((lead, _)) = v.first() {
            let Some(&ri) = self.pivot_of.get(lead) else {
                break;
            };
            let row = &self.rows[ri];
            let p = &row.vec[0].1;
            let c = &v[0].1;
            let g = p.gcd(c);
            let mut a = p / &g;
            let mut b = c / &g;
            if a.is_negative() {
                a = -a;
                b = -b;
            }
            v = combine(&a, &v, &b, &row.vec);
            if !tag.is_empty() || !row.tag.is_empty() {
                tag = combine(&a, &tag, &b, &row.tag);
            }
            make_primitive(&mut v, &mut tag);
        }
        (v, tag)
    }

    /// Reduces `v` against the basis; the zero vector means `v` is in the span.
    pub fn reduce(&self, v: SparseVec) -> SparseVec {
        self.reduce_tagged(v, Vec::new()).0
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone()).is_empty()
    }

    /// Inserts `v`; returns true when it enlarged the span.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        matches!(self.insert_tagged(v, Vec::new()), Inserted::Pivot(_))
    }

    pub fn insert_tagged(&mut self, v: SparseVec, tag: SparseVec) -> Inserted {
        let (v, tag) = self.reduce_tagged(v, tag);
        if v.is_empty() {
            let mut t = tag;
            make_primitive(&mut t, &mut Vec::new());
            return Inserted::Relation(t);
        }
        let lead = v[0].0;
        self.pivot_of.insert(lead, self.rows.len());
        self.rows.push(Row { vec: v, tag });
        Inserted::Pivot(lead)
    }
}

/// Rank of a list of vectors.
pub fn rank(vectors: impl IntoIterator<Item = SparseVec>) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// A basis of `{c : sum_i c_i * images[i] = 0}`, one relation per dependent input.
pub fn kernel(images: &[SparseVec]) -> Vec<SparseVec> {
    let mut e = Echelon::new();
    let mut out = Vec::new();
    for (i, v) in images.iter().enumerate() {
        if let Inserted::Relation(t) = e.insert_tagged(v.clone(), vec![(i, BigInt::one())]) {
            out.push(t);
        }
    }
    out
}

/// Dot product of two sorted sparse vectors.
pub fn dot(u: &SparseVec, w: &SparseVec) -> BigInt {
    let (mut i, mut j) = (0, 0);
    let mut acc = BigInt::zero();
    while i < u.len() && j < w.len() {
        match u[i].0.cmp(&w[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc += &u[i].1 * &w[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

/// `sum_i coeffs_i * basis[coeff index]` in ambient coordinates.
pub fn combine_basis(coeffs: &SparseVec, basis: &[SparseVec]) -> SparseVec {
    let mut acc: HashMap<usize, BigInt> = HashMap::new();
    for (i, c) in coeffs {
        for (j, b) in &basis[*i] {
            *acc.entry(*j).or_insert_with(BigInt::zero) += c * b;
        }
    }
    let mut v: SparseVec = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    v.sort_by_key(|(i, _)| *i);
    make_primitive(&mut v, &mut Vec::new());
    v
}
