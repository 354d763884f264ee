//! Rational cones cut out of the positive orthant by torus rows, with a
//! sublattice given by congruences from the finite rows.
//!
//! Used for degree certificates: every Hilbert-basis element of a pointed
//! cone lies in a simplicial subcone spanned by `d` extreme rays and is
//! either one of those rays or a lattice point of their half-open
//! parallelepiped, so its degree is below the sum of the `d` largest ray
//! degrees.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::linalg::{self, SparseVec};

#[derive(Clone, Debug)]
pub struct LatticeCone {
    /// Ambient dimension.
    pub dim: usize,
    /// Equations `row · y = 0`.
    pub equations: Vec<Vec<i64>>,
    /// Congruences `row · y ≡ 0 (mod m)`.
    pub congruences: Vec<(Vec<i64>, u64)>,
    /// Positive degree of each coordinate.
    pub degrees: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ray {
    /// Smallest lattice point on the ray.
    pub generator: Vec<u64>,
    pub degree: u64,
}

impl LatticeCone {
    fn equation_rank(&self) -> usize {
        let rows = self.equations.iter().map(|r| to_sparse(r));
        linalg::rank(rows)
    }

    /// Extreme rays, found as the minimal-support nonnegative solutions.
    pub fn extreme_rays(&self) -> Vec<Ray> {
        let r = self.equation_rank();
        let mut rays = Vec::new();
        for size in 1..=(r + 1).min(self.dim) {
            for support in subsets(self.dim, size) {
                if let Some(ray) = self.ray_on(&support) {
                    rays.push(ray);
                }
            }
        }
        rays.sort_by(|a, b| a.generator.cmp(&b.generator));
        rays.dedup();
        rays
    }

    fn ray_on(&self, support: &[usize]) -> Option<Ray> {
        // Columns of the equation matrix restricted to the support.
        let cols: Vec<SparseVec> = support
            .iter()
            .map(|&c| {
                let col: Vec<i64> = self.equations.iter().map(|row| row[c]).collect();
                to_sparse(&col)
            })
            .collect();
        let ker = linalg::kernel(&cols);
        if ker.len() != 1 {
            return None;
        }
        let rel = &ker[0];
        if rel.len() != support.len() {
            return None;
        }
        let positive = rel[0].1.is_positive();
        if rel.iter().any(|(_, c)| c.is_positive() != positive) {
            return None;
        }
        let mut v = vec![BigInt::zero(); self.dim];
        for (i, c) in rel {
            v[support[*i]] = if positive { c.clone() } else { -c.clone() };
        }
        // Smallest multiple satisfying the congruences.
        let mut mult = BigInt::from(1);
        for (row, m) in &self.congruences {
            let m = BigInt::from(*m);
            let s: BigInt = row.iter().zip(&v).map(|(a, b)| BigInt::from(*a) * b).sum();
            let s = s.mod_floor(&m);
            let order = &m / s.gcd(&m);
            mult = mult.lcm(&order);
        }
        let generator: Vec<u64> = v.iter().map(|c| (c * &mult).to_u64().expect("ray fits in u64")).collect();
        let degree = generator.iter().zip(&self.degrees).map(|(a, d)| a * d).sum();
        Some(Ray { generator, degree })
    }

    /// Degree bound for Hilbert-basis elements: the sum of the `d` largest
    /// ray degrees, `d` the dimension of the cone. Zero for the trivial cone.
    pub fn hilbert_degree_bound(&self) -> u64 {
        let rays = self.extreme_rays();
        let d = span_dimension(&rays);
        let mut degs: Vec<u64> = rays.iter().map(|r| r.degree).collect();
        degs.sort_unstable_by(|a, b| b.cmp(a));
        degs.iter().take(d).sum()
    }
}

/// Dimension of the linear span of the rays.
pub fn span_dimension(rays: &[Ray]) -> usize {
    linalg::rank(rays.iter().map(|r| {
        r.generator
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i, BigInt::from(c)))
            .collect::<SparseVec>()
    }))
}

fn to_sparse(v: &[i64]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| (i, BigInt::from(c)))
        .collect()
}

/// All `size`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    rec(0, n, size, &mut cur, &mut out);
    out
}
