//! Polynomial differential forms on affine n-space.
//!
//! A k-form is stored as a map from basis blades `dx_I` (strictly increasing
//! index sets of size k) to polynomial coefficients. The total degree of a
//! homogeneous term `f dx_I` is `deg f + |I|`; every `dx_i` counts one.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{fmt_monomial, join_terms, total_degree, Exponent, Polynomial};

/// A strictly increasing index set, stored as a bit mask (bit `i` = `dx_{i+1}`).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Blade(pub u64);

impl Blade {
    pub const EMPTY: Blade = Blade(0);

    pub fn single(i: usize) -> Self {
        Blade(1 << i)
    }

    pub fn from_indices(indices: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        let mut prev: Option<usize> = None;
        for &i in indices {
            if i >= 64 || prev.is_some_and(|p| p >= i) {
                return Err(Error::Structure(format!(
                    "index set {:?} is not strictly increasing",
                    indices
                )));
            }
            mask |= 1 << i;
            prev = Some(i);
        }
        Ok(Blade(mask))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..64).filter(move |i| mask >> i & 1 == 1)
    }

    pub fn without(self, i: usize) -> Blade {
        Blade(self.0 & !(1 << i))
    }

    /// Number of members strictly below `i`.
    pub fn count_below(self, i: usize) -> u32 {
        (self.0 & ((1u64 << i) - 1)).count_ones()
    }

    /// All blades of size `k` inside `n` coordinates, in blade order.
    pub fn all(n: usize, k: usize) -> Vec<Blade> {
        let mut out: Vec<Blade> = (0..1u64 << n)
            .filter(|m| m.count_ones() as usize == k)
            .map(Blade)
            .collect();
        out.sort();
        out
    }

    /// Sign and product blade of `dx_I ∧ dx_J`, or `None` when they overlap.
    pub fn wedge(self, other: Blade) -> Option<(i32, Blade)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let inversions: u32 = other
            .indices()
            .map(|j| (self.0 >> (j + 1)).count_ones())
            .sum();
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        Some((sign, Blade(self.0 | other.0)))
    }
}

impl Ord for Blade {
    /// Size first, then lexicographic on the sorted index lists.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            let diff = self.0 ^ other.0;
            if diff == 0 {
                Ordering::Equal
            } else if self.0 >> diff.trailing_zeros() & 1 == 1 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices().map(|i| format!("dx{}", i + 1)).collect();
        write!(f, "{}", parts.join("∧"))
    }
}

/// A polynomial differential k-form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyForm {
    nvars: usize,
    degree: usize,
    components: BTreeMap<Blade, Polynomial>,
}

impl PolyForm {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        PolyForm {
            nvars,
            degree,
            components: BTreeMap::new(),
        }
    }

    /// The 0-form `f`.
    pub fn function(f: Polynomial) -> Self {
        let mut out = PolyForm::zero(f.nvars(), 0);
        if !f.is_zero() {
            out.components.insert(Blade::EMPTY, f);
        }
        out
    }

    /// The coordinate 1-form `dx_{i+1}`.
    pub fn dx(nvars: usize, i: usize) -> Self {
        Self::term(nvars, Blade::single(i), vec![0; nvars], BigRational::one())
    }

    /// `c * x^exp * dx_I`.
    pub fn term(nvars: usize, blade: Blade, exp: Exponent, c: BigRational) -> Self {
        let mut out = PolyForm::zero(nvars, blade.len());
        out.add_term(blade, exp, c);
        out
    }

    /// `f * dx_I`.
    pub fn from_component(blade: Blade, f: Polynomial) -> Self {
        let mut out = PolyForm::zero(f.nvars(), blade.len());
        if !f.is_zero() {
            out.components.insert(blade, f);
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Form degree k.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Blade, &Polynomial)> {
        self.components.iter()
    }

    pub fn component(&self, blade: Blade) -> Option<&Polynomial> {
        self.components.get(&blade)
    }

    /// Every monomial term `(blade, exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (Blade, &Exponent, &BigRational)> {
        self.components
            .iter()
            .flat_map(|(b, p)| p.terms().map(move |(e, c)| (*b, e, c)))
    }

    pub fn add_term(&mut self, blade: Blade, exp: Exponent, c: BigRational) {
        assert_eq!(blade.len(), self.degree, "blade size must equal form degree");
        if c.is_zero() {
            return;
        }
        let nvars = self.nvars;
        let p = self
            .components
            .entry(blade)
            .or_insert_with(|| Polynomial::zero(nvars));
        p.add_term(exp, c);
        if p.is_zero() {
            self.components.remove(&blade);
        }
    }

    /// Total degrees `deg f + k` occurring in the form.
    pub fn total_degrees(&self) -> Vec<u32> {
        let mut ds: Vec<u32> = self
            .terms()
            .map(|(_, e, _)| total_degree(e) + self.degree as u32)
            .collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    /// Total degree when homogeneous.
    pub fn total_degree(&self) -> Option<u32> {
        match self.total_degrees().as_slice() {
            [d] => Some(*d),
            _ => None,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = PolyForm::zero(self.nvars, self.degree);
        if c.is_zero() {
            return out;
        }
        for (b, p) in &self.components {
            out.components.insert(*b, p.scale(c));
        }
        out
    }

    pub fn mul_poly(&self, f: &Polynomial) -> Self {
        let mut out = PolyForm::zero(self.nvars, self.degree);
        for (b, p) in &self.components {
            let prod = p * f;
            if !prod.is_zero() {
                out.components.insert(*b, prod);
            }
        }
        out
    }

    pub fn mul_monomial(&self, exp: &[u32]) -> Self {
        let mut out = PolyForm::zero(self.nvars, self.degree);
        for (b, p) in &self.components {
            out.components.insert(*b, p.mul_monomial(exp, &BigRational::one()));
        }
        out
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::Structure(format!(
                "forms over {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::Structure(format!(
                "cannot add a {}-form and a {}-form",
                self.degree, other.degree
            )));
        }
        let mut out = if self.is_zero() { other.clone() } else { self.clone() };
        let rest = if self.is_zero() { self } else { other };
        for (b, e, c) in rest.terms() {
            out.add_term(b, e.clone(), c.clone());
        }
        Ok(out)
    }

    /// Exterior product, with the sign of the permutation sorting the
    /// concatenated index sets.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = PolyForm::zero(self.nvars, self.degree + other.degree);
        if self.degree + other.degree > self.nvars {
            return Ok(out);
        }
        for (b1, p1) in &self.components {
            for (b2, p2) in &other.components {
                let Some((sign, b)) = b1.wedge(*b2) else {
                    continue;
                };
                let prod = p1 * p2;
                let prod = if sign < 0 { -&prod } else { prod };
                for (e, c) in prod.terms() {
                    out.add_term(b, e.clone(), c.clone());
                }
            }
        }
        Ok(out)
    }

    pub fn exterior_derivative(&self) -> Self {
        let mut out = PolyForm::zero(self.nvars, self.degree + 1);
        if self.degree >= self.nvars {
            return out;
        }
        for (b, p) in &self.components {
            for i in 0..self.nvars {
                if b.contains(i) {
                    continue;
                }
                let dp = p.derivative(i);
                if dp.is_zero() {
                    continue;
                }
                let nb = Blade(b.0 | 1 << i);
                let neg = b.count_below(i) % 2 == 1;
                for (e, c) in dp.terms() {
                    out.add_term(nb, e.clone(), if neg { -c.clone() } else { c.clone() });
                }
            }
        }
        out
    }

    /// Terms sorted for display and normalization: descending exponent, then blade.
    pub fn display_terms(&self) -> Vec<(Blade, Exponent, BigRational)> {
        let mut ts: Vec<_> = self
            .terms()
            .map(|(b, e, c)| (b, e.clone(), c.clone()))
            .collect();
        ts.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        ts
    }

    /// Rescales to a primitive integral form whose first display term is positive.
    pub fn normalized(&self) -> Self {
        use num_integer::Integer;
        let ts = self.display_terms();
        let Some(first) = ts.first() else {
            return self.clone();
        };
        let mut den = num_bigint::BigInt::one();
        for (_, _, c) in &ts {
            den = den.lcm(c.denom());
        }
        let mut g = num_bigint::BigInt::zero();
        for (_, _, c) in &ts {
            let v = c.numer() * (&den / c.denom());
            g = g.gcd(&v);
        }
        let mut factor = BigRational::new(den, g);
        if first.2 < BigRational::zero() {
            factor = -factor;
        }
        self.scale(&factor)
    }
}

impl fmt::Debug for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(BigRational, String)> = self
            .display_terms()
            .into_iter()
            .map(|(b, e, c)| {
                let mono = fmt_monomial(&e);
                let body = match (mono.is_empty(), b.is_empty()) {
                    (true, _) => b.to_string(),
                    (false, true) => mono,
                    (false, false) => format!("{}*{}", mono, b),
                };
                (c, body)
            })
            .collect();
        write!(f, "{}", join_terms(&terms))
    }
}

impl Add for &PolyForm {
    type Output = PolyForm;
    fn add(self, rhs: &PolyForm) -> PolyForm {
        self.try_add(rhs).expect("incompatible forms")
    }
}

impl Sub for &PolyForm {
    type Output = PolyForm;
    fn sub(self, rhs: &PolyForm) -> PolyForm {
        self.try_add(&-rhs).expect("incompatible forms")
    }
}

impl Neg for &PolyForm {
    type Output = PolyForm;
    fn neg(self) -> PolyForm {
        self.scale(&-BigRational::one())
    }
}

/// `df` for a polynomial `f`.
pub fn differential(f: &Polynomial) -> PolyForm {
    PolyForm::function(f.clone()).exterior_derivative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn x(i: usize) -> Polynomial {
        Polynomial::var(2, i)
    }

    #[test]
    fn repeated_index_wedges_to_zero() {
        let dx = PolyForm::dx(2, 0);
        assert!(dx.wedge(&dx).unwrap().is_zero());
    }

    #[test]
    fn wedge_transposition_sign() {
        let a = PolyForm::dx(2, 1).mul_poly(&x(0));
        let b = PolyForm::dx(2, 0).mul_poly(&x(1));
        let expected = PolyForm::term(2, Blade(0b11), vec![1, 1], q(-1));
        assert_eq!(a.wedge(&b).unwrap(), expected);
    }

    #[test]
    fn wedge_of_differentials() {
        let x2 = &x(0) * &x(0);
        let xy = &x(0) * &x(1);
        let w = differential(&x2).wedge(&differential(&xy)).unwrap();
        assert_eq!(w, PolyForm::term(2, Blade(0b11), vec![2, 0], q(2)));
    }

    #[test]
    fn derivative_examples() {
        let xy = &x(0) * &x(1);
        let d = differential(&xy);
        let expected = &PolyForm::dx(2, 0).mul_poly(&x(1)) + &PolyForm::dx(2, 1).mul_poly(&x(0));
        assert_eq!(d, expected);
        assert!(d.exterior_derivative().is_zero());
        let a = PolyForm::dx(2, 1).mul_poly(&x(0));
        assert_eq!(a.exterior_derivative(), PolyForm::term(2, Blade(0b11), vec![0, 0], q(1)));
    }

    #[test]
    fn mismatched_variable_counts_are_structural_errors() {
        let a = PolyForm::dx(2, 0);
        let b = PolyForm::dx(3, 0);
        assert!(matches!(a.wedge(&b), Err(Error::Structure(_))));
    }

    #[test]
    fn blade_order_is_lexicographic_within_size() {
        let mut bs = Blade::all(3, 2);
        bs.sort();
        let lists: Vec<Vec<usize>> = bs.iter().map(|b| b.indices().collect()).collect();
        assert_eq!(lists, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn display_and_normalization() {
        let w = &PolyForm::dx(2, 1).mul_poly(&x(0)).scale(&q(-2))
            + &PolyForm::dx(2, 0).mul_poly(&x(1)).scale(&q(2));
        assert_eq!(w.normalized().to_string(), "x1*dx2 - x2*dx1");
    }
}
