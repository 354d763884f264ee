//! Diagonal actions of `G = T^s x Z/m_1 x ... x Z/m_t` on affine n-space.
//!
//! Row `j` of the weight matrix gives the characters by which the `j`-th
//! factor scales the coordinates. Rows `0..s` are torus rows (signed
//! integers); the remaining rows are finite rows, stored reduced mod `m_j`.
//! A differential `dx_i` carries the weight of `x_i`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::{Blade, PolyForm};

/// Coordinate counts above this are rejected; blades are 64-bit masks and
/// every piece computation is exponential in `n` anyway.
pub const MAX_COORDINATES: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ActionSpec {
    pub n: usize,
    pub torus_rank: usize,
    pub finite_orders: Vec<u64>,
    pub weight_matrix: Vec<Vec<i64>>,
}

/// An element of `Z^s x Z/m_1 x ... x Z/m_t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Weight {
    pub torus: Vec<i64>,
    pub finite: Vec<u64>,
}

impl Weight {
    pub fn is_zero(&self) -> bool {
        self.torus.iter().all(|&w| w == 0) && self.finite.iter().all(|&w| w == 0)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.torus.iter().map(|w| w.to_string()).collect();
        let m: Vec<String> = self.finite.iter().map(|w| w.to_string()).collect();
        write!(f, "({}; {})", t.join(","), m.join(","))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawActionFile {
    #[serde(default)]
    schema: Option<u32>,
    n: usize,
    torus_rank: usize,
    finite_orders: Vec<u64>,
    weight_matrix: Vec<Vec<i64>>,
}

/// Why an action document could not be read.
#[derive(Debug)]
pub enum ActionParseError {
    Json(serde_json::Error),
    Invalid(Error),
}

impl fmt::Display for ActionParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionParseError::Json(e) => write!(
                f,
                "malformed action JSON at line {}, column {}: {}",
                e.line(),
                e.column(),
                e
            ),
            ActionParseError::Invalid(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for ActionParseError {}

impl ActionSpec {
    /// The trivial group on `n` coordinates.
    pub fn trivial(n: usize) -> Self {
        ActionSpec {
            n,
            torus_rank: 0,
            finite_orders: vec![],
            weight_matrix: vec![],
        }
    }

    /// A single torus factor with the given weights.
    pub fn torus(weights: &[i64]) -> Self {
        ActionSpec {
            n: weights.len(),
            torus_rank: 1,
            finite_orders: vec![],
            weight_matrix: vec![weights.to_vec()],
        }
    }

    /// A single cyclic factor `Z/m` with the given weights.
    pub fn cyclic(m: u64, weights: &[i64]) -> Self {
        ActionSpec {
            n: weights.len(),
            torus_rank: 0,
            finite_orders: vec![m],
            weight_matrix: vec![weights.to_vec()],
        }
    }

    /// Reads an action document. An optional `"schema": 1` key is accepted.
    pub fn from_json(text: &str) -> std::result::Result<Self, ActionParseError> {
        let raw: RawActionFile = serde_json::from_str(text).map_err(ActionParseError::Json)?;
        if let Some(s) = raw.schema {
            if s != 1 {
                return Err(ActionParseError::Invalid(Error::Validation {
                    message: format!("unsupported schema version {}", s),
                    row: None,
                    col: None,
                }));
            }
        }
        let spec = ActionSpec {
            n: raw.n,
            torus_rank: raw.torus_rank,
            finite_orders: raw.finite_orders,
            weight_matrix: raw.weight_matrix,
        };
        validate_action(&spec).map_err(ActionParseError::Invalid)
    }

    /// Canonical JSON: sorted keys, two-space indentation, trailing newline.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("action serializes");
        let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
        s.push('\n');
        s
    }

    pub fn finite_rank(&self) -> usize {
        self.finite_orders.len()
    }

    pub fn is_finite_only(&self) -> bool {
        self.torus_rank == 0
    }

    pub fn torus_row(&self, j: usize) -> &[i64] {
        &self.weight_matrix[j]
    }

    pub fn finite_row(&self, j: usize) -> &[i64] {
        &self.weight_matrix[self.torus_rank + j]
    }

    /// Order of the finite part (1 when there is none); `None` on overflow.
    pub fn finite_order(&self) -> Option<u64> {
        self.finite_orders
            .iter()
            .try_fold(1u64, |acc, &m| acc.checked_mul(m))
    }

    pub fn zero_weight(&self) -> Weight {
        Weight {
            torus: vec![0; self.torus_rank],
            finite: vec![0; self.finite_rank()],
        }
    }

    /// Weight of a coordinate-direction vector (exponents plus optional blade).
    fn weight_of(&self, exp: &[u32], blade: Blade) -> Weight {
        let count = |i: usize| exp[i] as i64 + blade.contains(i) as i64;
        let torus = (0..self.torus_rank)
            .map(|j| {
                let row = self.torus_row(j);
                (0..self.n).map(|i| row[i] * count(i)).sum()
            })
            .collect();
        let finite = (0..self.finite_rank())
            .map(|j| {
                let row = self.finite_row(j);
                let m = self.finite_orders[j] as i64;
                let s: i64 = (0..self.n).map(|i| row[i] * count(i)).sum();
                s.rem_euclid(m) as u64
            })
            .collect();
        Weight { torus, finite }
    }

    pub fn weight_of_monomial(&self, exp: &[u32]) -> Result<Weight> {
        if exp.len() != self.n {
            return Err(Error::Structure(format!(
                "exponent of length {} for an action on {} coordinates",
                exp.len(),
                self.n
            )));
        }
        Ok(self.weight_of(exp, Blade::EMPTY))
    }

    /// Weight of `x^exp dx_I`.
    pub fn weight_of_term(&self, blade: Blade, exp: &[u32]) -> Weight {
        self.weight_of(exp, blade)
    }

    /// Whether `x^exp dx_I` has weight zero, without allocating a `Weight`.
    pub fn is_invariant_term(&self, blade: Blade, exp: &[u32]) -> bool {
        let count = |i: usize| exp[i] as i64 + blade.contains(i) as i64;
        for j in 0..self.torus_rank {
            let row = self.torus_row(j);
            if (0..self.n).map(|i| row[i] * count(i)).sum::<i64>() != 0 {
                return false;
            }
        }
        for j in 0..self.finite_rank() {
            let row = self.finite_row(j);
            let s: i64 = (0..self.n).map(|i| row[i] * count(i)).sum();
            if s.rem_euclid(self.finite_orders[j] as i64) != 0 {
                return false;
            }
        }
        true
    }

    /// The common weight of every term, or an inhomogeneity error.
    pub fn weight_of_form(&self, form: &PolyForm) -> Result<Weight> {
        self.check_form(form)?;
        let mut found: Option<Weight> = None;
        for (b, e, _) in form.terms() {
            let w = self.weight_of(e, b);
            match &found {
                None => found = Some(w),
                Some(f) if *f != w => {
                    return Err(Error::Inhomogeneous {
                        first: f.to_string(),
                        second: w.to_string(),
                    })
                }
                _ => {}
            }
        }
        Ok(found.unwrap_or_else(|| self.zero_weight()))
    }

    /// Projection onto the weight-zero terms.
    pub fn invariant_component(&self, form: &PolyForm) -> PolyForm {
        let mut out = PolyForm::zero(form.nvars(), form.degree());
        for (b, e, c) in form.terms() {
            if self.is_invariant_term(b, e) {
                out.add_term(b, e.clone(), c.clone());
            }
        }
        out
    }

    pub fn add_weights(&self, a: &Weight, b: &Weight) -> Weight {
        Weight {
            torus: a.torus.iter().zip(&b.torus).map(|(x, y)| x + y).collect(),
            finite: a
                .finite
                .iter()
                .zip(&b.finite)
                .zip(&self.finite_orders)
                .map(|((x, y), m)| (x + y) % m)
                .collect(),
        }
    }

    pub(crate) fn check_form(&self, form: &PolyForm) -> Result<()> {
        if form.nvars() != self.n {
            return Err(Error::Structure(format!(
                "form over {} variables for an action on {} coordinates",
                form.nvars(),
                self.n
            )));
        }
        Ok(())
    }
}

/// Checks the shape of an action and reduces its finite rows.
pub fn validate_action(spec: &ActionSpec) -> Result<ActionSpec> {
    let invalid = |message: String, row, col| Error::Validation { message, row, col };
    if spec.n == 0 || spec.n > MAX_COORDINATES {
        return Err(invalid(
            format!("coordinate count {} outside 1..={}", spec.n, MAX_COORDINATES),
            None,
            None,
        ));
    }
    let rows = spec.torus_rank + spec.finite_orders.len();
    if spec.weight_matrix.len() != rows {
        return Err(invalid(
            format!(
                "weight matrix has {} rows, expected torus_rank + finite factors = {}",
                spec.weight_matrix.len(),
                rows
            ),
            None,
            None,
        ));
    }
    for (r, row) in spec.weight_matrix.iter().enumerate() {
        if row.len() != spec.n {
            return Err(invalid(
                format!("row has {} entries, expected {}", row.len(), spec.n),
                Some(r),
                Some(row.len().min(spec.n)),
            ));
        }
    }
    let mut out = spec.clone();
    for (j, &m) in spec.finite_orders.iter().enumerate() {
        let r = spec.torus_rank + j;
        if m < 2 {
            return Err(invalid(format!("finite order m = {} must be at least 2", m), Some(r), None));
        }
        if m > i64::MAX as u64 {
            return Err(invalid(format!("finite order {} too large", m), Some(r), None));
        }
        for w in out.weight_matrix[r].iter_mut() {
            *w = w.rem_euclid(m as i64);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;
    use num_rational::BigRational;
    use num_traits::One;

    #[test]
    fn monomial_weights() {
        let z2 = ActionSpec::cyclic(2, &[1, 1]);
        assert_eq!(z2.weight_of_monomial(&[2, 1]).unwrap().finite, vec![1]);
        let t = ActionSpec::torus(&[1, -1]);
        assert_eq!(t.weight_of_monomial(&[1, 1]).unwrap().torus, vec![0]);
        assert!(t.weight_of_monomial(&[0, 0]).unwrap().is_zero());
        assert!(matches!(t.weight_of_monomial(&[1]), Err(Error::Structure(_))));
    }

    #[test]
    fn form_weights_and_inhomogeneity() {
        let t = ActionSpec::torus(&[1, -1]);
        let x = Polynomial::var(2, 0);
        let xdy = PolyForm::dx(2, 1).mul_poly(&x);
        assert_eq!(t.weight_of_form(&xdy).unwrap().torus, vec![0]);
        let z2 = ActionSpec::cyclic(2, &[1, 1]);
        let top = PolyForm::dx(2, 0).wedge(&PolyForm::dx(2, 1)).unwrap();
        assert!(z2.weight_of_form(&top).unwrap().is_zero());
        let bad = &PolyForm::dx(2, 0).mul_poly(&x) + &PolyForm::dx(2, 1);
        assert!(matches!(t.weight_of_form(&bad), Err(Error::Inhomogeneous { .. })));
    }

    #[test]
    fn invariant_projection() {
        let z2 = ActionSpec::cyclic(2, &[1, 1]);
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let f = &PolyForm::dx(2, 0).mul_poly(&x) + &PolyForm::dx(2, 1);
        assert_eq!(z2.invariant_component(&f), PolyForm::dx(2, 0).mul_poly(&x));
        let t = ActionSpec::torus(&[1, -1]);
        let g = &PolyForm::dx(2, 1).mul_poly(&(&x * &x)) + &PolyForm::dx(2, 1).mul_poly(&y);
        assert!(t.invariant_component(&g).is_zero());
        let triv = ActionSpec::trivial(2);
        assert_eq!(triv.invariant_component(&g), g);
    }

    #[test]
    fn validation() {
        let bad = ActionSpec::cyclic(1, &[1, 1]);
        assert!(matches!(validate_action(&bad), Err(Error::Validation { row: Some(0), .. })));
        let neg = ActionSpec::cyclic(3, &[-1, 4]);
        assert_eq!(validate_action(&neg).unwrap().weight_matrix, vec![vec![2, 1]]);
        let ragged = ActionSpec {
            n: 2,
            torus_rank: 1,
            finite_orders: vec![],
            weight_matrix: vec![vec![1]],
        };
        assert!(matches!(
            validate_action(&ragged),
            Err(Error::Validation { row: Some(0), col: Some(1), .. })
        ));
    }

    #[test]
    fn json_reports_position() {
        let err = ActionSpec::from_json("{\n  \"n\": 2,\n  oops\n}").unwrap_err();
        match err {
            ActionParseError::Json(e) => assert_eq!(e.line(), 3),
            _ => panic!("expected a JSON error"),
        }
    }

    #[test]
    fn json_round_trip_is_canonical() {
        let a = ActionSpec::cyclic(6, &[1, 3]);
        let text = a.to_json();
        let back = ActionSpec::from_json(&text).unwrap();
        assert_eq!(back, a);
        assert_eq!(back.to_json(), text);
        let with_schema = "{\"schema\": 1, \"n\": 2, \"torus_rank\": 0, \"finite_orders\": [6], \"weight_matrix\": [[1, 3]]}";
        assert_eq!(ActionSpec::from_json(with_schema).unwrap(), a);
    }

    #[test]
    fn zero_form_has_zero_weight() {
        let t = ActionSpec::torus(&[1, 2]);
        let z = PolyForm::zero(2, 1);
        assert!(t.weight_of_form(&z).unwrap().is_zero());
        let one = PolyForm::function(Polynomial::constant(2, BigRational::one()));
        assert!(t.weight_of_form(&one).unwrap().is_zero());
    }
}
