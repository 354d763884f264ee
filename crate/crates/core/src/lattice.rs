//! Small integer lattice routines: Hermite row reduction and saturation tests.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::cone::subsets;

/// A basis (in row Hermite form) of the lattice spanned by the rows.
pub fn lattice_basis(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let Some(ncols) = rows.first().map(|r| r.len()) else {
        return vec![];
    };
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&c| BigInt::from(c)).collect())
        .collect();
    let mut r = 0;
    for col in 0..ncols {
        loop {
            let mut best: Option<usize> = None;
            for i in r..m.len() {
                if !m[i][col].is_zero()
                    && best.is_none_or(|b| m[i][col].abs() < m[b][col].abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            m.swap(r, b);
            let mut clean = true;
            for i in r + 1..m.len() {
                if m[i][col].is_zero() {
                    continue;
                }
                let q = m[i][col].div_floor(&m[r][col]);
                for c in col..ncols {
                    let sub = &q * &m[r][c];
                    m[i][c] -= sub;
                }
                if !m[i][col].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if r < m.len() && !m[r][col].is_zero() {
            r += 1;
        }
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    m.into_iter()
        .map(|row| row.iter().map(|c| c.to_i64().expect("lattice entry fits i64")).collect())
        .collect()
}

fn det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    // Bareiss fraction-free elimination.
    let n = a.len();
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if sign < 0 {
        -a[n - 1][n - 1].clone()
    } else {
        a[n - 1][n - 1].clone()
    }
}

/// Whether the rows are linearly independent and extend to a basis of `Z^d`,
/// i.e. the gcd of their maximal minors is 1.
pub fn is_part_of_basis(rows: &[Vec<i64>]) -> bool {
    let Some(d) = rows.first().map(|r| r.len()) else {
        return true;
    };
    let r = rows.len();
    if r > d {
        return false;
    }
    let mut g = BigInt::zero();
    for cols in subsets(d, r) {
        let minor: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|row| cols.iter().map(|&c| BigInt::from(row[c])).collect())
            .collect();
        g = g.gcd(&det(minor));
        if g == BigInt::from(1) {
            return true;
        }
    }
    g == BigInt::from(1)
}

/// Integer coordinates of `v` in a lattice basis, if it lies in the lattice.
pub fn coordinates(basis: &[Vec<i64>], v: &[i64]) -> Option<Vec<i64>> {
    // The basis is in row Hermite form, so solve by forward substitution on pivots.
    let mut rest: Vec<i64> = v.to_vec();
    let mut out = vec![0i64; basis.len()];
    for (i, row) in basis.iter().enumerate() {
        let p = row.iter().position(|&c| c != 0)?;
        if rest[p] % row[p] != 0 {
            return None;
        }
        let q = rest[p] / row[p];
        out[i] = q;
        for (c, &b) in rest.iter_mut().zip(row) {
            *c -= q * b;
        }
    }
    rest.iter().all(|&c| c == 0).then_some(out)
}
