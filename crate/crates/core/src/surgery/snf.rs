//! Smith normal form over the integers with explicit unimodular transforms.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::SurgeryError;

pub type Matrix = Vec<Vec<BigInt>>;

/// `u * a * v == d` with `d` diagonal, nonnegative, and `d[i][i] | d[i+1][i+1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub d: Matrix,
    pub u: Matrix,
    pub v: Matrix,
}

impl SmithForm {
    /// Nonzero diagonal entries in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.len().min(self.d.first().map_or(0, Vec::len)))
            .map(|i| self.d[i][i].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }
}

fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i32)).collect()).collect()
}

fn to_matrix(input: &[Vec<i64>]) -> Matrix {
    input.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// row[dst] -= k * row[src] on `a` and the row transform `u`.
fn row_op(a: &mut Matrix, u: &mut Matrix, dst: usize, src: usize, k: &BigInt) {
    for m in [a, u] {
        for j in 0..m[0].len() {
            let t = k * &m[src][j];
            m[dst][j] -= t;
        }
    }
}

fn col_op(a: &mut Matrix, v: &mut Matrix, dst: usize, src: usize, k: &BigInt) {
    for m in [a, v] {
        for row in m.iter_mut() {
            let t = k * &row[src];
            row[dst] -= t;
        }
    }
}

fn swap_cols(m: &mut Matrix, i: usize, j: usize) {
    for row in m.iter_mut() {
        row.swap(i, j);
    }
}

pub fn smith_normal_form(input: &[Vec<i64>]) -> Result<SmithForm, SurgeryError> {
    let rows = input.len();
    let cols = input.first().map_or(0, Vec::len);
    if input.iter().any(|r| r.len() != cols) {
        return Err(SurgeryError::Shape);
    }
    let mut a = to_matrix(input);
    let mut u = identity(rows);
    let mut v = identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            a.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut a, t, pj);
            swap_cols(&mut v, t, pj);
            let piv = a[t][t].clone();
            let mut dirty = false;
            for i in t + 1..rows {
                let k = a[i][t].div_floor(&piv);
                if !k.is_zero() {
                    row_op(&mut a, &mut u, i, t, &k);
                }
                dirty |= !a[i][t].is_zero();
            }
            for j in t + 1..cols {
                let k = a[t][j].div_floor(&piv);
                if !k.is_zero() {
                    col_op(&mut a, &mut v, j, t, &k);
                }
                dirty |= !a[t][j].is_zero();
            }
            if dirty {
                continue;
            }
            // Enforce divisibility by folding an offending row into row t.
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &piv).is_zero()));
            match bad {
                Some(i) => row_op(&mut a, &mut u, t, i, &BigInt::from(-1)),
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for m in [&mut a, &mut u] {
                for x in m[t].iter_mut() {
                    *x = -&*x;
                }
            }
        }
    }
    let sf = SmithForm { d: a, u, v };
    verify(input, &sf)?;
    Ok(sf)
}

fn mul(x: &Matrix, y: &Matrix) -> Matrix {
    let cols = y.first().map_or(0, Vec::len);
    x.iter()
        .map(|row| (0..cols).map(|j| row.iter().zip(y).map(|(a, r)| a * &r[j]).sum()).collect())
        .collect()
}

/// Recomputes `u * a * v` exactly and checks the diagonal shape.
pub fn verify(input: &[Vec<i64>], sf: &SmithForm) -> Result<(), SurgeryError> {
    let a = to_matrix(input);
    if a.is_empty() || a[0].is_empty() {
        return Ok(());
    }
    if mul(&mul(&sf.u, &a), &sf.v) != sf.d {
        return Err(SurgeryError::SmithCheck("U*A*V != D".into()));
    }
    for (i, row) in sf.d.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if i != j && !x.is_zero() {
                return Err(SurgeryError::SmithCheck(format!("off-diagonal entry at ({i},{j})")));
            }
        }
    }
    let f = sf.invariant_factors();
    let n = sf.d.len().min(sf.d[0].len());
    let nonzero_prefix = (0..n).take_while(|&i| !sf.d[i][i].is_zero()).count();
    if nonzero_prefix != f.len() || f.iter().any(Signed::is_negative) || f.windows(2).any(|w| !(&w[1] % &w[0]).is_zero()) {
        return Err(SurgeryError::SmithCheck("divisibility chain".into()));
    }
    for m in [&sf.u, &sf.v] {
        if !det(m).abs().is_one() {
            return Err(SurgeryError::SmithCheck("transform is not unimodular".into()));
        }
    }
    Ok(())
}

/// Integer determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &Matrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Finitely generated abelian group `Z^rank ⊕ Z/d1 ⊕ ... ⊕ Z/dk`, `d_i | d_{i+1}`, `d_i >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub rank: usize,
    pub factors: Vec<u64>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup { rank: 0, factors: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup { rank, factors: Vec::new() }
    }

    /// Cokernel of the map `Z^rows -> Z^cols` given by the rows of `m`.
    pub fn cokernel(m: &[Vec<i64>], cols: usize) -> Result<Self, SurgeryError> {
        if m.is_empty() {
            return Ok(AbelianGroup::free(cols));
        }
        let sf = smith_normal_form(m)?;
        let f = sf.invariant_factors();
        Ok(AbelianGroup {
            rank: cols - f.len(),
            factors: f
                .into_iter()
                .filter(|x| !x.is_one())
                .map(|x| x.to_u64().ok_or(SurgeryError::Overflow))
                .collect::<Result<_, _>>()?,
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.factors.is_empty()
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<u64> {
        (self.rank == 0).then(|| self.factors.iter().product())
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("0");
        }
        let parts: Vec<String> = std::iter::repeat_n("Z".to_string(), self.rank)
            .chain(self.factors.iter().map(|d| format!("Z/{d}")))
            .collect();
        f.write_str(&parts.join(" ⊕ "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_forms() {
        let sf = smith_normal_form(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]).unwrap();
        let f: Vec<i64> = sf.invariant_factors().iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(f, vec![2, 6, 12]);
        let g = AbelianGroup::cokernel(&[vec![0, 1], vec![1, 0]], 2).unwrap();
        assert!(g.is_trivial());
        let g = AbelianGroup::cokernel(&[vec![5, 0]], 2).unwrap();
        assert_eq!(g.to_string(), "Z ⊕ Z/5");
        assert_eq!(AbelianGroup::cokernel(&[vec![0]], 1).unwrap().to_string(), "Z");
        assert_eq!(AbelianGroup::trivial().to_string(), "0");
    }

    #[test]
    fn zero_and_empty() {
        let sf = smith_normal_form(&[vec![0, 0], vec![0, 0]]).unwrap();
        assert!(sf.invariant_factors().is_empty());
        assert_eq!(AbelianGroup::cokernel(&[], 3).unwrap(), AbelianGroup::free(3));
    }
}
