use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{Rational, RationalVector};
use crate::error::{Error, Result};

/// Dense rectangular matrix of rationals, stored by rows.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<RationalVector>", into = "Vec<RationalVector>")]
pub struct RationalMatrix {
    rows: Vec<RationalVector>,
    ncols: usize,
}

impl TryFrom<Vec<RationalVector>> for RationalMatrix {
    type Error = Error;
    fn try_from(rows: Vec<RationalVector>) -> Result<Self> {
        RationalMatrix::new(rows)
    }
}

impl From<RationalMatrix> for Vec<RationalVector> {
    fn from(m: RationalMatrix) -> Self {
        m.rows
    }
}

impl RationalMatrix {
    pub fn new(rows: Vec<RationalVector>) -> Result<Self> {
        let ncols = rows.first().map_or(0, |r| r.rank());
        for r in &rows {
            r.check_rank(ncols)?;
        }
        Ok(RationalMatrix { rows, ncols })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| RationalVector::from_ints(r)).collect())
    }

    pub fn identity(n: usize) -> Self {
        RationalMatrix { rows: (0..n).map(|i| RationalVector::unit(n, i)).collect(), ncols: n }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[RationalVector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &RationalVector {
        &self.rows[i]
    }

    pub fn is_integral(&self) -> bool {
        self.rows.iter().all(|r| r.is_integral())
    }

    pub fn transpose(&self) -> RationalMatrix {
        let rows = (0..self.ncols)
            .map(|j| self.rows.iter().map(|r| r[j].clone()).collect())
            .collect();
        RationalMatrix { rows, ncols: self.nrows() }
    }

    pub fn mul_vec(&self, v: &RationalVector) -> Result<RationalVector> {
        v.check_rank(self.ncols)?;
        Ok(self.rows.iter().map(|r| r.dot(v)).collect())
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.ncols != other.nrows() {
            return Err(Error::Dimension { expected: self.ncols, found: other.nrows() });
        }
        let t = other.transpose();
        let rows = self
            .rows
            .iter()
            .map(|r| t.rows.iter().map(|c| r.dot(c)).collect())
            .collect();
        Ok(RationalMatrix { rows, ncols: other.ncols })
    }

    fn require_square(&self) -> Result<usize> {
        if self.nrows() != self.ncols {
            return Err(Error::NotSquare { rows: self.nrows(), cols: self.ncols });
        }
        Ok(self.ncols)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<Rational> {
        let n = self.require_square()?;
        if n == 0 {
            return Ok(Rational::one());
        }
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for r in &self.rows {
            let (ints, s) = integer_row(r);
            scale *= s;
            a.push(ints);
        }
        let d = bareiss_det(a);
        Ok(Rational::new(d, scale))
    }

    /// Solves `self * x = b` exactly.
    pub fn solve(&self, b: &RationalVector) -> Result<RationalVector> {
        let n = self.require_square()?;
        b.check_rank(n)?;
        // Row scaling leaves the solution unchanged, so work on an integer
        // augmented matrix.
        let mut a: Vec<Vec<BigInt>> = self
            .rows
            .iter()
            .zip(b.iter())
            .map(|(r, bi)| {
                let mut ext: Vec<Rational> = r.to_vec();
                ext.push(bi.clone());
                integer_row(&RationalVector::new(ext)).0
            })
            .collect();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return Err(Error::Singular);
            };
            a.swap(k, p);
            for i in k + 1..n {
                for j in k + 1..=n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        let mut x = vec![Rational::zero(); n];
        for i in (0..n).rev() {
            let mut acc = Rational::from(a[i][n].clone());
            for j in i + 1..n {
                acc -= Rational::from(a[i][j].clone()) * &x[j];
            }
            x[i] = acc / Rational::from(a[i][i].clone());
        }
        Ok(RationalVector::new(x))
    }

    pub fn inverse(&self) -> Result<RationalMatrix> {
        let n = self.require_square()?;
        let cols = (0..n)
            .map(|i| self.solve(&RationalVector::unit(n, i)))
            .collect::<Result<Vec<_>>>()?;
        Ok(RationalMatrix::new(cols)?.transpose())
    }

    pub fn rank(&self) -> usize {
        rank_of(&self.rows)
    }
}

/// Rank of a list of vectors (fraction-free elimination).
pub fn rank_of(rows: &[RationalVector]) -> usize {
    let a: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r).0).collect();
    integer_rank(a)
}

/// Rank of an integer matrix given by rows.
pub fn integer_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let m = a.len();
    if m == 0 {
        return 0;
    }
    let ncols = a[0].len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..ncols {
        if rank == m {
            break;
        }
        let Some(p) = (rank..m).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..m {
            for j in col + 1..ncols {
                let v = &a[i][j] * &a[rank][col] - &a[i][col] * &a[rank][j];
                a[i][j] = v / &prev;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Returns `(ints, s)` with `ints = s * row`, `s > 0` the lcm of denominators.
fn integer_row(row: &RationalVector) -> (Vec<BigInt>, BigInt) {
    let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints = row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    (ints, lcm)
}

pub(crate) fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(k, p);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if sign {
        -prev
    } else {
        prev
    }
}

/// Determinant of an integer matrix (rows of equal length).
pub fn integer_det(rows: &[Vec<BigInt>]) -> BigInt {
    bareiss_det(rows.to_vec())
}
