//! Double description: extreme rays of `{x : <a_i, x> >= 0}` by ray-by-ray
//! refinement.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::{integer_rank, primitive_bigint, Rational, RationalMatrix, RationalVector};

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn contains_all(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }
}

struct Ray {
    v: Vec<BigInt>,
    zero: Bits,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Extreme rays (primitive, sorted lexicographically) of the cone cut out by
/// `rows`. The rows must span `dim`-space, i.e. the cone must be pointed;
/// otherwise the rank of the rows is returned as the error.
pub(crate) fn extreme_rays(rows: &[Vec<BigInt>], dim: usize) -> Result<Vec<Vec<BigInt>>, usize> {
    let m = rows.len();
    let mut basis: Vec<usize> = Vec::with_capacity(dim);
    let mut basis_rows: Vec<Vec<BigInt>> = Vec::with_capacity(dim);
    for (i, r) in rows.iter().enumerate() {
        if basis.len() == dim {
            break;
        }
        if r.iter().all(Zero::is_zero) {
            continue;
        }
        basis_rows.push(r.clone());
        if integer_rank(basis_rows.clone()) == basis_rows.len() {
            basis.push(i);
        } else {
            basis_rows.pop();
        }
    }
    if basis.len() < dim {
        return Err(basis.len());
    }

    let b = RationalMatrix::new(basis_rows.iter().map(|r| RationalVector::from_bigints(r)).collect())
        .expect("rectangular basis");
    let mut rays: Vec<Ray> = (0..dim)
        .map(|j| {
            let mut e = RationalVector::zeros(dim);
            e[j] = Rational::one();
            let col = b.solve(&e).expect("basis rows are independent");
            let v = col.primitive();
            let mut zero = Bits::new(m);
            for (k, &row) in basis.iter().enumerate() {
                if k != j {
                    zero.set(row);
                }
            }
            Ray { v, zero }
        })
        .collect();

    let mut processed = vec![false; m];
    for &i in &basis {
        processed[i] = true;
    }
    let need = dim.saturating_sub(2);
    for idx in 0..m {
        if processed[idx] {
            continue;
        }
        processed[idx] = true;
        let a = &rows[idx];
        let vals: Vec<BigInt> = rays.iter().map(|r| dot(a, &r.v)).collect();
        if vals.iter().all(|v| !v.is_negative()) {
            for (r, v) in rays.iter_mut().zip(&vals) {
                if v.is_zero() {
                    r.zero.set(idx);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_negative()).collect();
        let mut created = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].zero.and(&rays[n].zero);
                if common.count() < need {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .all(|k| k == p || k == n || !rays[k].zero.contains_all(&common));
                if !adjacent {
                    continue;
                }
                let sp = &vals[p];
                let sn = -&vals[n];
                let v: Vec<BigInt> =
                    rays[n].v.iter().zip(&rays[p].v).map(|(x, y)| sp * x + &sn * y).collect();
                let mut zero = common;
                zero.set(idx);
                created.push(Ray { v: primitive_bigint(&v), zero });
            }
        }
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + created.len());
        for (mut r, v) in rays.into_iter().zip(vals) {
            if v.is_negative() {
                continue;
            }
            if v.is_zero() {
                r.zero.set(idx);
            }
            next.push(r);
        }
        next.extend(created);
        rays = next;
    }

    let mut out: Vec<Vec<BigInt>> = rays.into_iter().map(|r| r.v).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn orthant_is_self_dual() {
        let rays = extreme_rays(&ints(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]), 3).unwrap();
        assert_eq!(rays, ints(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]));
    }

    #[test]
    fn square_pyramid() {
        // cone over the square with vertices (+-1, +-1, 1)
        let gens: &[&[i64]] = &[&[1, 1, 1], &[1, -1, 1], &[-1, 1, 1], &[-1, -1, 1]];
        let facets = extreme_rays(&ints(gens), 3).unwrap();
        assert_eq!(facets, ints(&[&[-1, 0, 1], &[0, -1, 1], &[0, 1, 1], &[1, 0, 1]]));
    }

    #[test]
    fn rank_deficient_rows() {
        assert_eq!(extreme_rays(&ints(&[&[1, 0], &[2, 0]]), 2), Err(1));
    }

    #[test]
    fn lower_dimensional_cone() {
        // u1 >= 0, -u1 >= 0, u2 >= 0 is the ray (0, 1).
        let rays = extreme_rays(&ints(&[&[1, 0], &[-1, 0], &[0, 1]]), 2).unwrap();
        assert_eq!(rays, ints(&[&[0, 1]]));
    }
}
