use std::fmt;
use std::ops::{Deref, DerefMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::Rational;
use crate::error::{Error, Result};

/// A point of `N_R` or `M_R` with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RationalVector(Vec<Rational>);

impl RationalVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        RationalVector(entries)
    }

    pub fn zeros(rank: usize) -> Self {
        RationalVector(vec![Rational::zero(); rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = Self::zeros(rank);
        v.0[i] = Rational::one();
        v
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        RationalVector(entries.iter().map(|&x| Rational::from(x)).collect())
    }

    pub fn from_bigints(entries: &[BigInt]) -> Self {
        RationalVector(entries.iter().cloned().map(Rational::from).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }

    pub fn check_rank(&self, rank: usize) -> Result<()> {
        if self.rank() == rank {
            Ok(())
        } else {
            Err(Error::Dimension { expected: rank, found: self.rank() })
        }
    }

    /// Pairing `<self, other>`. Panics on rank mismatch; callers validate ranks
    /// at the API boundary.
    pub fn dot(&self, other: &RationalVector) -> Rational {
        assert_eq!(self.rank(), other.rank(), "rank mismatch in pairing");
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, c: &Rational) -> RationalVector {
        RationalVector(self.0.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, other: &RationalVector) -> RationalVector {
        RationalVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RationalVector) -> RationalVector {
        RationalVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> RationalVector {
        RationalVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(Rational::is_integer)
    }

    /// The primitive integer vector on the same ray (zero stays zero).
    pub fn primitive(&self) -> Vec<BigInt> {
        primitive_integer(&self.0)
    }

    pub fn primitive_vector(&self) -> RationalVector {
        RationalVector::from_bigints(&self.primitive())
    }
}

/// Scales a rational vector by a positive factor so that it becomes an integer
/// vector with coprime entries.
pub fn primitive_integer(entries: &[Rational]) -> Vec<BigInt> {
    let lcm = entries.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = entries.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Same as [`primitive_integer`] for integer input.
pub fn primitive_bigint(entries: &[BigInt]) -> Vec<BigInt> {
    let g = entries.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return entries.to_vec();
    }
    entries.iter().map(|x| x / &g).collect()
}

pub fn gcd_all(entries: &[BigInt]) -> BigInt {
    entries.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x)).abs()
}

impl Deref for RationalVector {
    type Target = [Rational];
    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl DerefMut for RationalVector {
    fn deref_mut(&mut self) -> &mut [Rational] {
        &mut self.0
    }
}

impl From<Vec<Rational>> for RationalVector {
    fn from(v: Vec<Rational>) -> Self {
        RationalVector(v)
    }
}

impl FromIterator<Rational> for RationalVector {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        RationalVector(iter.into_iter().collect())
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_scaling() {
        let v = RationalVector::new(vec![Rational::new(2, 3), Rational::new(-4, 9)]);
        assert_eq!(v.primitive(), vec![BigInt::from(3), BigInt::from(-2)]);
        assert_eq!(RationalVector::zeros(2).primitive(), vec![BigInt::zero(), BigInt::zero()]);
    }

    #[test]
    fn pairing() {
        let a = RationalVector::from_ints(&[1, 2]);
        let b = RationalVector::new(vec![Rational::new(1, 2), Rational::from(3)]);
        assert_eq!(a.dot(&b), Rational::new(13, 2));
    }
}
