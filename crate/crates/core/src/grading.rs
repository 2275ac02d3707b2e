//! Truncated weight spaces and the jumping numbers of a monomial filtration.
//!
//! The truncation `R_m` is spanned by the monomials `u` in `m Q`, and the
//! jumping numbers of the filtration on `R_m` are the values `psi(u)` over
//! those lattice points. Values are computed in integers over the common
//! denominator of the branch data.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{Rational, RationalVector};
use crate::error::{Error, Result};
use crate::pl::{max_value, PlConcave, SuperlevelProfile};
use crate::polyhedra::{reeb_slice, Cone, LatticeInt, Polytope, SliceGeometry, Slicer};

/// Weight cone, Reeb field and filtration function, with the sub-level
/// polytope and its slicing data cached.
#[derive(Clone, Debug)]
pub struct GradedSetup {
    dual: Cone,
    xi: RationalVector,
    psi: PlConcave,
    q: Polytope,
    geometry: SliceGeometry,
    ceiling: bool,
}

impl GradedSetup {
    /// Validates the Reeb condition and the nonnegativity of `psi`.
    pub fn new(dual: Cone, xi: RationalVector, psi: PlConcave) -> Result<GradedSetup> {
        let q = reeb_slice(&dual, &xi)?.q;
        if psi.rank() != dual.rank() {
            return Err(Error::Dimension { expected: dual.rank(), found: psi.rank() });
        }
        psi.validate_nonnegative(&dual, &q)?;
        let geometry = SliceGeometry::new(&q);
        Ok(GradedSetup { dual, xi, psi, q, geometry, ceiling: false })
    }

    /// Rounds every jumping number up to an integer.
    pub fn with_ceiling(mut self, ceiling: bool) -> GradedSetup {
        self.ceiling = ceiling;
        self
    }

    pub fn dual(&self) -> &Cone {
        &self.dual
    }

    pub fn xi(&self) -> &RationalVector {
        &self.xi
    }

    pub fn psi(&self) -> &PlConcave {
        &self.psi
    }

    pub fn q(&self) -> &Polytope {
        &self.q
    }

    pub fn ceiling(&self) -> bool {
        self.ceiling
    }

    pub fn rank(&self) -> usize {
        self.dual.rank()
    }

    fn int_forms(&self) -> IntForms {
        let mut den = BigInt::one();
        for b in self.psi.branches() {
            for x in b.linear.iter().chain(std::iter::once(&b.constant)) {
                den = den.lcm(x.denom());
            }
        }
        let scale = Rational::from(den.clone());
        let to_int = |x: &Rational| (x * &scale).numer().clone();
        IntForms {
            linear: self.psi.branches().iter().map(|b| b.linear.iter().map(to_int).collect()).collect(),
            constant: self.psi.branches().iter().map(|b| to_int(&b.constant)).collect(),
            den,
            clamp: self.psi.clamp(),
            ceiling: self.ceiling,
        }
    }
}

/// Branch data scaled to integers: `den * psi(u) = min_i (<linear_i, u> + constant_i)`.
#[derive(Clone, Debug)]
struct IntForms {
    linear: Vec<Vec<BigInt>>,
    constant: Vec<BigInt>,
    den: BigInt,
    clamp: bool,
    ceiling: bool,
}

impl IntForms {
    /// Bit length bound on `den * |psi|` over the box `|u_i| <= x`.
    fn value_bits(&self, x: &BigInt) -> u64 {
        self.linear
            .iter()
            .zip(&self.constant)
            .map(|(l, c)| (l.iter().map(|a| a.abs() * x).sum::<BigInt>() + c.abs()).bits())
            .max()
            .unwrap_or(0)
            + 1
    }

    fn typed<T: LatticeInt>(&self) -> Option<TypedForms<T>> {
        Some(TypedForms {
            linear: self
                .linear
                .iter()
                .map(|l| l.iter().map(T::from_bigint).collect::<Option<Vec<_>>>())
                .collect::<Option<Vec<_>>>()?,
            constant: self.constant.iter().map(T::from_bigint).collect::<Option<Vec<_>>>()?,
            den: T::from_bigint(&self.den)?,
            clamp: self.clamp,
            ceiling: self.ceiling,
        })
    }

    fn post(&self, v: BigInt) -> BigInt {
        let v = if self.clamp && v.is_negative() { BigInt::zero() } else { v };
        if self.ceiling {
            (-((-v).div_floor(&self.den))) * &self.den
        } else {
            v
        }
    }

    fn at_origin(&self) -> BigInt {
        self.post(self.constant.iter().min().cloned().expect("nonempty"))
    }
}

struct TypedForms<T> {
    linear: Vec<Vec<T>>,
    constant: Vec<T>,
    den: T,
    clamp: bool,
    ceiling: bool,
}

impl<T: LatticeInt> TypedForms<T> {
    /// Calls `f(value, degree_index)` for each point of the line; `cur`
    /// holds per-branch values at `lo`.
    fn walk_line<F: FnMut(T)>(&self, prefix: &[T], lo: &T, hi: &T, mut f: F) {
        let k = prefix.len();
        let mut cur: Vec<T> = self
            .linear
            .iter()
            .zip(&self.constant)
            .map(|(l, c)| {
                let mut v = c.clone();
                for (a, x) in l[..k].iter().zip(prefix) {
                    v = v + a.clone() * x.clone();
                }
                v + l[k].clone() * lo.clone()
            })
            .collect();
        let slopes: Vec<&T> = self.linear.iter().map(|l| &l[k]).collect();
        let mut x = lo.clone();
        loop {
            let mut v = cur.iter().min().expect("nonempty").clone();
            if self.clamp && v.is_negative() {
                v = T::zero();
            }
            if self.ceiling {
                v = -((-v).div_floor(&self.den)) * self.den.clone();
            }
            f(v);
            if &x >= hi {
                break;
            }
            x = x + T::one();
            for (c, s) in cur.iter_mut().zip(&slopes) {
                *c = c.clone() + (*s).clone();
            }
        }
    }
}

/// Jumping numbers at level `m` as a sorted multiset: `levels` holds the
/// distinct numerators over `denominator`, ascending, with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JumpingSpectrum {
    pub m: u64,
    pub rank: usize,
    pub denominator: BigInt,
    pub levels: Vec<(BigInt, u64)>,
}

impl JumpingSpectrum {
    /// `N_m`.
    pub fn count(&self) -> u128 {
        self.levels.iter().map(|(_, c)| *c as u128).sum()
    }

    pub fn values(&self) -> impl Iterator<Item = (Rational, u64)> + '_ {
        let den = &self.denominator;
        self.levels
            .iter()
            .map(move |(a, c)| (Rational::from(a.clone()) / Rational::from(den.clone()), *c))
    }

    /// Every jumping number, repeated by multiplicity.
    pub fn expanded(&self) -> Vec<Rational> {
        self.values().flat_map(|(v, c)| std::iter::repeat_n(v, c as usize)).collect()
    }

    pub fn sum(&self) -> Rational {
        let total: BigInt = self.levels.iter().map(|(a, c)| a * BigInt::from(*c)).sum();
        Rational::from(total) / Rational::from(self.denominator.clone())
    }

    pub fn max(&self) -> Rational {
        self.values().last().map(|(v, _)| v).unwrap_or_else(Rational::zero)
    }

    /// `S_m = sum / (m N_m)`; zero at level zero.
    pub fn s_m(&self) -> Rational {
        if self.m == 0 {
            return Rational::zero();
        }
        self.sum() / (Rational::from(self.m) * Rational::from(self.count()))
    }

    /// `T_m = max / m`.
    pub fn t_m(&self) -> Rational {
        if self.m == 0 {
            return Rational::zero();
        }
        self.max() / Rational::from(self.m)
    }

    /// Distribution function of `mu_m = m^-n sum_j delta(a_j / m)` as the
    /// list of atoms `(t, mu_m([0, t]))`.
    pub fn mu_cdf(&self) -> Vec<(Rational, Rational)> {
        let m = Rational::from(self.m.max(1));
        let scale = m.pow(self.rank as u32);
        let mut acc = 0u128;
        self.values()
            .map(|(v, c)| {
                acc += c as u128;
                (v / &m, Rational::from(acc) / &scale)
            })
            .collect()
    }

    /// `sup_t |F(t) - F_m(t)|` against the distribution function of the
    /// limit measure, read off a superlevel profile of the homogenization.
    pub fn cdf_distance(&self, profile: &SuperlevelProfile) -> Rational {
        let atoms = self.mu_cdf();
        let mut worst = Rational::zero();
        let mut below = Rational::zero();
        for (t, mass) in &atoms {
            // just before the atom, then at it
            let left = &profile.total - profile.value(t);
            worst = worst.max((left - &below).abs());
            worst = worst.max((profile.cdf(t) - mass).abs());
            below = mass.clone();
        }
        worst.max((&profile.total - below).abs())
    }

    /// CSV rows `value,multiplicity`, optionally with a decimal column.
    pub fn to_csv(&self, decimal: Option<usize>) -> String {
        let mut out = String::from(if decimal.is_some() {
            "value,multiplicity,decimal\n"
        } else {
            "value,multiplicity\n"
        });
        for (v, c) in self.values() {
            match decimal {
                Some(k) => {
                    let _ = writeln!(out, "{v},{c},{}", v.to_decimal(k));
                }
                None => {
                    let _ = writeln!(out, "{v},{c}");
                }
            }
        }
        out
    }

    /// CSV rows `t,mass` of the distribution function of `mu_m`.
    pub fn cdf_csv(&self, decimal: Option<usize>) -> String {
        let mut out = String::from(if decimal.is_some() { "t,mass,t_decimal,mass_decimal\n" } else { "t,mass\n" });
        for (t, mass) in self.mu_cdf() {
            match decimal {
                Some(k) => {
                    let _ = writeln!(out, "{t},{mass},{},{}", t.to_decimal(k), mass.to_decimal(k));
                }
                None => {
                    let _ = writeln!(out, "{t},{mass}");
                }
            }
        }
        out
    }
}

/// Bits reserved for sums of up to `(2x + 1)^n` values.
fn count_bits(x: &BigInt, n: usize) -> u64 {
    (x * BigInt::from(2) + BigInt::one()).bits() * n as u64
}

pub fn jumping_spectrum(g: &GradedSetup, m: u64) -> JumpingSpectrum {
    let forms = g.int_forms();
    let mut levels = if m == 0 {
        vec![(forms.at_origin(), 1)]
    } else {
        let x = g.geometry.coordinate_bound(m);
        let small = g.geometry.fits_small(m, forms.value_bits(&x));
        let small_forms = if small { forms.typed::<i128>() } else { None };
        let small_slicer = if small { g.geometry.slicer::<i128>(m) } else { None };
        match (small_forms, small_slicer) {
            (Some(f), Some(s)) => spectrum_with(&s, &f),
            _ => spectrum_with(
                &g.geometry.slicer::<BigInt>(m).expect("bigint slicer"),
                &forms.typed::<BigInt>().expect("bigint forms"),
            ),
        }
    };
    if !g.ceiling {
        // reduce the common denominator when possible
        let mut common = forms.den.clone();
        for (a, _) in &levels {
            common = common.gcd(a);
        }
        if !common.is_zero() && !common.is_one() {
            for (a, _) in levels.iter_mut() {
                *a = &*a / &common;
            }
            return JumpingSpectrum { m, rank: g.rank(), denominator: &forms.den / common, levels };
        }
    }
    JumpingSpectrum { m, rank: g.rank(), denominator: forms.den, levels }
}

fn spectrum_with<T: LatticeInt>(slicer: &Slicer<T>, forms: &TypedForms<T>) -> Vec<(BigInt, u64)> {
    let parts = slicer.fold_lines(BTreeMap::<T, u64>::new, |acc, prefix, lo, hi| {
        forms.walk_line(prefix, lo, hi, |v| *acc.entry(v).or_insert(0) += 1);
    });
    let mut merged: BTreeMap<T, u64> = BTreeMap::new();
    for part in parts {
        for (k, c) in part {
            *merged.entry(k).or_insert(0) += c;
        }
    }
    merged.into_iter().map(|(k, c)| (k.to_bigint(), c)).collect()
}

pub fn s_m(g: &GradedSetup, m: u64) -> Rational {
    jumping_spectrum(g, m).s_m()
}

pub fn t_m(g: &GradedSetup, m: u64) -> Rational {
    jumping_spectrum(g, m).t_m()
}

/// `max_{1 <= m <= m_max} T_m`.
pub fn big_t_estimate(g: &GradedSetup, m_max: u64) -> Rational {
    (1..=m_max).map(|m| t_m(g, m)).max().unwrap_or_else(Rational::zero)
}

/// The limit `T`: the maximum of the homogenization over `Q`.
pub fn exact_top(g: &GradedSetup) -> Result<Rational> {
    max_value(&g.psi.homogenize(), &g.q)
}

pub fn mu_m_cdf(g: &GradedSetup, m: u64) -> Vec<(Rational, Rational)> {
    jumping_spectrum(g, m).mu_cdf()
}

/// Count and sum of the jumping numbers of the monomials of one degree
/// `<u, xi> = t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeStat {
    pub t: u64,
    pub count: u128,
    pub sum: Rational,
}

impl DegreeStat {
    /// `sum / (t count)`, or `None` for an empty degree.
    pub fn s_tilde(&self) -> Option<Rational> {
        (self.count > 0 && self.t > 0)
            .then(|| &self.sum / (Rational::from(self.t) * Rational::from(self.count)))
    }
}

fn integral_xi(g: &GradedSetup) -> Result<Vec<BigInt>> {
    if !g.xi.is_integral() {
        return Err(Error::QuasiRegularRequired(g.xi.to_string()));
    }
    Ok(g.xi.iter().map(|x| x.numer().clone()).collect())
}

/// Per-degree statistics for every degree `1..=t_max`, empty ones included,
/// from a single enumeration of `t_max Q`.
pub fn graded_degree_stats(g: &GradedSetup, t_max: u64) -> Result<Vec<DegreeStat>> {
    let xi = integral_xi(g)?;
    let forms = g.int_forms();
    let n = g.rank();
    let x = g.geometry.coordinate_bound(t_max);
    let bits = forms.value_bits(&x) + count_bits(&x, n);
    let raw = if g.geometry.fits_small(t_max, bits) {
        let f = forms.typed::<i128>().expect("small forms");
        let s = g.geometry.slicer::<i128>(t_max).expect("small slicer");
        let xi: Vec<i128> = xi.iter().map(|v| v.to_i128().expect("small xi")).collect();
        degree_sums(&s, &f, &xi, t_max)
    } else {
        let f = forms.typed::<BigInt>().expect("bigint forms");
        let s = g.geometry.slicer::<BigInt>(t_max).expect("bigint slicer");
        degree_sums(&s, &f, &xi, t_max)
    };
    let den = Rational::from(forms.den.clone());
    Ok(raw
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(t, (count, sum))| DegreeStat { t: t as u64, count, sum: Rational::from(sum) / &den })
        .collect())
}

fn degree_sums<T: LatticeInt>(
    slicer: &Slicer<T>,
    forms: &TypedForms<T>,
    xi: &[T],
    t_max: u64,
) -> Vec<(u128, BigInt)> {
    let len = t_max as usize + 1;
    let parts = slicer.fold_lines(
        || vec![(0u128, T::zero()); len],
        |acc, prefix, lo, hi| {
            let k = prefix.len();
            let mut deg = xi[k].clone() * lo.clone();
            for (a, x) in xi[..k].iter().zip(prefix) {
                deg = deg + a.clone() * x.clone();
            }
            let step = xi[k].clone();
            forms.walk_line(prefix, lo, hi, |v| {
                let d = deg.to_usize().expect("degree within range");
                let slot = &mut acc[d];
                slot.0 += 1;
                slot.1 = slot.1.clone() + v;
                deg = deg.clone() + step.clone();
            });
        },
    );
    let mut out = vec![(0u128, BigInt::zero()); len];
    for part in parts {
        for (slot, (c, s)) in out.iter_mut().zip(part) {
            slot.0 += c;
            slot.1 += s.to_bigint();
        }
    }
    out
}

/// `S~_t`; errors for non-integral `xi` or an empty degree.
pub fn graded_s_tilde(g: &GradedSetup, t: u64) -> Result<Rational> {
    if t == 0 {
        return Err(Error::EmptyDegree(0));
    }
    let stats = graded_degree_stats(g, t)?;
    stats[t as usize - 1].s_tilde().ok_or(Error::EmptyDegree(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pl::AffineForm;
    use crate::polyhedra::Lattice;

    fn v(x: &[i64]) -> RationalVector {
        RationalVector::from_ints(x)
    }

    fn orthant(n: usize) -> Cone {
        let rays = (0..n).map(|i| RationalVector::unit(n, i)).collect();
        Cone::from_rays(Lattice::M, rays).unwrap()
    }

    fn setup(psi: PlConcave, xi: &[i64]) -> GradedSetup {
        GradedSetup::new(orthant(xi.len()), v(xi), psi).unwrap()
    }

    fn min2() -> PlConcave {
        PlConcave::new(vec![AffineForm::linear(v(&[1, 0])), AffineForm::linear(v(&[0, 1]))]).unwrap()
    }

    /// Brute-force spectrum over a box.
    fn brute(g: &GradedSetup, m: i64) -> Vec<Rational> {
        let mq = Rational::from(m);
        let mut out = Vec::new();
        for a in -2 * m..=2 * m {
            for b in -2 * m..=2 * m {
                let u = v(&[a, b]);
                if g.q().halfspaces().iter().all(|h| h.normal.dot(&u) <= &h.offset * &mq) {
                    out.push(g.psi().value(&u));
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn spectrum_level_two() {
        let g = setup(PlConcave::linear(v(&[1, 0])), &[1, 1]);
        let s = jumping_spectrum(&g, 2);
        let ints = |xs: &[i64]| xs.iter().map(|&x| Rational::from(x)).collect::<Vec<_>>();
        assert_eq!(s.expanded(), ints(&[0, 0, 0, 1, 1, 2]));
        assert_eq!(s.count(), 6);
        assert_eq!(s.s_m(), Rational::new(1, 3));
        assert_eq!(s.to_csv(None), "value,multiplicity\n0,3\n1,2\n2,1\n");
    }

    #[test]
    fn linear_average_is_constant() {
        let g = setup(PlConcave::linear(v(&[1, 0])), &[1, 1]);
        for m in 1..=20 {
            let s = jumping_spectrum(&g, m);
            assert_eq!(s.s_m(), Rational::new(1, 3), "m = {m}");
            assert_eq!(s.t_m(), Rational::one());
            assert_eq!(s.count(), crate::polyhedra::lattice_count(g.q(), m));
        }
    }

    #[test]
    fn zero_filtration_and_level_zero() {
        let g = setup(PlConcave::zero(2), &[1, 2]);
        let s = jumping_spectrum(&g, 7);
        assert_eq!(s.levels.len(), 1);
        assert_eq!(s.s_m(), Rational::zero());
        assert_eq!(exact_top(&g).unwrap(), Rational::zero());
        let shifted = PlConcave::new(vec![AffineForm::new(v(&[1, 0]), Rational::new(3, 2))]).unwrap();
        let g = setup(shifted, &[1, 1]);
        let s = jumping_spectrum(&g, 0);
        assert_eq!(s.expanded(), vec![Rational::new(3, 2)]);
    }

    #[test]
    fn matches_brute_force() {
        let psi = PlConcave::new(vec![
            AffineForm::new(v(&[1, 0]), Rational::new(1, 3)),
            AffineForm::linear(v(&[0, 2])),
        ])
        .unwrap();
        let g = setup(psi, &[1, 2]);
        for m in [1, 3, 8] {
            assert_eq!(jumping_spectrum(&g, m).expanded(), brute(&g, m as i64), "m = {m}");
        }
        let a1 = Cone::from_rays(Lattice::N, vec![v(&[1, 0]), v(&[1, 2])]).unwrap().dual();
        let psi = PlConcave::new(vec![AffineForm::linear(v(&[1, 1])), AffineForm::linear(v(&[1, 0]))])
            .unwrap();
        assert!(GradedSetup::new(a1.clone(), v(&[1, 1]), min2()).is_err());
        let g = GradedSetup::new(a1, v(&[1, 1]), psi).unwrap();
        for m in [1, 4, 9] {
            assert_eq!(jumping_spectrum(&g, m).expanded(), brute(&g, m as i64), "m = {m}");
        }
    }

    #[test]
    fn mass_and_top() {
        let g = setup(PlConcave::linear(v(&[1, 0])), &[1, 1]);
        let cdf = mu_m_cdf(&g, 100);
        assert_eq!(cdf.last().unwrap().1, Rational::new(5151, 10000));
        let g = setup(min2(), &[1, 1]);
        assert_eq!(exact_top(&g).unwrap(), Rational::new(1, 2));
        // grid search oracle for the maximum of min(u1, u2) on the simplex
        let mut best = Rational::zero();
        for a in 0..=60 {
            for b in 0..=(60 - a) {
                best = best.max(Rational::new(a.min(b), 60));
            }
        }
        assert_eq!(best, Rational::new(1, 2));
    }

    #[test]
    fn shift_by_constant() {
        let base = setup(min2(), &[1, 2]);
        let c = Rational::new(5, 2);
        let shifted = setup(min2().shift(&c), &[1, 2]);
        for m in [1, 5, 12] {
            let a = jumping_spectrum(&base, m);
            let b = jumping_spectrum(&shifted, m);
            let moved: Vec<Rational> = a.expanded().into_iter().map(|x| x + &c).collect();
            assert_eq!(b.expanded(), moved);
            assert_eq!(b.s_m() - a.s_m(), &c / Rational::from(m));
        }
    }

    #[test]
    fn superadditive_tops() {
        let g = setup(min2(), &[1, 2]);
        let tops: Vec<Rational> =
            (0..=12).map(|m| jumping_spectrum(&g, m).max()).collect();
        for m in 1..=6 {
            for k in 1..=6 {
                assert!(&tops[m] + &tops[k] <= tops[m + k], "{m} + {k}");
            }
        }
        assert!(big_t_estimate(&g, 8) <= exact_top(&g).unwrap());
    }

    #[test]
    fn per_degree_averages() {
        let g = setup(PlConcave::linear(v(&[1, 0])), &[1, 1]);
        let stats = graded_degree_stats(&g, 20).unwrap();
        for s in &stats {
            assert_eq!(s.count, s.t as u128 + 1);
            assert_eq!(s.s_tilde().unwrap(), Rational::new(1, 2));
        }
        assert_eq!(graded_s_tilde(&g, 7).unwrap(), Rational::new(1, 2));
        let g = setup(PlConcave::zero(2), &[1, 1]);
        assert_eq!(graded_s_tilde(&g, 5).unwrap(), Rational::zero());
    }

    #[test]
    fn per_degree_errors() {
        let g = GradedSetup::new(orthant(2), RationalVector::new(vec![Rational::new(1, 2), Rational::one()]), min2())
            .unwrap();
        assert!(matches!(graded_s_tilde(&g, 3), Err(Error::QuasiRegularRequired(_))));
        let g = setup(min2(), &[2, 2]);
        assert_eq!(graded_s_tilde(&g, 3), Err(Error::EmptyDegree(3)));
        assert!(graded_s_tilde(&g, 4).is_ok());
    }

    #[test]
    fn ceiling_rounds_up() {
        let psi = PlConcave::linear(RationalVector::new(vec![Rational::new(1, 2), Rational::zero()]));
        let g = setup(psi, &[1, 1]).with_ceiling(true);
        let s = jumping_spectrum(&g, 3);
        for (value, _) in s.values() {
            assert!(value.is_integer());
        }
        // ceil(a / 2) over a + b <= 3
        let expect: Rational = [0, 1, 1, 2].iter().zip([4, 3, 2, 1]).map(|(v, c)| Rational::from(v * c)).sum();
        assert_eq!(s.sum(), expect);
    }

    #[test]
    fn bigint_path_agrees() {
        let psi = PlConcave::new(vec![
            AffineForm::linear(RationalVector::new(vec![Rational::from(1i64 << 40), Rational::zero()])),
            AffineForm::linear(RationalVector::new(vec![Rational::zero(), Rational::from(3i64 << 40)])),
        ])
        .unwrap();
        let g = setup(psi, &[1, 1]);
        // values reach ~2^50 * 3, still i128; force a BigInt run through the generic path
        let forms = g.int_forms();
        let big = spectrum_with(
            &g.geometry.slicer::<BigInt>(9).unwrap(),
            &forms.typed::<BigInt>().unwrap(),
        );
        let small = spectrum_with(&g.geometry.slicer::<i128>(9).unwrap(), &forms.typed::<i128>().unwrap());
        assert_eq!(big, small);
    }
}
