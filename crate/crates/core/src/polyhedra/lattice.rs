//! Lattice points of dilated polytopes by recursive coordinate slicing.
//!
//! For a full-dimensional polytope `p` we precompute halfspace descriptions
//! of the coordinate projections `pi_k(p)` onto the first `k` coordinates.
//! For a fixed integer prefix `(x_1, ..., x_{k-1})` inside `pi_{k-1}(m p)`,
//! the admissible `x_k` form the exact interval cut out by the constraints of
//! `pi_k(m p)` that involve `x_k`. The innermost coordinate is counted, not
//! enumerated.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::polytope::Polytope;
use crate::arith::{Rational, RationalVector};

/// Integer type used while walking lattice points. `i128` is used whenever
/// all intermediate magnitudes are provably small; otherwise `BigInt`.
pub trait LatticeInt:
    Integer + Signed + Clone + Send + Sync + Hash + Ord + Debug + ToPrimitive + 'static
{
    fn from_bigint(b: &BigInt) -> Option<Self>;
    fn to_bigint(&self) -> BigInt;
}

impl LatticeInt for i128 {
    fn from_bigint(b: &BigInt) -> Option<Self> {
        b.to_i128()
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl LatticeInt for BigInt {
    fn from_bigint(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

/// Magnitudes below this many bits are handled in `i128`.
pub(crate) const SMALL_BITS: u64 = 100;

/// Constraint `a . x <= b` on the first `a.len()` coordinates.
#[derive(Clone, Debug)]
struct Row<T> {
    a: Vec<T>,
    b: T,
}

/// Slicing data for `m p`.
#[derive(Clone, Debug)]
pub struct Slicer<T> {
    rank: usize,
    /// `levels[k]` bounds coordinate `k` given coordinates `0..k`.
    levels: Vec<Vec<Row<T>>>,
}

/// Projection data independent of the dilation factor.
#[derive(Clone, Debug)]
pub struct SliceGeometry {
    rank: usize,
    levels: Vec<Vec<(Vec<BigInt>, Rational)>>,
    /// Largest absolute vertex coordinate of `p`.
    radius: Rational,
}

impl SliceGeometry {
    /// Requires `p` full-dimensional.
    pub fn new(p: &Polytope) -> SliceGeometry {
        let rank = p.rank();
        assert!(p.is_full_dimensional(), "slicing needs a full-dimensional polytope");
        let mut levels = Vec::with_capacity(rank);
        for k in 1..=rank {
            let hs = if k == rank {
                p.halfspaces().to_vec()
            } else {
                let proj: Vec<RationalVector> =
                    p.vertices().iter().map(|v| v[..k].iter().cloned().collect()).collect();
                Polytope::from_vertices(k, proj)
                    .expect("projection of a full-dimensional polytope is full-dimensional")
                    .halfspaces()
                    .to_vec()
            };
            let rows = hs
                .iter()
                .map(|h| h.integer_normal())
                .filter(|(a, _)| !a[k - 1].is_zero())
                .collect();
            levels.push(rows);
        }
        let radius = p
            .vertices()
            .iter()
            .flat_map(|v| v.iter().map(Rational::abs))
            .max()
            .unwrap_or_else(Rational::zero);
        SliceGeometry { rank, levels, radius }
    }

    /// Upper bound on `|x_i|` over `m p`.
    pub fn coordinate_bound(&self, m: u64) -> BigInt {
        (&self.radius * Rational::from(m)).ceil()
    }

    /// Bit length bound on every intermediate sum formed while slicing `m p`.
    fn magnitude_bits(&self, m: u64) -> u64 {
        let x = self.coordinate_bound(m);
        let mut worst = BigInt::zero();
        for level in &self.levels {
            for (a, b) in level {
                let s: BigInt = a.iter().map(|ai| ai.abs() * &x).sum::<BigInt>()
                    + (b * Rational::from(m)).floor().abs();
                worst = worst.max(s);
            }
        }
        worst.bits()
    }

    pub fn fits_small(&self, m: u64, extra_bits: u64) -> bool {
        self.magnitude_bits(m).max(extra_bits) < SMALL_BITS
    }

    pub fn slicer<T: LatticeInt>(&self, m: u64) -> Option<Slicer<T>> {
        let mq = Rational::from(m);
        let mut levels = Vec::with_capacity(self.rank);
        for level in &self.levels {
            let mut rows = Vec::with_capacity(level.len());
            for (a, b) in level {
                let a = a.iter().map(T::from_bigint).collect::<Option<Vec<T>>>()?;
                let b = T::from_bigint(&(b * &mq).floor())?;
                rows.push(Row { a, b });
            }
            levels.push(rows);
        }
        Some(Slicer { rank: self.rank, levels })
    }
}

fn ceil_div<T: LatticeInt>(a: &T, b: &T) -> T {
    -((-a.clone()).div_floor(b))
}

impl<T: LatticeInt> Slicer<T> {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Integer range of coordinate `prefix.len()` given the prefix, or `None`
    /// when empty.
    pub fn range(&self, prefix: &[T]) -> Option<(T, T)> {
        let k = prefix.len();
        let mut lo: Option<T> = None;
        let mut hi: Option<T> = None;
        for row in &self.levels[k] {
            let mut rhs = row.b.clone();
            for (a, x) in row.a[..k].iter().zip(prefix) {
                rhs = rhs - a.clone() * x.clone();
            }
            let c = &row.a[k];
            if c.is_positive() {
                let bound = rhs.div_floor(c);
                hi = Some(match hi {
                    Some(h) if h <= bound => h,
                    _ => bound,
                });
            } else {
                let bound = ceil_div(&rhs, c);
                lo = Some(match lo {
                    Some(l) if l >= bound => l,
                    _ => bound,
                });
            }
        }
        let (lo, hi) = (lo?, hi?);
        (lo <= hi).then_some((lo, hi))
    }

    /// Values of the outermost coordinate, in increasing order.
    pub fn outer_values(&self) -> Vec<T> {
        let mut out = Vec::new();
        if let Some((lo, hi)) = self.range(&[]) {
            let mut x = lo;
            while x <= hi {
                out.push(x.clone());
                x = x + T::one();
            }
        }
        out
    }

    /// Number of lattice points with the given prefix.
    pub fn count_from(&self, prefix: &mut Vec<T>) -> u128 {
        let Some((lo, hi)) = self.range(prefix) else {
            return 0;
        };
        if prefix.len() + 1 == self.rank {
            return (hi - lo + T::one()).to_u128().expect("slice count fits u128");
        }
        let mut total = 0u128;
        let mut x = lo;
        while x <= hi {
            prefix.push(x.clone());
            total += self.count_from(prefix);
            prefix.pop();
            x = x + T::one();
        }
        total
    }

    /// Visits every lattice point with the given prefix in lexicographic order.
    pub fn visit_from<F: FnMut(&[T])>(&self, prefix: &mut Vec<T>, f: &mut F) {
        if prefix.len() == self.rank {
            f(prefix);
            return;
        }
        let Some((lo, hi)) = self.range(prefix) else {
            return;
        };
        let mut x = lo;
        while x <= hi {
            prefix.push(x.clone());
            self.visit_from(prefix, f);
            prefix.pop();
            x = x + T::one();
        }
    }

    /// Visits every innermost line `(prefix, lo, hi)`, meaning the points
    /// `(prefix, x)` for `lo <= x <= hi`, in lexicographic order.
    pub fn visit_lines<F: FnMut(&[T], &T, &T)>(&self, prefix: &mut Vec<T>, f: &mut F) {
        let Some((lo, hi)) = self.range(prefix) else {
            return;
        };
        if prefix.len() + 1 == self.rank {
            f(prefix, &lo, &hi);
            return;
        }
        let mut x = lo;
        while x <= hi {
            prefix.push(x.clone());
            self.visit_lines(prefix, f);
            prefix.pop();
            x = x + T::one();
        }
    }

    /// Like [`Slicer::fold_slices`] but hands over whole innermost lines.
    pub fn fold_lines<A, I, F>(&self, init: I, f: F) -> Vec<A>
    where
        A: Send,
        I: Fn() -> A + Sync,
        F: Fn(&mut A, &[T], &T, &T) + Sync,
    {
        if self.rank == 1 {
            let mut acc = init();
            self.visit_lines(&mut Vec::new(), &mut |p: &[T], lo: &T, hi: &T| f(&mut acc, p, lo, hi));
            return vec![acc];
        }
        self.outer_values()
            .into_par_iter()
            .map(|x0| {
                let mut acc = init();
                let mut prefix = vec![x0];
                self.visit_lines(&mut prefix, &mut |p: &[T], lo: &T, hi: &T| {
                    f(&mut acc, p, lo, hi)
                });
                acc
            })
            .collect()
    }

    /// Folds each outermost slice independently (in parallel) and returns the
    /// per-slice accumulators in increasing order of the outer coordinate.
    pub fn fold_slices<A, I, F>(&self, init: I, f: F) -> Vec<A>
    where
        A: Send,
        I: Fn() -> A + Sync,
        F: Fn(&mut A, &[T]) + Sync,
    {
        self.outer_values()
            .into_par_iter()
            .map(|x0| {
                let mut acc = init();
                let mut prefix = vec![x0];
                self.visit_from(&mut prefix, &mut |p: &[T]| f(&mut acc, p));
                acc
            })
            .collect()
    }
}

/// `#(m p ∩ Z^n)`.
pub fn lattice_count(p: &Polytope, m: u64) -> u128 {
    if p.vertices().is_empty() {
        return 0;
    }
    if m == 0 {
        return 1;
    }
    if !p.is_full_dimensional() {
        return BoxPoints::new(p, m).count() as u128;
    }
    let geom = SliceGeometry::new(p);
    if geom.fits_small(m, 0) {
        count_with(&geom.slicer::<i128>(m).expect("small magnitudes"))
    } else {
        count_with(&geom.slicer::<BigInt>(m).expect("bigint conversion"))
    }
}

fn count_with<T: LatticeInt>(s: &Slicer<T>) -> u128 {
    if s.rank() == 1 {
        return s.count_from(&mut Vec::new());
    }
    s.outer_values()
        .into_par_iter()
        .map(|x0| s.count_from(&mut vec![x0]))
        .collect::<Vec<u128>>()
        .into_iter()
        .sum()
}

/// Stream of the lattice points of `m p` in lexicographic order.
pub fn lattice_points(p: &Polytope, m: u64) -> LatticePoints {
    let inner = if p.vertices().is_empty() {
        Inner::Done
    } else if m == 0 {
        Inner::Single(Some(RationalVector::zeros(p.rank())))
    } else if !p.is_full_dimensional() {
        Inner::Box(BoxPoints::new(p, m))
    } else {
        let slicer = SliceGeometry::new(p).slicer::<BigInt>(m).expect("bigint conversion");
        Inner::Slices(Odometer::new(slicer))
    };
    LatticePoints { inner }
}

pub struct LatticePoints {
    inner: Inner,
}

enum Inner {
    Done,
    Single(Option<RationalVector>),
    Box(BoxPoints),
    Slices(Odometer),
}

impl Iterator for LatticePoints {
    type Item = RationalVector;

    fn next(&mut self) -> Option<RationalVector> {
        match &mut self.inner {
            Inner::Done => None,
            Inner::Single(p) => p.take(),
            Inner::Box(b) => b.next(),
            Inner::Slices(o) => o.next(),
        }
    }
}

struct Odometer {
    slicer: Slicer<BigInt>,
    prefix: Vec<BigInt>,
    his: Vec<BigInt>,
    started: bool,
}

impl Odometer {
    fn new(slicer: Slicer<BigInt>) -> Self {
        Odometer { slicer, prefix: Vec::new(), his: Vec::new(), started: false }
    }

    /// Extends the prefix with the smallest admissible values; on a dead end
    /// backtracks. Returns false when exhausted.
    fn descend(&mut self) -> bool {
        loop {
            if self.prefix.len() == self.slicer.rank() {
                return true;
            }
            match self.slicer.range(&self.prefix) {
                Some((lo, hi)) => {
                    self.prefix.push(lo);
                    self.his.push(hi);
                }
                None => {
                    if !self.advance() {
                        return false;
                    }
                }
            }
        }
    }

    /// Increments the deepest coordinate that still has room.
    fn advance(&mut self) -> bool {
        while let Some(x) = self.prefix.pop() {
            let hi = self.his.pop().expect("paired stacks");
            if x < hi {
                self.prefix.push(x + 1);
                self.his.push(hi);
                return true;
            }
        }
        false
    }

    fn next(&mut self) -> Option<RationalVector> {
        let ok = if self.started {
            self.advance() && self.descend()
        } else {
            self.started = true;
            self.descend()
        };
        ok.then(|| RationalVector::from_bigints(&self.prefix))
    }
}

/// Bounding-box enumeration with halfspace filtering, for polytopes that are
/// not full-dimensional.
struct BoxPoints {
    halfspaces: Vec<(Vec<BigInt>, BigInt)>,
    lo: Vec<BigInt>,
    hi: Vec<BigInt>,
    cur: Option<Vec<BigInt>>,
}

impl BoxPoints {
    fn new(p: &Polytope, m: u64) -> Self {
        let n = p.rank();
        let mq = Rational::from(m);
        let lo: Vec<BigInt> = (0..n)
            .map(|i| (p.vertices().iter().map(|v| &v[i] * &mq).min().unwrap()).ceil())
            .collect();
        let hi: Vec<BigInt> = (0..n)
            .map(|i| (p.vertices().iter().map(|v| &v[i] * &mq).max().unwrap()).floor())
            .collect();
        let halfspaces = p
            .halfspaces()
            .iter()
            .map(|h| {
                let (a, b) = h.integer_normal();
                (a, (b * &mq).floor())
            })
            .collect();
        let empty = lo.iter().zip(&hi).any(|(l, h)| l > h);
        let cur = (!empty).then(|| lo.clone());
        BoxPoints { halfspaces, lo, hi, cur }
    }

    fn step(&mut self) {
        let Some(cur) = self.cur.as_mut() else { return };
        for i in (0..cur.len()).rev() {
            if cur[i] < self.hi[i] {
                cur[i] += BigInt::one();
                return;
            }
            cur[i] = self.lo[i].clone();
        }
        self.cur = None;
    }
}

impl Iterator for BoxPoints {
    type Item = RationalVector;

    fn next(&mut self) -> Option<RationalVector> {
        loop {
            let cur = self.cur.clone()?;
            self.step();
            let inside = self.halfspaces.iter().all(|(a, b)| {
                a.iter().zip(&cur).map(|(x, y)| x * y).sum::<BigInt>() <= *b
            });
            if inside {
                return Some(RationalVector::from_bigints(&cur));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::Halfspace;

    fn simplex_12() -> Polytope {
        // {a, b >= 0, a + 2b <= 1}
        Polytope::from_halfspaces(
            2,
            vec![
                Halfspace::new(RationalVector::from_ints(&[-1, 0]), Rational::zero()),
                Halfspace::new(RationalVector::from_ints(&[0, -1]), Rational::zero()),
                Halfspace::new(RationalVector::from_ints(&[1, 2]), Rational::one()),
            ],
        )
        .unwrap()
    }

    fn brute(p: &Polytope, m: u64, r: i64) -> u128 {
        let mq = Rational::from(m);
        let mut c = 0;
        for a in -r..=r {
            for b in -r..=r {
                let x = RationalVector::from_ints(&[a, b]);
                if p.halfspaces().iter().all(|h| h.normal.dot(&x) <= &h.offset * &mq) {
                    c += 1;
                }
            }
        }
        c
    }

    #[test]
    fn segment_count() {
        let seg = Polytope::from_vertices(1, vec![RationalVector::from_ints(&[0]), RationalVector::from_ints(&[1])])
            .unwrap();
        assert_eq!(lattice_count(&seg, 10), 11);
    }

    #[test]
    fn counts_match_enumeration() {
        let p = simplex_12();
        assert_eq!(lattice_count(&p, 10), 36);
        assert_eq!(brute(&p, 10, 12), 36);
        assert_eq!(lattice_count(&p, 200), 10201);
        for m in 0..15 {
            assert_eq!(lattice_points(&p, m).count() as u128, lattice_count(&p, m), "m = {m}");
        }
    }

    #[test]
    fn stream_order_and_origin() {
        let p = Polytope::from_vertices(
            2,
            vec![
                RationalVector::from_ints(&[0, 0]),
                RationalVector::from_ints(&[1, 0]),
                RationalVector::from_ints(&[0, 1]),
            ],
        )
        .unwrap();
        let pts: Vec<_> = lattice_points(&p, 1).collect();
        assert_eq!(
            pts,
            vec![
                RationalVector::from_ints(&[0, 0]),
                RationalVector::from_ints(&[0, 1]),
                RationalVector::from_ints(&[1, 0]),
            ]
        );
        let zero: Vec<_> = lattice_points(&p, 0).collect();
        assert_eq!(zero, vec![RationalVector::zeros(2)]);
    }

    #[test]
    fn thin_rational_triangle() {
        // vertices (0,0), (7/3, 1/2), (1/5, 3): compare with brute force
        let p = Polytope::from_vertices(
            2,
            vec![
                RationalVector::from_ints(&[0, 0]),
                RationalVector::new(vec![Rational::new(7, 3), Rational::new(1, 2)]),
                RationalVector::new(vec![Rational::new(1, 5), Rational::from(3)]),
            ],
        )
        .unwrap();
        for m in 1..12 {
            assert_eq!(lattice_count(&p, m), brute(&p, m, 40), "m = {m}");
        }
    }

    #[test]
    fn degenerate_uses_box() {
        let seg = Polytope::from_halfspaces(
            2,
            vec![
                Halfspace::new(RationalVector::from_ints(&[-1, 0]), Rational::zero()),
                Halfspace::new(RationalVector::from_ints(&[0, -1]), Rational::zero()),
                Halfspace::new(RationalVector::from_ints(&[1, 1]), Rational::one()),
                Halfspace::new(RationalVector::from_ints(&[-1, -1]), -Rational::one()),
            ],
        )
        .unwrap();
        assert_eq!(lattice_count(&seg, 4), 5);
        assert_eq!(lattice_points(&seg, 4).count(), 5);
    }
}
