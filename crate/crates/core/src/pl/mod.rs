//! Concave piecewise-linear functions written as minima of affine forms:
//! evaluation, linearity cells, exact moments, superlevel volumes and the
//! Legendre transform over a slice.

mod profile;

pub use profile::{Polynomial, SuperlevelProfile};

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{factorial, Rational, RationalVector};
use crate::error::{Error, Result};
use crate::polyhedra::{Cone, Halfspace, Polytope};

/// Largest supported moment degree.
pub const MAX_MOMENT: u32 = 4;

/// `u -> <u, linear> + constant`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AffineForm {
    pub linear: RationalVector,
    pub constant: Rational,
}

impl AffineForm {
    pub fn new(linear: RationalVector, constant: Rational) -> Self {
        AffineForm { linear, constant }
    }

    pub fn linear(linear: RationalVector) -> Self {
        AffineForm { linear, constant: Rational::zero() }
    }

    pub fn zero(rank: usize) -> Self {
        AffineForm::linear(RationalVector::zeros(rank))
    }

    pub fn rank(&self) -> usize {
        self.linear.rank()
    }

    pub fn eval(&self, u: &RationalVector) -> Rational {
        self.linear.dot(u) + &self.constant
    }

    pub fn is_zero(&self) -> bool {
        self.linear.is_zero() && self.constant.is_zero()
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<u, {}> + {}", self.linear, self.constant)
    }
}

/// `u -> min_i (<u, l_i> + c_i)`, optionally replaced by `max(., 0)` when
/// `clamp` is set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlConcave {
    branches: Vec<AffineForm>,
    #[serde(skip)]
    clamp: bool,
}

impl PlConcave {
    pub fn new(branches: Vec<AffineForm>) -> Result<PlConcave> {
        let first = branches
            .first()
            .ok_or_else(|| Error::InvalidFiltration("at least one branch is required".into()))?;
        let rank = first.rank();
        for b in &branches {
            b.linear.check_rank(rank)?;
        }
        Ok(PlConcave { branches, clamp: false })
    }

    pub fn zero(rank: usize) -> PlConcave {
        PlConcave { branches: vec![AffineForm::zero(rank)], clamp: false }
    }

    /// The single linear form `u -> <u, eta>`.
    pub fn linear(eta: RationalVector) -> PlConcave {
        PlConcave { branches: vec![AffineForm::linear(eta)], clamp: false }
    }

    pub fn with_clamp(mut self, clamp: bool) -> PlConcave {
        self.clamp = clamp;
        self
    }

    pub fn clamp(&self) -> bool {
        self.clamp
    }

    pub fn rank(&self) -> usize {
        self.branches[0].rank()
    }

    pub fn branches(&self) -> &[AffineForm] {
        &self.branches
    }

    pub fn evaluate(&self, u: &RationalVector) -> Result<Rational> {
        u.check_rank(self.rank())?;
        Ok(self.value(u))
    }

    pub(crate) fn value(&self, u: &RationalVector) -> Rational {
        let v = self.branches.iter().map(|b| b.eval(u)).min().expect("nonempty");
        if self.clamp && v.is_negative() {
            Rational::zero()
        } else {
            v
        }
    }

    /// Drops every constant. For a minimum of affine forms this is the limit
    /// of `f(m u) / m`.
    pub fn homogenize(&self) -> PlConcave {
        let mut branches: Vec<AffineForm> =
            self.branches.iter().map(|b| AffineForm::linear(b.linear.clone())).collect();
        branches.sort();
        branches.dedup();
        PlConcave { branches, clamp: self.clamp }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.branches.iter().all(|b| b.constant.is_zero())
    }

    /// The linear form `eta` when the homogenization is the single form
    /// `u -> <u, eta>` (and clamping cannot change it on `dual`).
    pub fn as_linear(&self, dual: &Cone) -> Option<RationalVector> {
        let h = self.homogenize();
        if h.branches.len() != 1 {
            return None;
        }
        let eta = h.branches[0].linear.clone();
        if self.clamp && dual.rays().iter().any(|u| eta.dot(u).is_negative()) {
            return None;
        }
        Some(eta)
    }

    pub fn scale(&self, c: &Rational) -> PlConcave {
        let branches = self
            .branches
            .iter()
            .map(|b| AffineForm::new(b.linear.scale(c), &b.constant * c))
            .collect();
        PlConcave { branches, clamp: self.clamp }
    }

    /// Adds `c` to every branch.
    pub fn shift(&self, c: &Rational) -> PlConcave {
        let branches = self
            .branches
            .iter()
            .map(|b| AffineForm::new(b.linear.clone(), &b.constant + c))
            .collect();
        PlConcave { branches, clamp: self.clamp }
    }

    /// Branch linear parts pushed through `l -> a l`.
    pub fn map_linear<F>(&self, mut f: F) -> Result<PlConcave>
    where
        F: FnMut(&RationalVector) -> Result<RationalVector>,
    {
        let branches = self
            .branches
            .iter()
            .map(|b| Ok(AffineForm::new(f(&b.linear)?, b.constant.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(PlConcave { branches, clamp: self.clamp })
    }

    /// Checks `f >= 0` on the whole weight cone: `f(0) >= 0` and the
    /// homogenization is nonnegative on every ray, which by concavity covers
    /// every point; the vertices of `q` are checked as well. Skipped in clamp
    /// mode.
    pub fn validate_nonnegative(&self, dual: &Cone, q: &Polytope) -> Result<()> {
        if self.clamp {
            return Ok(());
        }
        let rank = self.rank();
        if rank != dual.rank() {
            return Err(Error::Dimension { expected: dual.rank(), found: rank });
        }
        let origin = self.value(&RationalVector::zeros(rank));
        if origin.is_negative() {
            return Err(Error::InvalidFiltration(format!("value {origin} at the origin")));
        }
        let h = self.homogenize();
        for u in dual.rays() {
            let v = h.value(u);
            if v.is_negative() {
                return Err(Error::InvalidFiltration(format!(
                    "homogenization takes value {v} on the ray {u}"
                )));
            }
        }
        for u in q.vertices() {
            let v = self.value(u);
            if v.is_negative() {
                return Err(Error::InvalidFiltration(format!("value {v} at the vertex {u}")));
            }
        }
        Ok(())
    }

    /// [`PlConcave::homogenize`] after [`PlConcave::validate_nonnegative`].
    pub fn homogenize_checked(&self, dual: &Cone, q: &Polytope) -> Result<PlConcave> {
        self.validate_nonnegative(dual, q)?;
        Ok(self.homogenize())
    }

    fn distinct_branches(&self) -> Vec<AffineForm> {
        let mut b = self.branches.clone();
        b.sort();
        b.dedup();
        b
    }
}

/// Cells of `p` on which a single branch attains the minimum, each paired
/// with that branch. Cells have the dimension of `p`, cover it and meet only
/// along their boundaries. In clamp mode each cell is further split by the
/// sign of its branch, the negative side carrying the zero form.
pub fn linearity_subdivision(f: &PlConcave, p: &Polytope) -> Result<Vec<(Polytope, AffineForm)>> {
    if f.rank() != p.rank() {
        return Err(Error::Dimension { expected: p.rank(), found: f.rank() });
    }
    let dim = p.dimension();
    let branches = f.distinct_branches();
    let mut cells = Vec::new();
    for (i, bi) in branches.iter().enumerate() {
        let mut extra = Vec::new();
        let mut dominated = false;
        for (j, bj) in branches.iter().enumerate() {
            if i == j {
                continue;
            }
            let normal = bi.linear.sub(&bj.linear);
            let offset = &bj.constant - &bi.constant;
            if normal.is_zero() {
                // parallel branches: only the lower one is ever active
                if offset.is_negative() {
                    dominated = true;
                    break;
                }
                continue;
            }
            extra.push(Halfspace::new(normal, offset));
        }
        if dominated {
            continue;
        }
        let Some(cell) = full_piece(p, &extra, dim)? else {
            continue;
        };
        if !f.clamp {
            cells.push((cell, bi.clone()));
            continue;
        }
        let pos = Halfspace::at_least(&bi.linear, &-bi.constant.clone());
        let neg = Halfspace::new(bi.linear.clone(), -bi.constant.clone());
        if let Some(c) = full_piece(&cell, &[pos], dim)? {
            cells.push((c, bi.clone()));
        }
        if let Some(c) = full_piece(&cell, &[neg], dim)? {
            cells.push((c, AffineForm::zero(f.rank())));
        }
    }
    Ok(cells)
}

/// `p` cut by `extra`, kept only when it still has dimension `dim`.
fn full_piece(p: &Polytope, extra: &[Halfspace], dim: usize) -> Result<Option<Polytope>> {
    if extra.iter().all(|h| p.vertices().iter().all(|v| h.contains(v))) {
        return Ok(Some(p.clone()));
    }
    match p.intersect(extra) {
        Ok(c) if c.dimension() == dim => Ok(Some(c)),
        Ok(_) | Err(Error::Empty) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Complete homogeneous symmetric polynomial `h_k` of `xs`.
pub fn complete_homogeneous(xs: &[Rational], k: u32) -> Rational {
    let k = k as usize;
    let mut h = vec![Rational::zero(); k + 1];
    h[0] = Rational::one();
    for x in xs {
        for j in 1..=k {
            let add = x * &h[j - 1];
            h[j] += add;
        }
    }
    h.swap_remove(k)
}

/// `int_S l^k` over a `dim`-simplex `S` of measure `volume` on which `l`
/// takes the vertex values `values`.
pub fn simplex_moment(volume: &Rational, values: &[Rational], k: u32) -> Rational {
    let dim = values.len() - 1;
    let coeff = factorial(k as usize) * factorial(dim) / factorial(dim + k as usize);
    volume * coeff * complete_homogeneous(values, k)
}

/// `int_p f^k du` for `k <= 4`; zero when `p` is lower-dimensional.
pub fn integrate_moment(f: &PlConcave, p: &Polytope, k: u32) -> Result<Rational> {
    if k > MAX_MOMENT {
        return Err(Error::UnsupportedDegree(k));
    }
    if !p.is_full_dimensional() {
        return Ok(Rational::zero());
    }
    let cells = linearity_subdivision(f, p)?;
    let parts: Vec<Rational> = cells
        .par_iter()
        .map(|(cell, form)| {
            let t = cell.triangulate().expect("cells are full-dimensional");
            t.simplices
                .iter()
                .map(|s| {
                    let values: Vec<Rational> =
                        s.iter().map(|&i| form.eval(&cell.vertices()[i])).collect();
                    simplex_moment(&cell.simplex_volume(s), &values, k)
                })
                .sum::<Rational>()
        })
        .collect();
    Ok(parts.into_iter().sum())
}

/// Every vertex of every linearity cell of `p`, sorted and deduplicated.
pub fn cell_vertices(f: &PlConcave, p: &Polytope) -> Result<Vec<RationalVector>> {
    let mut out: Vec<RationalVector> = linearity_subdivision(f, p)?
        .into_iter()
        .flat_map(|(c, _)| c.vertices().to_vec())
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// `max_p f`, attained at a vertex of some linearity cell.
pub fn max_value(f: &PlConcave, p: &Polytope) -> Result<Rational> {
    Ok(cell_vertices(f, p)?
        .iter()
        .map(|u| f.value(u))
        .max()
        .expect("a polytope has vertices"))
}

/// `max_{u in p} (f(u) - <u, v>)`.
pub fn legendre(f: &PlConcave, p: &Polytope, v: &RationalVector) -> Result<Rational> {
    v.check_rank(p.rank())?;
    Ok(cell_vertices(f, p)?
        .iter()
        .map(|u| f.value(u) - u.dot(v))
        .max()
        .expect("a polytope has vertices"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> RationalVector {
        RationalVector::from_ints(x)
    }

    fn form(l: &[i64], c: i64) -> AffineForm {
        AffineForm::new(v(l), Rational::from(c))
    }

    fn pl(forms: Vec<AffineForm>) -> PlConcave {
        PlConcave::new(forms).unwrap()
    }

    fn poly(list: &[&[i64]]) -> Polytope {
        Polytope::from_vertices(list[0].len(), list.iter().map(|p| v(p)).collect()).unwrap()
    }

    fn simplex2() -> Polytope {
        poly(&[&[0, 0], &[1, 0], &[0, 1]])
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(pl(vec![form(&[1, 0], 0)]).evaluate(&v(&[3, 5])).unwrap(), Rational::from(3));
        let m = pl(vec![form(&[1, 0], 0), form(&[0, 1], 0)]);
        assert_eq!(m.evaluate(&v(&[2, 1])).unwrap(), Rational::one());
        let m = pl(vec![form(&[1, 0], 3), form(&[0, 1], 0)]);
        assert_eq!(m.evaluate(&v(&[0, 1])).unwrap(), Rational::one());
        assert!(matches!(m.evaluate(&v(&[0, 1, 2])), Err(Error::Dimension { .. })));
    }

    #[test]
    fn homogenize_drops_constants() {
        let f = pl(vec![form(&[1, 0], 3), form(&[0, 1], 0)]);
        let h = f.homogenize();
        assert_eq!(h, pl(vec![form(&[0, 1], 0), form(&[1, 0], 0)]));
        assert_eq!(h.homogenize(), h);
        let m = Rational::from(1_000_000);
        let u = v(&[1, 1]);
        let scaled = f.evaluate(&u.scale(&m)).unwrap() / &m;
        assert!((scaled - h.evaluate(&u).unwrap()).abs() <= Rational::from(3) / m);
    }

    #[test]
    fn json_form() {
        let f: PlConcave =
            serde_json::from_str(r#"{"branches":[{"linear":["1","0"],"constant":"0"}]}"#).unwrap();
        assert_eq!(f, PlConcave::linear(v(&[1, 0])));
        assert_eq!(
            serde_json::to_string(&f).unwrap(),
            r#"{"branches":[{"linear":["1","0"],"constant":"0"}]}"#
        );
    }

    #[test]
    fn subdivision_examples() {
        let sq = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let single = linearity_subdivision(&PlConcave::linear(v(&[1, 0])), &sq).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].0, sq);

        let m = pl(vec![form(&[1, 0], 0), form(&[0, 1], 0)]);
        let cells = linearity_subdivision(&m, &sq).unwrap();
        assert_eq!(cells.len(), 2);
        for (c, _) in &cells {
            assert_eq!(c.volume(), Rational::new(1, 2));
            assert_eq!(c.vertices().len(), 3);
        }
    }

    #[test]
    fn zero_branch_on_simplex() {
        // min(u1, u2, 0) vanishes on the simplex, so the zero branch is the
        // only full-dimensional cell.
        let f = pl(vec![form(&[1, 0], 0), form(&[0, 1], 0), form(&[0, 0], 0)]);
        let p = simplex2();
        let cells = linearity_subdivision(&f, &p).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].1, form(&[0, 0], 0));
        // sampled points agree with the cell's active branch
        for a in 0..=10 {
            for b in 0..=(10 - a) {
                let u = RationalVector::new(vec![Rational::new(a, 10), Rational::new(b, 10)]);
                assert_eq!(f.value(&u), cells[0].1.eval(&u));
            }
        }
    }

    #[test]
    fn moments() {
        let p = simplex2();
        assert_eq!(integrate_moment(&PlConcave::linear(v(&[1, 0])), &p, 1).unwrap(), Rational::new(1, 6));
        let m = pl(vec![form(&[1, 0], 0), form(&[0, 1], 0)]);
        assert_eq!(integrate_moment(&m, &p, 1).unwrap(), Rational::new(1, 12));
        assert_eq!(integrate_moment(&m, &p, 0).unwrap(), p.volume());
        // int u1^2 over the simplex = 1/12
        assert_eq!(integrate_moment(&PlConcave::linear(v(&[1, 0])), &p, 2).unwrap(), Rational::new(1, 12));
        assert_eq!(integrate_moment(&m, &p, 5), Err(Error::UnsupportedDegree(5)));
    }

    #[test]
    fn clamp_splits_cells() {
        // max(u1 - 1/2, 0) on the unit simplex: int = int_{u1 >= 1/2} (u1 - 1/2) = 1/48
        let f = PlConcave::new(vec![AffineForm::new(v(&[1, 0]), Rational::new(-1, 2))])
            .unwrap()
            .with_clamp(true);
        let p = simplex2();
        assert_eq!(linearity_subdivision(&f, &p).unwrap().len(), 2);
        assert_eq!(integrate_moment(&f, &p, 1).unwrap(), Rational::new(1, 48));
        assert_eq!(f.value(&v(&[0, 0])), Rational::zero());
    }

    #[test]
    fn validation() {
        let dual = Cone::from_rays(crate::polyhedra::Lattice::M, vec![v(&[1, 0]), v(&[0, 1])]).unwrap();
        let q = simplex2();
        assert!(pl(vec![form(&[1, 0], 0)]).validate_nonnegative(&dual, &q).is_ok());
        assert!(matches!(
            pl(vec![form(&[1, -1], 0)]).validate_nonnegative(&dual, &q),
            Err(Error::InvalidFiltration(_))
        ));
        assert!(matches!(
            pl(vec![form(&[1, 0], -1)]).validate_nonnegative(&dual, &q),
            Err(Error::InvalidFiltration(_))
        ));
        assert!(pl(vec![form(&[1, 0], -1)]).with_clamp(true).validate_nonnegative(&dual, &q).is_ok());
    }

    #[test]
    fn legendre_examples() {
        let seg = Polytope::from_halfspaces(
            2,
            vec![
                Halfspace::new(v(&[-1, 0]), Rational::zero()),
                Halfspace::new(v(&[0, -1]), Rational::zero()),
                Halfspace::new(v(&[1, 1]), Rational::one()),
                Halfspace::new(v(&[-1, -1]), -Rational::one()),
            ],
        )
        .unwrap();
        let f = PlConcave::linear(v(&[1, 0]));
        assert_eq!(legendre(&f, &seg, &v(&[0, 0])).unwrap(), Rational::one());
        let z = PlConcave::zero(2);
        assert_eq!(legendre(&z, &seg, &v(&[2, 3])).unwrap(), Rational::from(-2));
        let m = pl(vec![form(&[1, 0], 0), form(&[0, 1], 0)]);
        assert_eq!(legendre(&m, &seg, &v(&[0, 0])).unwrap(), Rational::new(1, 2));
    }

    #[test]
    fn legendre_is_convex_in_v() {
        let seg = simplex2();
        let m = pl(vec![form(&[1, 0], 0), form(&[0, 1], 0), form(&[2, 1], -1)]);
        let pts = [v(&[0, 0]), v(&[3, -1]), v(&[-2, 5]), v(&[1, 1]), v(&[-4, -3])];
        for a in &pts {
            for b in &pts {
                let mid = a.add(b).scale(&Rational::new(1, 2));
                let lhs = legendre(&m, &seg, &mid).unwrap() * Rational::from(2);
                let rhs = legendre(&m, &seg, a).unwrap() + legendre(&m, &seg, b).unwrap();
                assert!(lhs <= rhs);
            }
        }
    }

    #[test]
    fn max_on_simplex() {
        let m = pl(vec![form(&[1, 0], 0), form(&[0, 1], 0)]);
        assert_eq!(max_value(&m, &simplex2()).unwrap(), Rational::new(1, 2));
    }
}
