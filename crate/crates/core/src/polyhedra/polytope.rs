use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::dd;
use super::triangulate::{pulling_triangulation, Triangulation};
use crate::arith::{factorial, primitive_integer, rank_of, Rational, RationalMatrix, RationalVector};
use crate::error::{Error, Result};

/// The closed halfspace `<normal, x> <= offset`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: RationalVector,
    pub offset: Rational,
}

impl Halfspace {
    pub fn new(normal: RationalVector, offset: Rational) -> Self {
        Halfspace { normal, offset }
    }

    /// `<normal, x> >= offset`, stored as `<-normal, x> <= -offset`.
    pub fn at_least(normal: &RationalVector, offset: &Rational) -> Self {
        Halfspace { normal: normal.neg(), offset: -offset }
    }

    pub fn slack(&self, x: &RationalVector) -> Rational {
        &self.offset - self.normal.dot(x)
    }

    pub fn contains(&self, x: &RationalVector) -> bool {
        !self.slack(x).is_negative()
    }

    pub fn is_tight(&self, x: &RationalVector) -> bool {
        self.slack(x).is_zero()
    }

    /// Positive rescaling to a primitive integer normal.
    pub(crate) fn canonical(&self) -> Halfspace {
        let mut entries: Vec<Rational> = self.normal.to_vec();
        entries.push(self.offset.clone());
        let ints = primitive_integer(&entries);
        let n = ints.len() - 1;
        if ints[..n].iter().all(Zero::is_zero) {
            // 0 <= offset: keep only its sign
            return Halfspace {
                normal: self.normal.clone(),
                offset: Rational::from(ints[n].signum()),
            };
        }
        Halfspace {
            normal: RationalVector::from_bigints(&ints[..n]),
            offset: Rational::from(ints[n].clone()),
        }
    }

    /// Integer form `(a, b)` of `a.x <= b` with `a` primitive.
    pub(crate) fn integer_normal(&self) -> (Vec<BigInt>, Rational) {
        let a = self.normal.primitive();
        let lead = self
            .normal
            .iter()
            .zip(&a)
            .find(|(_, ai)| !ai.is_zero())
            .map(|(x, ai)| x / Rational::from(ai.clone()));
        match lead {
            Some(scale) => (a, &self.offset / scale),
            None => (a, self.offset.clone()),
        }
    }
}

/// A bounded convex polytope held in both vertex and halfspace form.
///
/// Vertices are kept sorted lexicographically; triangulations index into
/// that order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polytope {
    rank: usize,
    vertices: Vec<RationalVector>,
    halfspaces: Vec<Halfspace>,
}

impl Polytope {
    /// Convex hull of a full-dimensional point set.
    pub fn from_vertices(rank: usize, points: Vec<RationalVector>) -> Result<Polytope> {
        for p in &points {
            p.check_rank(rank)?;
        }
        if points.is_empty() {
            return Err(Error::Empty);
        }
        let dim = affine_dimension(&points);
        if dim < rank {
            return Err(Error::DegeneratePolytope { dim, rank });
        }
        // Facets of conv(points) are the extreme rays of
        // {(a, b) : <a, v> + b >= 0 for every point v}.
        let rows: Vec<Vec<BigInt>> = points
            .iter()
            .map(|p| {
                let mut e = p.to_vec();
                e.push(Rational::one());
                primitive_integer(&e)
            })
            .collect();
        let facets = dd::extreme_rays(&rows, rank + 1)
            .map_err(|r| Error::Internal(format!("facet enumeration lost rank ({r})")))?;
        let halfspaces: Vec<Halfspace> = facets
            .into_iter()
            .map(|f| {
                let a = RationalVector::from_bigints(&f[..rank]);
                Halfspace::at_least(&a, &-Rational::from(f[rank].clone()))
            })
            .collect();
        let vertices = points
            .into_iter()
            .filter(|p| {
                let tight: Vec<RationalVector> = halfspaces
                    .iter()
                    .filter(|h| h.is_tight(p))
                    .map(|h| h.normal.clone())
                    .collect();
                rank_of(&tight) == rank
            })
            .collect();
        Ok(Polytope::from_parts(rank, vertices, halfspaces))
    }

    /// Intersection of halfspaces; errors when empty or unbounded.
    pub fn from_halfspaces(rank: usize, halfspaces: Vec<Halfspace>) -> Result<Polytope> {
        for h in &halfspaces {
            h.normal.check_rank(rank)?;
        }
        // Homogenize: t >= 0 and offset*t - <normal, x> >= 0.
        let mut rows: Vec<Vec<BigInt>> = halfspaces
            .iter()
            .map(|h| {
                let mut e: Vec<Rational> = h.normal.iter().map(|x| -x).collect();
                e.push(h.offset.clone());
                primitive_integer(&e)
            })
            .collect();
        let mut t_row = vec![BigInt::zero(); rank + 1];
        t_row[rank] = BigInt::from(1);
        rows.push(t_row);
        let rays = dd::extreme_rays(&rows, rank + 1).map_err(|_| Error::Unbounded)?;
        let mut vertices = Vec::with_capacity(rays.len());
        for r in rays {
            if r[rank].is_zero() {
                return Err(Error::Unbounded);
            }
            let t = Rational::from(r[rank].clone());
            vertices.push(r[..rank].iter().map(|x| Rational::from(x.clone()) / &t).collect());
        }
        if vertices.is_empty() {
            return Err(Error::Empty);
        }
        Ok(Polytope::from_parts(rank, vertices, halfspaces))
    }

    /// Assembles a polytope from matching descriptions: sorts and dedups
    /// vertices, canonicalizes halfspaces and drops the redundant ones.
    pub(crate) fn from_parts(
        rank: usize,
        mut vertices: Vec<RationalVector>,
        halfspaces: Vec<Halfspace>,
    ) -> Polytope {
        vertices.sort();
        vertices.dedup();
        let dim = affine_dimension(&vertices);
        let mut canon: Vec<Halfspace> = halfspaces.iter().map(Halfspace::canonical).collect();
        canon.sort();
        canon.dedup();
        let mut kept: Vec<Halfspace> = Vec::new();
        let mut seen_tight: Vec<Vec<bool>> = Vec::new();
        for h in canon {
            if h.normal.is_zero() {
                continue;
            }
            let tight: Vec<bool> = vertices.iter().map(|v| h.is_tight(v)).collect();
            if tight.iter().all(|&t| t) {
                kept.push(h);
                continue;
            }
            let face: Vec<RationalVector> = vertices
                .iter()
                .zip(&tight)
                .filter(|(_, &t)| t)
                .map(|(v, _)| v.clone())
                .collect();
            if face.is_empty() || affine_dimension(&face) + 1 != dim {
                continue;
            }
            if seen_tight.contains(&tight) {
                continue;
            }
            seen_tight.push(tight);
            kept.push(h);
        }
        Polytope { rank, vertices, halfspaces: kept }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertices(&self) -> &[RationalVector] {
        &self.vertices
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn dimension(&self) -> usize {
        affine_dimension(&self.vertices)
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dimension() == self.rank
    }

    pub fn contains(&self, x: &RationalVector) -> bool {
        self.halfspaces.iter().all(|h| h.contains(x))
    }

    /// Checks that the two descriptions agree: every vertex satisfies every
    /// inequality and is cut out by tight constraints of full rank, and every
    /// non-equation halfspace supports a face of codimension one.
    pub fn verify(&self) -> Result<()> {
        let dim = self.dimension();
        for v in &self.vertices {
            if !self.contains(v) {
                return Err(Error::Internal(format!("vertex {v} violates a halfspace")));
            }
            let tight: Vec<RationalVector> = self
                .halfspaces
                .iter()
                .filter(|h| h.is_tight(v))
                .map(|h| h.normal.clone())
                .collect();
            if rank_of(&tight) != self.rank {
                return Err(Error::Internal(format!("point {v} is not a vertex")));
            }
        }
        for h in &self.halfspaces {
            let face: Vec<RationalVector> =
                self.vertices.iter().filter(|v| h.is_tight(v)).cloned().collect();
            if face.len() == self.vertices.len() {
                continue;
            }
            if face.len() < dim || affine_dimension(&face) + 1 != dim {
                return Err(Error::Internal(format!(
                    "halfspace {:?} <= {} supports only {} vertices",
                    h.normal,
                    h.offset,
                    face.len()
                )));
            }
        }
        Ok(())
    }

    /// Image under the invertible linear map `x -> a x`.
    pub fn transform(&self, a: &RationalMatrix) -> Result<Polytope> {
        let inv_t = a.inverse()?.transpose();
        let vertices =
            self.vertices.iter().map(|v| a.mul_vec(v)).collect::<Result<Vec<_>>>()?;
        let halfspaces = self
            .halfspaces
            .iter()
            .map(|h| Ok(Halfspace::new(inv_t.mul_vec(&h.normal)?, h.offset.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Polytope::from_parts(self.rank, vertices, halfspaces))
    }

    pub fn scale(&self, c: &Rational) -> Polytope {
        assert!(c.is_positive(), "scale factor must be positive");
        let vertices = self.vertices.iter().map(|v| v.scale(c)).collect();
        let halfspaces = self
            .halfspaces
            .iter()
            .map(|h| Halfspace::new(h.normal.clone(), &h.offset * c))
            .collect();
        Polytope::from_parts(self.rank, vertices, halfspaces)
    }

    /// Intersection with extra halfspaces (may be empty or lower-dimensional).
    pub fn intersect(&self, extra: &[Halfspace]) -> Result<Polytope> {
        let mut hs = self.halfspaces.clone();
        hs.extend_from_slice(extra);
        Polytope::from_halfspaces(self.rank, hs)
    }

    /// Deterministic triangulation of a full-dimensional polytope.
    pub fn triangulate(&self) -> Result<Triangulation> {
        let dim = self.dimension();
        if dim < self.rank {
            return Err(Error::DegeneratePolytope { dim, rank: self.rank });
        }
        Ok(self.triangulate_hull())
    }

    /// Triangulation of the polytope inside its own affine hull.
    pub fn triangulate_hull(&self) -> Triangulation {
        pulling_triangulation(self)
    }

    /// Exact Lebesgue volume; zero for lower-dimensional polytopes.
    pub fn volume(&self) -> Rational {
        match self.triangulate() {
            Ok(t) => t.simplices.iter().map(|s| self.simplex_volume(s)).sum(),
            Err(_) => Rational::zero(),
        }
    }

    /// `|det(v_1 - v_0, ..., v_n - v_0)| / n!` for a full-dimensional simplex.
    pub fn simplex_volume(&self, simplex: &[usize]) -> Rational {
        simplex_volume(&simplex.iter().map(|&i| self.vertices[i].clone()).collect::<Vec<_>>())
    }
}

pub fn simplex_volume(points: &[RationalVector]) -> Rational {
    let n = points.len() - 1;
    let v0 = &points[0];
    let rows: Vec<RationalVector> = points[1..].iter().map(|v| v.sub(v0)).collect();
    let det = RationalMatrix::new(rows).and_then(|m| m.det()).expect("square edge matrix");
    det.abs() / factorial(n)
}

/// Dimension of the affine hull of `points` (0 for one point; empty counts as 0).
pub fn affine_dimension(points: &[RationalVector]) -> usize {
    match points.split_first() {
        None => 0,
        Some((v0, rest)) => rank_of(&rest.iter().map(|v| v.sub(v0)).collect::<Vec<_>>()),
    }
}
