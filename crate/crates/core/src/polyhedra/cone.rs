use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::dd;
use super::polytope::{Halfspace, Polytope};
use crate::arith::{primitive_bigint, rank_of, Rational, RationalMatrix, RationalVector};
use crate::error::{Error, Result};

/// Which of the two dual lattices a cone lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Lattice {
    N,
    M,
}

impl Lattice {
    pub fn dual(self) -> Lattice {
        match self {
            Lattice::N => Lattice::M,
            Lattice::M => Lattice::N,
        }
    }
}

/// A full-dimensional pointed rational polyhedral cone.
///
/// `rays` are the primitive extreme generators; `halfspaces` are the
/// primitive inward facet normals `h`, so that the cone is `{x : <h, x> >= 0}`.
/// Both lists are sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    rank: usize,
    rays: Vec<RationalVector>,
    halfspaces: Vec<RationalVector>,
    lattice: Lattice,
}

impl Cone {
    /// Cone generated by `generators`; redundant and repeated generators are
    /// removed.
    pub fn from_rays(lattice: Lattice, generators: Vec<RationalVector>) -> Result<Cone> {
        let rank = generators
            .first()
            .map(|g| g.rank())
            .ok_or_else(|| Error::UnsupportedGeometry("cone needs at least one generator".into()))?;
        for g in &generators {
            g.check_rank(rank)?;
        }
        let mut rows: Vec<Vec<BigInt>> = generators
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| g.primitive())
            .collect();
        rows.sort();
        rows.dedup();
        let facets = dd::extreme_rays(&rows, rank).map_err(|r| {
            Error::UnsupportedGeometry(format!(
                "generators span only a rank-{r} subspace; the cone is not full-dimensional"
            ))
        })?;
        Self::assemble(lattice, rank, rows, facets)
    }

    /// Cone `{x : <h, x> >= 0}` for the given inward normals.
    pub fn from_halfspaces(lattice: Lattice, normals: Vec<RationalVector>) -> Result<Cone> {
        let dual = Cone::from_rays(lattice.dual(), normals).map_err(|e| match e {
            Error::UnsupportedGeometry(_) => {
                Error::UnsupportedGeometry("halfspaces do not cut out a pointed cone".into())
            }
            other => other,
        })?;
        Ok(dual.dual())
    }

    fn assemble(
        lattice: Lattice,
        rank: usize,
        generators: Vec<Vec<BigInt>>,
        facets: Vec<Vec<BigInt>>,
    ) -> Result<Cone> {
        let facet_vecs: Vec<RationalVector> =
            facets.iter().map(|f| RationalVector::from_bigints(f)).collect();
        if rank_of(&facet_vecs) < rank {
            return Err(Error::UnsupportedGeometry(
                "the cone contains a line (not pointed)".into(),
            ));
        }
        let mut rays: Vec<RationalVector> = generators
            .iter()
            .filter(|g| {
                let tight: Vec<RationalVector> = facets
                    .iter()
                    .filter(|f| f.iter().zip(g.iter()).map(|(a, b)| a * b).sum::<BigInt>().is_zero())
                    .map(|f| RationalVector::from_bigints(f))
                    .collect();
                rank_of(&tight) + 1 == rank
            })
            .map(|g| RationalVector::from_bigints(&primitive_bigint(g)))
            .collect();
        rays.sort();
        rays.dedup();
        Ok(Cone { rank, rays, halfspaces: facet_vecs, lattice })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[RationalVector] {
        &self.rays
    }

    pub fn halfspaces(&self) -> &[RationalVector] {
        &self.halfspaces
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn is_simplicial(&self) -> bool {
        self.rays.len() == self.rank
    }

    /// The dual cone: its rays are this cone's facet normals and its facet
    /// normals are this cone's rays.
    pub fn dual(&self) -> Cone {
        Cone {
            rank: self.rank,
            rays: self.halfspaces.clone(),
            halfspaces: self.rays.clone(),
            lattice: self.lattice.dual(),
        }
    }

    pub fn contains(&self, x: &RationalVector) -> bool {
        self.halfspaces.iter().all(|h| !h.dot(x).is_negative())
    }

    pub fn contains_in_interior(&self, x: &RationalVector) -> bool {
        self.halfspaces.iter().all(|h| h.dot(x).is_positive())
    }

    /// Sum of the rays: a canonical interior point.
    pub fn interior_point(&self) -> RationalVector {
        self.rays.iter().fold(RationalVector::zeros(self.rank), |acc, r| acc.add(r))
    }

    /// Image of the cone under an invertible integer matrix acting on its
    /// lattice.
    pub fn transform(&self, a: &RationalMatrix) -> Result<Cone> {
        let rays = self.rays.iter().map(|r| a.mul_vec(r)).collect::<Result<Vec<_>>>()?;
        Cone::from_rays(self.lattice, rays)
    }

    /// Subdivision into simplicial subcones, each given by `rank` indices into
    /// [`Cone::rays`]. The subdivision is the pulling triangulation of the
    /// section by the canonical interior point of the dual cone, so it does not
    /// depend on any Reeb field.
    pub fn simplicial_subcones(&self) -> Vec<Vec<usize>> {
        let w = self.dual().interior_point();
        let section: Vec<RationalVector> =
            self.rays.iter().map(|r| r.scale(&r.dot(&w).recip())).collect();
        let mut halfspaces: Vec<Halfspace> = self
            .halfspaces
            .iter()
            .map(|h| Halfspace::at_least(h, &Rational::zero()))
            .collect();
        halfspaces.push(Halfspace::new(w.clone(), Rational::one()));
        halfspaces.push(Halfspace::at_least(&w, &Rational::one()));
        let slice = Polytope::from_parts(self.rank, section.clone(), halfspaces);
        let index_of = |v: &RationalVector| section.iter().position(|s| s == v).expect("section vertex");
        let mut cells: Vec<Vec<usize>> = slice
            .triangulate_hull()
            .simplices
            .iter()
            .map(|s| {
                let mut idx: Vec<usize> = s.iter().map(|&i| index_of(&slice.vertices()[i])).collect();
                idx.sort_unstable();
                idx
            })
            .collect();
        cells.sort();
        cells
    }
}

/// Wire form shared by cones and polytopes. Every halfspace reads
/// `<normal, x> <= offset`; cone facets therefore appear with outward
/// normals and offset 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyhedronJson {
    pub rank: usize,
    #[serde(default)]
    pub rays: Vec<RationalVector>,
    #[serde(default)]
    pub halfspaces: Vec<Halfspace>,
    #[serde(default)]
    pub vertices: Vec<RationalVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<Lattice>,
}

impl From<&Cone> for PolyhedronJson {
    fn from(c: &Cone) -> Self {
        PolyhedronJson {
            rank: c.rank,
            rays: c.rays.clone(),
            halfspaces: c
                .halfspaces
                .iter()
                .map(|h| Halfspace::at_least(h, &Rational::zero()))
                .collect(),
            vertices: vec![RationalVector::zeros(c.rank)],
            lattice: Some(c.lattice),
        }
    }
}

impl From<&Polytope> for PolyhedronJson {
    fn from(p: &Polytope) -> Self {
        PolyhedronJson {
            rank: p.rank(),
            rays: Vec::new(),
            halfspaces: p.halfspaces().to_vec(),
            vertices: p.vertices().to_vec(),
            lattice: None,
        }
    }
}

impl PolyhedronJson {
    /// Rebuilds a cone from its rays (halfspaces are recomputed).
    pub fn to_cone(&self) -> Result<Cone> {
        Cone::from_rays(self.lattice.unwrap_or(Lattice::N), self.rays.clone())
    }

    /// Rebuilds a polytope from its halfspaces, or from its vertices when no
    /// halfspaces are given.
    pub fn to_polytope(&self) -> Result<Polytope> {
        if self.halfspaces.is_empty() {
            Polytope::from_vertices(self.rank, self.vertices.clone())
        } else {
            Polytope::from_halfspaces(self.rank, self.halfspaces.clone())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> RationalVector {
        RationalVector::from_ints(x)
    }

    fn cone(gens: &[&[i64]]) -> Result<Cone> {
        Cone::from_rays(Lattice::N, gens.iter().map(|g| v(g)).collect())
    }

    #[test]
    fn orthant_self_dual() {
        let c = cone(&[&[1, 0], &[0, 1]]).unwrap();
        let d = c.dual();
        assert_eq!(d.rays(), &[v(&[0, 1]), v(&[1, 0])]);
        assert_eq!(d.lattice(), Lattice::M);
    }

    #[test]
    fn a1_dual() {
        let d = cone(&[&[1, 0], &[1, 2]]).unwrap().dual();
        assert_eq!(d.rays(), &[v(&[0, 1]), v(&[2, -1])]);
        for r in d.rays() {
            for h in d.halfspaces() {
                assert!(!h.dot(r).is_negative());
            }
        }
    }

    #[test]
    fn redundant_generator_removed() {
        let c = cone(&[&[1, 0], &[0, 1], &[1, 1], &[2, 0]]).unwrap();
        assert_eq!(c.rays(), &[v(&[0, 1]), v(&[1, 0])]);
        assert_eq!(c.dual().rays(), &[v(&[0, 1]), v(&[1, 0])]);
    }

    #[test]
    fn rejects_bad_geometry() {
        assert!(matches!(cone(&[&[1, 0], &[2, 0]]), Err(Error::UnsupportedGeometry(_))));
        assert!(matches!(cone(&[&[1, 0], &[-1, 0], &[0, 1]]), Err(Error::UnsupportedGeometry(_))));
        assert!(matches!(cone(&[&[1, 0], &[0, 1, 0]]), Err(Error::Dimension { .. })));
    }

    #[test]
    fn double_dual_roundtrip() {
        let c = cone(&[&[1, 0, 0], &[0, 1, 0], &[1, 0, 1], &[0, 1, 1]]).unwrap();
        assert_eq!(c.dual().dual(), c);
        let again = Cone::from_rays(Lattice::M, c.dual().rays().to_vec()).unwrap();
        assert_eq!(again, c.dual());
    }

    #[test]
    fn from_halfspaces_matches() {
        let c = Cone::from_halfspaces(Lattice::N, vec![v(&[1, 0]), v(&[-1, 2])]).unwrap();
        assert_eq!(c.rays(), &[v(&[0, 1]), v(&[2, 1])]);
    }

    #[test]
    fn subcones_of_quadrilateral_cone() {
        let c = cone(&[&[1, 0, 0], &[0, 1, 0], &[1, 0, 1], &[0, 1, 1]]).unwrap();
        let cells = c.simplicial_subcones();
        assert_eq!(cells.len(), 2);
        for cell in cells {
            assert_eq!(cell.len(), 3);
        }
    }

    #[test]
    fn json_wire_form() {
        let c = cone(&[&[1, 0], &[1, 2]]).unwrap();
        let json = serde_json::to_string(&PolyhedronJson::from(&c)).unwrap();
        assert_eq!(
            json,
            r#"{"rank":2,"rays":[["1","0"],["1","2"]],"halfspaces":[{"normal":["0","-1"],"offset":"0"},{"normal":["-2","1"],"offset":"0"}],"vertices":[["0","0"]],"lattice":"N"}"#
        );
        let back: PolyhedronJson = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_cone().unwrap(), c);
    }
}
