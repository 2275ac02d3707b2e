use super::cone::{Cone, Lattice};
use super::polytope::{Halfspace, Polytope};
use crate::arith::{Rational, RationalMatrix, RationalVector};
use crate::error::{Error, Result};

/// The sub-level polytope `Q = {u in dual : <u, xi> <= 1}` and its top facet
/// `P = {u in dual : <u, xi> = 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReebSlice {
    pub q: Polytope,
    pub p: Polytope,
}

/// Checks that `xi` pairs strictly positively with every ray of `dual`.
pub fn check_reeb(dual: &Cone, xi: &RationalVector) -> Result<()> {
    xi.check_rank(dual.rank())?;
    for u in dual.rays() {
        let pairing = u.dot(xi);
        if !pairing.is_positive() {
            return Err(Error::NotReeb { ray: u.to_string(), pairing: pairing.to_string() });
        }
    }
    Ok(())
}

pub fn reeb_slice(dual: &Cone, xi: &RationalVector) -> Result<ReebSlice> {
    check_reeb(dual, xi)?;
    let rank = dual.rank();
    let top: Vec<RationalVector> =
        dual.rays().iter().map(|u| u.scale(&u.dot(xi).recip())).collect();
    let mut walls: Vec<Halfspace> = dual
        .halfspaces()
        .iter()
        .map(|h| Halfspace::at_least(h, &Rational::zero()))
        .collect();
    walls.push(Halfspace::new(xi.clone(), Rational::one()));

    let mut q_vertices = top.clone();
    q_vertices.push(RationalVector::zeros(rank));
    let q = Polytope::from_parts(rank, q_vertices, walls.clone());

    walls.push(Halfspace::at_least(xi, &Rational::one()));
    let p = Polytope::from_parts(rank, top, walls);
    Ok(ReebSlice { q, p })
}

/// Image of `Q` under `u -> (<u, e_1>, ..., <u, e_n>)` for basis rows `e_i`
/// lying in the cone dual to `dual` with determinant one.
pub fn okounkov_body(dual: &Cone, xi: &RationalVector, basis: &RationalMatrix) -> Result<Polytope> {
    let n = dual.rank();
    if basis.nrows() != n || basis.ncols() != n {
        return Err(Error::InvalidBasis(format!(
            "expected a {n}x{n} matrix, got {}x{}",
            basis.nrows(),
            basis.ncols()
        )));
    }
    let det = basis.det()?;
    if det != Rational::one() {
        return Err(Error::InvalidBasis(format!("determinant is {det}, not 1")));
    }
    let sigma_dual = match dual.lattice() {
        Lattice::M => dual,
        Lattice::N => {
            return Err(Error::InvalidBasis("the weight cone must live in M".into()));
        }
    };
    for (i, e) in basis.rows().iter().enumerate() {
        if sigma_dual.rays().iter().any(|u| u.dot(e).is_negative()) {
            return Err(Error::InvalidBasis(format!("row {i} = {e} is not in the cone")));
        }
    }
    let slice = reeb_slice(dual, xi)?;
    slice.q.transform(basis)
}
