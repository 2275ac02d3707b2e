use super::polytope::{affine_dimension, Polytope};
use crate::arith::RationalVector;

/// Simplices given as sorted tuples of vertex indices into the polytope's
/// (lexicographically ordered) vertex list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    pub simplices: Vec<Vec<usize>>,
}

/// Pulling triangulation: cone the lexicographically smallest vertex of each
/// face over the triangulations of the facets of that face not containing it.
/// Uses only the polytope's vertices, so the output is a function of the
/// vertex order alone.
pub(crate) fn pulling_triangulation(p: &Polytope) -> Triangulation {
    let vertices = p.vertices();
    if vertices.is_empty() {
        return Triangulation { simplices: Vec::new() };
    }
    let tight: Vec<Vec<bool>> = p
        .halfspaces()
        .iter()
        .map(|h| vertices.iter().map(|v| h.is_tight(v)).collect())
        .collect();
    let all: Vec<usize> = (0..vertices.len()).collect();
    let dim = affine_dimension(vertices);
    let mut simplices = Vec::new();
    pull(vertices, &tight, &all, dim, &mut simplices);
    for s in &mut simplices {
        s.sort_unstable();
    }
    simplices.sort();
    Triangulation { simplices }
}

fn pull(
    vertices: &[RationalVector],
    tight: &[Vec<bool>],
    face: &[usize],
    dim: usize,
    out: &mut Vec<Vec<usize>>,
) {
    if face.len() == dim + 1 {
        out.push(face.to_vec());
        return;
    }
    let apex = face[0];
    let mut facets: Vec<Vec<usize>> = Vec::new();
    for row in tight {
        let sub: Vec<usize> = face.iter().copied().filter(|&i| row[i]).collect();
        if sub.len() == face.len() || sub.len() < dim || sub.contains(&apex) {
            continue;
        }
        if facets.contains(&sub) {
            continue;
        }
        let pts: Vec<RationalVector> = sub.iter().map(|&i| vertices[i].clone()).collect();
        if affine_dimension(&pts) + 1 == dim {
            facets.push(sub);
        }
    }
    for f in facets {
        let mut inner = Vec::new();
        pull(vertices, tight, &f, dim - 1, &mut inner);
        for mut s in inner {
            s.insert(0, apex);
            out.push(s);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rational;

    fn poly(list: &[&[i64]]) -> Polytope {
        let rank = list[0].len();
        Polytope::from_vertices(rank, list.iter().map(|p| RationalVector::from_ints(p)).collect())
            .unwrap()
    }

    #[test]
    fn simplex_is_itself() {
        let p = poly(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(p.triangulate().unwrap().simplices, vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn unit_square_two_triangles() {
        let p = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let t = p.triangulate().unwrap();
        assert_eq!(t.simplices.len(), 2);
        for s in &t.simplices {
            assert_eq!(p.simplex_volume(s), Rational::new(1, 2));
        }
    }

    #[test]
    fn cube_volume_and_determinism() {
        let mut pts = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    pts.push(RationalVector::from_ints(&[x, y, z]));
                }
            }
        }
        let p = Polytope::from_vertices(3, pts.clone()).unwrap();
        pts.reverse();
        let q = Polytope::from_vertices(3, pts).unwrap();
        let t = p.triangulate().unwrap();
        assert_eq!(t, q.triangulate().unwrap());
        let total: Rational = t.simplices.iter().map(|s| p.simplex_volume(s)).sum();
        assert_eq!(total, Rational::one());
    }

    #[test]
    fn hexagon_simplices_cover() {
        let p = poly(&[&[2, 0], &[1, 2], &[-1, 2], &[-2, 0], &[-1, -2], &[1, -2]]);
        let t = p.triangulate().unwrap();
        assert_eq!(t.simplices.len(), 4);
        let total: Rational = t.simplices.iter().map(|s| p.simplex_volume(s)).sum();
        assert_eq!(total, Rational::from(12));
    }
}
