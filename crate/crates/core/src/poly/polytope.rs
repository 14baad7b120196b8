//! Bounded rational polyhedra, handled through their homogenisation cone
//! `{ (t, x) : t >= 0, x/t in P }`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use super::cone::Cone;
use super::rat::{self, QVector, Rat};
use crate::error::{Error, Result};

/// Halfspace `normal . x >= offset`.
pub type Halfspace = (QVector, Rat);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Polytope {
    pub ambient_dim: usize,
    /// Sorted, irredundant.
    pub vertices: Vec<QVector>,
    /// Facet-defining halfspaces of the affine hull.
    pub halfspaces: Vec<Halfspace>,
    /// Affine hull as `normal . x = offset`.
    pub equations: Vec<Halfspace>,
    /// `-1` for the empty polytope.
    pub dim: isize,
    hom: Cone,
}

fn lift(normal: &[Rat], offset: &Rat) -> QVector {
    let mut v = Vec::with_capacity(normal.len() + 1);
    v.push(-offset.clone());
    v.extend(normal.iter().cloned());
    v
}

fn unlift(v: &[Rat]) -> Halfspace {
    (v[1..].to_vec(), -v[0].clone())
}

impl Polytope {
    pub fn empty(dim: usize) -> Polytope {
        Polytope {
            ambient_dim: dim,
            vertices: vec![],
            halfspaces: vec![],
            equations: vec![],
            dim: -1,
            hom: Cone::origin(dim + 1),
        }
    }

    pub fn from_hrep(dim: usize, halfspaces: &[Halfspace], equations: &[Halfspace]) -> Result<Polytope> {
        for (n, _) in halfspaces.iter().chain(equations) {
            if n.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: n.len(),
                });
            }
        }
        let mut ineqs: Vec<QVector> = halfspaces.iter().map(|(n, o)| lift(n, o)).collect();
        ineqs.push(rat::unit(dim + 1, 0));
        let eqs: Vec<QVector> = equations.iter().map(|(n, o)| lift(n, o)).collect();
        let hom = Cone::from_hrep(dim + 1, &ineqs, &eqs)?;
        Self::from_hom(dim, hom)
    }

    pub fn from_vertices(dim: usize, points: &[QVector]) -> Result<Polytope> {
        if points.is_empty() {
            return Ok(Self::empty(dim));
        }
        let gens: Vec<QVector> = points
            .iter()
            .map(|p| {
                if p.len() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: p.len(),
                    });
                }
                Ok(lift(p, &-Rat::one()))
            })
            .collect::<Result<_>>()?;
        let hom = Cone::from_rays(dim + 1, &gens)?;
        Self::from_hom(dim, hom)
    }

    fn from_hom(dim: usize, hom: Cone) -> Result<Polytope> {
        let mut vertices: Vec<QVector> = Vec::new();
        let mut recession = !hom.lineality.is_empty();
        for r in &hom.rays {
            if r[0].is_positive() {
                let t = r[0].clone();
                vertices.push(r[1..].iter().map(|x| x / &t).collect());
            } else {
                recession = true;
            }
        }
        if vertices.is_empty() {
            return Ok(Self::empty(dim));
        }
        if recession {
            return Err(Error::Unbounded);
        }
        vertices.sort();
        let t_facet = rat::unit(dim + 1, 0);
        let halfspaces: Vec<Halfspace> = hom
            .facets
            .iter()
            .filter(|f| **f != t_facet)
            .map(|f| unlift(f))
            .collect();
        let equations: Vec<Halfspace> = hom.equations.iter().map(|e| unlift(e)).collect();
        let pdim = hom.dim as isize - 1;
        Ok(Polytope {
            ambient_dim: dim,
            vertices,
            halfspaces,
            equations,
            dim: pdim,
            hom,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.dim < 0
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        !self.is_empty() && self.hom.contains(&lift(x, &-Rat::one()))
    }

    pub fn contains_relint(&self, x: &[Rat]) -> bool {
        !self.is_empty()
            && self
                .equations
                .iter()
                .all(|(n, o)| rat::dot(n, x) == *o)
            && self
                .halfspaces
                .iter()
                .all(|(n, o)| rat::dot(n, x) > *o)
    }

    /// Barycentre of the vertices.
    pub fn relative_interior_point(&self) -> Result<QVector> {
        if self.is_empty() {
            return Err(Error::EmptyInput("relative interior of an empty polytope".into()));
        }
        let s = rat::sum(self.ambient_dim, &self.vertices);
        Ok(rat::scale(&s, &Rat::new(1.into(), (self.vertices.len() as i64).into())))
    }

    pub fn intersect(&self, other: &Polytope) -> Result<Polytope> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        if self.is_empty() || other.is_empty() {
            return Ok(Self::empty(self.ambient_dim));
        }
        let hom = self.hom.intersect(&other.hom)?;
        Self::from_hom(self.ambient_dim, hom)
    }

    /// Vertex-index sets of all nonempty faces (including `self`).
    fn face_vertex_sets(&self) -> Vec<BTreeSet<usize>> {
        // Homogenisation rays are exactly the lifted vertices, in the same
        // sorted order up to the positive scaling, so match them back.
        let index_of: Vec<usize> = self
            .hom
            .rays
            .iter()
            .map(|r| {
                let t = r[0].clone();
                let v: QVector = r[1..].iter().map(|x| x / &t).collect();
                self.vertices.binary_search(&v).expect("vertex of homogenisation")
            })
            .collect();
        self.hom
            .face_ray_sets()
            .into_iter()
            .filter(|s| !s.is_empty())
            .map(|s| s.into_iter().map(|i| index_of[i]).collect())
            .collect()
    }

    /// All closed faces of dimension `d`.
    pub fn faces_of_dim(&self, d: usize) -> Result<Vec<Polytope>> {
        let mut out = Vec::new();
        for s in self.face_vertex_sets() {
            let pts: Vec<QVector> = s.iter().map(|&i| self.vertices[i].clone()).collect();
            let f = Polytope::from_vertices(self.ambient_dim, &pts)?;
            if f.dim == d as isize {
                out.push(f);
            }
        }
        out.sort();
        Ok(out)
    }

    /// f-vector `(f_0, ..., f_dim)`, counting `self` as the top face.
    pub fn f_vector(&self) -> Result<Vec<usize>> {
        if self.is_empty() {
            return Ok(vec![]);
        }
        let mut f = vec![0; self.dim as usize + 1];
        for s in self.face_vertex_sets() {
            let pts: Vec<QVector> = s.iter().map(|&i| self.vertices[i].clone()).collect();
            let face = Polytope::from_vertices(self.ambient_dim, &pts)?;
            f[face.dim as usize] += 1;
        }
        Ok(f)
    }

    /// Vertices of a polygon in counter-clockwise order (planar polytopes only).
    pub fn cyclic_vertices(&self) -> Vec<QVector> {
        if self.ambient_dim != 2 || self.dim < 2 {
            return self.vertices.clone();
        }
        cyclic_order(self.vertices.clone())
    }

    pub fn is_zero_dim_at(&self, p: &[Rat]) -> bool {
        self.dim == 0 && self.vertices[0].as_slice() == p
    }
}

/// Vertices of a convex polygon sorted counter-clockwise around their
/// barycentre, starting at the positive x-axis.
pub fn cyclic_order(vs: Vec<QVector>) -> Vec<QVector> {
    if vs.is_empty() {
        return vs;
    }
    // Integer offsets `n D (v - c)`, a positive multiple of `v - c`.
    let den = vs.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<Vec<BigInt>> = vs.iter().map(|v| v.iter().map(|x| (x * &den).to_integer()).collect()).collect();
    let n = BigInt::from(vs.len());
    let sum: Vec<BigInt> = (0..2).map(|k| ints.iter().map(|v| &v[k]).sum()).collect();
    let offsets: Vec<QVector> = ints
        .iter()
        .map(|v| (0..2).map(|k| Rat::from_integer(&v[k] * &n - &sum[k])).collect())
        .collect();
    let mut order: Vec<usize> = (0..vs.len()).collect();
    order.sort_by(|&a, &b| rat::angle_cmp(&offsets[a], &offsets[b]));
    order.into_iter().map(|i| vs[i].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat::{qvec, ratio};

    fn triangle() -> Polytope {
        Polytope::from_vertices(2, &[qvec(&[0, 0]), qvec(&[1, 0]), qvec(&[0, 1])]).unwrap()
    }

    #[test]
    fn triangle_faces() {
        let t = triangle();
        assert_eq!(t.faces_of_dim(1).unwrap().len(), 3);
        assert_eq!(t.faces_of_dim(2).unwrap(), vec![t.clone()]);
        assert_eq!(t.faces_of_dim(0).unwrap().len(), 3);
        assert_eq!(t.halfspaces.len(), 3);
    }

    #[test]
    fn infeasible_halfspaces_give_the_empty_polytope() {
        let p = Polytope::from_hrep(
            1,
            &[(qvec(&[1]), rat::rat(1)), (qvec(&[-1]), rat::rat(0))],
            &[],
        )
        .unwrap();
        assert!(p.is_empty());
    }

    #[test]
    fn unbounded_is_reported() {
        let r = Polytope::from_hrep(1, &[(qvec(&[1]), rat::rat(0))], &[]);
        assert_eq!(r, Err(Error::Unbounded));
    }

    #[test]
    fn segment_barycentre() {
        let s = Polytope::from_vertices(2, &[qvec(&[0, 0]), qvec(&[2, 0])]).unwrap();
        assert_eq!(s.dim, 1);
        assert_eq!(s.relative_interior_point().unwrap(), qvec(&[1, 0]));
        assert!(s.contains_relint(&qvec(&[1, 0])));
        assert!(!s.contains_relint(&qvec(&[0, 0])));
    }

    #[test]
    fn hrep_and_vrep_agree_on_a_square() {
        let sq = Polytope::from_hrep(
            2,
            &[
                (qvec(&[1, 0]), rat::rat(0)),
                (qvec(&[-1, 0]), rat::rat(-1)),
                (qvec(&[0, 1]), rat::rat(0)),
                (qvec(&[0, -1]), rat::rat(-1)),
            ],
            &[],
        )
        .unwrap();
        let sq2 = Polytope::from_vertices(
            2,
            &[qvec(&[0, 0]), qvec(&[1, 0]), qvec(&[0, 1]), qvec(&[1, 1]), vec![ratio(1, 2), ratio(1, 2)]],
        )
        .unwrap();
        assert_eq!(sq, sq2);
        assert_eq!(sq.f_vector().unwrap(), vec![4, 4, 1]);
    }
}
