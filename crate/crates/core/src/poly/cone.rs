//! Rational polyhedral cones carrying both representations in canonical form.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::dd;
use super::linalg;
use super::rat::{self, QVector, Rat};
use crate::error::{Error, Result};

/// A cone `{ x : f.x >= 0 (f in facets), e.x = 0 (e in equations) }`, equal to
/// `cone(rays) + span(lineality)`.
///
/// Rays are primitive integer vectors orthogonal to the lineality space;
/// facet normals are primitive integer vectors inside the linear span of the
/// cone. Lineality and equation bases are reduced echelon rows rescaled to
/// primitive integers. All lists are sorted, so two cones are equal as sets
/// exactly when they compare equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cone {
    pub ambient_dim: usize,
    #[serde(with = "crate::io::serde_rat::matrix")]
    pub rays: Vec<QVector>,
    #[serde(with = "crate::io::serde_rat::matrix")]
    pub lineality: Vec<QVector>,
    #[serde(with = "crate::io::serde_rat::matrix")]
    pub facets: Vec<QVector>,
    #[serde(with = "crate::io::serde_rat::matrix")]
    pub equations: Vec<QVector>,
    pub dim: usize,
}

fn to_ints(vs: &[QVector]) -> Vec<Vec<BigInt>> {
    vs.iter().map(|v| rat::primitive_int(v)).collect()
}

/// Extreme rays of the pointed cone `{x : ineqs x >= 0, eqs x = 0}` from a
/// single double description pass; redundant inequalities are kept.
pub fn extreme_rays(dim: usize, ineqs: &[QVector], eqs: &[QVector]) -> Result<Vec<QVector>> {
    check_dims(dim, ineqs)?;
    check_dims(dim, eqs)?;
    let g = dd::hrep_to_vrep(dim, &to_ints(ineqs), &to_ints(eqs));
    if !g.lineality.is_empty() {
        return Err(Error::Unsupported("cone is not pointed".into()));
    }
    Ok(g.rays.iter().map(|v| rat::from_int(v)).collect())
}

fn check_dims(dim: usize, vs: &[QVector]) -> Result<()> {
    match vs.iter().find(|v| v.len() != dim) {
        Some(v) => Err(Error::DimensionMismatch {
            expected: dim,
            found: v.len(),
        }),
        None => Ok(()),
    }
}

fn canonical_vectors(vs: Vec<Vec<BigInt>>, modulo: &[QVector], dim: usize) -> Vec<QVector> {
    let set: BTreeSet<QVector> = vs
        .into_iter()
        .map(|v| rat::primitive(&linalg::project_out(&rat::from_int(&v), modulo, dim)))
        .filter(|v| !rat::is_zero(v))
        .collect();
    set.into_iter().collect()
}

impl Cone {
    /// Cone from an H-representation (`facets . x >= 0`, `equations . x = 0`).
    pub fn from_hrep(dim: usize, ineqs: &[QVector], eqs: &[QVector]) -> Result<Cone> {
        check_dims(dim, ineqs)?;
        check_dims(dim, eqs)?;
        let g = dd::hrep_to_vrep(dim, &to_ints(ineqs), &to_ints(eqs));
        let rays: Vec<QVector> = g.rays.iter().map(|v| rat::from_int(v)).collect();
        let lin: Vec<QVector> = g.lineality.iter().map(|v| rat::from_int(v)).collect();
        Ok(Self::finish(dim, rays, lin))
    }

    /// Cone generated by `gens` plus the linear span of `lineality`.
    pub fn from_vrep(dim: usize, gens: &[QVector], lineality: &[QVector]) -> Result<Cone> {
        check_dims(dim, gens)?;
        check_dims(dim, lineality)?;
        Ok(Self::finish(dim, gens.to_vec(), lineality.to_vec()))
    }

    pub fn from_rays(dim: usize, gens: &[QVector]) -> Result<Cone> {
        Self::from_vrep(dim, gens, &[])
    }

    /// The whole space of dimension `dim`.
    pub fn full(dim: usize) -> Cone {
        Self::finish(dim, vec![], (0..dim).map(|i| rat::unit(dim, i)).collect())
    }

    pub fn origin(dim: usize) -> Cone {
        Self::finish(dim, vec![], vec![])
    }

    /// Shared tail of both constructors: dualise to get the irredundant
    /// H-representation, then dualise back for irredundant generators.
    fn finish(dim: usize, gens: Vec<QVector>, lin: Vec<QVector>) -> Cone {
        let gens_i = to_ints(&gens);
        let lin_i = to_ints(&lin);
        let dual = dd::hrep_to_vrep(dim, &gens_i, &lin_i);
        let equations = linalg::canonical_span(
            &dual.lineality.iter().map(|v| rat::from_int(v)).collect::<Vec<_>>(),
            dim,
        );
        let facets = canonical_vectors(dual.rays, &equations, dim);

        let primal = dd::hrep_to_vrep(dim, &to_ints(&facets), &to_ints(&equations));
        let lineality = linalg::canonical_span(
            &primal.lineality.iter().map(|v| rat::from_int(v)).collect::<Vec<_>>(),
            dim,
        );
        let rays = canonical_vectors(primal.rays, &lineality, dim);
        let cone_dim = dim - equations.len();
        Cone {
            ambient_dim: dim,
            rays,
            lineality,
            facets,
            equations,
            dim: cone_dim,
        }
    }

    pub fn lineality_dim(&self) -> usize {
        self.lineality.len()
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient_dim
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.equations.iter().all(|e| rat::dot(e, x).is_zero())
            && self.facets.iter().all(|f| !rat::dot(f, x).is_negative())
    }

    /// Membership in the relative interior.
    pub fn contains_relint(&self, x: &[Rat]) -> bool {
        self.equations.iter().all(|e| rat::dot(e, x).is_zero())
            && self.facets.iter().all(|f| rat::dot(f, x).is_positive())
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.rays.iter().all(|r| self.contains(r))
            && other
                .lineality
                .iter()
                .all(|l| self.contains(l) && self.contains(&rat::neg(l)))
    }

    /// Sum of the extreme rays; lies in the relative interior.
    pub fn relative_interior_point(&self) -> QVector {
        rat::sum(self.ambient_dim, &self.rays)
    }

    pub fn intersect(&self, other: &Cone) -> Result<Cone> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        let ineqs: Vec<QVector> = self.facets.iter().chain(&other.facets).cloned().collect();
        let eqs: Vec<QVector> = self
            .equations
            .iter()
            .chain(&other.equations)
            .cloned()
            .collect();
        Cone::from_hrep(self.ambient_dim, &ineqs, &eqs)
    }

    /// Face cut out by the supporting hyperplane `normal . x = 0`.
    pub fn face_of(&self, normal: &[Rat]) -> Result<Cone> {
        let mut eqs = self.equations.clone();
        eqs.push(normal.to_vec());
        Cone::from_hrep(self.ambient_dim, &self.facets, &eqs)
    }

    /// Every face of the cone (including the minimal face and the cone
    /// itself), as sets of extreme-ray indices.
    pub fn face_ray_sets(&self) -> Vec<BTreeSet<usize>> {
        let all: BTreeSet<usize> = (0..self.rays.len()).collect();
        let facet_sets: Vec<BTreeSet<usize>> = self
            .facets
            .iter()
            .map(|f| {
                (0..self.rays.len())
                    .filter(|&i| rat::dot(f, &self.rays[i]).is_zero())
                    .collect()
            })
            .collect();
        let mut faces: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        faces.insert(all.clone());
        let mut frontier: Vec<BTreeSet<usize>> = vec![all];
        while let Some(face) = frontier.pop() {
            for fs in &facet_sets {
                let sub: BTreeSet<usize> = face.intersection(fs).copied().collect();
                if sub != face && faces.insert(sub.clone()) {
                    frontier.push(sub);
                }
            }
        }
        faces.into_iter().collect()
    }

    /// All faces as cones.
    pub fn faces(&self) -> Result<Vec<Cone>> {
        self.face_ray_sets()
            .into_iter()
            .map(|s| {
                let gens: Vec<QVector> = s.iter().map(|&i| self.rays[i].clone()).collect();
                Cone::from_vrep(self.ambient_dim, &gens, &self.lineality)
            })
            .collect()
    }

    /// Whether `other` is a face of `self` (both cones in the same space).
    pub fn has_face(&self, other: &Cone) -> bool {
        if !self.contains_cone(other) {
            return false;
        }
        let p = other.relative_interior_point();
        // The smallest face containing p is cut out by the facets tight at p.
        let tight: Vec<&QVector> = self
            .facets
            .iter()
            .filter(|f| rat::dot(f, &p).is_zero())
            .collect();
        let in_face = |x: &QVector| tight.iter().all(|f| rat::dot(f, x).is_zero());
        let face_rays: Vec<&QVector> = self.rays.iter().filter(|r| in_face(r)).collect();
        face_rays.len() == other.rays.len()
            && face_rays.iter().all(|r| other.rays.contains(r))
            && self.lineality == other.lineality
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat::qvec;

    #[test]
    fn orthant_from_hrep() {
        let c = Cone::from_hrep(2, &[qvec(&[1, 0]), qvec(&[0, 1])], &[]).unwrap();
        assert_eq!(c.rays, vec![qvec(&[0, 1]), qvec(&[1, 0])]);
        assert_eq!(c.dim, 2);
        assert_eq!(c.relative_interior_point(), qvec(&[1, 1]));
    }

    #[test]
    fn redundant_generators_are_dropped() {
        let c = Cone::from_rays(2, &[qvec(&[1, 0]), qvec(&[0, 1]), qvec(&[1, 1]), qvec(&[2, 0])])
            .unwrap();
        assert_eq!(c.rays, vec![qvec(&[0, 1]), qvec(&[1, 0])]);
    }

    #[test]
    fn single_ray_has_two_inequalities_worth_of_data() {
        let c = Cone::from_rays(2, &[qvec(&[1, 1])]).unwrap();
        assert_eq!(c.dim, 1);
        assert_eq!(c.equations.len(), 1);
        assert_eq!(c.facets.len(), 1);
        assert!(c.contains(&qvec(&[3, 3])));
        assert!(!c.contains(&qvec(&[-1, -1])));
        assert!(!c.contains(&qvec(&[1, 0])));
    }

    #[test]
    fn square_cone_faces() {
        let c = Cone::from_rays(
            3,
            &[qvec(&[1, 0, 1]), qvec(&[0, 1, 1]), qvec(&[-1, 0, 1]), qvec(&[0, -1, 1])],
        )
        .unwrap();
        assert_eq!(c.facets.len(), 4);
        // origin, 4 rays, 4 facets, the cone itself
        assert_eq!(c.face_ray_sets().len(), 10);
    }

    #[test]
    fn halfplane_has_lineality() {
        let c = Cone::from_hrep(2, &[qvec(&[1, 0])], &[]).unwrap();
        assert_eq!(c.lineality_dim(), 1);
        assert_eq!(c.rays, vec![qvec(&[1, 0])]);
        assert!(c.contains(&qvec(&[0, -5])));
    }

    #[test]
    fn face_relation() {
        let c = Cone::from_rays(2, &[qvec(&[1, 0]), qvec(&[0, 1])]).unwrap();
        let ray = Cone::from_rays(2, &[qvec(&[1, 0])]).unwrap();
        let inner = Cone::from_rays(2, &[qvec(&[1, 1])]).unwrap();
        assert!(c.has_face(&ray));
        assert!(c.has_face(&Cone::origin(2)));
        assert!(!c.has_face(&inner));
    }
}
