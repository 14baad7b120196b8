//! Rational polyhedral fans with primitive integer rays.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::intmat;
use crate::poly::rat::{self, QVector};
use crate::poly::Cone;

/// A fan in `Z^lattice_rank`. Maximal cones are sorted lists of ray indices.
///
/// The zero-dimensional lattice carries the fan with no rays and a single
/// (zero) maximal cone; it is the fan of a point.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Fan {
    pub lattice_rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl Fan {
    /// Checked constructor: ranks, primitivity, distinctness and index ranges.
    /// The fan axioms themselves are checked by [`Fan::validate`].
    pub fn new(lattice_rank: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Fan> {
        for r in &rays {
            if r.len() != lattice_rank {
                return Err(Error::DimensionMismatch {
                    expected: lattice_rank,
                    found: r.len(),
                });
            }
            if r.iter().fold(0, |g, &x| gcd(g, x)) != 1 {
                return Err(Error::InvalidFan(format!("ray {r:?} is not primitive")));
            }
        }
        let distinct: BTreeSet<&Vec<i64>> = rays.iter().collect();
        if distinct.len() != rays.len() {
            return Err(Error::InvalidFan("rays are not pairwise distinct".into()));
        }
        if max_cones.is_empty() {
            return Err(Error::InvalidFan("no maximal cones".into()));
        }
        let mut cones = Vec::with_capacity(max_cones.len());
        for c in max_cones {
            let set: BTreeSet<usize> = c.iter().copied().collect();
            if set.len() != c.len() {
                return Err(Error::InvalidFan(format!("cone {c:?} repeats a ray")));
            }
            if let Some(&i) = set.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::InvalidFan(format!("ray index {i} out of range")));
            }
            cones.push(set.into_iter().collect::<Vec<_>>());
        }
        Ok(Fan {
            lattice_rank,
            rays,
            max_cones: cones,
        })
    }

    pub fn point() -> Fan {
        Fan {
            lattice_rank: 0,
            rays: vec![],
            max_cones: vec![vec![]],
        }
    }

    pub fn ray_q(&self, i: usize) -> QVector {
        rat::from_i64(&self.rays[i])
    }

    pub fn cone(&self, c: usize) -> Cone {
        let gens: Vec<QVector> = self.max_cones[c].iter().map(|&i| self.ray_q(i)).collect();
        Cone::from_rays(self.lattice_rank, &gens).expect("ray dimensions checked on construction")
    }

    pub fn cones(&self) -> Vec<Cone> {
        (0..self.max_cones.len()).map(|c| self.cone(c)).collect()
    }

    /// Sorted rays with cones re-indexed and sorted: equal fans compare equal.
    pub fn normalized(&self) -> Fan {
        let mut order: Vec<usize> = (0..self.rays.len()).collect();
        order.sort_by(|&a, &b| self.rays[a].cmp(&self.rays[b]));
        let mut new_index = vec![0; self.rays.len()];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let rays = order.iter().map(|&i| self.rays[i].clone()).collect();
        let mut cones: Vec<Vec<usize>> = self
            .max_cones
            .iter()
            .map(|c| {
                let mut v: Vec<usize> = c.iter().map(|&i| new_index[i]).collect();
                v.sort();
                v
            })
            .collect();
        cones.sort();
        cones.dedup();
        Fan {
            lattice_rank: self.lattice_rank,
            rays,
            max_cones: cones,
        }
    }

    pub fn ray_set(&self) -> BTreeSet<Vec<i64>> {
        self.rays.iter().cloned().collect()
    }

    pub fn is_simplicial(&self) -> bool {
        self.max_cones.iter().all(|c| {
            let gens: Vec<QVector> = c.iter().map(|&i| self.ray_q(i)).collect();
            crate::poly::linalg::rank(&gens, self.lattice_rank) == c.len()
        })
    }

    /// Every maximal cone is generated by part of a lattice basis.
    pub fn is_smooth(&self) -> bool {
        self.max_cones.iter().all(|c| {
            if c.len() != self.lattice_rank {
                return false;
            }
            let m: Vec<Vec<i64>> = c.iter().map(|&i| self.rays[i].clone()).collect();
            intmat::abs_det(&intmat::to_big(&m)) == 1.into()
        })
    }

    /// Facets of each maximal cone, as sorted ray-index sets.
    fn facet_ray_sets(&self, c: usize) -> Vec<Vec<usize>> {
        let cone = self.cone(c);
        cone.facets
            .iter()
            .map(|f| {
                self.max_cones[c]
                    .iter()
                    .copied()
                    .filter(|&i| rat::dot(f, &self.ray_q(i)).is_zero())
                    .collect()
            })
            .collect()
    }

    /// Check the fan axioms: every cone is strongly convex with exactly the
    /// listed rays as extreme rays, and any two cones meet in a common face.
    pub fn validate(&self) -> Result<()> {
        let cones = self.cones();
        for (c, cone) in cones.iter().enumerate() {
            if !cone.is_pointed() {
                return Err(Error::InvalidFan(format!("cone {c} is not strongly convex")));
            }
            if cone.rays.len() != self.max_cones[c].len() {
                return Err(Error::InvalidFan(format!(
                    "cone {c} lists a ray that is not extreme"
                )));
            }
        }
        for a in 0..cones.len() {
            for b in a + 1..cones.len() {
                let common: Vec<usize> = self.max_cones[a]
                    .iter()
                    .copied()
                    .filter(|i| self.max_cones[b].contains(i))
                    .collect();
                let gens: Vec<QVector> = common.iter().map(|&i| self.ray_q(i)).collect();
                let shared = Cone::from_rays(self.lattice_rank, &gens)?;
                let meet = cones[a].intersect(&cones[b])?;
                if meet != shared || !cones[a].has_face(&shared) || !cones[b].has_face(&shared) {
                    return Err(Error::InvalidFan(format!(
                        "cones {a} and {b} do not meet in a common face"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Completeness for a valid fan: all maximal cones are full-dimensional and
    /// every facet of a maximal cone lies in exactly two maximal cones.
    pub fn is_complete(&self) -> bool {
        if self.lattice_rank == 0 {
            return true;
        }
        let mut count: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for c in 0..self.max_cones.len() {
            if self.cone(c).dim != self.lattice_rank {
                return false;
            }
            for f in self.facet_ray_sets(c) {
                *count.entry(f).or_default() += 1;
            }
        }
        count.values().all(|&n| n == 2)
    }

    /// Codimension-one cones shared by two maximal cones of a simplicial fan:
    /// `(wall rays, cone a, ray of a off the wall, cone b, ray of b off the wall)`.
    pub fn walls(&self) -> Vec<Wall> {
        let mut out = Vec::new();
        for a in 0..self.max_cones.len() {
            for b in a + 1..self.max_cones.len() {
                let ca = &self.max_cones[a];
                let cb = &self.max_cones[b];
                let common: Vec<usize> = ca.iter().copied().filter(|i| cb.contains(i)).collect();
                if common.len() + 1 != self.lattice_rank
                    || ca.len() != self.lattice_rank
                    || cb.len() != self.lattice_rank
                {
                    continue;
                }
                let u = *ca.iter().find(|i| !common.contains(i)).expect("one extra ray");
                let w = *cb.iter().find(|i| !common.contains(i)).expect("one extra ray");
                out.push(Wall {
                    rays: common,
                    cone_a: a,
                    cone_b: b,
                    ray_a: u,
                    ray_b: w,
                });
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub rays: Vec<usize>,
    pub cone_a: usize,
    pub cone_b: usize,
    pub ray_a: usize,
    pub ray_b: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2() -> Fan {
        Fan::new(2, vec![vec![1, 0], vec![0, 1], vec![-1, -1]], vec![vec![0, 1], vec![1, 2], vec![0, 2]])
            .unwrap()
    }

    #[test]
    fn p2_is_a_smooth_complete_fan() {
        let f = p2();
        f.validate().unwrap();
        assert!(f.is_complete());
        assert!(f.is_smooth());
        assert_eq!(f.walls().len(), 3);
    }

    #[test]
    fn missing_cone_is_incomplete() {
        let f = Fan::new(2, vec![vec![1, 0], vec![0, 1], vec![-1, -1]], vec![vec![0, 1], vec![1, 2]])
            .unwrap();
        f.validate().unwrap();
        assert!(!f.is_complete());
    }

    #[test]
    fn overlapping_cones_are_rejected() {
        let f = Fan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![1, 1]],
            vec![vec![0, 1], vec![0, 2]],
        )
        .unwrap();
        assert!(f.validate().is_err());
    }

    #[test]
    fn non_primitive_ray_is_rejected() {
        assert!(Fan::new(1, vec![vec![2]], vec![vec![0]]).is_err());
    }

    #[test]
    fn normalisation_ignores_presentation() {
        let f = p2();
        let g = Fan::new(2, vec![vec![-1, -1], vec![1, 0], vec![0, 1]], vec![vec![2, 0], vec![1, 2], vec![0, 1]])
            .unwrap();
        assert_eq!(f.normalized(), g.normalized());
    }
}
