//! Divisor class groups of smooth complete toric varieties.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::fan::Fan;
use crate::error::{Error, Result};
use crate::poly::rat::{self, QVector, Rat};
use crate::poly::{intmat, linalg, Cone};

/// `Cl(X) = Z^rays / M`, with coordinates given by the classes of the rays
/// outside the first maximal cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassLattice {
    pub num_rays: usize,
    pub lattice_rank: usize,
    pub picard_rank: usize,
    /// Ray indices whose classes form the basis, in increasing order.
    pub basis_rays: Vec<usize>,
    /// `picard_rank x num_rays`; column `i` is the class of `D_i`.
    pub projection: Vec<Vec<i64>>,
    /// `lattice_rank x num_rays`; row `j` is `(<e_j, v_i>)_i`, the image of `M`.
    pub relations: Vec<Vec<i64>>,
}

fn has_torsion(fan: &Fan) -> bool {
    let n = fan.rays.len();
    let rows: Vec<Vec<BigInt>> = (0..fan.lattice_rank)
        .map(|j| fan.rays.iter().map(|r| BigInt::from(r[j])).collect())
        .collect();
    let q: Vec<QVector> = rows.iter().map(|r| rat::from_int(r)).collect();
    intmat::lattice_hnf(&rows, n) != intmat::saturated_basis(&q, n)
}

impl ClassLattice {
    pub fn new(fan: &Fan) -> Result<ClassLattice> {
        let d = fan.lattice_rank;
        let n = fan.rays.len();
        let all: Vec<QVector> = (0..n).map(|i| fan.ray_q(i)).collect();
        if linalg::rank(&all, d) != d {
            return Err(Error::Unsupported("rays do not span the lattice".into()));
        }
        if !fan.is_smooth() {
            let why = if has_torsion(fan) {
                "fan is not smooth and the class group has torsion"
            } else {
                "fan is not smooth"
            };
            return Err(Error::Unsupported(why.into()));
        }
        let sigma = &fan.max_cones[0];
        let basis_rays: Vec<usize> = (0..n).filter(|i| !sigma.contains(i)).collect();
        let rho = basis_rays.len();
        // Dual basis m_k of the cone rays: rows of the inverse transpose.
        let b: Vec<QVector> = sigma.iter().map(|&i| fan.ray_q(i)).collect();
        let binv = linalg::inverse(&b).ok_or_else(|| Error::Internal("singular smooth cone".into()))?;
        let m = linalg::transpose(&binv, d);
        let mut projection = vec![vec![0i64; n]; rho];
        for (pos, &j) in basis_rays.iter().enumerate() {
            projection[pos][j] = 1;
        }
        for (k, &s) in sigma.iter().enumerate() {
            for (pos, &j) in basis_rays.iter().enumerate() {
                let x = -rat::dot(&m[k], &fan.ray_q(j));
                projection[pos][s] = rat::to_i64(&[x])
                    .ok_or_else(|| Error::Internal("non-integral class".into()))?[0];
            }
        }
        let relations = (0..d)
            .map(|j| fan.rays.iter().map(|r| r[j]).collect())
            .collect();
        Ok(ClassLattice {
            num_rays: n,
            lattice_rank: d,
            picard_rank: rho,
            basis_rays,
            projection,
            relations,
        })
    }

    /// Class of the ray divisor `D_i`.
    pub fn ray_class(&self, i: usize) -> QVector {
        self.projection.iter().map(|row| rat::rat(row[i])).collect()
    }

    pub fn ray_classes(&self) -> Vec<QVector> {
        (0..self.num_rays).map(|i| self.ray_class(i)).collect()
    }

    /// Class of a ray-coefficient vector.
    pub fn class_of(&self, coeffs: &[Rat]) -> QVector {
        self.projection
            .iter()
            .map(|row| {
                row.iter()
                    .zip(coeffs)
                    .fold(Rat::zero(), |acc, (&p, c)| acc + c * rat::rat(p))
            })
            .collect()
    }

    /// Ray coefficients supported on the basis rays.
    pub fn canonical_lift(&self, class: &[Rat]) -> QVector {
        let mut a = rat::zeros(self.num_rays);
        for (pos, &j) in self.basis_rays.iter().enumerate() {
            a[j] = class[pos].clone();
        }
        a
    }

    /// `K = -sum D_i`.
    pub fn canonical_class(&self) -> QVector {
        rat::neg(&rat::sum(self.picard_rank, &self.ray_classes()))
    }

    pub fn effective_cone(&self) -> Cone {
        Cone::from_rays(self.picard_rank, &self.ray_classes()).expect("class dimensions agree")
    }

    /// A relation `sum c_i v_i = 0` read as a linear form on classes.
    pub fn relation_form(&self, c: &[Rat]) -> QVector {
        self.basis_rays.iter().map(|&j| c[j].clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat::qvec;

    fn p1xp1() -> Fan {
        Fan::new(
            2,
            vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]],
            vec![vec![0, 2], vec![1, 2], vec![1, 3], vec![0, 3]],
        )
        .unwrap()
    }

    #[test]
    fn product_classes() {
        let cl = ClassLattice::new(&p1xp1()).unwrap();
        assert_eq!(cl.picard_rank, 2);
        assert_eq!(cl.ray_class(0), cl.ray_class(1));
        assert_eq!(cl.ray_class(2), cl.ray_class(3));
        assert_eq!(cl.canonical_class(), rat::scale(&rat::add(&cl.ray_class(0), &cl.ray_class(2)), &rat::rat(-2)));
    }

    #[test]
    fn principal_divisors_have_zero_class() {
        let cl = ClassLattice::new(&p1xp1()).unwrap();
        for row in &cl.relations {
            let r: QVector = row.iter().map(|&x| rat::rat(x)).collect();
            assert!(rat::is_zero(&cl.class_of(&r)));
        }
        let lift = cl.canonical_lift(&qvec(&[2, 3]));
        assert_eq!(cl.class_of(&lift), qvec(&[2, 3]));
    }

    #[test]
    fn singular_fan_is_rejected() {
        // Weighted projective plane P(1,1,2).
        let f = Fan::new(2, vec![vec![1, 0], vec![0, 1], vec![-1, -2]], vec![vec![0, 1], vec![1, 2], vec![0, 2]])
            .unwrap();
        assert!(matches!(ClassLattice::new(&f), Err(Error::Unsupported(_))));
    }
}
