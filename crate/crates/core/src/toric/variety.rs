//! The input variety together with its class-space data.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::{Signed, Zero};

use super::classes::ClassLattice;
use super::fan::Fan;
use super::intersection;
use super::model::{self, Model};
use crate::error::{Error, Result};
use crate::poly::rat::{self, QVector};
use crate::poly::{linalg, Cone};

/// A smooth complete projective toric variety `Z` with its class lattice,
/// effective cone and the hyperplane arrangement spanned by ray classes.
#[derive(Clone, Debug)]
pub struct ToricVariety {
    pub fan: Fan,
    pub classes: ClassLattice,
    pub ray_classes: Vec<QVector>,
    pub eff: Cone,
    pub nef: Cone,
    /// Primitive normals (first nonzero entry positive) of the hyperplanes
    /// spanned by ray classes.
    pub hyperplanes: Vec<QVector>,
    /// A fixed ample class.
    pub ample: QVector,
}

fn normalise_sign(v: QVector) -> QVector {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => rat::neg(&v),
        _ => v,
    }
}

/// Hyperplanes through the origin spanned by `rho - 1` of the given vectors.
pub fn spanned_hyperplanes(rho: usize, vectors: &[QVector]) -> Vec<QVector> {
    let distinct: Vec<QVector> = vectors
        .iter()
        .map(|v| rat::primitive(v))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut out: BTreeSet<QVector> = BTreeSet::new();
    for subset in distinct.iter().cloned().combinations(rho - 1) {
        let ns = linalg::nullspace(&subset, rho);
        if ns.len() == 1 {
            out.insert(normalise_sign(rat::primitive(&ns[0])));
        }
    }
    out.into_iter().collect()
}

impl ToricVariety {
    pub fn new(fan: &Fan) -> Result<ToricVariety> {
        fan.validate()?;
        if !fan.is_complete() {
            return Err(Error::Unsupported("fan is not complete".into()));
        }
        let classes = ClassLattice::new(fan)?;
        let rho = classes.picard_rank;
        let ray_classes = classes.ray_classes();
        let eff = classes.effective_cone();
        let nef = intersection::pullback_region(fan, &classes, fan)?;
        if nef.dim != rho {
            return Err(Error::Unsupported("variety is not projective".into()));
        }
        let hyperplanes = spanned_hyperplanes(rho, &ray_classes);
        let ample = rat::generic_combination(rho, &nef.rays, 0);
        Ok(ToricVariety {
            fan: fan.clone(),
            classes,
            ray_classes,
            eff,
            nef,
            hyperplanes,
            ample,
        })
    }

    pub fn picard_rank(&self) -> usize {
        self.classes.picard_rank
    }

    pub fn num_rays(&self) -> usize {
        self.fan.rays.len()
    }

    pub fn canonical_class(&self) -> QVector {
        self.classes.canonical_class()
    }

    pub fn check_class(&self, theta: &[crate::poly::Rat]) -> Result<()> {
        if theta.len() != self.picard_rank() {
            return Err(Error::DimensionMismatch {
                expected: self.picard_rank(),
                found: theta.len(),
            });
        }
        Ok(())
    }

    /// Ample model of a class (Definition 3.1 via the normal fan of `P_Θ`).
    pub fn ample_model(&self, theta: &[crate::poly::Rat]) -> Result<Model> {
        self.check_class(theta)?;
        if !self.eff.contains(theta) {
            return Err(Error::NotEffective(format!(
                "({}) lies outside the effective cone",
                theta.iter().map(rat::format_rat).join(", ")
            )));
        }
        model::ample_model_of_coeffs(&self.fan, &self.classes.canonical_lift(theta))
    }

    /// Region of classes whose ample model is dominated by `model`.
    pub fn pullback_region(&self, model: &Fan) -> Result<Cone> {
        intersection::pullback_region(&self.fan, &self.classes, model)
    }

    /// Whether `x` lies on none of the arrangement hyperplanes.
    pub fn is_generic(&self, x: &[crate::poly::Rat]) -> bool {
        self.hyperplanes.iter().all(|h| !rat::dot(h, x).is_zero())
    }

    pub fn identity_model(&self) -> Model {
        Model::birational(&self.fan)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat::qvec;

    fn p2() -> Fan {
        Fan::new(2, vec![vec![1, 0], vec![0, 1], vec![-1, -1]], vec![vec![0, 1], vec![1, 2], vec![0, 2]])
            .unwrap()
    }

    #[test]
    fn projective_plane() {
        let z = ToricVariety::new(&p2()).unwrap();
        assert_eq!(z.picard_rank(), 1);
        assert_eq!(z.canonical_class(), qvec(&[-3]));
        assert_eq!(z.hyperplanes, vec![qvec(&[1])]);
        assert_eq!(z.ample_model(&qvec(&[1])).unwrap(), z.identity_model());
        assert!(z.ample_model(&qvec(&[-1])).is_err());
    }

    #[test]
    fn incomplete_fan_is_rejected() {
        let f = Fan::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1]]).unwrap();
        assert!(matches!(ToricVariety::new(&f), Err(Error::Unsupported(_))));
    }
}
