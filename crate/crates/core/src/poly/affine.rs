//! Rational affine subspaces given by a base point and a direction basis.

use serde::{Deserialize, Serialize};

use super::linalg;
use super::rat::{self, QVector, Rat};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineSubspace {
    #[serde(with = "crate::io::serde_rat::vec")]
    pub base_point: QVector,
    #[serde(with = "crate::io::serde_rat::matrix")]
    pub direction_basis: Vec<QVector>,
}

impl AffineSubspace {
    pub fn new(base_point: QVector, direction_basis: Vec<QVector>) -> Result<AffineSubspace> {
        let n = base_point.len();
        if let Some(d) = direction_basis.iter().find(|d| d.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: d.len(),
            });
        }
        if linalg::rank(&direction_basis, n) != direction_basis.len() {
            return Err(Error::Internal("direction basis is not linearly independent".into()));
        }
        Ok(AffineSubspace {
            base_point,
            direction_basis,
        })
    }

    pub fn dim(&self) -> usize {
        self.direction_basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.base_point.len()
    }

    /// The point with local coordinates `y`.
    pub fn point(&self, y: &[Rat]) -> QVector {
        let mut x = self.base_point.clone();
        for (d, yi) in self.direction_basis.iter().zip(y) {
            x = rat::add(&x, &rat::scale(d, yi));
        }
        x
    }

    /// Pull back the affine functional `x -> normal . x - offset` to local
    /// coordinates, returning `(normal', offset')` with the same meaning.
    pub fn pull_back(&self, normal: &[Rat], offset: &Rat) -> (QVector, Rat) {
        let n: QVector = self
            .direction_basis
            .iter()
            .map(|d| rat::dot(normal, d))
            .collect();
        (n, offset - rat::dot(normal, &self.base_point))
    }

    /// Local coordinates of `x`, if it lies on the subspace.
    pub fn coordinates(&self, x: &[Rat]) -> Option<QVector> {
        let n = self.ambient_dim();
        let cols = linalg::transpose(&self.direction_basis, n);
        let rhs = rat::sub(x, &self.base_point);
        let y = linalg::solve(&cols, &rhs, self.dim())?;
        (self.point(&y) == x).then_some(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat::qvec;

    #[test]
    fn pull_back_matches_evaluation() {
        let a = AffineSubspace::new(qvec(&[1, 1, 1]), vec![qvec(&[1, 0, -1]), qvec(&[0, 1, -1])])
            .unwrap();
        let (n, o) = a.pull_back(&qvec(&[2, 3, 5]), &rat::rat(4));
        let y = qvec(&[2, -1]);
        let x = a.point(&y);
        assert_eq!(rat::dot(&n, &y) - o, rat::dot(&qvec(&[2, 3, 5]), &x) - rat::rat(4));
        assert_eq!(a.coordinates(&x), Some(y));
        assert_eq!(a.coordinates(&qvec(&[0, 0, 0])), None);
    }

    #[test]
    fn dependent_directions_are_rejected() {
        assert!(AffineSubspace::new(qvec(&[0, 0]), vec![qvec(&[1, 1]), qvec(&[2, 2])]).is_err());
    }
}
