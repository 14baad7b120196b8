//! Toric models of a fixed fan: ample models of divisor classes and the
//! contractions between them.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::fan::Fan;
use crate::error::{Error, Result};
use crate::poly::rat::{self, QVector, Rat};
use crate::poly::{intmat, linalg, Cone, Polytope};

/// A toric variety whose lattice is a quotient of the ambient `N = Z^d`.
///
/// `projection` is the quotient map `N -> Z^k`; its rows are the canonical
/// (Hermite) basis of `M ∩ U` for the subspace `U` of `M_R` it represents, so
/// two models are the same variety over the ambient lattice exactly when they
/// compare equal. Birational models have `k = d` and the identity projection.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Model {
    pub ambient_rank: usize,
    pub projection: Vec<Vec<i64>>,
    pub fan: Fan,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContractionKind {
    Fibration,
    Divisorial,
    Small,
    Identity,
}

/// A toric morphism `source -> target` induced by a lattice map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToricContraction {
    pub source: Model,
    pub target: Model,
    /// `k_target x k_source`.
    pub lattice_map: Vec<Vec<i64>>,
    pub kind: ContractionKind,
    pub relative_picard: usize,
}

fn to_i64_matrix(m: &[Vec<BigInt>]) -> Result<Vec<Vec<i64>>> {
    intmat::to_i64(&m.to_vec()).ok_or_else(|| Error::Unsupported("integer entries overflow i64".into()))
}

fn identity_i64(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn mat_vec_i64(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn primitive_i64(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
    if g == 0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

/// `P_a = { m : <m, v_i> >= -a_i }`.
pub fn divisor_polytope(fan: &Fan, coeffs: &[Rat]) -> Result<Polytope> {
    if coeffs.len() != fan.rays.len() {
        return Err(Error::DimensionMismatch {
            expected: fan.rays.len(),
            found: coeffs.len(),
        });
    }
    let hs: Vec<_> = (0..fan.rays.len())
        .map(|i| (fan.ray_q(i), -coeffs[i].clone()))
        .collect();
    Polytope::from_hrep(fan.lattice_rank, &hs, &[])
}

/// Normal fan of a nonempty polytope `P ⊂ M_R`, as a model over `N`.
pub fn normal_fan_model(fan: &Fan, coeffs: &[Rat], p: &Polytope) -> Result<Model> {
    let d = fan.lattice_rank;
    if p.is_empty() {
        return Err(Error::EmptyInput("normal fan of an empty polytope".into()));
    }
    let dirs: Vec<QVector> = p.vertices.iter().map(|v| rat::sub(v, &p.vertices[0])).collect();
    let proj_big = intmat::saturated_basis(&dirs, d);
    let projection = to_i64_matrix(&proj_big)?;
    let k = projection.len();
    if k == 0 {
        return Ok(Model {
            ambient_rank: d,
            projection,
            fan: Fan::point(),
        });
    }
    // Facet i is tight along a facet of P iff it is not tight on all of P
    // and its tight set on P has dimension dim P - 1.
    let tight_at = |i: usize, x: &QVector| rat::dot(&fan.ray_q(i), x) == -coeffs[i].clone();
    let mut ray_of: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
    for i in 0..fan.rays.len() {
        let image = mat_vec_i64(&projection, &fan.rays[i]);
        if image.iter().all(|&x| x == 0) {
            continue;
        }
        let face: Vec<QVector> = p.vertices.iter().filter(|v| tight_at(i, v)).cloned().collect();
        if face.is_empty() {
            continue;
        }
        let fp = Polytope::from_vertices(d, &face)?;
        if fp.dim == p.dim - 1 {
            ray_of.insert(i, primitive_i64(&image));
        }
    }
    let rays: Vec<Vec<i64>> = ray_of.values().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let mut cones: BTreeSet<Vec<usize>> = BTreeSet::new();
    for v in &p.vertices {
        let mut c: BTreeSet<usize> = BTreeSet::new();
        for (&i, r) in &ray_of {
            if tight_at(i, v) {
                c.insert(rays.binary_search(r).expect("ray listed"));
            }
        }
        cones.insert(c.into_iter().collect());
    }
    let fan_out = Fan {
        lattice_rank: k,
        rays,
        max_cones: cones.into_iter().collect(),
    };
    Ok(Model {
        ambient_rank: d,
        projection,
        fan: fan_out,
    })
}

impl Model {
    pub fn birational(fan: &Fan) -> Model {
        Model {
            ambient_rank: fan.lattice_rank,
            projection: identity_i64(fan.lattice_rank),
            fan: fan.normalized(),
        }
    }

    pub fn dim(&self) -> usize {
        self.projection.len()
    }

    pub fn is_birational(&self) -> bool {
        self.dim() == self.ambient_rank
    }

    pub fn num_rays(&self) -> usize {
        self.fan.rays.len()
    }

    pub fn is_simplicial(&self) -> bool {
        self.fan.is_simplicial()
    }

    /// Short hex digest of the canonical JSON form.
    pub fn fingerprint(&self) -> String {
        let json = serde_json::to_string(self).expect("model serialises");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().take(6).map(|b| format!("{b:02x}")).collect()
    }

    /// Rank of the group of Cartier divisors modulo linear equivalence, from
    /// the space of conewise-linear functions on the fan.
    pub fn picard_rank(&self) -> usize {
        let k = self.dim();
        let cones = &self.fan.max_cones;
        let nvars = k * cones.len();
        if nvars == 0 {
            return 0;
        }
        let mut rows: Vec<QVector> = Vec::new();
        for a in 0..cones.len() {
            for b in a + 1..cones.len() {
                for i in cones[a].iter().filter(|i| cones[b].contains(i)) {
                    let v = self.fan.ray_q(*i);
                    let mut row = rat::zeros(nvars);
                    for j in 0..k {
                        row[a * k + j] = v[j].clone();
                        row[b * k + j] = -v[j].clone();
                    }
                    rows.push(row);
                }
            }
        }
        let functions = nvars - linalg::rank(&rows, nvars);
        functions - k
    }

    /// Image in this model's lattice of an ambient lattice vector.
    pub fn project(&self, v: &[i64]) -> Vec<i64> {
        mat_vec_i64(&self.projection, v)
    }
}

/// Ample model of the divisor with ray coefficients `coeffs` on `fan`.
pub fn ample_model_of_coeffs(fan: &Fan, coeffs: &[Rat]) -> Result<Model> {
    let p = divisor_polytope(fan, coeffs)?;
    if p.is_empty() {
        return Err(Error::NotEffective(format!(
            "divisor polytope of {} is empty",
            coeffs.iter().map(rat::format_rat).collect::<Vec<_>>().join(",")
        )));
    }
    normal_fan_model(fan, coeffs, &p)
}

impl ToricContraction {
    /// The morphism `source -> target` compatible with the ambient projections.
    pub fn between(source: &Model, target: &Model) -> Result<ToricContraction> {
        if source.ambient_rank != target.ambient_rank {
            return Err(Error::InvalidContraction("models over different lattices".into()));
        }
        let ks = source.dim();
        let kt = target.dim();
        // Solve A * Q_s = Q_t row by row.
        let qs_t: Vec<QVector> = linalg::transpose(
            &source.projection.iter().map(|r| rat::from_i64(r)).collect::<Vec<_>>(),
            source.ambient_rank,
        );
        let mut a: Vec<Vec<i64>> = Vec::with_capacity(kt);
        for row in &target.projection {
            let b = rat::from_i64(row);
            let x = linalg::solve(&qs_t, &b, ks).ok_or_else(|| {
                Error::InvalidContraction("target lattice is not a quotient of the source".into())
            })?;
            a.push(rat::to_i64(&x).ok_or_else(|| {
                Error::InvalidContraction("lattice map is not integral".into())
            })?);
        }
        let tcones = target.fan.cones();
        for c in 0..source.fan.max_cones.len() {
            let imgs: Vec<QVector> = source.fan.max_cones[c]
                .iter()
                .map(|&i| rat::from_i64(&mat_vec_i64(&a, &source.fan.rays[i])))
                .collect();
            let fits = tcones.iter().any(|t| imgs.iter().all(|x| t.contains(x)));
            if !fits {
                return Err(Error::InvalidContraction(format!(
                    "cone {c} of the source maps into no cone of the target"
                )));
            }
        }
        let kind = if kt < ks {
            ContractionKind::Fibration
        } else if source == target {
            ContractionKind::Identity
        } else if target.num_rays() < source.num_rays() {
            ContractionKind::Divisorial
        } else {
            ContractionKind::Small
        };
        let (rs, rt) = (source.picard_rank(), target.picard_rank());
        if rt > rs {
            return Err(Error::InvalidContraction("target has larger Picard rank".into()));
        }
        Ok(ToricContraction {
            source: source.clone(),
            target: target.clone(),
            lattice_map: a,
            kind,
            relative_picard: rs - rt,
        })
    }

    /// Whether the orbit curve of the wall with rays `wall` is contracted.
    pub fn contracts(&self, wall: &[usize]) -> bool {
        let sum: Vec<i64> = wall.iter().fold(vec![0; self.source.dim()], |acc, &i| {
            acc.iter().zip(&self.source.fan.rays[i]).map(|(x, y)| x + y).collect()
        });
        let image = rat::from_i64(&mat_vec_i64(&self.lattice_map, &sum));
        self.target
            .fan
            .cones()
            .iter()
            .any(|t| t.is_full_dimensional() && t.contains_relint(&image))
    }
}

/// Smallest cone of `fan` containing `x`, as a cone.
pub fn carrier(fan: &Fan, x: &[Rat]) -> Option<Cone> {
    fan.cones()
        .into_iter()
        .filter(|c| c.contains(x))
        .flat_map(|c| c.faces().unwrap_or_default())
        .filter(|f| f.contains_relint(x))
        .min_by_key(|f| f.dim)
}
