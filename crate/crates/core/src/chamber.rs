//! The Mori chamber (GKZ) decomposition of the effective cone.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use itertools::Itertools;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::rat::{self, QVector, Rat};
use crate::poly::{linalg, Cone};
use crate::toric::{Model, ToricContraction, ToricVariety};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelMapKind {
    BirationalQFactorial,
    BirationalNonQFactorial,
    Fibration,
}

impl ModelMapKind {
    pub fn of(model: &Model) -> ModelMapKind {
        if !model.is_birational() {
            ModelMapKind::Fibration
        } else if model.is_simplicial() {
            ModelMapKind::BirationalQFactorial
        } else {
            ModelMapKind::BirationalNonQFactorial
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WallKind {
    DivisorialContraction,
    SmallContraction,
    MoriFibration,
    FlopWall,
}

/// One cell of the decomposition, labelled by its ample model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chamber {
    pub id: usize,
    pub region: Cone,
    pub dim: usize,
    pub model: Model,
    pub model_map_kind: ModelMapKind,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub variety: ToricVariety,
    pub ambient: Cone,
    /// Sorted by `(dim, region)`; `chambers[i].id == i`.
    pub chambers: Vec<Chamber>,
    /// Hasse diagram of the face relation: `(j, i)` when cell `j` is a facet of cell `i`.
    pub adjacency: Vec<(usize, usize)>,
    /// Whether the relative interior of each cell consists of big classes.
    pub big: Vec<bool>,
    /// Distinct rays of all cells, sorted.
    pub rays: Vec<QVector>,
    /// Increasing indices into `rays` of the rays of each cell.
    pub ray_ids: Vec<Vec<usize>>,
    by_rays: HashMap<Vec<usize>, usize>,
    full_cofaces: Vec<Vec<usize>>,
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut it = b.iter();
    a.iter().all(|x| it.any(|y| y == x))
}

/// Simplicial cones spanned by linearly independent ray classes.
pub(crate) fn basis_cones(z: &ToricVariety) -> Result<Vec<Cone>> {
    let rho = z.picard_rank();
    let distinct: Vec<QVector> = z.ray_classes.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let mut out = Vec::new();
    for subset in distinct.into_iter().combinations(rho) {
        if linalg::rank(&subset, rho) == rho {
            out.push(Cone::from_rays(rho, &subset)?);
        }
    }
    Ok(out)
}

/// A point of the interior of `cone` off every arrangement hyperplane that
/// does not contain the whole cone.
pub(crate) fn generic_relint(z: &ToricVariety, cone: &Cone) -> QVector {
    let relevant: Vec<&QVector> = z
        .hyperplanes
        .iter()
        .filter(|h| cone.rays.iter().any(|r| !rat::dot(h, r).is_zero()))
        .collect();
    for attempt in 0.. {
        let q = rat::generic_combination(cone.ambient_dim, &cone.rays, attempt);
        if relevant.iter().all(|h| !rat::dot(h, &q).is_zero()) {
            return q;
        }
    }
    unreachable!()
}

/// Intersection of the basis cones containing a point off every hyperplane.
fn chamber_at(rho: usize, bases: &[Cone], theta: &[Rat]) -> Result<Cone> {
    let facets: Vec<QVector> = bases
        .iter()
        .filter(|c| c.contains(theta))
        .flat_map(|c| c.facets.iter().cloned())
        .collect();
    Cone::from_hrep(rho, &facets, &[])
}

fn same_hyperplane(a: &[Rat], b: &[Rat]) -> bool {
    let pa = rat::primitive(a);
    let pb = rat::primitive(b);
    pa == pb || pa == rat::neg(&pb)
}

/// Full-dimensional chambers, by walking across interior facets.
fn full_chambers(z: &ToricVariety) -> Result<Vec<Cone>> {
    let rho = z.picard_rank();
    let bases = basis_cones(z)?;
    let start = generic_relint(z, &z.eff);
    let first = chamber_at(rho, &bases, &start)?;
    let mut seen: BTreeSet<Cone> = BTreeSet::new();
    seen.insert(first.clone());
    let mut queue = VecDeque::from([first]);
    while let Some(c) = queue.pop_front() {
        for f in &c.facets {
            let facet = c.face_of(f)?;
            if facet.rays.is_empty() {
                continue;
            }
            let q = generic_relint(z, &facet);
            if z.eff.facets.iter().any(|g| rat::dot(g, &q).is_zero()) {
                continue;
            }
            let hf_min = z
                .hyperplanes
                .iter()
                .filter(|h| !same_hyperplane(h, f))
                .filter_map(|h| {
                    let hf = rat::dot(h, f);
                    (!hf.is_zero()).then(|| rat::dot(h, &q).abs() / hf.abs())
                })
                .min();
            let eps = match hf_min {
                Some(m) => m / Rat::from_integer(2.into()),
                None => Rat::from_integer(1.into()),
            };
            let next_point = rat::sub(&q, &rat::scale(f, &eps));
            let next = chamber_at(rho, &bases, &next_point)?;
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// All faces of the given pointed cones, deduplicated by ray sets.
pub(crate) fn all_faces(cones: &[Cone]) -> Result<Vec<Cone>> {
    let mut keys: BTreeSet<Vec<QVector>> = BTreeSet::new();
    let mut out = Vec::new();
    for c in cones {
        for s in c.face_ray_sets() {
            let rays: Vec<QVector> = s.iter().map(|&i| c.rays[i].clone()).collect();
            if keys.insert(rays.clone()) {
                out.push(Cone::from_rays(c.ambient_dim, &rays)?);
            }
        }
    }
    out.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Label cones by ample models and compute the Hasse diagram.
pub(crate) fn assemble(z: &ToricVariety, cells: Vec<Cone>) -> Result<Decomposition> {
    let mut chambers = Vec::with_capacity(cells.len());
    for (id, region) in cells.into_iter().enumerate() {
        let model = z.ample_model(&region.relative_interior_point())?;
        chambers.push(Chamber {
            id,
            dim: region.dim,
            model_map_kind: ModelMapKind::of(&model),
            model,
            region,
        });
    }
    let rays: Vec<QVector> = chambers
        .iter()
        .flat_map(|c| c.region.rays.iter().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let ray_ids: Vec<Vec<usize>> = chambers
        .iter()
        .map(|c| c.region.rays.iter().map(|r| rays.binary_search(r).expect("collected above")).collect())
        .collect();
    let mut adjacency = Vec::new();
    for i in 0..chambers.len() {
        for j in 0..chambers.len() {
            if chambers[j].dim + 1 == chambers[i].dim && is_subset(&ray_ids[j], &ray_ids[i]) {
                adjacency.push((j, i));
            }
        }
    }
    adjacency.sort();
    let big = chambers
        .iter()
        .map(|c| z.eff.contains_relint(&c.region.relative_interior_point()))
        .collect();
    let rho = z.picard_rank();
    let full_cofaces = (0..chambers.len())
        .map(|j| {
            (0..chambers.len())
                .filter(|&i| chambers[i].dim == rho && is_subset(&ray_ids[j], &ray_ids[i]))
                .collect()
        })
        .collect();
    let by_rays = ray_ids.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
    Ok(Decomposition {
        variety: z.clone(),
        ambient: z.eff.clone(),
        chambers,
        adjacency,
        big,
        rays,
        ray_ids,
        by_rays,
        full_cofaces,
    })
}

/// The Mori chamber decomposition of `Eff(Z)`: the common refinement of
/// the cones spanned by ray classes, with every face labelled by its ample
/// model. Cells with equal models stay distinct.
pub fn mori_decomposition(z: &ToricVariety) -> Result<Decomposition> {
    let chambers = full_chambers(z)?;
    assemble(z, all_faces(&chambers)?)
}

impl Decomposition {
    pub fn picard_rank(&self) -> usize {
        self.variety.picard_rank()
    }

    pub fn full_chambers(&self) -> impl Iterator<Item = &Chamber> {
        let rho = self.picard_rank();
        self.chambers.iter().filter(move |c| c.dim == rho)
    }

    pub fn index_of(&self, region: &Cone) -> Option<usize> {
        self.chambers.iter().position(|c| c.region == *region)
    }

    /// Whether cell `j` is a face of cell `i` (reflexive).
    pub fn is_face(&self, j: usize, i: usize) -> bool {
        self.chambers[j].dim <= self.chambers[i].dim && is_subset(&self.ray_ids[j], &self.ray_ids[i])
    }

    /// The full-dimensional cells having `j` as a face.
    pub fn full_cofaces(&self, j: usize) -> &[usize] {
        &self.full_cofaces[j]
    }

    /// The cell with the given ray indices, if any.
    pub fn cell_with_rays(&self, ids: &[usize]) -> Option<usize> {
        self.by_rays.get(ids).copied()
    }

    /// Cells having `j` as a face, including `j`.
    pub fn cofaces(&self, j: usize) -> Vec<usize> {
        (0..self.chambers.len()).filter(|&i| self.is_face(j, i)).collect()
    }

    pub fn faces(&self, i: usize) -> Vec<usize> {
        (0..self.chambers.len()).filter(|&j| self.is_face(j, i)).collect()
    }

    /// Whether the relative interior of cell `i` consists of big classes.
    pub fn is_big(&self, i: usize) -> bool {
        self.big[i]
    }

    /// The cell whose relative interior contains `theta`.
    pub fn locate(&self, theta: &[Rat]) -> Result<&Chamber> {
        self.variety.check_class(theta)?;
        if !self.ambient.contains(theta) {
            return Err(Error::NotEffective("class lies outside the effective cone".into()));
        }
        self.chambers
            .iter()
            .find(|c| c.region.contains_relint(theta))
            .ok_or_else(|| Error::Internal("decomposition does not cover an effective class".into()))
    }

    /// The contraction `X_i -> X_j` for a face `j` of `i`.
    pub fn contraction_between(&self, i: usize, j: usize) -> Result<ToricContraction> {
        if i >= self.chambers.len() || j >= self.chambers.len() || !self.is_face(j, i) {
            return Err(Error::NotAdjacent(i, j));
        }
        ToricContraction::between(&self.chambers[i].model, &self.chambers[j].model)
    }

    /// Lemma 3.4 taxonomy for a codimension-one cell.
    pub fn classify_wall(&self, wall: usize) -> Result<WallKind> {
        let rho = self.picard_rank();
        let w = self.chambers.get(wall).ok_or(Error::NotAWall(wall))?;
        if w.dim + 1 != rho {
            return Err(Error::NotAWall(wall));
        }
        if !self.is_big(wall) {
            return Ok(WallKind::MoriFibration);
        }
        let sides: Vec<usize> = self
            .adjacency
            .iter()
            .filter(|(j, _)| *j == wall)
            .map(|&(_, i)| i)
            .collect();
        if sides.len() != 2 {
            return Err(Error::Internal(format!(
                "interior wall {wall} bounds {} chambers",
                sides.len()
            )));
        }
        let (a, b) = (&self.chambers[sides[0]].model, &self.chambers[sides[1]].model);
        if *a == w.model || *b == w.model {
            Ok(WallKind::DivisorialContraction)
        } else if a.fan.ray_set() == b.fan.ray_set() {
            Ok(WallKind::FlopWall)
        } else if !w.model.is_simplicial() {
            Ok(WallKind::SmallContraction)
        } else {
            Err(Error::Internal(format!("wall {wall} fits no case of the taxonomy")))
        }
    }

    /// Largest dimension of a face of `i` whose model is `model`.
    pub fn model_locus_dim(&self, i: usize, model: &Model) -> Option<usize> {
        self.faces(i)
            .into_iter()
            .filter(|&j| self.chambers[j].model == *model)
            .map(|j| self.chambers[j].dim)
            .max()
    }

    /// Theorem 3.3 (4): for every full chamber `i` and every model `X_j` on a
    /// big face of it, `rho(X_i / X_j) = dim C_i - dim (C_j ∩ C_i)`.
    /// Returns the violations as readable strings.
    pub fn check_relative_picard(&self) -> Result<Vec<String>> {
        let mut bad = Vec::new();
        for c in self.full_chambers() {
            let mut models: BTreeSet<&Model> = BTreeSet::new();
            for j in self.faces(c.id) {
                if self.is_big(j) {
                    models.insert(&self.chambers[j].model);
                }
            }
            for m in models {
                let locus = self.model_locus_dim(c.id, m).expect("model occurs on a face");
                let contraction = ToricContraction::between(&c.model, m)?;
                if contraction.relative_picard != c.dim - locus {
                    bad.push(format!(
                        "chamber {} -> model {}: relative Picard {} but dimension drop {}",
                        c.id,
                        m.fingerprint(),
                        contraction.relative_picard,
                        c.dim - locus
                    ));
                }
            }
        }
        Ok(bad)
    }

    /// Theorem 3.3 (3): full chambers carry exactly the Q-factorial
    /// birational models, and each full chamber equals the pullback region of
    /// its model.
    pub fn check_q_factorial(&self) -> Result<Vec<String>> {
        let mut bad = Vec::new();
        let mut full_models: BTreeMap<&Model, usize> = BTreeMap::new();
        for c in self.full_chambers() {
            if c.model_map_kind != ModelMapKind::BirationalQFactorial {
                bad.push(format!("full chamber {} has a model of kind {:?}", c.id, c.model_map_kind));
                continue;
            }
            if full_models.insert(&c.model, c.id).is_some() {
                bad.push(format!("model of chamber {} labels two full chambers", c.id));
            }
            let region = self.variety.pullback_region(&c.model.fan)?;
            if region != c.region {
                bad.push(format!("chamber {} differs from the pullback region of its model", c.id));
            }
        }
        for c in &self.chambers {
            if c.model_map_kind == ModelMapKind::BirationalQFactorial && self.is_big(c.id) {
                match full_models.get(&c.model) {
                    Some(&i) if self.is_face(c.id, i) => {}
                    _ => bad.push(format!("cell {} has a Q-factorial model outside its chamber", c.id)),
                }
            }
        }
        Ok(bad)
    }
}
