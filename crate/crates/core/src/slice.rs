//! Generic two-dimensional slices of the chamber decomposition and the Mori
//! fibre spaces they start and end on.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chamber::Decomposition;
use crate::error::{Error, Result};
use crate::poly::rat::{self, QVector, Rat};
use crate::poly::cone::extreme_rays;
use crate::poly::polytope::cyclic_order;
use crate::poly::{intmat, linalg, AffineSubspace, Cone, Halfspace};
use crate::toric::intersection::check_mori_fibre_space;
use crate::toric::{Fan, Model, ToricContraction};

/// `total -> base`: relative Picard number one, `-K` relatively ample.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoriFibreSpace {
    pub total: Model,
    pub base: Model,
    pub contraction: ToricContraction,
}

impl MoriFibreSpace {
    pub fn new(total: &Model, base: &Model) -> Result<MoriFibreSpace> {
        let contraction = check_mori_fibre_space(total, base)?;
        Ok(MoriFibreSpace {
            total: total.clone(),
            base: base.clone(),
            contraction,
        })
    }
}

/// A Mori fibre space as given by a user: the base fan in its own lattice,
/// the surjection from the ambient lattice onto it, and optionally the fan
/// of the total space when the base alone is ambiguous.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MfsSpec {
    pub base_fan: Fan,
    pub lattice_map: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_fan: Option<Fan>,
}

/// Rewrite a user base into the canonical coordinates used by models.
pub fn canonical_base(ambient_rank: usize, spec: &MfsSpec) -> Result<Model> {
    let k = spec.lattice_map.len();
    if spec.base_fan.lattice_rank != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: spec.base_fan.lattice_rank,
        });
    }
    if let Some(r) = spec.lattice_map.iter().find(|r| r.len() != ambient_rank) {
        return Err(Error::DimensionMismatch {
            expected: ambient_rank,
            found: r.len(),
        });
    }
    let rows: Vec<QVector> = spec.lattice_map.iter().map(|r| rat::from_i64(r)).collect();
    if linalg::rank(&rows, ambient_rank) != k {
        return Err(Error::InvalidContraction("lattice map does not have full rank".into()));
    }
    let q = intmat::saturated_basis(&rows, ambient_rank);
    // Q = U * A with U unimodular iff the map is onto Z^k.
    let a_t = linalg::transpose(&rows, ambient_rank);
    let mut u: Vec<Vec<i64>> = Vec::with_capacity(k);
    for row in &q {
        let x = linalg::solve(&a_t, &rat::from_int(row), k)
            .ok_or_else(|| Error::Internal("saturation does not contain the map".into()))?;
        u.push(
            rat::to_i64(&x)
                .filter(|_| x.iter().all(|v| v.is_integer()))
                .ok_or_else(|| Error::InvalidContraction("lattice map is not surjective".into()))?,
        );
    }
    let projection = intmat::to_i64(&q).ok_or_else(|| Error::Unsupported("entries overflow".into()))?;
    let rays: Vec<Vec<i64>> = spec
        .base_fan
        .rays
        .iter()
        .map(|r| u.iter().map(|row| row.iter().zip(r).map(|(a, b)| a * b).sum()).collect())
        .collect();
    let fan = Fan::new(k, rays, spec.base_fan.max_cones.clone())?;
    Ok(Model {
        ambient_rank,
        projection,
        fan: fan.normalized(),
    })
}

/// Boundary cells of codimension one carrying a Mori fibre space.
pub fn mfs_cells(decomp: &Decomposition) -> Vec<(usize, MoriFibreSpace)> {
    let rho = decomp.picard_rank();
    let mut out = Vec::new();
    for c in &decomp.chambers {
        if c.dim + 1 != rho || decomp.is_big(c.id) {
            continue;
        }
        let full: Vec<usize> = decomp.cofaces(c.id).into_iter().filter(|&i| decomp.chambers[i].dim == rho).collect();
        if let [i] = full[..] {
            if let Ok(m) = MoriFibreSpace::new(&decomp.chambers[i].model, &c.model) {
                out.push((c.id, m));
            }
        }
    }
    out
}

/// All Mori fibre spaces visible in the decomposition.
pub fn discover_mfs(decomp: &Decomposition) -> Vec<MoriFibreSpace> {
    mfs_cells(decomp).into_iter().map(|(_, m)| m).collect()
}

/// The boundary cell carrying `mfs`.
pub fn mfs_cell(decomp: &Decomposition, mfs: &MoriFibreSpace) -> Result<usize> {
    let rho = decomp.picard_rank();
    decomp
        .chambers
        .iter()
        .filter(|c| c.dim + 1 == rho && c.model == mfs.base && !decomp.is_big(c.id))
        .map(|c| c.id)
        .find(|&w| {
            decomp
                .cofaces(w)
                .into_iter()
                .any(|i| decomp.chambers[i].dim == rho && decomp.chambers[i].model == mfs.total)
        })
        .ok_or_else(|| {
            Error::NotMoriFibreSpace("no boundary wall of the effective cone carries this fibration".into())
        })
}

/// Match a user specification against the Mori fibre spaces of `decomp`.
pub fn recognize(decomp: &Decomposition, spec: &MfsSpec) -> Result<MoriFibreSpace> {
    let d = decomp.variety.fan.lattice_rank;
    let base = canonical_base(d, spec)?;
    let total = match &spec.total_fan {
        Some(f) => {
            f.validate()?;
            Some(Model::birational(f))
        }
        None => None,
    };
    let matches: Vec<MoriFibreSpace> = discover_mfs(decomp)
        .into_iter()
        .filter(|m| m.base == base && total.as_ref().is_none_or(|t| *t == m.total))
        .collect();
    match matches.len() {
        0 => {
            if let Some(t) = &total {
                // Report why the explicit pair fails, if it does.
                MoriFibreSpace::new(t, &base)?;
            }
            Err(Error::NotMoriFibreSpace(
                "the base is not the base of a Mori fibre space model of the input".into(),
            ))
        }
        1 => Ok(matches.into_iter().next().expect("one match")),
        n => Err(Error::Unsupported(format!(
            "{n} Mori fibre spaces have this base; give total_fan to choose one"
        ))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceOptions {
    /// Multiplier for the window size; at least one.
    pub window_scale: u32,
    pub max_retries: usize,
    /// Slice parallel to a section of the effective cone through the source
    /// (Picard rank three only), to walk the whole boundary.
    pub loop_mode: bool,
}

impl Default for SliceOptions {
    fn default() -> Self {
        SliceOptions {
            window_scale: 1,
            max_retries: 12,
            loop_mode: false,
        }
    }
}

/// The intersection of one ambient cell with the slice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceCell {
    pub parent: usize,
    pub dim: usize,
    /// Counter-clockwise for polygons, sorted otherwise; clipped to the window.
    pub vertices: Vec<QVector>,
}

#[derive(Clone, Debug)]
pub struct SliceContext {
    pub decomposition: Decomposition,
    pub plane: AffineSubspace,
    /// Counter-clockwise vertices of the bounding triangle.
    pub window: Vec<QVector>,
    pub eff_region: Vec<QVector>,
    pub cells: Vec<SliceCell>,
    pub seed: u64,
    pub attempts: usize,
    pub options: SliceOptions,
    pub src_cell: usize,
    pub dst_cell: usize,
}

fn lift(n: &[Rat], o: &Rat) -> QVector {
    let mut v = vec![-o.clone()];
    v.extend(n.iter().cloned());
    v
}

pub(crate) fn pulled_back(plane: &AffineSubspace, cone: &Cone) -> (Vec<Halfspace>, Vec<Halfspace>) {
    let zero = Rat::zero();
    let ineqs = cone.facets.iter().map(|f| plane.pull_back(f, &zero)).collect();
    let eqs = cone.equations.iter().map(|e| plane.pull_back(e, &zero)).collect();
    (ineqs, eqs)
}

/// Rays of `{(t, y) : t >= 0, t base + D y in cone}` and the inequalities
/// cutting it out; the rays with `t > 0` give the vertices of
/// `plane ∩ cone`.
fn homogenized(plane: &AffineSubspace, cone: &Cone) -> Result<(Vec<QVector>, Vec<QVector>)> {
    let e = plane.dim();
    let (ineqs, eqs) = pulled_back(plane, cone);
    let mut hi: Vec<QVector> = ineqs.iter().map(|(n, o)| lift(n, o)).collect();
    hi.push(rat::unit(e + 1, 0));
    let he: Vec<QVector> = eqs.iter().map(|(n, o)| lift(n, o)).collect();
    Ok((extreme_rays(e + 1, &hi, &he)?, hi))
}

/// Ray index sets of all faces of a cone with `n` rays, from the rays on
/// each of a set of valid inequalities including the facets.
fn face_sets(n: usize, tight: &[BTreeSet<usize>]) -> BTreeSet<BTreeSet<usize>> {
    let all: BTreeSet<usize> = (0..n).collect();
    let mut faces = BTreeSet::from([all.clone()]);
    let mut frontier = vec![all];
    while let Some(face) = frontier.pop() {
        for t in tight {
            let sub: BTreeSet<usize> = face.intersection(t).copied().collect();
            if sub != face && faces.insert(sub.clone()) {
                frontier.push(sub);
            }
        }
    }
    faces
}

fn dehomogenize(r: &[Rat]) -> QVector {
    r[1..].iter().map(|x| x / &r[0]).collect()
}

fn random_offset(rng: &mut ChaCha8Rng, gens: &[QVector], dim: usize, denom: &BigInt) -> QVector {
    gens.iter().fold(rat::zeros(dim), |acc, g| {
        let r: i64 = rng.gen_range(-100..=100);
        rat::add(&acc, &rat::scale(g, &Rat::new(r.into(), denom.clone())))
    })
}

struct Candidate {
    plane: AffineSubspace,
    /// Dimension of the section of each cell, `-1` when empty.
    dims: Vec<isize>,
    /// Vertices of the sections of the full chambers.
    points: Vec<QVector>,
}

/// Sections of all cells, read off the faces of the polygons cut from the
/// full chambers, and the transversality check: a face of dimension `k` of
/// such a polygon must lie in the relative interior of a cell of dimension
/// `k + rho - e`.
fn check_generic(decomp: &Decomposition, plane: &AffineSubspace, src: usize, dst: usize) -> std::result::Result<Candidate, String> {
    let rho = decomp.picard_rank() as isize;
    let e = plane.dim() as isize;
    let mut dims = vec![-1isize; decomp.chambers.len()];
    let mut points = Vec::new();
    // The met chambers tile a convex polygon, so walking across the edges
    // from the source wall reaches all of them.
    let mut seen: BTreeSet<usize> = decomp.full_cofaces(src).iter().copied().collect();
    let mut queue: Vec<usize> = seen.iter().copied().collect();
    while let Some(id) = queue.pop() {
        let c = &decomp.chambers[id];
        let (hom_rays, hom_ineqs) = homogenized(plane, &c.region).map_err(|err| err.to_string())?;
        if !hom_rays.iter().any(|r| r[0].is_positive()) {
            continue;
        }
        points.extend(hom_rays.iter().filter(|r| r[0].is_positive()).map(|r| dehomogenize(r)));
        // Which chamber rays lie on which chamber facets.
        let incidence: Vec<Vec<bool>> = c
            .region
            .facets
            .iter()
            .map(|f| c.region.rays.iter().map(|r| rat::dot(f, r).is_zero()).collect())
            .collect();
        let on: Vec<BTreeSet<usize>> = hom_ineqs
            .iter()
            .map(|f| (0..hom_rays.len()).filter(|&i| rat::dot(f, &hom_rays[i]).is_zero()).collect())
            .collect();
        for face in face_sets(hom_rays.len(), &on) {
            if !face.iter().any(|&i| hom_rays[i][0].is_positive()) {
                continue;
            }
            let k = if face.len() <= 2 {
                face.len() as isize - 1
            } else {
                let rays: Vec<QVector> = face.iter().map(|&i| hom_rays[i].clone()).collect();
                linalg::rank(&rays, e as usize + 1) as isize - 1
            };
            // The facets of the chamber containing the face; the first
            // inequalities of the homogenization are the pulled-back facets.
            let tight: Vec<usize> = (0..c.region.facets.len()).filter(|&f| face.is_subset(&on[f])).collect();
            let cell_rays: Vec<usize> = (0..c.region.rays.len())
                .filter(|&r| tight.iter().all(|&f| incidence[f][r]))
                .map(|r| decomp.ray_ids[c.id][r])
                .collect();
            let cell = decomp
                .cell_with_rays(&cell_rays)
                .ok_or_else(|| format!("face of chamber {} is not a cell", c.id))?;
            let s = decomp.chambers[cell].dim as isize;
            if k + rho - e != s {
                return Err(format!("plane meets cell {cell} of dimension {s} in dimension {k}"));
            }
            dims[cell] = dims[cell].max(k);
            if k == e - 1 {
                queue.extend(decomp.full_cofaces(cell).iter().filter(|&&i| seen.insert(i)));
            }
        }
    }
    for (name, c) in [("source", src), ("target", dst)] {
        if dims[c] != e - 1 {
            return Err(format!("the {name} cell is not cut in a segment"));
        }
    }
    Ok(Candidate {
        plane: plane.clone(),
        dims,
        points,
    })
}

fn parent_set(c: &Candidate) -> BTreeSet<usize> {
    c.dims.iter().enumerate().filter(|(_, d)| **d >= 0).map(|(i, _)| i).collect()
}

/// Generic plane through points of the source and target cells and of the
/// big cone (Lemma 4.1), perturbed by a seeded rational offset.
pub fn build_slice(
    decomp: &Decomposition,
    src: &MoriFibreSpace,
    dst: &MoriFibreSpace,
    seed: u64,
    options: &SliceOptions,
) -> Result<SliceContext> {
    let src_cell = mfs_cell(decomp, src)?;
    let dst_cell = mfs_cell(decomp, dst)?;
    let rho = decomp.picard_rank();
    if options.window_scale == 0 {
        return Err(Error::Unsupported("window scale must be positive".into()));
    }
    if rho < 2 {
        return Err(Error::Unsupported("Picard rank one has a single Mori fibre space".into()));
    }
    if rho == 2 {
        let plane = AffineSubspace::new(rat::zeros(rho), (0..rho).map(|i| rat::unit(rho, i)).collect())?;
        let cand = check_generic(decomp, &plane, src_cell, dst_cell).map_err(Error::Internal)?;
        return finish(decomp, cand, seed, 0, options, src_cell, dst_cell);
    }
    if options.loop_mode && (rho != 3 || src_cell != dst_cell) {
        return Err(Error::Unsupported("loop mode needs Picard rank three and equal ends".into()));
    }
    let normal_sum = rat::sum(rho, &decomp.ambient.facets);
    let section_dirs = linalg::nullspace(&[normal_sum], rho);
    let make_plane = |ps: &QVector, pd: &QVector, pb: &QVector| -> Option<AffineSubspace> {
        // Every cell is a cone, so the plane may be scaled by a positive
        // factor and its directions rescaled: integer data keeps the
        // arithmetic small.
        let int = |v: &QVector| rat::primitive(v);
        if options.loop_mode {
            AffineSubspace::new(int(ps), section_dirs.iter().map(int).collect()).ok()
        } else {
            AffineSubspace::new(int(pb), vec![int(&rat::sub(ps, pb)), int(&rat::sub(pd, pb))]).ok()
        }
    };
    // The unperturbed plane depends only on the input, so that every seed
    // sees the same cells.
    let mut last = String::from("no attempt made");
    let mut found = None;
    for b in 0..options.max_retries {
        // Distinct weights for the three points: equal weights put the
        // plane through a common face when both walls share a hyperplane.
        let cell_point = |c: usize, k: usize| rat::generic_combination(rho, &decomp.chambers[c].region.rays, 3 * b + k);
        let (p_src, p_dst) = (cell_point(src_cell, 0), cell_point(dst_cell, 1));
        let p_big = rat::generic_combination(rho, &decomp.ambient.rays, 3 * b + 2);
        let big_cell = match decomp.locate(&p_big) {
            Ok(c) if c.dim == rho => c.id,
            _ => {
                last = "base point of the big cone is not in a chamber interior".into();
                continue;
            }
        };
        let Some(plane) = make_plane(&p_src, &p_dst, &p_big) else {
            last = "base points are collinear".into();
            continue;
        };
        match check_generic(decomp, &plane, src_cell, dst_cell) {
            Ok(c) => {
                found = Some((p_src, p_dst, p_big, big_cell, c));
                break;
            }
            Err(why) => last = format!("base plane: {why}"),
        }
    }
    let Some((p_src, p_dst, p_big, big_cell, base)) = found else {
        return Err(Error::RetryExhausted {
            attempts: options.max_retries,
            condition: last,
        });
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let units: Vec<QVector> = (0..rho).map(|i| rat::unit(rho, i)).collect();
    for attempt in 0..options.max_retries {
        let denom = BigInt::from(10u64.pow(6)) * BigInt::from(10u64).pow(attempt as u32);
        let ps = rat::add(&p_src, &random_offset(&mut rng, &decomp.chambers[src_cell].region.rays, rho, &denom));
        let pd = rat::add(&p_dst, &random_offset(&mut rng, &decomp.chambers[dst_cell].region.rays, rho, &denom));
        let pb = rat::add(&p_big, &random_offset(&mut rng, &units, rho, &denom));
        if !decomp.chambers[src_cell].region.contains_relint(&ps)
            || !decomp.chambers[dst_cell].region.contains_relint(&pd)
            || !decomp.chambers[big_cell].region.contains_relint(&pb)
        {
            last = "perturbation left a base cell".into();
            continue;
        }
        let Some(plane) = make_plane(&ps, &pd, &pb) else {
            last = "perturbed points are collinear".into();
            continue;
        };
        match check_generic(decomp, &plane, src_cell, dst_cell) {
            Ok(c) if parent_set(&c) == parent_set(&base) => {
                return finish(decomp, c, seed, attempt + 1, options, src_cell, dst_cell);
            }
            Ok(_) => last = "perturbation changed the cells met by the plane".into(),
            Err(why) => last = format!("perturbed plane: {why}"),
        }
    }
    Err(Error::RetryExhausted {
        attempts: options.max_retries,
        condition: last,
    })
}

fn finish(
    decomp: &Decomposition,
    cand: Candidate,
    seed: u64,
    attempts: usize,
    options: &SliceOptions,
    src_cell: usize,
    dst_cell: usize,
) -> Result<SliceContext> {
    let mut extent = Rat::one();
    for x in cand.points.iter().flatten() {
        if x.abs() > extent {
            extent = x.abs();
        }
    }
    let w = (extent * Rat::from_integer(2.into()) + Rat::one()) * Rat::from_integer(options.window_scale.into());
    let window = window_polygon(&w);
    let mut cells = Vec::new();
    let rho = decomp.picard_rank();
    let met: Vec<usize> = (0..cand.dims.len()).filter(|&i| cand.dims[i] >= 0).collect();
    let mut full: HashMap<usize, Vec<QVector>> = HashMap::new();
    // Vertices of the clipped chambers, keyed by the smallest cell containing them.
    let mut at: HashMap<usize, BTreeSet<QVector>> = HashMap::new();
    for &j in met.iter().filter(|&&i| decomp.chambers[i].dim == rho) {
        let region = &decomp.chambers[j].region;
        let (ineqs, _) = pulled_back(&cand.plane, region);
        let polygon = clip(&cand.plane, region, &window);
        for v in &polygon {
            let tight: Vec<&QVector> = region
                .facets
                .iter()
                .zip(&ineqs)
                .filter(|(_, (n, o))| rat::dot(n, v) == *o)
                .map(|(f, _)| f)
                .collect();
            let rays: Vec<usize> = (0..region.rays.len())
                .filter(|&r| tight.iter().all(|f| rat::dot(f, &region.rays[r]).is_zero()))
                .map(|r| decomp.ray_ids[j][r])
                .collect();
            let c = decomp
                .cell_with_rays(&rays)
                .filter(|&c| cand.dims[c] >= 0)
                .ok_or_else(|| Error::Internal("slice vertex outside the met cells".into()))?;
            at.entry(c).or_default().insert(v.clone());
        }
        full.insert(j, polygon);
    }
    for &i in &met {
        let vertices = match full.remove(&i) {
            Some(p) => p,
            None => {
                let mut vs: BTreeSet<QVector> = BTreeSet::new();
                for (&c, pts) in &at {
                    if decomp.is_face(c, i) {
                        vs.extend(pts.iter().cloned());
                    }
                }
                let mut vs: Vec<QVector> = vs.into_iter().collect();
                match cand.dims[i] {
                    2 => cyclic_order(vs),
                    // Collinear, so the ends of the sorted list are the endpoints.
                    1 if vs.len() > 2 => {
                        vs.drain(1..vs.len() - 1);
                        vs
                    }
                    _ => vs,
                }
            }
        };
        cells.push(SliceCell {
            parent: i,
            dim: cand.dims[i] as usize,
            vertices,
        });
    }
    let eff_region = clip(&cand.plane, &decomp.ambient, &window);
    Ok(SliceContext {
        decomposition: decomp.clone(),
        plane: cand.plane,
        window,
        eff_region,
        cells,
        seed,
        attempts,
        options: options.clone(),
        src_cell,
        dst_cell,
    })
}

/// The triangle `{ y_i >= -w } ∩ { y_1 + y_2 <= w }`.
fn window_polygon(w: &Rat) -> Vec<QVector> {
    let two = w + w;
    cyclic_order(vec![vec![-w.clone(), -w.clone()], vec![two.clone(), -w.clone()], vec![-w.clone(), two]])
}

/// `plane ∩ cone` inside the window: the feasible pairwise intersections
/// of the bounding lines, in integer arithmetic.
fn clip(plane: &AffineSubspace, cone: &Cone, window: &[QVector]) -> Vec<QVector> {
    let (ineqs, eqs) = pulled_back(plane, cone);
    let mut lines: Vec<Vec<BigInt>> = Vec::new();
    for (n, o) in ineqs {
        lines.push(rat::primitive_int(&lift(&n, &o)));
    }
    for (n, o) in eqs {
        let h = rat::primitive_int(&lift(&n, &o));
        lines.push(h.iter().map(|x| -x).collect());
        lines.push(h);
    }
    for i in 0..window.len() {
        let (p, q) = (&window[i], &window[(i + 1) % window.len()]);
        // Inner normal of the counter-clockwise edge from p to q.
        let n = vec![&p[1] - &q[1], &q[0] - &p[0]];
        let o = rat::dot(&n, p);
        lines.push(rat::primitive_int(&lift(&n, &o)));
    }
    let mut found: BTreeSet<QVector> = BTreeSet::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let (l, m) = (&lines[i], &lines[j]);
            let det = &l[1] * &m[2] - &m[1] * &l[2];
            if det.is_zero() {
                continue;
            }
            let x = &m[0] * &l[2] - &l[0] * &m[2];
            let y = &l[0] * &m[1] - &m[0] * &l[1];
            let feasible = lines.iter().all(|h| {
                let v = &h[0] * &det + &h[1] * &x + &h[2] * &y;
                v.is_zero() || v.is_positive() == det.is_positive()
            });
            if feasible {
                found.insert(vec![Rat::new(x, det.clone()), Rat::new(y, det)]);
            }
        }
    }
    let vs: Vec<QVector> = found.into_iter().collect();
    if vs.len() > 2 {
        cyclic_order(vs)
    } else {
        vs
    }
}

impl SliceContext {
    pub fn cell_of_parent(&self, parent: usize) -> Option<&SliceCell> {
        self.cells.iter().find(|c| c.parent == parent)
    }

    /// Labelled cells of the slice with their face relations `(a, b)`, `a`
    /// a proper face of `b`, as indices into `cells`.
    pub fn induced_cells(&self) -> (&[SliceCell], Vec<(usize, usize)>) {
        let mut adj = Vec::new();
        for (a, ca) in self.cells.iter().enumerate() {
            for (b, cb) in self.cells.iter().enumerate() {
                if ca.dim + 1 == cb.dim && self.decomposition.is_face(ca.parent, cb.parent) {
                    adj.push((a, b));
                }
            }
        }
        (&self.cells, adj)
    }

    pub fn model_of(&self, parent: usize) -> &Model {
        &self.decomposition.chambers[parent].model
    }

    pub fn meets(&self, parent: usize) -> bool {
        self.cell_of_parent(parent).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chamber::mori_decomposition;
    use crate::fixtures;
    use crate::toric::ToricVariety;

    fn p1_base(row: Vec<i64>) -> MfsSpec {
        MfsSpec {
            base_fan: fixtures::p1(),
            lattice_map: vec![row],
            total_fan: None,
        }
    }

    #[test]
    fn quadric_rulings_are_recognised() {
        let z = ToricVariety::new(&fixtures::p1xp1()).unwrap();
        let d = mori_decomposition(&z).unwrap();
        assert_eq!(discover_mfs(&d).len(), 2);
        let a = recognize(&d, &p1_base(vec![1, 0])).unwrap();
        let b = recognize(&d, &p1_base(vec![0, -1])).unwrap();
        assert_ne!(a.base, b.base);
        let ctx = build_slice(&d, &a, &b, 7, &SliceOptions::default()).unwrap();
        assert!(ctx.eff_region.len() >= 3);
        assert_eq!(ctx.cells.iter().filter(|c| c.dim == 2).count(), 1);
    }

    #[test]
    fn bl2p2_slice_is_generic_and_seed_independent() {
        let z = ToricVariety::new(&fixtures::bl2p2()).unwrap();
        let d = mori_decomposition(&z).unwrap();
        let all = discover_mfs(&d);
        assert!(all.len() >= 2);
        let (a, b) = (&all[0], &all[all.len() - 1]);
        let c1 = build_slice(&d, a, b, 1, &SliceOptions::default()).unwrap();
        let c2 = build_slice(&d, a, b, 2, &SliceOptions::default()).unwrap();
        let parents = |c: &SliceContext| c.cells.iter().map(|s| s.parent).collect::<Vec<_>>();
        assert_eq!(parents(&c1), parents(&c2));
        assert_ne!(c1.plane, c2.plane);
        for cell in &c1.cells {
            if cell.dim == 2 {
                assert!(c1.model_of(cell.parent).is_simplicial());
            }
        }
    }

    #[test]
    fn non_surjective_map_is_rejected() {
        let z = ToricVariety::new(&fixtures::p1xp1()).unwrap();
        let d = mori_decomposition(&z).unwrap();
        assert!(recognize(&d, &p1_base(vec![2, 0])).is_err());
    }
}
