//! Boundary traversal of the slice and classification of Sarkisov links.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::chamber::{mori_decomposition, Decomposition, WallKind};
use crate::error::{Error, Result};
use crate::poly::rat::{QVector, Rat};
use crate::poly::AffineSubspace;
use crate::slice::{build_slice, discover_mfs, mfs_cell, MoriFibreSpace, SliceContext, SliceOptions};
use crate::toric::{ContractionKind, Fan, Model, ToricContraction, ToricVariety};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LinkType {
    I,
    II,
    III,
    IVm,
    IVs,
}

impl std::fmt::Display for LinkType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// How `X'` relates to `X` (or `Y'` to `Y`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PKind {
    DivisorialExtraction,
    Flop,
    Absent,
}

/// The contraction from a base to the ample model at the vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SKind {
    Identity,
    Fibration,
    Small,
    Divisorial,
}

impl SKind {
    fn between(from: &Model, to: &Model) -> Result<SKind> {
        if from == to {
            return Ok(SKind::Identity);
        }
        Ok(match ToricContraction::between(from, to)?.kind {
            ContractionKind::Identity => SKind::Identity,
            ContractionKind::Fibration => SKind::Fibration,
            ContractionKind::Small => SKind::Small,
            ContractionKind::Divisorial => SKind::Divisorial,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SarkisovLink {
    pub link_type: LinkType,
    #[serde(rename = "X")]
    pub x: Model,
    #[serde(rename = "Y")]
    pub y: Model,
    #[serde(rename = "S")]
    pub s: Model,
    #[serde(rename = "T")]
    pub t: Model,
    #[serde(rename = "Xp")]
    pub xp: Option<Model>,
    #[serde(rename = "Yp")]
    pub yp: Option<Model>,
    #[serde(rename = "R")]
    pub r: Model,
    pub flop_chain: Vec<Model>,
    /// Slice coordinates of the vertex.
    #[serde(with = "crate::io::serde_rat::vec")]
    pub vertex: QVector,
    /// A class in the relative interior of the vertex cell.
    #[serde(with = "crate::io::serde_rat::vec")]
    pub vertex_class: QVector,
    pub p_kind: PKind,
    pub q_kind: PKind,
    pub s_kind: SKind,
    pub t_kind: SKind,
    /// Number of chambers around the vertex.
    pub k: usize,
    /// `k <= 2`: the heptagon has collapsed sides.
    pub degenerate_k: bool,
}

/// A vertex of the traversed arc, with the boundary walls on either side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryVertex {
    pub cell: usize,
    pub point: QVector,
    pub class: QVector,
    pub incoming: usize,
    pub outgoing: usize,
}

/// Per-run record of the slice, for output and drawing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceSummary {
    pub plane: AffineSubspace,
    #[serde(with = "crate::io::serde_rat::matrix")]
    pub window: Vec<QVector>,
    #[serde(with = "crate::io::serde_rat::matrix")]
    pub eff_region: Vec<QVector>,
    pub cells: Vec<SliceCellSummary>,
    /// Ambient cell ids of the traversed vertices, in order.
    pub boundary: Vec<usize>,
    /// Ambient cell ids of the boundary walls along the traversal.
    pub arc_walls: Vec<usize>,
    pub seed: u64,
    pub attempts: usize,
    pub window_scale: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceCellSummary {
    pub parent: usize,
    pub dim: usize,
    pub model: String,
    #[serde(with = "crate::io::serde_rat::matrix")]
    pub vertices: Vec<QVector>,
}

impl SliceSummary {
    pub fn of(ctx: &SliceContext, boundary: &[BoundaryVertex]) -> SliceSummary {
        SliceSummary {
            plane: ctx.plane.clone(),
            window: ctx.window.clone(),
            eff_region: ctx.eff_region.clone(),
            cells: ctx
                .cells
                .iter()
                .map(|c| SliceCellSummary {
                    parent: c.parent,
                    dim: c.dim,
                    model: ctx.model_of(c.parent).fingerprint(),
                    vertices: c.vertices.clone(),
                })
                .collect(),
            boundary: boundary.iter().map(|b| b.cell).collect(),
            arc_walls: boundary
                .first()
                .map(|b| b.incoming)
                .into_iter()
                .chain(boundary.iter().map(|b| b.outgoing))
                .collect(),
            seed: ctx.seed,
            attempts: ctx.attempts,
            window_scale: ctx.options.window_scale,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub source: MoriFibreSpace,
    pub target: MoriFibreSpace,
    pub links: Vec<SarkisovLink>,
    /// Absent when source and target coincide and nothing was traversed.
    pub slice: Option<SliceSummary>,
}

impl Factorization {
    pub fn link_types(&self) -> Vec<LinkType> {
        self.links.iter().map(|l| l.link_type).collect()
    }
}

#[derive(Clone, Debug, Default)]
pub struct FactorOptions {
    pub slice: SliceOptions,
    /// In loop mode, walk first towards the vertex cell containing this class.
    pub first_vertex: Option<QVector>,
}

fn boundary_walls(ctx: &SliceContext) -> Vec<usize> {
    let d = &ctx.decomposition;
    let rho = d.picard_rank();
    ctx.cells
        .iter()
        .map(|c| c.parent)
        .filter(|&i| d.chambers[i].dim + 1 == rho && !d.is_big(i))
        .collect()
}

fn vertex_cells(ctx: &SliceContext) -> Vec<usize> {
    let d = &ctx.decomposition;
    let rho = d.picard_rank();
    ctx.cells
        .iter()
        .map(|c| c.parent)
        .filter(|&i| d.chambers[i].dim + 2 == rho && !d.is_big(i))
        .collect()
}

fn boundary_vertex(ctx: &SliceContext, cell: usize, incoming: usize, outgoing: usize) -> BoundaryVertex {
    let point = ctx
        .cell_of_parent(cell)
        .and_then(|c| c.vertices.first().cloned())
        .unwrap_or_default();
    BoundaryVertex {
        cell,
        point,
        class: ctx.decomposition.chambers[cell].region.relative_interior_point(),
        incoming,
        outgoing,
    }
}

/// Vertices on the non-big arc of the boundary of the sliced effective cone
/// from the source wall to the target wall.
pub fn trace_boundary(ctx: &SliceContext, first_vertex: Option<&[Rat]>) -> Result<Vec<BoundaryVertex>> {
    let d = &ctx.decomposition;
    if ctx.src_cell == ctx.dst_cell && !ctx.options.loop_mode {
        return Ok(Vec::new());
    }
    let walls = boundary_walls(ctx);
    let verts = vertex_cells(ctx);
    let walls_at = |v: usize| -> Vec<usize> { walls.iter().copied().filter(|&w| d.is_face(v, w)).collect() };
    let verts_of = |w: usize| -> Vec<usize> { verts.iter().copied().filter(|&v| d.is_face(v, w)).collect() };
    let limit = ctx.cells.len() + 1;

    let walk = |start: usize| -> Result<Option<Vec<BoundaryVertex>>> {
        let mut path = Vec::new();
        let (mut wall, mut v) = (ctx.src_cell, start);
        loop {
            let next: Vec<usize> = walls_at(v).into_iter().filter(|&w| w != wall).collect();
            let [next] = next[..] else {
                return Err(Error::Internal(format!(
                    "boundary vertex {v} meets {} further boundary walls",
                    next.len()
                )));
            };
            path.push(boundary_vertex(ctx, v, wall, next));
            if next == ctx.dst_cell {
                return Ok(Some(path));
            }
            let far: Vec<usize> = verts_of(next).into_iter().filter(|&u| u != v).collect();
            match far[..] {
                [] => return Ok(None),
                [u] => {
                    wall = next;
                    v = u;
                }
                _ => return Err(Error::Internal(format!("boundary wall {next} has more than two vertices"))),
            }
            if path.len() > limit {
                return Err(Error::Internal("boundary walk does not terminate".into()));
            }
        }
    };

    let mut arcs = Vec::new();
    for v in verts_of(ctx.src_cell) {
        if let Some(p) = walk(v)? {
            arcs.push(p);
        }
    }
    if let (true, Some(h)) = (ctx.options.loop_mode, first_vertex) {
        return arcs
            .into_iter()
            .find(|p| d.chambers[p[0].cell].region.contains_relint(h))
            .ok_or_else(|| Error::Unsupported("no boundary vertex at the requested class".into()));
    }
    let key = |p: &Vec<BoundaryVertex>| {
        (
            p.len(),
            p.iter().map(|b| d.chambers[b.cell].model.fingerprint()).collect::<Vec<_>>(),
            p.iter().map(|b| b.cell).collect::<Vec<_>>(),
        )
    };
    arcs.into_iter()
        .min_by_key(key)
        .ok_or_else(|| Error::Internal("no boundary arc joins the source and target walls".into()))
}

/// The Sarkisov link at one traversed vertex (Theorem 3.7).
pub fn link_at(ctx: &SliceContext, bv: &BoundaryVertex) -> Result<SarkisovLink> {
    let d = &ctx.decomposition;
    let rho = d.picard_rank();
    let v = bv.cell;
    let full_cofaces = |w: usize| -> Vec<usize> {
        d.cofaces(w).into_iter().filter(|&i| d.chambers[i].dim == rho).collect()
    };
    let first = full_cofaces(bv.incoming);
    let [mut cur] = first[..] else {
        return Err(Error::Internal(format!("boundary wall {} bounds {} chambers", bv.incoming, first.len())));
    };
    let mut chambers = vec![cur];
    let mut interior = Vec::new();
    let mut wall = bv.incoming;
    let outer = loop {
        let next: Vec<usize> = d
            .faces(cur)
            .into_iter()
            .filter(|&f| d.chambers[f].dim + 1 == rho && f != wall && d.is_face(v, f) && ctx.meets(f))
            .collect();
        let [f] = next[..] else {
            return Err(Error::Internal(format!(
                "chamber {cur} has {} further walls through vertex {v}",
                next.len()
            )));
        };
        if !d.is_big(f) {
            break f;
        }
        let other: Vec<usize> = full_cofaces(f).into_iter().filter(|&i| i != cur).collect();
        let [o] = other[..] else {
            return Err(Error::Internal(format!("interior wall {f} bounds {} chambers", other.len() + 1)));
        };
        interior.push(f);
        chambers.push(o);
        cur = o;
        wall = f;
        if chambers.len() > d.chambers.len() {
            return Err(Error::Internal("walk around a vertex does not terminate".into()));
        }
    };
    if outer != bv.outgoing {
        return Err(Error::Internal(format!(
            "walk around vertex {v} ends on wall {outer}, not {}",
            bv.outgoing
        )));
    }
    let model = |i: usize| d.chambers[i].model.clone();
    let k = chambers.len();
    let nrays = |i: usize| d.chambers[chambers[i]].model.num_rays();
    let step = |a: usize, b: usize| -> Result<PKind> {
        match nrays(b).cmp(&nrays(a)) {
            std::cmp::Ordering::Greater => Ok(PKind::DivisorialExtraction),
            std::cmp::Ordering::Equal => Ok(PKind::Flop),
            std::cmp::Ordering::Less => Err(Error::Internal(format!(
                "chamber {} has fewer rays than its neighbour {} at vertex {v}",
                chambers[b], chambers[a]
            ))),
        }
    };
    let (p_kind, q_kind, xp, yp) = match k {
        1 => (PKind::Absent, PKind::Absent, None, None),
        2 => match nrays(0).cmp(&nrays(1)) {
            std::cmp::Ordering::Less => (PKind::DivisorialExtraction, PKind::Absent, Some(model(chambers[1])), None),
            std::cmp::Ordering::Greater => (PKind::Absent, PKind::DivisorialExtraction, None, Some(model(chambers[0]))),
            std::cmp::Ordering::Equal => (PKind::Flop, PKind::Flop, None, None),
        },
        _ => (
            step(0, 1)?,
            step(k - 1, k - 2)?,
            Some(model(chambers[1])),
            Some(model(chambers[k - 2])),
        ),
    };
    for &w in interior.iter().skip(1).take(interior.len().saturating_sub(2)) {
        if d.classify_wall(w)? != WallKind::FlopWall {
            return Err(Error::Internal(format!("wall {w} inside the link at vertex {v} is not a flop wall")));
        }
    }
    let (s, t, r) = (model(bv.incoming), model(outer), model(v));
    let s_kind = SKind::between(&s, &r)?;
    let t_kind = SKind::between(&t, &r)?;
    let div = |p: PKind| p == PKind::DivisorialExtraction;
    let id = |s: SKind| s == SKind::Identity;
    let diagnostic = || {
        format!(
            "vertex {v}: k = {k}, p = {p_kind:?}, q = {q_kind:?}, s = {s_kind:?}, t = {t_kind:?}, chambers {chambers:?}, walls {interior:?}"
        )
    };
    if div(p_kind) != id(s_kind) || div(q_kind) != id(t_kind) {
        return Err(Error::Internal(format!("extraction and base identity disagree at {}", diagnostic())));
    }
    let link_type = match (s_kind, t_kind) {
        (SKind::Identity, SKind::Identity) => LinkType::II,
        (SKind::Identity, _) => LinkType::I,
        (_, SKind::Identity) => LinkType::III,
        (SKind::Fibration, SKind::Fibration) => LinkType::IVm,
        (SKind::Small, SKind::Small) => LinkType::IVs,
        _ => return Err(Error::Internal(format!("no link type fits {}", diagnostic()))),
    };
    let flop_chain = chambers.iter().take(k.saturating_sub(1)).skip(1).map(|&i| model(i)).collect();
    Ok(SarkisovLink {
        link_type,
        x: model(chambers[0]),
        y: model(chambers[k - 1]),
        s,
        t,
        xp,
        yp,
        r,
        flop_chain,
        vertex: bv.point.clone(),
        vertex_class: bv.class.clone(),
        p_kind,
        q_kind,
        s_kind,
        t_kind,
        k,
        degenerate_k: k <= 2,
    })
}

/// Factor the map between two Mori fibre space models of one decomposition.
pub fn factor_in(
    decomp: &Decomposition,
    src: &MoriFibreSpace,
    dst: &MoriFibreSpace,
    seed: u64,
    options: &FactorOptions,
) -> Result<Factorization> {
    let src_cell = mfs_cell(decomp, src)?;
    let dst_cell = mfs_cell(decomp, dst)?;
    if src_cell == dst_cell && !options.slice.loop_mode {
        return Ok(Factorization {
            source: src.clone(),
            target: dst.clone(),
            links: Vec::new(),
            slice: None,
        });
    }
    let ctx = build_slice(decomp, src, dst, seed, &options.slice)?;
    let arc = trace_boundary(&ctx, options.first_vertex.as_deref())?;
    let links = arc.iter().map(|b| link_at(&ctx, b)).collect::<Result<Vec<_>>>()?;
    Ok(Factorization {
        source: src.clone(),
        target: dst.clone(),
        links,
        slice: Some(SliceSummary::of(&ctx, &arc)),
    })
}

pub fn factor(fan: &Fan, src: &MoriFibreSpace, dst: &MoriFibreSpace, seed: u64) -> Result<Factorization> {
    let z = ToricVariety::new(fan)?;
    let decomp = mori_decomposition(&z)?;
    factor_in(&decomp, src, dst, seed, &FactorOptions::default())
}

/// The two rulings over the `x`-axis projection of a blown-up ruled surface
/// differ by one elementary transformation, a single link of type II.
pub fn elementary_transformation_check(fan: &Fan, seed: u64) -> Result<SarkisovLink> {
    let z = ToricVariety::new(fan)?;
    let decomp = mori_decomposition(&z)?;
    let mut rulings: Vec<MoriFibreSpace> = discover_mfs(&decomp)
        .into_iter()
        .filter(|m| m.base.projection == vec![vec![1, 0]])
        .collect();
    if rulings.len() != 2 {
        return Err(Error::Unsupported(format!(
            "expected two rulings over the first coordinate, found {}",
            rulings.len()
        )));
    }
    rulings.sort_by_key(|m| !m.total.fan.rays.contains(&vec![1, 0]));
    let f = factor_in(&decomp, &rulings[0], &rulings[1], seed, &FactorOptions::default())?;
    match &f.links[..] {
        [l] if l.link_type == LinkType::II => Ok(l.clone()),
        _ => Err(Error::Internal(format!("elementary transformation gave links {:?}", f.link_types()))),
    }
}

/// Wall-clock helper used by the demos and the acceptance run.
pub fn timed<T>(f: impl FnOnce() -> T) -> (T, std::time::Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn all_pairs(fan: &Fan) -> Vec<Factorization> {
        let z = ToricVariety::new(fan).unwrap();
        let d = mori_decomposition(&z).unwrap();
        let mfs = discover_mfs(&d);
        let mut out = Vec::new();
        for a in &mfs {
            for b in &mfs {
                if a != b {
                    out.push(factor_in(&d, a, b, 3, &FactorOptions::default()).unwrap());
                }
            }
        }
        out
    }

    #[test]
    fn quadric_gives_one_ivm_link() {
        let fs = all_pairs(&fixtures::p1xp1());
        assert_eq!(fs.len(), 2);
        for f in fs {
            assert_eq!(f.link_types(), vec![LinkType::IVm]);
            assert!(f.links[0].degenerate_k);
        }
    }

    #[test]
    fn first_hirzebruch_gives_type_one_and_three() {
        let fs = all_pairs(&fixtures::hirzebruch(1));
        assert_eq!(fs.len(), 2);
        for f in fs {
            let expected = if f.source.base.dim() == 0 { LinkType::I } else { LinkType::III };
            assert_eq!(f.link_types(), vec![expected]);
        }
    }

    #[test]
    fn elementary_transformation_is_type_two() {
        let l = elementary_transformation_check(&fixtures::ruled_blowup(0), 5).unwrap();
        assert_eq!(l.p_kind, PKind::DivisorialExtraction);
        assert_eq!(l.q_kind, PKind::DivisorialExtraction);
        assert_eq!(l.y.num_rays(), l.x.num_rays());
    }

    #[test]
    fn same_structure_gives_no_links() {
        let z = ToricVariety::new(&fixtures::bl2p2()).unwrap();
        let d = mori_decomposition(&z).unwrap();
        let m = discover_mfs(&d).remove(0);
        let f = factor_in(&d, &m, &m, 0, &FactorOptions::default()).unwrap();
        assert!(f.links.is_empty());
    }
}
