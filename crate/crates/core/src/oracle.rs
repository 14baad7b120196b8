//! Independent cross-checks: a brute-force decomposition, a minimal model
//! program with scaling, and a verifier for factorisations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chamber::{all_faces, assemble, mori_decomposition, Decomposition};
use crate::error::{Error, Result};
use crate::poly::rat::{self, QVector, Rat};
use crate::poly::Cone;
use crate::sarkisov::{Factorization, LinkType, PKind, SKind, SarkisovLink};
use crate::slice::MoriFibreSpace;
use crate::toric::intersection::check_mori_fibre_space;
use crate::toric::{Fan, Model, ToricVariety};

pub const ORACLE_LIMIT_VAR: &str = "SARKISOV_ORACLE_LIMIT";
pub const DEFAULT_ORACLE_LIMIT: usize = 8;

pub fn oracle_limit() -> usize {
    std::env::var(ORACLE_LIMIT_VAR)
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_ORACLE_LIMIT)
}

/// Cut `Eff` by every arrangement hyperplane, label the full-dimensional
/// sign-vector cells by the ample model at an interior sample, and merge
/// cells with equal labels.
pub fn brute_force_decomposition(fan: &Fan) -> Result<Decomposition> {
    brute_force_with_limit(fan, oracle_limit())
}

pub fn brute_force_with_limit(fan: &Fan, limit: usize) -> Result<Decomposition> {
    if fan.rays.len() > limit {
        return Err(Error::LimitExceeded {
            what: "number of rays".into(),
            found: fan.rays.len(),
            limit,
        });
    }
    let z = ToricVariety::new(fan)?;
    let rho = z.picard_rank();
    let mut cells = vec![z.eff.clone()];
    for h in &z.hyperplanes {
        let mut next = Vec::with_capacity(cells.len());
        for c in cells {
            let pos = c.rays.iter().any(|r| rat::dot(h, r).is_positive());
            let neg = c.rays.iter().any(|r| rat::dot(h, r).is_negative());
            if !(pos && neg) {
                next.push(c);
                continue;
            }
            for normal in [h.clone(), rat::neg(h)] {
                let mut facets = c.facets.clone();
                facets.push(normal);
                let piece = Cone::from_hrep(rho, &facets, &c.equations)?;
                if piece.dim == rho {
                    next.push(piece);
                }
            }
        }
        cells = next;
    }
    let mut groups: BTreeMap<Model, Vec<QVector>> = BTreeMap::new();
    for c in &cells {
        let model = z.ample_model(&c.relative_interior_point())?;
        groups.entry(model).or_default().extend(c.rays.iter().cloned());
    }
    let chambers = groups
        .into_values()
        .map(|rays| Cone::from_rays(rho, &rays))
        .collect::<Result<Vec<_>>>()?;
    assemble(&z, all_faces(&chambers)?)
}

/// Cells of `a` missing from `b` and vice versa, by region and label.
pub fn decomposition_difference(a: &Decomposition, b: &Decomposition) -> Vec<String> {
    let key = |d: &Decomposition| -> BTreeMap<Cone, Model> {
        d.chambers.iter().map(|c| (c.region.clone(), c.model.clone())).collect()
    };
    let (ka, kb) = (key(a), key(b));
    let mut out = Vec::new();
    for (side, x, y) in [("first", &ka, &kb), ("second", &kb, &ka)] {
        for (region, model) in x {
            match y.get(region) {
                None => out.push(format!("{side} has a cell of dimension {} missing from the other", region.dim)),
                Some(m) if m != model => out.push(format!(
                    "cell of dimension {} labelled {} vs {}",
                    region.dim,
                    model.fingerprint(),
                    m.fingerprint()
                )),
                _ => {}
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    Divisorial,
    FlipOrFlop,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MMPStep {
    /// Scaling parameter at the crossing.
    #[serde(with = "crate::io::serde_rat")]
    pub t: Rat,
    #[serde(with = "crate::io::serde_rat::vec")]
    pub point: QVector,
    pub kind: StepKind,
    pub model_before: Model,
    pub model_after: Model,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MMPOutcome {
    LogTerminalModel(Model),
    MoriFibreSpace(MoriFibreSpace),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MMPTrace {
    #[serde(with = "crate::io::serde_rat::vec")]
    pub start: QVector,
    #[serde(with = "crate::io::serde_rat::vec")]
    pub end: QVector,
    /// The scaling class actually used, after any re-perturbation.
    #[serde(with = "crate::io::serde_rat::vec")]
    pub scaling: QVector,
    pub steps: Vec<MMPStep>,
    pub outcome: MMPOutcome,
}

impl MMPTrace {
    pub fn final_model(&self) -> &Model {
        match &self.outcome {
            MMPOutcome::LogTerminalModel(m) => m,
            MMPOutcome::MoriFibreSpace(m) => &m.total,
        }
    }
}

pub const MMP_RETRIES: usize = 16;

pub fn mmp_with_scaling(fan: &Fan, phi: &[Rat], h: &[Rat], seed: u64) -> Result<MMPTrace> {
    let z = ToricVariety::new(fan)?;
    mmp_in(&mori_decomposition(&z)?, phi, h, seed)
}

enum Walk {
    Done(MMPTrace),
    Degenerate(String),
}

/// Walk `phi + t h` from `t = 1` down to `t = 0`, crossing walls.
pub fn mmp_in(decomp: &Decomposition, phi: &[Rat], h: &[Rat], seed: u64) -> Result<MMPTrace> {
    let z = &decomp.variety;
    z.check_class(phi)?;
    z.check_class(h)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scaling = h.to_vec();
    let mut why = String::new();
    for attempt in 0..MMP_RETRIES {
        match walk(decomp, phi, &scaling)? {
            Walk::Done(t) => return Ok(t),
            Walk::Degenerate(w) => why = w,
        }
        let denom = BigInt::from(10u64.pow(4)) * BigInt::from(10u64).pow(attempt as u32);
        let bump: QVector = (0..scaling.len())
            .map(|_| Rat::new(rng.gen_range(-100i64..=100).into(), denom.clone()))
            .collect();
        scaling = rat::add(h, &bump);
    }
    Err(Error::RetryExhausted {
        attempts: MMP_RETRIES,
        condition: why,
    })
}

fn walk(decomp: &Decomposition, phi: &[Rat], h: &[Rat]) -> Result<Walk> {
    let rho = decomp.picard_rank();
    let at = |t: &Rat| rat::add(phi, &rat::scale(h, t));
    let start = at(&Rat::from_integer(1.into()));
    let first = decomp.locate(&start)?;
    if first.dim != rho {
        return Ok(Walk::Degenerate("the start of the segment is not in a chamber interior".into()));
    }
    let mut cur = first.id;
    let mut t_cur = Rat::from_integer(1.into());
    let mut steps = Vec::new();
    loop {
        let region = &decomp.chambers[cur].region;
        let exit = region
            .facets
            .iter()
            .filter(|f| rat::dot(f, h).is_positive())
            .map(|f| -rat::dot(f, phi) / rat::dot(f, h))
            .max();
        let model = decomp.chambers[cur].model.clone();
        let t_exit = match exit {
            Some(t) if t.is_positive() => t,
            Some(t) if t.is_zero() => {
                let end = decomp.locate(phi)?;
                let outcome = if decomp.is_big(end.id) {
                    MMPOutcome::LogTerminalModel(end.model.clone())
                } else {
                    MMPOutcome::MoriFibreSpace(MoriFibreSpace::new(&model, &end.model)?)
                };
                return Ok(Walk::Done(trace(phi, h, steps, outcome)));
            }
            _ => return Ok(Walk::Done(trace(phi, h, steps, MMPOutcome::LogTerminalModel(model)))),
        };
        if t_exit >= t_cur {
            return Err(Error::Internal("scaling parameter failed to decrease".into()));
        }
        let point = at(&t_exit);
        let cell = decomp.locate(&point)?;
        if cell.dim + 1 != rho {
            return Ok(Walk::Degenerate(format!(
                "segment meets a cell of codimension {}",
                rho - cell.dim
            )));
        }
        if !decomp.is_big(cell.id) {
            let mfs = MoriFibreSpace::new(&model, &cell.model)?;
            return Ok(Walk::Done(trace(phi, h, steps, MMPOutcome::MoriFibreSpace(mfs))));
        }
        let other: Vec<usize> = decomp
            .cofaces(cell.id)
            .into_iter()
            .filter(|&i| i != cur && decomp.chambers[i].dim == rho)
            .collect();
        let [next] = other[..] else {
            return Err(Error::Internal(format!("wall {} has {} chambers beyond it", cell.id, other.len())));
        };
        let after = decomp.chambers[next].model.clone();
        let kind = match after.num_rays().cmp(&model.num_rays()) {
            std::cmp::Ordering::Less => StepKind::Divisorial,
            std::cmp::Ordering::Equal => StepKind::FlipOrFlop,
            std::cmp::Ordering::Greater => {
                return Err(Error::Internal("a step of the MMP extracted a divisor".into()))
            }
        };
        steps.push(MMPStep {
            t: t_exit.clone(),
            point,
            kind,
            model_before: model,
            model_after: after,
        });
        cur = next;
        t_cur = t_exit;
    }
}

fn trace(phi: &[Rat], h: &[Rat], steps: Vec<MMPStep>, outcome: MMPOutcome) -> MMPTrace {
    MMPTrace {
        start: rat::add(phi, h),
        end: phi.to_vec(),
        scaling: h.to_vec(),
        steps,
        outcome,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Whether `(p, q, s, t)` is a row of the link table for the type.
pub fn in_link_table(l: &SarkisovLink) -> bool {
    use PKind::*;
    use SKind::*;
    let weak = |p: PKind| matches!(p, Flop | Absent);
    match l.link_type {
        LinkType::II => l.p_kind == DivisorialExtraction && l.q_kind == DivisorialExtraction && l.s_kind == Identity && l.t_kind == Identity,
        LinkType::I => l.p_kind == DivisorialExtraction && weak(l.q_kind) && l.s_kind == Identity && l.t_kind != Identity,
        LinkType::III => weak(l.p_kind) && l.q_kind == DivisorialExtraction && l.s_kind != Identity && l.t_kind == Identity,
        LinkType::IVm => weak(l.p_kind) && weak(l.q_kind) && l.s_kind == Fibration && l.t_kind == Fibration,
        LinkType::IVs => weak(l.p_kind) && weak(l.q_kind) && l.s_kind == Small && l.t_kind == Small,
    }
}

fn ray_change(t: LinkType) -> isize {
    match t {
        LinkType::I => 1,
        LinkType::III => -1,
        _ => 0,
    }
}

pub fn verify_factorization(fact: &Factorization) -> VerificationReport {
    let mut checks = Vec::new();
    let mut push = |name: String, passed: bool, detail: String| checks.push(Check { name, passed, detail });
    let links = &fact.links;
    let n = links.len();
    for joint in 0..=n {
        let left = if joint == 0 {
            (&fact.source.total, &fact.source.base)
        } else {
            (&links[joint - 1].y, &links[joint - 1].t)
        };
        let right = if joint == n {
            (&fact.target.total, &fact.target.base)
        } else {
            (&links[joint].x, &links[joint].s)
        };
        let ok = left == right;
        push(
            format!("chain-consistency at joint {joint}"),
            ok,
            if ok {
                String::new()
            } else {
                format!(
                    "{} over {} vs {} over {}",
                    left.0.fingerprint(),
                    left.1.fingerprint(),
                    right.0.fingerprint(),
                    right.1.fingerprint()
                )
            },
        );
    }
    for (i, l) in links.iter().enumerate() {
        push(
            format!("link-table at link {i}"),
            in_link_table(l),
            format!("{}: p {:?}, q {:?}, s {:?}, t {:?}", l.link_type, l.p_kind, l.q_kind, l.s_kind, l.t_kind),
        );
        let change = l.y.num_rays() as isize - l.x.num_rays() as isize;
        let want = ray_change(l.link_type);
        push(
            format!("ray-count at link {i}"),
            change == want,
            format!("{} rays to {}, expected change {want}", l.x.num_rays(), l.y.num_rays()),
        );
        for (side, total, base) in [("X", &l.x, &l.s), ("Y", &l.y, &l.t)] {
            let r = check_mori_fibre_space(total, base);
            push(
                format!("mori-fibre-space {side} at link {i}"),
                r.is_ok(),
                r.err().map(|e| e.to_string()).unwrap_or_default(),
            );
        }
    }
    for (side, m) in [("source", &fact.source), ("target", &fact.target)] {
        let r = check_mori_fibre_space(&m.total, &m.base);
        push(
            format!("mori-fibre-space {side}"),
            r.is_ok(),
            r.err().map(|e| e.to_string()).unwrap_or_default(),
        );
    }
    for c in checks.iter_mut().filter(|c| c.passed) {
        c.detail.clear();
    }
    VerificationReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demo;
    use crate::fixtures;

    #[test]
    fn brute_force_matches_engine_on_small_surfaces() {
        for fan in [fixtures::p2(), fixtures::p1xp1(), fixtures::hirzebruch(1), fixtures::bl2p2()] {
            let z = ToricVariety::new(&fan).unwrap();
            let a = mori_decomposition(&z).unwrap();
            let b = brute_force_decomposition(&fan).unwrap();
            assert!(decomposition_difference(&a, &b).is_empty());
            assert_eq!(a.chambers.len(), b.chambers.len());
        }
    }

    #[test]
    fn limit_is_enforced() {
        let err = brute_force_with_limit(&fixtures::bl2p2(), 4).unwrap_err();
        assert!(matches!(err, Error::LimitExceeded { found: 5, limit: 4, .. }));
    }

    #[test]
    fn blow_down_is_one_divisorial_step() {
        // F_1 with rays (1,0), (0,1), (-1,1), (0,-1): D_1 is the (-1)-curve.
        let fan = fixtures::hirzebruch(1);
        let z = ToricVariety::new(&fan).unwrap();
        let e = &z.ray_classes[1];
        assert!(!z.nef.contains(e));
        let phi = rat::add(&z.ample, &rat::scale(e, &Rat::from_integer(10.into())));
        let h = rat::scale(&z.ample, &Rat::from_integer(100.into()));
        let tr = mmp_with_scaling(&fan, &phi, &h, 1).unwrap();
        assert_eq!(tr.steps.len(), 1);
        assert_eq!(tr.steps[0].kind, StepKind::Divisorial);
        assert_eq!(tr.final_model().num_rays(), 3);
        assert_eq!(*tr.final_model(), z.ample_model(&phi).unwrap());
    }

    #[test]
    fn ample_target_has_no_steps() {
        let fan = fixtures::bl2p2();
        let z = ToricVariety::new(&fan).unwrap();
        let tr = mmp_with_scaling(&fan, &z.ample, &z.ample, 0).unwrap();
        assert!(tr.steps.is_empty());
        assert_eq!(tr.outcome, MMPOutcome::LogTerminalModel(z.identity_model()));
    }

    #[test]
    fn anticanonical_direction_ends_in_a_fibration() {
        let fan = fixtures::bl2p2();
        let z = ToricVariety::new(&fan).unwrap();
        let tr = mmp_with_scaling(&fan, &z.canonical_class(), &rat::scale(&z.ample, &Rat::from_integer(20.into())), 2).unwrap();
        assert!(matches!(tr.outcome, MMPOutcome::MoriFibreSpace(_)));
        let ts: Vec<&Rat> = tr.steps.iter().map(|s| &s.t).collect();
        assert!(ts.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn verifier_accepts_demo_and_rejects_swapped_links() {
        let d = demo::run("bl2p2", 4).unwrap();
        let report = verify_factorization(&d.factorization);
        assert!(report.passed, "{:?}", report.failures().collect::<Vec<_>>());
        let mut bad = d.factorization.clone();
        bad.links.swap(1, 2);
        let report = verify_factorization(&bad);
        assert!(!report.passed);
        assert_eq!(report.failures().next().unwrap().name, "chain-consistency at joint 1");
    }
}
