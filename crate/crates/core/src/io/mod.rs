//! Serialisation helpers and the JSON document formats.

pub mod serde_rat;
pub mod svg;

use std::collections::BTreeMap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chamber::{mori_decomposition, Decomposition, ModelMapKind, WallKind};
use crate::error::{Error, Result};
use crate::oracle::{self, Check, VerificationReport};
use crate::poly::rat::{self, Rat};
use crate::poly::Cone;
use crate::sarkisov::{factor_in, trace_boundary, FactorOptions, Factorization, LinkType, SliceSummary};
use crate::slice::{build_slice, recognize, MfsSpec, MoriFibreSpace, SliceOptions};
use crate::toric::{Fan, Model, ToricVariety};

pub const DEFAULT_SEED: u64 = 0;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub fan: Fan,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mfs_src: Option<MfsSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mfs_dst: Option<MfsSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window_scale: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_limit: Option<usize>,
    /// Human names for models, keyed by model fingerprint.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub aliases: BTreeMap<String, String>,
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_json<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("documents serialise")
}

impl InputDocument {
    pub fn parse(text: &str) -> Result<InputDocument> {
        let doc: InputDocument = parse_json(text)?;
        doc.validated_fan()?;
        Ok(doc)
    }

    pub fn from_path(path: &Path) -> Result<InputDocument> {
        InputDocument::parse(&read_text(path)?)
    }

    pub fn from_fan(fan: Fan) -> InputDocument {
        InputDocument {
            fan,
            mfs_src: None,
            mfs_dst: None,
            seed: None,
            window_scale: None,
            oracle_limit: None,
            aliases: BTreeMap::new(),
        }
    }

    /// The fan, re-checked as if built by [`Fan::new`].
    pub fn validated_fan(&self) -> Result<Fan> {
        let f = Fan::new(self.fan.lattice_rank, self.fan.rays.clone(), self.fan.max_cones.clone())?;
        f.validate()?;
        Ok(f)
    }

    pub fn variety(&self) -> Result<ToricVariety> {
        ToricVariety::new(&self.validated_fan()?)
    }

    pub fn decomposition(&self) -> Result<Decomposition> {
        mori_decomposition(&self.variety()?)
    }

    pub fn seed_or(&self, flag: Option<u64>) -> u64 {
        flag.or(self.seed).unwrap_or(DEFAULT_SEED)
    }

    pub fn slice_options(&self) -> SliceOptions {
        SliceOptions {
            window_scale: self.window_scale.unwrap_or(1),
            ..SliceOptions::default()
        }
    }

    pub fn endpoints(&self, d: &Decomposition) -> Result<(MoriFibreSpace, MoriFibreSpace)> {
        let src = self.mfs_src.as_ref().ok_or_else(|| Error::Usage("input has no mfs_src".into()))?;
        let dst = self.mfs_dst.as_ref().ok_or_else(|| Error::Usage("input has no mfs_dst".into()))?;
        Ok((recognize(d, src)?, recognize(d, dst)?))
    }

    pub fn name_of(&self, m: &Model) -> Option<String> {
        self.aliases.get(&m.fingerprint()).cloned()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellDoc {
    pub id: usize,
    pub dim: usize,
    pub region: Cone,
    pub model: Model,
    pub fingerprint: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub model_map_kind: ModelMapKind,
    pub big: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_kind: Option<WallKind>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionDoc {
    pub picard_rank: usize,
    pub effective_cone: Cone,
    pub full_chambers: usize,
    pub cells: Vec<CellDoc>,
    /// `(j, i)`: cell `j` is a facet of cell `i`.
    pub adjacency: Vec<(usize, usize)>,
}

impl DecompositionDoc {
    pub fn new(d: &Decomposition, input: &InputDocument) -> DecompositionDoc {
        let rho = d.picard_rank();
        DecompositionDoc {
            picard_rank: rho,
            effective_cone: d.ambient.clone(),
            full_chambers: d.full_chambers().count(),
            cells: d
                .chambers
                .iter()
                .map(|c| CellDoc {
                    id: c.id,
                    dim: c.dim,
                    region: c.region.clone(),
                    model: c.model.clone(),
                    fingerprint: c.model.fingerprint(),
                    name: input.name_of(&c.model),
                    model_map_kind: c.model_map_kind,
                    big: d.is_big(c.id),
                    wall_kind: if c.dim + 1 == rho { d.classify_wall(c.id).ok() } else { None },
                })
                .collect(),
            adjacency: d.adjacency.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceDoc {
    pub source: MoriFibreSpace,
    pub target: MoriFibreSpace,
    pub slice: SliceSummary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub demo: Option<String>,
    pub link_types: Vec<LinkType>,
    /// Names for the models that occur, keyed by fingerprint.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub model_names: BTreeMap<String, String>,
    pub factorization: Factorization,
}

impl FactorDoc {
    pub fn new(f: Factorization, aliases: &BTreeMap<String, String>, demo: Option<String>) -> FactorDoc {
        let mut names = BTreeMap::new();
        let mut note = |m: &Model| {
            let fp = m.fingerprint();
            if let Some(n) = aliases.get(&fp) {
                names.insert(fp, n.clone());
            }
        };
        for m in [&f.source, &f.target] {
            note(&m.total);
            note(&m.base);
        }
        for l in &f.links {
            for m in [&l.x, &l.y, &l.s, &l.t, &l.r].into_iter().chain(l.xp.iter()).chain(l.yp.iter()) {
                note(m);
            }
        }
        FactorDoc {
            demo,
            link_types: f.link_types(),
            model_names: names,
            factorization: f,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum OutputDocument {
    Decompose(DecompositionDoc),
    Slice(SliceDoc),
    Factor(FactorDoc),
    Verify(VerificationReport),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorDoc {
    pub error: ErrorBody,
}

impl From<&Error> for ErrorDoc {
    fn from(e: &Error) -> ErrorDoc {
        ErrorDoc {
            error: ErrorBody {
                kind: e.kind().into(),
                message: e.to_string(),
            },
        }
    }
}

pub fn cmd_decompose(input: &InputDocument) -> Result<OutputDocument> {
    let d = input.decomposition()?;
    Ok(OutputDocument::Decompose(DecompositionDoc::new(&d, input)))
}

pub fn cmd_slice(input: &InputDocument, seed: Option<u64>) -> Result<OutputDocument> {
    let d = input.decomposition()?;
    let (src, dst) = input.endpoints(&d)?;
    let ctx = build_slice(&d, &src, &dst, input.seed_or(seed), &input.slice_options())?;
    let arc = trace_boundary(&ctx, None)?;
    Ok(OutputDocument::Slice(SliceDoc {
        source: src,
        target: dst,
        slice: SliceSummary::of(&ctx, &arc),
    }))
}

pub fn cmd_factor(input: &InputDocument, seed: Option<u64>) -> Result<FactorDoc> {
    let d = input.decomposition()?;
    let (src, dst) = input.endpoints(&d)?;
    let options = FactorOptions {
        slice: input.slice_options(),
        first_vertex: None,
    };
    let f = factor_in(&d, &src, &dst, input.seed_or(seed), &options)?;
    Ok(FactorDoc::new(f, &input.aliases, None))
}

/// Number of seeded MMP walks run by [`cmd_verify`].
pub const VERIFY_WALKS: u64 = 20;

/// The structural checks of [`oracle::verify_factorization`], plus checks
/// against the input: endpoints, reproducibility, the brute-force
/// decomposition and seeded MMP walks.
pub fn cmd_verify(input: &InputDocument, doc: &FactorDoc) -> Result<VerificationReport> {
    let fan = input.validated_fan()?;
    let limit = input.oracle_limit.unwrap_or_else(oracle::oracle_limit);
    let brute = oracle::brute_force_with_limit(&fan, limit)?;
    let d = input.decomposition()?;
    let f = &doc.factorization;
    let mut report = oracle::verify_factorization(f);
    let mut add = |name: &str, passed: bool, detail: String| {
        report.checks.push(Check {
            name: name.into(),
            passed,
            detail: if passed { String::new() } else { detail },
        })
    };
    if input.mfs_src.is_some() || input.mfs_dst.is_some() {
        let (src, dst) = input.endpoints(&d)?;
        add(
            "endpoints match input",
            src == f.source && dst == f.target,
            "source or target differs from the input specification".into(),
        );
    }
    add(
        "link types recorded",
        doc.link_types == f.link_types(),
        format!("recorded {:?}, links give {:?}", doc.link_types, f.link_types()),
    );
    match &f.slice {
        Some(s) if s.boundary.len() != f.links.len() => {
            add("slice boundary", false, format!("{} vertices for {} links", s.boundary.len(), f.links.len()))
        }
        _ => {}
    }
    if doc.demo.is_none() {
        let seed = f.slice.as_ref().map_or(DEFAULT_SEED, |s| s.seed);
        let options = FactorOptions {
            slice: SliceOptions {
                window_scale: f.slice.as_ref().map_or(1, |s| s.window_scale),
                ..SliceOptions::default()
            },
            first_vertex: None,
        };
        match factor_in(&d, &f.source, &f.target, seed, &options) {
            Ok(g) => add(
                "reproducible",
                g.links == f.links,
                format!("recomputation gives {:?}", g.link_types()),
            ),
            Err(e) => add("reproducible", false, e.to_string()),
        }
    }
    let diff = oracle::decomposition_difference(&d, &brute);
    add("oracle equivalence", diff.is_empty(), diff.join("; "));
    let z = &d.variety;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut bad = Vec::new();
    let positive = |rng: &mut ChaCha8Rng, gens: &[Vec<Rat>]| {
        gens.iter().fold(rat::zeros(z.picard_rank()), |acc, g| {
            rat::add(&acc, &rat::scale(g, &Rat::new(rng.gen_range(1i64..=100).into(), 7.into())))
        })
    };
    for i in 0..VERIFY_WALKS {
        let phi = positive(&mut rng, &z.ray_classes);
        let mut h = positive(&mut rng, &z.nef.rays);
        while !z.nef.contains_relint(&rat::add(&phi, &h)) {
            h = rat::scale(&h, &Rat::from_integer(2.into()));
        }
        match (oracle::mmp_in(&d, &phi, &h, i), z.ample_model(&phi)) {
            (Ok(t), Ok(m)) if *t.final_model() == m => {}
            (Ok(_), Ok(_)) => bad.push(format!("walk {i} ends at a different model")),
            (Err(e), _) | (_, Err(e)) => bad.push(format!("walk {i}: {e}")),
        }
    }
    add("mmp endpoints", bad.is_empty(), bad.join("; "));
    report.passed = report.checks.iter().all(|c| c.passed);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn quadric_input() -> InputDocument {
        let mut doc = InputDocument::from_fan(fixtures::p1xp1());
        doc.mfs_src = Some(MfsSpec {
            base_fan: fixtures::p1(),
            lattice_map: vec![vec![1, 0]],
            total_fan: None,
        });
        doc.mfs_dst = Some(MfsSpec {
            base_fan: fixtures::p1(),
            lattice_map: vec![vec![0, 1]],
            total_fan: None,
        });
        doc
    }

    #[test]
    fn input_round_trips() {
        let doc = quadric_input();
        assert_eq!(InputDocument::parse(&to_json(&doc)).unwrap(), doc);
    }

    #[test]
    fn outputs_round_trip() {
        let input = quadric_input();
        let docs = [
            cmd_decompose(&input).unwrap(),
            cmd_slice(&input, Some(3)).unwrap(),
            OutputDocument::Factor(cmd_factor(&input, Some(3)).unwrap()),
        ];
        for doc in docs {
            let back: OutputDocument = parse_json(&to_json(&doc)).unwrap();
            assert_eq!(back, doc);
        }
    }

    #[test]
    fn rationals_are_strings() {
        let input = InputDocument::from_fan(fixtures::bl2p2());
        let text = to_json(&cmd_decompose(&input).unwrap());
        assert!(text.contains("\"1\""));
        assert!(!text.contains("1.0"));
    }

    #[test]
    fn bad_cones_are_named() {
        let text = r#"{"fan": {"lattice_rank": 2, "rays": [[1,0],[0,1]], "max_cones": [[0,5]]}}"#;
        assert_eq!(InputDocument::parse(text).unwrap_err().kind(), "invalid-fan");
    }

    #[test]
    fn verify_passes_on_a_fresh_factorisation() {
        let input = quadric_input();
        let doc = cmd_factor(&input, None).unwrap();
        let report = cmd_verify(&input, &doc).unwrap();
        assert!(report.passed, "{:?}", report.failures().collect::<Vec<_>>());
    }
}
