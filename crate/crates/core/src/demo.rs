//! The worked examples: the `Bl_2 P^2` figure, the quadric, `F_1` and the
//! type IV_s fourfold.

use crate::chamber::{mori_decomposition, Decomposition};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::poly::rat;
use crate::sarkisov::{factor_in, FactorOptions, Factorization};
use crate::slice::{discover_mfs, mfs_cells, recognize, MfsSpec, MoriFibreSpace, SliceOptions};
use crate::toric::{Fan, ToricVariety};

pub const NAMES: [&str; 4] = ["bl2p2", "p1xp1", "f1", "ivs4fold"];

/// A demo run: the input fan, its decomposition and the factorisation.
#[derive(Clone, Debug)]
pub struct Demo {
    pub name: &'static str,
    pub fan: Fan,
    pub decomposition: Decomposition,
    pub factorization: Factorization,
    /// Human names for ray indices, where the example has them.
    pub ray_names: Vec<String>,
}

fn decompose(fan: &Fan) -> Result<Decomposition> {
    mori_decomposition(&ToricVariety::new(fan)?)
}

fn base_spec(base_fan: Fan, lattice_map: Vec<Vec<i64>>) -> MfsSpec {
    MfsSpec {
        base_fan,
        lattice_map,
        total_fan: None,
    }
}

pub fn run(name: &str, seed: u64) -> Result<Demo> {
    match name {
        "bl2p2" => bl2p2(seed),
        "p1xp1" => pair(
            "p1xp1",
            fixtures::p1xp1(),
            base_spec(fixtures::p1(), vec![vec![1, 0]]),
            base_spec(fixtures::p1(), vec![vec![0, 1]]),
            seed,
        ),
        "f1" => pair(
            "f1",
            fixtures::hirzebruch(1),
            base_spec(Fan::point(), vec![]),
            base_spec(fixtures::p1(), vec![vec![1, 0]]),
            seed,
        ),
        "ivs4fold" => pair(
            "ivs4fold",
            fixtures::ivs_fourfold(),
            base_spec(fixtures::atiyah_source(), first_coordinates(3, 4)),
            base_spec(fixtures::atiyah_flop(), first_coordinates(3, 4)),
            seed,
        ),
        other => Err(Error::Unsupported(format!(
            "unknown demo {other:?}; expected one of {}",
            NAMES.join(", ")
        ))),
    }
}

fn first_coordinates(k: usize, n: usize) -> Vec<Vec<i64>> {
    (0..k).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

fn pair(name: &'static str, fan: Fan, src: MfsSpec, dst: MfsSpec, seed: u64) -> Result<Demo> {
    let decomposition = decompose(&fan)?;
    let src = recognize(&decomposition, &src)?;
    let dst = recognize(&decomposition, &dst)?;
    let factorization = factor_in(&decomposition, &src, &dst, seed, &FactorOptions::default())?;
    Ok(Demo {
        name,
        fan,
        decomposition,
        factorization,
        ray_names: Vec::new(),
    })
}

/// Ray names of [`fixtures::bl2p2`]: the line through both centres, the
/// exceptional curves and the lines through one centre each.
pub const BL2P2_RAYS: [&str; 5] = ["L", "E1", "E2", "L+E1", "L+E2"];

/// The full boundary walk of the figure: start on the fibration wall between
/// `L+E1` and `L` and go round towards `L`.
fn bl2p2(seed: u64) -> Result<Demo> {
    let fan = fixtures::bl2p2();
    let decomposition = decompose(&fan)?;
    let z = &decomposition.variety;
    let class = |i: usize| rat::primitive(&z.ray_classes[i]);
    let wanted = [class(0), class(3)];
    let src: MoriFibreSpace = mfs_cells(&decomposition)
        .into_iter()
        .find(|(c, _)| {
            let rays = &decomposition.chambers[*c].region.rays;
            rays.len() == 2 && wanted.iter().all(|w| rays.iter().any(|r| rat::primitive(r) == *w))
        })
        .map(|(_, m)| m)
        .ok_or_else(|| Error::Internal("no fibration wall between L and L+E1".into()))?;
    let options = FactorOptions {
        slice: SliceOptions {
            loop_mode: true,
            ..SliceOptions::default()
        },
        first_vertex: Some(z.ray_classes[0].clone()),
    };
    let factorization = factor_in(&decomposition, &src, &src, seed, &options)?;
    Ok(Demo {
        name: "bl2p2",
        fan,
        decomposition,
        factorization,
        ray_names: BL2P2_RAYS.iter().map(|s| s.to_string()).collect(),
    })
}

impl Demo {
    /// Name of the ray whose class spans the link's vertex cell, if any.
    pub fn vertex_names(&self) -> Vec<Option<String>> {
        let z = &self.decomposition.variety;
        self.factorization
            .links
            .iter()
            .map(|l| {
                let v = rat::primitive(&l.vertex_class);
                (0..z.num_rays())
                    .find(|&i| rat::primitive(&z.ray_classes[i]) == v)
                    .and_then(|i| self.ray_names.get(i).cloned())
            })
            .collect()
    }

    pub fn mfs(&self) -> Vec<MoriFibreSpace> {
        discover_mfs(&self.decomposition)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sarkisov::LinkType::*;

    #[test]
    fn bl2p2_figure() {
        let d = run("bl2p2", 11).unwrap();
        assert_eq!(d.decomposition.full_chambers().count(), 5);
        assert_eq!(d.factorization.link_types(), vec![IVm, II, III, I, II]);
        let names: Vec<String> = d.vertex_names().into_iter().map(|n| n.unwrap()).collect();
        assert_eq!(names, ["L", "L+E2", "E2", "E1", "L+E1"]);
    }

    #[test]
    fn small_demos() {
        assert_eq!(run("p1xp1", 1).unwrap().factorization.link_types(), vec![IVm]);
        assert_eq!(run("f1", 1).unwrap().factorization.link_types(), vec![I]);
        let ivs = run("ivs4fold", 1).unwrap();
        assert_eq!(ivs.factorization.link_types(), vec![IVs]);
        assert!(!ivs.factorization.links[0].r.is_simplicial());
    }
}
