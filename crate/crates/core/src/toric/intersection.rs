//! Wall relations of simplicial complete fans: intersection numbers with
//! invariant curves, nef cones and the Mori fibre space condition.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::classes::ClassLattice;
use super::fan::{Fan, Wall};
use super::model::{ContractionKind, Model, ToricContraction};
use crate::error::{Error, Result};
use crate::poly::rat::{self, QVector, Rat};
use crate::poly::{linalg, Cone};

/// Relation `sum c_i v_i = 0` over the rays of `fan` supported on the wall
/// and its two neighbours, with `c` at the off-wall ray of `cone_a` equal to
/// one. `c_i` is a positive multiple of `D_i . C` for the wall curve `C`.
pub fn wall_relation(fan: &Fan, wall: &Wall) -> QVector {
    let d = fan.lattice_rank;
    let mut basis: Vec<usize> = wall.rays.clone();
    basis.push(wall.ray_b);
    let cols: Vec<QVector> = basis.iter().map(|&i| fan.ray_q(i)).collect();
    let a = linalg::transpose(&cols, d);
    let target = rat::neg(&fan.ray_q(wall.ray_a));
    let x = linalg::solve(&a, &target, basis.len()).expect("simplicial wall");
    let mut c = rat::zeros(fan.rays.len());
    c[wall.ray_a] = Rat::one();
    for (k, &i) in basis.iter().enumerate() {
        c[i] = x[k].clone();
    }
    c
}

/// Coordinates of `v` in the basis given by the rays of a simplicial cone.
fn cone_coordinates(fan: &Fan, cone: &[usize], v: &[Rat]) -> Option<QVector> {
    let cols: Vec<QVector> = cone.iter().map(|&i| fan.ray_q(i)).collect();
    let a = linalg::transpose(&cols, fan.lattice_rank);
    linalg::solve(&a, v, cone.len())
}

/// Linear map from ray coefficients on `model` (a birational simplicial
/// model of `ambient`) to ray coefficients on `ambient`, pulling back the
/// support function. Rows are indexed by ambient rays.
pub fn pullback_matrix(ambient: &Fan, model: &Fan) -> Result<Vec<QVector>> {
    let m = model.rays.len();
    let cones = model.cones();
    let mut out = Vec::with_capacity(ambient.rays.len());
    for i in 0..ambient.rays.len() {
        let v = ambient.ray_q(i);
        let c = cones
            .iter()
            .position(|c| c.contains(&v))
            .ok_or_else(|| Error::InvalidContraction("model fan does not cover a ray".into()))?;
        let coords = cone_coordinates(model, &model.max_cones[c], &v)
            .ok_or_else(|| Error::InvalidContraction("model cone is not simplicial".into()))?;
        let mut row = rat::zeros(m);
        for (k, &j) in model.max_cones[c].iter().enumerate() {
            row[j] = coords[k].clone();
        }
        out.push(row);
    }
    Ok(out)
}

/// Nef cone of a simplicial complete fan in its ray-coefficient space.
pub fn nef_coefficient_cone(fan: &Fan) -> Result<Cone> {
    let forms: Vec<QVector> = fan.walls().iter().map(|w| wall_relation(fan, w)).collect();
    Cone::from_hrep(fan.rays.len(), &forms, &[])
}

/// The cone of classes on the ambient variety whose ample model is dominated
/// by `model`: pullbacks of nef classes plus effective exceptional divisors.
pub fn pullback_region(ambient: &Fan, classes: &ClassLattice, model: &Fan) -> Result<Cone> {
    let nef = nef_coefficient_cone(model)?;
    let pb = pullback_matrix(ambient, model)?;
    let to_class = |a: &QVector| classes.class_of(&linalg::mat_vec(&pb, a));
    let mut gens: Vec<QVector> = nef.rays.iter().map(to_class).collect();
    let lin: Vec<QVector> = nef.lineality.iter().map(to_class).collect();
    let model_rays: Vec<&Vec<i64>> = model.rays.iter().collect();
    for (i, r) in ambient.rays.iter().enumerate() {
        if !model_rays.contains(&r) {
            gens.push(classes.ray_class(i));
        }
    }
    Cone::from_vrep(classes.picard_rank, &gens, &lin)
}

/// Validate `total -> base` as a Mori fibre space and return the contraction.
pub fn check_mori_fibre_space(total: &Model, base: &Model) -> Result<ToricContraction> {
    if !total.is_birational() {
        return Err(Error::NotMoriFibreSpace("total space is not birational to the input".into()));
    }
    if !total.is_simplicial() || !total.fan.is_complete() {
        return Err(Error::NotMoriFibreSpace("total space is not Q-factorial and complete".into()));
    }
    let c = ToricContraction::between(total, base)
        .map_err(|e| Error::NotMoriFibreSpace(format!("no contraction to the base: {e}")))?;
    if c.kind != ContractionKind::Fibration {
        return Err(Error::NotMoriFibreSpace("base dimension is not smaller".into()));
    }
    if c.relative_picard != 1 {
        return Err(Error::NotMoriFibreSpace(format!(
            "relative Picard number is {}, not 1",
            c.relative_picard
        )));
    }
    for w in total.fan.walls() {
        if !c.contracts(&w.rays) {
            continue;
        }
        let rel = wall_relation(&total.fan, &w);
        let minus_k = rel.iter().fold(Rat::zero(), |acc, x| acc + x);
        if !minus_k.is_positive() {
            return Err(Error::NotMoriFibreSpace(
                "-K is not relatively ample: a contracted curve has -K.C <= 0".into(),
            ));
        }
    }
    Ok(c)
}

/// Index of each ray of `model` among the rays of `ambient`.
pub fn ray_positions(ambient: &Fan, model: &Fan) -> Option<Vec<usize>> {
    let pos: BTreeMap<&Vec<i64>, usize> = ambient.rays.iter().enumerate().map(|(i, r)| (r, i)).collect();
    model.rays.iter().map(|r| pos.get(r).copied()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    fn f1() -> Fan {
        // Rays (1,0),(0,1),(-1,1),(0,-1): the fibration is the first coordinate.
        Fan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, 1], vec![0, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
        )
        .unwrap()
    }

    #[test]
    fn relation_of_a_wall_is_a_relation() {
        let f = f1();
        for w in f.walls() {
            let c = wall_relation(&f, &w);
            let s = (0..f.rays.len()).fold(rat::zeros(2), |acc, i| rat::add(&acc, &rat::scale(&f.ray_q(i), &c[i])));
            assert!(rat::is_zero(&s));
            assert!(c[w.ray_b].is_positive());
        }
    }

    #[test]
    fn ruling_of_f1_is_a_mori_fibre_space() {
        let f = f1();
        let total = Model::birational(&f);
        let base = Model {
            ambient_rank: 2,
            projection: vec![vec![1, 0]],
            fan: Fan::new(1, vec![vec![-1], vec![1]], vec![vec![0], vec![1]]).unwrap(),
        };
        let c = check_mori_fibre_space(&total, &base).unwrap();
        assert_eq!(c.relative_picard, 1);
    }

    #[test]
    fn f1_to_a_point_is_not_a_mori_fibre_space() {
        let total = Model::birational(&f1());
        let base = Model {
            ambient_rank: 2,
            projection: vec![],
            fan: Fan::point(),
        };
        assert!(matches!(
            check_mori_fibre_space(&total, &base),
            Err(Error::NotMoriFibreSpace(_))
        ));
    }

    #[test]
    fn nef_region_of_the_fan_itself() {
        let f = f1();
        let cl = ClassLattice::new(&f).unwrap();
        let region = pullback_region(&f, &cl, &f).unwrap();
        assert!(region.is_full_dimensional());
        // Fibre D_0 and the positive section D_3 are nef; the (-1)-section D_1 is not.
        assert!(region.contains(&cl.ray_class(0)));
        assert!(region.contains(&cl.ray_class(3)));
        assert!(!region.contains(&cl.ray_class(1)));
    }
}
