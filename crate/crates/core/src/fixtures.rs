//! Named fans used by the demos and the test fleet.

use std::collections::BTreeSet;

use crate::toric::Fan;

fn cyclic_surface(rays: Vec<Vec<i64>>) -> Fan {
    let n = rays.len();
    let cones = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
    Fan::new(2, rays, cones).expect("valid surface fan")
}

pub fn p2() -> Fan {
    cyclic_surface(vec![vec![1, 0], vec![0, 1], vec![-1, -1]])
}

pub fn p1xp1() -> Fan {
    hirzebruch(0)
}

/// `F_a` with rays `(1,0), (0,1), (-1,a), (0,-1)`; the ruling is the first coordinate.
pub fn hirzebruch(a: i64) -> Fan {
    cyclic_surface(vec![vec![1, 0], vec![0, 1], vec![-1, a], vec![0, -1]])
}

/// `P^2` blown up in two points. Rays `L, E1, E2, L1, L2`; the first
/// maximal cone is `{L1, L2}` so that `{L, E1, E2}` is the class basis.
pub fn bl2p2() -> Fan {
    Fan::new(
        2,
        vec![vec![0, 1], vec![1, 1], vec![-1, 0], vec![-1, -1], vec![1, 0]],
        vec![vec![3, 4], vec![1, 4], vec![0, 1], vec![0, 2], vec![2, 3]],
    )
    .expect("valid fan")
}

/// `F_a` blown up at the torus-fixed point of the cone `{(1,0),(0,1)}`.
pub fn ruled_blowup(a: i64) -> Fan {
    cyclic_surface(vec![vec![1, 0], vec![1, 1], vec![0, 1], vec![-1, a], vec![0, -1]])
}

/// The elementary transform of [`ruled_blowup`]: the old fibre `(1,0)` removed.
pub fn ruled_transform(a: i64) -> Fan {
    cyclic_surface(vec![vec![1, 1], vec![0, 1], vec![-1, a], vec![0, -1]])
}

const ATIYAH_RAYS: [[i64; 3]; 5] = [[1, 1, 1], [-1, 0, 0], [0, 1, 0], [0, 0, 1], [0, -1, -1]];

/// `P^2`-bundle over `P^1` containing the Atiyah flopping curve: rays
/// `b+, b-, f0, f1, f2`, cones `{b±} x {pairs of f}`.
pub fn atiyah_source() -> Fan {
    Fan::new(
        3,
        ATIYAH_RAYS.iter().map(|r| r.to_vec()).collect(),
        vec![
            vec![0, 2, 3],
            vec![0, 3, 4],
            vec![0, 2, 4],
            vec![1, 2, 3],
            vec![1, 3, 4],
            vec![1, 2, 4],
        ],
    )
    .expect("valid fan")
}

/// The flop of [`atiyah_source`] along the wall `{f0, f1}`.
pub fn atiyah_flop() -> Fan {
    Fan::new(
        3,
        ATIYAH_RAYS.iter().map(|r| r.to_vec()).collect(),
        vec![
            vec![0, 3, 4],
            vec![0, 2, 4],
            vec![1, 3, 4],
            vec![1, 2, 4],
            vec![0, 1, 2],
            vec![0, 1, 3],
        ],
    )
    .expect("valid fan")
}

/// Product of two fans.
pub fn product(a: &Fan, b: &Fan) -> Fan {
    let (da, db) = (a.lattice_rank, b.lattice_rank);
    let mut rays = Vec::new();
    for r in &a.rays {
        let mut v = r.clone();
        v.extend(std::iter::repeat_n(0, db));
        rays.push(v);
    }
    for r in &b.rays {
        let mut v = vec![0; da];
        v.extend(r.iter().copied());
        rays.push(v);
    }
    let mut cones = Vec::new();
    for ca in &a.max_cones {
        for cb in &b.max_cones {
            let mut c = ca.clone();
            c.extend(cb.iter().map(|i| i + a.rays.len()));
            cones.push(c);
        }
    }
    Fan::new(da + db, rays, cones).expect("product of fans")
}

pub fn p1() -> Fan {
    Fan::new(1, vec![vec![1], vec![-1]], vec![vec![0], vec![1]]).expect("valid fan")
}

/// Atiyah 3-fold times `P^1`: the ambient fan of the type IV_s example.
pub fn ivs_fourfold() -> Fan {
    product(&atiyah_source(), &p1())
}

pub fn p3() -> Fan {
    Fan::new(
        3,
        vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![-1, -1, -1]],
        vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
    )
    .expect("valid fan")
}

/// `P^3` blown up at the fixed point of the cone `{e1, e2, e3}`.
pub fn bl_point_p3() -> Fan {
    Fan::new(
        3,
        vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![-1, -1, -1], vec![1, 1, 1]],
        vec![vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3], vec![0, 1, 4], vec![0, 2, 4], vec![1, 2, 4]],
    )
    .expect("valid fan")
}

/// `P^3` blown up along the invariant line of the cone `{e1, e2}`.
pub fn bl_line_p3() -> Fan {
    Fan::new(
        3,
        vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![-1, -1, -1], vec![1, 1, 0]],
        vec![vec![0, 2, 3], vec![1, 2, 3], vec![0, 3, 4], vec![1, 3, 4], vec![0, 2, 4], vec![1, 2, 4]],
    )
    .expect("valid fan")
}

/// Self-intersection numbers of the boundary curves, read cyclically.
fn self_intersections(rays: &[Vec<i64>]) -> Vec<i64> {
    let n = rays.len();
    (0..n)
        .map(|i| {
            let (p, v, q) = (&rays[(i + n - 1) % n], &rays[i], &rays[(i + 1) % n]);
            let s = [p[0] + q[0], p[1] + q[1]];
            let k = if v[0] != 0 { s[0] / v[0] } else { s[1] / v[1] };
            -k
        })
        .collect()
}

/// Canonical form of a cyclic sequence up to rotation and reflection.
fn cyclic_key(seq: &[i64]) -> Vec<i64> {
    let n = seq.len();
    let mut best: Option<Vec<i64>> = None;
    for rev in [false, true] {
        let s: Vec<i64> = if rev { seq.iter().rev().copied().collect() } else { seq.to_vec() };
        for r in 0..n {
            let rot: Vec<i64> = s[r..].iter().chain(&s[..r]).copied().collect();
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_default()
}

/// Smooth complete toric surfaces with at most `max_rays` rays, obtained by
/// blowing up `P^2` and `F_a` (`a <= max_a`), one per isomorphism class.
pub fn surfaces(max_rays: usize, max_a: i64) -> Vec<(String, Fan)> {
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut out = Vec::new();
    let mut frontier: Vec<(String, Vec<Vec<i64>>)> = vec![("P2".into(), vec![vec![1, 0], vec![0, 1], vec![-1, -1]])];
    for a in 0..=max_a {
        frontier.push((format!("F{a}"), vec![vec![1, 0], vec![0, 1], vec![-1, a], vec![0, -1]]));
    }
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (name, rays) in frontier {
            let key = cyclic_key(&self_intersections(&rays));
            if !seen.insert(key.clone()) {
                continue;
            }
            let label = if rays.len() <= 4 {
                name.clone()
            } else {
                format!("S[{}]", key.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            };
            out.push((label, cyclic_surface(rays.clone())));
            if rays.len() < max_rays {
                let n = rays.len();
                for i in 0..n {
                    let (u, v) = (&rays[i], &rays[(i + 1) % n]);
                    let mut r = rays.clone();
                    r.insert(i + 1, vec![u[0] + v[0], u[1] + v[1]]);
                    next.push((name.clone(), r));
                }
            }
        }
        frontier = next;
    }
    out
}

/// Test fleet: the surfaces with at most seven rays over `F_a`, `a <= 2`,
/// plus a selection of threefolds.
pub fn fleet() -> Vec<(String, Fan)> {
    let mut out = surfaces(7, 2);
    out.push(("P3".into(), p3()));
    out.push(("P2xP1".into(), product(&p2(), &p1())));
    out.push(("P1xP1xP1".into(), product(&p1xp1(), &p1())));
    out.push(("P1xF1".into(), product(&p1(), &hirzebruch(1))));
    out.push(("BlptP3".into(), bl_point_p3()));
    out.push(("BllineP3".into(), bl_line_p3()));
    out.push(("Atiyah3".into(), atiyah_source()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::ToricVariety;

    #[test]
    fn named_fixtures_are_smooth_projective() {
        for f in [p2(), p1xp1(), hirzebruch(1), bl2p2(), ruled_blowup(0), ruled_transform(1), atiyah_source(), atiyah_flop(), p3(), bl_point_p3(), bl_line_p3(), ivs_fourfold()] {
            let z = ToricVariety::new(&f).unwrap_or_else(|e| panic!("{f:?}: {e}"));
            assert_eq!(z.picard_rank(), f.rays.len() - f.lattice_rank);
        }
    }

    #[test]
    fn self_intersections_of_f1() {
        assert_eq!(cyclic_key(&self_intersections(&hirzebruch(1).rays)), vec![-1, 0, 1, 0]);
    }

    #[test]
    fn fleet_has_distinct_surfaces() {
        let s = surfaces(5, 1);
        let names: Vec<&str> = s.iter().map(|(n, _)| n.as_str()).collect();
        assert!(names.contains(&"P2"));
        assert!(names.contains(&"F0"));
        assert!(fleet().len() >= 20);
    }
}
