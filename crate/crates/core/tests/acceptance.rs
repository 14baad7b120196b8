//! One pass/fail line per acceptance criterion. Run with
//! `cargo test -p sarkisov-core --test acceptance`.

use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sarkisov_core::chamber::{mori_decomposition, Decomposition};
use sarkisov_core::demo;
use sarkisov_core::fixtures;
use sarkisov_core::oracle::{brute_force_decomposition, decomposition_difference, mmp_in, verify_factorization};
use sarkisov_core::poly::rat::{self, QVector, Rat};
use sarkisov_core::sarkisov::{
    elementary_transformation_check, factor_in, FactorOptions, LinkType, PKind, SKind,
};
use sarkisov_core::slice::discover_mfs;
use sarkisov_core::toric::{Fan, ToricVariety};

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: false,
        detail: detail.into(),
    }
}

fn criterion(n: usize, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let ok = out.ok && elapsed < limit;
    println!(
        "[{}] {n}. {name}: {} ({:.3} s, limit {} s)",
        if ok { "PASS" } else { "FAIL" },
        out.detail,
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    ok
}

fn c1() -> Outcome {
    let d = match demo::run("bl2p2", 0) {
        Ok(d) => d,
        Err(e) => return fail(e.to_string()),
    };
    let chambers = d.decomposition.full_chambers().count();
    let types = d.factorization.link_types();
    let names: Vec<String> = d.vertex_names().into_iter().map(|n| n.unwrap_or_else(|| "?".into())).collect();
    let detail = format!("{chambers} chambers, links {types:?} at {names:?}");
    use LinkType::*;
    if chambers == 5 && types == [IVm, II, III, I, II] && names == ["L", "L+E2", "E2", "E1", "L+E1"] {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn c2() -> Outcome {
    match demo::run("p1xp1", 0) {
        Ok(d) if d.factorization.link_types() == [LinkType::IVm] => pass("one IVm link"),
        Ok(d) => fail(format!("links {:?}", d.factorization.link_types())),
        Err(e) => fail(e.to_string()),
    }
}

fn c3a() -> Outcome {
    let run = || -> sarkisov_core::Result<(Vec<LinkType>, Vec<LinkType>)> {
        let fan = fixtures::hirzebruch(1);
        let d = mori_decomposition(&ToricVariety::new(&fan)?)?;
        let mfs = discover_mfs(&d);
        let p2 = mfs.iter().find(|m| m.base.dim() == 0).expect("P2 over a point");
        let ruling = mfs.iter().find(|m| m.base.dim() == 1).expect("F1 ruling");
        let fwd = factor_in(&d, p2, ruling, 0, &FactorOptions::default())?;
        let back = factor_in(&d, ruling, p2, 0, &FactorOptions::default())?;
        Ok((fwd.link_types(), back.link_types()))
    };
    match run() {
        Ok((f, b)) if f == [LinkType::I] && b == [LinkType::III] => pass("P2 -> F1 is I, F1 -> P2 is III"),
        Ok((f, b)) => fail(format!("forward {f:?}, reverse {b:?}")),
        Err(e) => fail(e.to_string()),
    }
}

fn c3b() -> Outcome {
    let mut details = Vec::new();
    for a in [0, 1] {
        let l = match elementary_transformation_check(&fixtures::ruled_blowup(a), 0) {
            Ok(l) => l,
            Err(e) => return fail(format!("a = {a}: {e}")),
        };
        let xp = l.xp.as_ref().map_or(0, |m| m.num_rays());
        let yp = l.yp.as_ref().map_or(0, |m| m.num_rays());
        let ok = l.link_type == LinkType::II
            && l.p_kind == PKind::DivisorialExtraction
            && l.q_kind == PKind::DivisorialExtraction
            && xp == l.x.num_rays() + 1
            && yp == l.y.num_rays() + 1;
        details.push(format!(
            "a = {a}: {}, p {} -> {xp} rays, q {yp} -> {} rays",
            l.link_type,
            l.x.num_rays(),
            l.y.num_rays()
        ));
        if !ok {
            return fail(details.join("; "));
        }
    }
    pass(details.join("; "))
}

fn c4() -> Outcome {
    match demo::run("ivs4fold", 0) {
        Ok(d) => {
            let f = &d.factorization;
            let detail = format!("links {:?}", f.link_types());
            match &f.links[..] {
                [l] if l.link_type == LinkType::IVs
                    && !l.r.is_simplicial()
                    && l.s_kind == SKind::Small
                    && l.t_kind == SKind::Small =>
                {
                    pass(format!("{detail}, R non-simplicial with {} rays, s and t small", l.r.num_rays()))
                }
                _ => fail(detail),
            }
        }
        Err(e) => fail(e.to_string()),
    }
}

fn fleet() -> Vec<(String, Fan, Decomposition)> {
    fixtures::fleet()
        .into_iter()
        .map(|(name, fan)| {
            let d = mori_decomposition(&ToricVariety::new(&fan).expect("fleet fan")).expect("decomposition");
            (name, fan, d)
        })
        .collect()
}

fn c5(fleet: &[(String, Fan, Decomposition)]) -> Outcome {
    if fleet.len() < 20 || fleet.iter().any(|(_, f, _)| f.rays.len() > 8) {
        return fail(format!("fleet of {} fans", fleet.len()));
    }
    let mut cells = 0;
    for (name, fan, d) in fleet {
        match brute_force_decomposition(fan) {
            Ok(b) => {
                let diff = decomposition_difference(d, &b);
                if !diff.is_empty() {
                    return fail(format!("{name}: {}", diff.join("; ")));
                }
                cells += d.chambers.len();
            }
            Err(e) => return fail(format!("{name}: {e}")),
        }
    }
    pass(format!("{} fans, {cells} cells equal", fleet.len()))
}

fn c6(fleet: &[(String, Fan, Decomposition)]) -> Outcome {
    for (name, _, d) in fleet {
        match d.check_relative_picard() {
            Ok(v) if v.is_empty() => {}
            Ok(v) => return fail(format!("{name}: {}", v.join("; "))),
            Err(e) => return fail(format!("{name}: {e}")),
        }
    }
    pass(format!("{} fans", fleet.len()))
}

fn positive_combination(rng: &mut ChaCha8Rng, gens: &[QVector], dim: usize) -> QVector {
    gens.iter().fold(rat::zeros(dim), |acc, g| {
        rat::add(&acc, &rat::scale(g, &Rat::new(rng.gen_range(1i64..=1000).into(), 97.into())))
    })
}

fn c7(fleet: &[(String, Fan, Decomposition)]) -> Outcome {
    let mut walks = 0;
    let mut steps = 0;
    for (name, _, d) in fleet {
        let z = &d.variety;
        let rho = z.picard_rank();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for i in 0..100 {
            let phi = positive_combination(&mut rng, &z.ray_classes, rho);
            let mut h = positive_combination(&mut rng, &z.nef.rays, rho);
            while !z.nef.contains_relint(&rat::add(&phi, &h)) {
                h = rat::scale(&h, &Rat::from_integer(2.into()));
            }
            let trace = match mmp_in(d, &phi, &h, i) {
                Ok(t) => t,
                Err(e) => return fail(format!("{name} walk {i}: {e}")),
            };
            let want = match z.ample_model(&phi) {
                Ok(m) => m,
                Err(e) => return fail(format!("{name} walk {i}: {e}")),
            };
            if *trace.final_model() != want {
                return fail(format!("{name} walk {i}: ended at {}", trace.final_model().fingerprint()));
            }
            if !trace.steps.windows(2).all(|w| w[0].t > w[1].t) || trace.steps.iter().any(|s| !s.t.is_positive() && !s.t.is_zero()) {
                return fail(format!("{name} walk {i}: crossing parameters not decreasing"));
            }
            walks += 1;
            steps += trace.steps.len();
        }
    }
    pass(format!("{walks} walks, {steps} steps, all at the ample model"))
}

fn c8(fleet: &[(String, Fan, Decomposition)]) -> Outcome {
    let mut pairs = 0;
    let mut links = 0;
    for (name, _, d) in fleet {
        let mfs = discover_mfs(d);
        for a in &mfs {
            for b in &mfs {
                if a == b {
                    continue;
                }
                let mut types = None;
                for seed in 0..5 {
                    let f = match factor_in(d, a, b, seed, &FactorOptions::default()) {
                        Ok(f) => f,
                        Err(e) => return fail(format!("{name} seed {seed}: {e}")),
                    };
                    let report = verify_factorization(&f);
                    if !report.passed {
                        let bad: Vec<String> = report.failures().map(|c| format!("{} ({})", c.name, c.detail)).collect();
                        return fail(format!("{name} seed {seed}: {}", bad.join("; ")));
                    }
                    let t = f.link_types();
                    match &types {
                        None => types = Some(t),
                        Some(prev) if *prev != t => {
                            return fail(format!("{name}: seed {seed} gives {t:?}, seed 0 gave {prev:?}"))
                        }
                        _ => {}
                    }
                }
                pairs += 1;
                links += types.map_or(0, |t| t.len());
            }
        }
    }
    pass(format!("{pairs} ordered pairs x 5 seeds verified, {links} links per seed"))
}

fn main() {
    let s = Duration::from_secs;
    let mut ok = true;
    ok &= criterion(1, "Bl2P2 figure", s(1), c1);
    ok &= criterion(2, "P1xP1 projections", s(1), c2);
    ok &= criterion(3, "F1 type I / III", s(1), c3a);
    ok &= criterion(3, "elementary transformation", s(1), c3b);
    ok &= criterion(4, "IVs fourfold", s(10), c4);
    let start = Instant::now();
    let fleet = fleet();
    let build = start.elapsed();
    let budget = s(300).saturating_sub(build);
    println!("      fleet: {} fans decomposed in {:.3} s", fleet.len(), build.as_secs_f64());
    let t5 = Instant::now();
    ok &= criterion(5, "oracle equivalence", budget, || c5(&fleet));
    let budget6 = budget.saturating_sub(t5.elapsed());
    ok &= criterion(6, "Theorem 3.3 (4) identity", budget6, || c6(&fleet));
    ok &= criterion(7, "MMP with scaling endpoints", s(120), || c7(&fleet));
    ok &= criterion(8, "factorisation validity", s(600), || c8(&fleet));
    if !ok {
        std::process::exit(1);
    }
}
