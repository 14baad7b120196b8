//! Double description method over primitive integer vectors.
//!
//! Converts `{ x : A x >= 0, E x = 0 }` into generators (extreme rays modulo
//! the lineality space, plus a lineality basis). Constraints are inserted one
//! at a time; adjacency of rays uses the combinatorial zero-set test, which is
//! exact because the working ray set is kept irredundant.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::rat::primitive_bigint;

#[derive(Clone, Debug, Default)]
struct ZeroSet(Vec<u64>);

impl ZeroSet {
    fn insert(&mut self, i: usize) {
        let w = i / 64;
        if self.0.len() <= w {
            self.0.resize(w + 1, 0);
        }
        self.0[w] |= 1 << (i % 64);
    }

    fn intersection(&self, other: &Self) -> Self {
        ZeroSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn is_subset(&self, other: &Self) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(i, a)| a & !other.0.get(i).copied().unwrap_or(0) == 0)
    }

    fn all_below(n: usize) -> Self {
        let mut z = ZeroSet::default();
        for i in 0..n {
            z.insert(i);
        }
        z
    }
}

#[derive(Clone, Debug)]
struct Ray {
    v: Vec<BigInt>,
    zeros: ZeroSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generators {
    pub rays: Vec<Vec<BigInt>>,
    pub lineality: Vec<Vec<BigInt>>,
}

fn idot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn combine(a: &BigInt, x: &[BigInt], b: &BigInt, y: &[BigInt]) -> Vec<BigInt> {
    primitive_bigint(x.iter().zip(y).map(|(xi, yi)| a * xi + b * yi).collect())
}

/// Generators of `{ x in R^dim : a.x >= 0 for a in ineqs, e.x = 0 for e in eqs }`.
pub fn hrep_to_vrep(dim: usize, ineqs: &[Vec<BigInt>], eqs: &[Vec<BigInt>]) -> Generators {
    let mut constraints: Vec<Vec<BigInt>> = Vec::with_capacity(ineqs.len() + 2 * eqs.len());
    for e in eqs {
        constraints.push(e.clone());
        constraints.push(e.iter().map(|x| -x).collect());
    }
    constraints.extend(ineqs.iter().cloned());

    let mut lineality: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| BigInt::from(u8::from(i == j)))
                .collect()
        })
        .collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (c, a) in constraints.iter().enumerate() {
        if a.iter().all(Zero::is_zero) {
            continue;
        }
        if let Some(pos) = lineality.iter().position(|b| !idot(a, b).is_zero()) {
            let mut b0 = lineality.swap_remove(pos);
            let mut ab0 = idot(a, &b0);
            if ab0.is_negative() {
                b0 = b0.iter().map(|x| -x).collect();
                ab0 = -ab0;
            }
            for b in lineality.iter_mut() {
                let ab = idot(a, b);
                if !ab.is_zero() {
                    *b = combine(&ab0, b, &(-ab), &b0);
                }
            }
            for r in rays.iter_mut() {
                let ar = idot(a, &r.v);
                if !ar.is_zero() {
                    r.v = combine(&ab0, &r.v, &(-ar), &b0);
                }
                r.zeros.insert(c);
            }
            rays.push(Ray {
                v: b0,
                zeros: ZeroSet::all_below(c),
            });
            continue;
        }

        let vals: Vec<BigInt> = rays.iter().map(|r| idot(a, &r.v)).collect();
        let mut next: Vec<Ray> = Vec::new();
        for (r, val) in rays.iter().zip(&vals) {
            if val.is_zero() {
                let mut r = r.clone();
                r.zeros.insert(c);
                next.push(r);
            } else if val.is_positive() {
                next.push(r.clone());
            }
        }
        for (i, vi) in vals.iter().enumerate() {
            if !vi.is_positive() {
                continue;
            }
            for (j, vj) in vals.iter().enumerate() {
                if !vj.is_negative() {
                    continue;
                }
                let common = rays[i].zeros.intersection(&rays[j].zeros);
                let adjacent = rays.iter().enumerate().all(|(t, rt)| {
                    t == i || t == j || !common.is_subset(&rt.zeros)
                });
                if adjacent {
                    let v = combine(vi, &rays[j].v, &(-vj), &rays[i].v);
                    let mut zeros = common;
                    zeros.insert(c);
                    next.push(Ray { v, zeros });
                }
            }
        }
        rays = next;
    }

    Generators {
        rays: rays.into_iter().map(|r| r.v).collect(),
        lineality,
    }
}
