//! Integer row reduction: Hermite normal forms, integer kernels and saturated
//! lattice bases.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::linalg;
use super::rat::{self, QVector};

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn to_big(m: &[Vec<i64>]) -> IntMatrix {
    m.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn to_i64(m: &IntMatrix) -> Option<Vec<Vec<i64>>> {
    m.iter()
        .map(|r| r.iter().map(|x| i64::try_from(x.clone()).ok()).collect())
        .collect()
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

fn row_sub(target: &mut [BigInt], src: &[BigInt], q: &BigInt) {
    for (t, s) in target.iter_mut().zip(src) {
        *t -= q * s;
    }
}

/// Row-style Hermite normal form. Returns `(h, u)` with `u` unimodular and
/// `h = u * a`; nonzero rows of `h` come first, pivots are positive and the
/// entries above each pivot lie in `[0, pivot)`.
pub fn hnf_with_transform(a: &[Vec<BigInt>], ncols: usize) -> (IntMatrix, IntMatrix) {
    let m = a.len();
    let mut h: IntMatrix = a.to_vec();
    let mut u = identity(m);
    let mut r = 0;
    for c in 0..ncols {
        if r == m {
            break;
        }
        let mut have_pivot = false;
        loop {
            let piv = (r..m)
                .filter(|&i| !h[i][c].is_zero())
                .min_by(|&i, &j| h[i][c].abs().cmp(&h[j][c].abs()));
            let Some(p) = piv else { break };
            have_pivot = true;
            h.swap(r, p);
            u.swap(r, p);
            let mut clean = true;
            for i in r + 1..m {
                if !h[i][c].is_zero() {
                    let q = h[i][c].div_floor(&h[r][c]);
                    let (hr, hi) = (h[r].clone(), &mut h[i]);
                    row_sub(hi, &hr, &q);
                    let ur = u[r].clone();
                    row_sub(&mut u[i], &ur, &q);
                    if !h[i][c].is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        if !have_pivot {
            continue;
        }
        if h[r][c].is_negative() {
            for x in h[r].iter_mut() {
                *x = -&*x;
            }
            for x in u[r].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let q = h[i][c].div_floor(&h[r][c]);
            if !q.is_zero() {
                let hr = h[r].clone();
                row_sub(&mut h[i], &hr, &q);
                let ur = u[r].clone();
                row_sub(&mut u[i], &ur, &q);
            }
        }
        r += 1;
    }
    (h, u)
}

/// Canonical basis (nonzero HNF rows) of the lattice spanned by `rows`.
pub fn lattice_hnf(rows: &[Vec<BigInt>], ncols: usize) -> IntMatrix {
    let (h, _) = hnf_with_transform(rows, ncols);
    h.into_iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect()
}

/// Basis of the integer kernel `{ x in Z^n : a x = 0 }` in Hermite normal form.
pub fn integer_kernel(a: &[Vec<BigInt>], n: usize) -> IntMatrix {
    if a.is_empty() {
        return identity(n);
    }
    let k = a.len();
    let at: IntMatrix = (0..n)
        .map(|j| (0..k).map(|i| a[i][j].clone()).collect())
        .collect();
    let (h, u) = hnf_with_transform(&at, k);
    let kernel: IntMatrix = h
        .iter()
        .zip(u)
        .filter(|(hr, _)| hr.iter().all(Zero::is_zero))
        .map(|(_, ur)| ur)
        .collect();
    lattice_hnf(&kernel, n)
}

/// Canonical basis of `W ∩ Z^n` where `W` is the rational span of `span`.
pub fn saturated_basis(span: &[QVector], n: usize) -> IntMatrix {
    let orth = linalg::nullspace(span, n);
    let orth_int: IntMatrix = orth.iter().map(|v| rat::primitive_int(v)).collect();
    integer_kernel(&orth_int, n)
}

/// Absolute determinant of a square integer matrix.
pub fn abs_det(a: &[Vec<BigInt>]) -> BigInt {
    let q: Vec<QVector> = a.iter().map(|r| rat::from_int(r)).collect();
    linalg::determinant(&q).to_integer().abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(m: &[&[i64]]) -> IntMatrix {
        m.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
        a.iter()
            .map(|r| {
                (0..b[0].len())
                    .map(|j| r.iter().zip(b).map(|(x, br)| x * &br[j]).sum())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn hnf_transform_is_consistent() {
        let a = big(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let (h, u) = hnf_with_transform(&a, 3);
        assert_eq!(mul(&u, &a), h);
        assert_eq!(abs_det(&u), BigInt::one());
        assert!(h[0][0] > BigInt::zero());
    }

    #[test]
    fn kernel_of_ray_relations() {
        // Rays of P^2: the kernel of the transpose is the single relation (1,1,1).
        let rays_t = big(&[&[1, 0, -1], &[0, 1, -1]]);
        let k = integer_kernel(&rays_t, 3);
        assert_eq!(k, big(&[&[1, 1, 1]]));
    }

    #[test]
    fn saturation_of_a_non_primitive_span() {
        let b = saturated_basis(&[rat::qvec(&[2, 2, 0])], 3);
        assert_eq!(b, big(&[&[1, 1, 0]]));
    }
}
