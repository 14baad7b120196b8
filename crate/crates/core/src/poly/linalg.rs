//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use super::rat::{self, QVector, Rat};

/// Reduced row echelon form of `rows` (each of length `ncols`). Returns the
/// nonzero rows and their pivot columns.
pub fn rref(rows: &[QVector], ncols: usize) -> (Vec<QVector>, Vec<usize>) {
    let mut m: Vec<QVector> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rat::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[QVector], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{ x : row . x = 0 for every row }`.
pub fn nullspace(rows: &[QVector], ncols: usize) -> Vec<QVector> {
    let (r, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = rat::zeros(ncols);
            v[f] = Rat::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Canonical basis of the row space (reduced echelon rows rescaled to
/// primitive integer vectors).
pub fn canonical_span(rows: &[QVector], ncols: usize) -> Vec<QVector> {
    rref(rows, ncols).0.iter().map(|r| rat::primitive(r)).collect()
}

/// One solution of `a x = b`, if any.
pub fn solve(a: &[QVector], b: &[Rat], ncols: usize) -> Option<QVector> {
    let aug: Vec<QVector> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = rat::zeros(ncols);
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

pub fn inverse(a: &[QVector]) -> Option<Vec<QVector>> {
    let n = a.len();
    let aug: Vec<QVector> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend(rat::unit(n, i));
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn transpose(a: &[QVector], ncols: usize) -> Vec<QVector> {
    (0..ncols)
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_vec(a: &[QVector], x: &[Rat]) -> QVector {
    a.iter().map(|row| rat::dot(row, x)).collect()
}

pub fn mat_mul(a: &[QVector], b: &[QVector], bcols: usize) -> Vec<QVector> {
    let bt = transpose(b, bcols);
    a.iter()
        .map(|row| bt.iter().map(|col| rat::dot(row, col)).collect())
        .collect()
}

pub fn determinant(a: &[QVector]) -> Rat {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        for i in c + 1..n {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &m[c][c];
                for j in c..n {
                    let delta = &f * &m[c][j];
                    m[i][j] -= delta;
                }
            }
        }
    }
    det
}

/// Orthogonal projection of `x` onto the orthogonal complement of the span of
/// `basis`.
pub fn project_out(x: &[Rat], basis: &[QVector], ncols: usize) -> QVector {
    if basis.is_empty() {
        return x.to_vec();
    }
    // Solve the normal equations G c = B x and subtract B^T c.
    let gram: Vec<QVector> = basis
        .iter()
        .map(|b| basis.iter().map(|c| rat::dot(b, c)).collect())
        .collect();
    let rhs: QVector = basis.iter().map(|b| rat::dot(b, x)).collect();
    let coeffs = solve(&gram, &rhs, basis.len()).expect("Gram matrix of an independent basis");
    let mut out = x.to_vec();
    for (b, c) in basis.iter().zip(&coeffs) {
        for j in 0..ncols {
            out[j] -= &b[j] * c;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat::{qvec, ratio};

    #[test]
    fn nullspace_of_rank_one_matrix() {
        let ns = nullspace(&[qvec(&[1, 1, 1])], 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(rat::dot(v, &qvec(&[1, 1, 1])).is_zero());
        }
    }

    #[test]
    fn inverse_and_determinant_agree() {
        let a = vec![qvec(&[2, 1]), qvec(&[1, 1])];
        let inv = inverse(&a).unwrap();
        assert_eq!(inv, vec![qvec(&[1, -1]), qvec(&[-1, 2])]);
        assert_eq!(determinant(&a), rat::rat(1));
        assert!(inverse(&[qvec(&[1, 2]), qvec(&[2, 4])]).is_none());
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = vec![qvec(&[1, 1]), qvec(&[2, 2])];
        assert!(solve(&a, &qvec(&[1, 3]), 2).is_none());
        let x = solve(&a, &qvec(&[1, 2]), 2).unwrap();
        assert_eq!(&x[0] + &x[1], rat::rat(1));
    }

    #[test]
    fn projection_removes_span_component() {
        let p = project_out(&qvec(&[1, 2]), &[qvec(&[1, 1])], 2);
        assert_eq!(p, vec![ratio(-1, 2), ratio(1, 2)]);
    }
}
