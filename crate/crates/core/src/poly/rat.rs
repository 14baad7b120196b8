//! Rational scalars and dense rational vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;
pub type QVector = Vec<Rat>;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn qvec(v: &[i64]) -> QVector {
    v.iter().map(|&x| rat(x)).collect()
}

pub fn zeros(n: usize) -> QVector {
    vec![Rat::zero(); n]
}

pub fn unit(n: usize, i: usize) -> QVector {
    let mut v = zeros(n);
    v[i] = Rat::one();
    v
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    // One normalisation at the end instead of one per term.
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for (x, y) in a.iter().zip(b) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        let p = x.numer() * y.numer();
        let q = x.denom() * y.denom();
        if q == den {
            num += p;
        } else if q.is_one() {
            num += p * &den;
        } else {
            num = num * &q + p * &den;
            den *= q;
        }
    }
    Rat::new(num, den)
}

pub fn add(a: &[Rat], b: &[Rat]) -> QVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rat], b: &[Rat]) -> QVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Rat], s: &Rat) -> QVector {
    a.iter().map(|x| x * s).collect()
}

pub fn neg(a: &[Rat]) -> QVector {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero(a: &[Rat]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn sum<'a>(n: usize, vs: impl IntoIterator<Item = &'a QVector>) -> QVector {
    vs.into_iter().fold(zeros(n), |acc, v| add(&acc, v))
}

/// Positive rescaling of `v` to a primitive integer vector. The zero vector is
/// returned unchanged.
pub fn primitive(v: &[Rat]) -> QVector {
    from_int(&primitive_int(v))
}

pub fn primitive_int(v: &[Rat]) -> Vec<BigInt> {
    let den = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &den).to_integer()).collect();
    primitive_bigint(ints)
}

pub fn primitive_bigint(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
    v
}

pub fn from_int(v: &[BigInt]) -> QVector {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

pub fn from_i64(v: &[i64]) -> QVector {
    qvec(v)
}

/// Integer entries as `i64`, or `None` when some entry is fractional or too
/// large.
pub fn to_i64(v: &[Rat]) -> Option<Vec<i64>> {
    v.iter()
        .map(|x| {
            if x.is_integer() {
                i64::try_from(x.to_integer()).ok()
            } else {
                None
            }
        })
        .collect()
}

pub fn sign(x: &Rat) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Serialises as `p/q` (or `p` for integers).
pub fn format_rat(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rat::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rat::from_integer),
    }
}

pub fn to_f64(x: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// Lexicographic comparison helper for sorting canonical vectors.
pub fn cmp_vec(a: &[Rat], b: &[Rat]) -> std::cmp::Ordering {
    a.iter().cmp(b.iter())
}

/// Orientation of the planar pair `(u, v)`: sign of the 2x2 determinant.
pub fn cross2(u: &[Rat], v: &[Rat]) -> Rat {
    &u[0] * &v[1] - &u[1] * &v[0]
}

/// Total angular order of nonzero planar vectors, starting at the positive
/// x-axis and turning counter-clockwise.
pub fn angle_cmp(u: &[Rat], v: &[Rat]) -> std::cmp::Ordering {
    fn half(w: &[Rat]) -> u8 {
        if w[1].is_positive() || (w[1].is_zero() && w[0].is_positive()) {
            0
        } else {
            1
        }
    }
    half(u).cmp(&half(v)).then_with(|| {
        let c = cross2(u, v);
        if c.is_positive() {
            std::cmp::Ordering::Less
        } else if c.is_negative() {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Equal
        }
    })
}

/// Deterministic weights `1 + 1/(p_i + 7 attempt)` over the primes `p_i`;
/// used to pick points off finitely many special hyperplanes.
pub fn generic_weights(n: usize, attempt: usize) -> QVector {
    let mut primes: Vec<i64> = Vec::with_capacity(n);
    let mut c = 2i64;
    while primes.len() < n {
        if primes.iter().all(|p| c % p != 0) {
            primes.push(c);
        }
        c += 1;
    }
    primes
        .iter()
        .map(|&p| Rat::one() + ratio(1, p + 7 * attempt as i64))
        .collect()
}

/// `sum w_i v_i` with [`generic_weights`].
pub fn generic_combination(dim: usize, vs: &[QVector], attempt: usize) -> QVector {
    let w = generic_weights(vs.len(), attempt);
    vs.iter()
        .zip(&w)
        .fold(zeros(dim), |acc, (v, wi)| add(&acc, &scale(v, wi)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_scales_to_coprime_integers() {
        let v = vec![ratio(1, 2), ratio(3, 4), rat(0)];
        assert_eq!(primitive(&v), qvec(&[2, 3, 0]));
        assert_eq!(primitive(&qvec(&[-4, 6])), qvec(&[-2, 3]));
        assert_eq!(primitive(&zeros(3)), zeros(3));
    }

    #[test]
    fn rat_strings_round_trip() {
        for s in ["3", "-7/4", "0", "12/5"] {
            assert_eq!(format_rat(&parse_rat(s).unwrap()), s);
        }
        assert_eq!(parse_rat("6/4"), Some(ratio(3, 2)));
        assert!(parse_rat("1/0").is_none());
        assert!(parse_rat("x").is_none());
    }

    #[test]
    fn angular_order_is_counter_clockwise() {
        let mut vs = vec![qvec(&[0, -1]), qvec(&[-1, 0]), qvec(&[1, 1]), qvec(&[1, 0])];
        vs.sort_by(|a, b| angle_cmp(a, b));
        assert_eq!(
            vs,
            vec![qvec(&[1, 0]), qvec(&[1, 1]), qvec(&[-1, 0]), qvec(&[0, -1])]
        );
    }
}
