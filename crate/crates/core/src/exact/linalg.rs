//! Exact linear algebra over Q and over prime fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::Rational;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                    if !y.is_zero() {
                        *x = &*x - &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of `{v : m v = 0}`; each vector has a 1 in one free column.
pub fn nullspace(m: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][f].clone();
            }
            v
        })
        .collect()
}

pub fn rank(m: &[Vec<Rational>]) -> usize {
    let mut a = m.to_vec();
    rref(&mut a).len()
}

pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    det
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    r
}

pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    (!a.is_multiple_of(p)).then(|| pow_mod(a, p - 2, p))
}

pub fn bigint_mod(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    r.to_u64().expect("reduced")
}

/// Image of a rational in F_p, or `None` when `p` divides the denominator.
pub fn rational_mod(q: &Rational, p: u64) -> Option<u64> {
    let d = inv_mod(bigint_mod(q.denom(), p), p)?;
    Some(mul_mod(bigint_mod(q.numer(), p), d, p))
}

/// Gaussian elimination over F_p; returns `(rank, det)` where `det` is only
/// meaningful for square input.
fn eliminate_mod(mut a: Vec<Vec<u64>>, p: u64) -> (usize, u64) {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut det = 1u64;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else {
            det = 0;
            continue;
        };
        if piv != r {
            a.swap(piv, r);
            det = (p - det) % p;
        }
        det = mul_mod(det, a[r][c], p);
        let inv = inv_mod(a[r][c], p).expect("nonzero pivot");
        for i in r + 1..rows {
            if a[i][c] == 0 {
                continue;
            }
            let f = mul_mod(a[i][c], inv, p);
            for j in c..cols {
                let t = mul_mod(f, a[r][j], p);
                a[i][j] = (a[i][j] + p - t) % p;
            }
        }
        r += 1;
    }
    (r, det)
}

pub fn rank_mod(m: &[Vec<u64>], p: u64) -> usize {
    eliminate_mod(m.to_vec(), p).0
}

/// Determinant of a square matrix over F_p, as a residue in `0..p`.
pub fn det_mod(m: &[Vec<u64>], p: u64) -> u64 {
    assert!(m.iter().all(|r| r.len() == m.len()), "square matrix expected");
    let (rank, det) = eliminate_mod(m.to_vec(), p);
    if rank < m.len() {
        0
    } else {
        det
    }
}

/// Clears denominators of a rational vector and removes the integer content,
/// making the first nonzero entry positive.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| (q * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    ints.into_iter()
        .map(|x| if sign { -(x / &g) } else { x / &g })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn nullspace_of_rank_one() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for row in &a {
                let s: Rational = row.iter().zip(v).map(|(x, y)| x * y).sum();
                assert!(s.is_zero());
            }
        }
        assert_eq!(rank(&a), 1);
    }

    #[test]
    fn determinants_agree_over_q_and_fp() {
        let a = m(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 1]]);
        // cofactor expansion: 2(3-2) - 0 + 1(1-3) = 0
        assert_eq!(determinant(&a), int(0));
        let b = m(&[&[4, 7], &[2, 6]]);
        assert_eq!(determinant(&b), int(10));
        let p = 1_000_003;
        let bm: Vec<Vec<u64>> = vec![vec![4, 7], vec![2, 6]];
        assert_eq!(det_mod(&bm, p), 10);
        let swapped: Vec<Vec<u64>> = vec![vec![2, 6], vec![4, 7]];
        assert_eq!(det_mod(&swapped, p), p - 10);
        assert_eq!(rank_mod(&[vec![1, 2], vec![2, 4]], p), 1);
    }

    #[test]
    fn rationals_reduce_mod_p() {
        let p = 7;
        assert_eq!(rational_mod(&rat(1, 2), p), Some(4));
        assert_eq!(rational_mod(&rat(-1, 3), p), Some(2));
        assert_eq!(rational_mod(&rat(1, 7), p), None);
        assert_eq!(inv_mod(3, 7), Some(5));
    }

    #[test]
    fn primitive_vectors() {
        let v = vec![rat(-1, 2), rat(1, 3), int(0)];
        assert_eq!(primitive_integer_vector(&v), vec![BigInt::from(3), BigInt::from(-2), BigInt::from(0)]);
    }
}
