//! Modular certificate that a sequence satisfies no order-2 recurrence with
//! polynomial coefficients of bounded degree.
//!
//! A relation `Σ_{j<=2} P_j(n) a_{n+j} = 0` with `deg P_j <= D` is a kernel
//! vector of the matrix with entries `n^d a_{n+j}`; a nonzero determinant of
//! a square block (mod p) rules it out.

use num_bigint::BigInt;

use super::ScanError;
use crate::exact::linalg::{bigint_mod, det_mod, pow_mod};

pub const DEFAULT_DEGREE_BOUND: usize = 12;
pub const DEFAULT_PRIME: u64 = 1_000_003;
const ORDER: usize = 2;

/// Rows `n = 0..3(D+1)`, columns `(j, d)` with `j` outer and `d` inner, both
/// ascending.
pub fn nonexistence_matrix(seq: &[BigInt], deg_bound: usize, prime: u64) -> Result<Vec<Vec<u64>>, ScanError> {
    let size = (ORDER + 1) * (deg_bound + 1);
    let needed = size - 1 + ORDER + 1;
    if seq.len() < needed {
        return Err(ScanError::InsufficientData { needed, have: seq.len() });
    }
    let reduced: Vec<u64> = seq.iter().map(|a| bigint_mod(a, prime)).collect();
    Ok((0..size)
        .map(|n| {
            let mut row = Vec::with_capacity(size);
            for j in 0..=ORDER {
                for d in 0..=deg_bound {
                    // 0^0 = 1
                    let nd = pow_mod(n as u64, d as u64, prime);
                    row.push((nd as u128 * reduced[n + j] as u128 % prime as u128) as u64);
                }
            }
            row
        })
        .collect())
}

pub fn order2_nonexistence_determinant_with(seq: &[BigInt], deg_bound: usize, prime: u64) -> Result<u64, ScanError> {
    Ok(det_mod(&nonexistence_matrix(seq, deg_bound, prime)?, prime))
}

/// The 39×39 determinant mod 1000003 over `a_0..a_40`.
pub fn order2_nonexistence_determinant(seq: &[BigInt]) -> Result<u64, ScanError> {
    order2_nonexistence_determinant_with(seq, DEFAULT_DEGREE_BOUND, DEFAULT_PRIME)
}

/// `r` or `p - r`.
pub fn matches_up_to_sign(residue: u64, expected: u64, prime: u64) -> bool {
    residue == expected % prime || residue == (prime - expected % prime) % prime
}

/// Terms `a_0..a_40` of a table row.
pub fn table_row_sequence(label: u32) -> Result<Vec<BigInt>, ScanError> {
    let row = super::reference_row(label)?;
    let s = row.tuple.squared_series(40)?;
    if let Some(bad) = s.coeffs().iter().find(|c| !c.is_integer()) {
        return Err(ScanError::NonIntegral(label, bad.to_string()));
    }
    Ok(s.coeffs().iter().map(|c| c.to_integer()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::registry::{a036917_convolution, domb_operator};

    #[test]
    fn row_two_residue() {
        let r = order2_nonexistence_determinant(&table_row_sequence(2).unwrap()).unwrap();
        assert!(matches_up_to_sign(r, 881437, DEFAULT_PRIME), "got {r}");
    }

    #[test]
    fn recurrent_sequences_give_zero() {
        let domb: Vec<BigInt> =
            domb_operator().solve_forward(&[int(1), int(4)], 40).unwrap().iter().map(|q| q.to_integer()).collect();
        assert_eq!(order2_nonexistence_determinant(&domb).unwrap(), 0);
        let a036917: Vec<BigInt> = (0..=40).map(a036917_convolution).collect();
        assert_eq!(order2_nonexistence_determinant(&a036917).unwrap(), 0);
    }

    #[test]
    fn short_input_rejected() {
        let seq = vec![BigInt::from(1); 40];
        assert!(matches!(
            order2_nonexistence_determinant(&seq),
            Err(ScanError::InsufficientData { needed: 41, have: 40 })
        ));
    }

    #[test]
    fn sign_rule() {
        assert!(matches_up_to_sign(5, 5, 11));
        assert!(matches_up_to_sign(6, 5, 11));
        assert!(!matches_up_to_sign(7, 5, 11));
    }
}
