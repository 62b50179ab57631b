//! Integrality of scaled hypergeometric coefficients `μ^m f_m`, with p-adic
//! bookkeeping for the failures.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::ScanError;
use crate::exact::rational::{factorial_valuation, integer_valuation, small_prime_factors};
use crate::exact::Rational;
use crate::series::{hypergeometric_series, HypParams};

/// Table rows whose integrality reduces to `μ^m f_m ∈ Z`, with `μ` the
/// leading coefficient of `φ(λx)`.
pub const SCALED_ROWS: [(u32, i64); 6] = [(2, 16), (3, 27), (4, 27), (10, 27), (12, 27), (14, 27)];

/// `μ^m f_m` has denominator divisible by `prime^deficit`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeDeficit {
    pub m: usize,
    pub prime: u64,
    pub deficit: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralityCertificate {
    pub mu: i64,
    pub checked_through: usize,
    /// `μ^m f_m` for `m = 0..=checked_through`.
    pub values: Vec<Rational>,
    pub deficits: Vec<PrimeDeficit>,
}

impl IntegralityCertificate {
    pub fn holds(&self) -> bool {
        self.deficits.is_empty()
    }

    pub fn first_failure(&self) -> Option<usize> {
        self.deficits.iter().map(|d| d.m).min()
    }
}

/// Checks `μ^m f_m ∈ Z` for `m <= n`, where `f_m` are the coefficients of the
/// hypergeometric series with parameters `p`.
pub fn scaled_coeff_integrality(p: &HypParams, mu: i64, n: usize) -> Result<IntegralityCertificate, ScanError> {
    if mu == 0 {
        return Err(ScanError::ZeroScale);
    }
    let f = hypergeometric_series(p, n);
    let mu_q = Rational::from_integer(mu.into());
    let mut scale = Rational::one();
    let mut values = Vec::with_capacity(n + 1);
    let mut deficits = Vec::new();
    for (m, fm) in f.coeffs().iter().enumerate() {
        let v = fm * &scale;
        if !v.denom().is_one() {
            for (prime, e) in small_prime_factors(v.denom()) {
                deficits.push(PrimeDeficit { m, prime, deficit: e });
            }
        }
        values.push(v);
        scale *= &mu_q;
    }
    Ok(IntegralityCertificate { mu, checked_through: n, values, deficits })
}

/// `P_r(N) = Π_{j=1}^{N} (3j - r)`.
pub fn shifted_triple_product(r: i64, n: u64) -> BigInt {
    (1..=n as i64).fold(BigInt::one(), |acc, j| acc * BigInt::from(3 * j - r))
}

/// `v_p(P_r(N)) >= v_p(N!)`: for `p ≠ 3`, each residue class `3j ≡ r`
/// mod `p^ℓ` meets `1..N` at least `⌊N/p^ℓ⌋` times.
pub fn legendre_inequality_holds(r: i64, p: u64, n: u64) -> bool {
    let prod = shifted_triple_product(r, n);
    if prod.is_zero() {
        return true;
    }
    integer_valuation(&prod, p) >= factorial_valuation(n, p)
}
