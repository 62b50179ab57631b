//! Ramification of a rational map `P¹ -> P¹` over `0, 1, ∞`.

use std::fmt;

use crate::exact::{Polynomial, RationalFunction};

/// Points over one branch value: a multiplicity for each geometric point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fiber {
    pub multiplicities: Vec<usize>,
}

impl Fiber {
    fn from_poly(p: &Polynomial, degree: usize) -> Self {
        let mut mult = Vec::new();
        for (factor, m) in p.square_free_decomposition() {
            let k = factor.degree().unwrap_or(0);
            mult.extend(std::iter::repeat_n(m, k));
        }
        let at_infinity = degree - p.degree().unwrap_or(0);
        if at_infinity > 0 {
            mult.push(at_infinity);
        }
        mult.sort_unstable_by(|a, b| b.cmp(a));
        Fiber { multiplicities: mult }
    }

    /// `Σ (e - 1)`.
    pub fn ramification(&self) -> usize {
        self.multiplicities.iter().map(|e| e - 1).sum()
    }
}

impl fmt::Display for Fiber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.multiplicities.iter().map(usize::to_string).collect();
        f.write_str(&parts.join("+"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ramification {
    pub degree: usize,
    pub over_zero: Fiber,
    pub over_one: Fiber,
    pub over_infinity: Fiber,
    /// All critical values lie in `{0, 1, ∞}`.
    pub is_belyi: bool,
}

impl Ramification {
    /// `[e+e.., e+e.., e+e..]` over `0, 1, ∞`.
    pub fn passport(&self) -> String {
        format!("[{}, {}, {}]", self.over_zero, self.over_one, self.over_infinity)
    }
}

/// Multiplicities come from square-free decompositions of the numerators of
/// `φ`, `φ - 1` and the denominator, with `x = ∞` contributing
/// `deg φ - deg(·)` when positive. By Riemann–Hurwitz in genus 0 the map is
/// Belyi iff the three fibers carry all `2 deg φ - 2` of the ramification.
pub fn belyi_ramification(phi: &RationalFunction) -> Option<Ramification> {
    if phi.is_constant() {
        return None;
    }
    let (n, d) = (phi.num(), phi.den());
    let degree = n.degree().unwrap_or(0).max(d.degree().unwrap_or(0));
    let over_zero = Fiber::from_poly(n, degree);
    let over_one = Fiber::from_poly(&(n - d), degree);
    let over_infinity = Fiber::from_poly(d, degree);
    let total = over_zero.ramification() + over_one.ramification() + over_infinity.ramification();
    Some(Ramification { degree, is_belyi: total == 2 * degree - 2, over_zero, over_one, over_infinity })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::domb_map;

    fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
        RationalFunction::new(Polynomial::from_ints(n), Polynomial::from_ints(d)).unwrap()
    }

    #[test]
    fn domb_map_passport() {
        let r = belyi_ramification(&domb_map()).unwrap();
        assert_eq!(r.degree, 3);
        assert_eq!(r.passport(), "[2+1, 2+1, 3]");
        assert!(r.is_belyi);
        // 1 - φ = (1+2x)²(1-16x)/(1-4x)³
        let one_minus = &RationalFunction::one() - &domb_map();
        let expected = rf(&[1, 4, 4], &[1]) * rf(&[1, -16], &[1]) * rf(&[1], &[1, -4]).pow(3).unwrap();
        assert_eq!(one_minus, expected);
    }

    #[test]
    fn identity_and_quadratic() {
        let r = belyi_ramification(&RationalFunction::x()).unwrap();
        assert_eq!((r.degree, r.passport().as_str(), r.is_belyi), (1, "[1, 1, 1]", true));
        let q = belyi_ramification(&rf(&[0, 4, -4], &[1])).unwrap();
        assert_eq!(q.passport(), "[1+1, 2, 2]");
        assert!(q.is_belyi);
        // x² + x has a critical value -1/4 outside {0,1,∞}
        let bad = belyi_ramification(&rf(&[0, 1, 1], &[1])).unwrap();
        assert!(!bad.is_belyi);
        assert!(belyi_ramification(&RationalFunction::one()).is_none());
    }
}
