//! Truncated power series over Q and hypergeometric coefficient streams.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::poly::forward_owned;
use crate::exact::{ExactError, Polynomial, Rational, RationalFunction};
use crate::fuchsian::euler::EulerOperator;
use crate::ore::ShiftOperator;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("lower parameter {0} is a nonpositive integer")]
    InvalidLowerParameter(String),
    #[error("inner series has nonzero constant term; composition undefined")]
    NonzeroConstantTerm,
    #[error("constant term must be 1, got {0}")]
    ConstantTermNotOne(String),
    #[error("constant term is zero; no reciprocal")]
    ZeroConstantTerm,
    #[error("indicial coefficient vanishes at n = {0}, beyond the seeded range")]
    IndicialVanishes(usize),
    #[error("seed g_{0} contradicts the coefficient recurrence")]
    SeedContradiction(usize),
    #[error("operator is zero")]
    ZeroOperator,
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Coefficients `c_0..c_N`; everything past `N` is unknown.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    /// Pads or truncates `coeffs` to `order + 1` entries.
    pub fn new(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        TruncatedSeries { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least c_0");
        TruncatedSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    pub fn x(order: usize) -> Self {
        Self::from_poly(&Polynomial::x(), order)
    }

    pub fn from_poly(p: &Polynomial, order: usize) -> Self {
        Self::new(p.coeffs().to_vec(), order)
    }

    /// Taylor expansion at 0 of a rational function regular there.
    pub fn from_rational_function(f: &RationalFunction, order: usize) -> Result<Self, SeriesError> {
        let den = Self::from_poly(f.den(), order);
        let num = Self::from_poly(f.num(), order);
        if den.coeffs[0].is_zero() {
            return Err(ExactError::Pole("0".into()).into());
        }
        Ok(&num * &den.reciprocal()?)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend a truncated series");
        TruncatedSeries { coeffs: self.coeffs[..=order].to_vec() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// `c_n -> λ^n c_n`, i.e. `s(λx)`.
    pub fn scale_arg(&self, lambda: &Rational) -> Self {
        let mut pow = Rational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c * &pow);
            pow *= lambda;
        }
        TruncatedSeries { coeffs: out }
    }

    /// `x^k s`, known to order `N + k`.
    pub fn mul_x_pow(&self, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        TruncatedSeries { coeffs }
    }

    /// `d/dx`, known to order `N - 1`.
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        let coeffs = (1..self.coeffs.len())
            .map(|k| &self.coeffs[k] * Rational::from_integer(k.into()))
            .collect();
        TruncatedSeries { coeffs }
    }

    /// `x d/dx`, same order.
    pub fn theta(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * Rational::from_integer(k.into()))
            .collect();
        TruncatedSeries { coeffs }
    }

    pub fn reciprocal(&self) -> Result<Self, SeriesError> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(SeriesError::ZeroConstantTerm);
        }
        let inv0 = c0.recip();
        let mut out: Vec<Rational> = vec![inv0.clone()];
        for n in 1..self.coeffs.len() {
            let s = (1..=n).fold(Rational::zero(), |acc, k| acc + &self.coeffs[k] * &out[n - k]);
            out.push(-s * &inv0);
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// `s^e` for `s(0) = 1`, via `n s_0 f_n = Σ_k ((e+1)k - n) s_k f_{n-k}`.
    pub fn power(&self, e: &Rational) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::ConstantTermNotOne(self.coeffs[0].to_string()));
        }
        let mut f: Vec<Rational> = vec![Rational::one()];
        let e1 = e + Rational::one();
        for n in 1..self.coeffs.len() {
            let nq = Rational::from_integer(n.into());
            let s = (1..=n).fold(Rational::zero(), |acc, k| {
                let w = &e1 * Rational::from_integer(k.into()) - &nq;
                acc + w * &self.coeffs[k] * &f[n - k]
            });
            f.push(s / nq);
        }
        Ok(TruncatedSeries { coeffs: f })
    }

    /// `self(inner(x))` for `inner(0) = 0`, by Horner's rule.
    pub fn compose(&self, inner: &TruncatedSeries) -> Result<Self, SeriesError> {
        if !inner.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        let mut acc = Self::constant(self.coeffs[order].clone(), order);
        for k in (0..order).rev() {
            acc = &(&acc * &inner) + &Self::constant(self.coeffs[k].clone(), order);
        }
        Ok(acc)
    }

    pub fn to_text_list(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    /// `index,numerator,denominator` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,numerator,denominator\n");
        for (k, c) in self.coeffs.iter().enumerate() {
            out.push_str(&format!("{k},{},{}\n", c.numer(), c.denom()));
        }
        out
    }

    /// Series where only `min(self, other)` coefficients agree.
    pub fn agrees_with(&self, other: &TruncatedSeries) -> bool {
        let n = self.order().min(other.order());
        self.coeffs[..=n] == other.coeffs[..=n]
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let n = self.order().min(rhs.order());
        TruncatedSeries { coeffs: (0..=n).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect() }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let n = self.order().min(rhs.order());
        TruncatedSeries { coeffs: (0..=n).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect() }
    }
}

/// Cauchy product to the smaller truncation order.
impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let n = self.order().min(rhs.order());
        let mut out = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs[..=n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        TruncatedSeries { coeffs: out }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.scale(&-Rational::one())
    }
}

forward_owned!(Add, add, TruncatedSeries);
forward_owned!(Sub, sub, TruncatedSeries);
forward_owned!(Mul, mul, TruncatedSeries);

/// Parameters of `pFq(upper; lower; z)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HypParams {
    upper: Vec<Rational>,
    lower: Vec<Rational>,
}

impl HypParams {
    pub fn new(upper: Vec<Rational>, lower: Vec<Rational>) -> Result<Self, SeriesError> {
        if let Some(bad) = lower.iter().find(|b| is_nonpositive_integer(b)) {
            return Err(SeriesError::InvalidLowerParameter(bad.to_string()));
        }
        Ok(HypParams { upper, lower })
    }

    /// `2F1(a, b; c)`.
    pub fn gauss(a: Rational, b: Rational, c: Rational) -> Result<Self, SeriesError> {
        Self::new(vec![a, b], vec![c])
    }

    pub fn upper(&self) -> &[Rational] {
        &self.upper
    }

    pub fn lower(&self) -> &[Rational] {
        &self.lower
    }

    /// `f_{m+1} / f_m`.
    pub fn term_ratio(&self, m: usize) -> Rational {
        let mq = Rational::from_integer(m.into());
        let up = self.upper.iter().fold(Rational::one(), |acc, a| acc * (a + &mq));
        let down = self.lower.iter().fold(Rational::one(), |acc, b| acc * (b + &mq));
        up / (down * (&mq + Rational::one()))
    }
}

pub fn is_nonpositive_integer(q: &Rational) -> bool {
    q.is_integer() && !q.is_positive()
}

/// Coefficients `Π (a_i)_m / Π (b_j)_m / m!` for `m <= order`.
pub fn hypergeometric_series(p: &HypParams, order: usize) -> TruncatedSeries {
    let mut out = Vec::with_capacity(order + 1);
    let mut term = Rational::one();
    for m in 0..=order {
        out.push(term.clone());
        if !term.is_zero() {
            term *= p.term_ratio(m);
        }
    }
    TruncatedSeries { coeffs: out }
}

/// `s(φ(λx))` to `order`; requires `φ(0) = 0`.
pub fn compose_rational(
    s: &TruncatedSeries,
    phi: &RationalFunction,
    lambda: &Rational,
    order: usize,
) -> Result<TruncatedSeries, SeriesError> {
    if phi.den().coeff(0).is_zero() || !phi.num().coeff(0).is_zero() {
        return Err(SeriesError::NonzeroConstantTerm);
    }
    let inner = TruncatedSeries::from_rational_function(phi, order)?.scale_arg(lambda);
    s.truncate(order.min(s.order())).compose(&inner)
}

/// Extends `seeds` through the coefficient recurrence of an Euler operator,
/// `P_0(n) g_n = -Σ_{k>=1} P_k(n-k) g_{n-k}`. Seeds are checked against every
/// equation they enter; an unseeded index with `P_0(n) = 0` is an error.
pub fn frobenius_coefficients(
    op: &EulerOperator,
    seeds: &[Rational],
    order: usize,
) -> Result<TruncatedSeries, SeriesError> {
    if op.is_zero() {
        return Err(SeriesError::ZeroOperator);
    }
    let p0 = op.p(0);
    let mut g: Vec<Rational> = Vec::with_capacity(order + 1);
    for n in 0..=order {
        let rest = op
            .terms()
            .filter(|(k, _)| *k >= 1 && *k <= n)
            .fold(Rational::zero(), |acc, (k, pk)| acc + pk.eval_int((n - k) as i64) * &g[n - k]);
        let lead = p0.eval_int(n as i64);
        if n < seeds.len() {
            if !(&lead * &seeds[n] + &rest).is_zero() {
                return Err(SeriesError::SeedContradiction(n));
            }
            g.push(seeds[n].clone());
        } else if lead.is_zero() {
            return Err(SeriesError::IndicialVanishes(n));
        } else {
            g.push(-rest / lead);
        }
    }
    Ok(TruncatedSeries { coeffs: g })
}

/// Forward form of the coefficient recurrence of `2F1(a,b;c;z)^2`:
/// `2(n+a+b)(n+2a)(n+2b) + (-Q(n+1)) S + 2(n+2)(n+c+1)(n+2c) S^2`.
pub fn gauss_square_recurrence(a: &Rational, b: &Rational, c: &Rational) -> Result<ShiftOperator, SeriesError> {
    if is_nonpositive_integer(c) {
        return Err(SeriesError::InvalidLowerParameter(c.to_string()));
    }
    let two = Rational::from_integer(2.into());
    let lin = |s: Rational| Polynomial::linear(s, Rational::one());
    let s0 = (&lin(a + b) * &lin(&two * a)) * lin(&two * b);
    let s2 = (&lin(two.clone()) * &lin(c + Rational::one())) * lin(&two * c);
    let s1 = -q_polynomial(a, b, c).shift_int(1);
    Ok(ShiftOperator::new(vec![s0.scale(&two), s1, s2.scale(&two)]).expect("nonzero"))
}

/// `Q(T) = 4T^3 + 6(a+b+c-1)T^2 + 2(4ab+4ac+4bc-3a-3b-c+1)T + 4ab(2c-1)`.
pub fn q_polynomial(a: &Rational, b: &Rational, c: &Rational) -> Polynomial {
    let r = |n: i64| Rational::from_integer(n.into());
    let one = r(1);
    Polynomial::new(vec![
        r(4) * a * b * (r(2) * c - &one),
        r(2) * (r(4) * a * b + r(4) * a * c + r(4) * b * c - r(3) * a - r(3) * b - c + &one),
        r(6) * (a + b + c - &one),
        r(4),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn binom(n: u64, k: u64) -> BigInt {
        (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
    }

    fn half() -> Rational {
        rat(1, 2)
    }

    #[test]
    fn central_binomial_squares() {
        let f = hypergeometric_series(&HypParams::gauss(half(), half(), int(1)).unwrap(), 12);
        assert_eq!(&f.coeffs()[..3], &[int(1), rat(1, 4), rat(9, 64)]);
        for m in 0..=12u64 {
            let scaled = f.coeff(m as usize) * int(16i64.pow(m as u32));
            assert_eq!(scaled, Rational::from_integer(binom(2 * m, m).pow(2)));
        }
    }

    #[test]
    fn pochhammer_cancellation() {
        let f = hypergeometric_series(&HypParams::gauss(half(), int(1), rat(3, 2)).unwrap(), 10);
        for m in 0..=10 {
            assert_eq!(f.coeff(m), &rat(1, 2 * m as i64 + 1));
        }
        let g = &f * &f;
        assert_eq!(g.coeff(1), &rat(2, 3));
    }

    #[test]
    fn three_f_two_cubes() {
        let p = HypParams::new(vec![half(), half(), half()], vec![int(1), int(1)]).unwrap();
        let f = hypergeometric_series(&p, 10);
        for m in 0..=10u64 {
            assert_eq!(f.coeff(m as usize) * int(64i64.pow(m as u32)), Rational::from_integer(binom(2 * m, m).pow(3)));
        }
        assert!(HypParams::gauss(half(), half(), int(-2)).is_err());
    }

    #[test]
    fn square_matches_convolution() {
        let f = hypergeometric_series(&HypParams::gauss(half(), half(), int(1)).unwrap(), 10).scale_arg(&int(16));
        let sq = &f * &f;
        for n in 0..=10u64 {
            let conv: BigInt = (0..=n).map(|k| (binom(2 * k, k) * binom(2 * n - 2 * k, n - k)).pow(2)).sum();
            assert_eq!(sq.coeff(n as usize), &Rational::from_integer(conv));
        }
        assert_eq!(&sq.coeffs()[..4], &[int(1), int(8), int(88), int(1088)]);
        assert_eq!(&TruncatedSeries::one(10) * &f, f);
    }

    #[test]
    fn composition_with_maps() {
        let phi = RationalFunction::from_poly(Polynomial::from_ints(&[0, 4, -4]));
        let inner = TruncatedSeries::from_rational_function(&phi, 5).unwrap().scale_arg(&int(4));
        assert_eq!(inner, TruncatedSeries::from_poly(&Polynomial::from_ints(&[0, 16, -64]), 5));
        let s = hypergeometric_series(&HypParams::gauss(half(), half(), int(1)).unwrap(), 8);
        let id = compose_rational(&s, &RationalFunction::x(), &int(1), 8).unwrap();
        assert_eq!(id, s);
        let bad = RationalFunction::from_poly(Polynomial::from_ints(&[1, 1]));
        assert_eq!(compose_rational(&s, &bad, &int(1), 8), Err(SeriesError::NonzeroConstantTerm));
    }

    #[test]
    fn clausen_pullback_for_a036917() {
        let n = 30;
        let p3 = HypParams::new(vec![half(), half(), half()], vec![int(1), int(1)]).unwrap();
        let lhs = compose_rational(
            &hypergeometric_series(&p3, n),
            &RationalFunction::from_poly(Polynomial::from_ints(&[0, 64, -1024])),
            &int(1),
            n,
        )
        .unwrap();
        let f = hypergeometric_series(&HypParams::gauss(half(), half(), int(1)).unwrap(), n).scale_arg(&int(16));
        assert_eq!(lhs, &f * &f);
    }

    #[test]
    fn clausen_identity_in_u() {
        let n = 40;
        let p3 = HypParams::new(vec![half(), half(), half()], vec![int(1), int(1)]).unwrap();
        let lhs = compose_rational(
            &hypergeometric_series(&p3, n),
            &RationalFunction::from_poly(Polynomial::from_ints(&[0, 4, -4])),
            &int(1),
            n,
        )
        .unwrap();
        let f = hypergeometric_series(&HypParams::gauss(half(), half(), int(1)).unwrap(), n);
        assert_eq!(lhs, &f * &f);
    }

    #[test]
    fn powers() {
        let s = TruncatedSeries::from_poly(&Polynomial::from_ints(&[1, -4]), 12);
        let p = s.power(&rat(-1, 2)).unwrap();
        for m in 0..=12u64 {
            assert_eq!(p.coeff(m as usize), &Rational::from_integer(binom(2 * m, m)));
        }
        assert_eq!(s.power(&int(0)).unwrap(), TruncatedSeries::one(12));
        assert!(TruncatedSeries::constant(int(2), 3).power(&half()).is_err());
        let cubic = TruncatedSeries::from_poly(&Polynomial::from_ints(&[1, -39, 48, -64]), 7);
        let row5 = &cubic.power(&rat(-1, 3)).unwrap() * &s.truncate(7);
        let expected = [1, 9, 270, 8154, 259209, 8529921, 287329140, 9841383288];
        assert_eq!(row5.coeffs(), expected.iter().map(|&v| int(v)).collect::<Vec<_>>().as_slice());
    }

    #[test]
    fn reciprocal_and_derivatives() {
        let s = TruncatedSeries::from_poly(&Polynomial::from_ints(&[1, -1]), 6);
        assert_eq!(s.reciprocal().unwrap(), TruncatedSeries::new(vec![int(1); 7], 6));
        let r = s.reciprocal().unwrap();
        assert_eq!(r.theta().coeff(3), &int(3));
        assert_eq!(r.derivative().order(), 5);
        assert_eq!(r.mul_x_pow(2).coeff(2), &int(1));
    }

    #[test]
    fn gauss_square_examples() {
        let op = gauss_square_recurrence(&half(), &half(), &int(1)).unwrap();
        // 2(n+1)^3 g_n - (2n+3)(2n^2+6n+5) g_{n+1} + 2(n+2)^3 g_{n+2}
        let expected = ShiftOperator::new(vec![
            Polynomial::from_ints(&[1, 1]).pow(3).scale(&int(2)),
            -(&Polynomial::from_ints(&[3, 2]) * &Polynomial::from_ints(&[5, 6, 2])),
            Polynomial::from_ints(&[2, 1]).pow(3).scale(&int(2)),
        ])
        .unwrap();
        assert_eq!(op, expected);
        let cat = gauss_square_recurrence(&half(), &int(1), &rat(3, 2)).unwrap();
        // n(n+1)(2n+1) g_n - 4n^3 g_{n-1} + n(n-1)(2n-1) g_{n-2}, shifted by 2
        let n2 = |k: i64| Polynomial::from_ints(&[k, 1]);
        let expected = ShiftOperator::new(vec![
            &(&n2(2) * &n2(1)) * &Polynomial::from_ints(&[3, 2]),
            n2(2).pow(3).scale(&int(-4)),
            &(&n2(2) * &n2(3)) * &Polynomial::from_ints(&[5, 2]),
        ])
        .unwrap();
        assert_eq!(cat, expected);
        let (a, b, c) = (rat(1, 3), rat(2, 5), rat(7, 4));
        assert_eq!(q_polynomial(&a, &b, &c).coeff(0), int(4) * &a * &b * (int(2) * &c - int(1)));
        assert!(gauss_square_recurrence(&a, &b, &int(0)).is_err());
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-7i64..8, 1i64..6).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn square_satisfies_recurrence(a in small_rat(), b in small_rat(), c in small_rat()) {
            prop_assume!(!is_nonpositive_integer(&c) && !is_nonpositive_integer(&(&c * int(2))));
            let f = hypergeometric_series(&HypParams::gauss(a.clone(), b.clone(), c.clone()).unwrap(), 42);
            let g = &f * &f;
            let op = gauss_square_recurrence(&a, &b, &c).unwrap();
            prop_assert!(op.annihilates(0, g.coeffs()));
        }

        #[test]
        fn powers_add(e1 in small_rat(), e2 in small_rat(), cs in prop::collection::vec(-4i64..5, 3)) {
            let s = TruncatedSeries::from_poly(&Polynomial::from_ints(&[1, cs[0], cs[1], cs[2]]), 10);
            let lhs = &s.power(&e1).unwrap() * &s.power(&e2).unwrap();
            prop_assert_eq!(lhs, s.power(&(e1 + e2)).unwrap());
        }

        #[test]
        fn composition_associates(p1 in prop::collection::vec(-3i64..4, 2), p2 in prop::collection::vec(-3i64..4, 2)) {
            let n = 10;
            let phi1 = Polynomial::from_ints(&[0, p1[0], p1[1]]);
            let phi2 = Polynomial::from_ints(&[0, p2[0], p2[1]]);
            let s = hypergeometric_series(&HypParams::gauss(half(), rat(1, 3), int(1)).unwrap(), n);
            let s1 = TruncatedSeries::from_poly(&phi1, n);
            let s2 = TruncatedSeries::from_poly(&phi2, n);
            let lhs = s.compose(&s1).unwrap().compose(&s2).unwrap();
            let rhs = s.compose(&TruncatedSeries::from_poly(&phi1.compose(&phi2), n)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
