//! Reduced univariate rational functions.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{forward_owned, Polynomial};
use super::rational::{Rational, RationalError};
use super::ExactError;

/// `numerator / denominator` with `gcd = 1` and a monic denominator, so that
/// equal functions have equal representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = Polynomial::gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lc = den.leading_coeff().expect("nonzero").recip();
        let out = RationalFunction { num: num.scale(&lc), den: den.scale(&lc) };
        debug_assert!(out.is_normalized());
        out
    }

    /// Monic denominator and coprime numerator.
    pub fn is_normalized(&self) -> bool {
        self.den.leading_coeff().is_some_and(|c| c.is_one())
            && Polynomial::gcd(&self.num, &self.den).is_constant()
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction { num: p, den: Polynomial::one() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn x() -> Self {
        Self::from_poly(Polynomial::x())
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn recip(&self) -> Result<Self, ExactError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ExactError> {
        if rhs.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self::reduce(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::reduce(self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, e: i32) -> Result<Self, ExactError> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let e = e.unsigned_abs();
        Ok(RationalFunction { num: base.num.pow(e), den: base.den.pow(e) })
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational, ExactError> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(ExactError::Pole(x.to_string()));
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::reduce(n, &self.den * &self.den)
    }

    /// `x · d/dx`.
    pub fn theta(&self) -> Self {
        &RationalFunction::x() * &self.derivative()
    }

    /// `f(x + k)`.
    pub fn shift(&self, k: &Rational) -> Self {
        Self::reduce(self.num.shift(k), self.den.shift(k))
    }

    /// `f(λ·x)`.
    pub fn scale_arg(&self, lambda: &Rational) -> Result<Self, ExactError> {
        Self::new(self.num.scale_arg(lambda), self.den.scale_arg(lambda))
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &RationalFunction) -> Result<Self, ExactError> {
        let num = eval_poly_at(&self.num, inner);
        let den = eval_poly_at(&self.den, inner);
        num.checked_div(&den).map_err(|_| ExactError::DegenerateComposition)
    }

    /// Canonical text `[num coeffs]/[den coeffs]`.
    /// `[num]/[den]`, scaled so the denominator has constant term 1 when it
    /// can be.
    pub fn to_text(&self) -> String {
        let c0 = self.den.coeff(0);
        let (num, den) = if c0.is_zero() {
            (self.num.clone(), self.den.clone())
        } else {
            let k = c0.recip();
            (self.num.scale(&k), self.den.scale(&k))
        };
        format!("{}/{}", num.to_list_string(), den.to_list_string())
    }

    pub fn parse_text(text: &str) -> Result<Self, ExactError> {
        let t = text.trim();
        let parsed = match t.find("]/[") {
            Some(i) => {
                let num = Polynomial::parse_list(&t[..=i])?;
                let den = Polynomial::parse_list(&t[i + 2..])?;
                Self::new(num, den)?
            }
            None => Self::from_poly(Polynomial::parse_list(t)?),
        };
        Ok(parsed)
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.den.is_constant() {
            return self.num.display_in(var);
        }
        format!("({})/({})", self.num.display_in(var), self.den.display_in(var))
    }
}

fn eval_poly_at(p: &Polynomial, inner: &RationalFunction) -> RationalFunction {
    p.coeffs().iter().rev().fold(RationalFunction::zero(), |acc, c| {
        &(&acc * inner) + &RationalFunction::constant(c.clone())
    })
}

impl From<RationalError> for ExactError {
    fn from(e: RationalError) -> Self {
        ExactError::Parse(e.to_string())
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::reduce(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunction::reduce(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

forward_owned!(Add, add, RationalFunction);
forward_owned!(Sub, sub, RationalFunction);
forward_owned!(Mul, mul, RationalFunction);

/// JSON shape `{ "num": [...], "den": [...] }` with rational texts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalFunctionJson {
    pub num: Vec<String>,
    pub den: Vec<String>,
}

impl From<&RationalFunction> for RationalFunctionJson {
    fn from(f: &RationalFunction) -> Self {
        RationalFunctionJson { num: f.num.to_texts(), den: f.den.to_texts() }
    }
}

impl TryFrom<&RationalFunctionJson> for RationalFunction {
    type Error = ExactError;
    fn try_from(j: &RationalFunctionJson) -> Result<Self, ExactError> {
        RationalFunction::new(Polynomial::from_texts(&j.num)?, Polynomial::from_texts(&j.den)?)
    }
}
