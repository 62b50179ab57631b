//! Linear recurrence operators in Q[n]<S>, where `S p(n) = p(n+1) S`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::poly::content_of;
use crate::exact::{ExactError, Polynomial, Rational, RationalFunction};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OreError {
    #[error("the zero operator has no order")]
    ZeroOperator,
    #[error("coefficients do not sum to zero, so the operator has no summation kernel")]
    CriterionFails,
    #[error("scale constant must be nonzero")]
    ZeroConstant,
    #[error("leading coefficient vanishes at n = {0}")]
    LeadingVanishes(i64),
    #[error("need {needed} initial values, got {got}")]
    InsufficientInitial { needed: usize, got: usize },
    #[error("multiplier ratio has a zero or pole at n = {0}")]
    RatioPole(i64),
    #[error("expected an order-2 operator, got order {0}")]
    OrderNotTwo(usize),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// `A_0(n) + A_1(n) S + ... + A_r(n) S^r` with `A_r != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ShiftOperator {
    coeffs: Vec<Polynomial>,
}

impl ShiftOperator {
    pub fn new(mut coeffs: Vec<Polynomial>) -> Result<Self, OreError> {
        while coeffs.last().is_some_and(Polynomial::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(OreError::ZeroOperator);
        }
        Ok(ShiftOperator { coeffs })
    }

    /// Integer coefficient lists, lowest power of `n` first.
    pub fn from_ints(coeffs: &[&[i64]]) -> Self {
        Self::new(coeffs.iter().map(|c| Polynomial::from_ints(c)).collect()).expect("nonzero operator")
    }

    /// `S - 1`.
    pub fn difference() -> Self {
        Self::from_ints(&[&[-1], &[1]])
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    pub fn leading(&self) -> &Polynomial {
        self.coeffs.last().expect("nonempty")
    }

    /// `self · other`, commuting `S^i` past coefficients as `σ^i`.
    pub fn ore_multiply(&self, other: &ShiftOperator) -> ShiftOperator {
        let mut out = vec![Polynomial::zero(); self.order() + other.order() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * &b.shift_int(i as i64));
            }
        }
        ShiftOperator::new(out).expect("Q[n]<S> has no zero divisors")
    }

    /// `σ^k` applied to every coefficient.
    pub fn shift_coefficients(&self, k: i64) -> ShiftOperator {
        ShiftOperator { coeffs: self.coeffs.iter().map(|p| p.shift_int(k)).collect() }
    }

    pub fn scale(&self, c: &Rational) -> Result<ShiftOperator, OreError> {
        if c.is_zero() {
            return Err(OreError::ZeroConstant);
        }
        Ok(ShiftOperator { coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect() })
    }

    pub fn coefficient_sum(&self) -> Polynomial {
        self.coeffs.iter().fold(Polynomial::zero(), |acc, p| &acc + p)
    }

    /// `Σ A_j = 0`, i.e. the operator annihilates constants.
    pub fn coefficient_sum_is_zero(&self) -> bool {
        self.coefficient_sum().is_zero()
    }

    /// `c · σ(self · (S - 1))`.
    pub fn summation_lift(&self, c: &Rational) -> Result<ShiftOperator, OreError> {
        self.ore_multiply(&Self::difference()).shift_coefficients(1).scale(c)
    }

    /// Inverse of [`summation_lift`](Self::summation_lift): the kernel `K`
    /// with `self = c · σ(K (S - 1))`, for any order.
    pub fn extract_kernel(&self, c: &Rational) -> Result<ShiftOperator, OreError> {
        if c.is_zero() {
            return Err(OreError::ZeroConstant);
        }
        if !self.coefficient_sum_is_zero() || self.order() == 0 {
            return Err(OreError::CriterionFails);
        }
        // σ^{-1}(A_k / c) = B_{k-1} - B_k, solved from the bottom up.
        let inv_c = c.recip();
        let e: Vec<Polynomial> = self.coeffs.iter().map(|a| a.scale(&inv_c).shift_int(-1)).collect();
        let r = self.order();
        let mut b = Vec::with_capacity(r);
        let mut prev = Polynomial::zero();
        for ek in e.iter().take(r) {
            prev = &prev - ek;
            b.push(prev.clone());
        }
        let kernel = ShiftOperator::new(b)?;
        debug_assert_eq!(&kernel.summation_lift(c)?, self);
        Ok(kernel)
    }

    /// `Σ_j A_j(n) t_{n+j}` where `terms[0]` is `t_start`.
    pub fn residual_at(&self, n: i64, start: i64, terms: &[Rational]) -> Rational {
        let off = (n - start) as usize;
        self.coeffs
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (j, a)| acc + a.eval_int(n) * &terms[off + j])
    }

    /// True when every full window inside `terms` has zero residual.
    pub fn annihilates(&self, start: i64, terms: &[Rational]) -> bool {
        let r = self.order();
        terms.len() <= r
            || (0..terms.len() - r).all(|k| self.residual_at(start + k as i64, start, terms).is_zero())
    }

    /// Terms `t_0..t_last` from `t_0..t_{r-1}`.
    pub fn solve_forward(&self, initial: &[Rational], last: usize) -> Result<Vec<Rational>, OreError> {
        self.solve_forward_from(0, initial, last as i64)
    }

    /// Terms `t_start..t_last` from `t_start..t_{start+r-1}`. Refuses to step
    /// through an index where the leading coefficient vanishes.
    pub fn solve_forward_from(
        &self,
        start: i64,
        initial: &[Rational],
        last: i64,
    ) -> Result<Vec<Rational>, OreError> {
        let r = self.order();
        if initial.len() < r {
            return Err(OreError::InsufficientInitial { needed: r, got: initial.len() });
        }
        let mut t: Vec<Rational> = initial[..r].to_vec();
        let mut n = start;
        while start + (t.len() as i64) <= last {
            let lead = self.leading().eval_int(n);
            if lead.is_zero() {
                return Err(OreError::LeadingVanishes(n));
            }
            let off = (n - start) as usize;
            let s = self.coeffs[..r]
                .iter()
                .enumerate()
                .fold(Rational::zero(), |acc, (j, a)| acc + a.eval_int(n) * &t[off + j]);
            t.push(-s / lead);
            n += 1;
        }
        t.truncate((last - start + 1).max(0) as usize);
        Ok(t)
    }

    /// Operator for `u_n = t_n c_n` given an operator for `c_n`, where
    /// `t_{n+1}/t_n = m.ratio(n)`. Coefficients are cleared to polynomials
    /// and normalized.
    pub fn conjugate_by_multiplier(&self, m: &TermMultiplier) -> Result<ShiftOperator, OreError> {
        let mut denominator_product = RationalFunction::one();
        let mut rational = Vec::with_capacity(self.coeffs.len());
        for (j, a) in self.coeffs.iter().enumerate() {
            if j > 0 {
                denominator_product = &denominator_product * &m.ratio.shift(&Rational::from_integer((j as i64 - 1).into()));
            }
            rational.push(RationalFunction::from_poly(a.clone()).checked_div(&denominator_product)?);
        }
        let common = rational
            .iter()
            .fold(Polynomial::one(), |acc, f| lcm(&acc, f.den()));
        let cleared = rational
            .iter()
            .map(|f| (f * &RationalFunction::from_poly(common.clone())).num().clone())
            .collect();
        Ok(ShiftOperator::new(cleared)?.normalized())
    }

    /// Divides out the polynomial gcd and rational content of all
    /// coefficients, with the leading term of `A_r` made positive.
    pub fn normalized(&self) -> ShiftOperator {
        let g = self.coeffs.iter().fold(Polynomial::zero(), |acc, p| Polynomial::gcd(&acc, p));
        let reduced: Vec<Polynomial> =
            self.coeffs.iter().map(|p| p.div_exact(&g).expect("gcd divides")).collect();
        let content = content_of(reduced.iter().flat_map(|p| p.coeffs().iter()));
        let sign = if reduced.last().and_then(|p| p.leading_coeff()).is_some_and(|c| c.is_negative()) {
            -Rational::one()
        } else {
            Rational::one()
        };
        let unit = sign / content;
        ShiftOperator { coeffs: reduced.iter().map(|p| p.scale(&unit)).collect() }
    }

    pub fn equivalent_up_to_unit(&self, other: &ShiftOperator) -> bool {
        self.normalized() == other.normalized()
    }

    /// Equivalence up to a unit and an index shift `σ^k`, `|k| <= max_shift`.
    pub fn equivalent_up_to_shift(&self, other: &ShiftOperator, max_shift: i64) -> Option<i64> {
        let target = other.normalized();
        (-max_shift..=max_shift).find(|&k| self.shift_coefficients(k).normalized() == target)
    }

    /// `B_2(n-1) u_{n+1} = a(n) u_n + b(n) u_{n-1}`, scaled so the leading
    /// divisor `B_2(n-1)` is monic.
    pub fn to_pcf(&self) -> Result<Pcf, OreError> {
        if self.order() != 2 {
            return Err(OreError::OrderNotTwo(self.order()));
        }
        let leading = self.coeffs[2].shift_int(-1);
        let unit = leading.leading_coeff().expect("nonzero").recip();
        Ok(Pcf {
            a: self.coeffs[1].shift_int(-1).scale(&-unit.clone()),
            b: self.coeffs[0].shift_int(-1).scale(&-unit.clone()),
            leading: leading.scale(&unit),
        })
    }

    pub fn to_json(&self) -> OperatorJson {
        OperatorJson { order: self.order(), coeffs: self.coeffs.iter().map(Polynomial::to_texts).collect() }
    }

    pub fn from_json(j: &OperatorJson) -> Result<Self, OreError> {
        let coeffs = j
            .coeffs
            .iter()
            .map(|c| Polynomial::from_texts(c).map_err(ExactError::from))
            .collect::<Result<Vec<_>, _>>()?;
        let op = Self::new(coeffs)?;
        if op.order() != j.order {
            return Err(ExactError::Parse(format!("declared order {} but found {}", j.order, op.order())).into());
        }
        Ok(op)
    }
}

fn lcm(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let g = Polynomial::gcd(a, b);
    (a * b).div_exact(&g).expect("gcd divides").monic()
}

impl fmt::Display for ShiftOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(j, p)| match j {
                0 => format!("({})", p.display_in("n")),
                1 => format!("({})·S", p.display_in("n")),
                _ => format!("({})·S^{j}", p.display_in("n")),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `{ "order": r, "coeffs": [[...], ...] }`, lowest power of `S` first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub order: usize,
    pub coeffs: Vec<Vec<String>>,
}

/// Hypergeometric term `t_n` with `t_{n+1} = ratio(n) t_n` and a fixed
/// starting value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermMultiplier {
    pub ratio: RationalFunction,
    pub start_index: i64,
    pub start_value: Rational,
}

pub const DEFAULT_HORIZON: i64 = 10_000;

impl TermMultiplier {
    pub fn new(ratio: RationalFunction, start_index: i64, start_value: Rational) -> Result<Self, OreError> {
        Self::with_horizon(ratio, start_index, start_value, DEFAULT_HORIZON)
    }

    /// Rejects ratios with a zero or pole at an integer in
    /// `start_index..=horizon`.
    pub fn with_horizon(
        ratio: RationalFunction,
        start_index: i64,
        start_value: Rational,
        horizon: i64,
    ) -> Result<Self, OreError> {
        if ratio.is_zero() {
            return Err(OreError::RatioPole(start_index));
        }
        if start_value.is_zero() {
            return Err(OreError::ZeroConstant);
        }
        for root_poly in [ratio.num(), ratio.den()] {
            if let Some(n) = integer_root_in(root_poly, start_index, horizon) {
                return Err(OreError::RatioPole(n));
            }
        }
        Ok(TermMultiplier { ratio, start_index, start_value })
    }

    /// `t_start..t_last`.
    pub fn terms(&self, last: i64) -> Vec<Rational> {
        let mut out = vec![self.start_value.clone()];
        for n in self.start_index..last {
            let next = out.last().expect("nonempty") * self.ratio.eval(&Rational::from_integer(n.into())).expect("validated");
            out.push(next);
        }
        out.truncate((last - self.start_index + 1).max(0) as usize);
        out
    }

    /// Pointwise `t_n c_n` for a sequence starting at the same index.
    pub fn apply(&self, seq: &[Rational]) -> Vec<Rational> {
        let t = self.terms(self.start_index + seq.len() as i64 - 1);
        t.iter().zip(seq).map(|(a, b)| a * b).collect()
    }
}

/// Integer roots of `p` lie among divisors of the trailing coefficient of its
/// primitive integer form, so only those candidates are tested.
fn integer_root_in(p: &Polynomial, lo: i64, hi: i64) -> Option<i64> {
    if p.is_constant() {
        return None;
    }
    let v = p.low_order().unwrap_or(0);
    if v > 0 && lo <= 0 && 0 <= hi {
        return Some(0);
    }
    let trailing = p.coeff(v) / p.content();
    let t = trailing.to_integer().abs();
    let bound: i64 = i64::try_from(&t).unwrap_or(i64::MAX).min(hi.abs().max(lo.abs()));
    (1..=bound)
        .flat_map(|d| [d, -d])
        .filter(|&d| d >= lo && d <= hi)
        .find(|&d| p.eval_int(d).is_zero())
}

/// Polynomial continued fraction data: `leading(n) u_{n+1} = a(n) u_n + b(n) u_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pcf {
    pub a: Polynomial,
    pub b: Polynomial,
    pub leading: Polynomial,
}

impl Pcf {
    pub fn is_monic_form(&self) -> bool {
        self.leading.is_constant()
    }
}

impl fmt::Display for Pcf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PCF({}, {})", self.a.display_in("n"), self.b.display_in("n"))?;
        if !self.is_monic_form() {
            write!(f, " with leading divisor {}", self.leading.display_in("n"))?;
        }
        Ok(())
    }
}
