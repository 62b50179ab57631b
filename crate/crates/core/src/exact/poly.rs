//! Dense univariate polynomials over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, int, parse_rational, Rational, RationalError};

/// Coefficients lowest degree first, with no trailing zeros. The zero
/// polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The variable itself.
    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    /// `a + b·x`.
    pub fn linear(a: Rational, b: Rational) -> Self {
        Self::new(vec![a, b])
    }

    /// Product of `(x + r)` over the given shifts.
    pub fn from_shifted_roots(shifts: &[Rational]) -> Self {
        shifts
            .iter()
            .fold(Self::one(), |acc, r| &acc * &Self::linear(r.clone(), Rational::one()))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Order of vanishing at zero; `None` for the zero polynomial.
    pub fn low_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Horner evaluation. The constant term is returned at `x = 0`, i.e. `0^0 = 1`.
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_int(&self, x: i64) -> Rational {
        self.eval(&int(x))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `p(x + k)`.
    pub fn shift(&self, k: &Rational) -> Self {
        // Horner in the shifted variable: p(x+k) = (...(c_d (x+k) + c_{d-1})(x+k) ...)
        let xk = Self::linear(k.clone(), Rational::one());
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * &xk) + &Self::constant(c.clone()))
    }

    pub fn shift_int(&self, k: i64) -> Self {
        self.shift(&int(k))
    }

    /// `p(λ·x)`.
    pub fn scale_arg(&self, lambda: &Rational) -> Self {
        let mut pow = Rational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c * &pow);
            pow *= lambda;
        }
        Self::new(out)
    }

    /// `p(q(x))`.
    pub fn compose(&self, q: &Polynomial) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * q) + &Self::constant(c.clone()))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * int(k as i64))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            Some(lc) => self.scale(&lc.recip()),
            None => Self::zero(),
        }
    }

    /// Euclidean division; `None` when dividing by zero.
    pub fn div_rem(&self, d: &Polynomial) -> Option<(Polynomial, Polynomial)> {
        let dd = d.degree()?;
        let lc = d.leading_coeff()?.clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Self::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] / &lc;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Some((Self::new(quot), Self::new(rem)))
    }

    /// Exact quotient if `d` divides `self`.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        let (q, r) = self.div_rem(d)?;
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor (`gcd(0, 0) = 0`).
    pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Positive rational `c` with `self / c` having coprime integer coefficients.
    pub fn content(&self) -> Rational {
        content_of(self.coeffs.iter())
    }

    /// Yun's square-free decomposition: monic factors `f_i` with multiplicity
    /// `i`, so that `self = lc · Π f_i^i`.
    pub fn square_free_decomposition(&self) -> Vec<(Polynomial, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let mut a = Polynomial::gcd(&f, &df);
        let mut b = f.div_exact(&a).expect("gcd divides");
        let mut c = df.div_exact(&a).expect("gcd divides");
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            a = Polynomial::gcd(&b, &d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_exact(&a).expect("gcd divides");
            c = d.div_exact(&a).expect("gcd divides");
            d = &c - &b.derivative();
            i += 1;
        }
        out
    }

    /// Exact square root, when `self = q²` for a rational polynomial `q`
    /// (normalized with positive leading coefficient).
    pub fn exact_sqrt(&self) -> Option<Polynomial> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let d = self.degree()?;
        if d % 2 == 1 {
            return None;
        }
        let lc_root = rational_sqrt(self.leading_coeff()?)?;
        let half = d / 2;
        // Solve for q top-down: q_{half} = sqrt(lc), then match coefficients.
        let mut q = vec![Rational::zero(); half + 1];
        q[half] = lc_root;
        for k in (0..half).rev() {
            // coefficient of x^{half + k} in q^2
            let target = self.coeff(half + k);
            let mut acc = Rational::zero();
            for i in (k + 1)..=half {
                let j = half + k - i;
                if j > k && j <= half {
                    acc += &q[i] * &q[j];
                }
            }
            q[k] = (target - acc) / (int(2) * &q[half]);
        }
        let q = Polynomial::new(q);
        (&q * &q == *self).then_some(q)
    }

    /// Coefficient list `[c0, c1, ...]` as rational texts.
    pub fn to_texts(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }

    pub fn from_texts<S: AsRef<str>>(texts: &[S]) -> Result<Self, RationalError> {
        let coeffs = texts
            .iter()
            .map(|t| parse_rational(t.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(coeffs))
    }

    /// `[c0, c1, ...]` lowest degree first.
    pub fn to_list_string(&self) -> String {
        format!("[{}]", self.to_texts().join(","))
    }

    pub fn parse_list(text: &str) -> Result<Self, RationalError> {
        let t = text.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| RationalError::Parse(text.to_string()))?;
        if inner.trim().is_empty() {
            return Ok(Self::zero());
        }
        let parts: Vec<&str> = inner.split(',').collect();
        Self::from_texts(&parts)
    }

    /// Human-readable rendering in the named variable.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let abs = c.abs();
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if k == 0 {
                out.push_str(&format_rational(&abs));
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{}*{}", format_rational(&abs), mono));
            }
        }
        out
    }
}

/// Positive content of a list of rationals: gcd of numerators over lcm of
/// denominators. Returns 1 for an all-zero list.
pub fn content_of<'a>(values: impl Iterator<Item = &'a Rational>) -> Rational {
    let mut g = BigInt::zero();
    let mut l = BigInt::one();
    let mut any = false;
    for v in values {
        if v.is_zero() {
            continue;
        }
        any = true;
        g = g.gcd(v.numer());
        l = l.lcm(v.denom());
    }
    if !any {
        return Rational::one();
    }
    BigRational::new(g, l)
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| BigRational::new(n, d))
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident, $ty:ty) => {
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: &$ty) -> $ty {
                (&self).$method(rhs)
            }
        }
        impl $tr<$ty> for &$ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                self.$method(&rhs)
            }
        }
    };
}
pub(crate) use forward_owned;

forward_owned!(Add, add, Polynomial);
forward_owned!(Sub, sub, Polynomial);
forward_owned!(Mul, mul, Polynomial);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    #[test]
    fn shift_expands_binomially() {
        assert_eq!(p(&[0, 0, 1]).shift_int(1), p(&[1, 2, 1]));
        assert_eq!(p(&[7]).shift_int(-3), p(&[7]));
    }

    #[test]
    fn shift_of_printed_leading_coefficient() {
        // (n+1)(n+2)(n+3)^2 shifted down by one is n(n+1)(n+2)^2
        let a3 = Polynomial::from_shifted_roots(&[int(1), int(2), int(3), int(3)]);
        let expected = Polynomial::from_shifted_roots(&[int(0), int(1), int(2), int(2)]);
        assert_eq!(a3.shift_int(-1), expected);
        let b2 = Polynomial::from_shifted_roots(&[int(0), int(1), int(2), int(2)]).scale(&int(4));
        assert_eq!(a3.shift_int(-1).scale(&int(4)), b2);
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[-1, 0, 1]); // x^2 - 1
        let b = p(&[1, 1]); // x + 1
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q, p(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(Polynomial::gcd(&a, &p(&[2, 2])), p(&[1, 1]));
        assert!(a.div_rem(&Polynomial::zero()).is_none());
    }

    #[test]
    fn square_free_parts() {
        // (x+2)^2 (x-1/16)... use 108x^2 style: x^2 (x-1)^3 (x+5)
        let f = &(&p(&[0, 0, 1]) * &p(&[-1, 1]).pow(3)) * &p(&[5, 1]);
        let sf = f.scale(&int(3)).square_free_decomposition();
        assert_eq!(
            sf,
            vec![(p(&[5, 1]), 1), (p(&[0, 1]), 2), (p(&[-1, 1]), 3)]
        );
    }

    #[test]
    fn exact_sqrt_recovers_squares() {
        let q = Polynomial::new(vec![rat(1, 2), int(-3), int(2)]);
        assert_eq!((&q * &q).exact_sqrt(), Some(q));
        assert_eq!(p(&[1, 1]).exact_sqrt(), None);
        assert_eq!(p(&[2, 0, 1]).exact_sqrt(), None);
    }

    #[test]
    fn content_and_texts() {
        let q = Polynomial::new(vec![rat(3, 4), rat(9, 2)]);
        assert_eq!(q.content(), rat(3, 4));
        let text = q.to_list_string();
        assert_eq!(text, "[3/4,9/2]");
        assert_eq!(Polynomial::parse_list(&text).unwrap(), q);
        assert_eq!(Polynomial::parse_list("[]").unwrap(), Polynomial::zero());
        assert_eq!(p(&[1, -2, 0, 3]).display_in("n"), "3*n^3 - 2*n + 1");
    }

    #[test]
    fn zero_to_the_zero_is_one() {
        assert_eq!(p(&[1, 5]).eval_int(0), int(1));
    }

    fn small_poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(-20i64..20, 0..6).prop_map(|c| Polynomial::from_ints(&c))
    }

    proptest! {
        #[test]
        fn shift_is_a_group_action(q in small_poly(), a in -6i64..6, b in -6i64..6) {
            prop_assert_eq!(q.shift_int(a).shift_int(b), q.shift_int(a + b));
            prop_assert_eq!(q.shift_int(a).degree(), q.degree());
        }

        #[test]
        fn div_rem_reconstructs(a in small_poly(), b in small_poly()) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(&b).unwrap();
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.degree().is_none_or(|d| d < b.degree().unwrap()));
        }
    }
}
