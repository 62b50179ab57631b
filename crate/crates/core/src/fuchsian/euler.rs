//! Differential operators in Euler form `Σ_k z^k P_k(θ)` and in D-form
//! `Σ_i c_i(z) D^i`, with `θ = z d/dz`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::exact::poly::content_of;
use crate::exact::{ExactError, Polynomial, Rational, RationalFunction};
use crate::ore::ShiftOperator;
use crate::series::TruncatedSeries;

/// `Σ_k z^k P_k(θ)`; absent `k` means `P_k = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct EulerOperator {
    terms: BTreeMap<usize, Polynomial>,
}

impl EulerOperator {
    /// Repeated powers of `z` are summed; zero coefficients are dropped.
    pub fn new(terms: impl IntoIterator<Item = (usize, Polynomial)>) -> Self {
        let mut map: BTreeMap<usize, Polynomial> = BTreeMap::new();
        for (k, p) in terms {
            let e = map.entry(k).or_default();
            *e = &*e + &p;
        }
        map.retain(|_, p| !p.is_zero());
        EulerOperator { terms: map }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Polynomial)> {
        self.terms.iter().map(|(k, p)| (*k, p))
    }

    pub fn p(&self, k: usize) -> Polynomial {
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    pub fn max_power(&self) -> usize {
        self.terms.keys().next_back().copied().unwrap_or(0)
    }

    pub fn min_power(&self) -> usize {
        self.terms.keys().next().copied().unwrap_or(0)
    }

    /// Highest power of `θ` present.
    pub fn order(&self) -> usize {
        self.terms.values().filter_map(Polynomial::degree).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.terms().map(|(k, p)| (k, p.scale(c))))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.terms().chain(other.terms()).map(|(k, p)| (k, p.clone())))
    }

    /// Composition `self ∘ other`, using `P(θ) z^b = z^b P(θ + b)`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        for (a, p) in self.terms() {
            for (b, q) in other.terms() {
                out.push((a + b, &p.shift_int(b as i64) * q));
            }
        }
        Self::new(out)
    }

    /// `z^j · self`.
    pub fn mul_z_pow(&self, j: usize) -> Self {
        Self::new(self.terms().map(|(k, p)| (k + j, p.clone())))
    }

    /// `[z^n](self g) = Σ_k P_k(n-k) g_{n-k}`, same truncation order.
    pub fn apply(&self, g: &TruncatedSeries) -> TruncatedSeries {
        let n_max = g.order();
        let coeffs = (0..=n_max)
            .map(|n| {
                self.terms()
                    .filter(|(k, _)| *k <= n)
                    .fold(Rational::zero(), |acc, (k, p)| acc + p.eval_int((n - k) as i64) * g.coeff(n - k))
            })
            .collect();
        TruncatedSeries::from_coeffs(coeffs)
    }

    /// Forward recurrence for the coefficients of an annihilated series:
    /// the coefficient of `S^{K-k}` is `P_k(n + K - k)`, `K` the top power.
    pub fn coefficient_recurrence(&self) -> ShiftOperator {
        let top = self.max_power();
        let coeffs = (0..=top)
            .map(|j| self.p(top - j).shift_int(j as i64))
            .collect();
        ShiftOperator::new(coeffs).expect("nonzero operator")
    }

    /// Coefficients `Q_k` with `self = Σ_k Q_k(θ) z^k`, i.e. `Q_k(θ) = P_k(θ - k)`.
    pub fn right_form(&self) -> Vec<(usize, Polynomial)> {
        self.terms().map(|(k, p)| (k, p.shift_int(-(k as i64)))).collect()
    }

    pub fn from_right_form(terms: &[(usize, Polynomial)]) -> Self {
        Self::new(terms.iter().map(|(k, q)| (*k, q.shift_int(*k as i64))))
    }

    /// Divides out the rational content; the leading `θ` coefficient of the
    /// lowest `z` power is made positive. Returns the operator and the unit
    /// `u` with `self = u · normalized`.
    pub fn normalized(&self) -> (Self, Rational) {
        if self.is_zero() {
            return (self.clone(), Rational::one());
        }
        let content = content_of(self.terms.values().flat_map(|p| p.coeffs().iter()));
        let lowest = self.terms.values().next().expect("nonzero");
        let unit = if lowest.leading_coeff().expect("nonzero").is_negative() { -content } else { content };
        (self.scale(&unit.recip()), unit)
    }

    /// `Some(u)` with `self = u · other`.
    pub fn unit_relative_to(&self, other: &Self) -> Option<Rational> {
        let (a, ua) = self.normalized();
        let (b, ub) = other.normalized();
        (a == b).then(|| ua / ub)
    }

    /// D-form with polynomial coefficients, via the falling-factorial basis
    /// `θ(θ-1)...(θ-i+1) = z^i D^i`.
    pub fn to_dform(&self) -> DFormOperator {
        let mut coeffs: Vec<Polynomial> = vec![Polynomial::zero(); self.order() + 1];
        for (k, p) in self.terms() {
            for (i, d) in falling_factorial_coordinates(p).into_iter().enumerate() {
                if !d.is_zero() {
                    coeffs[i] = &coeffs[i] + &Polynomial::monomial(d, k + i);
                }
            }
        }
        DFormOperator::new(coeffs.into_iter().map(RationalFunction::from_poly).collect())
    }

    /// Inverse of [`to_dform`](Self::to_dform). A general D-form operator is
    /// first multiplied on the left by its common denominator and by the
    /// least power of `z` making every term expressible in `θ`; that left
    /// multiplier is returned alongside.
    pub fn from_dform(d: &DFormOperator) -> (Self, RationalFunction) {
        let common = d
            .coeffs
            .iter()
            .fold(Polynomial::one(), |acc, c| poly_lcm(&acc, c.den()));
        let cleared: Vec<Polynomial> = d
            .coeffs
            .iter()
            .map(|c| (c * &RationalFunction::from_poly(common.clone())).num().clone())
            .collect();
        // z^s c_i(z) D^i = z^{s-i} c_i(z) θ^(i) needs s - i + val(c_i) >= 0
        let s = cleared
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| i as i64 - c.low_order().expect("nonzero") as i64)
            .max()
            .unwrap_or(0)
            .max(0);
        let mut terms = Vec::new();
        for (i, c) in cleared.iter().enumerate() {
            let falling = falling_factorial(i);
            for (m, cm) in c.coeffs().iter().enumerate() {
                if !cm.is_zero() {
                    let k = (m as i64 + s - i as i64) as usize;
                    terms.push((k, falling.scale(cm)));
                }
            }
        }
        let multiplier = RationalFunction::from_poly(&Polynomial::monomial(Rational::one(), s as usize) * &common);
        (Self::new(terms), multiplier)
    }

    /// `Σ_j r_j(z) θ^j` with coefficient functions on the left, after left
    /// multiplication by the monic lcm of their denominators; the multiplier
    /// is returned alongside.
    pub fn from_theta_coefficients(coeffs: &[RationalFunction]) -> (Self, Polynomial) {
        let common = coeffs.iter().fold(Polynomial::one(), |acc, c| poly_lcm(&acc, c.den()));
        let scaled: Vec<RationalFunction> =
            coeffs.iter().map(|c| c * &RationalFunction::from_poly(common.clone())).collect();
        (Self::from_polynomial_theta_coefficients(&scaled).expect("denominators cleared"), common)
    }

    /// As above when every coefficient is already a polynomial in `z`.
    pub fn from_polynomial_theta_coefficients(coeffs: &[RationalFunction]) -> Option<Self> {
        let mut terms = Vec::new();
        for (j, c) in coeffs.iter().enumerate() {
            if !c.is_polynomial() {
                return None;
            }
            let poly = c.num().scale(&c.den().coeff(0).recip());
            for (m, cm) in poly.coeffs().iter().enumerate() {
                if !cm.is_zero() {
                    terms.push((m, Polynomial::monomial(cm.clone(), j)));
                }
            }
        }
        Some(Self::new(terms))
    }

    pub fn display(&self) -> String {
        let parts: Vec<String> = self
            .terms()
            .map(|(k, p)| match k {
                0 => format!("({})", p.display_in("θ")),
                1 => format!("z·({})", p.display_in("θ")),
                _ => format!("z^{k}·({})", p.display_in("θ")),
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for EulerOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

/// `x(x-1)...(x-i+1)`.
pub fn falling_factorial(i: usize) -> Polynomial {
    let shifts: Vec<Rational> = (0..i).map(|j| -Rational::from_integer((j as i64).into())).collect();
    Polynomial::from_shifted_roots(&shifts)
}

/// `d_i = Δ^i P(0) / i!`, so that `P(x) = Σ d_i x(x-1)...(x-i+1)`.
fn falling_factorial_coordinates(p: &Polynomial) -> Vec<Rational> {
    let deg = p.degree().unwrap_or(0);
    let mut diffs: Vec<Rational> = (0..=deg as i64).map(|x| p.eval_int(x)).collect();
    let mut out = Vec::with_capacity(deg + 1);
    let mut fact = Rational::one();
    for i in 0..=deg {
        if i > 0 {
            fact *= Rational::from_integer((i as i64).into());
        }
        out.push(&diffs[0] / &fact);
        diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    out
}

fn poly_lcm(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let g = Polynomial::gcd(a, b);
    (a * b).div_exact(&g).expect("gcd divides").monic()
}

/// `Σ_i c_i(z) D^i` with `D = d/dz`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DFormOperator {
    coeffs: Vec<RationalFunction>,
}

impl DFormOperator {
    pub fn new(mut coeffs: Vec<RationalFunction>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(RationalFunction::is_zero) {
            coeffs.pop();
        }
        DFormOperator { coeffs }
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        let lead = self.coeffs.last().expect("nonempty").clone();
        Self::new(self.coeffs.iter().map(|c| c.checked_div(&lead).expect("nonzero leading")).collect())
    }

    /// `(L · self)(g)` where `L` clears all denominators; vanishes exactly
    /// when `self` annihilates `g`. Known to order `N - r`.
    pub fn apply_cleared(&self, g: &TruncatedSeries) -> TruncatedSeries {
        let common = self.coeffs.iter().fold(Polynomial::one(), |acc, c| poly_lcm(&acc, c.den()));
        let r = self.order();
        let out_order = g.order().saturating_sub(r);
        let mut acc = TruncatedSeries::zero(out_order);
        let mut deriv = g.clone();
        for c in &self.coeffs {
            let cleared = (c * &RationalFunction::from_poly(common.clone())).num().clone();
            let term = &TruncatedSeries::from_poly(&cleared, deriv.order()) * &deriv;
            acc = &acc + &term.truncate(out_order.min(term.order()));
            deriv = deriv.derivative();
        }
        acc
    }

    /// Pullback along `t = ψ(x)`: the operator in `x` annihilating `y(ψ(x))`
    /// whenever `self` annihilates `y(t)`. Uses `D_t = (1/ψ') D_x`.
    pub fn pullback(&self, psi: &RationalFunction) -> Result<Self, ExactError> {
        let inv_dpsi = psi.derivative().recip()?;
        let mut out: Vec<RationalFunction> = vec![RationalFunction::zero(); self.order() + 1];
        // D_t^k in x-coordinates, as coefficients of D_x^i
        let mut power = vec![RationalFunction::one()];
        for (k, c) in self.coeffs.iter().enumerate() {
            let ck = c.compose(psi)?;
            for (i, r) in power.iter().enumerate() {
                out[i] = &out[i] + &(&ck * r);
            }
            if k + 1 < self.coeffs.len() {
                let mut next = vec![RationalFunction::zero(); power.len() + 1];
                for (i, r) in power.iter().enumerate() {
                    next[i] = &next[i] + &(&r.derivative() * &inv_dpsi);
                    next[i + 1] = &next[i + 1] + &(r * &inv_dpsi);
                }
                power = next;
            }
        }
        Ok(Self::new(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    #[test]
    fn theta_squared_in_d_form() {
        let t2 = EulerOperator::new([(0, p(&[0, 0, 1]))]);
        let d = t2.to_dform();
        // z^2 D^2 + z D
        assert_eq!(d.coeffs()[1], RationalFunction::from_poly(p(&[0, 1])));
        assert_eq!(d.coeffs()[2], RationalFunction::from_poly(p(&[0, 0, 1])));
        let (back, mult) = EulerOperator::from_dform(&d);
        assert_eq!(back, t2);
        assert_eq!(mult, RationalFunction::one());
    }

    #[test]
    fn left_and_right_forms_of_pi_square_operator() {
        // 2θ^3 - z(2θ+1)(2θ^2+2θ+1) + 2z^2(θ+1)^3
        let left = EulerOperator::new([
            (0, p(&[0, 0, 0, 2])),
            (1, -(&p(&[1, 2]) * &p(&[1, 2, 2]))),
            (2, p(&[1, 1]).pow(3).scale(&int(2))),
        ]);
        let right = left.right_form();
        assert_eq!(right[1].1, -(&p(&[-1, 2]) * &p(&[1, -2, 2])));
        assert_eq!(right[2].1, p(&[-1, 1]).pow(3).scale(&int(2)));
        assert_eq!(EulerOperator::from_right_form(&right), left);
    }

    #[test]
    fn commutation_rule() {
        // θ ∘ z = z (θ + 1)
        let theta = EulerOperator::new([(0, p(&[0, 1]))]);
        let z = EulerOperator::new([(1, p(&[1]))]);
        assert_eq!(theta.compose(&z), EulerOperator::new([(1, p(&[1, 1]))]));
    }

    #[test]
    fn apply_agrees_with_d_form() {
        let op = EulerOperator::new([(0, p(&[0, 1, 3])), (1, p(&[2, -1])), (2, p(&[1]))]);
        let g = TruncatedSeries::new((0..12).map(|k| rat(k + 1, k + 2)).collect(), 11);
        let via_euler = op.apply(&g);
        let via_d = op.to_dform().apply_cleared(&g);
        assert!(via_d.agrees_with(&via_euler));
    }

    #[test]
    fn recurrence_extraction() {
        let op = EulerOperator::new([(0, p(&[0, 0, 1])), (1, p(&[-1]))]);
        // n^2 g_n = g_{n-1}: forward (n+1)^2 S - 1
        assert_eq!(op.coefficient_recurrence(), ShiftOperator::new(vec![p(&[-1]), p(&[1, 2, 1])]).unwrap());
    }

    #[test]
    fn normalization_units() {
        let op = EulerOperator::new([(0, p(&[0, -4])), (1, p(&[2]))]);
        let (n, u) = op.normalized();
        assert_eq!(u, int(-2));
        assert_eq!(n, EulerOperator::new([(0, p(&[0, 2])), (1, p(&[-1]))]));
        assert_eq!(op.unit_relative_to(&n), Some(int(-2)));
    }

    #[test]
    fn rational_d_form_is_cleared() {
        // D + 1/z  ->  multiply by z: zD + 1 = θ + 1
        let d = DFormOperator::new(vec![
            RationalFunction::new(p(&[1]), p(&[0, 1])).unwrap(),
            RationalFunction::one(),
        ]);
        let (e, mult) = EulerOperator::from_dform(&d);
        assert_eq!(e, EulerOperator::new([(0, p(&[1, 1]))]));
        assert_eq!(mult, RationalFunction::x());
    }

    fn small_op() -> impl Strategy<Value = EulerOperator> {
        prop::collection::vec(prop::collection::vec(-5i64..6, 0..4), 1..4)
            .prop_map(|ps| EulerOperator::new(ps.iter().enumerate().map(|(k, c)| (k, p(c)))))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn dform_round_trip(op in small_op()) {
            let (back, mult) = EulerOperator::from_dform(&op.to_dform());
            prop_assert_eq!(back, op);
            prop_assert_eq!(mult, RationalFunction::one());
        }
    }
}
