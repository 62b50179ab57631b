//! Order-3 Fuchsian operators of symmetric-square type: the Chaundy square
//! operator, the accessory-parameter family and its Gauss point, the
//! Heun/Domb equations, and ramification of rational maps.

pub mod belyi;
pub mod euler;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact::rational::to_decimal;
use crate::exact::{int, rat, ExactError, Polynomial, Rational, RationalFunction};
use crate::series::{
    compose_rational, frobenius_coefficients, hypergeometric_series, q_polynomial, HypParams,
    SeriesError, TruncatedSeries,
};

pub use belyi::{belyi_ramification, Fiber, Ramification};
pub use euler::{DFormOperator, EulerOperator};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FuchsianError {
    #[error("exponents violate the Fuchs relation: α+β+γ1+γ2 = {0}, expected 1")]
    FuchsViolation(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

fn lin(s: Rational) -> Polynomial {
    Polynomial::linear(s, Rational::one())
}

/// `2θ(θ+c-1)(θ+2c-2) - z Q(θ) + 2z²(θ+a+b)(θ+2a)(θ+2b)`, which annihilates
/// `2F1(a,b;c;z)²`.
pub fn chaundy_operator(a: &Rational, b: &Rational, c: &Rational) -> EulerOperator {
    let two = int(2);
    let one = Rational::one();
    let p0 = &(&lin(Rational::zero()) * &lin(c - &one)) * &lin(&two * c - &two);
    let p2 = &(&lin(a + b) * &lin(&two * a)) * &lin(&two * b);
    EulerOperator::new([(0, p0.scale(&two)), (1, -q_polynomial(a, b, c)), (2, p2.scale(&two))])
}

/// Exponents `{0,α,2α}` at 0, `{0,β,2β}` at 1, `{γ1+γ2, 2γ1, 2γ2}` at ∞.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RiemannScheme {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma1: Rational,
    pub gamma2: Rational,
}

impl RiemannScheme {
    pub fn new(alpha: Rational, beta: Rational, gamma1: Rational, gamma2: Rational) -> Result<Self, FuchsianError> {
        let sum = &alpha + &beta + &gamma1 + &gamma2;
        if !sum.is_one() {
            return Err(FuchsianError::FuchsViolation(sum.to_string()));
        }
        Ok(RiemannScheme { alpha, beta, gamma1, gamma2 })
    }

    /// The scheme of `Sym²` of the Gauss equation with parameters `(a,b,c)`.
    pub fn from_gauss(a: &Rational, b: &Rational, c: &Rational) -> Self {
        let one = Rational::one();
        RiemannScheme { alpha: &one - c, beta: c - a - b, gamma1: a.clone(), gamma2: b.clone() }
    }

    /// `2γ1γ2(1-2α)`.
    pub fn lambda0(&self) -> Rational {
        int(2) * &self.gamma1 * &self.gamma2 * (Rational::one() - int(2) * &self.alpha)
    }

    /// `(a, b, c) = (γ1, γ2, 1-α)`.
    pub fn recover_gauss(&self) -> (Rational, Rational, Rational) {
        (self.gamma1.clone(), self.gamma2.clone(), Rational::one() - &self.alpha)
    }

    /// `θ(θ-α)(θ-2α) + z(P1(θ) - λ) + z²(θ+γ1+γ2)(θ+2γ1)(θ+2γ2)`.
    pub fn accessory_family(&self, lambda: &Rational) -> EulerOperator {
        let (al, g1, g2) = (&self.alpha, &self.gamma1, &self.gamma2);
        let two = int(2);
        let p0 = &(&lin(Rational::zero()) * &lin(-al)) * &lin(-(&two * al));
        let gs = g1 + g2;
        let p1 = Polynomial::new(vec![
            -lambda.clone(),
            int(4) * al * &gs - int(4) * g1 * g2 - al - &gs,
            int(3) * (al - &gs),
            int(-2),
        ]);
        let p2 = &(&lin(gs.clone()) * &lin(&two * g1)) * &lin(&two * g2);
        EulerOperator::new([(0, p0), (1, p1), (2, p2)])
    }
}

/// `D² + p D + q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecondOrderDForm {
    pub p: RationalFunction,
    pub q: RationalFunction,
}

impl SecondOrderDForm {
    /// Gauss: `p = c/z + (a+b+1-c)/(z-1)`, `q = ab/(z(z-1))`.
    pub fn gauss(a: &Rational, b: &Rational, c: &Rational) -> Self {
        let z = Polynomial::x();
        let zm1 = Polynomial::from_ints(&[-1, 1]);
        let f = |num: Rational, den: &Polynomial| {
            RationalFunction::new(Polynomial::constant(num), den.clone()).expect("nonzero denominator")
        };
        let p = &f(c.clone(), &z) + &f(a + b + Rational::one() - c, &zm1);
        let q = f(a * b, &(&z * &zm1));
        SecondOrderDForm { p, q }
    }

    pub fn as_dform(&self) -> DFormOperator {
        DFormOperator::new(vec![self.q.clone(), self.p.clone(), RationalFunction::one()])
    }
}

/// `D³ + 3p D² + (2p² + p' + 4q) D + (4pq + 2q')`.
pub fn sym2_second_order(m: &SecondOrderDForm) -> DFormOperator {
    let (p, q) = (&m.p, &m.q);
    let r = |n: i64| RationalFunction::constant(int(n));
    let c2 = &r(3) * p;
    let c1 = &(&(&r(2) * &(p * p)) + &p.derivative()) + &(&r(4) * q);
    let c0 = &(&r(4) * &(p * q)) + &(&r(2) * &q.derivative());
    DFormOperator::new(vec![c0, c1, c2, RationalFunction::one()])
}

/// Euler form of `Sym²(Gauss(a,b;c))`, cleared of denominators.
pub fn sym2_gauss_euler(a: &Rational, b: &Rational, c: &Rational) -> EulerOperator {
    EulerOperator::from_dform(&sym2_second_order(&SecondOrderDForm::gauss(a, b, c))).0
}

/// Whether the accessory operator at `λ` is `Sym²` of the recovered Gauss
/// equation. Compared as monic D-forms, so common left factors that cancel
/// on reducible parameter choices do not matter.
pub fn is_sym2_point(s: &RiemannScheme, lambda: &Rational) -> bool {
    let (a, b, c) = s.recover_gauss();
    s.accessory_family(lambda).to_dform().monic() == sym2_second_order(&SecondOrderDForm::gauss(&a, &b, &c)).monic()
}

/// `1/6, 1/3; 1` pulled back along `φ(x) = 108x²/(1-4x)³`.
pub fn domb_map() -> RationalFunction {
    RationalFunction::new(Polynomial::from_ints(&[0, 0, 108]), Polynomial::from_ints(&[1, -4]).pow(3))
        .expect("nonzero denominator")
}

/// `y = (1-4x)^{-1/2} 2F1(1/6,1/3;1;φ(x))` to order `n`.
pub fn domb_half_twisted_series(n: usize) -> Result<TruncatedSeries, FuchsianError> {
    let f = hypergeometric_series(&HypParams::gauss(rat(1, 6), rat(1, 3), int(1))?, n);
    let pulled = compose_rational(&f, &domb_map(), &int(1), n)?;
    let twist = TruncatedSeries::from_poly(&Polynomial::from_ints(&[1, -4]), n).power(&rat(-1, 2))?;
    Ok(&twist * &pulled)
}

/// `x(1-4x)(1-16x) y'' + (1-30x+128x²) y' - 2(1-8x) y`.
pub fn heun_domb_operator() -> DFormOperator {
    let c2 = &(&Polynomial::x() * &Polynomial::from_ints(&[1, -4])) * &Polynomial::from_ints(&[1, -16]);
    DFormOperator::new(vec![
        RationalFunction::from_poly(Polynomial::from_ints(&[-2, 16])),
        RationalFunction::from_poly(Polynomial::from_ints(&[1, -30, 128])),
        RationalFunction::from_poly(c2),
    ])
}

/// Heun operator applied to the twisted pullback, coefficients `0..=n`.
pub fn heun_domb_residual(n: usize) -> Result<TruncatedSeries, FuchsianError> {
    let y = domb_half_twisted_series(n + 2)?;
    Ok(heun_domb_operator().apply_cleared(&y).truncate(n))
}

/// `θ³ - 2x(2θ+1)(5θ²+5θ+2) + 64x²(θ+1)³`.
pub fn domb_theta_operator() -> EulerOperator {
    EulerOperator::new([
        (0, Polynomial::from_ints(&[0, 0, 0, 1])),
        (1, (&Polynomial::from_ints(&[1, 2]) * &Polynomial::from_ints(&[2, 5, 5])).scale(&int(-2))),
        (2, Polynomial::from_ints(&[1, 1]).pow(3).scale(&int(64))),
    ])
}

/// Scheme of the A036917 point whose accessory curves are plotted.
pub fn reference_scheme() -> RiemannScheme {
    RiemannScheme::new(int(0), int(0), rat(1, 2), rat(1, 2)).expect("Fuchs relation holds")
}

/// Frobenius coefficients of the accessory family with seeds `g0 = 1`,
/// `g1 = λ`.
pub fn accessory_series(scheme: &RiemannScheme, lambda: &Rational, n: usize) -> Result<TruncatedSeries, FuchsianError> {
    let op = scheme.accessory_family(lambda);
    Ok(frobenius_coefficients(&op, &[Rational::one(), lambda.clone()], n)?)
}

/// One curve point: `(λ, n, exact g_n, g_n to 10 decimals)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvePoint {
    pub lambda: Rational,
    pub n: usize,
    pub exact: Rational,
    pub decimal: String,
}

pub fn curve_points(lambdas: &[Rational], n: usize) -> Result<Vec<CurvePoint>, FuchsianError> {
    let scheme = reference_scheme();
    let mut out = Vec::new();
    for lambda in lambdas {
        let g = accessory_series(&scheme, lambda, n)?;
        for (k, c) in g.coeffs().iter().enumerate() {
            out.push(CurvePoint { lambda: lambda.clone(), n: k, exact: c.clone(), decimal: to_decimal(c, 10) });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ore::ShiftOperator;
    use crate::series::gauss_square_recurrence;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    fn half() -> Rational {
        rat(1, 2)
    }

    #[test]
    fn chaundy_at_a036917_point() {
        let op = chaundy_operator(&half(), &half(), &int(1));
        let expected = EulerOperator::new([
            (0, p(&[0, 0, 0, 2])),
            (1, -(&p(&[1, 2]) * &p(&[1, 2, 2]))),
            (2, p(&[1, 1]).pow(3).scale(&int(2))),
        ]);
        assert_eq!(op, expected);
    }

    #[test]
    fn reference_schemes() {
        let s1 = reference_scheme();
        assert_eq!(s1.lambda0(), half());
        assert_eq!(s1.recover_gauss(), (half(), half(), int(1)));
        let s2 = RiemannScheme::new(rat(-1, 2), int(0), half(), int(1)).unwrap();
        assert_eq!(s2.lambda0(), int(2));
        assert_eq!(s2.recover_gauss(), (half(), int(1), rat(3, 2)));
        let s3 = RiemannScheme::new(int(1), int(0), int(0), int(0)).unwrap();
        assert_eq!(s3.lambda0(), int(0));
        assert!(RiemannScheme::new(int(1), int(1), int(0), int(0)).is_err());
    }

    #[test]
    fn accessory_recurrences_at_gauss_points() {
        let s1 = reference_scheme();
        let gk = s1.accessory_family(&half()).scale(&int(2)).coefficient_recurrence();
        let expected = ShiftOperator::new(vec![
            p(&[1, 1]).pow(3).scale(&int(2)),
            -(&p(&[3, 2]) * &p(&[5, 6, 2])),
            p(&[2, 1]).pow(3).scale(&int(2)),
        ])
        .unwrap();
        assert_eq!(gk, expected);
        let s2 = RiemannScheme::new(rat(-1, 2), int(0), half(), int(1)).unwrap();
        let cat = s2.accessory_family(&int(2)).coefficient_recurrence();
        let target = gauss_square_recurrence(&half(), &int(1), &rat(3, 2)).unwrap();
        assert!(cat.equivalent_up_to_unit(&target));
    }

    #[test]
    fn curve_first_values() {
        let g = accessory_series(&reference_scheme(), &int(0), 3).unwrap();
        let dec: Vec<String> = g.coeffs().iter().map(|c| to_decimal(c, 10)).collect();
        assert_eq!(dec, ["1.0000000000", "0.0000000000", "-0.1250000000", "-0.1481481481"]);
        // a seed that contradicts the n = 1 equation is rejected
        let op = reference_scheme().accessory_family(&int(0));
        assert_eq!(
            frobenius_coefficients(&op, &[int(1), int(5)], 4),
            Err(SeriesError::SeedContradiction(1))
        );
        assert_eq!(frobenius_coefficients(&op, &[], 4), Err(SeriesError::IndicialVanishes(0)));
        assert_eq!(
            frobenius_coefficients(&EulerOperator::default(), &[int(1)], 4),
            Err(SeriesError::ZeroOperator)
        );
    }

    #[test]
    fn sym2_of_trivial_operator() {
        let m = SecondOrderDForm { p: RationalFunction::zero(), q: RationalFunction::zero() };
        let s = sym2_second_order(&m);
        assert_eq!(s.coeffs()[..3], [RationalFunction::zero(), RationalFunction::zero(), RationalFunction::zero()]);
        assert_eq!(s.order(), 3);
    }

    #[test]
    fn heun_and_domb_operators() {
        let r = heun_domb_residual(40).unwrap();
        assert!(r.is_zero());
        let one = TruncatedSeries::one(10);
        let res_one = heun_domb_operator().apply_cleared(&one);
        assert_eq!(res_one, TruncatedSeries::from_poly(&p(&[-2, 16]), 8));
        let y = domb_half_twisted_series(40).unwrap();
        let y2 = &y * &y;
        assert!(domb_theta_operator().apply(&y2).is_zero());
        let d: Vec<Rational> = [1, 4, 28, 256, 2716, 31504, 387136, 4951552].iter().map(|&v| int(v)).collect();
        assert_eq!(&y2.coeffs()[..8], d.as_slice());
    }

    #[test]
    fn chaundy_annihilates_square() {
        let (a, b, c) = (rat(1, 3), rat(2, 7), rat(5, 4));
        let f = hypergeometric_series(&HypParams::gauss(a.clone(), b.clone(), c.clone()).unwrap(), 40);
        assert!(chaundy_operator(&a, &b, &c).apply(&(&f * &f)).is_zero());
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-7i64..8, 1i64..6).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn chaundy_recurrence_is_gauss_square(a in small_rat(), b in small_rat(), c in small_rat()) {
            prop_assume!(!crate::series::is_nonpositive_integer(&c));
            let rec = chaundy_operator(&a, &b, &c).coefficient_recurrence();
            prop_assert_eq!(rec, gauss_square_recurrence(&a, &b, &c).unwrap());
        }

        #[test]
        fn gauss_round_trip(a in small_rat(), b in small_rat(), c in small_rat()) {
            let s = RiemannScheme::from_gauss(&a, &b, &c);
            let s = RiemannScheme::new(s.alpha, s.beta, s.gamma1, s.gamma2).unwrap();
            prop_assert_eq!(s.recover_gauss(), (a, b, c));
        }

        #[test]
        fn sym2_point_is_unique(a in small_rat(), b in small_rat(), c in small_rat()) {
            let s = RiemannScheme::from_gauss(&a, &b, &c);
            let l0 = s.lambda0();
            prop_assert!(is_sym2_point(&s, &l0));
            prop_assert!(!is_sym2_point(&s, &(l0 + int(1))));
        }

        #[test]
        fn sym2_squares_solutions(p0 in -4i64..5, p1 in -4i64..5, q0 in -4i64..5, q1 in -4i64..5) {
            // polynomial p, q: y'' + p y' + q y = 0 with y(0) = 1, y'(0) = 0
            let p = RationalFunction::from_poly(Polynomial::from_ints(&[p0, p1]));
            let q = RationalFunction::from_poly(Polynomial::from_ints(&[q0, q1]));
            let n = 32;
            let mut y = vec![int(1), int(0)];
            for k in 0..n - 1 {
                // (k+2)(k+1) y_{k+2} = -Σ (p_j (k-j+1) y_{k-j+1}) - Σ q_j y_{k-j}
                let kk = k as i64;
                let mut s = int(-p0 * (kk + 1)) * &y[k + 1] - int(q0) * &y[k];
                if k >= 1 {
                    s -= int(p1 * kk) * &y[k] + int(q1) * &y[k - 1];
                }
                y.push(s / int((kk + 2) * (kk + 1)));
            }
            let ys = TruncatedSeries::from_coeffs(y);
            let m = SecondOrderDForm { p, q };
            prop_assert!(m.as_dform().apply_cleared(&ys).is_zero());
            let sq = &ys * &ys;
            prop_assert!(sym2_second_order(&m).apply_cleared(&sq).is_zero());
        }
    }
}
