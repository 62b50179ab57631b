//! Algebraic and hypergeometric closed forms for individual table rows,
//! compared against the squared pullback series.

use serde::Serialize;

use super::{reference_row, ScanError};
use crate::exact::{int, rat, Polynomial, Rational, RationalFunction};
use crate::fuchsian::euler::{DFormOperator, EulerOperator};
use crate::series::{frobenius_coefficients, hypergeometric_series, HypParams, TruncatedSeries};

pub const CLOSED_FORM_ORDER: usize = 30;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedFormCheck {
    pub label: u32,
    pub form: &'static str,
    pub order: usize,
    pub passed: bool,
}

fn series_of(num: &[i64], den: &[i64], order: usize) -> Result<TruncatedSeries, ScanError> {
    let f = RationalFunction::new(Polynomial::from_ints(num), Polynomial::from_ints(den))?;
    Ok(TruncatedSeries::from_rational_function(&f, order)?)
}

fn row_square(label: u32, order: usize) -> Result<TruncatedSeries, ScanError> {
    reference_row(label)?.tuple.squared_series(order)
}

/// `1 - 39x + 48x^2 - 64x^3 = (1-4x)^3 - 27x`.
fn cubic_discriminant(order: usize) -> TruncatedSeries {
    TruncatedSeries::from_poly(&Polynomial::from_ints(&[1, -39, 48, -64]), order)
}

/// Row #5: `(1-4x) (1-39x+48x^2-64x^3)^{-1/3}`.
pub fn row5_closed_form(order: usize) -> Result<TruncatedSeries, ScanError> {
    let lin = TruncatedSeries::from_poly(&Polynomial::from_ints(&[1, -4]), order);
    Ok(&lin * &cubic_discriminant(order).power(&rat(-1, 3))?)
}

/// Row #13: `(1-4x)^2 (1-39x+48x^2-64x^3)^{-2/3}`.
pub fn row13_closed_form(order: usize) -> Result<TruncatedSeries, ScanError> {
    let sq = TruncatedSeries::from_poly(&Polynomial::from_ints(&[1, -8, 16]), order);
    Ok(&sq * &cubic_discriminant(order).power(&rat(-2, 3))?)
}

/// Row #9: `((1-u)^{-1} + (1-u)^{-1/2}) / 2` with `u = 4x/(1-x)^2`.
pub fn row9_closed_form(order: usize) -> Result<TruncatedSeries, ScanError> {
    let one_minus_u = &TruncatedSeries::one(order) - &series_of(&[0, 4], &[1, -2, 1], order)?;
    let sum = &one_minus_u.power(&int(-1))? + &one_minus_u.power(&rat(-1, 2))?;
    Ok(sum.scale(&rat(1, 2)))
}

/// `u = 108x/(1-16x)^3`, the row #11 argument `φ(4x)`.
fn row11_argument(order: usize) -> Result<TruncatedSeries, ScanError> {
    series_of(&[0, 108], &[1, -48, 768, -4096], order)
}

/// Row #11: `2 / (1 + sqrt(1-u))`.
pub fn row11_closed_form(order: usize) -> Result<TruncatedSeries, ScanError> {
    let root = (&TruncatedSeries::one(order) - &row11_argument(order)?).power(&rat(1, 2))?;
    let denom = (&TruncatedSeries::one(order) + &root).scale(&rat(1, 2));
    Ok(denom.reciprocal()?)
}

/// Row #11 as `Σ C_m (u/4)^m` with `C_m` the Catalan numbers.
pub fn row11_catalan_form(order: usize) -> Result<TruncatedSeries, ScanError> {
    let mut cat = vec![Rational::from_integer(1.into())];
    for m in 0..order {
        let next = &cat[m] * rat(2 * (2 * m as i64 + 1), m as i64 + 2);
        cat.push(next);
    }
    let catalan = TruncatedSeries::from_coeffs(cat);
    Ok(catalan.compose(&row11_argument(order)?.scale(&rat(1, 4)))?)
}

/// `64x(1-4x)(1-8x)^2`.
pub fn row15_argument() -> Polynomial {
    &(&Polynomial::from_ints(&[0, 64]) * &Polynomial::from_ints(&[1, -4])) * &Polynomial::from_ints(&[1, -16, 64])
}

fn clausen_half() -> HypParams {
    HypParams::new(vec![rat(1, 2); 3], vec![int(1), int(1)]).expect("valid lower parameters")
}

/// Row #15: `3F2(1/2,1/2,1/2; 1,1; 64x(1-4x)(1-8x)^2)`.
pub fn row15_closed_form(order: usize) -> Result<TruncatedSeries, ScanError> {
    let f = hypergeometric_series(&clausen_half(), order);
    Ok(f.compose(&TruncatedSeries::from_poly(&row15_argument(), order))?)
}

/// `θ^3 - t(θ+1/2)^3`, the operator of `3F2(1/2,1/2,1/2;1,1;t)`.
pub fn clausen_half_operator() -> EulerOperator {
    let cube = |s: Rational| Polynomial::linear(s, int(1)).pow(3);
    EulerOperator::new([(0, cube(int(0))), (1, -cube(rat(1, 2)))])
}

/// The row #15 operator pulled back along the quartic, in Euler form.
pub fn row15_pulled_back_operator() -> Result<EulerOperator, ScanError> {
    let d: DFormOperator = clausen_half_operator().to_dform().pullback(&RationalFunction::from_poly(row15_argument()))?;
    Ok(EulerOperator::from_dform(&d).0)
}

/// Frobenius solution of the pulled-back operator with `g_0 = 1`.
pub fn row15_frobenius(order: usize) -> Result<TruncatedSeries, ScanError> {
    Ok(frobenius_coefficients(&row15_pulled_back_operator()?, &[int(1)], order)?)
}

fn check(label: u32, form: &'static str, order: usize, lhs: Result<TruncatedSeries, ScanError>) -> ClosedFormCheck {
    let passed = match (lhs, row_square(label, order)) {
        (Ok(a), Ok(b)) => a.truncate(order) == b.truncate(order),
        _ => false,
    };
    ClosedFormCheck { label, form, order, passed }
}

/// Every closed form against the direct squared pullback to `order`.
pub fn closed_form_checks_to(order: usize) -> Vec<ClosedFormCheck> {
    vec![
        check(5, "(1-4x)(1-39x+48x^2-64x^3)^(-1/3)", order, row5_closed_form(order)),
        check(9, "((1-u)^-1 + (1-u)^(-1/2))/2, u = 4x/(1-x)^2", order, row9_closed_form(order)),
        check(11, "2/(1+sqrt(1-u)), u = 108x/(1-16x)^3", order, row11_closed_form(order)),
        check(11, "sum C_m (u/4)^m", order, row11_catalan_form(order)),
        check(13, "(1-4x)^2(1-39x+48x^2-64x^3)^(-2/3)", order, row13_closed_form(order)),
        check(15, "3F2(1/2,1/2,1/2;1,1;64x(1-4x)(1-8x)^2)", order, row15_closed_form(order)),
        check(15, "Frobenius solution of the pulled-back 3F2 operator", order.min(19), row15_frobenius(order.min(19))),
    ]
}

pub fn closed_form_checks() -> Vec<ClosedFormCheck> {
    closed_form_checks_to(CLOSED_FORM_ORDER)
}
