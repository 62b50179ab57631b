//! Small square matrices over Q(x).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::poly::forward_owned;
use super::ratfun::{RationalFunction, RationalFunctionJson};
use super::rational::Rational;
use super::ExactError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    dim: usize,
    entries: Vec<RationalFunction>,
}

impl RatMatrix {
    pub fn from_rows(rows: Vec<Vec<RationalFunction>>) -> Result<Self, ExactError> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(ExactError::Dimension(format!("{dim} rows, not square")));
        }
        Ok(RatMatrix { dim, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> RationalFunction) -> Self {
        let entries = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        RatMatrix { dim, entries }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { RationalFunction::one() } else { RationalFunction::zero() })
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| RationalFunction::zero())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &RationalFunction {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RationalFunction) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<RationalFunction>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn map(&self, f: impl Fn(&RationalFunction) -> RationalFunction) -> Self {
        RatMatrix { dim: self.dim, entries: self.entries.iter().map(f).collect() }
    }

    pub fn try_map(
        &self,
        f: impl Fn(&RationalFunction) -> Result<RationalFunction, ExactError>,
    ) -> Result<Self, ExactError> {
        let entries = self.entries.iter().map(f).collect::<Result<_, _>>()?;
        Ok(RatMatrix { dim: self.dim, entries })
    }

    pub fn scale(&self, s: &RationalFunction) -> Self {
        self.map(|e| e * s)
    }

    pub fn scale_rational(&self, s: &Rational) -> Self {
        self.map(|e| e.scale(s))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).clone())
    }

    fn check_dim(&self, other: &Self) -> Result<(), ExactError> {
        if self.dim != other.dim {
            return Err(ExactError::Dimension(format!("{} vs {}", self.dim, other.dim)));
        }
        Ok(())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ExactError> {
        self.check_dim(other)?;
        let n = self.dim;
        Ok(Self::from_fn(n, |i, j| {
            (0..n).fold(RationalFunction::zero(), |acc, k| &acc + &(self.get(i, k) * other.get(k, j)))
        }))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ExactError> {
        self.check_dim(other)?;
        Ok(Self::from_fn(self.dim, |i, j| self.get(i, j) + other.get(i, j)))
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[RationalFunction]) -> Vec<RationalFunction> {
        (0..self.dim)
            .map(|j| {
                (0..self.dim).fold(RationalFunction::zero(), |acc, i| &acc + &(&v[i] * self.get(i, j)))
            })
            .collect()
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[RationalFunction]) -> Vec<RationalFunction> {
        (0..self.dim)
            .map(|i| {
                (0..self.dim).fold(RationalFunction::zero(), |acc, j| &acc + &(self.get(i, j) * &v[j]))
            })
            .collect()
    }

    fn minor(&self, r: usize, c: usize) -> Self {
        let n = self.dim - 1;
        Self::from_fn(n, |i, j| {
            let ii = if i < r { i } else { i + 1 };
            let jj = if j < c { j } else { j + 1 };
            self.get(ii, jj).clone()
        })
    }

    /// Laplace expansion; dimensions here are at most 3.
    pub fn det(&self) -> RationalFunction {
        match self.dim {
            1 => self.get(0, 0).clone(),
            2 => &(self.get(0, 0) * self.get(1, 1)) - &(self.get(0, 1) * self.get(1, 0)),
            _ => (0..self.dim).fold(RationalFunction::zero(), |acc, j| {
                let term = self.get(0, j) * &self.minor(0, j).det();
                if j % 2 == 0 {
                    &acc + &term
                } else {
                    &acc - &term
                }
            }),
        }
    }

    pub fn adjugate(&self) -> Self {
        if self.dim == 1 {
            return Self::identity(1);
        }
        Self::from_fn(self.dim, |i, j| {
            let c = self.minor(j, i).det();
            if (i + j) % 2 == 0 {
                c
            } else {
                -c
            }
        })
    }

    pub fn inverse(&self) -> Result<Self, ExactError> {
        let d = self.det();
        if d.is_zero() {
            return Err(ExactError::Singular);
        }
        let inv_d = d.recip()?;
        Ok(self.adjugate().scale(&inv_d))
    }

    /// Entrywise `x d/dx`.
    pub fn theta(&self) -> Self {
        self.map(RationalFunction::theta)
    }

    /// Entrywise substitution `x -> inner(x)`.
    pub fn compose(&self, inner: &RationalFunction) -> Result<Self, ExactError> {
        self.try_map(|e| e.compose(inner))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(RationalFunction::is_zero)
    }

    pub fn to_json(&self) -> RatMatrixJson {
        RatMatrixJson {
            dim: self.dim,
            entries: self.rows().iter().map(|r| r.iter().map(RationalFunctionJson::from).collect()).collect(),
        }
    }

    pub fn from_json(j: &RatMatrixJson) -> Result<Self, ExactError> {
        let rows = j
            .entries
            .iter()
            .map(|r| r.iter().map(RationalFunction::try_from).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let m = Self::from_rows(rows)?;
        if m.dim != j.dim {
            return Err(ExactError::Dimension(format!("declared {} but found {}", j.dim, m.dim)));
        }
        Ok(m)
    }

    pub fn display_in(&self, var: &str) -> String {
        self.rows()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|e| e.display_in(var)).collect::<Vec<_>>().join(", ")))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatMatrixJson {
    pub dim: usize,
    pub entries: Vec<Vec<RationalFunctionJson>>,
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("z"))
    }
}

// Operator forms panic on dimension mismatch; use the checked_* variants when
// dimensions come from user input.
impl Add for &RatMatrix {
    type Output = RatMatrix;
    fn add(self, rhs: &RatMatrix) -> RatMatrix {
        self.checked_add(rhs).expect("matching dimensions")
    }
}

impl Sub for &RatMatrix {
    type Output = RatMatrix;
    fn sub(self, rhs: &RatMatrix) -> RatMatrix {
        self.checked_add(&-rhs).expect("matching dimensions")
    }
}

impl Mul for &RatMatrix {
    type Output = RatMatrix;
    fn mul(self, rhs: &RatMatrix) -> RatMatrix {
        self.checked_mul(rhs).expect("matching dimensions")
    }
}

impl Neg for &RatMatrix {
    type Output = RatMatrix;
    fn neg(self) -> RatMatrix {
        self.map(|e| -e)
    }
}

forward_owned!(Add, add, RatMatrix);
forward_owned!(Sub, sub, RatMatrix);
forward_owned!(Mul, mul, RatMatrix);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly::Polynomial;
    use crate::exact::rational::int;
    use proptest::prelude::*;

    fn c(v: i64) -> RationalFunction {
        RationalFunction::constant(int(v))
    }

    fn p(cs: &[i64]) -> RationalFunction {
        RationalFunction::from_poly(Polynomial::from_ints(cs))
    }

    #[test]
    fn identity_inverts_to_itself() {
        let i3 = RatMatrix::identity(3);
        assert_eq!(i3.inverse().unwrap(), i3);
        assert!(RatMatrix::zero(2).inverse().is_err());
    }

    #[test]
    fn adjugate_inverse_two_by_two() {
        let m = RatMatrix::from_rows(vec![vec![p(&[0, 1]), c(1)], vec![c(1), c(0)]]).unwrap();
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).is_identity());
        assert_eq!(m.det(), c(-1));
    }

    #[test]
    fn json_round_trip() {
        let m = RatMatrix::from_rows(vec![vec![p(&[1, 2]), c(3)], vec![c(0), p(&[0, 0, 1])]]).unwrap();
        let j = serde_json::to_string(&m.to_json()).unwrap();
        let back: RatMatrixJson = serde_json::from_str(&j).unwrap();
        assert_eq!(RatMatrix::from_json(&back).unwrap(), m);
    }

    fn entry() -> impl Strategy<Value = RationalFunction> {
        (prop::collection::vec(-5i64..6, 1..3), prop::collection::vec(-5i64..6, 1..3)).prop_map(|(n, d)| {
            let d = Polynomial::from_ints(&d);
            let d = if d.is_zero() { Polynomial::one() } else { d };
            RationalFunction::new(Polynomial::from_ints(&n), d).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn inverse_round_trip(es in prop::collection::vec(entry(), 9)) {
            let m = RatMatrix::from_fn(3, |i, j| es[3 * i + j].clone());
            prop_assume!(!m.det().is_zero());
            let inv = m.inverse().unwrap();
            prop_assert!((&m * &inv).is_identity());
            prop_assert!((&inv * &m).is_identity());
        }
    }
}
