//! Minimal annihilating operators by linear algebra on the data.
//!
//! For each order `r` and degree `d` the unknown coefficients form a linear
//! system with one equation per usable term. A rank test modulo a large prime
//! discards full-rank systems cheaply (rank mod p never exceeds the rank over
//! Q); survivors are solved exactly.

use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use super::ScanError;
use crate::exact::linalg::{nullspace, rank_mod, rational_mod};
use crate::exact::{Polynomial, Rational};
use crate::fuchsian::euler::EulerOperator;
use crate::ore::ShiftOperator;
use crate::series::TruncatedSeries;

/// `2^61 - 1`.
const PREFILTER_PRIME: u64 = (1 << 61) - 1;
const MARGIN: usize = 5;
pub const DEFAULT_MAX_DEGREE: usize = 12;
pub const DEFAULT_TERM_BUDGET: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AnnihilatorKind {
    /// `Σ_k x^k P_k(θ)` acting on a power series.
    Ode,
    /// `Σ_j P_j(n) S^j` acting on a sequence.
    Recurrence,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FoundOperator {
    Ode(EulerOperator),
    Recurrence(ShiftOperator),
}

impl fmt::Display for FoundOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FoundOperator::Ode(op) => write!(f, "{op}"),
            FoundOperator::Recurrence(op) => write!(f, "{op}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnihilatorReport {
    pub kind: AnnihilatorKind,
    /// Order of the operator found, or the largest order searched.
    pub order: usize,
    pub degree_bound: usize,
    /// Polynomial degree actually needed.
    pub degree: Option<usize>,
    pub found: bool,
    pub operator: Option<FoundOperator>,
    pub terms_used: usize,
}

/// Terms required for the search to be overdetermined.
pub fn required_terms(max_order: usize, max_degree: usize) -> usize {
    (max_order + 1) * (max_degree + 1) + max_order + MARGIN
}

fn pow_i(n: i64, e: usize) -> Rational {
    Rational::from_integer(n.into()).pow(e as i32)
}

/// Columns `(j, e)`: `n^e a_{n+j}`; rows `n = 0..len-r`.
fn recurrence_system(data: &[Rational], r: usize, d: usize) -> Vec<Vec<Rational>> {
    (0..data.len() - r)
        .map(|n| {
            let mut row = Vec::with_capacity((r + 1) * (d + 1));
            for j in 0..=r {
                for e in 0..=d {
                    row.push(if data[n + j].is_zero() { Rational::zero() } else { pow_i(n as i64, e) * &data[n + j] });
                }
            }
            row
        })
        .collect()
}

/// Columns `(k, i)` for the term `x^k θ^i`: `[x^n] = (n-k)^i y_{n-k}`.
fn ode_system(data: &[Rational], r: usize, d: usize) -> Vec<Vec<Rational>> {
    (0..data.len())
        .map(|n| {
            let mut row = Vec::with_capacity((r + 1) * (d + 1));
            for k in 0..=d {
                for i in 0..=r {
                    row.push(if k > n { Rational::zero() } else { pow_i((n - k) as i64, i) * &data[n - k] });
                }
            }
            row
        })
        .collect()
}

fn surely_full_rank(m: &[Vec<Rational>], cols: usize) -> bool {
    let reduced: Option<Vec<Vec<u64>>> =
        m.iter().map(|row| row.iter().map(|q| rational_mod(q, PREFILTER_PRIME)).collect()).collect();
    reduced.is_some_and(|rm| rank_mod(&rm, PREFILTER_PRIME) == cols)
}

fn build_operator(kind: AnnihilatorKind, v: &[Rational], r: usize, d: usize) -> Option<FoundOperator> {
    match kind {
        AnnihilatorKind::Recurrence => {
            let coeffs = (0..=r).map(|j| Polynomial::new(v[j * (d + 1)..(j + 1) * (d + 1)].to_vec())).collect();
            ShiftOperator::new(coeffs).ok().map(|op| FoundOperator::Recurrence(op.normalized()))
        }
        AnnihilatorKind::Ode => {
            let terms = (0..=d).map(|k| (k, Polynomial::new(v[k * (r + 1)..(k + 1) * (r + 1)].to_vec())));
            let op = EulerOperator::new(terms);
            (!op.is_zero()).then(|| FoundOperator::Ode(op.normalized().0))
        }
    }
}

/// Re-applies `op` to every available term.
pub fn verify(op: &FoundOperator, data: &[Rational]) -> bool {
    match op {
        FoundOperator::Recurrence(s) => s.annihilates(0, data),
        FoundOperator::Ode(e) => e.apply(&TruncatedSeries::from_coeffs(data.to_vec())).is_zero(),
    }
}

/// Smallest order `<= max_order` admitting an operator with coefficients of
/// degree `<= max_degree`; within that order, the smallest such degree.
pub fn find_annihilating_operator(
    data: &[Rational],
    kind: AnnihilatorKind,
    max_order: usize,
    max_degree: usize,
) -> Result<AnnihilatorReport, ScanError> {
    let needed = required_terms(max_order, max_degree);
    if data.len() < needed {
        return Err(ScanError::InsufficientData { needed, have: data.len() });
    }
    for r in 1..=max_order {
        for d in 0..=max_degree {
            let m = match kind {
                AnnihilatorKind::Recurrence => recurrence_system(data, r, d),
                AnnihilatorKind::Ode => ode_system(data, r, d),
            };
            let cols = (r + 1) * (d + 1);
            if surely_full_rank(&m, cols) {
                continue;
            }
            for v in nullspace(&m, cols) {
                if let Some(op) = build_operator(kind, &v, r, d) {
                    if verify(&op, data) {
                        return Ok(AnnihilatorReport {
                            kind,
                            order: r,
                            degree_bound: max_degree,
                            degree: Some(d),
                            found: true,
                            operator: Some(op),
                            terms_used: data.len(),
                        });
                    }
                }
            }
        }
    }
    Ok(AnnihilatorReport {
        kind,
        order: max_order,
        degree_bound: max_degree,
        degree: None,
        found: false,
        operator: None,
        terms_used: data.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::registry::domb_operator;
    use crate::scan::reference_row;

    fn domb_terms(n: usize) -> Vec<Rational> {
        domb_operator().solve_forward(&[int(1), int(4)], n).unwrap()
    }

    #[test]
    fn domb_recurrence_recovered() {
        let data = domb_terms(25);
        let rep = find_annihilating_operator(&data, AnnihilatorKind::Recurrence, 2, 3).unwrap();
        assert!(rep.found);
        assert_eq!((rep.order, rep.degree), (2, Some(3)));
        match rep.operator.unwrap() {
            FoundOperator::Recurrence(op) => assert!(op.equivalent_up_to_unit(&domb_operator())),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn too_few_terms_rejected() {
        let data = domb_terms(10);
        assert!(matches!(
            find_annihilating_operator(&data, AnnihilatorKind::Recurrence, 2, 3),
            Err(ScanError::InsufficientData { needed: 19, have: 11 })
        ));
    }

    #[test]
    fn row_five_is_first_order() {
        let data = reference_row(5).unwrap().tuple.squared_series(DEFAULT_TERM_BUDGET).unwrap();
        let rep = find_annihilating_operator(data.coeffs(), AnnihilatorKind::Ode, 3, DEFAULT_MAX_DEGREE).unwrap();
        assert!(rep.found);
        assert_eq!(rep.order, 1);
    }

    #[test]
    fn geometric_series_has_trivial_ode() {
        // 1/(1-x): (θ) - x(θ+1)
        let data = vec![int(1); 30];
        let rep = find_annihilating_operator(&data, AnnihilatorKind::Ode, 2, 3).unwrap();
        assert_eq!((rep.order, rep.degree), (1, Some(1)));
    }
}
