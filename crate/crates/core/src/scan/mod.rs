//! Integrality scan over squared Gauss pullbacks `2F1(a,b;c;φ(λx))^2`.
//!
//! A scan tuple is `(a, b, c, φ, λ)` with `φ(0) = 0`. Each tuple yields the
//! exact coefficients of the squared pullback through a chosen depth, and the
//! row is integral when every one of them has denominator 1.

pub mod annihilator;
pub mod closed_forms;
pub mod export;
pub mod integrality;
pub mod nonexist;
pub mod oeis;

use std::fmt;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Deserialize;
use thiserror::Error;

use crate::exact::{parse_rational, ExactError, Polynomial, Rational, RationalFunction};
use crate::series::{compose_rational, hypergeometric_series, HypParams, SeriesError, TruncatedSeries};

pub const DEFAULT_CHECK_DEPTH: usize = 19;
/// Table rows print `a_0..a_7`.
pub const MIN_CHECK_DEPTH: usize = 7;

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("check depth {0} is below the minimum {MIN_CHECK_DEPTH}")]
    DepthTooSmall(usize),
    #[error("map {0} must be regular at 0 and vanish there")]
    MapNotVanishing(String),
    #[error("config: {0}")]
    Config(String),
    #[error("insufficient data: need {needed} terms, have {have}")]
    InsufficientData { needed: usize, have: usize },
    #[error("scale factor must be nonzero")]
    ZeroScale,
    #[error("unknown table row #{0}")]
    UnknownRow(u32),
    #[error("row #{0} has a non-integral term {1}")]
    NonIntegral(u32, String),
    #[error("export: {0}")]
    Export(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One point of the scan grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanTuple {
    pub params: [Rational; 3],
    pub map: RationalFunction,
    pub lambda: Rational,
}

impl ScanTuple {
    pub fn new(params: [Rational; 3], map: RationalFunction, lambda: Rational) -> Result<Self, ScanError> {
        if map.den().coeff(0).is_zero() || !map.num().coeff(0).is_zero() {
            return Err(ScanError::MapNotVanishing(map.to_text()));
        }
        Ok(ScanTuple { params, map, lambda })
    }

    pub fn hyp_params(&self) -> Result<HypParams, SeriesError> {
        let [a, b, c] = self.params.clone();
        HypParams::gauss(a, b, c)
    }

    /// `2F1(a,b;c;φ(λx))` through `x^order`.
    pub fn pullback_series(&self, order: usize) -> Result<TruncatedSeries, ScanError> {
        let f = hypergeometric_series(&self.hyp_params()?, order);
        Ok(compose_rational(&f, &self.map, &self.lambda, order)?)
    }

    /// The squared pullback through `x^order`.
    pub fn squared_series(&self, order: usize) -> Result<TruncatedSeries, ScanError> {
        let s = self.pullback_series(order)?;
        Ok(&s * &s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanConfig {
    pub param_grid: Vec<[Rational; 3]>,
    pub map_grid: Vec<RationalFunction>,
    pub lambda_grid: Vec<Rational>,
    /// Explicit tuples scanned ahead of the grid product.
    pub tuples: Vec<ScanTuple>,
    pub check_depth: usize,
    pub output_path: Option<PathBuf>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            param_grid: Vec::new(),
            map_grid: Vec::new(),
            lambda_grid: Vec::new(),
            tuples: Vec::new(),
            check_depth: DEFAULT_CHECK_DEPTH,
            output_path: None,
        }
    }
}

/// On-disk shape of a scan configuration. Rationals are `"p/q"` texts and
/// maps are `"[num coeffs]/[den coeffs]"`, lowest degree first.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    params: Vec<[String; 3]>,
    #[serde(default)]
    maps: Vec<String>,
    #[serde(default)]
    lambdas: Vec<String>,
    #[serde(default)]
    tuples: Vec<TupleFile>,
    check_depth: Option<usize>,
    output: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TupleFile {
    params: [String; 3],
    map: String,
    lambda: String,
}

fn parse_q(text: &str) -> Result<Rational, ScanError> {
    parse_rational(text).map_err(|e| ScanError::Config(format!("{text:?}: {e}")))
}

fn parse_triple(t: &[String; 3]) -> Result<[Rational; 3], ScanError> {
    Ok([parse_q(&t[0])?, parse_q(&t[1])?, parse_q(&t[2])?])
}

fn parse_map(text: &str) -> Result<RationalFunction, ScanError> {
    let f = RationalFunction::parse_text(text).map_err(|e| ScanError::Config(format!("{text:?}: {e}")))?;
    if f.den().coeff(0).is_zero() || !f.num().coeff(0).is_zero() {
        return Err(ScanError::MapNotVanishing(text.to_string()));
    }
    Ok(f)
}

impl ScanConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ScanError> {
        let raw: ConfigFile = toml::from_str(text).map_err(|e| ScanError::Config(e.to_string()))?;
        let tuples = raw
            .tuples
            .iter()
            .map(|t| ScanTuple::new(parse_triple(&t.params)?, parse_map(&t.map)?, parse_q(&t.lambda)?))
            .collect::<Result<Vec<_>, _>>()?;
        let cfg = ScanConfig {
            param_grid: raw.params.iter().map(parse_triple).collect::<Result<_, _>>()?,
            map_grid: raw.maps.iter().map(|m| parse_map(m)).collect::<Result<_, _>>()?,
            lambda_grid: raw.lambdas.iter().map(|l| parse_q(l)).collect::<Result<_, _>>()?,
            tuples,
            check_depth: raw.check_depth.unwrap_or(DEFAULT_CHECK_DEPTH),
            output_path: raw.output,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self, ScanError> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<(), ScanError> {
        if self.check_depth < MIN_CHECK_DEPTH {
            return Err(ScanError::DepthTooSmall(self.check_depth));
        }
        Ok(())
    }

    /// Explicit tuples, then the grid product with λ varying fastest.
    pub fn all_tuples(&self) -> Vec<ScanTuple> {
        let mut out = self.tuples.clone();
        for p in &self.param_grid {
            for m in &self.map_grid {
                for l in &self.lambda_grid {
                    out.push(ScanTuple { params: p.clone(), map: m.clone(), lambda: l.clone() });
                }
            }
        }
        out
    }

    /// The eleven tuples of the reference table, in table order.
    pub fn reference_table() -> Self {
        ScanConfig { tuples: reference_table().into_iter().map(|r| r.tuple).collect(), ..Default::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OeisStatus {
    Found(String),
    NotFound,
    Skipped,
    Offline,
}

impl fmt::Display for OeisStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OeisStatus::Found(id) => f.write_str(id),
            OeisStatus::NotFound => f.write_str("not found"),
            OeisStatus::Skipped => f.write_str("skipped"),
            OeisStatus::Offline => f.write_str("offline"),
        }
    }
}

impl OeisStatus {
    pub fn parse(text: &str) -> Self {
        match text {
            "not found" => OeisStatus::NotFound,
            "skipped" => OeisStatus::Skipped,
            "offline" => OeisStatus::Offline,
            id => OeisStatus::Found(id.to_string()),
        }
    }
}

/// A scanned tuple. Terms stay rational so that non-integral rows keep their
/// exact values; `error` is set (and `terms` empty) when the series failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRow {
    pub label: usize,
    pub tuple: ScanTuple,
    pub terms: Vec<Rational>,
    pub integral: bool,
    pub oeis: OeisStatus,
    pub error: Option<String>,
}

impl ScanRow {
    /// Terms as integers, when the row is integral.
    pub fn integer_terms(&self) -> Option<Vec<BigInt>> {
        self.integral.then(|| self.terms.iter().map(|t| t.to_integer()).collect())
    }
}

/// Scans one tuple; failures are recorded in the row.
pub fn scan_tuple(label: usize, tuple: &ScanTuple, depth: usize) -> ScanRow {
    match tuple.squared_series(depth) {
        Ok(s) => {
            let terms = s.coeffs().to_vec();
            let integral = terms.iter().all(|t| t.denom().is_one());
            ScanRow { label, tuple: tuple.clone(), terms, integral, oeis: OeisStatus::Skipped, error: None }
        }
        Err(e) => ScanRow {
            label,
            tuple: tuple.clone(),
            terms: Vec::new(),
            integral: false,
            oeis: OeisStatus::Skipped,
            error: Some(e.to_string()),
        },
    }
}

/// Runs the scan in parallel, handing rows to `sink` in label order as each
/// batch completes. Labels are 1-based tuple indices.
pub fn scan_streaming<E>(config: &ScanConfig, mut sink: impl FnMut(ScanRow) -> Result<(), E>) -> Result<(), E> {
    let tuples = config.all_tuples();
    let batch = (rayon::current_num_threads() * 4).max(1);
    for (b, chunk) in tuples.chunks(batch).enumerate() {
        let rows: Vec<ScanRow> = chunk
            .par_iter()
            .enumerate()
            .map(|(i, t)| scan_tuple(b * batch + i + 1, t, config.check_depth))
            .collect();
        for row in rows {
            sink(row)?;
        }
    }
    Ok(())
}

pub fn scan(config: &ScanConfig) -> Result<Vec<ScanRow>, ScanError> {
    config.validate()?;
    let mut rows = Vec::new();
    scan_streaming(config, |r| {
        rows.push(r);
        Ok::<_, ScanError>(())
    })?;
    Ok(rows)
}

/// A row of the reference table with its printed data.
#[derive(Clone, Debug)]
pub struct ReferenceRow {
    pub label: u32,
    pub tuple: ScanTuple,
    pub first_terms: Vec<BigInt>,
    /// Printed residue of the order-2 nonexistence determinant mod 1000003.
    pub residue: u64,
    /// Upper bound on the minimal annihilating ODE order.
    pub order_bound: usize,
}

fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
    RationalFunction::new(Polynomial::from_ints(num), Polynomial::from_ints(den)).expect("nonzero denominator")
}

/// `4x/(1-x)^2`.
pub fn map_quadratic() -> RationalFunction {
    rf(&[0, 4], &[1, -2, 1])
}

/// `27x/(1-4x)^3`.
pub fn map_cubic() -> RationalFunction {
    rf(&[0, 27], &[1, -12, 48, -64])
}

/// `4x(1-x)`.
pub fn map_polynomial() -> RationalFunction {
    rf(&[0, 4, -4], &[1])
}

pub fn reference_table() -> Vec<ReferenceRow> {
    let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
    #[rustfmt::skip]
    let data: [(u32, [(i64, i64); 3], u8, i64, [i64; 8], u64, usize); 11] = [
        (2, [(1, 2), (1, 2), (2, 1)], 0, 4, [1, 4, 60, 888, 13960, 231904, 4025904, 72372528], 881437, 3),
        (3, [(1, 6), (2, 3), (3, 2)], 1, 1, [1, 4, 94, 2196, 56061, 1535040, 44202600, 1321014672], 261488, 3),
        (4, [(1, 3), (1, 3), (1, 1)], 1, 1, [1, 6, 153, 3912, 108042, 3161196, 96340410, 3024934080], 271237, 3),
        (5, [(1, 6), (1, 2), (1, 2)], 1, 1, [1, 9, 270, 8154, 259209, 8529921, 287329140, 9841383288], 594271, 1),
        (9, [(1, 4), (3, 4), (1, 2)], 0, 1, [1, 3, 17, 95, 537, 3059, 17513, 100607], 784564, 2),
        (10, [(1, 3), (2, 3), (3, 2)], 1, 1, [1, 8, 208, 5376, 148480, 4317184, 130351104, 4049600512], 945202, 3),
        (11, [(1, 4), (3, 4), (3, 2)], 1, 4, [1, 27, 2754, 279855, 30556062, 3525880590, 423488705220, 52412646653559], 14170, 2),
        (12, [(1, 3), (2, 3), (1, 1)], 1, 1, [1, 12, 360, 10776, 337656, 10931616, 362216088, 12210185424], 814591, 3),
        (13, [(1, 3), (1, 2), (1, 2)], 1, 1, [1, 18, 621, 21168, 738090, 26128764, 934657434, 33688028808], 311594, 1),
        (14, [(2, 3), (2, 3), (1, 1)], 1, 1, [1, 24, 882, 31560, 1138569, 41331312, 1507503024, 55190279616], 572039, 3),
        (15, [(1, 2), (1, 2), (1, 1)], 2, 4, [1, 8, 56, 384, 2648, 18496, 131008, 940032], 505664, 3),
    ];
    data.iter()
        .map(|&(label, p, map, lambda, terms, residue, order_bound)| {
            let map = match map {
                0 => map_quadratic(),
                1 => map_cubic(),
                _ => map_polynomial(),
            };
            let params = [q(p[0].0, p[0].1), q(p[1].0, p[1].1), q(p[2].0, p[2].1)];
            ReferenceRow {
                label,
                tuple: ScanTuple::new(params, map, q(lambda, 1)).expect("maps vanish at 0"),
                first_terms: terms.iter().map(|&t| BigInt::from(t)).collect(),
                residue,
                order_bound,
            }
        })
        .collect()
}

pub fn reference_row(label: u32) -> Result<ReferenceRow, ScanError> {
    reference_table().into_iter().find(|r| r.label == label).ok_or(ScanError::UnknownRow(label))
}
