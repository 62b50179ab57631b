//! The three printed order-3 recurrences (two for π, one for Catalan's
//! constant), their order-2 kernels, and end-to-end identification chains
//! linking each kernel to a square of a Gauss function.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{int, rat, Polynomial, Rational, RationalFunction};
use crate::fuchsian::{belyi_ramification, chaundy_operator, domb_map, domb_theta_operator};
use crate::ore::{ShiftOperator, TermMultiplier};
use crate::series::{
    compose_rational, frobenius_coefficients, gauss_square_recurrence, hypergeometric_series, HypParams,
    TruncatedSeries,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegistryError {
    #[error("unknown recurrence {0:?}; expected pi1, pi2 or catalan")]
    Unknown(String),
    #[error("{0} has no explicit printed recurrence available; it is out of scope")]
    Absent(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelName {
    Pi1,
    Pi2,
    Catalan,
}

impl KernelName {
    pub const ALL: [KernelName; 3] = [KernelName::Pi1, KernelName::Pi2, KernelName::Catalan];

    pub fn as_str(self) -> &'static str {
        match self {
            KernelName::Pi1 => "pi1",
            KernelName::Pi2 => "pi2",
            KernelName::Catalan => "catalan",
        }
    }

    pub fn parse(name: &str) -> Result<Self, RegistryError> {
        match name.trim().to_ascii_lowercase().as_str() {
            "pi1" => Ok(KernelName::Pi1),
            "pi2" => Ok(KernelName::Pi2),
            "catalan" => Ok(KernelName::Catalan),
            // A fourth order-3 π form is known to exist but was never printed.
            "pi4" => Err(RegistryError::Absent("pi4".into())),
            other => Err(RegistryError::Unknown(other.into())),
        }
    }
}

impl fmt::Display for KernelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A printed order-3 recurrence `Σ A_j(n) f(n+j) = 0` with its kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrintedRecurrence {
    pub name: KernelName,
    pub operator: ShiftOperator,
    pub scale_constant: Rational,
    pub kernel: ShiftOperator,
    /// First index from which the kernel can be solved forward.
    pub valid_start_index: i64,
    /// Kernel terms at `valid_start_index` and the next index.
    pub initial_terms: Vec<Rational>,
    /// How the kernel sequence rescales to a classical one.
    pub rescaling: &'static str,
}

impl PrintedRecurrence {
    /// Kernel terms from `valid_start_index` through `last`.
    pub fn kernel_terms(&self, last: i64) -> Vec<Rational> {
        self.kernel
            .solve_forward_from(self.valid_start_index, &self.initial_terms, last)
            .expect("kernel leading coefficient is nonzero past the start index")
    }
}

// Coefficients of A_0..A_3 in ascending powers of n, exactly as displayed.
const PI1_RAW: [&[&str]; 4] = [
    &["-4", "-8", "-6", "-2", "-1/4"],
    &["81/4", "173/4", "65/2", "21/2", "5/4"],
    &["-137/4", "-297/4", "-111/2", "-35/2", "-2"],
    &["18", "39", "29", "9", "1"],
];

const PI2_RAW: [&[&str]; 4] = [
    &["-35/9", "-26/3", "-23/3", "-121/36", "-35/48", "-1/16"],
    &["-365/9", "-181/2", "-1879/24", "-1589/48", "-55/8", "-9/16"],
    &["-356/9", "-503/6", "-1633/24", "-1279/48", "-81/16", "-3/8"],
    &["84", "183", "154", "568/9", "38/3", "1"],
];

const CATALAN_RAW: [&[&str]; 4] = [
    &["-3/2", "-5/4", "-1/4"],
    &["21/2", "29/4", "5/4"],
    &["-85/4", "-13", "-2"],
    &["49/4", "7", "1"],
];

fn raw_operator(raw: &[&[&str]; 4]) -> ShiftOperator {
    let coeffs = raw.iter().map(|c| Polynomial::from_texts(c).expect("static data parses")).collect();
    ShiftOperator::new(coeffs).expect("nonzero")
}

fn p(c: &[i64]) -> Polynomial {
    Polynomial::from_ints(c)
}

fn prod(factors: &[&[i64]]) -> Polynomial {
    factors.iter().fold(Polynomial::one(), |acc, f| &acc * &p(f))
}

/// The printed recurrence as a raw display transcription.
pub fn raw_display(name: KernelName) -> ShiftOperator {
    match name {
        KernelName::Pi1 => raw_operator(&PI1_RAW),
        KernelName::Pi2 => raw_operator(&PI2_RAW),
        KernelName::Catalan => raw_operator(&CATALAN_RAW),
    }
}

/// The same recurrence rebuilt from the factored `A_j` forms, as a second
/// independent transcription.
pub fn factored_display(name: KernelName) -> ShiftOperator {
    let coeffs = match name {
        KernelName::Pi1 => vec![
            p(&[2, 1]).pow(4).scale(&rat(-1, 4)),
            p(&[81, 173, 130, 42, 5]).scale(&rat(1, 4)),
            prod(&[&[1, 1], &[137, 160, 62, 8]]).scale(&rat(-1, 4)),
            prod(&[&[1, 1], &[2, 1], &[3, 1], &[3, 1]]),
        ],
        KernelName::Pi2 => vec![
            prod(&[&[2, 1], &[2, 1], &[2, 1], &[7, 3], &[10, 3]]).scale(&rat(-1, 144)),
            prod(&[&[10, 3], &[584, 1128, 789, 240, 27]]).scale(&rat(-1, 144)),
            prod(&[&[4, 3], &[8, 3], &[178, 177, 57, 6]]).scale(&rat(-1, 144)),
            prod(&[&[3, 1], &[3, 1], &[3, 1], &[4, 3], &[7, 3]]).scale(&rat(1, 9)),
        ],
        KernelName::Catalan => vec![
            prod(&[&[2, 1], &[3, 1]]).scale(&rat(-1, 4)),
            prod(&[&[3, 1], &[14, 5]]).scale(&rat(1, 4)),
            p(&[85, 52, 8]).scale(&rat(-1, 4)),
            p(&[7, 2]).pow(2).scale(&rat(1, 4)),
        ],
    };
    ShiftOperator::new(coeffs).expect("nonzero")
}

/// The order-2 kernel in factored form.
pub fn kernel_operator(name: KernelName) -> ShiftOperator {
    let coeffs = match name {
        KernelName::Pi1 => vec![
            p(&[1, 1]).pow(4),
            prod(&[&[0, 1], &[3, 2], &[5, 6, 2]]).scale(&int(-1)),
            prod(&[&[0, 1], &[1, 1], &[2, 1], &[2, 1]]).scale(&int(4)),
        ],
        KernelName::Pi2 => vec![
            prod(&[&[1, 1], &[1, 1], &[1, 1], &[4, 3], &[7, 3]]),
            prod(&[&[3, 2], &[1, 3], &[7, 3], &[12, 15, 5]]),
            prod(&[&[2, 1], &[2, 1], &[2, 1], &[1, 3], &[4, 3]]).scale(&int(16)),
        ],
        KernelName::Catalan => vec![
            prod(&[&[1, 1], &[2, 1]]),
            p(&[2, 1]).pow(2).scale(&int(-4)),
            p(&[5, 2]).pow(2),
        ],
    };
    ShiftOperator::new(coeffs).expect("nonzero")
}

pub fn registry_get(name: KernelName) -> PrintedRecurrence {
    let (scale_constant, valid_start_index, initial_terms, rescaling) = match name {
        // c_n = n A_n / 32^n with A_1 = 8, A_2 = 88; the leading coefficient
        // vanishes at n = 0.
        KernelName::Pi1 => (rat(1, 4), 1, vec![rat(1, 4), rat(11, 64)], "c_n = n*A_n/32^n"),
        // c_n = (3n+1) D_n / (-32)^n with D_0 = 1, D_1 = 4.
        KernelName::Pi2 => (rat(1, 144), 0, vec![int(1), rat(-1, 2)], "u_n = (-32)^n*c_n/(3n+1)"),
        KernelName::Catalan => (rat(1, 4), 0, vec![rat(1, 2), rat(2, 9)], "c_n = kappa*(n+1)!/(2n+1)!!*g_n"),
    };
    PrintedRecurrence {
        name,
        operator: raw_display(name),
        scale_constant,
        kernel: kernel_operator(name),
        valid_start_index,
        initial_terms,
        rescaling,
    }
}

pub fn registry_get_by_name(name: &str) -> Result<PrintedRecurrence, RegistryError> {
    Ok(registry_get(KernelName::parse(name)?))
}

/// The rescaling `t_n` with (classical sequence) = `t_n` · (kernel sequence),
/// as a term multiplier starting at the kernel's start index.
pub fn rescaling_multiplier(name: KernelName) -> TermMultiplier {
    let rf = |n: &[i64], d: &[i64]| RationalFunction::new(p(n), p(d)).expect("nonzero");
    let (ratio, start, value) = match name {
        // A_n = 32^n c_n / n
        KernelName::Pi1 => (rf(&[0, 32], &[1, 1]), 1, int(32)),
        // u_n = (-32)^n c_n / (3n+1)
        KernelName::Pi2 => (rf(&[-32, -96], &[4, 3]), 0, int(1)),
        // g_n = c_n (2n+1)!! / (κ (n+1)!) with κ = 1/2
        KernelName::Catalan => (rf(&[3, 2], &[2, 1]), 0, int(2)),
    };
    TermMultiplier::new(ratio, start, value).expect("no zeros or poles past the start")
}

// ---------------------------------------------------------------------------
// Identification reports

/// One verified claim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub claim: &'static str,
    pub description: String,
    pub passed: bool,
    /// Largest index or series order checked; 0 for symbolic identities.
    pub max_order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentificationReport {
    pub kernel: KernelName,
    pub chain: Vec<ChainStep>,
    pub overall: bool,
}

impl IdentificationReport {
    fn new(kernel: KernelName, chain: Vec<ChainStep>) -> Self {
        let overall = chain.iter().all(|s| s.passed);
        IdentificationReport { kernel, chain, overall }
    }

    pub fn failed_claims(&self) -> Vec<&'static str> {
        self.chain.iter().filter(|s| !s.passed).map(|s| s.claim).collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("identification of {}\n", self.kernel);
        for (i, s) in self.chain.iter().enumerate() {
            let status = if s.passed { "PASS" } else { "FAIL" };
            let order = if s.max_order > 0 { format!(" (checked to {})", s.max_order) } else { String::new() };
            out.push_str(&format!("  {}. [{status}] {}: {}{order}\n", i + 1, s.claim, s.description));
        }
        out.push_str(&format!("overall: {}\n", if self.overall { "PASS" } else { "FAIL" }));
        out
    }
}

fn step(claim: &'static str, description: impl Into<String>, passed: bool, max_order: usize) -> ChainStep {
    ChainStep { claim, description: description.into(), passed, max_order }
}

fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `Σ_k C(2k,k)² C(2n-2k,n-k)²`.
pub fn a036917_convolution(n: u64) -> BigInt {
    (0..=n)
        .map(|k| {
            let x = binomial(2 * k, k) * binomial(2 * (n - k), n - k);
            &x * &x
        })
        .sum()
}

/// `(m+2)³ A_{m+2} - 8(2m+3)(2m²+6m+5) A_{m+1} + 256(m+1)³ A_m`.
pub fn a036917_operator() -> ShiftOperator {
    ShiftOperator::new(vec![
        p(&[1, 1]).pow(3).scale(&int(256)),
        prod(&[&[3, 2], &[5, 6, 2]]).scale(&int(-8)),
        p(&[2, 1]).pow(3),
    ])
    .expect("nonzero")
}

/// `(m+2)³ u_{m+2} - 2(2m+3)(5m²+15m+12) u_{m+1} + 64(m+1)³ u_m`.
pub fn domb_operator() -> ShiftOperator {
    ShiftOperator::new(vec![
        p(&[1, 1]).pow(3).scale(&int(64)),
        prod(&[&[3, 2], &[12, 15, 5]]).scale(&int(-2)),
        p(&[2, 1]).pow(3),
    ])
    .expect("nonzero")
}

/// `(m+2)(m+3)(2m+5) g_{m+2} - 4(m+2)³ g_{m+1} + (m+1)(m+2)(2m+3) g_m`.
pub fn catalan_gauss_operator() -> ShiftOperator {
    ShiftOperator::new(vec![
        prod(&[&[1, 1], &[2, 1], &[3, 2]]),
        p(&[2, 1]).pow(3).scale(&int(-4)),
        prod(&[&[2, 1], &[3, 1], &[5, 2]]),
    ])
    .expect("nonzero")
}

fn summation_step(rec: &PrintedRecurrence) -> ChainStep {
    let lifted = rec.kernel.summation_lift(&rec.scale_constant);
    let ok = lifted.as_ref().is_ok_and(|l| *l == rec.operator);
    step(
        "summation-lift",
        format!("{} · σ(K·(S-1)) reproduces the printed {} recurrence", rec.scale_constant, rec.name),
        ok,
        0,
    )
}

/// Inputs of the first-π chain that a negative control may alter.
#[derive(Clone, Debug)]
pub struct FirstPiInputs {
    /// Ratio `t_{n+1}/t_n` of the multiplier with `c_n = t_n A_n`.
    pub multiplier_ratio: RationalFunction,
    pub order: usize,
}

impl Default for FirstPiInputs {
    fn default() -> Self {
        FirstPiInputs {
            multiplier_ratio: RationalFunction::new(p(&[1, 1]), p(&[0, 32])).expect("nonzero"),
            order: 50,
        }
    }
}

pub fn identify_first_pi() -> IdentificationReport {
    identify_first_pi_with(&FirstPiInputs::default())
}

pub fn identify_first_pi_with(inputs: &FirstPiInputs) -> IdentificationReport {
    let rec = registry_get(KernelName::Pi1);
    let n = inputs.order;
    let mut chain = Vec::new();

    // 1. 16^n · [z^n] of the Chaundy Frobenius solution at (1/2, 1/2; 1)
    let half = rat(1, 2);
    let g = frobenius_coefficients(&chaundy_operator(&half, &half, &int(1)), &[Rational::one()], n);
    let a_seq: Vec<Rational> = match &g {
        Ok(g) => g.coeffs().iter().enumerate().map(|(k, c)| c * int(16).pow(k as i32)).collect(),
        Err(_) => Vec::new(),
    };
    let matches_oracle = a_seq.len() == n + 1
        && a_seq.iter().enumerate().all(|(k, a)| *a == Rational::from_integer(a036917_convolution(k as u64)));
    let satisfies_rec = a_seq.len() == n + 1 && a036917_operator().annihilates(0, &a_seq);
    chain.push(step(
        "a036917-square",
        "16^n-scaled coefficients of the square solution of the Chaundy operator at (1/2,1/2;1) equal the \
         convolution Σ C(2k,k)²C(2n-2k,n-k)² and satisfy the A036917 recurrence",
        matches_oracle && satisfies_rec,
        n,
    ));

    // 2. 3F2(1/2,1/2,1/2;1,1; 64x(1-16x)) has the same coefficients
    let order = 40.min(n);
    let clausen = HypParams::new(vec![half.clone(), half.clone(), half.clone()], vec![int(1), int(1)])
        .ok()
        .map(|hp| hypergeometric_series(&hp, order))
        .and_then(|s| compose_rational(&s, &RationalFunction::from_poly(p(&[0, 64, -1024])), &int(1), order).ok());
    let clausen_ok = clausen.is_some_and(|s| a_seq.len() > order && s.coeffs()[..=order] == a_seq[..=order]);
    chain.push(step(
        "a036917-clausen-pullback",
        "3F2(1/2,1/2,1/2;1,1;64x(1-16x)) reproduces the same generating function",
        clausen_ok,
        order,
    ));

    // 3. conjugation of the A036917 recurrence gives the kernel
    let conj = TermMultiplier::new(inputs.multiplier_ratio.clone(), 1, int(1))
        .ok()
        .and_then(|m| a036917_operator().conjugate_by_multiplier(&m).ok());
    let conj_ok = conj.is_some_and(|c| c.equivalent_up_to_unit(&rec.kernel));
    chain.push(step(
        "kernel-conjugation",
        format!("c_n = t_n A_n with t_(n+1)/t_n = {} turns the A036917 recurrence into the pi1 kernel", inputs.multiplier_ratio),
        conj_ok,
        0,
    ));

    // 4. inflation to a polynomial continued fraction
    let inflation = RationalFunction::from_poly(prod(&[&[0, 4], &[1, 1], &[1, 1]]));
    let pcf = TermMultiplier::new(inflation, 1, int(1))
        .ok()
        .and_then(|m| rec.kernel.conjugate_by_multiplier(&m).ok())
        .and_then(|op| op.to_pcf().ok());
    let pcf_ok = pcf.is_some_and(|pcf| {
        pcf.is_monic_form()
            && pcf.a == prod(&[&[1, 2], &[1, 2, 2]])
            && pcf.b == Polynomial::monomial(int(-4), 6)
    });
    chain.push(step(
        "inflated-pcf",
        "u_(n+1)/u_n = 4n(n+1)² · c_(n+1)/c_n gives PCF((2n+1)(2n²+2n+1), -4n^6)",
        pcf_ok,
        0,
    ));

    chain.push(summation_step(&rec));
    IdentificationReport::new(KernelName::Pi1, chain)
}

/// Inputs of the Domb chain that a negative control may alter.
#[derive(Clone, Debug)]
pub struct DombInputs {
    /// Twist `ρ` applied to `2F1(1/6,1/3;1;φ(x))²`.
    pub twist: RationalFunction,
    pub order: usize,
}

impl Default for DombInputs {
    fn default() -> Self {
        DombInputs { twist: RationalFunction::new(p(&[1]), p(&[1, -4])).expect("nonzero"), order: 40 }
    }
}

pub const DOMB_PREFIX: [i64; 8] = [1, 4, 28, 256, 2716, 31504, 387136, 4951552];

pub fn identify_domb() -> IdentificationReport {
    identify_domb_with(&DombInputs::default())
}

pub fn identify_domb_with(inputs: &DombInputs) -> IdentificationReport {
    let rec = registry_get(KernelName::Pi2);
    let n = inputs.order;
    let mut chain = Vec::new();

    // 1. rescaling the kernel gives the Domb recurrence
    let ratio = RationalFunction::new(p(&[-32, -96]), p(&[4, 3])).expect("nonzero");
    let shift = TermMultiplier::new(ratio, 0, int(1))
        .ok()
        .and_then(|m| rec.kernel.conjugate_by_multiplier(&m).ok())
        .and_then(|op| op.equivalent_up_to_shift(&domb_operator(), 2));
    chain.push(step(
        "domb-rescaling",
        "u_(n+1)/u_n = -32(3n+1)/(3n+4) · c_(n+1)/c_n turns the pi2 kernel into the Domb recurrence",
        shift.is_some(),
        0,
    ));

    // 2. the Domb recurrence produces the Domb numbers
    let domb = domb_operator().solve_forward(&[int(1), int(4)], n).unwrap_or_default();
    let prefix_ok = domb.len() > 7 && domb[..8].iter().zip(DOMB_PREFIX).all(|(d, e)| *d == int(e));
    chain.push(step("domb-numbers", "D_0..D_7 = 1, 4, 28, 256, 2716, 31504, 387136, 4951552", prefix_ok, 7));

    // 3. twisted Belyi pullback of the Gauss square
    let pulled = domb_pullback_series(&inputs.twist, n);
    let pull_ok = pulled.is_some_and(|s| domb.len() == n + 1 && s.coeffs()[..=n] == domb[..]);
    chain.push(step(
        "domb-pullback",
        format!("({}) · 2F1(1/6,1/3;1;108x²/(1-4x)³)² has the Domb numbers as coefficients", inputs.twist),
        pull_ok,
        n,
    ));

    // 4. the third-order Domb operator annihilates Σ D_n x^n
    let gen = TruncatedSeries::from_coeffs(domb.clone());
    let ode_ok = domb.len() == n + 1 && domb_theta_operator().apply(&gen).is_zero();
    chain.push(step(
        "domb-theta-operator",
        "θ³ - 2x(2θ+1)(5θ²+5θ+2) + 64x²(θ+1)³ annihilates Σ D_n x^n",
        ode_ok,
        n,
    ));

    // 5. the map is Belyi with the expected passport
    let passport = belyi_ramification(&domb_map()).filter(|r| r.is_belyi).map(|r| r.passport());
    chain.push(step(
        "belyi-passport",
        format!("108x²/(1-4x)³ is a degree-3 Belyi map with passport {}", passport.clone().unwrap_or_default()),
        passport.as_deref() == Some("[2+1, 2+1, 3]"),
        0,
    ));

    chain.push(summation_step(&rec));
    IdentificationReport::new(KernelName::Pi2, chain)
}

/// `ρ(x) · 2F1(1/6,1/3;1;φ(x))²` to order `n`, if the twist is regular at 0.
pub fn domb_pullback_series(twist: &RationalFunction, n: usize) -> Option<TruncatedSeries> {
    let f = hypergeometric_series(&HypParams::gauss(rat(1, 6), rat(1, 3), int(1)).ok()?, n);
    let pulled = compose_rational(&f, &domb_map(), &int(1), n).ok()?;
    let rho = TruncatedSeries::from_rational_function(twist, n).ok()?;
    Some(&rho * &(&pulled * &pulled))
}

/// Inputs of the Catalan chain; `kappa` is the free unit of the twist.
#[derive(Clone, Debug)]
pub struct CatalanInputs {
    pub kappa: Rational,
    pub order: usize,
}

impl Default for CatalanInputs {
    fn default() -> Self {
        CatalanInputs { kappa: rat(1, 2), order: 50 }
    }
}

pub fn identify_catalan() -> IdentificationReport {
    identify_catalan_with(&CatalanInputs::default())
}

pub fn identify_catalan_with(inputs: &CatalanInputs) -> IdentificationReport {
    let rec = registry_get(KernelName::Catalan);
    let n = inputs.order;
    let (a, b, c) = (rat(1, 2), int(1), rat(3, 2));
    let mut chain = Vec::new();

    // 1. Gauss-square recurrence at (1/2, 1; 3/2)
    let gauss = gauss_square_recurrence(&a, &b, &c);
    chain.push(step(
        "catalan-gauss-recurrence",
        "the square recurrence at (1/2,1;3/2) is n(n+1)(2n+1)g_n - 4n³g_(n-1) + n(n-1)(2n-1)g_(n-2) = 0",
        gauss.is_ok_and(|g| g.equivalent_up_to_unit(&catalan_gauss_operator())),
        0,
    ));

    // 2. c_n = t_n g_n with t_(n+1)/t_n = (n+2)/(2n+3) satisfies the kernel
    let hp = HypParams::gauss(a, b, c).expect("valid");
    let f = hypergeometric_series(&hp, n);
    let g = &f * &f;
    let twist = TermMultiplier::new(RationalFunction::new(p(&[2, 1]), p(&[3, 2])).expect("nonzero"), 0, inputs.kappa.clone());
    let c_seq = twist.map(|t| t.apply(g.coeffs())).unwrap_or_default();
    chain.push(step(
        "catalan-twist",
        "c_n = κ (n+1)!/(2n+1)!! g_n satisfies (2n+5)²c_(n+2) - 4(n+2)²c_(n+1) + (n+1)(n+2)c_n = 0",
        c_seq.len() == n + 1 && rec.kernel.annihilates(0, &c_seq),
        n,
    ));

    // 3. normalization c_0 = 1/2, c_1 = 2/9
    let norm_ok = c_seq.len() > 1 && c_seq[..2] == rec.initial_terms[..];
    chain.push(step(
        "catalan-normalization",
        format!("κ = {} gives the printed summands c_0 = 1/2, c_1 = 2/9", inputs.kappa),
        norm_ok,
        1,
    ));

    chain.push(summation_step(&rec));
    IdentificationReport::new(KernelName::Catalan, chain)
}

pub fn identify(name: KernelName) -> IdentificationReport {
    match name {
        KernelName::Pi1 => identify_first_pi(),
        KernelName::Pi2 => identify_domb(),
        KernelName::Catalan => identify_catalan(),
    }
}
