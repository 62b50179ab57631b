//! `sym2k`: command-line front end for the sym2kernels library.
//!
//! Exit codes: 0 when the command succeeds and every check it runs passes,
//! 1 when a check fails, 2 on usage or input errors.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use sym2kernels::audit::{self, CRITERIA};
use sym2kernels::exact::rational::{format_rational, to_decimal};
use sym2kernels::exact::{parse_rational, Rational, RationalFunction};
use sym2kernels::fuchsian::{accessory_series, is_sym2_point, RiemannScheme};
use sym2kernels::gauge;
use sym2kernels::ore::{OperatorJson, ShiftOperator};
use sym2kernels::registry::{identify, KernelName};
use sym2kernels::scan::export::{rows_to_json, CsvRowWriter};
use sym2kernels::scan::nonexist::{
    matches_up_to_sign, order2_nonexistence_determinant_with, table_row_sequence, DEFAULT_DEGREE_BOUND,
    DEFAULT_PRIME,
};
use sym2kernels::scan::oeis::OeisClient;
use sym2kernels::scan::{scan_streaming, reference_row, ScanConfig, ScanTuple};
use sym2kernels::series::TruncatedSeries;

const MAX_CURVE_N: usize = 1000;

#[derive(Parser, Debug)]
#[command(name = "sym2k", version, about = "Exact summation kernels, gauge checks and integrality scans")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Write data here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Never contact the OEIS; unknown sequences report "offline".
    #[arg(long, global = true)]
    offline: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = audit::DEFAULT_SEED)]
    seed: u64,
    /// Series depth (last index computed).
    #[arg(long, global = true)]
    depth: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the coefficient-sum criterion and extract the order-2 kernel.
    Factor {
        /// Operator JSON: {"order": r, "coeffs": [[...], ...]}.
        #[arg(long)]
        input: PathBuf,
        /// Scale constant of the summation lift.
        #[arg(long, default_value = "1")]
        c: String,
    },
    /// Run the identification chain of a printed kernel.
    Kernels {
        /// pi1, pi2 or catalan; all three when omitted.
        #[arg(long)]
        name: Option<String>,
        #[arg(long, value_enum)]
        report: Option<ReportFormat>,
    },
    /// Expand 2F1(a,b;c;φ(λx)), optionally squared.
    Expand {
        /// a,b,c
        #[arg(long, default_value = "1/2,1/2,1")]
        params: String,
        /// φ as [num]/[den] coefficient lists.
        #[arg(long, default_value = "[0,1]/[1]")]
        map: String,
        #[arg(long, default_value = "1")]
        lambda: String,
        #[arg(long)]
        square: bool,
    },
    /// Check the symmetric-square gauge identities at one parameter triple.
    VerifyGauge {
        /// a,b,c
        #[arg(long, default_value = "1/3,2/5,9/7")]
        params: String,
        /// First shift, as three integers.
        #[arg(long, default_value = "1,0,1")]
        u: String,
        /// Second shift, as three integers.
        #[arg(long, default_value = "0,1,1")]
        v: String,
    },
    /// Frobenius coefficients of the accessory family, or classification.
    Accessory {
        /// Local exponents α,β,γ1,γ2.
        #[arg(long, default_value = "0,0,1/2,1/2")]
        scheme: String,
        /// Comma-separated accessory values.
        #[arg(long, default_value = "0,1/4,1/2,3/4,1")]
        lambda: String,
        /// Last coefficient index.
        #[arg(long, default_value_t = 20)]
        n: usize,
        /// Print λ0 and the recovered Gauss parameters instead.
        #[arg(long)]
        classify: bool,
    },
    /// Scan (a,b,c,φ,λ) tuples for integral squared pullbacks.
    Scan {
        /// TOML configuration; the reference table when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Order-2 nonexistence determinant of a table row.
    Nonexist {
        #[arg(long)]
        row: u32,
        #[arg(long, default_value_t = DEFAULT_DEGREE_BOUND)]
        degree: usize,
        #[arg(long, default_value_t = DEFAULT_PRIME)]
        prime: u64,
    },
    /// Look up an integer sequence.
    Oeis {
        /// Comma-separated terms.
        terms: String,
    },
    /// Run the acceptance criteria.
    Report {
        /// Run every criterion.
        #[arg(long, conflicts_with = "criterion")]
        all: bool,
        /// Run selected criteria (repeatable).
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=CRITERIA as i64))]
        criterion: Vec<u8>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

/// Result of a command that ran to completion.
enum Outcome {
    Pass,
    Fail,
}

impl From<bool> for Outcome {
    fn from(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    let g = &cli.global;
    match cli.command {
        Command::Factor { input, c } => factor(g, &input, &c),
        Command::Kernels { name, report } => kernels(g, name.as_deref(), report),
        Command::Expand { params, map, lambda, square } => expand(g, &params, &map, &lambda, square),
        Command::VerifyGauge { params, u, v } => verify_gauge(g, &params, &u, &v),
        Command::Accessory { scheme, lambda, n, classify } => accessory(g, &scheme, &lambda, n, classify),
        Command::Scan { config } => scan(g, config.as_deref()),
        Command::Nonexist { row, degree, prime } => nonexist(g, row, degree, prime),
        Command::Oeis { terms } => oeis(g, &terms),
        Command::Report { all, criterion } => report(g, all, &criterion),
    }
}

// ---------------------------------------------------------------------------
// helpers

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(g: &Global, text: &str) -> Result<()> {
    let mut w = open_out(g.out.as_deref())?;
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(())
}

fn emit_json(g: &Global, v: &serde_json::Value) -> Result<()> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    emit(g, &s)
}

fn rational_arg(flag: &str, text: &str) -> Result<Rational> {
    parse_rational(text.trim()).map_err(|e| anyhow!("--{flag}: {e}"))
}

fn rational_list(flag: &str, text: &str, len: Option<usize>) -> Result<Vec<Rational>> {
    let v = text.split(',').map(|t| rational_arg(flag, t)).collect::<Result<Vec<_>>>()?;
    if let Some(n) = len {
        if v.len() != n {
            bail!("--{flag}: expected {n} comma-separated values, got {}", v.len());
        }
    }
    Ok(v)
}

fn triple(flag: &str, text: &str) -> Result<(Rational, Rational, Rational)> {
    let v = rational_list(flag, text, Some(3))?;
    Ok((v[0].clone(), v[1].clone(), v[2].clone()))
}

fn shift_arg(flag: &str, text: &str) -> Result<[i64; 3]> {
    let v = text
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| anyhow!("--{flag}: {t:?}: {e}")))
        .collect::<Result<Vec<_>>>()?;
    v.try_into().map_err(|v: Vec<i64>| anyhow!("--{flag}: expected 3 integers, got {}", v.len()))
}

fn texts(op: &ShiftOperator) -> String {
    let coeffs: Vec<String> = op.coeffs().iter().map(|p| format!("({})", p.display_in("n"))).collect();
    format!("[{}]", coeffs.join(", "))
}

fn status(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

// ---------------------------------------------------------------------------
// commands

fn factor(g: &Global, input: &Path, c: &str) -> Result<Outcome> {
    let c = rational_arg("c", c)?;
    let text = std::fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let j: OperatorJson = serde_json::from_str(&text).with_context(|| format!("parsing {}", input.display()))?;
    let op = ShiftOperator::from_json(&j).map_err(|e| anyhow!("{}: {e}", input.display()))?;
    let sum = op.coefficient_sum();
    let criterion = op.coefficient_sum_is_zero();
    let kernel = if criterion { Some(op.extract_kernel(&c)?) } else { None };
    if !criterion {
        eprintln!("coefficient sum is {} (not zero); no kernel", sum.display_in("n"));
    }
    match g.format {
        Format::Json => emit_json(
            g,
            &json!({
                "operator": op.to_json(),
                "c": format_rational(&c),
                "coefficient_sum": sum.to_texts(),
                "coefficient_sum_zero": criterion,
                "kernel": kernel.as_ref().map(ShiftOperator::to_json),
            }),
        )?,
        _ => {
            let mut out = format!("operator: {}\n", texts(&op));
            out.push_str(&format!("{} coefficient sum = {}\n", status(criterion), sum.display_in("n")));
            if let Some(k) = &kernel {
                out.push_str(&format!("kernel: {}\n", texts(k)));
            }
            emit(g, &out)?;
        }
    }
    Ok(criterion.into())
}

fn kernels(g: &Global, name: Option<&str>, report: Option<ReportFormat>) -> Result<Outcome> {
    let names = match name {
        Some(n) => vec![KernelName::parse(n).map_err(|e| anyhow!("--name: {e}"))?],
        None => KernelName::ALL.to_vec(),
    };
    let reports: Vec<_> = names.into_iter().map(identify).collect();
    let ok = reports.iter().all(|r| r.overall);
    let as_json = match report {
        Some(ReportFormat::Json) => true,
        Some(ReportFormat::Text) => false,
        None => g.format == Format::Json,
    };
    if as_json {
        emit_json(g, &serde_json::to_value(&reports)?)?;
    } else {
        emit(g, &reports.iter().map(|r| r.to_text()).collect::<Vec<_>>().join("\n"))?;
    }
    Ok(ok.into())
}

fn expand(g: &Global, params: &str, map: &str, lambda: &str, square: bool) -> Result<Outcome> {
    let (a, b, c) = triple("params", params)?;
    let map = RationalFunction::parse_text(map).map_err(|e| anyhow!("--map: {e}"))?;
    let lambda = rational_arg("lambda", lambda)?;
    let depth = g.depth.unwrap_or(19);
    let t = ScanTuple::new([a, b, c], map, lambda)?;
    let s: TruncatedSeries = if square { t.squared_series(depth)? } else { t.pullback_series(depth)? };
    match g.format {
        Format::Json => emit_json(g, &json!(s.to_text_list()))?,
        Format::Csv => emit(g, &s.to_csv())?,
        Format::Text => {
            let lines: Vec<String> = s.to_text_list().into_iter().enumerate().map(|(n, t)| format!("{n}: {t}")).collect();
            emit(g, &(lines.join("\n") + "\n"))?;
        }
    }
    Ok(Outcome::Pass)
}

fn verify_gauge(g: &Global, params: &str, u: &str, v: &str) -> Result<Outcome> {
    let p = triple("params", params)?;
    let (u, v) = (shift_arg("u", u)?, shift_arg("v", v)?);
    let order = g.depth.unwrap_or(40);
    let (a, b, c) = (&p.0, &p.1, &p.2);
    let phi = gauge::build_phi(a, b, c);
    let m_theta = gauge::build_m_theta_square(a, b, c)?;
    let basis_ok = gauge::verify_basis_relation(
        &gauge::sym_basis(a, b, c, order)?,
        &phi,
        &gauge::g_basis(a, b, c, order)?,
    )?;
    let checks: Vec<(&str, bool, usize)> = vec![
        ("det-phi-equals-4", phi.det() == RationalFunction::constant(Rational::from_integer(4.into())), 0),
        ("theta-gauge-closed-form", m_theta == gauge::m_theta_square_closed_form(a, b, c), 0),
        ("basis-relation", basis_ok, order),
        ("cocycle", gauge::cocycle_holds(&p, u, v, order)?, order),
        ("square-gauge-u", gauge::square_gauge_holds(&p, u, order)?, order),
        ("square-gauge-v", gauge::square_gauge_holds(&p, v, order)?, order),
    ];
    let ok = checks.iter().all(|c| c.1);
    match g.format {
        Format::Json => emit_json(
            g,
            &json!({
                "params": [format_rational(a), format_rational(b), format_rational(c)],
                "u": u,
                "v": v,
                "phi": phi.to_json(),
                "m_theta": m_theta.to_json(),
                "checks": checks.iter().map(|(id, ok, n)| json!({"id": id, "passed": ok, "max_order": n})).collect::<Vec<_>>(),
            }),
        )?,
        _ => {
            let mut out = String::new();
            for (id, ok, n) in &checks {
                let scope = if *n > 0 { format!("series to order {n}") } else { "exact".into() };
                out.push_str(&format!("{} {id} ({scope})\n", status(*ok)));
            }
            emit(g, &out)?;
        }
    }
    Ok(ok.into())
}

fn accessory(g: &Global, scheme: &str, lambdas: &str, n: usize, classify: bool) -> Result<Outcome> {
    let e = rational_list("scheme", scheme, Some(4))?;
    let s = RiemannScheme::new(e[0].clone(), e[1].clone(), e[2].clone(), e[3].clone())
        .map_err(|err| anyhow!("--scheme: {err}"))?;
    if classify {
        let l0 = s.lambda0();
        let (a, b, c) = s.recover_gauss();
        let ok = is_sym2_point(&s, &l0);
        match g.format {
            Format::Json => emit_json(
                g,
                &json!({
                    "lambda0": format_rational(&l0),
                    "gauss": [format_rational(&a), format_rational(&b), format_rational(&c)],
                    "sym2_at_lambda0": ok,
                }),
            )?,
            _ => emit(
                g,
                &format!(
                    "lambda0: {}\ngauss: a={} b={} c={}\n{} symmetric square at lambda0\n",
                    format_rational(&l0),
                    format_rational(&a),
                    format_rational(&b),
                    format_rational(&c),
                    status(ok)
                ),
            )?,
        }
        return Ok(ok.into());
    }
    if n > MAX_CURVE_N {
        bail!("--n: at most {MAX_CURVE_N}");
    }
    let lambdas = rational_list("lambda", lambdas, None)?;
    let mut rows = Vec::new();
    for l in &lambdas {
        let series = accessory_series(&s, l, n)?;
        rows.extend(series.coeffs().iter().enumerate().map(|(k, q)| (l.clone(), k, q.clone())));
    }
    if g.format == Format::Json {
        let v: Vec<_> = rows
            .iter()
            .map(|(l, k, q)| json!({"lambda": format_rational(l), "n": k, "exact": format_rational(q), "decimal10": to_decimal(q, 10)}))
            .collect();
        emit_json(g, &json!(v))?;
    } else {
        let mut out = String::from("lambda,n,exact,decimal10\n");
        for (l, k, q) in &rows {
            out.push_str(&format!("{},{k},{},{}\n", format_rational(l), format_rational(q), to_decimal(q, 10)));
        }
        emit(g, &out)?;
    }
    Ok(Outcome::Pass)
}

fn scan(g: &Global, config: Option<&Path>) -> Result<Outcome> {
    let mut cfg = match config {
        Some(p) => ScanConfig::from_path(p).with_context(|| format!("--config {}", p.display()))?,
        None => ScanConfig::reference_table(),
    };
    if let Some(d) = g.depth {
        cfg.check_depth = d;
    }
    cfg.validate()?;
    let out = g.out.clone().or_else(|| cfg.output_path.clone());
    let client = OeisClient::from_env().with_offline(g.offline);
    if g.format == Format::Json {
        let mut rows = Vec::new();
        scan_streaming(&cfg, |mut r| {
            client.annotate(&mut r);
            rows.push(r);
            Ok::<_, anyhow::Error>(())
        })?;
        let mut w = open_out(out.as_deref())?;
        w.write_all(rows_to_json(&rows)?.as_bytes())?;
        w.flush()?;
    } else {
        let mut w = CsvRowWriter::new(open_out(out.as_deref())?, cfg.check_depth)?;
        scan_streaming(&cfg, |mut r| {
            client.annotate(&mut r);
            w.write_row(&r)
        })?;
        w.finish()?.flush()?;
    }
    Ok(Outcome::Pass)
}

fn nonexist(g: &Global, label: u32, degree: usize, prime: u64) -> Result<Outcome> {
    let row = reference_row(label)?;
    let seq = table_row_sequence(label)?;
    let residue = order2_nonexistence_determinant_with(&seq, degree, prime)?;
    let size = 3 * (degree + 1);
    let printed = (degree == DEFAULT_DEGREE_BOUND && prime == DEFAULT_PRIME).then_some(row.residue);
    let agrees = printed.map(|p| matches_up_to_sign(residue, p, prime));
    match g.format {
        Format::Json => emit_json(
            g,
            &json!({"row": label, "size": size, "prime": prime, "residue": residue, "printed": printed, "matches_up_to_sign": agrees}),
        )?,
        _ => {
            let mut out = format!("row #{label}: {size}x{size} determinant = {residue} mod {prime}\n");
            if let (Some(p), Some(ok)) = (printed, agrees) {
                out.push_str(&format!("{} printed residue {p} (up to sign)\n", status(ok)));
            }
            emit(g, &out)?;
        }
    }
    Ok((residue != 0 && agrees != Some(false)).into())
}

fn oeis(g: &Global, terms: &str) -> Result<Outcome> {
    let terms = terms
        .split(',')
        .map(|t| t.trim().parse::<num_bigint::BigInt>().map_err(|e| anyhow!("{t:?}: {e}")))
        .collect::<Result<Vec<_>>>()?;
    let st = OeisClient::from_env().with_offline(g.offline).lookup(&terms)?;
    match g.format {
        Format::Json => emit_json(g, &json!({"status": st.to_string()}))?,
        _ => emit(g, &format!("{st}\n"))?,
    }
    Ok(Outcome::Pass)
}

fn report(g: &Global, all: bool, ids: &[u8]) -> Result<Outcome> {
    let ids: Vec<u8> = if all || ids.is_empty() { (1..=CRITERIA as u8).collect() } else { ids.to_vec() };
    let mut results = Vec::new();
    for id in ids {
        let r = audit::run_one(id, g.seed).ok_or_else(|| anyhow!("--criterion: no criterion {id}"))?;
        eprintln!("{}", r.line());
        results.push(r);
    }
    let ok = results.iter().all(|r| r.passed);
    match g.format {
        Format::Json => emit_json(g, &json!({"seed": g.seed, "passed": ok, "criteria": results}))?,
        Format::Csv => {
            let mut out = String::from("id,title,passed,seconds,detail\n");
            for r in &results {
                out.push_str(&format!("{},{},{},{:.2},\"{}\"\n", r.id, r.title, r.passed, r.seconds, r.detail.replace('"', "\"\"")));
            }
            emit(g, &out)?;
        }
        Format::Text => emit(g, &audit::report_text(&results))?,
    }
    Ok(ok.into())
}
