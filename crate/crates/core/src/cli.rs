//! The `symmoments` command line.
//!
//! Exit codes: 0 on success, 1 when a verification fails or a computation
//! returns an error (its variant name leads the message on stderr), 2 on a
//! usage error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::combinat::{kostka_closed_form, tensor_power_multiplicities};
use crate::eigenform::{
    cache_file_name, delta_coefficients, load_coefficients, write_coefficients, CoefficientSeries,
};
use crate::error::{Error, Result};
use crate::moments::{
    bqf_moment_sum, fit_main_term, log_spaced_cutoffs, moment_sum, theta_unchecked,
    ThetaVariant, DEFAULT_PLACES,
};
use crate::quadform::{
    representation_counts, theta_coefficients, verify_character_decomposition, ClassGroup,
    QuadForm,
};
use crate::sympow::sym_series;
use crate::verify::{self, VerifyConfig};

/// Environment variable naming the coefficient cache directory.
pub const CACHE_DIR_ENV: &str = "SYMMOMENTS_CACHE_DIR";

const DELTA_LABEL: &str = "delta";
const DELTA_WEIGHT: u32 = 12;

#[derive(Debug, Parser)]
#[command(
    name = "symmoments",
    version,
    about = "Kostka multiplicities, symmetric-power eigenvalues of Δ, binary quadratic forms and moment sums"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Worker threads (default: all available cores). Output is identical for any value.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Coefficient cache directory [default: $SYMMOMENTS_CACHE_DIR, else the working directory].
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Evaluate exponent formulas outside the theorem's range (l >= 2, d >= 1, dl > 4).
    #[arg(long, global = true)]
    pub unchecked: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Multiplicities K(i,d,l) of Sym^i in (Sym^d)^{⊗l}.
    Kostka {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        l: u32,
        /// Print a single multiplicity instead of the whole decomposition.
        #[arg(long, allow_hyphen_values = true)]
        i: Option<i64>,
    },
    /// Exact error-term exponents θ(d,l), e.g. `--d 2 --l 3..8`.
    ThetaTable {
        /// A value or inclusive range `a..b`.
        #[arg(long)]
        d: IntRange,
        /// A value or inclusive range `a..b`.
        #[arg(long)]
        l: IntRange,
        #[arg(long, value_enum, default_value_t = Variant::Plain)]
        variant: Variant,
        /// Decimal places of the rendered value.
        #[arg(long, default_value_t = DEFAULT_PLACES)]
        places: usize,
    },
    /// Compute Δ coefficients and write them to the cache.
    Coeffs {
        /// Number of coefficients.
        #[arg(long = "N", default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Normalized eigenvalues of Sym^d Δ as CSV `n,lambda_sym_d`.
    Sympow {
        #[arg(long)]
        d: u32,
        #[arg(long = "N", default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Moment sums S(x) = Σ_{n<=x} λ_{Sym^d Δ}(n)^l with a main-term fit.
    Moments {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        l: u32,
        /// Largest cutoff (accepts `1e6`).
        #[arg(long, default_value = "1e5")]
        x: Cutoff,
        /// Smallest cutoff.
        #[arg(long, default_value = "1e3")]
        x_min: Cutoff,
        /// Number of log-spaced cutoffs.
        #[arg(long, default_value_t = 13)]
        points: usize,
        /// Sum over values of a binary quadratic form `a,b,c` instead of over n.
        #[arg(long, allow_hyphen_values = true)]
        form: Option<FormArg>,
    },
    /// Representation counts r(n,Q) or theta coefficients a_χ(n).
    Bqf {
        /// Negative discriminant; defaults to that of `--form`.
        #[arg(long, allow_hyphen_values = true)]
        disc: Option<i64>,
        /// Form `a,b,c`; defaults to the principal form of `--disc`.
        #[arg(long, allow_hyphen_values = true)]
        form: Option<FormArg>,
        #[arg(long, default_value_t = 100)]
        limit: usize,
        /// Emit a_χ(n) for the class-group character with this index.
        #[arg(long)]
        chi: Option<usize>,
        /// Check r(n,Q) against its character decomposition up to `--limit`.
        #[arg(long)]
        verify: bool,
    },
    /// Run the named invariant checks.
    Verify {
        /// `all`, a suite (combinat, eigenform, sympow, quadform, moments) or a check name.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Coefficient length for the eigenform and symmetric-power checks.
        #[arg(long = "N", default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Largest cutoff of the moment-sum checks.
        #[arg(long, default_value = "1e6")]
        moment_x: Cutoff,
        /// List the checks instead of running them.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Plain,
    BqfH1,
    BqfHgt1,
}

impl From<Variant> for ThetaVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Plain => ThetaVariant::Plain,
            Variant::BqfH1 => ThetaVariant::BqfH1,
            Variant::BqfHgt1 => ThetaVariant::BqfHgt1,
        }
    }
}

/// `a` or `a..b`, inclusive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntRange(pub RangeInclusive<u32>);

impl FromStr for IntRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("{t:?}: {e}"));
        let range = match s.split_once("..") {
            Some((a, b)) => parse(a)?..=parse(b.strip_prefix('=').unwrap_or(b))?,
            None => {
                let v = parse(s)?;
                v..=v
            }
        };
        if range.is_empty() {
            return Err(format!("empty range {s:?}"));
        }
        Ok(IntRange(range))
    }
}

/// A positive integer cutoff, also accepted in `1e6` notation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cutoff(pub usize);

impl FromStr for Cutoff {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if let Ok(v) = s.parse::<usize>() {
            return if v >= 1 { Ok(Cutoff(v)) } else { Err("must be >= 1".into()) };
        }
        let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
        if v.fract() != 0.0 || !(1.0..=1e15).contains(&v) {
            return Err(format!("{s:?} is not a positive integer"));
        }
        Ok(Cutoff(v as usize))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormArg(pub i64, pub i64, pub i64);

impl FromStr for FormArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.trim_matches(|c| c == '(' || c == ')').split(',').collect();
        let [a, b, c] = parts.as_slice() else {
            return Err(format!("{s:?} is not of the form a,b,c"));
        };
        let p = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}"));
        Ok(FormArg(p(a)?, p(b)?, p(c)?))
    }
}

impl FormArg {
    fn form(self) -> Result<QuadForm> {
        QuadForm::new(self.0, self.1, self.2)
    }
}

enum Failure {
    Usage(String),
    Compute(Error),
    /// Verification ran and found a violation; the report is already written.
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code. Output goes to stdout, diagnostics to stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr().lock();
    run_with(argv, &mut stdout, &mut stderr)
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn std::io::Write, err: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let mut diagnostics = Vec::new();
    let result = with_threads(cli.global.threads, || execute(&cli, &mut diagnostics));
    let _ = err.write_all(&diagnostics);
    match result {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            let _ = out.flush();
            0
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}\n\nFor more information, try '--help'.");
            2
        }
        Err(Failure::Compute(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
        Err(Failure::Verify(text)) => {
            let _ = out.write_all(text.as_bytes());
            1
        }
    }
}

fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        None => f(),
    }
}

fn execute(cli: &Cli, err: &mut dyn std::io::Write) -> std::result::Result<String, Failure> {
    let g = &cli.global;
    match &cli.command {
        Command::Kostka { d, l, i } => kostka(g.format, *d, *l, *i),
        Command::ThetaTable { d, l, variant, places } => {
            theta_table(g, d.0.clone(), l.0.clone(), (*variant).into(), *places)
        }
        Command::Coeffs { n } => coeffs(g, *n as usize),
        Command::Sympow { d, n } => sympow(g, *d, *n as usize, err),
        Command::Moments { d, l, x, x_min, points, form } => {
            moments(g, *d, *l, x.0, x_min.0, *points, *form, err)
        }
        Command::Bqf { disc, form, limit, chi, verify } => {
            bqf(g.format, *disc, *form, *limit, *chi, *verify)
        }
        Command::Verify { suite, n, moment_x, list } => {
            run_verify(g.format, suite, *n as usize, moment_x.0, *list, err)
        }
    }
}

/// Float rendering shared by every CSV and text output: 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

// --- kostka -----------------------------------------------------------------

#[derive(Serialize)]
struct KostkaEntry {
    i: u32,
    multiplicity: String,
}

fn kostka(format: Format, d: u32, l: u32, i: Option<i64>) -> std::result::Result<String, Failure> {
    if let Some(i) = i {
        let k = kostka_closed_form(i, d, l);
        return Ok(match format {
            Format::Text => format!("{k}\n"),
            Format::Csv => format!("i,d,l,multiplicity\n{i},{d},{l},{k}\n"),
            Format::Json => to_json(&json!({"i": i, "d": d, "l": l, "multiplicity": k.to_string()})),
        });
    }
    let mv = tensor_power_multiplicities(d, l);
    Ok(match format {
        Format::Text => format!("{mv}\n"),
        Format::Csv => {
            let mut s = String::from("i,multiplicity\n");
            for (i, k) in mv.iter() {
                let _ = writeln!(s, "{i},{k}");
            }
            s
        }
        Format::Json => {
            let entries: Vec<KostkaEntry> = mv
                .iter()
                .map(|(i, k)| KostkaEntry { i, multiplicity: k.to_string() })
                .collect();
            to_json(&json!({"d": d, "l": l, "dimension": mv.dimension().to_string(), "multiplicities": entries}))
        }
    })
}

// --- theta-table ------------------------------------------------------------

#[derive(Serialize)]
struct ThetaRow {
    d: u32,
    l: u32,
    variant: &'static str,
    theta: String,
    exact: String,
    k0: String,
    k1: String,
    k2: String,
    unchecked: bool,
}

fn theta_table(
    g: &GlobalOpts,
    ds: RangeInclusive<u32>,
    ls: RangeInclusive<u32>,
    variant: ThetaVariant,
    places: usize,
) -> std::result::Result<String, Failure> {
    let mut rows = Vec::new();
    for d in ds {
        for l in ls.clone() {
            let report = if g.unchecked {
                theta_unchecked(d, l, variant)?
            } else {
                match variant {
                    ThetaVariant::Plain => crate::moments::theta(d, l)?,
                    ThetaVariant::BqfH1 => crate::moments::theta_bqf(d, l, true)?,
                    ThetaVariant::BqfHgt1 => crate::moments::theta_bqf(d, l, false)?,
                }
            };
            rows.push(ThetaRow {
                d,
                l,
                variant: variant.as_str(),
                theta: report.decimal(places),
                exact: report.exact_string(),
                k0: report.k[0].to_string(),
                k1: report.k[1].to_string(),
                k2: report.k[2].to_string(),
                unchecked: report.unchecked,
            });
        }
    }
    Ok(match g.format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut s = String::from("d,l,variant,theta,exact,k0,k1,k2,unchecked\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{}",
                    r.d, r.l, r.variant, r.theta, r.exact, r.k0, r.k1, r.k2, r.unchecked
                );
            }
            s
        }
        Format::Text => {
            let headers = ["d", "l", "theta", "exact"];
            let cells: Vec<[String; 4]> = rows
                .iter()
                .map(|r| {
                    let mark = if r.unchecked { " *" } else { "" };
                    [r.d.to_string(), r.l.to_string(), format!("{}{mark}", r.theta), r.exact.clone()]
                })
                .collect();
            let mut widths = headers.map(str::len);
            for row in &cells {
                for (w, c) in widths.iter_mut().zip(row) {
                    *w = (*w).max(c.chars().count());
                }
            }
            let mut s = String::new();
            let line = |s: &mut String, row: [&str; 4]| {
                let _ = writeln!(
                    s,
                    "{:>w0$}  {:>w1$}  {:<w2$}  {}",
                    row[0],
                    row[1],
                    row[2],
                    row[3],
                    w0 = widths[0],
                    w1 = widths[1],
                    w2 = widths[2]
                );
            };
            line(&mut s, headers);
            for row in &cells {
                line(&mut s, [&row[0], &row[1], &row[2], &row[3]]);
            }
            if rows.iter().any(|r| r.unchecked) {
                s.push_str("* outside the theorem's hypotheses; not a proven exponent\n");
            }
            s
        }
    })
}

// --- coefficient cache ------------------------------------------------------

fn cache_dir(g: &GlobalOpts) -> PathBuf {
    g.cache_dir
        .clone()
        .or_else(|| std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

/// Smallest cached `delta_N<m>.csv` with `m >= n`.
fn cached_delta_file(dir: &Path, n: usize) -> Option<PathBuf> {
    let prefix = format!("{DELTA_LABEL}_N");
    std::fs::read_dir(dir)
        .ok()?
        .filter_map(|entry| {
            let name = entry.ok()?.file_name().into_string().ok()?;
            let m: usize = name.strip_prefix(&prefix)?.strip_suffix(".csv")?.parse().ok()?;
            (m >= n).then_some((m, dir.join(name)))
        })
        .min()
        .map(|(_, path)| path)
}

/// Δ up to `n`, from the cache when a sufficient file exists.
pub fn load_delta(dir: &Path, n: usize, err: &mut dyn std::io::Write) -> Result<CoefficientSeries> {
    if let Some(path) = cached_delta_file(dir, n) {
        match load_coefficients(&path, DELTA_WEIGHT) {
            Ok(series) if series.len() >= n => return Ok(series.truncated(n)),
            Ok(_) => {}
            Err(e) => {
                let _ = writeln!(err, "warning: ignoring cache file {}: {e}", path.display());
            }
        }
    }
    delta_coefficients(n)
}

#[derive(Serialize)]
struct CoeffsReport {
    label: &'static str,
    n: usize,
    path: String,
}

fn coeffs(g: &GlobalOpts, n: usize) -> std::result::Result<String, Failure> {
    let series = delta_coefficients(n)?;
    series.validate()?;
    let dir = cache_dir(g);
    std::fs::create_dir_all(&dir).map_err(Error::from)?;
    let path = dir.join(cache_file_name(DELTA_LABEL, n));
    write_coefficients(&series, &path)?;
    let path = path.display().to_string();
    Ok(match g.format {
        Format::Text => format!("wrote {n} coefficients to {path}\n"),
        Format::Csv => format!("label,n,path\n{DELTA_LABEL},{n},{path}\n"),
        Format::Json => to_json(&CoeffsReport { label: DELTA_LABEL, n, path }),
    })
}

// --- sympow -----------------------------------------------------------------

fn sympow(g: &GlobalOpts, d: u32, n: usize, err: &mut dyn std::io::Write) -> std::result::Result<String, Failure> {
    let delta = load_delta(&cache_dir(g), n, err)?;
    let s = sym_series(&delta, d, n)?;
    Ok(match g.format {
        Format::Json => {
            let values: Vec<f64> = (1..=n).map(|k| s.value(k)).collect();
            to_json(&json!({"d": d, "n": n, "lambda_sym_d": values}))
        }
        Format::Csv | Format::Text => {
            let mut out = String::from("n,lambda_sym_d\n");
            for k in 1..=n {
                let _ = writeln!(out, "{k},{}", fmt_float(s.value(k)));
            }
            out
        }
    })
}

// --- moments ----------------------------------------------------------------

#[derive(Serialize)]
struct MomentRow {
    x: usize,
    s: f64,
    fit: f64,
    residual: f64,
}

#[derive(Serialize)]
struct MomentReport {
    d: u32,
    l: u32,
    form: Option<String>,
    fitted_coeffs: Vec<f64>,
    residual_exponent: Option<f64>,
    window: (f64, f64),
    rows: Vec<MomentRow>,
}

#[allow(clippy::too_many_arguments)]
fn moments(
    g: &GlobalOpts,
    d: u32,
    l: u32,
    x: usize,
    x_min: usize,
    points: usize,
    form: Option<FormArg>,
    err: &mut dyn std::io::Write,
) -> std::result::Result<String, Failure> {
    if x_min > x {
        return Err(Failure::Usage(format!("--x-min {x_min} exceeds --x {x}")));
    }
    if points < 2 {
        return Err(Failure::Usage("--points must be at least 2".into()));
    }
    if l == 0 {
        return Err(Failure::Usage("--l must be at least 1".into()));
    }
    let form = form.map(FormArg::form).transpose()?;
    // Values of Q up to x need coefficients up to x as well.
    let delta = load_delta(&cache_dir(g), x, err)?;
    let series = sym_series(&delta, d, x)?;
    let xs = log_spaced_cutoffs(x_min, x, points);
    let sums = xs
        .iter()
        .map(|&c| match &form {
            Some(q) => bqf_moment_sum(&series, l, q, c),
            None => moment_sum(&series, l, c),
        })
        .collect::<Result<Vec<f64>>>()?;
    let xf: Vec<f64> = xs.iter().map(|&c| c as f64).collect();
    let fit = fit_main_term(d, l, &xf, &sums)?;
    let rows: Vec<MomentRow> = xs
        .iter()
        .zip(&sums)
        .zip(&fit.residuals)
        .map(|((&c, &s), &r)| MomentRow { x: c, s, fit: s - r, residual: r })
        .collect();
    let exponent = fit.residual_exponent;
    Ok(match g.format {
        Format::Json => to_json(&MomentReport {
            d,
            l,
            form: form.map(|q| q.to_string()),
            fitted_coeffs: fit.fitted_coeffs.clone(),
            residual_exponent: exponent.is_finite().then_some(exponent),
            window: fit.window,
            rows,
        }),
        Format::Csv | Format::Text => {
            let mut out = String::from("x,S,fit,residual\n");
            for r in &rows {
                let _ = writeln!(out, "{},{},{},{}", r.x, fmt_float(r.s), fmt_float(r.fit), fmt_float(r.residual));
            }
            if g.format == Format::Text {
                let coeffs: Vec<String> = fit.fitted_coeffs.iter().map(|&c| fmt_float(c)).collect();
                let _ = writeln!(out, "# P coefficients (constant first): [{}]", coeffs.join(", "));
                let _ = writeln!(
                    out,
                    "# residual exponent {} over [{}, {}]",
                    fmt_float(exponent),
                    fit.window.0,
                    fit.window.1
                );
            }
            out
        }
    })
}

// --- bqf --------------------------------------------------------------------

fn bqf(
    format: Format,
    disc: Option<i64>,
    form: Option<FormArg>,
    limit: usize,
    chi: Option<usize>,
    verify: bool,
) -> std::result::Result<String, Failure> {
    let form = match (disc, form) {
        (_, Some(f)) => {
            let q = f.form()?;
            if let Some(d) = disc {
                if q.discriminant() != d {
                    return Err(Failure::Usage(format!("form {q} has discriminant {}, not {d}", q.discriminant())));
                }
            }
            q
        }
        (Some(d), None) => QuadForm::principal(d)?,
        (None, None) => return Err(Failure::Usage("one of --disc or --form is required".into())),
    };
    if limit == 0 {
        return Err(Failure::Usage("--limit must be at least 1".into()));
    }
    let d = form.discriminant();

    if verify {
        let group = ClassGroup::new(d)?;
        let residual = verify_character_decomposition(&group, &form, limit)?;
        let passed = residual < 1e-9;
        let text = match format {
            Format::Json => to_json(&json!({"disc": d, "form": form.to_string(), "limit": limit, "residual": residual, "passed": passed})),
            Format::Csv => format!("disc,form,limit,residual,passed\n{d},\"{form}\",{limit},{},{passed}\n", fmt_float(residual)),
            Format::Text => format!(
                "D = {d}, Q = {form}, n <= {limit}: residual {} {}\n",
                fmt_float(residual),
                if passed { "PASS" } else { "FAIL" }
            ),
        };
        return if passed { Ok(text) } else { Err(Failure::Verify(text)) };
    }

    if let Some(chi) = chi {
        let group = ClassGroup::new(d)?;
        let theta = theta_coefficients(&group, chi, limit)?;
        return Ok(match format {
            Format::Json => {
                let re: Vec<f64> = (1..=limit).map(|n| theta.get(n).re).collect();
                let im: Vec<f64> = (1..=limit).map(|n| theta.get(n).im).collect();
                to_json(&json!({"disc": d, "chi": chi, "a_chi_re": re, "a_chi_im": im}))
            }
            Format::Csv | Format::Text => {
                let mut out = String::from("n,a_chi_re,a_chi_im\n");
                for n in 1..=limit {
                    let v = theta.get(n);
                    let _ = writeln!(out, "{n},{},{}", fmt_float(v.re), fmt_float(v.im));
                }
                out
            }
        });
    }

    let counts = representation_counts(&form, limit);
    Ok(match format {
        Format::Json => to_json(&json!({"disc": d, "form": form.to_string(), "r": &counts[1..]})),
        Format::Csv | Format::Text => {
            let mut out = String::from("n,r\n");
            for (n, r) in counts.iter().enumerate().skip(1) {
                let _ = writeln!(out, "{n},{r}");
            }
            out
        }
    })
}

// --- verify -----------------------------------------------------------------

#[derive(Serialize)]
struct VerifyRow<'a> {
    suite: &'a str,
    name: &'a str,
    passed: bool,
    detail: &'a str,
}

fn run_verify(
    format: Format,
    suite: &str,
    n: usize,
    moment_x: usize,
    list: bool,
    err: &mut dyn std::io::Write,
) -> std::result::Result<String, Failure> {
    let checks = verify::select(suite).map_err(|e| Failure::Usage(e.to_string()))?;
    if list {
        let mut out = String::new();
        for c in checks {
            let _ = writeln!(out, "{:<10} {:<24} {}", c.suite, c.name, c.description);
        }
        return Ok(out);
    }
    let ctx = verify::Context::new(VerifyConfig { n, moment_x });
    let mut results = Vec::new();
    for check in checks {
        let r = verify::run_check(check, &ctx);
        // Timings vary between runs, so they stay off stdout.
        let _ = writeln!(
            err,
            "{} {}/{} ({:.2}s)",
            if r.passed { "ok  " } else { "FAIL" },
            r.suite,
            r.name,
            r.seconds
        );
        results.push(r);
    }
    let rows: Vec<VerifyRow> = results
        .iter()
        .map(|r| VerifyRow { suite: r.suite, name: r.name, passed: r.passed, detail: &r.detail })
        .collect();
    let out = match format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
            for row in &rows {
                w.serialize(row).map_err(|e| Error::Io(e.to_string()))?;
            }
            String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?).expect("utf-8 csv")
        }
        Format::Text => {
            let mut s = String::new();
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{} {}/{}: {}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.suite,
                    r.name,
                    r.detail
                );
            }
            let failed = rows.iter().filter(|r| !r.passed).count();
            let _ = writeln!(s, "{} checks, {} failed", rows.len(), failed);
            s
        }
    };
    match results.iter().find(|r| !r.passed) {
        None => Ok(out),
        Some(first) => {
            let _ = writeln!(err, "error: check {} failed: {}", first.name, first.detail);
            Err(Failure::Verify(out))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("symmoments").chain(args.iter().copied());
        let code = run_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn parses_ranges_and_cutoffs() {
        assert_eq!("3..8".parse::<IntRange>().unwrap(), IntRange(3..=8));
        assert_eq!("3..=8".parse::<IntRange>().unwrap(), IntRange(3..=8));
        assert_eq!("2".parse::<IntRange>().unwrap(), IntRange(2..=2));
        assert!("8..3".parse::<IntRange>().is_err());
        assert_eq!("1e6".parse::<Cutoff>().unwrap(), Cutoff(1_000_000));
        assert_eq!("2500".parse::<Cutoff>().unwrap(), Cutoff(2500));
        assert!("0".parse::<Cutoff>().is_err());
        assert!("1.5".parse::<Cutoff>().is_err());
        assert_eq!("2,-2,3".parse::<FormArg>().unwrap(), FormArg(2, -2, 3));
        assert!("1,2".parse::<FormArg>().is_err());
    }

    #[test]
    fn kostka_text() {
        assert_eq!(run_capture(&["kostka", "--d", "2", "--l", "2"]), (0, "0:1 2:1 4:1\n".into(), String::new()));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_capture(&["kostka", "--d", "2"]).0, 2);
        assert_eq!(run_capture(&["frobnicate"]).0, 2);
        assert_eq!(run_capture(&["kostka", "--d", "2", "--l", "2", "--bogus"]).0, 2);
        assert_eq!(run_capture(&["verify", "--suite", "nope"]).0, 2);
        assert_eq!(run_capture(&["sympow", "--d", "1", "--N", "0"]).0, 2);
        assert_eq!(run_capture(&["--help"]).0, 0);
    }

    #[test]
    fn computational_errors_exit_one_with_name() {
        let (code, _, err) = run_capture(&["theta-table", "--d", "4", "--l", "1"]);
        assert_eq!(code, 1);
        assert!(err.starts_with("error: HypothesisViolated"), "{err}");
        let (code, _, err) = run_capture(&["bqf", "--form", "1,3,1"]);
        assert_eq!(code, 1);
        assert!(err.contains("NotPositiveDefinite"), "{err}");
    }
}
