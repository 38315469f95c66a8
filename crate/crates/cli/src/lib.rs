//! Batch front-end for the convolution and semigroup library.
//!
//! Every command is a thin adapter: files are parsed into library types,
//! exactly one library call runs, and the result is serialized with a fixed
//! field order and fixed `%.12e` float formatting, so identical inputs
//! always produce byte-identical outputs.
//!
//! Measure files are JSON:
//! `{"type":"atoms","atoms":[{"angle":a,"weight":w},...]}` |
//! `{"type":"haar"}` | `{"type":"moments","values":[[re,im],...]}` |
//! `{"type":"pair","mu":M,"nu":M}` (pairs feed the conditional kinds).
//! Field files: `{"gamma":g,"tau":[{"angle":a,"weight":w},...]}` or
//! `{"series":[[re,im],...]}`. Angles are radians; complex numbers are
//! `[re, im]` pairs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use etaconv::convolutions::{
    conv_boolean, conv_boolean0, conv_cfree, conv_cmonotone, conv_monotone, conv_monotone0,
    conv_orthogonal, scale_s, scale_t,
};
use etaconv::measures::poisson_density;
use etaconv::oracle::{oracle_product_moments, ConvolutionKind, FunctionalPair};
use etaconv::semigroups::{
    check_boolean_id, evolve_coefficients, field_series, fields_from_time_one, FieldSeries,
    HerglotzField, SemigroupEvolution, RK4_STEPS_PER_UNIT,
};
use etaconv::transforms::{eta_from_moments, moments_from_eta, moments_from_spec};
use etaconv::{
    CircleMeasureSpec, Complex64, EtaCoefficients, MomentSequence, PairDistribution, DEFAULT_ORDER,
};
use serde::Deserialize;

/// Errors split by exit code: usage problems (malformed files, bad
/// parameters) exit 2, numerical failures on valid inputs exit 3.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<etaconv::Error> for CliError {
    fn from(e: etaconv::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "etaconv", version, about = "Multiplicative convolutions and semigroups of circle measures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Monotone,
    Boolean,
    Orthogonal,
    Cmonotone,
    Cfree,
    Monotone0,
    Boolean0,
}

impl KindArg {
    fn oracle_kind(self) -> ConvolutionKind {
        match self {
            KindArg::Monotone => ConvolutionKind::Monotone,
            KindArg::Boolean => ConvolutionKind::Boolean,
            KindArg::Orthogonal => ConvolutionKind::Orthogonal,
            KindArg::Cmonotone => ConvolutionKind::CMonotone,
            KindArg::Cfree => ConvolutionKind::CFree,
            KindArg::Monotone0 => ConvolutionKind::Monotone0,
            KindArg::Boolean0 => ConvolutionKind::Boolean0,
        }
    }

    fn takes_pairs(self) -> bool {
        matches!(self, KindArg::Cmonotone | KindArg::Cfree)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "UPPER")]
pub enum ScaleKind {
    T,
    S,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Convolve two measures (or measure pairs for the conditional kinds)
    Convolve {
        #[arg(long)]
        kind: KindArg,
        #[arg(long)]
        lhs: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
        /// Truncation order (defaults to the shortest moments input, else 16)
        #[arg(long)]
        order: Option<usize>,
        /// Output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate the semigroup ODEs from (delta_1, delta_1)
    Evolve {
        #[arg(long)]
        b1: PathBuf,
        #[arg(long)]
        b2: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        order: Option<usize>,
        /// RK4 steps (defaults to 1000 per unit time)
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the full trajectory as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Recover the driving fields from a time-one pair
    Embed {
        /// Pair measure file for (mu_1, nu_1)
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        order: Option<usize>,
        /// RK4 steps per trial integration
        #[arg(long, default_value_t = 800)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Test Boolean infinite divisibility (exit 0 yes, 1 no)
    CheckId {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long, default_value_t = 0.9)]
        radius: f64,
        #[arg(long, default_value_t = 128)]
        points: usize,
    },
    /// Sample the Poisson-kernel density reconstruction
    Density {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        radius: f64,
        #[arg(long)]
        points: usize,
        #[arg(long)]
        csv: PathBuf,
    },
    /// Brute-force moment oracle (for cross-checking convolve)
    Oracle {
        #[arg(long)]
        kind: KindArg,
        #[arg(long)]
        lhs: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a coefficient dilation to a measure
    Scale {
        #[arg(long)]
        kind: ScaleKind,
        /// Complex factor as RE,IM
        #[arg(long, value_parser = parse_complex)]
        c: Complex64,
        #[arg(long)]
        measure: PathBuf,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| "expected RE,IM".to_string())?;
    let re: f64 = re.trim().parse().map_err(|_| format!("bad real part {re:?}"))?;
    let im: f64 = im.trim().parse().map_err(|_| format!("bad imaginary part {im:?}"))?;
    Ok(Complex64::new(re, im))
}

// ---------------------------------------------------------------------------
// input files

#[derive(Deserialize, Debug)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum MeasureFile {
    Atoms { atoms: Vec<AtomEntry> },
    Haar,
    Moments { values: Vec<[f64; 2]> },
    Pair { mu: Box<MeasureFile>, nu: Box<MeasureFile> },
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct AtomEntry {
    angle: f64,
    weight: f64,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields, untagged)]
enum FieldFile {
    Herglotz { gamma: f64, tau: Vec<AtomEntry> },
    Series { series: Vec<[f64; 2]> },
}

fn read_json<T: for<'a> Deserialize<'a>>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("cannot parse {}: {e}", path.display())))
}

fn complexes(values: &[[f64; 2]]) -> Vec<Complex64> {
    values.iter().map(|[re, im]| Complex64::new(*re, *im)).collect()
}

impl MeasureFile {
    /// Length of the shortest embedded moments list, if any: the natural
    /// truncation order when `--order` is omitted.
    fn natural_order(&self) -> Option<usize> {
        match self {
            MeasureFile::Moments { values } => Some(values.len()),
            MeasureFile::Pair { mu, nu } => match (mu.natural_order(), nu.natural_order()) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (one, other) => one.or(other),
            },
            _ => None,
        }
    }

    fn single_moments(&self, order: usize) -> CliResult<MomentSequence> {
        let spec = match self {
            MeasureFile::Atoms { atoms } => {
                CircleMeasureSpec::Atoms(atoms.iter().map(|a| (a.angle, a.weight)).collect())
            }
            MeasureFile::Haar => CircleMeasureSpec::Haar,
            MeasureFile::Moments { values } => CircleMeasureSpec::Moments(complexes(values)),
            MeasureFile::Pair { .. } => {
                return Err(CliError::Usage(
                    "expected a single measure, found a pair".into(),
                ))
            }
        };
        Ok(moments_from_spec(&spec, order)?)
    }

    fn pair_moments(&self, order: usize) -> CliResult<(MomentSequence, MomentSequence)> {
        match self {
            MeasureFile::Pair { mu, nu } => {
                Ok((mu.single_moments(order)?, nu.single_moments(order)?))
            }
            _ => Err(CliError::Usage("expected {\"type\":\"pair\",...}".into())),
        }
    }
}

fn field_from_file(path: &Path, order: usize) -> CliResult<FieldSeries> {
    match read_json::<FieldFile>(path)? {
        FieldFile::Herglotz { gamma, tau } => {
            let f = HerglotzField::new(gamma, tau.iter().map(|a| (a.angle, a.weight)).collect())?;
            Ok(field_series(&f, order)?)
        }
        FieldFile::Series { series } => {
            let mut r = complexes(&series);
            if r.len() > order {
                r.truncate(order);
            }
            Ok(FieldSeries::new(r)?)
        }
    }
}

fn resolve_order(requested: Option<usize>, files: &[&MeasureFile]) -> CliResult<usize> {
    let order = requested
        .or_else(|| files.iter().filter_map(|f| f.natural_order()).min())
        .unwrap_or(DEFAULT_ORDER);
    if order == 0 {
        return Err(CliError::Usage("order must be >= 1".into()));
    }
    Ok(order)
}

// ---------------------------------------------------------------------------
// deterministic output

/// C-style `%.12e`: sign, 12 fractional digits, `e`, signed two-digit
/// exponent. Fixed formatting keeps outputs byte-identical across runs.
pub fn fmt_e12(x: f64) -> String {
    let s = format!("{x:.12e}");
    let (mantissa, exponent) = s.split_once('e').expect("exponential format");
    let e: i32 = exponent.parse().expect("integer exponent");
    format!("{mantissa}e{}{:02}", if e < 0 { '-' } else { '+' }, e.abs())
}

/// JSON array of `[re, im]` pairs.
pub fn complex_array(values: &[Complex64]) -> String {
    let mut out = String::from("[");
    for (k, c) in values.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        let _ = write!(out, "[{},{}]", fmt_e12(c.re), fmt_e12(c.im));
    }
    out.push(']');
    out
}

/// JSON object with the eta coefficients and moments of one measure.
pub fn measure_json(eta: &EtaCoefficients) -> String {
    format!(
        "{{\"eta\":{},\"moments\":{}}}",
        complex_array(eta.coeffs()),
        complex_array(moments_from_eta(eta).values())
    )
}

/// JSON object for a measure pair.
pub fn pair_json(pair: &PairDistribution) -> String {
    format!("{{\"mu\":{},\"nu\":{}}}", measure_json(&pair.mu), measure_json(&pair.nu))
}

/// JSON object for the final slice of an evolution.
pub fn evolution_json(evo: &SemigroupEvolution) -> String {
    let pair = evo.final_pair();
    format!(
        "{{\"t\":{},\"mu\":{},\"nu\":{}}}",
        fmt_e12(evo.times()[evo.len() - 1]),
        measure_json(&pair.mu),
        measure_json(&pair.nu)
    )
}

/// JSON object for a recovered field pair.
pub fn fields_json(b1: &FieldSeries, b2: &FieldSeries) -> String {
    format!(
        "{{\"b1\":{},\"b2\":{}}}",
        complex_array(b1.coeffs()),
        complex_array(b2.coeffs())
    )
}

/// JSON verdict of the Boolean infinite-divisibility test.
pub fn verdict_json(boolean_id: bool, radius: f64, points: usize) -> String {
    format!(
        "{{\"boolean_id\":{boolean_id},\"radius\":{},\"points\":{points}}}",
        fmt_e12(radius)
    )
}

/// JSON object with oracle moments: one sequence for the plain kinds, a
/// mu/nu pair for the conditional ones.
pub fn oracle_json(kind: KindArg, first: &MomentSequence, second: &MomentSequence) -> String {
    if kind.takes_pairs() {
        format!(
            "{{\"mu\":{{\"moments\":{}}},\"nu\":{{\"moments\":{}}}}}",
            complex_array(first.values()),
            complex_array(second.values())
        )
    } else {
        format!("{{\"moments\":{}}}", complex_array(first.values()))
    }
}

/// CSV with rows `theta,density`.
pub fn density_csv(angles: &[f64], values: &[f64]) -> String {
    let mut out = String::from("theta,density\n");
    for (theta, value) in angles.iter().zip(values) {
        let _ = writeln!(out, "{},{}", fmt_e12(*theta), fmt_e12(*value));
    }
    out
}

/// Long-format CSV of a full evolution: one row per saved coefficient.
pub fn trajectory_csv(evo: &SemigroupEvolution) -> String {
    let mut out = String::from("t,component,n,re,im\n");
    for j in 0..evo.len() {
        let t = fmt_e12(evo.times()[j]);
        for (component, eta) in [("mu", evo.mu_at(j)), ("nu", evo.nu_at(j))] {
            for (k, c) in eta.coeffs().iter().enumerate() {
                let _ = writeln!(out, "{t},{component},{},{},{}", k + 1, fmt_e12(c.re), fmt_e12(c.im));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// dispatch

/// What a successful run produced: rendered text per destination.
pub struct Output {
    pub stdout: String,
    pub exit_code: i32,
}

fn deliver(text: String, out: &Option<PathBuf>) -> CliResult<String> {
    match out {
        Some(path) => {
            std::fs::write(path, text)
                .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn eta_of(m: &MomentSequence) -> EtaCoefficients {
    eta_from_moments(m)
}

/// Executes one parsed command. Writes `--out`/`--csv` files itself and
/// returns whatever belongs on stdout plus the exit code.
pub fn run(cli: &Cli) -> CliResult<Output> {
    match &cli.command {
        Command::Convolve { kind, lhs, rhs, order, out } => {
            let lhs: MeasureFile = read_json(lhs)?;
            let rhs: MeasureFile = read_json(rhs)?;
            let n = resolve_order(*order, &[&lhs, &rhs])?;
            let text = if kind.takes_pairs() {
                let (m1, n1) = lhs.pair_moments(n)?;
                let (m2, n2) = rhs.pair_moments(n)?;
                let p1 = PairDistribution::new(eta_of(&m1), eta_of(&n1))?;
                let p2 = PairDistribution::new(eta_of(&m2), eta_of(&n2))?;
                let result = match kind {
                    KindArg::Cmonotone => conv_cmonotone(&p1, &p2)?,
                    _ => conv_cfree(&p1, &p2)?,
                };
                pair_json(&result)
            } else {
                let a = eta_of(&lhs.single_moments(n)?);
                let b = eta_of(&rhs.single_moments(n)?);
                let result = match kind {
                    KindArg::Monotone => conv_monotone(&a, &b)?,
                    KindArg::Boolean => conv_boolean(&a, &b)?,
                    KindArg::Orthogonal => conv_orthogonal(&a, &b)?,
                    KindArg::Monotone0 => conv_monotone0(&a, &b)?,
                    _ => conv_boolean0(&a, &b)?,
                };
                measure_json(&result)
            } + "\n";
            Ok(Output { stdout: deliver(text, out)?, exit_code: 0 })
        }
        Command::Evolve { b1, b2, t, order, steps, out, csv } => {
            if !(t.is_finite() && *t >= 0.0) {
                return Err(CliError::Usage("evolution time must be finite and >= 0".into()));
            }
            let n = order.unwrap_or(DEFAULT_ORDER);
            let steps = steps
                .unwrap_or_else(|| ((t * RK4_STEPS_PER_UNIT as f64).ceil() as usize).max(1));
            let f1 = field_from_file(b1, n)?;
            let f2 = field_from_file(b2, n)?;
            let evo = evolve_coefficients(&f1, &f2, *t, steps, n)?;
            if let Some(path) = csv {
                std::fs::write(path, trajectory_csv(&evo))
                    .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
            }
            let text = evolution_json(&evo) + "\n";
            Ok(Output { stdout: deliver(text, out)?, exit_code: 0 })
        }
        Command::Embed { target, order, steps, out } => {
            let file: MeasureFile = read_json(target)?;
            let n = resolve_order(*order, &[&file])?;
            let (m_mu, m_nu) = file.pair_moments(n)?;
            let pair = PairDistribution::new(eta_of(&m_mu), eta_of(&m_nu))?;
            let (b1, b2) = fields_from_time_one(&pair, n, *steps)?;
            let text = fields_json(&b1, &b2) + "\n";
            Ok(Output { stdout: deliver(text, out)?, exit_code: 0 })
        }
        Command::CheckId { measure, order, radius, points } => {
            let file: MeasureFile = read_json(measure)?;
            let n = resolve_order(*order, &[&file])?;
            let eta = eta_of(&file.single_moments(n)?);
            let verdict = check_boolean_id(&eta, *radius, *points)?;
            Ok(Output {
                stdout: verdict_json(verdict, *radius, *points) + "\n",
                exit_code: if verdict { 0 } else { 1 },
            })
        }
        Command::Density { measure, order, radius, points, csv } => {
            let file: MeasureFile = read_json(measure)?;
            let n = resolve_order(*order, &[&file])?;
            let moments = file.single_moments(n)?;
            let samples = poisson_density(&moments, *radius, *points)?;
            std::fs::write(csv, density_csv(samples.angles(), samples.values()))
                .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", csv.display())))?;
            Ok(Output { stdout: String::new(), exit_code: 0 })
        }
        Command::Oracle { kind, lhs, rhs, order, out } => {
            let lhs: MeasureFile = read_json(lhs)?;
            let rhs: MeasureFile = read_json(rhs)?;
            let n = resolve_order(*order, &[&lhs, &rhs])?;
            let to_pair = |file: &MeasureFile| -> CliResult<FunctionalPair> {
                if kind.takes_pairs() {
                    let (phi, psi) = file.pair_moments(n)?;
                    Ok(FunctionalPair::new(phi.values().to_vec(), psi.values().to_vec())?)
                } else {
                    let phi = file.single_moments(n)?;
                    Ok(FunctionalPair::new(phi.values().to_vec(), phi.values().to_vec())?)
                }
            };
            let (first, second) =
                oracle_product_moments(kind.oracle_kind(), &to_pair(&lhs)?, &to_pair(&rhs)?, n)?;
            let text = oracle_json(*kind, &first, &second) + "\n";
            Ok(Output { stdout: deliver(text, out)?, exit_code: 0 })
        }
        Command::Scale { kind, c, measure, order, out } => {
            let file: MeasureFile = read_json(measure)?;
            let n = resolve_order(*order, &[&file])?;
            let eta = eta_of(&file.single_moments(n)?);
            let scaled = match kind {
                ScaleKind::T => scale_t(*c, &eta)?,
                ScaleKind::S => scale_s(*c, &eta)?,
            };
            let text = measure_json(&scaled) + "\n";
            Ok(Output { stdout: deliver(text, out)?, exit_code: 0 })
        }
    }
}
