//! Command-line interface of the `unimon` binary.
//!
//! Exit codes: 0 on success, 1 on usage errors (including parameter sets that
//! fail validation), 2 on numerical failures. Errors detected after parsing
//! are reported on stderr as one JSON object `{"error", "message"}`.
//!
//! `UNIMON_THREADS` sets the worker count for sweeps and maps.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::elliptic::{asymptotic_accessory, periods_from_a, seed_lattice, DarbouxParams};
use crate::error::Error;
use crate::figures::{reproduce_figures, Figure, FigureOptions};
use crate::monodromy::{monodromy_triple, HeunParams, IntegratorConfig};
use crate::spectrum::{convergence_map, sweep, to_csv_row, Region, SolverConfig, CSV_HEADER};
use crate::unitarity::{classify_with, ClassifyOptions, GeneratorSet};
use crate::{c64, C64};

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "UNIMON_THREADS";

#[derive(Parser, Debug)]
#[command(name = "unimon", version, about = "Unitary monodromy of 2x2 matrix groups and Heun equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a generator set read from JSON and build its Hermitian form.
    Classify(ClassifyArgs),
    /// Monodromy matrices of a Heun equation about 0, 1 and a.
    Monodromy(MonodromyArgs),
    /// Asymptotic accessory parameters on the conjugate lattice.
    Asymptote(AsymptoteArgs),
    /// Two-trace Newton sweep over lattice seeds.
    Spectrum(SpectrumArgs),
    /// Convergence map of the Newton iteration (binary PPM + JSON sidecar).
    Convmap(ConvmapArgs),
    /// Regenerate the figure data (Lamé table, map, Heun sweeps).
    Figures(FiguresArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Ppm,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Output file; standard output when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct ClassifyArgs {
    /// JSON list of 2x2 matrices, each as four [re, im] pairs in row order.
    #[arg(long)]
    input: PathBuf,
    /// Loosen every tolerance to this value (numerical input).
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug, Clone)]
#[command(allow_negative_numbers = true)]
struct HeunArgs {
    /// Exponent parameter γ (singular point 0).
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
    /// Exponent parameter δ (singular point 1).
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    /// Exponent parameter ε (singular point a).
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    /// Exponent parameter α (infinity).
    #[arg(long, default_value_t = 0.25)]
    alpha: f64,
    /// Exponent parameter β (infinity); γ+δ+ε = 1+α+β is required.
    #[arg(long, default_value_t = 0.25)]
    beta: f64,
    /// Real part of the third singular point a.
    #[arg(long = "a-re", default_value_t = -1.0)]
    a_re: f64,
    /// Imaginary part of a.
    #[arg(long = "a-im", default_value_t = 0.0)]
    a_im: f64,
}

#[derive(Args, Debug, Clone)]
#[command(allow_negative_numbers = true)]
struct IntegratorArgs {
    /// RK4 step |dz|.
    #[arg(long, default_value_t = 4e-4)]
    step: f64,
    /// Radius of the circle about each singular point.
    #[arg(long, default_value_t = 0.2)]
    radius: f64,
    /// Base point of the loops (real part).
    #[arg(long = "base-re", default_value_t = 0.0)]
    base_re: f64,
    /// Base point of the loops (imaginary part).
    #[arg(long = "base-im", default_value_t = 1.0)]
    base_im: f64,
}

#[derive(Args, Debug, Clone)]
#[command(allow_negative_numbers = true)]
struct SolverArgs {
    /// Real finite-difference step h.
    #[arg(long, default_value_t = 1e-5)]
    h: f64,
    /// Newton iterations per seed.
    #[arg(long = "max-iters", default_value_t = 20)]
    max_iters: usize,
    /// Convergence threshold on the Newton step |ε|.
    #[arg(long = "newton-tol", default_value_t = 1e-8)]
    newton_tol: f64,
    /// Relative tolerance on Im tr(P₀R₀) for acceptance (3%).
    #[arg(long = "accept-tol", default_value_t = 0.03)]
    accept_tol: f64,
    /// Relative tolerance on the two driven traces.
    #[arg(long = "trace-tol", default_value_t = 1e-6)]
    trace_tol: f64,
    /// Central instead of forward differences.
    #[arg(long = "central-diff")]
    central_diff: bool,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct MonodromyArgs {
    #[command(flatten)]
    heun: HeunArgs,
    /// Accessory parameter B (real part).
    #[arg(long = "B-re", default_value_t = 0.0)]
    b_re: f64,
    /// Accessory parameter B (imaginary part).
    #[arg(long = "B-im", default_value_t = 0.0)]
    b_im: f64,
    #[command(flatten)]
    integ: IntegratorArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct AsymptoteArgs {
    /// Real part of the third singular point a.
    #[arg(long = "a-re", default_value_t = -1.0)]
    a_re: f64,
    /// Imaginary part of a.
    #[arg(long = "a-im", default_value_t = 0.0)]
    a_im: f64,
    /// Darboux exponent m₀; the defaults give the Lamé case (−1/2, 0, 0, 0).
    #[arg(long, default_value_t = -0.5)]
    m0: f64,
    /// Darboux exponent m₁.
    #[arg(long, default_value_t = 0.0)]
    m1: f64,
    /// Darboux exponent m₂.
    #[arg(long, default_value_t = 0.0)]
    m2: f64,
    /// Darboux exponent m₃.
    #[arg(long, default_value_t = 0.0)]
    m3: f64,
    /// Emit all lattice indices with |m|, |n| ≤ range, except (0, 0).
    #[arg(long, default_value_t = 3)]
    range: i64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug, Clone)]
#[command(allow_negative_numbers = true)]
struct SeedArgs {
    /// Smallest seed index m; the default ranges give the 12-seed reference
    /// set m ∈ [1, 3], n ∈ [−1, 2].
    #[arg(long = "m-min", default_value_t = 1)]
    m_min: i64,
    /// Largest seed index m.
    #[arg(long = "m-max", default_value_t = 3)]
    m_max: i64,
    /// Smallest seed index n.
    #[arg(long = "n-min", default_value_t = -1)]
    n_min: i64,
    /// Largest seed index n.
    #[arg(long = "n-max", default_value_t = 2)]
    n_max: i64,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct SpectrumArgs {
    #[command(flatten)]
    heun: HeunArgs,
    #[command(flatten)]
    seeds: SeedArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    integ: IntegratorArgs,
    /// Table format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct ConvmapArgs {
    #[command(flatten)]
    heun: HeunArgs,
    /// Map width in pixels.
    #[arg(long, default_value_t = 64)]
    width: usize,
    /// Map height in pixels.
    #[arg(long, default_value_t = 64)]
    height: usize,
    /// Map covers √B ∈ [−extent, extent]².
    #[arg(long, default_value_t = 7.0)]
    extent: f64,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    integ: IntegratorArgs,
    /// PPM image; the sidecar goes to the same path with `.json` appended.
    #[arg(long, short)]
    output: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FigureArg {
    Fig2a,
    Fig2b,
    Fig3,
    All,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct FiguresArgs {
    /// Output directory.
    #[arg(long = "out-dir", default_value = "figures")]
    out_dir: PathBuf,
    /// Which figure data to regenerate.
    #[arg(long, value_enum, default_value_t = FigureArg::All)]
    which: FigureArg,
    /// Convergence map resolution (square).
    #[arg(long = "map-size", default_value_t = 64)]
    map_size: usize,
    /// Map covers √B ∈ [−extent, extent]².
    #[arg(long = "map-extent", default_value_t = 7.0)]
    map_extent: f64,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    integ: IntegratorArgs,
}

enum Failure {
    Usage(String),
    Numeric(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(_) => Failure::Usage(e.to_string()),
            e => Failure::Numeric(e),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn finite(name: &str, values: &[f64]) -> CliResult<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Failure::Usage(format!("--{name} must be finite")))
    }
}

impl HeunArgs {
    fn params(&self, b: C64) -> CliResult<HeunParams> {
        finite("gamma/delta/epsilon/alpha/beta/a-re/a-im", &[
            self.gamma, self.delta, self.epsilon, self.alpha, self.beta, self.a_re, self.a_im,
        ])?;
        Ok(HeunParams::real(
            self.gamma,
            self.delta,
            self.epsilon,
            self.alpha,
            self.beta,
            c64(self.a_re, self.a_im),
            b,
        )?)
    }
}

impl IntegratorArgs {
    fn config(&self) -> CliResult<IntegratorConfig> {
        finite("step/radius/base-re/base-im", &[self.step, self.radius, self.base_re, self.base_im])?;
        if self.step <= 0.0 {
            return Err(Failure::Usage("--step must be positive".into()));
        }
        if self.radius <= 0.0 {
            return Err(Failure::Usage("--radius must be positive".into()));
        }
        Ok(IntegratorConfig { step: self.step, radius: self.radius, base: c64(self.base_re, self.base_im) })
    }
}

impl SolverArgs {
    fn config(&self, integrator: IntegratorConfig) -> CliResult<SolverConfig> {
        let cfg = SolverConfig {
            fd_step: self.h,
            max_iters: self.max_iters,
            newton_tol: self.newton_tol,
            accept_rel_tol: self.accept_tol,
            trace_tol: self.trace_tol,
            central_diff: self.central_diff,
            integrator,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl SeedArgs {
    fn indices(&self) -> CliResult<Vec<(i64, i64)>> {
        if self.m_min > self.m_max || self.n_min > self.n_max {
            return Err(Failure::Usage("--m-min/--n-min must not exceed --m-max/--n-max".into()));
        }
        let count = (self.m_max - self.m_min + 1).saturating_mul(self.n_max - self.n_min + 1);
        if count > 10_000 {
            return Err(Failure::Usage(format!("seed range has {count} points (limit 10000)")));
        }
        let mut v = Vec::new();
        for m in self.m_min..=self.m_max {
            for n in self.n_min..=self.n_max {
                v.push((m, n));
            }
        }
        Ok(v)
    }
}

fn emit(output: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match output {
        Some(p) => std::fs::write(p, bytes).map_err(|e| Failure::Numeric(e.into())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes).and_then(|_| out.flush()).map_err(|e| Failure::Numeric(e.into()))
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s.into_bytes()
}

fn cmd_classify(args: &ClassifyArgs) -> CliResult<()> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| Failure::Usage(format!("--input {}: {e}", args.input.display())))?;
    let set: GeneratorSet =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("--input {}: {e}", args.input.display())))?;
    let opts = match args.tol {
        Some(t) if t.is_finite() && t > 0.0 => ClassifyOptions::with_tolerance(t),
        Some(_) => return Err(Failure::Usage("--tol must be positive".into())),
        None => ClassifyOptions::default(),
    };
    let c = classify_with(&set, &opts)?;
    emit(args.out.output.as_deref(), &to_json(&c))
}

#[derive(Serialize)]
struct MonodromyReport {
    params: HeunParams,
    integrator: IntegratorConfig,
    #[serde(rename = "P")]
    p: crate::Mat2,
    #[serde(rename = "Q")]
    q: crate::Mat2,
    #[serde(rename = "R")]
    r: crate::Mat2,
    #[serde(rename = "P0")]
    p0: crate::Mat2,
    #[serde(rename = "Q0")]
    q0: crate::Mat2,
    #[serde(rename = "R0")]
    r0: crate::Mat2,
    traces: Traces,
    exponent_residuals: [f64; 3],
    det_residuals: [f64; 3],
    infinity_trace_ratio: C64,
}

#[derive(Serialize)]
struct Traces {
    #[serde(rename = "P0Q0")]
    pq: C64,
    #[serde(rename = "Q0R0")]
    qr: C64,
    #[serde(rename = "P0R0")]
    pr: C64,
}

fn cmd_monodromy(args: &MonodromyArgs) -> CliResult<()> {
    finite("B-re/B-im", &[args.b_re, args.b_im])?;
    let params = args.heun.params(c64(args.b_re, args.b_im))?;
    let integrator = args.integ.config()?;
    let t = monodromy_triple(&params, &integrator)?;
    let report = MonodromyReport {
        params,
        integrator,
        p: t.p,
        q: t.q,
        r: t.r,
        p0: t.p0,
        q0: t.q0,
        r0: t.r0,
        traces: Traces { pq: t.t_pq(), qr: t.t_qr(), pr: t.t_pr() },
        exponent_residuals: t.exponent_residuals(&params),
        det_residuals: t.det_residuals(),
        infinity_trace_ratio: t.infinity_trace_ratio(&params),
    };
    emit(args.out.output.as_deref(), &to_json(&report))
}

fn cmd_asymptote(args: &AsymptoteArgs) -> CliResult<()> {
    finite("a-re/a-im/m0..m3", &[args.a_re, args.a_im, args.m0, args.m1, args.m2, args.m3])?;
    if !(0..=100).contains(&args.range) {
        return Err(Failure::Usage("--range must be in 0..=100".into()));
    }
    let d = periods_from_a(c64(args.a_re, args.a_im))?;
    let dp = DarbouxParams::new([args.m0, args.m1, args.m2, args.m3].map(|m| c64(m, 0.0)));
    let mut indices = Vec::new();
    for m in -args.range..=args.range {
        for n in -args.range..=args.range {
            if (m, n) != (0, 0) {
                indices.push((m, n));
            }
        }
    }
    let mut out = String::from("m,n,l0_re,l0_im,B1_re,B1_im\n");
    for (&(m, n), l) in indices.iter().zip(seed_lattice(&d, &indices)) {
        let b1 = asymptotic_accessory(l, &dp, &d)?;
        out.push_str(&format!("{m},{n},{:.12},{:.12},{:.12},{:.12}\n", l.re, l.im, b1.re, b1.im));
    }
    emit(args.out.output.as_deref(), out.as_bytes())
}

fn cmd_spectrum(args: &SpectrumArgs) -> CliResult<()> {
    let base = args.heun.params(c64(0.0, 0.0))?;
    let cfg = args.solver.config(args.integ.config()?)?;
    let indices = args.seeds.indices()?;
    let d = periods_from_a(base.a)?;
    let results = sweep(&base, &d, &indices, &cfg);
    let bytes = match args.format {
        Format::Csv => {
            let mut s = String::from(CSV_HEADER);
            s.push('\n');
            for r in &results {
                s.push_str(&to_csv_row(r));
                s.push('\n');
            }
            s.into_bytes()
        }
        Format::Json => to_json(&results),
        Format::Ppm => return Err(Failure::Usage("--format ppm is only available for convmap".into())),
    };
    emit(args.out.output.as_deref(), &bytes)
}

fn cmd_convmap(args: &ConvmapArgs) -> CliResult<()> {
    let base = args.heun.params(c64(0.0, 0.0))?;
    let cfg = args.solver.config(args.integ.config()?)?;
    finite("extent", &[args.extent])?;
    if args.extent <= 0.0 {
        return Err(Failure::Usage("--extent must be positive".into()));
    }
    let map = convergence_map(&base, Region::square(args.extent), args.width, args.height, &cfg)?;
    emit(Some(&args.output), &map.to_ppm())?;
    let mut sidecar = args.output.clone().into_os_string();
    sidecar.push(".json");
    emit(Some(Path::new(&sidecar)), map.sidecar_json().as_bytes())
}

fn cmd_figures(args: &FiguresArgs) -> CliResult<()> {
    let solver = args.solver.config(args.integ.config()?)?;
    finite("map-extent", &[args.map_extent])?;
    if args.map_extent <= 0.0 || args.map_size == 0 {
        return Err(Failure::Usage("--map-size and --map-extent must be positive".into()));
    }
    let figures = match args.which {
        FigureArg::Fig2a => vec![Figure::Fig2a],
        FigureArg::Fig2b => vec![Figure::Fig2b],
        FigureArg::Fig3 => vec![Figure::Fig3],
        FigureArg::All => Figure::ALL.to_vec(),
    };
    let opts = FigureOptions { figures, map_size: args.map_size, map_extent: args.map_extent, solver, ..Default::default() };
    let written = reproduce_figures(&args.out_dir, &opts)?;
    let listing: String = written.iter().map(|p| format!("{}\n", p.display())).collect();
    emit(None, listing.as_bytes())
}

fn dispatch(cmd: &Command) -> CliResult<()> {
    match cmd {
        Command::Classify(a) => cmd_classify(a),
        Command::Monodromy(a) => cmd_monodromy(a),
        Command::Asymptote(a) => cmd_asymptote(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Convmap(a) => cmd_convmap(a),
        Command::Figures(a) => cmd_figures(a),
    }
}

fn thread_count() -> CliResult<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure::Usage(format!("{THREADS_ENV} must be a positive integer, got {s:?}"))),
        },
    }
}

fn report(f: Failure) -> i32 {
    let (code, kind, message) = match f {
        Failure::Usage(m) => (1, "usage", m),
        Failure::Numeric(e) => (2, e.kind(), e.to_string()),
    };
    eprintln!("{}", serde_json::json!({ "error": kind, "message": message }));
    code
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run(argv: Vec<String>) -> i32 {
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).try_init();
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let threads = match thread_count() {
        Ok(t) => t,
        Err(f) => return report(f),
    };
    let outcome = match threads {
        None => dispatch(&cli.command),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command)),
            Err(e) => Err(Failure::Usage(format!("{THREADS_ENV}: {e}"))),
        },
    };
    match outcome {
        Ok(()) => 0,
        Err(f) => report(f),
    }
}
