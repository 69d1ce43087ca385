use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use burgess_core::bounds::{
    burgess_classical, chang_refined_bound, delta_chang, delta_chang_at, delta_chang_refined, delta_vin,
    delta_vin_at, enflo_bound, intermediate_bound, optimal_r_chang, optimal_r_vin, vinogradov_bound, BoundReport,
};
use burgess_core::modular::{DirichletCharacter, PrimeModulus};
use burgess_core::pipeline::{choose_p, count_profile, xi_identity_check};
use burgess_core::sums::{mixed_sum, RealPolynomial};
use burgess_core::verify::{criterion_ids, run_criterion, DEFAULT_SEED};
use burgess_core::vinogradov::{count_j_bruteforce, conjecture_ratio_table, BRUTE_FORCE_LIMIT};
use burgess_core::{Error, TupleAssignment};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXIT_INVALID: u8 = 2;
const EXIT_GUARD: u8 = 3;
const EXIT_FAILED: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "burgess", version, about = "Experiments on short mixed character sums")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// File for rejected parameter combinations (stderr when absent).
    #[arg(long, global = true)]
    rejects: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// |Σ e(f(n)) χ(n)| against the closed-form bounds.
    Charsum(CharsumArgs),
    /// Vinogradov mean values J_{r,d}(X).
    Jcount(JcountArgs),
    /// Bound exponents, or δ savings when --kappa is given.
    Bounds(BoundsArgs),
    /// Run the acceptance suite.
    Verify(VerifyArgs),
    /// Tally the vertex-sum identity over exhaustive tuple sets.
    Grid(GridArgs),
    /// Moments of the counting function 𝒜(m).
    Pipeline(PipelineArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum PhaseKind {
    /// Random rational coefficients of degree d.
    Random,
    /// f ≡ 0.
    Zero,
    /// f(n) = n/q.
    Gauss,
}

#[derive(Args, Debug)]
struct CharsumArgs {
    #[arg(long)]
    q: u64,
    #[arg(long, default_value_t = 1)]
    d: u32,
    #[arg(long, default_value_t = 2)]
    r: u32,
    /// H = ⌈q^s⌉ for each s.
    #[arg(long = "h-exp", value_delimiter = ',', default_value = "0.4")]
    h_exp: Vec<f64>,
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
    /// Character index j (random non-principal when absent).
    #[arg(long = "char")]
    char_index: Option<u64>,
    #[arg(long, value_enum, default_value_t = PhaseKind::Random)]
    phase: PhaseKind,
    /// Starting points N (random when absent).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    n: Vec<i64>,
    /// Number of random starting points.
    #[arg(long, default_value_t = 10)]
    samples: usize,
}

#[derive(Args, Debug)]
struct JcountArgs {
    #[arg(long, default_value_t = 2)]
    r: usize,
    #[arg(long, default_value_t = 1)]
    d: u32,
    #[arg(long = "x-max", default_value_t = 10)]
    x_max: u64,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long, default_value_t = 1e9)]
    q: f64,
    #[arg(long, default_value_t = 1)]
    d: u32,
    /// Values of r (all of 1..=4D+8 when absent).
    #[arg(long, value_delimiter = ',')]
    r: Vec<u32>,
    #[arg(long = "h-exp", value_delimiter = ',', default_value = "0.3,0.4,0.5")]
    h_exp: Vec<f64>,
    /// κ grid; switches the output to δ savings at H = q^{1/4+κ}.
    #[arg(long, value_delimiter = ',')]
    kappa: Vec<f64>,
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
    /// Wooley loss Δ for the intermediate range (defaults to d).
    #[arg(long = "delta-wooley")]
    delta_wooley: Option<f64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Run a single criterion.
    #[arg(long)]
    criterion: Option<u8>,
}

#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long, requires_all = ["d", "base"])]
    r: Option<usize>,
    #[arg(long)]
    d: Option<u32>,
    /// Grid base Q.
    #[arg(long)]
    base: Option<u64>,
    /// Entries range over [1, τ] (defaults to Q).
    #[arg(long)]
    tau: Option<u64>,
}

#[derive(Args, Debug)]
struct PipelineArgs {
    #[arg(long)]
    q: u64,
    #[arg(long, default_value_t = 1)]
    d: u32,
    #[arg(long, default_value_t = 3)]
    r: u32,
    #[arg(long = "h-exp", value_delimiter = ',', default_value = "0.5,0.55,0.6")]
    h_exp: Vec<f64>,
    /// Starting points N (0 and ⌊q/3⌋ when absent).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    n: Vec<i64>,
    /// Explicit P (the choice rule when absent).
    #[arg(long = "p")]
    p_param: Option<u64>,
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Invalid(String),
    Io(io::Error),
    Csv(csv::Error),
    Acceptance(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Csv(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(e) if e.is_guard() => EXIT_GUARD,
            Failure::Core(_) | Failure::Invalid(_) | Failure::Io(_) | Failure::Csv(_) => EXIT_INVALID,
            Failure::Acceptance(_) => EXIT_FAILED,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Invalid(m) | Failure::Acceptance(m) => m.clone(),
            Failure::Io(e) => e.to_string(),
            Failure::Csv(e) => e.to_string(),
        }
    }
}

type Outcome = Result<(), Failure>;

struct Output {
    out: Box<dyn Write>,
    rejects: Box<dyn Write>,
}

impl Output {
    fn open(common: &Common) -> Result<Self, Failure> {
        let out: Box<dyn Write> = match &common.out {
            Some(path) => Box::new(io::BufWriter::new(File::create(path)?)),
            None => Box::new(io::stdout().lock()),
        };
        let rejects: Box<dyn Write> = match &common.rejects {
            Some(path) => Box::new(io::BufWriter::new(File::create(path)?)),
            None => Box::new(io::stderr()),
        };
        Ok(Self { out, rejects })
    }

    fn csv(&mut self) -> csv::Writer<&mut dyn Write> {
        csv::Writer::from_writer(&mut *self.out)
    }

    fn reject(&mut self, msg: impl AsRef<str>) -> io::Result<()> {
        writeln!(self.rejects, "reject: {}", msg.as_ref())
    }
}

fn h_of(q: f64, s: f64) -> Result<f64, Failure> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Failure::Invalid(format!("H exponent must be positive, got {s}")));
    }
    Ok(q.powf(s).ceil())
}

fn character(q: u64, index: Option<u64>, rng: &mut ChaCha8Rng) -> Result<DirichletCharacter, Failure> {
    let modulus = Arc::new(PrimeModulus::new(q)?);
    let j = index.unwrap_or_else(|| rng.random_range(1..modulus.group_order()));
    Ok(DirichletCharacter::non_principal(modulus, j)?)
}

fn cmd_charsum(args: &CharsumArgs, common: &Common, out: &mut Output) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let chi = character(args.q, args.char_index, &mut rng)?;
    let q = args.q;
    let f = match args.phase {
        PhaseKind::Zero => RealPolynomial::zero(0),
        PhaseKind::Gauss => RealPolynomial::linear_over(1, q),
        PhaseKind::Random => {
            let coeffs: Vec<(i64, u64)> = (0..=args.d)
                .map(|_| {
                    let den = rng.random_range(1..=1_000_000u64);
                    (rng.random_range(0..den) as i64, den)
                })
                .collect();
            RealPolynomial::from_rationals(&coeffs)?
        }
    };
    let starts: Vec<i64> = if args.n.is_empty() {
        (0..args.samples).map(|_| rng.random_range(0..q as i64)).collect()
    } else {
        args.n.clone()
    };
    let mut rows = Vec::new();
    for &s in &args.h_exp {
        let h = h_of(q as f64, s)?;
        let chang = chang_refined_bound(q as f64, h, args.r, args.d)?;
        let vin = vinogradov_bound(q as f64, h, args.r, args.d, args.eps)?;
        for report in [&chang, &vin] {
            if !report.valid {
                out.reject(format!(
                    "{} at H={h}, r={}, d={}: {}",
                    report.theorem,
                    args.r,
                    args.d,
                    report.reason.as_deref().unwrap_or("")
                ))?;
            }
        }
        for &n in &starts {
            let sum = mixed_sum(&chi, &f, n, h)?;
            rows.push((n, h, sum.magnitude, chang.bound, vin.bound, sum.magnitude / vin.bound));
        }
    }
    let mut w = out.csv();
    w.write_record(["N", "H", "magnitude", "bound_chang", "bound_vin", "ratio_vin"])?;
    for (n, h, mag, bc, bv, ratio) in rows {
        w.serialize((n, h, mag, bc, bv, ratio))?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_jcount(args: &JcountArgs, out: &mut Output) -> Outcome {
    let table = conjecture_ratio_table(args.r, args.d, args.x_max)?;
    let mut w = out.csv();
    w.write_record(["X", "J", "J_bruteforce", "conjecture_ratio"])?;
    for row in table {
        let brute_work = (row.x as u128).checked_pow(2 * args.r as u32);
        let brute = match brute_work {
            Some(work) if work <= BRUTE_FORCE_LIMIT / 100 => Some(count_j_bruteforce(args.r, args.d, row.x)?),
            _ => None,
        };
        if let Some(b) = brute {
            if b != row.j {
                return Err(Failure::Acceptance(format!("oracle mismatch at X={}: {} vs {b}", row.x, row.j)));
            }
        }
        w.write_record([
            row.x.to_string(),
            row.j.to_string(),
            brute.map(|b| b.to_string()).unwrap_or_default(),
            row.ratio.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn bound_reports(args: &BoundsArgs, h: f64, r: u32) -> Result<Vec<BoundReport>, Failure> {
    let (q, d, eps) = (args.q, args.d, args.eps);
    let mut reports = vec![
        burgess_classical(q, h, r)?,
        enflo_bound(q, h, r, d, eps)?,
        chang_refined_bound(q, h, r, d)?,
        vinogradov_bound(q, h, r, d, eps)?,
    ];
    if d >= 4 {
        let delta = args.delta_wooley.unwrap_or(d as f64);
        reports.push(intermediate_bound(q, h, r, d, eps, delta)?);
    }
    Ok(reports)
}

fn cmd_bounds(args: &BoundsArgs, out: &mut Output) -> Outcome {
    if !args.kappa.is_empty() {
        return cmd_deltas(args, out);
    }
    let rs: Vec<u32> = if args.r.is_empty() {
        (1..=4 * burgess_core::bounds::d_of(args.d) as u32 + 8).collect()
    } else {
        args.r.clone()
    };
    let mut rows = Vec::new();
    for &s in &args.h_exp {
        let h = h_of(args.q, s)?;
        for &r in &rs {
            for rep in bound_reports(args, h, r)? {
                if rep.valid {
                    rows.push((s, rep));
                } else {
                    out.reject(format!(
                        "{} at q={}, H=q^{s}, r={r}, d={}: {}",
                        rep.theorem,
                        args.q,
                        args.d,
                        rep.reason.as_deref().unwrap_or("")
                    ))?;
                }
            }
        }
    }
    let mut w = out.csv();
    w.write_record([
        "q", "h_exp", "H", "r", "d", "theorem", "exp_H", "exp_q", "exp_log", "bound", "bound_over_H",
        "unconditional", "nontrivial",
    ])?;
    for (s, rep) in rows {
        let p = rep.params;
        w.serialize((
            p.q,
            s,
            p.h,
            p.r,
            p.d,
            rep.theorem.tag(),
            rep.exponents.h,
            rep.exponents.q,
            rep.exponents.log,
            rep.bound,
            rep.saving(),
            rep.unconditional,
            rep.nontrivial,
        ))?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_deltas(args: &BoundsArgs, out: &mut Output) -> Outcome {
    let mut w = out.csv();
    w.write_record([
        "kappa",
        "d",
        "delta_chang",
        "delta_chang_refined",
        "delta_vin",
        "r_chang",
        "delta_chang_at_r",
        "r_vin",
        "delta_vin_at_r",
    ])?;
    for &kappa in &args.kappa {
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Failure::Invalid(format!("κ must be positive, got {kappa}")));
        }
        let d = args.d;
        let rc = optimal_r_chang(kappa, d);
        let rv = optimal_r_vin(kappa, d);
        w.serialize((
            kappa,
            d,
            delta_chang(kappa, d),
            delta_chang_refined(kappa, d),
            delta_vin(kappa, d),
            rc,
            delta_chang_at(kappa, d, rc),
            rv,
            delta_vin_at(kappa, d, rv).unwrap_or(f64::NAN),
        ))?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_verify(args: &VerifyArgs, common: &Common, out: &mut Output) -> Outcome {
    let ids: Vec<u8> = match args.criterion {
        Some(id) if criterion_ids().any(|c| c == id) => vec![id],
        Some(id) => return Err(Failure::Invalid(format!("unknown criterion {id}"))),
        None => criterion_ids().collect(),
    };
    let mut failed = Vec::new();
    for id in ids {
        let outcome = run_criterion(id, common.seed).expect("checked above");
        writeln!(out.out, "{outcome}")?;
        if !outcome.passed || !outcome.within_budget() {
            failed.push(id);
        }
    }
    out.out.flush()?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Acceptance(format!("failed criteria: {failed:?}")))
    }
}

/// Parameter sets checked when `grid` runs without arguments.
const GRID_DEFAULTS: [(usize, u32, u64, u64); 5] = [(1, 1, 2, 2), (1, 2, 2, 2), (2, 1, 3, 3), (2, 2, 3, 3), (2, 2, 3, 4)];

fn grid_tally(r: usize, d: u32, base: u64, tau: u64) -> Result<(u64, u64), Failure> {
    let len = 2 * r as u32;
    let total = tau
        .checked_pow(len)
        .filter(|&t| t <= 10_000_000)
        .ok_or(Failure::Core(Error::Guard { what: "grid tuples", work: u128::MAX, limit: 10_000_000 }))?;
    let mut passed = 0;
    for code in 0..total {
        let entries: Vec<u64> = (0..len).map(|k| code / tau.pow(k) % tau + 1).collect();
        let x = TupleAssignment::new(entries, tau)?;
        if xi_identity_check(&x, base, d)?.passed {
            passed += 1;
        }
    }
    Ok((passed, total))
}

fn cmd_grid(args: &GridArgs, out: &mut Output) -> Outcome {
    let sets: Vec<(usize, u32, u64, u64)> = match (args.r, args.d, args.base) {
        (Some(r), Some(d), Some(base)) => vec![(r, d, base, args.tau.unwrap_or(base))],
        _ => GRID_DEFAULTS.to_vec(),
    };
    let mut all_passed = true;
    for (r, d, base, tau) in sets {
        let (passed, total) = grid_tally(r, d, base, tau)?;
        let status = if passed == total { "PASS" } else { "FAIL" };
        all_passed &= passed == total;
        writeln!(out.out, "r={r} d={d} Q={base} tau={tau}: {status} {passed}/{total}")?;
    }
    out.out.flush()?;
    if all_passed {
        Ok(())
    } else {
        Err(Failure::Acceptance("vertex-sum identity failed".into()))
    }
}

fn cmd_pipeline(args: &PipelineArgs, out: &mut Output) -> Outcome {
    let q = args.q;
    let starts = if args.n.is_empty() { vec![0, (q / 3) as i64] } else { args.n.clone() };
    let mut rows = Vec::new();
    for &s in &args.h_exp {
        let h = h_of(q as f64, s)? as u64;
        let p = match args.p_param {
            Some(p) => p,
            None => choose_p(q, h, args.r, args.d)?,
        };
        for &n in &starts {
            let prof = count_profile(n, h, p, q)?;
            if !prof.hp_lt_q {
                out.reject(format!("HP = {} ≥ q = {q} at H={h}, P={p}", h as u128 * p as u128))?;
                continue;
            }
            rows.push(prof);
        }
    }
    let mut w = out.csv();
    w.write_record(["q", "H", "P", "N", "primes", "S1", "S2", "S2_over_HP", "max_abs_m"])?;
    for prof in rows {
        w.write_record([
            prof.q.to_string(),
            prof.h.to_string(),
            prof.p_param.to_string(),
            prof.n.to_string(),
            prof.primes.len().to_string(),
            prof.s1.to_string(),
            prof.s2.to_string(),
            prof.ratio().to_string(),
            prof.max_abs_m().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    if let Some(threads) = cli.common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Failure::Invalid(e.to_string()))?;
    }
    let mut out = Output::open(&cli.common)?;
    match &cli.command {
        Command::Charsum(a) => cmd_charsum(a, &cli.common, &mut out),
        Command::Jcount(a) => cmd_jcount(a, &mut out),
        Command::Bounds(a) => cmd_bounds(a, &mut out),
        Command::Verify(a) => cmd_verify(a, &cli.common, &mut out),
        Command::Grid(a) => cmd_grid(a, &mut out),
        Command::Pipeline(a) => cmd_pipeline(a, &mut out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}
