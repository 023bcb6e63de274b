//! Command-line front end. `run` takes its writers as arguments so that the
//! binary and the tests drive the same code.
//!
//! Exit codes: 0 success, 1 internal error, 2 no result within budget,
//! 3 rejected input, 4 resource guard tripped.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::collisions::{
    binomial_sigma, birthday_experiment, order_to_factor, run_attempt, zeta, zeta_gcd_experiment,
    AttemptOutcome, CollisionConfig, Event, EventLog,
};
use crate::diffusion::{
    heat_series, loglog_slope, required_steps, round_inverse, stable_from, truncation_errors, write_csv,
    RcNetwork, DEFAULT_STATE_GUARD,
};
use crate::error::Error;
use crate::factor::{factor, pre_check, Classification, FactorConfig, SourceKind};
use crate::ntheory::{mod_pow_u, order_oracle, FactorBudget, Modulus};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_EXHAUSTED: i32 = 2;
pub const EXIT_REJECTED: i32 = 3;
pub const EXIT_GUARD: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "diffactor", version, about = "Order finding by diffusion and word collisions, and the factoring loop built on it")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Source {
    Collision,
    Diffusion,
    Oracle,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Output::Text)]
    pub output: Output,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Leave out wall-clock timing so output is reproducible byte for byte.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CollisionArgs {
    #[arg(long, default_value_t = 2000)]
    pub word_length: usize,
    #[arg(long, default_value_t = 120_000)]
    pub max_samples: usize,
    #[arg(long, default_value_t = 8)]
    pub stable_hits: usize,
    /// Try every reduced loop difference as an order multiple right away.
    #[arg(long)]
    pub aggressive: bool,
    /// Independent sampling streams; results depend on this count.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
}

impl CollisionArgs {
    fn config(&self) -> CollisionConfig {
        CollisionConfig {
            word_length: self.word_length,
            max_samples: self.max_samples,
            stable_hits: self.stable_hits,
            aggressive: self.aggressive,
            workers: self.workers,
            budget: FactorBudget::default(),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Factor N with the randomized order-finding reduction.
    Factor {
        n: BigUint,
        #[arg(long, default_value_t = 80)]
        max_attempts: usize,
        #[arg(long, value_enum, default_value_t = Source::Collision)]
        source: Source,
        /// Vertex cap for the diffusion source.
        #[arg(long, default_value_t = DEFAULT_STATE_GUARD)]
        max_states: usize,
        #[command(flatten)]
        collision: CollisionArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Recover ord_N(b) from the heat kernel at the identity.
    OrderDiffusion {
        n: BigUint,
        b: BigUint,
        /// Number of walk steps; defaults to the guaranteed budget n₀.
        #[arg(long)]
        steps: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_STATE_GUARD)]
        max_states: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Recover ord_N(a) from word collisions, as one logged attempt.
    OrderCollision {
        n: BigUint,
        a: BigUint,
        #[command(flatten)]
        collision: CollisionArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Colliding pairs among T independent walk endpoints against C(T,2)·s₂.
    StatsBirthday {
        n: BigUint,
        b: BigUint,
        #[arg(long, default_value_t = 40)]
        samples: u64,
        #[arg(long, default_value_t = 2000)]
        reps: usize,
        /// Walk length; defaults to n₀.
        #[arg(long)]
        steps: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Frequency of coprime s-tuples against 1/ζ(s).
    StatsZeta {
        #[arg(long = "s", default_values_t = vec![2usize, 3, 4])]
        s: Vec<usize>,
        #[arg(long, default_value_t = 1_000_000)]
        q: u64,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[command(flatten)]
        common: Common,
    },
    /// First-order truncation error of the sampled RC triangle.
    RcDemo {
        #[arg(long, default_value_t = 1.0)]
        resistance_kohm: f64,
        #[arg(long, default_value_t = 1.0)]
        capacitance_uf: f64,
        /// γ = Δt/C values (Δt in ms).
        #[arg(long, value_delimiter = ',', default_values_t = vec![1e-1, 1e-2, 1e-3, 1e-4])]
        gammas: Vec<f64>,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Factor { common, .. }
            | Command::OrderDiffusion { common, .. }
            | Command::OrderCollision { common, .. }
            | Command::StatsBirthday { common, .. }
            | Command::StatsZeta { common, .. }
            | Command::RcDemo { common, .. } => common,
        }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::StateGuardExceeded(_) => EXIT_GUARD,
        Error::AttemptsExhausted(_)
        | Error::NoStabilization { .. }
        | Error::RoundingUnresolved { .. }
        | Error::VerificationFailed { .. } => EXIT_EXHAUSTED,
        Error::InvalidInput(_)
        | Error::ModulusTooSmall(_)
        | Error::NonInvertible { .. }
        | Error::OutOfOracleRange(_) => EXIT_REJECTED,
        Error::ContractViolation(_) | Error::FactorizationStall(_) | Error::WitnessNotFound { .. } => EXIT_INTERNAL,
    }
}

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_REJECTED } else { EXIT_OK };
        }
    };
    let common = cli.command.common().clone();
    let mut file;
    let sink: &mut dyn Write = match &common.out {
        Some(path) => match File::create(path) {
            Ok(f) => {
                file = BufWriter::new(f);
                &mut file
            }
            Err(e) => {
                let _ = writeln!(stderr, "cannot open {}: {e}", path.display());
                return EXIT_REJECTED;
            }
        },
        None => stdout,
    };
    let code = match execute(&cli.command, &common, sink, stderr) {
        Ok(code) => code,
        Err(Failure::Io(e)) => {
            let _ = writeln!(stderr, "write failed: {e}");
            EXIT_INTERNAL
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    };
    if sink.flush().is_err() {
        return EXIT_INTERNAL;
    }
    code
}

enum Failure {
    Io(io::Error),
    Domain(Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome = std::result::Result<i32, Failure>;

fn execute(command: &Command, common: &Common, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match command {
        Command::Factor {
            n,
            max_attempts,
            source,
            max_states,
            collision,
            ..
        } => cmd_factor(n, *max_attempts, *source, *max_states, collision, common, out, err),
        Command::OrderDiffusion { n, b, steps, max_states, .. } => {
            cmd_order_diffusion(n, b, *steps, *max_states, common, out, err)
        }
        Command::OrderCollision { n, a, collision, .. } => cmd_order_collision(n, a, collision, common, out, err),
        Command::StatsBirthday {
            n,
            b,
            samples,
            reps,
            steps,
            ..
        } => cmd_stats_birthday(n, b, *samples, *reps, *steps, common, out),
        Command::StatsZeta { s, q, trials, .. } => cmd_stats_zeta(s, *q, *trials, common, out),
        Command::RcDemo {
            resistance_kohm,
            capacitance_uf,
            gammas,
            ..
        } => cmd_rc_demo(*resistance_kohm, *capacitance_uf, gammas, common, out),
    }
}

fn write_json(out: &mut dyn Write, value: &serde_json::Value) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

#[allow(clippy::too_many_arguments)]
fn cmd_factor(
    n: &BigUint,
    max_attempts: usize,
    source: Source,
    max_states: usize,
    collision: &CollisionArgs,
    common: &Common,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let class = pre_check(n);
    if class != Classification::Composite {
        writeln!(err, "rejected: {n} is {class}")?;
        return Ok(EXIT_REJECTED);
    }
    let config = FactorConfig {
        source: match source {
            Source::Collision => SourceKind::Collision,
            Source::Diffusion => SourceKind::Diffusion,
            Source::Oracle => SourceKind::Oracle,
        },
        max_attempts,
        seed: common.seed,
        collision: collision.config(),
        state_guard: max_states,
    };
    config.collision.validate()?;
    let text = common.output == Output::Text;
    let mut write_error = None;
    let result = {
        let mut log = EventLog::new().with_timing(!common.no_timing);
        if text {
            log = log.with_echo(|line| {
                if let Err(e) = writeln!(out, "{line}") {
                    write_error.get_or_insert(e);
                }
            });
        }
        let result = factor(n, &config, &mut log);
        match common.output {
            Output::Text => {}
            Output::Json => {
                let report = log.to_json(n);
                drop(log);
                write_json(out, &report)?;
            }
            Output::Csv => {
                let mut buf = Vec::new();
                log.write_collision_csv(&mut buf)?;
                drop(log);
                out.write_all(&buf)?;
            }
        }
        result
    };
    if let Some(e) = write_error {
        return Err(e.into());
    }
    match result {
        Ok(_) => Ok(EXIT_OK),
        Err(e @ Error::AttemptsExhausted(_)) => {
            writeln!(err, "{e}")?;
            Ok(EXIT_EXHAUSTED)
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_order_diffusion(
    n: &BigUint,
    b: &BigUint,
    steps: Option<u64>,
    guard: usize,
    common: &Common,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let modulus = Modulus::new(n.clone())?;
    let steps = steps.unwrap_or_else(|| required_steps(&modulus));
    let rows = heat_series(&modulus, b, steps, guard)?;
    let last = *rows.last().expect("series includes n = 0");
    let order = round_inverse(last.p_e, steps)?;
    let verified = mod_pow_u(b, &BigUint::from(order), &modulus) == BigUint::from(1u32);
    let stable = stable_from(&rows, order);
    let stable_text = stable.map_or_else(|| "never".to_string(), |s| s.to_string());
    let summary = format!("order r = {order} at n = {steps}, stable from n = {stable_text}");
    match common.output {
        Output::Csv => {
            write_csv(&rows, &mut *out)?;
            writeln!(err, "{summary}")?;
        }
        Output::Text => {
            writeln!(out, "N = {n}, b = {b}, M = {}, n0 = {}", modulus.dyadic_bound(), required_steps(&modulus))?;
            writeln!(out, "p_n(e) = {}, 1/p_n(e) = {}", last.p_e, last.inv_p_e)?;
            writeln!(out, "{summary}")?;
        }
        Output::Json => write_json(
            out,
            &json!({
                "n": n.to_string(),
                "b": b.to_string(),
                "steps": steps,
                "p_e": last.p_e,
                "inv_p_e": last.inv_p_e,
                "order": order,
                "stable_from": stable,
                "verified": verified,
            }),
        )?,
    }
    if !verified {
        writeln!(err, "b^{order} is not 1 mod {n}; more steps are needed")?;
        return Ok(EXIT_EXHAUSTED);
    }
    Ok(EXIT_OK)
}

fn cmd_order_collision(
    n: &BigUint,
    a: &BigUint,
    collision: &CollisionArgs,
    common: &Common,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let modulus = Modulus::new(n.clone())?;
    let config = collision.config();
    let text = common.output == Output::Text;
    let mut write_error = None;
    let (outcome, report) = {
        let mut log = EventLog::new();
        if text {
            log = log.with_echo(|line| {
                if let Err(e) = writeln!(out, "{line}") {
                    write_error.get_or_insert(e);
                }
            });
        }
        log.push(Event::Attempt { attempt: 1, a: a.clone() });
        let outcome = run_attempt(a, &modulus, &config, common.seed, &mut log)?;
        let mut csv = Vec::new();
        log.write_collision_csv(&mut csv)?;
        (outcome, (log.to_json(n), csv))
    };
    if let Some(e) = write_error {
        return Err(e.into());
    }
    let (order, split) = match &outcome {
        AttemptOutcome::Order { r, .. } => (Some(r.clone()), order_to_factor(a, r, &modulus)),
        AttemptOutcome::Factor { d1, d2, .. } => (None, Some((d1.clone(), d2.clone()))),
        AttemptOutcome::NoStabilization { .. } => (None, None),
    };
    let (mut report, csv) = report;
    match common.output {
        Output::Text => {
            if let (Some(_), Some((d1, d2))) = (&order, &split) {
                writeln!(out, "  gcd(a^(r/2) - 1, N) = {d1}, gcd(a^(r/2) + 1, N) = {d2}")?;
            }
        }
        Output::Json => {
            report["order"] = json!(order.as_ref().map(|r| r.to_string()));
            report["split"] = json!(split.as_ref().map(|(x, y)| [x.to_string(), y.to_string()]));
            write_json(out, &report)?;
        }
        Output::Csv => out.write_all(&csv)?,
    }
    if let AttemptOutcome::NoStabilization { samples, collisions } = outcome {
        writeln!(err, "running gcd did not stabilize ({samples} samples, {collisions} collisions)")?;
        return Ok(EXIT_EXHAUSTED);
    }
    Ok(EXIT_OK)
}

fn cmd_stats_birthday(
    n: &BigUint,
    b: &BigUint,
    samples: u64,
    reps: usize,
    steps: Option<u64>,
    common: &Common,
    out: &mut dyn Write,
) -> Outcome {
    let modulus = Modulus::new(n.clone())?;
    let order = order_oracle(b, &modulus)?;
    let steps = steps.unwrap_or_else(|| required_steps(&modulus));
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let report = birthday_experiment(&modulus, b, order, steps, samples, reps, &mut rng)?;
    let ratio = report.ratio_to_uniform();
    match common.output {
        Output::Text => {
            writeln!(out, "N = {n}, b = {b}, r = {order}, t = {steps}, T = {samples}, reps = {reps}")?;
            writeln!(out, "s2(t)                  {:.6}", report.stats.s2)?;
            writeln!(out, "observed mean pairs    {:.4}", report.mean_pairs)?;
            writeln!(out, "C(T,2) * s2(t)         {:.4}", report.stats.expected_pairs)?;
            writeln!(out, "T(T-1)/(2r)            {:.4}", report.expected_uniform)?;
            writeln!(out, "observed / uniform     {ratio:.4}")?;
        }
        Output::Csv => {
            writeln!(out, "rep,pairs")?;
            for (i, c) in report.pair_counts.iter().enumerate() {
                writeln!(out, "{i},{c}")?;
            }
        }
        Output::Json => write_json(
            out,
            &json!({
                "n": n.to_string(),
                "b": b.to_string(),
                "order": order,
                "steps": steps,
                "samples": samples,
                "reps": reps,
                "s2": report.stats.s2,
                "mean_pairs": report.mean_pairs,
                "expected_pairs": report.stats.expected_pairs,
                "expected_uniform": report.expected_uniform,
                "ratio": ratio,
            }),
        )?,
    }
    Ok(EXIT_OK)
}

fn cmd_stats_zeta(s_values: &[usize], q: u64, trials: u64, common: &Common, out: &mut dyn Write) -> Outcome {
    if s_values.iter().any(|&s| s < 2) || q < 2 || trials == 0 {
        return Err(Error::InvalidInput("need s ≥ 2, Q ≥ 2 and at least one trial".into()).into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let rows: Vec<(usize, f64, f64, f64)> = s_values
        .iter()
        .map(|&s| {
            let freq = zeta_gcd_experiment(s, q, trials, &mut rng);
            let expected = 1.0 / zeta(s as f64);
            (s, freq, expected, binomial_sigma(expected, trials))
        })
        .collect();
    match common.output {
        Output::Text => {
            writeln!(out, "Q = {q}, trials = {trials}")?;
            writeln!(out, "{:>3}  {:>9}  {:>9}  {:>9}  {:>7}", "s", "observed", "1/zeta", "sigma", "z")?;
            for (s, f, e, sd) in &rows {
                writeln!(out, "{s:>3}  {f:>9.5}  {e:>9.5}  {sd:>9.5}  {:>7.2}", (f - e) / sd)?;
            }
        }
        Output::Csv => {
            writeln!(out, "s,observed,expected,sigma")?;
            for (s, f, e, sd) in &rows {
                writeln!(out, "{s},{f},{e},{sd}")?;
            }
        }
        Output::Json => {
            let items: Vec<_> = rows
                .iter()
                .map(|(s, f, e, sd)| json!({"s": s, "observed": f, "expected": e, "sigma": sd}))
                .collect();
            write_json(out, &json!({"q": q, "trials": trials, "rows": items}))?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_rc_demo(resistance: f64, capacitance: f64, gammas: &[f64], common: &Common, out: &mut dyn Write) -> Outcome {
    if resistance.is_nan() || resistance <= 0.0 || gammas.iter().any(|g| g.is_nan() || *g <= 0.0) || gammas.len() < 2 {
        return Err(Error::InvalidInput("need R > 0 and at least two positive γ values".into()).into());
    }
    let net = RcNetwork::triangle(1.0 / resistance, capacitance)?;
    let errors = truncation_errors(&net, gammas)?;
    let slope = loglog_slope(gammas, &errors);
    match common.output {
        Output::Text => {
            writeln!(out, "triangle: R = {resistance} kOhm, C = {capacitance} uF")?;
            writeln!(out, "{:>10}  {:>14}", "gamma", "error")?;
            for (g, e) in gammas.iter().zip(&errors) {
                writeln!(out, "{g:>10.1e}  {e:>14.6e}")?;
            }
            writeln!(out, "log-log slope = {slope:.4}")?;
        }
        Output::Csv => {
            writeln!(out, "gamma,error")?;
            for (g, e) in gammas.iter().zip(&errors) {
                writeln!(out, "{g},{e}")?;
            }
        }
        Output::Json => write_json(out, &json!({"gammas": gammas, "errors": errors, "slope": slope}))?,
    }
    Ok(EXIT_OK)
}
