//! `gsinterp`: generate, solve, verify and benchmark interpolation instances.
//!
//! Exit codes: 0 solution found (or verified), 1 input error or rejected
//! solution, 2 no solution exists, 3 the randomized solver gave up.

mod format;
mod gen;
mod problem;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gsinterp::solver::{Backend, SolveOptions};
use gsinterp::struct_solve::{SolveOutcome, StructuredOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use format::{
    dispatch, instance_hash, parse_solution, render_solution, CliResult, FieldVisitor, RawApprox, RawInstance,
    TextField,
};
use gen::{generate, GenSpec};
use problem::{Mode, Problem};

#[derive(Parser)]
#[command(
    name = "gsinterp",
    version,
    about = "Interpolation with multiplicities over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file and write a solution file.
    Solve(SolveArgs),
    /// Check a solution file against an instance file.
    Verify(VerifyArgs),
    /// Write a random instance.
    Gen(GenArgs),
    /// Time backends on generated instances; prints CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Hankel,
    Toeplitz,
    Dense,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Hankel => Backend::Hankel,
            BackendArg::Toeplitz => Backend::Toeplitz,
            BackendArg::Dense => Backend::Dense,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum, default_value = "gs")]
    mode: Mode,
    #[arg(long, value_enum, default_value = "toeplitz")]
    backend: BackendArg,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    max_retries: usize,
    #[arg(long = "in")]
    input: PathBuf,
    /// Defaults to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "gs")]
    mode: Mode,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    solution: PathBuf,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, default_value_t = 1)]
    ell: usize,
    #[arg(long, default_value_t = 1)]
    k: i64,
    #[arg(long, default_value_t = 1)]
    s: usize,
    /// A number, or `auto` for the smallest bound with more unknowns than equations.
    #[arg(long, default_value = "auto")]
    b: String,
    #[arg(long, value_enum, default_value = "gs")]
    mode: Mode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "64,128,256,512")]
    sizes: Vec<usize>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "hankel,toeplitz,dense")]
    backend: Vec<BackendArg>,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, default_value_t = 2)]
    ell: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

/// Prime below 2^32 large enough for the random sampling at bench sizes.
const BENCH_PRIME: u64 = 4_294_967_291;

enum Verdict {
    Solution(String),
    NoSolution(String),
    Failure(usize),
}

fn read(path: &PathBuf) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

enum Source {
    Interp(RawInstance),
    Approx(RawApprox),
}

impl Source {
    fn parse(mode: Mode, text: &str) -> CliResult<Self> {
        Ok(match mode {
            Mode::RawApprox => Source::Approx(RawApprox::parse(text)?),
            _ => Source::Interp(RawInstance::parse(text)?),
        })
    }

    fn field_spec(&self) -> &format::FieldSpec {
        match self {
            Source::Interp(r) => &r.field,
            Source::Approx(r) => &r.field,
        }
    }

    fn problem<F: TextField>(&self, field: F, mode: Mode) -> CliResult<Problem<F>> {
        match self {
            Source::Interp(r) => Problem::from_raw(field, mode, r),
            Source::Approx(r) => Problem::from_approx(field, r),
        }
    }
}

struct SolveJob<'a> {
    source: &'a Source,
    mode: Mode,
    opts: SolveOptions,
    seed: u64,
    hash: String,
}

impl FieldVisitor for SolveJob<'_> {
    type Out = CliResult<Verdict>;

    fn visit<F: TextField>(self, field: F) -> CliResult<Verdict> {
        let problem = self.source.problem(field, self.mode)?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        Ok(match problem.solve(&mut rng, &self.opts)? {
            SolveOutcome::Solution(q) => {
                if !problem.verify(&q) {
                    return Err("internal error: solution failed verification".into());
                }
                Verdict::Solution(render_solution(
                    problem.field(),
                    &self.hash,
                    self.opts.backend.name(),
                    &q,
                ))
            }
            SolveOutcome::NoSolution(reason) => Verdict::NoSolution(reason.to_string()),
            SolveOutcome::Failure { attempts } => Verdict::Failure(attempts),
        })
    }
}

fn cmd_solve(args: &SolveArgs) -> CliResult<u8> {
    let text = read(&args.input)?;
    let source = Source::parse(args.mode, &text)?;
    let job = SolveJob {
        source: &source,
        mode: args.mode,
        opts: SolveOptions {
            backend: args.backend.into(),
            structured: StructuredOptions {
                max_retries: args.max_retries,
                ..Default::default()
            },
            extend_small_fields: true,
        },
        seed: args.seed,
        hash: instance_hash(&text),
    };
    Ok(match dispatch(source.field_spec(), job)?? {
        Verdict::Solution(out) => {
            write_or_print(&args.out, &out)?;
            0
        }
        Verdict::NoSolution(reason) => {
            println!("NO_SOLUTION {reason}");
            2
        }
        Verdict::Failure(attempts) => {
            println!("FAILURE {attempts}");
            3
        }
    })
}

struct VerifyJob<'a> {
    source: &'a Source,
    mode: Mode,
    solution: &'a str,
    hash: String,
}

impl FieldVisitor for VerifyJob<'_> {
    type Out = CliResult<()>;

    fn visit<F: TextField>(self, field: F) -> CliResult<()> {
        let problem = self.source.problem(field, self.mode)?;
        let parsed = parse_solution(problem.field(), problem.s(), self.solution)?;
        if parsed.hash.as_deref().is_some_and(|h| h != self.hash) {
            return Err("solution was produced for a different instance".into());
        }
        if problem.verify(&parsed.q) {
            Ok(())
        } else {
            Err("solution does not satisfy the instance".into())
        }
    }
}

fn cmd_verify(args: &VerifyArgs) -> CliResult<u8> {
    let text = read(&args.input)?;
    let solution = read(&args.solution)?;
    let source = Source::parse(args.mode, &text)?;
    let job = VerifyJob {
        source: &source,
        mode: args.mode,
        solution: &solution,
        hash: instance_hash(&text),
    };
    dispatch(source.field_spec(), job)??;
    println!("OK");
    Ok(0)
}

fn cmd_gen(args: &GenArgs) -> CliResult<u8> {
    let b = match args.b.as_str() {
        "auto" => None,
        v => Some(v.parse().map_err(|_| format!("invalid --b `{v}`"))?),
    };
    let raw = generate(&GenSpec {
        p: args.p,
        n: args.n,
        m: args.m,
        ell: args.ell,
        k: args.k,
        s: args.s,
        b,
        mode: args.mode,
        seed: args.seed,
    })?;
    write_or_print(&args.out, &raw.render())?;
    Ok(0)
}

struct BenchJob<'a> {
    source: &'a Source,
    backend: Backend,
    reps: usize,
    seed: u64,
}

impl FieldVisitor for BenchJob<'_> {
    type Out = CliResult<(f64, &'static str)>;

    fn visit<F: TextField>(self, field: F) -> CliResult<(f64, &'static str)> {
        let problem = self.source.problem(field, Mode::Gs)?;
        let opts = SolveOptions::with_backend(self.backend);
        let mut times = Vec::with_capacity(self.reps);
        let mut verdicts = Vec::with_capacity(self.reps);
        for rep in 0..self.reps {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(rep as u64));
            let start = Instant::now();
            let out = problem.solve(&mut rng, &opts)?;
            times.push(start.elapsed().as_secs_f64());
            verdicts.push(match out {
                SolveOutcome::Solution(q) if problem.verify(&q) => "solution",
                SolveOutcome::Solution(_) => "invalid",
                SolveOutcome::NoSolution(_) => "no_solution",
                SolveOutcome::Failure { .. } => "failure",
            });
        }
        times.sort_by(f64::total_cmp);
        let verdict = if verdicts.iter().all(|v| *v == verdicts[0]) {
            verdicts[0]
        } else {
            "mixed"
        };
        Ok((times[times.len() / 2], verdict))
    }
}

fn cmd_bench(args: &BenchArgs) -> CliResult<u8> {
    if args.reps == 0 {
        return Err("--reps must be positive".into());
    }
    println!("size,backend,reps,median_seconds,verdict");
    for &n in &args.sizes {
        let raw = generate(&GenSpec {
            p: BENCH_PRIME,
            n,
            m: args.m,
            ell: args.ell,
            k: (n as i64 / 4).max(1),
            s: 1,
            b: None,
            mode: Mode::Gs,
            seed: args.seed,
        })?;
        let source = Source::Interp(raw);
        for &backend in &args.backend {
            let backend = Backend::from(backend);
            let job = BenchJob {
                source: &source,
                backend,
                reps: args.reps,
                seed: args.seed,
            };
            let (median, verdict) = dispatch(source.field_spec(), job)??;
            println!("{n},{backend},{},{median:.6},{verdict}", args.reps);
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
