mod input;

use std::io::{self, Read, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use egz_core::egz::solve_general_with;
use egz_core::instance::{generate, Distribution, Mode};
use egz_core::modmath::{is_prime, next_prime_at_least};
use egz_core::solver::{
    solve_lemma2_dp, solve_lemma2_nlogn, solve_lemma2_practical, solve_lemma2_theoretical,
};
use egz_core::verify::{verify_egz, verify_lemma};
use egz_core::{Algorithm, Error};

use input::{ParseError, Tokens};

#[derive(Parser)]
#[command(
    name = "egz",
    version,
    about = "Zero-sum subsets and modular subset sums with certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Read an instance on stdin and print a solution.
    Solve(SolveArgs),
    /// Read an instance followed by a solution on stdin; exit 1 if invalid.
    Verify(ModeArg),
    /// Print a seeded random instance.
    Gen(GenArgs),
    /// Time solvers on generated lemma instances and print CSV.
    Bench(BenchArgs),
}

#[derive(Args)]
struct ModeArg {
    /// egz: `n` then 2n-1 integers. lemma: `p k` then p-1 nonzero residues.
    #[arg(long, default_value = "egz")]
    mode: Mode,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    mode: ModeArg,
    /// dp, nlogn, practical, theoretical or auto.
    #[arg(long, default_value = "auto")]
    algorithm: Algorithm,
    /// Let auto choose the theoretical pipeline for moduli of at least 2^20.
    #[arg(long)]
    allow_theoretical: bool,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    mode: ModeArg,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// uniform, few-distinct:D or adversarial-equal.
    #[arg(long = "dist", alias = "distribution", default_value = "uniform")]
    dist: Distribution,
}

#[derive(Args)]
struct BenchArgs {
    /// Requested sizes; each is rounded up to a prime.
    #[arg(long, value_delimiter = ',', default_value = "1009,10007")]
    sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "practical,nlogn")]
    algorithms: Vec<Algorithm>,
    /// Number of seeds, starting at `--seed`.
    #[arg(long, default_value_t = 3)]
    seeds: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    reps: u32,
    #[arg(long, default_value = "uniform")]
    dist: Distribution,
    #[arg(long)]
    allow_theoretical: bool,
}

enum Failure {
    Malformed(String),
    Rejected(String),
    Internal(String),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Malformed(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Malformed(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Malformed(format!("cannot read input: {e}"))
    }
}

struct Parsed {
    mode: Mode,
    modulus: usize,
    target: usize,
    values: Vec<i64>,
}

fn read_stdin() -> Result<String, Failure> {
    let mut text = String::new();
    io::stdin().read_to_string(&mut text)?;
    Ok(text)
}

/// Reads the instance header and values, validating them against the mode.
fn parse_instance(tokens: &mut Tokens<'_>, mode: Mode) -> Result<Parsed, ParseError> {
    match mode {
        Mode::Egz => {
            let (n, tok) = tokens.next::<usize>("n (a positive integer)")?;
            if n == 0 {
                return Err(tok.error("n must be at least 1"));
            }
            let mut values = Vec::with_capacity(2 * n - 1);
            for _ in 0..2 * n - 1 {
                values.push(tokens.next::<i64>("integer value")?.0);
            }
            Ok(Parsed {
                mode,
                modulus: n,
                target: 0,
                values,
            })
        }
        Mode::Lemma => {
            let (p, ptok) = tokens.next::<usize>("prime p")?;
            if !is_prime(p as u64) {
                return Err(ptok.error(format!("{p} is not prime")));
            }
            let (k, ktok) = tokens.next::<usize>("target k")?;
            if k >= p {
                return Err(ktok.error(format!("target {k} must be below {p}")));
            }
            let mut values = Vec::with_capacity(p - 1);
            for _ in 0..p - 1 {
                let (v, tok) = tokens.next::<i64>("integer value")?;
                let r = v.rem_euclid(p as i64);
                if r == 0 {
                    return Err(tok.error(format!("value {v} is zero modulo {p}")));
                }
                values.push(r);
            }
            Ok(Parsed {
                mode,
                modulus: p,
                target: k,
                values,
            })
        }
    }
}

fn lemma_solve(
    p: usize,
    values: &[usize],
    target: usize,
    algorithm: Algorithm,
    allow_theoretical: bool,
) -> Result<Vec<usize>, Error> {
    let r = match algorithm.resolve(p, allow_theoretical) {
        Algorithm::Dp => solve_lemma2_dp(p, values, target),
        Algorithm::NLogN => solve_lemma2_nlogn(p, values, target),
        Algorithm::Theoretical => solve_lemma2_theoretical(p, values, target),
        _ => solve_lemma2_practical(p, values, target),
    }?;
    Ok(r.indices)
}

fn selected_sum(values: &[i64], modulus: usize, indices: &[usize]) -> usize {
    let m = modulus as i64;
    indices
        .iter()
        .fold(0i64, |acc, &i| (acc + values[i].rem_euclid(m)) % m) as usize
}

fn cmd_solve(args: &SolveArgs) -> Result<(), Failure> {
    let text = read_stdin()?;
    let mut tokens = Tokens::new(&text);
    let inst = parse_instance(&mut tokens, args.mode.mode)?;
    tokens.finish()?;
    let indices = match inst.mode {
        Mode::Egz => solve_general_with(
            inst.modulus,
            &inst.values,
            args.algorithm,
            args.allow_theoretical,
        )?,
        Mode::Lemma => {
            let values: Vec<usize> = inst.values.iter().map(|&v| v as usize).collect();
            lemma_solve(
                inst.modulus,
                &values,
                inst.target,
                args.algorithm,
                args.allow_theoretical,
            )?
        }
    };
    let checksum = selected_sum(&inst.values, inst.modulus, &indices);
    if checksum != inst.target {
        return Err(Failure::Internal(format!(
            "solution sums to {checksum}, expected {}",
            inst.target
        )));
    }
    let line: Vec<String> = indices.iter().map(|i| (i + 1).to_string()).collect();
    let mut out = io::stdout().lock();
    writeln!(out, "{}\n{}\n{checksum}", indices.len(), line.join(" "))?;
    Ok(())
}

fn cmd_verify(args: &ModeArg) -> Result<(), Failure> {
    let text = read_stdin()?;
    let mut tokens = Tokens::new(&text);
    let inst = parse_instance(&mut tokens, args.mode)?;
    let (count, _) = tokens.next::<usize>("solution count")?;
    let mut indices = Vec::with_capacity(count.min(inst.values.len() + 1));
    for _ in 0..count {
        let (i, tok) = tokens.next::<usize>("1-based index")?;
        if i == 0 || i > inst.values.len() {
            return Err(Failure::Rejected(format!(
                "index out of range: {i} at line {}, column {} is not in [1, {}]",
                tok.line,
                tok.col,
                inst.values.len()
            )));
        }
        indices.push(i - 1);
    }
    let (claimed, _) = tokens.next::<u64>("checksum")?;
    tokens.finish()?;

    let verdict = match inst.mode {
        Mode::Egz => verify_egz(inst.modulus as u64, &inst.values, &indices),
        Mode::Lemma => verify_lemma(
            inst.modulus as u64,
            &inst.values,
            inst.target as u64,
            &indices,
        ),
    };
    verdict.map_err(|r| Failure::Rejected(reason_one_based(r)))?;
    let actual = selected_sum(&inst.values, inst.modulus, &indices) as u64;
    if claimed != actual {
        return Err(Failure::Rejected(format!(
            "sum mismatch: checksum line says {claimed}, selected values sum to {actual}"
        )));
    }
    Ok(())
}

/// Rejection reasons with indices shifted to the 1-based I/O convention.
fn reason_one_based(r: egz_core::verify::Rejection) -> String {
    use egz_core::verify::Rejection;
    match r {
        Rejection::DuplicateIndex(i) => format!("duplicate index: {}", i + 1),
        other => other.to_string(),
    }
}

fn cmd_gen(args: &GenArgs) -> Result<(), Failure> {
    if args.n == 0 {
        return Err(Failure::Malformed("--n must be at least 1".into()));
    }
    let inst = generate(args.mode.mode, args.n, args.seed, args.dist);
    io::stdout().lock().write_all(inst.to_text().as_bytes())?;
    Ok(())
}

fn cmd_bench(args: &BenchArgs) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    writeln!(out, "n,algorithm,seed,rep,micros,verified")?;
    let mut sizes: Vec<usize> = args
        .sizes
        .iter()
        .map(|&s| next_prime_at_least(s.max(2) as u64) as usize)
        .collect();
    sizes.sort_unstable();
    sizes.dedup();
    for &p in &sizes {
        for &algorithm in &args.algorithms {
            for seed in args.seed..args.seed + args.seeds {
                let inst = generate(Mode::Lemma, p, seed, args.dist);
                let values: Vec<usize> = inst.values.iter().map(|&v| v as usize).collect();
                for rep in 0..args.reps {
                    let start = Instant::now();
                    let indices =
                        lemma_solve(p, &values, inst.target, algorithm, args.allow_theoretical)?;
                    let micros = start.elapsed().as_micros();
                    let verified =
                        verify_lemma(p as u64, &inst.values, inst.target as u64, &indices).is_ok();
                    writeln!(out, "{p},{algorithm},{seed},{rep},{micros},{verified}")?;
                }
            }
        }
    }
    Ok(())
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
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Rejected(why)) => {
            eprintln!("invalid solution: {why}");
            ExitCode::from(1)
        }
        Err(Failure::Malformed(why)) => {
            eprintln!("error: {why}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(why)) => {
            eprintln!("internal error: {why}");
            ExitCode::from(3)
        }
    }
}
