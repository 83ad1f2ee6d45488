use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use gbg_core::board::{verify_certificate, Configuration};
use gbg_core::format::{parse_certificate, parse_point_set, serialize_certificate, serialize_point_set};
use gbg_core::geometry::{check_incidence_inequalities, IncidenceStructure, InequalityOutcome};
use gbg_core::instances::{generate_with_cap, GeneratorSpec, InstanceKind, WeightMode};
use gbg_core::oracle::{exact_f, exact_f_board, switch_code, DEFAULT_CAP};
use gbg_core::solvers::{solve, solve_near_perfect, NearPerfectParams, SolverKind};
use gbg_core::Error;

#[derive(Parser)]
#[command(name = "gbg", version, about = "Geometric switching game: solvers, oracle and tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance in the point-set format.
    Gen(GenArgs),
    /// Run a solver and write its certificate.
    Solve(SolveArgs),
    /// Exact optimum from the given weights and over all weights.
    Oracle(OracleArgs),
    /// Replay a certificate and accept or reject it.
    Verify(InOnly),
    /// Line-size profile and incidence inequalities.
    Profile(InOnly),
    /// Time solvers over a sweep of generated instances (tab-separated).
    Bench(BenchArgs),
    /// Start the HTTP service.
    Serve(ServeArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Whole spec as `key=value` pairs; overrides the other generator flags.
    #[arg(long)]
    spec: Option<String>,
    #[arg(long, default_value = "grid")]
    kind: InstanceKind,
    #[arg(long, default_value_t = 0)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    rows: usize,
    #[arg(long, default_value_t = 0)]
    cols: usize,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "random")]
    weights: WeightMode,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// Point-set file; standard input when omitted.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Certificate destination; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "auto")]
    solver: SolverKind,
    /// Near-perfect accuracy parameter.
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Largest board, and largest enumeration exponent, the oracle accepts.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Write a certificate reaching the optimum here.
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Args)]
struct InOnly {
    #[arg(long = "in")]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated instance kinds.
    #[arg(long, value_delimiter = ',', default_value = "near_pencil,grid,random_gp,cubic,circle_plus_line,collinear_plus_k")]
    kinds: Vec<InstanceKind>,
    /// Comma-separated target sizes; grids use the nearest square.
    #[arg(long, value_delimiter = ',', default_value = "10,20,40")]
    sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "third,cubic,near-perfect,balance")]
    solvers: Vec<SolverKind>,
    /// Random instances per (kind, size).
    #[arg(long, default_value_t = 3)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1")]
    host: String,
    #[arg(long, default_value_t = 8080)]
    port: u16,
    #[arg(long, default_value_t = 256)]
    max_sessions: usize,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
}

/// A failed invocation and its exit status.
struct Fail {
    code: u8,
    message: String,
}

const REJECT: u8 = 1;
const BAD_INPUT: u8 = 2;
const CAP_EXCEEDED: u8 = 3;
const INTERNAL: u8 = 4;

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded { .. } => CAP_EXCEEDED,
            Error::Internal(_) | Error::NonOrdinaryEdge { .. } => INTERNAL,
            _ => BAD_INPUT,
        };
        Fail {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Fail {
    fn from(e: io::Error) -> Self {
        Fail {
            code: BAD_INPUT,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<(), Fail>;

fn read_input(path: &Option<PathBuf>) -> Result<String, Fail> {
    let mut text = String::new();
    match path {
        Some(p) => {
            text = std::fs::read_to_string(p).map_err(|e| Fail {
                code: BAD_INPUT,
                message: format!("{}: {e}", p.display()),
            })?
        }
        None => {
            io::stdin().read_to_string(&mut text)?;
        }
    }
    Ok(text)
}

fn write_output(path: &Option<PathBuf>, text: &str) -> Outcome {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn read_board(path: &Option<PathBuf>) -> Result<Configuration, Fail> {
    let (points, weights) = parse_point_set(&read_input(path)?)?;
    Ok(Configuration::new(points, weights)?)
}

fn gen(args: GenArgs) -> Outcome {
    let spec = match args.spec {
        Some(s) => s.parse::<GeneratorSpec>()?,
        None => GeneratorSpec {
            kind: args.kind,
            n: if args.kind == InstanceKind::Grid { args.rows * args.cols } else { args.n },
            rows: args.rows,
            cols: args.cols,
            k: args.k,
            seed: args.seed,
            weight_mode: args.weights,
        },
    };
    let inst = generate_with_cap(&spec, args.cap)?;
    let text = format!("# {spec}\n{}", serialize_point_set(&inst.points, &inst.weights));
    write_output(&args.out, &text)
}

fn solve_cmd(args: SolveArgs) -> Outcome {
    let board = read_board(&args.input)?;
    let out = match (args.solver, args.epsilon) {
        (SolverKind::NearPerfect | SolverKind::Auto, Some(eps)) => {
            solve_near_perfect(&board, &NearPerfectParams::from_epsilon(eps)?)?
        }
        (kind, _) => solve(&board, kind)?,
    };
    let cert = serialize_certificate(board.incidence().points(), &out.certificate);
    write_output(&args.out, &cert)?;
    println!(
        "n={} final={} switches={} bound={}",
        board.n(),
        out.final_discrepancy,
        out.switch_count(),
        out.certificate.kind
    );
    Ok(())
}

fn oracle_cmd(args: OracleArgs) -> Outcome {
    let board = read_board(&args.input)?;
    let n = board.n();
    if n > args.cap {
        return Err(Error::CapExceeded { n, rank: 0, cap: args.cap }.into());
    }
    let code = switch_code(board.incidence())?;
    let result = exact_f(&code, board.weights(), args.cap)?;
    println!("F={}", result.value);
    match exact_f_board(&code, args.cap) {
        Ok(b) => println!("F_board={} covering_radius={}", b.value, b.covering_radius),
        Err(Error::CapExceeded { .. }) => println!("F_board=cap_exceeded"),
        Err(e) => return Err(e.into()),
    }
    println!("rank={}", code.rank);
    if let Some(path) = args.witness {
        let mut replay = board.clone();
        for &li in &result.witness {
            replay.switch_index(li);
        }
        let cert = gbg_core::board::SwitchCertificate {
            initial_weights: board.weights().to_vec(),
            switches: replay.switch_log(),
            claimed_discrepancy: result.value,
            kind: gbg_core::board::BoundKind::Third,
        };
        std::fs::write(path, serialize_certificate(board.incidence().points(), &cert))?;
    }
    Ok(())
}

fn verify_cmd(args: InOnly) -> Outcome {
    let (points, cert) = parse_certificate(&read_input(&args.input)?)?;
    let inc = IncidenceStructure::new(points)?;
    let result = verify_certificate(&inc, &cert);
    if result.accepted() {
        println!(
            "accept final={} switches={} bound={}",
            result.final_discrepancy.unwrap_or_default(),
            cert.switches.len(),
            cert.kind
        );
        return Ok(());
    }
    let reasons: Vec<String> = result.failures.iter().map(|f| f.to_string()).collect();
    println!("reject");
    for r in &reasons {
        println!("  {r}");
    }
    Err(Fail {
        code: REJECT,
        message: reasons.join("; "),
    })
}

fn outcome_text(o: &InequalityOutcome) -> String {
    match o {
        InequalityOutcome::NotApplicable => "not applicable".into(),
        InequalityOutcome::Holds { lhs, rhs } => format!("holds lhs={lhs} rhs={rhs}"),
        InequalityOutcome::Violated { lhs, rhs } => format!("VIOLATED lhs={lhs} rhs={rhs}"),
    }
}

fn profile_cmd(args: InOnly) -> Outcome {
    let board = read_board(&args.input)?;
    let inc = board.incidence();
    let profile = inc.profile()?;
    let mut out = String::new();
    writeln!(out, "n={} lines={}", profile.n, profile.line_count()).unwrap();
    writeln!(out, "k\tt_k").unwrap();
    for (k, t) in &profile.t {
        writeln!(out, "{k}\t{t}").unwrap();
    }
    let report = check_incidence_inequalities(&profile);
    writeln!(out, "max(t2,t3) >= n-1: {}", outcome_text(&report.erdos_purdy)).unwrap();
    writeln!(out, "4t2 + 3t3 >= 4n + 4 sum (2k-9) t_k: {}", outcome_text(&report.hirzebruch)).unwrap();
    writeln!(out, "heavy_lines={}", inc.heavy_lines(3).len()).unwrap();
    print!("{out}");
    if report.has_violation() {
        return Err(Fail {
            code: INTERNAL,
            message: "incidence inequality violated".into(),
        });
    }
    Ok(())
}

pub const BENCH_HEADER: &str = "kind\tn\tseed\tsolver\tstatus\tfinal\tswitches\tbound\tmicros";

fn bench_spec(kind: InstanceKind, size: usize, seed: u64) -> GeneratorSpec {
    let spec = match kind {
        InstanceKind::Grid => {
            let side = ((size as f64).sqrt().round() as usize).max(2);
            GeneratorSpec::grid(side, side)
        }
        InstanceKind::CollinearPlusK => GeneratorSpec::new(kind, size).with_k((size / 3).max(1)),
        _ => GeneratorSpec::new(kind, size),
    };
    spec.with_seed(seed).with_weights(WeightMode::Random)
}

fn bench_cmd(args: BenchArgs) -> Outcome {
    let mut out = String::new();
    writeln!(out, "{BENCH_HEADER}").unwrap();
    for &kind in &args.kinds {
        for &size in &args.sizes {
            for trial in 0..args.trials {
                let seed = args.seed.wrapping_add(trial);
                let spec = bench_spec(kind, size, seed);
                let inst = generate_with_cap(&spec, DEFAULT_CAP)?;
                let board = Configuration::new(inst.points, inst.weights)?;
                for &solver in &args.solvers {
                    let start = Instant::now();
                    let result = solve(&board, solver);
                    let micros = start.elapsed().as_micros();
                    let (status, fin, sw, bound) = match &result {
                        Ok(o) => (
                            "ok",
                            o.final_discrepancy.to_string(),
                            o.switch_count().to_string(),
                            o.certificate.kind.to_string(),
                        ),
                        Err(Error::Precondition(_) | Error::Collinear) => {
                            ("skipped", "-".into(), "-".into(), "-".into())
                        }
                        Err(_) => ("error", "-".into(), "-".into(), "-".into()),
                    };
                    writeln!(
                        out,
                        "{kind}\t{}\t{seed}\t{solver}\t{status}\t{fin}\t{sw}\t{bound}\t{micros}",
                        board.n()
                    )
                    .unwrap();
                }
            }
        }
    }
    write_output(&args.out, &out)
}

fn serve_cmd(args: ServeArgs) -> Outcome {
    let addr: SocketAddr = format!("{}:{}", args.host, args.port).parse().map_err(|e| Fail {
        code: BAD_INPUT,
        message: format!("bad address: {e}"),
    })?;
    let config = gbg_service::ServiceConfig {
        max_sessions: args.max_sessions,
        oracle_cap: args.cap,
    };
    let runtime = tokio::runtime::Runtime::new()?;
    eprintln!("listening on http://{addr}");
    runtime.block_on(gbg_service::serve(addr, config))?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Solve(a) => solve_cmd(a),
        Command::Oracle(a) => oracle_cmd(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Profile(a) => profile_cmd(a),
        Command::Bench(a) => bench_cmd(a),
        Command::Serve(a) => serve_cmd(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
