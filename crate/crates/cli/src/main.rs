use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use jcok::module_types::{ModuleType, TupleSpec};
use jcok::oracle::{consistency_report, exhaustive_scan, fmt_class, random_scan, space_size};
use jcok::padic::{parse_matrix, Modulus, XSet};
use jcok::random_models::{empirical_joint, mixed_moment_mc, EnsembleSpec, Estimate};
use jcok::realizability::{conjecture_member, member_cxm, MembershipReport};
use jcok::synthesis::{minimum_precision, realize_tuple, verify_realization, Verification};
use jcok::{group_lattice, Error};

#[derive(Parser)]
#[command(name = "jcok", version, about = "Joint cokernels of p-adic matrices under scalar shifts")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    format: Format,
    /// Working precision K (arithmetic mod p^K).
    #[arg(long, global = true)]
    precision: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// Decide membership of a target tuple, or verify a matrix against it.
    Check {
        /// Tuple file (`-` for stdin).
        tuple: PathBuf,
        #[arg(long)]
        verify_matrix: Option<PathBuf>,
    },
    /// Build a matrix realizing a target tuple.
    Synthesize {
        tuple: PathBuf,
        /// Write the matrix here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate joint cokernel frequencies of a random ensemble.
    Simulate(SimulateArgs),
    /// Monte Carlo mixed moment next to the enumerated |S|.
    Moments(MomentsArgs),
    /// Brute-force classification of small matrix spaces.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Evaluate the conjectured criterion (any number of shifts).
    Conjecture { tuple: PathBuf },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Ensemble {
    Haar,
    #[value(name = "eps_balanced")]
    EpsBalanced,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    ensemble: Ensemble,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    trials: u64,
    #[arg(long, env = "JCOK_SEED", default_value_t = 0)]
    seed: u64,
    /// Shift values c_i added to the diagonal, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    shifts: Vec<i64>,
    /// Target types separated by `;`, e.g. `1;1` or `0`.
    #[arg(long)]
    targets: String,
    /// Residue class weights for eps_balanced, comma separated.
    #[arg(long, value_delimiter = ',')]
    weights: Vec<f64>,
}

#[derive(Args)]
struct MomentsArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    x: Vec<i64>,
    /// Finite groups separated by `;`.
    #[arg(long)]
    groups: String,
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long)]
    trials: u64,
    #[arg(long, env = "JCOK_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Tally joint cokernel classes over a small matrix space.
    Scan {
        #[arg(long)]
        p: u64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        x: Vec<i64>,
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "samples")]
        exhaustive: bool,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, env = "JCOK_SEED", default_value_t = 0)]
        seed: u64,
    },
}

enum Status {
    Success,
    Negative,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Status::Success) => ExitCode::SUCCESS,
        Ok(Status::Negative) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            let negative =
                matches!(err.downcast_ref::<Error>(), Some(Error::NotRealizable(_) | Error::Verification(_)));
            ExitCode::from(if negative { 1 } else { 2 })
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<Status> {
    match &cli.command {
        Command::Check { tuple, verify_matrix } => check(cli, tuple, verify_matrix.as_deref()),
        Command::Synthesize { tuple, out } => synthesize(cli, tuple, out.as_deref()),
        Command::Simulate(args) => simulate(cli, args),
        Command::Moments(args) => moments(cli, args),
        Command::Oracle(OracleCommand::Scan { p, x, n, exhaustive, samples, seed }) => {
            oracle_scan(cli, *p, x, *n, *exhaustive, *samples, *seed)
        }
        Command::Conjecture { tuple } => conjecture(cli, tuple),
    }
}

fn read_input(path: &Path) -> anyhow::Result<String> {
    if path == Path::new("-") {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        return Ok(text);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_tuple(path: &Path) -> anyhow::Result<TupleSpec> {
    let text = read_input(path)?;
    text.parse::<TupleSpec>().with_context(|| format!("{}", path.display()))
}

fn parse_types(list: &str) -> anyhow::Result<Vec<ModuleType>> {
    list.split(';').map(|t| t.parse::<ModuleType>().map_err(anyhow::Error::from)).collect()
}

fn header(command: &str, fields: &[(&str, String)]) {
    let rest: Vec<String> = fields.iter().map(|(k, v)| format!("{k}={v}")).collect();
    println!("# jcok {command} {}", rest.join(" "));
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn tuple_fields(spec: &TupleSpec, k: Option<u32>) -> Vec<(&'static str, String)> {
    let mut fields = vec![("p", spec.p.to_string()), ("m", spec.m().to_string()), ("x", join(&spec.x))];
    if let Some(k) = k {
        fields.push(("K", k.to_string()));
    }
    fields
}

fn print_membership(format: Format, report: &MembershipReport) {
    match format {
        Format::Plain => println!("{report}"),
        Format::Tsv => {
            println!("verdict\t{}", report.verdict);
            println!("conjectural\t{}", report.conjectural);
            if let Some(v) = &report.failed_constraint {
                println!("violated\t{v}");
            }
            if let Some((a0, a1)) = report.witnesses {
                println!("witness\t{a0}\t{a1}");
            }
        }
    }
}

fn print_verification(format: Format, v: &Verification, prefix: &str) {
    for (i, c) in v.checks.iter().enumerate() {
        let mark = if c.matches() { "ok" } else { "MISMATCH" };
        match format {
            Format::Plain => {
                println!("{prefix}x_{}={}: expected {} got {} {mark}", i + 1, c.shift, c.expected, c.actual)
            }
            Format::Tsv => println!("{prefix}{}\t{}\t{}\t{}\t{mark}", i + 1, c.shift, c.expected, c.actual),
        }
    }
    println!("{prefix}verification {}", if v.passed() { "OK" } else { "FAILED" });
}

fn check(cli: &Cli, path: &Path, matrix: Option<&Path>) -> anyhow::Result<Status> {
    let spec = read_tuple(path)?;
    if let Some(mpath) = matrix {
        let a = parse_matrix(&read_input(mpath)?).with_context(|| format!("{}", mpath.display()))?;
        header("check", &tuple_fields(&spec, Some(a.modulus().precision())));
        let v = verify_realization(&a, &spec)?;
        print_verification(cli.format, &v, "");
        return Ok(if v.passed() { Status::Success } else { Status::Negative });
    }
    header("check", &tuple_fields(&spec, None));
    let report = member_cxm(&spec.targets)?;
    print_membership(cli.format, &report);
    Ok(if report.verdict { Status::Success } else { Status::Negative })
}

fn conjecture(cli: &Cli, path: &Path) -> anyhow::Result<Status> {
    let spec = read_tuple(path)?;
    header("conjecture", &tuple_fields(&spec, None));
    let report = conjecture_member(&spec.targets)?;
    print_membership(cli.format, &report);
    Ok(if report.verdict { Status::Success } else { Status::Negative })
}

fn synthesize(cli: &Cli, path: &Path, out: Option<&Path>) -> anyhow::Result<Status> {
    let spec = read_tuple(path)?;
    let k = cli.precision.unwrap_or_else(|| minimum_precision(&spec));
    header("synthesize", &tuple_fields(&spec, Some(k)));
    let report = realize_tuple(&spec, k)?;
    match out {
        Some(file) => {
            fs::write(file, report.matrix.to_string())
                .with_context(|| format!("writing {}", file.display()))?;
            println!(
                "# matrix written to {} ({} x {})",
                file.display(),
                report.matrix.rows(),
                report.matrix.cols()
            );
            print_verification(cli.format, &report.verification, "");
        }
        None => {
            print!("{}", report.matrix);
            print_verification(cli.format, &report.verification, "# ");
        }
    }
    Ok(Status::Success)
}

fn print_estimate(format: Format, label: &str, e: &Estimate) {
    match format {
        Format::Plain => println!("{label}: {e}"),
        Format::Tsv => println!("{label}\t{:.6}\t{:.6}\t{}", e.mean, e.std_error, e.trials),
    }
}

fn ensemble_name(kind: Ensemble, spec: &EnsembleSpec) -> String {
    match kind {
        Ensemble::Haar => "haar".into(),
        Ensemble::EpsBalanced => format!("eps_balanced eps={:.4}", spec.epsilon().unwrap_or(0.0)),
    }
}

fn simulate(cli: &Cli, args: &SimulateArgs) -> anyhow::Result<Status> {
    let k = cli.precision.unwrap_or(3);
    let spec = match args.ensemble {
        Ensemble::Haar => EnsembleSpec::haar(args.p, k, args.n, args.seed)?,
        Ensemble::EpsBalanced => {
            if args.weights.is_empty() {
                bail!("--weights is required for eps_balanced");
            }
            EnsembleSpec::eps_balanced(args.p, k, args.n, args.weights.clone(), args.seed)?
        }
    };
    let targets = parse_types(&args.targets)?;
    header(
        "simulate",
        &[
            ("ensemble", ensemble_name(args.ensemble, &spec)),
            ("p", args.p.to_string()),
            ("K", k.to_string()),
            ("n", args.n.to_string()),
            ("trials", args.trials.to_string()),
            ("seed", args.seed.to_string()),
            ("shifts", join(&args.shifts)),
        ],
    );
    let table = empirical_joint(&spec, &args.shifts, &targets, args.trials)?;
    if cli.format == Format::Tsv {
        println!("outcome\tcount\tfrequency\tstd_error");
    }
    for (outcome, e) in table.rows() {
        let count = table.counts[outcome];
        match cli.format {
            Format::Plain => {
                println!("{:<24} {count:>8}  {:.6} ± {:.6}", fmt_class(outcome), e.mean, e.std_error)
            }
            Format::Tsv => println!("{}\t{count}\t{:.6}\t{:.6}", fmt_class(outcome), e.mean, e.std_error),
        }
    }
    print_estimate(cli.format, &format!("event {}", fmt_class(&table.target)), &table.event());
    Ok(Status::Success)
}

fn moments(cli: &Cli, args: &MomentsArgs) -> anyhow::Result<Status> {
    let groups = parse_types(&args.groups)?;
    let max = groups.iter().map(ModuleType::max_finite_exponent).max().unwrap_or(0);
    let k = cli.precision.unwrap_or(max + 1);
    let spec = EnsembleSpec::haar(args.p, k, args.n, args.seed)?;
    let x = XSet::new(spec.modulus, &args.x)?;
    header(
        "moments",
        &[
            ("p", args.p.to_string()),
            ("K", k.to_string()),
            ("n", args.n.to_string()),
            ("trials", args.trials.to_string()),
            ("seed", args.seed.to_string()),
            ("x", join(&args.x)),
        ],
    );
    let exact = group_lattice::count_s(&groups, &x)?;
    let est = mixed_moment_mc(&spec, &x, &groups, args.trials)?;
    match cli.format {
        Format::Plain => println!("|S| = {exact}"),
        Format::Tsv => println!("count_s\t{exact}"),
    }
    print_estimate(cli.format, "moment", &est);
    Ok(Status::Success)
}

fn oracle_scan(
    cli: &Cli,
    p: u64,
    x: &[i64],
    n: usize,
    exhaustive: bool,
    samples: Option<u64>,
    seed: u64,
) -> anyhow::Result<Status> {
    let k = cli.precision.unwrap_or(2);
    let xs = XSet::new(Modulus::new(p, k)?, x)?;
    let scan = match samples {
        Some(count) => random_scan(p, &xs, n, k, count, seed)?,
        None if exhaustive || space_size(p, n, k).is_some() => exhaustive_scan(p, &xs, n, k)?,
        None => bail!("p^(K n^2) exceeds the exhaustive budget; pass --samples N"),
    };
    let mut fields = vec![("p", p.to_string()), ("K", k.to_string()), ("n", n.to_string()), ("x", join(x))];
    match samples {
        Some(count) => {
            fields.push(("samples", count.to_string()));
            fields.push(("seed", seed.to_string()));
        }
        None => fields.push(("mode", "exhaustive".into())),
    }
    header("oracle scan", &fields);
    for line in scan.lines() {
        match cli.format {
            Format::Tsv => println!("{line}"),
            Format::Plain => println!("{}", line.replace('\t', "  ")),
        }
    }
    let violations = consistency_report(&scan);
    println!("# violations: {}", violations.len());
    for (class, v) in &violations {
        println!("# {}: {v}", fmt_class(class));
    }
    Ok(if violations.is_empty() { Status::Success } else { Status::Negative })
}
