use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use supdate::formats::{BroadcastJson, CodeJson, FieldJson, MatrixJson, SchemeJson};
use supdate::scenario::{run_scenario, simulate_broadcast, simulate_p2p, ScenarioConfig};
use supdate_core::broadcast::{build_broadcast_scheme, compute_theta, optimal_broadcast_cost, BroadcastOptions};
use supdate_core::codes::{is_mrsc, MrscMode};
use supdate_core::mrsc::{
    construct_linearized_mrsc, construct_random_mrsc, construct_sandwiched_linearized, construct_sandwiched_random,
    construct_striped_mrsc, SandwichSpec,
};
use supdate_core::update::{build_p2p_scheme, detect_stripes, lower_bound, P2PMethod};
use supdate_core::{Error, Field};

#[derive(Parser)]
#[command(name = "supdate", version, about = "Communication-optimal updates of linear functions under sparse edits")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for subset scans (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Finite fields.
    #[command(subcommand)]
    Field(FieldCmd),
    /// Linear codes and MRSC checks.
    #[command(subcommand)]
    Codes(CodesCmd),
    /// Build maximally recoverable subcodes.
    #[command(subcommand)]
    Mrsc(MrscCmd),
    /// Point-to-point update schemes.
    #[command(subcommand)]
    P2p(P2pCmd),
    /// Two-receiver broadcast schemes.
    #[command(subcommand)]
    Bcast(BcastCmd),
    /// Storage scenarios.
    #[command(subcommand)]
    Scenario(ScenarioCmd),
}

#[derive(Subcommand)]
enum FieldCmd {
    Show {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// Little-endian coefficients, comma separated.
        #[arg(long, value_delimiter = ',')]
        modulus: Option<Vec<u32>>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Definition,
    Cores,
    Parity,
    AllSizes,
    All,
}

#[derive(Subcommand)]
enum CodesCmd {
    VerifyMrsc {
        #[arg(long)]
        code: PathBuf,
        #[arg(long = "super")]
        sup: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        mode: ModeArg,
    },
    /// k-cores of the dual of a code.
    Cores {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MrscMethodArg {
    Random,
    Linearized,
    Striped,
    SandwichRandom,
    SandwichLinearized,
}

#[derive(Subcommand)]
enum MrscCmd {
    Build {
        #[arg(long, value_enum)]
        method: MrscMethodArg,
        #[arg(long = "in")]
        input: PathBuf,
        /// Required subcode for the sandwich methods.
        #[arg(long)]
        sub: Option<PathBuf>,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        tries: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum P2pMethodArg {
    Random,
    Linearized,
    Striped,
}

impl P2pMethodArg {
    fn method(self, tries: usize) -> P2PMethod {
        match self {
            P2pMethodArg::Random => P2PMethod::Random { max_tries: tries },
            P2pMethodArg::Linearized => P2PMethod::Linearized,
            P2pMethodArg::Striped => P2PMethod::Striped,
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    scheme: PathBuf,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum P2pCmd {
    Build {
        #[arg(long = "A")]
        a: PathBuf,
        #[arg(long)]
        eps: usize,
        #[arg(long, value_enum, default_value = "random")]
        method: P2pMethodArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        tries: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Simulate(SimulateArgs),
}

#[derive(Subcommand)]
enum BcastCmd {
    Theta {
        #[arg(long = "A")]
        a: PathBuf,
        #[arg(long = "B")]
        b: PathBuf,
        #[arg(long)]
        eps: usize,
        /// Largest number of subsets scanned per receiver.
        #[arg(long, default_value_t = 10_000_000)]
        budget: u128,
    },
    Build {
        #[arg(long = "A")]
        a: PathBuf,
        #[arg(long = "B")]
        b: PathBuf,
        #[arg(long)]
        eps: usize,
        /// Per-receiver method in the trivial-intersection case.
        #[arg(long, value_enum, default_value = "random")]
        method: P2pMethodArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        tries: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Simulate(SimulateArgs),
}

#[derive(Subcommand)]
enum ScenarioCmd {
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

/// Exit status 1: something failed to verify or decode.
struct Failure(String);

enum CliError {
    Input(String),
    Failure(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::TriesExhausted { .. }
            | Error::ExtensionPropertyViolated(_)
            | Error::SandwichConditionFails(_)
            | Error::CertificateFailed(_)
            | Error::NoPreimage { .. } => CliError::Failure(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<Failure> for CliError {
    fn from(f: Failure) -> Self {
        CliError::Failure(f.0)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(value: &T, out: Option<&Path>) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    match out {
        Some(path) => fs::write(path, text + "\n").map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
    } else {
        println!("{}", text());
    }
}

#[derive(Serialize)]
struct FieldInfo {
    field: FieldJson,
    order: u32,
    primitive_element: u32,
}

fn field_show(cli: &Cli, p: u32, m: u32, modulus: Option<&[u32]>) -> CliResult<()> {
    let f = Field::new(p, m, modulus)?;
    let info = FieldInfo {
        field: FieldJson::from_field(&f),
        order: f.order(),
        primitive_element: f.primitive_element(),
    };
    emit(cli.json, &info, || {
        format!(
            "{f}\norder             {}\nmodulus (LE)      {:?}\nprimitive element {}",
            info.order,
            f.modulus(),
            info.primitive_element
        )
    });
    Ok(())
}

fn codes(cli: &Cli, cmd: &CodesCmd) -> CliResult<()> {
    match cmd {
        CodesCmd::VerifyMrsc { code, sup, mode } => {
            let c = read_json::<CodeJson>(code)?.to_code()?;
            let c0 = read_json::<CodeJson>(sup)?.to_code()?;
            let modes: Vec<MrscMode> = match mode {
                ModeArg::Definition => vec![MrscMode::Definition],
                ModeArg::Cores => vec![MrscMode::Cores],
                ModeArg::Parity => vec![MrscMode::Parity],
                ModeArg::AllSizes => vec![MrscMode::AllSizes],
                ModeArg::All => MrscMode::ALL.to_vec(),
            };
            let mut verdicts = Vec::new();
            for m in modes {
                verdicts.push((m, is_mrsc(&c, &c0, m)?));
            }
            emit(cli.json, &verdicts, || {
                verdicts
                    .iter()
                    .map(|(m, v)| {
                        let w = v.witness.as_ref().map_or("-".to_string(), |s| s.to_string());
                        format!("{m:<12?} holds={:<5} checked={:<8} witness={w}", v.holds, v.subsets_checked)
                    })
                    .collect::<Vec<_>>()
                    .join("\n")
            });
            if verdicts.iter().all(|(_, v)| v.holds) {
                Ok(())
            } else {
                Err(Failure("not an MRSC".to_string()).into())
            }
        }
        CodesCmd::Cores { code, k } => {
            let c = read_json::<CodeJson>(code)?.to_code()?;
            let cores = c.enumerate_k_cores(*k);
            emit(cli.json, &cores, || {
                let mut lines = vec![format!("{} cores of size {k}", cores.len())];
                lines.extend(cores.iter().map(|s| s.to_string()));
                lines.join("\n")
            });
            Ok(())
        }
    }
}

fn mrsc(cli: &Cli, cmd: &MrscCmd) -> CliResult<()> {
    let MrscCmd::Build { method, input, sub, k, seed, tries, out } = cmd;
    let c0 = read_json::<CodeJson>(input)?.to_code()?;
    let spec = || -> CliResult<SandwichSpec> {
        let path = sub
            .as_ref()
            .ok_or_else(|| CliError::Input("sandwich methods need --sub".to_string()))?;
        let inner = read_json::<CodeJson>(path)?.to_code()?;
        Ok(SandwichSpec::new(c0.clone(), inner, *k)?)
    };
    let built = match method {
        MrscMethodArg::Random => construct_random_mrsc(&c0, *k, *seed, *tries)?,
        MrscMethodArg::Linearized => construct_linearized_mrsc(&c0, *k)?.code,
        MrscMethodArg::Striped => {
            if k % 2 != 0 {
                return Err(CliError::Input("striped construction needs an even k = 2eps".to_string()));
            }
            let a = detect_stripes(c0.generator())?;
            construct_striped_mrsc(c0.field(), &a, c0.dim(), k / 2)?.code
        }
        MrscMethodArg::SandwichRandom => construct_sandwiched_random(&spec()?, *seed, *tries)?,
        MrscMethodArg::SandwichLinearized => construct_sandwiched_linearized(&spec()?)?.code,
    };
    let json = CodeJson::from_code(&built.code, Some(built.certificate.clone()));
    if out.is_some() || cli.json {
        write_json(&json, out.as_deref())?;
    }
    if !cli.json {
        println!(
            "[{}, {}] subcode over {} verified={} subsets_checked={}",
            built.code.n(),
            built.code.dim(),
            built.code.field(),
            built.certificate.verified,
            built.certificate.subsets_checked
        );
    }
    Ok(())
}

#[derive(Serialize)]
struct SimulationSummary {
    seed: u64,
    trials: usize,
    cost: usize,
    bound: usize,
    individual_cost: usize,
    passed: Vec<usize>,
    failed: Vec<usize>,
}

fn p2p(cli: &Cli, cmd: &P2pCmd) -> CliResult<()> {
    match cmd {
        P2pCmd::Build { a, eps, method, seed, tries, out } => {
            let a = read_json::<MatrixJson>(a)?.to_matrix()?;
            let scheme = build_p2p_scheme(&a, *eps, method.method(*tries), *seed)?;
            let json = SchemeJson::from_scheme(&scheme);
            if out.is_some() || cli.json {
                write_json(&json, out.as_deref())?;
            }
            if !cli.json {
                println!(
                    "cost {} (bound {}), field {}, seed {seed}",
                    scheme.cost(),
                    lower_bound(a.rows(), *eps),
                    scheme.field()
                );
            }
            Ok(())
        }
        P2pCmd::Simulate(args) => {
            let scheme = read_json::<SchemeJson>(&args.scheme)?.to_scheme()?;
            let stats = simulate_p2p(&scheme, args.trials, args.seed);
            let bound = lower_bound(scheme.a().rows(), scheme.eps());
            let summary = SimulationSummary {
                seed: args.seed,
                trials: args.trials,
                cost: scheme.cost(),
                bound,
                individual_cost: bound,
                passed: vec![stats.passed],
                failed: vec![stats.failed],
            };
            emit(cli.json, &summary, || {
                format!(
                    "seed {}\ncost {} vs bound {}\npassed {} failed {}",
                    args.seed, summary.cost, bound, stats.passed, stats.failed
                )
            });
            match stats.first_failure {
                None => Ok(()),
                Some((x, e)) => Err(Failure(format!("decode failed for X = {x:?}, E = {e:?}")).into()),
            }
        }
    }
}

fn bcast(cli: &Cli, cmd: &BcastCmd) -> CliResult<()> {
    match cmd {
        BcastCmd::Theta { a, b, eps, budget } => {
            let a = read_json::<MatrixJson>(a)?.to_matrix()?;
            let b = read_json::<MatrixJson>(b)?.to_matrix()?;
            let theta = compute_theta(&a, &b, *eps, *budget)?;
            let cost = optimal_broadcast_cost(&a, &b, *eps, *budget)?;
            emit(cli.json, &cost, || {
                let show = |s: &Option<supdate_core::SupportSet>| s.as_ref().map_or("-".to_string(), |s| s.to_string());
                format!(
                    "theta_A {} at {}\ntheta_B {} at {}\ntheta {}\nintersection dim {}\nregime {:?}, optimal cost {}",
                    theta.theta_a,
                    show(&theta.argmin_a),
                    theta.theta_b,
                    show(&theta.argmin_b),
                    theta.theta,
                    theta.intersection_dim,
                    cost.regime,
                    cost.cost.map_or("not known for this regime".to_string(), |c| c.to_string())
                )
            });
            Ok(())
        }
        BcastCmd::Build { a, b, eps, method, seed, tries, out } => {
            let a = read_json::<MatrixJson>(a)?.to_matrix()?;
            let b = read_json::<MatrixJson>(b)?.to_matrix()?;
            let options = BroadcastOptions {
                method: method.method(*tries),
                max_tries: *tries,
                ..BroadcastOptions::default()
            };
            let scheme = build_broadcast_scheme(&a, &b, *eps, *seed, &options)?;
            let json = BroadcastJson::from_scheme(&scheme);
            if out.is_some() || cli.json {
                write_json(&json, out.as_deref())?;
            }
            if !cli.json {
                println!("regime {:?}, cost {}, seed {seed}", scheme.regime, scheme.cost());
            }
            Ok(())
        }
        BcastCmd::Simulate(args) => {
            let scheme = read_json::<BroadcastJson>(&args.scheme)?.to_scheme()?;
            let stats = simulate_broadcast(&scheme, args.trials, args.seed);
            let individual =
                lower_bound(scheme.receiver_a.a().rows(), scheme.eps) + lower_bound(scheme.receiver_b.a().rows(), scheme.eps);
            let summary = SimulationSummary {
                seed: args.seed,
                trials: args.trials,
                cost: scheme.cost(),
                bound: scheme.cost(),
                individual_cost: individual,
                passed: stats.iter().map(|s| s.passed).collect(),
                failed: stats.iter().map(|s| s.failed).collect(),
            };
            emit(cli.json, &summary, || {
                format!(
                    "seed {}\ncost {} vs individual {}\nreceiver A: passed {} failed {}\nreceiver B: passed {} failed {}",
                    args.seed,
                    summary.cost,
                    individual,
                    stats[0].passed,
                    stats[0].failed,
                    stats[1].passed,
                    stats[1].failed
                )
            });
            if let Some((x, e)) = stats.iter().find_map(|s| s.first_failure.clone()) {
                return Err(Failure(format!("decode failed for X = {x:?}, E = {e:?}")).into());
            }
            Ok(())
        }
    }
}

fn scenario(cli: &Cli, cmd: &ScenarioCmd) -> CliResult<()> {
    let ScenarioCmd::Run { config } = cmd;
    let cfg: ScenarioConfig = read_json(config)?;
    let report = run_scenario(&cfg)?;
    emit(cli.json, &report, || {
        let mut lines = vec![
            format!("scenario {:?}, seed {}", report.scenario, report.seed),
            format!("field GF({}) (rejected: {:?})", report.q, report.fields_rejected),
            format!("n {}, m {}, eps {}", report.n, report.m, report.eps),
            format!(
                "cost {} (optimal {}), individual {}, saving {:.1}%",
                report.cost, report.optimal_cost, report.individual_cost, report.saving_percent
            ),
        ];
        if let Some(t) = report.theta {
            lines.push(format!("theta {t}"));
        }
        for (i, r) in report.receivers.iter().enumerate() {
            lines.push(format!("receiver {}: passed {} failed {}", i + 1, r.passed, r.failed));
        }
        lines.join("\n")
    });
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure("some trials failed to decode".to_string()).into())
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| CliError::Input(e.to_string()))?;
    }
    match &cli.command {
        Command::Field(FieldCmd::Show { p, m, modulus }) => field_show(cli, *p, *m, modulus.as_deref()),
        Command::Codes(c) => codes(cli, c),
        Command::Mrsc(c) => mrsc(cli, c),
        Command::P2p(c) => p2p(cli, c),
        Command::Bcast(c) => bcast(cli, c),
        Command::Scenario(c) => scenario(cli, c),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
