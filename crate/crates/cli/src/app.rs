//! Command parsing and execution.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zol_core::akrule::{ak_query_count_with, enumerate_partition_halvings, Generators};
use zol_core::circuits::{build_unitary_with, run_extended, uniform01, AlgorithmKind, Circuit, Selection, ARGUMENT};
use zol_core::problems::{builtin, OracleProblem, BUILTINS};
use zol_core::qcomplexity::{cqc, witness_tree, CandidateSet, DecisionTree};
use zol_core::statevec::DEFAULT_MAX_BITS;
use zol_core::timesym::{enumerate_instances, final_register, reconstruct_check, PartialMeasurement};
use zol_core::Bits;

use crate::report::{self, round_probability, Document, Report};
use crate::{ket, problem_file, CliError};

/// Environment variable overriding the state-vector bit cap.
pub const MAX_BITS_VAR: &str = "ZOL_MAX_BITS";

#[derive(Debug, Parser)]
#[command(
    name = "zol",
    version,
    about = "Oracle problems, zigzag analyses and query-count predictions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the extended algorithm and print its staged states.
    Simulate(RunArgs),
    /// Enumerate the time-symmetric instances for one setting.
    Zigzag(RunArgs),
    /// Predict the quantum query count from halvings of each setting.
    AkReport(AkArgs),
    /// Classical query complexity with a witness decision tree.
    Complexity(ComplexityArgs),
    /// List the built-in problem families.
    ListProblems(OutputArgs),
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    /// Built-in family: grover, dj, simon or periodic.
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    pub problem: Option<String>,
    /// Size of the built-in problem.
    #[arg(long, requires = "problem")]
    pub n: Option<usize>,
    /// JSON problem file.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Grover,
    #[value(name = "dj", alias = "deutsch-jozsa")]
    DeutschJozsa,
    Simon,
}

impl From<Algorithm> for AlgorithmKind {
    fn from(a: Algorithm) -> Self {
        match a {
            Algorithm::Grover => AlgorithmKind::Grover,
            Algorithm::DeutschJozsa => AlgorithmKind::DeutschJozsa,
            Algorithm::Simon => AlgorithmKind::Simon,
        }
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Problem setting as a bit-string, or `random`.
    #[arg(long, default_value = "random")]
    pub b: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Circuit to run; defaults to the family's own algorithm.
    #[arg(long, value_enum)]
    pub algorithm: Option<Algorithm>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeneratorChoice {
    Coordinates,
    Linear,
}

#[derive(Debug, Args)]
pub struct AkArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Candidate maps for halvings; defaults by problem size.
    #[arg(long, value_enum)]
    pub generators: Option<GeneratorChoice>,
    /// Also search arbitrary balanced partitions of small setting sets.
    #[arg(long)]
    pub exhaustive_partition: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ComplexityArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Comma-separated settings to restrict to; all settings by default.
    #[arg(long, value_delimiter = ',')]
    pub candidates: Vec<String>,
    #[command(flatten)]
    pub out: OutputArgs,
}

fn max_bits() -> Result<usize, CliError> {
    match std::env::var(MAX_BITS_VAR) {
        Err(_) => Ok(DEFAULT_MAX_BITS),
        Ok(v) => v
            .trim()
            .parse()
            .ok()
            .filter(|&n: &usize| (1..=40).contains(&n))
            .ok_or_else(|| CliError::Usage(format!("{MAX_BITS_VAR} must be an integer in 1..=40, got {v:?}"))),
    }
}

fn load_problem(args: &ProblemArgs) -> Result<OracleProblem, CliError> {
    match (&args.problem, &args.file) {
        (_, Some(path)) => problem_file::load(path),
        (Some(name), None) => {
            let n = args
                .n
                .ok_or_else(|| CliError::Usage("--n is required with --problem".into()))?;
            Ok(builtin(name, n)?)
        }
        (None, None) => Err(CliError::Usage("one of --problem or --file is required".into())),
    }
}

fn parse_setting(problem: &OracleProblem, text: &str) -> Result<Bits, CliError> {
    let b = Bits::parse(text).map_err(|_| CliError::Usage(format!("--b: {text:?} is not a bit-string or `random`")))?;
    problem.require(&b)?;
    Ok(b)
}

fn circuit_for(problem: &OracleProblem, algorithm: Option<Algorithm>) -> Result<Circuit, CliError> {
    let kind = algorithm.map_or_else(|| AlgorithmKind::default_for(problem), AlgorithmKind::from);
    Ok(build_unitary_with(problem, kind, max_bits()?)?)
}

fn simulate(args: &RunArgs) -> Result<Report, CliError> {
    let problem = load_problem(&args.problem)?;
    let circuit = circuit_for(&problem, args.algorithm)?;
    let (selection, how) = if args.b == "random" {
        (Selection::Random, "random")
    } else {
        (Selection::Setting(parse_setting(&problem, &args.b)?), "given")
    };
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let t = run_extended(&problem, &circuit, selection, &mut rng)?;
    let b = t.setting.to_string();
    let a = t.outcome.to_string();
    let stages = [
        ("input".to_string(), &t.input),
        (format!("B measured, b = {b}"), &t.after_selection),
        ("after Û".to_string(), &t.output),
        (format!("A measured, a = {a}"), &t.after_final),
        ("coherent: after Û".to_string(), &t.alice_output),
        (format!("coherent: A = {a}, then B = {b}"), &t.alice_final),
    ]
    .into_iter()
    .map(|(label, state)| report::Stage {
        label,
        state: ket::render(state),
    })
    .collect();
    let distribution: Vec<report::Probability> = t
        .final_distribution
        .iter()
        .filter(|(_, p)| round_probability(*p) > 0.0)
        .map(|(v, p)| report::Probability {
            value: v.to_string(),
            probability: round_probability(*p),
        })
        .collect();
    let probability = t
        .final_distribution
        .iter()
        .find(|(v, _)| *v == t.outcome)
        .map_or(0.0, |x| x.1);
    Ok(Report::Simulate(report::SimulateReport {
        problem: t.problem.clone(),
        algorithm: t.kind.name().to_string(),
        setting: b,
        selection: how.to_string(),
        seed: args.seed,
        queries: t.query_count,
        stages,
        final_register: ARGUMENT.to_string(),
        distribution,
        final_outcome: a,
        probability: round_probability(probability),
        decoded: t.decoded.map(|d| d.to_string()),
    }))
}

fn measurement_label(m: &PartialMeasurement) -> String {
    format!("{} on {}", m.description(), m.target())
}

fn zigzag(args: &RunArgs) -> Result<Report, CliError> {
    let problem = load_problem(&args.problem)?;
    let circuit = circuit_for(&problem, args.algorithm)?;
    let setting = if args.b == "random" {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        let i = ((uniform01(&mut rng) * problem.len() as f64) as usize).min(problem.len() - 1);
        problem.entries()[i].setting
    } else {
        parse_setting(&problem, &args.b)?
    };
    let found = enumerate_instances(&problem, &circuit, &setting)?;
    let mut finals: Vec<PartialMeasurement> = Vec::new();
    let instances = found
        .iter()
        .map(|inst| {
            let halvings = inst
                .halvings
                .iter()
                .map(|h| {
                    if !finals.contains(&h.final_measurement) {
                        finals.push(h.final_measurement.clone());
                    }
                    report::HalvingEntry {
                        initial: measurement_label(&h.initial),
                        initial_map: h.initial.matrix().to_string(),
                        final_measurement: measurement_label(&h.final_measurement),
                        final_map: h.final_measurement.matrix().to_string(),
                    }
                })
                .collect();
            report::Instance {
                sigma_prime: inst.sigma_settings(&problem).iter().map(|s| s.to_string()).collect(),
                halvings,
                final_outcome: inst.final_outcome.to_string(),
                probability: round_probability(inst.probability),
                input: ket::render(&inst.input_state),
                output: ket::render(&inst.output_state),
            }
        })
        .collect();
    let reconstruction = finals
        .iter()
        .map(|m| {
            Ok(report::Residual {
                measurement: measurement_label(m),
                map: m.matrix().to_string(),
                residual: reconstruct_check(&problem, &circuit, m)?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(Report::Zigzag(report::ZigzagReport {
        problem: problem.name().to_string(),
        algorithm: circuit.kind.name().to_string(),
        setting: setting.to_string(),
        seed: args.seed,
        final_register: final_register(&problem, &circuit)?.to_string(),
        instances,
        reconstruction,
    }))
}

fn names(problem: &OracleProblem, set: &CandidateSet) -> Vec<String> {
    set.settings(problem).map(|s| s.to_string()).collect()
}

fn ak_report(args: &AkArgs) -> Result<Report, CliError> {
    let problem = load_problem(&args.problem)?;
    let generators = match args.generators {
        None => Generators::default_for(&problem),
        Some(GeneratorChoice::Coordinates) => Generators::Coordinates,
        Some(GeneratorChoice::Linear) => Generators::Linear,
    };
    let r = ak_query_count_with(&problem, generators)?;
    let settings = r
        .settings
        .iter()
        .map(|s| report::SettingRow {
            setting: s.setting.to_string(),
            worst: s.worst(),
            best: s.best(),
            halvings: s
                .halvings
                .iter()
                .map(|h| report::HalvingRow {
                    first: h.halving.first.to_string(),
                    second: h.halving.second.to_string(),
                    sigma_first: names(&problem, &h.halving.sigma_first),
                    sigma_second: names(&problem, &h.halving.sigma_second),
                    cqc_first: h.cqc_first,
                    cqc_second: h.cqc_second,
                })
                .collect(),
        })
        .collect();
    let partition = if args.exhaustive_partition {
        let mut rows = Vec::new();
        let mut predicted: Option<u32> = None;
        for setting in problem.settings() {
            let halvings: Vec<report::HalvingRow> = enumerate_partition_halvings(&problem, &setting)?
                .iter()
                .map(|h| report::HalvingRow {
                    first: String::new(),
                    second: String::new(),
                    sigma_first: names(&problem, &h.sigma_first),
                    sigma_second: names(&problem, &h.sigma_second),
                    cqc_first: h.cqc_first,
                    cqc_second: h.cqc_second,
                })
                .collect();
            if let Some(w) = halvings.iter().map(|h| h.cqc_first.max(h.cqc_second)).max() {
                predicted = Some(predicted.map_or(w, |p| p.max(w)));
            }
            rows.push(report::PartitionRow {
                setting: setting.to_string(),
                halvings,
            });
        }
        Some(report::PartitionSection {
            predicted,
            settings: rows,
        })
    } else {
        None
    };
    Ok(Report::AkReport(report::AkReport {
        problem: r.problem.clone(),
        generators: r.generators.name().to_string(),
        settings_count: problem.len(),
        classical_baseline: r.classical_baseline,
        predicted: r.predicted_quantum_queries,
        predicted_min: r.predicted_min,
        known: report::Known {
            name: r.known.name.clone(),
            queries: r.known.queries,
            note: r.known.note.clone(),
        },
        comparison: r.comparison().label().to_string(),
        settings,
        partition,
    }))
}

fn tree_dto(tree: &DecisionTree) -> report::Tree {
    match tree {
        DecisionTree::Leaf(s) => report::Tree {
            solution: Some(s.to_string()),
            query: None,
            branches: Vec::new(),
        },
        DecisionTree::Query { argument, branches } => report::Tree {
            solution: None,
            query: Some(argument.to_string()),
            branches: branches
                .iter()
                .map(|(v, t)| report::Branch {
                    value: v.to_string(),
                    next: tree_dto(t),
                })
                .collect(),
        },
    }
}

fn complexity(args: &ComplexityArgs) -> Result<Report, CliError> {
    let problem = load_problem(&args.problem)?;
    let set = if args.candidates.is_empty() {
        CandidateSet::full(&problem)
    } else {
        let settings = args
            .candidates
            .iter()
            .map(|c| parse_setting(&problem, c))
            .collect::<Result<Vec<_>, _>>()?;
        CandidateSet::from_settings(&problem, &settings)?
    };
    let depth = cqc(&problem, &set)?;
    let tree = witness_tree(&problem, &set)?;
    Ok(Report::Complexity(report::ComplexityReport {
        problem: problem.name().to_string(),
        candidates: names(&problem, &set),
        cqc: depth,
        tree: tree_dto(&tree),
    }))
}

fn list_problems() -> Report {
    let describe = |name: &str| match name {
        "grover" => ("grover", "find the marked drawer b among 2^n"),
        "dj" => ("dj", "constant or balanced function on n bits"),
        "simon" => ("simon", "find the hidden XOR period of a 2-to-1 function"),
        "periodic" => ("simon", "find the period r of shifted remainders a+t mod r"),
        _ => ("-", ""),
    };
    Report::ListProblems(report::ProblemList {
        problems: BUILTINS
            .iter()
            .map(|(name, sizes)| {
                let (circuit, description) = describe(name);
                report::ProblemInfo {
                    name: name.to_string(),
                    sizes: sizes.to_string(),
                    circuit: circuit.to_string(),
                    description: description.to_string(),
                }
            })
            .collect(),
    })
}

fn emit(report: Report, out: &OutputArgs) -> Result<String, CliError> {
    let doc = Document::new(report);
    let text = match out.format {
        Format::Text => doc.to_text(),
        Format::Json => doc.to_json(),
    };
    match &out.output {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| CliError::File(format!("{}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

/// Executes one parsed command and returns what goes to standard output.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Simulate(a) => emit(simulate(a)?, &a.out),
        Command::Zigzag(a) => emit(zigzag(a)?, &a.out),
        Command::AkReport(a) => emit(ak_report(a)?, &a.out),
        Command::Complexity(a) => emit(complexity(a)?, &a.out),
        Command::ListProblems(o) => emit(list_problems(), o),
    }
}

/// Parses `args`, runs the command, and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("error: {}", e.to_string().lines().next().unwrap_or_default());
            e.exit_code()
        }
    }
}
