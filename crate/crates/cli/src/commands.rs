//! Subcommand definitions and their implementations.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use loccgate::proposition::{check_full_basis, BasisSpec};
use loccgate::search::{search_probabilities, SearchConfig};
use loccgate::statekit::{a_family_states, build_family, gen_max_entangled, root_of_unity, FamilySpec};
use loccgate::witness::{
    check_indistinguishable, sweep_parameter, verify_one_way_protocol, PairedCut, SweepSetup, WitnessOptions,
    WitnessProblem,
};
use loccgate::{Amplitude, PureState, StateSet, Tolerances};

use crate::error::CliError;
use crate::format::StateFile;
use crate::parse::{parse_cut, parse_dims, parse_grid, parse_number, parse_probs};
use crate::report::{
    CheckReport, OneWayCommandReport, PropositionReport, SearchReport, SweepReport, SweepRowReport,
};

#[derive(Debug, Parser)]
#[command(name = "loccgate", version, about = "Certify LOCC indistinguishability of quantum state sets")]
pub struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the superposition witness on a problem file.
    Check(CheckArgs),
    /// Test a complete orthonormal basis for LOCC indistinguishability.
    Proposition(PropositionArgs),
    /// Sweep a one-parameter family and bisect the verdict boundaries.
    Sweep(SweepArgs),
    /// Search the probability simplex for the strongest violation.
    Search(SearchArgs),
    /// Verify a one-way local measurement protocol.
    Oneway(OneWayArgs),
    /// Emit a built-in example family as a state file.
    Family(FamilyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct TolArgs {
    #[arg(long, default_value_t = 1e-9)]
    pub tol_norm: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol_orth: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol_rank: f64,
    /// Majorization tolerance.
    #[arg(long, alias = "tol", default_value_t = 1e-9)]
    pub tol_major: f64,
}

impl TolArgs {
    pub fn tolerances(&self) -> Result<Tolerances, CliError> {
        let tol = Tolerances {
            norm: self.tol_norm,
            orth: self.tol_orth,
            rank: self.tol_rank,
            major: self.tol_major,
        };
        for (name, v) in [("norm", tol.norm), ("orth", tol.orth), ("rank", tol.rank), ("major", tol.major)] {
            if !(v.is_finite() && v > 0.0 && v < 1.0) {
                return Err(CliError::Input(format!("tolerance {name} must lie in (0, 1), got {v}")));
            }
        }
        Ok(tol)
    }
}

#[derive(Debug, Clone, Args)]
pub struct ProblemArgs {
    /// Probabilities: `uniform`, a comma list, or one value for every state.
    #[arg(long)]
    pub probs: Option<String>,
    /// Paired cut as groups `states/detectors` joined by `|`, e.g. `0/0|1/1`.
    #[arg(long)]
    pub cut: Option<String>,
    /// Use the ensemble of ψ_i⊗φ_i spectra as the target.
    #[arg(long)]
    pub stronger_target: bool,
    #[command(flatten)]
    pub tol: TolArgs,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub file: PathBuf,
    #[command(flatten)]
    pub problem: ProblemArgs,
}

#[derive(Debug, Args)]
pub struct PropositionArgs {
    pub file: PathBuf,
    #[command(flatten)]
    pub tol: TolArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SweepFamily {
    AFamily,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value = "a-family")]
    pub family: SweepFamily,
    /// Grid as `lo:hi:step` inside (0, 1).
    #[arg(long)]
    pub grid: String,
    /// Width below which boundary bisection stops.
    #[arg(long, default_value_t = 1e-9)]
    pub bisect_tol: f64,
    #[command(flatten)]
    pub problem: ProblemArgs,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    pub file: PathBuf,
    #[arg(long, default_value_t = 50)]
    pub resolution: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 40)]
    pub refine_iters: usize,
    #[arg(long, default_value_t = 0.5)]
    pub refine_shrink: f64,
    #[command(flatten)]
    pub problem: ProblemArgs,
}

#[derive(Debug, Args)]
pub struct OneWayArgs {
    pub file: PathBuf,
    /// Index of the measuring party.
    #[arg(long)]
    pub party: usize,
    /// State file whose states are the local basis vectors.
    #[arg(long)]
    pub basis_file: PathBuf,
    #[command(flatten)]
    pub tol: TolArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FamilyName {
    Bell4,
    Ghz8,
    SSet,
    SPrime,
    AFamily,
    GenMax,
    Computational,
    Fourier,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(value_enum)]
    pub name: FamilyName,
    /// Parameter of the a-family.
    #[arg(long)]
    pub a: Option<String>,
    /// Local dimension for gen-max and fourier.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 0)]
    pub shift: usize,
    #[arg(long, default_value_t = 0)]
    pub phase: usize,
    /// Party dimensions for the computational basis, e.g. `2,3`.
    #[arg(long)]
    pub dims: Option<String>,
}

/// What a command produced: the JSON report and the summary lines that
/// always go to stdout. The last summary line is the verdict token.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: String,
    pub summary: Vec<String>,
}

impl Outcome {
    fn new<T: serde::Serialize>(report: &T, summary: Vec<String>) -> Self {
        Outcome {
            report: serde_json::to_string_pretty(report).expect("reports always serialize") + "\n",
            summary,
        }
    }
}

/// Runs one parsed command line.
pub fn run(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Check(args) => check(args),
        Command::Proposition(args) => proposition(args),
        Command::Sweep(args) => sweep(args),
        Command::Search(args) => search(args),
        Command::Oneway(args) => oneway(args),
        Command::Family(args) => family(args),
    }
}

struct Loaded {
    input: StateFile,
    problem: WitnessProblem,
    cut: PairedCut,
}

fn load_problem(file: &StateFile, args: &ProblemArgs, tol: &Tolerances) -> Result<Loaded, CliError> {
    let states = file.states(tol)?;
    let detectors = file.detectors(tol)?;
    let k = states.len();
    let probs = match (&args.probs, &file.probs) {
        (Some(text), _) => parse_probs(text, k)?,
        (None, Some(p)) => p.clone(),
        (None, None) => return Err(CliError::Input("no probabilities in file or on the command line".into())),
    };
    let set = StateSet::new(states, tol.orth)?;
    let problem = WitnessProblem::new(set, detectors, probs.clone(), tol)?;
    let cut = match &args.cut {
        Some(text) => PairedCut::new(parse_cut(text)?, problem.state_parties(), problem.detector_parties())?,
        None => PairedCut::default_for(problem.state_parties(), problem.detector_parties())?,
    };
    let mut input = file.clone();
    input.probs = Some(probs);
    Ok(Loaded { input, problem, cut })
}

fn options(args: &ProblemArgs) -> WitnessOptions {
    WitnessOptions {
        stronger_target: args.stronger_target,
    }
}

fn check(args: &CheckArgs) -> Result<Outcome, CliError> {
    let tol = args.problem.tol.tolerances()?;
    let file = StateFile::read(&args.file)?;
    let loaded = load_problem(&file, &args.problem, &tol)?;
    let report = check_indistinguishable(&loaded.problem, &loaded.cut, &tol, options(&args.problem))?;
    let verdict = report.verdict;
    let out = CheckReport::new(loaded.input, &report);
    Ok(Outcome::new(&out, vec![verdict.as_str().to_string()]))
}

fn proposition(args: &PropositionArgs) -> Result<Outcome, CliError> {
    let tol = args.tol.tolerances()?;
    let file = StateFile::read(&args.file)?;
    let basis = BasisSpec::new(file.dims.clone(), file.states(&tol)?, tol.orth)?;
    let verdict = check_full_basis(&basis, &tol)?;
    let witness = match verdict.witnessing_vector {
        Some(i) => format!("witnessing_vector {i}"),
        None => "witnessing_vector none".to_string(),
    };
    let token = verdict.verdict.as_str().to_string();
    let out = PropositionReport {
        command: "proposition",
        input: file,
        tolerances: tol,
        result: verdict,
    };
    Ok(Outcome::new(&out, vec![witness, token]))
}

/// Just inside the a-family's open domain (0, 1).
pub const A_FAMILY_EDGE_PROBES: (f64, f64) = (1e-9, 1.0 - 1e-9);

fn sweep(args: &SweepArgs) -> Result<Outcome, CliError> {
    let tol = args.problem.tol.tolerances()?;
    let grid = parse_grid(&args.grid)?;
    if !(args.bisect_tol.is_finite() && args.bisect_tol > 0.0) {
        return Err(CliError::Input(format!("bisect tolerance must be positive, got {}", args.bisect_tol)));
    }
    let SweepFamily::AFamily = args.family;
    let detectors = build_family(FamilySpec::AFamily { a: 0.5 })?
        .detectors
        .expect("the a-family ships with detectors");
    let probs = parse_probs(args.problem.probs.as_deref().unwrap_or("uniform"), 3)?;
    let cut = match &args.problem.cut {
        Some(text) => PairedCut::new(parse_cut(text)?, 2, 2)?,
        None => PairedCut::default_for(2, 2)?,
    };
    let setup = SweepSetup {
        detectors: &detectors,
        probs: &probs,
        cut: &cut,
        tol: &tol,
        options: options(&args.problem),
        bisect_tol: args.bisect_tol,
        edge_probes: Some(A_FAMILY_EDGE_PROBES),
    };
    let result = sweep_parameter(a_family_states, &grid, &setup)?;

    let indistinguishable = result
        .rows
        .iter()
        .filter(|r| r.report.verdict == loccgate::Verdict::Indistinguishable)
        .count();
    let mut summary: Vec<String> = result
        .boundaries
        .iter()
        .map(|b| format!("boundary {}", b.estimate))
        .collect();
    summary.push(format!("{indistinguishable}/{} INDISTINGUISHABLE", result.rows.len()));

    let options = setup.options;
    let out = SweepReport {
        command: "sweep",
        family: "a-family",
        grid: args.grid.clone(),
        grid_points: grid.len(),
        probs: probs.clone(),
        detectors: StateFile::from_states(&detectors, Some(&["B1", "B2", "B3"]), None, None).states,
        cut: cut.groups().to_vec(),
        tolerances: tol,
        options,
        bisect_tol: args.bisect_tol,
        edge_probes: A_FAMILY_EDGE_PROBES,
        rows: result.rows.iter().map(SweepRowReport::from_row).collect(),
        boundaries: result.boundaries,
    };
    Ok(Outcome::new(&out, summary))
}

fn search(args: &SearchArgs) -> Result<Outcome, CliError> {
    let tol = args.problem.tol.tolerances()?;
    let mut file = StateFile::read(&args.file)?;
    if args.problem.probs.is_none() {
        // The search ignores the weights; uniform ones only seed the problem.
        file.probs = Some(vec![1.0 / file.states.len().max(1) as f64; file.states.len()]);
    }
    let loaded = load_problem(&file, &args.problem, &tol)?;
    let config = SearchConfig {
        grid_resolution: args.resolution,
        refine_iters: args.refine_iters,
        refine_shrink: args.refine_shrink,
        seed: args.seed,
    };
    let opts = options(&args.problem);
    let result = search_probabilities(&loaded.problem, &loaded.cut, &config, &tol, opts)?;
    let best = loaded.problem.with_probs(result.best_probs.clone(), &tol)?;
    let best_report = check_indistinguishable(&best, &loaded.cut, &tol, opts)?;
    let mut input = loaded.input;
    input.probs = None;
    let probs_line = result
        .best_probs
        .iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(",");
    let summary = vec![
        format!("best_probs {probs_line}"),
        format!("best_violation {}", result.best_violation),
        best_report.verdict.as_str().to_string(),
    ];
    let mut best_input = input.clone();
    best_input.probs = Some(result.best_probs.clone());
    let out = SearchReport {
        command: "search",
        input,
        best: CheckReport::new(best_input, &best_report),
        result,
    };
    Ok(Outcome::new(&out, summary))
}

fn oneway(args: &OneWayArgs) -> Result<Outcome, CliError> {
    let tol = args.tol.tolerances()?;
    let file = StateFile::read(&args.file)?;
    let basis_file = StateFile::read(&args.basis_file)?;
    let states = StateSet::new(file.states(&tol)?, tol.orth)?;
    let basis: Vec<Vec<Amplitude>> = basis_file
        .states(&tol)?
        .into_iter()
        .map(|s| s.amps().to_vec())
        .collect();
    if basis_file.dims.len() != 1 {
        return Err(CliError::Input(format!(
            "basis file must describe one party, got dims {:?}",
            basis_file.dims
        )));
    }
    let report = verify_one_way_protocol(&states, args.party, &basis, &tol)?;
    let token = if report.distinguishable {
        "DISTINGUISHABLE_BY_PROTOCOL"
    } else {
        "NOT_BY_THIS_PROTOCOL"
    };
    let out = OneWayCommandReport {
        command: "oneway",
        input: file,
        basis: basis_file,
        tolerances: tol,
        result: report,
    };
    Ok(Outcome::new(&out, vec![token.to_string()]))
}

fn uniform(k: usize) -> Option<Vec<f64>> {
    Some(vec![1.0 / k as f64; k])
}

fn family(args: &FamilyArgs) -> Result<Outcome, CliError> {
    let named = |spec, names: &[&str]| -> Result<StateFile, CliError> {
        let fam = build_family(spec)?;
        let states = fam.states.states();
        let probs = fam.detectors.as_ref().and_then(|_| uniform(states.len()));
        Ok(StateFile::from_states(states, Some(names), fam.detectors.as_deref(), probs))
    };
    let file = match args.name {
        FamilyName::Bell4 => named(FamilySpec::Bell4, &["B1", "B2", "B3", "B4"])?,
        FamilyName::Ghz8 => named(FamilySpec::Ghz8, &["G1", "G2", "G3", "G4", "G5", "G6", "G7", "G8"])?,
        FamilyName::SSet => named(FamilySpec::SSet, &["psi1", "psi2", "psi3"])?,
        FamilyName::SPrime => named(FamilySpec::SPrimeSet, &["psi1", "psi2", "psi3'"])?,
        FamilyName::AFamily => {
            let text = args
                .a
                .as_deref()
                .ok_or_else(|| CliError::Input("a-family needs --a".into()))?;
            named(FamilySpec::AFamily { a: parse_number(text)? }, &["A1", "A2", "A3"])?
        }
        FamilyName::GenMax => {
            let s = gen_max_entangled(args.d, args.shift, args.phase)?;
            StateFile::from_states(&[s], None, None, None)
        }
        FamilyName::Computational => {
            let dims = parse_dims(args.dims.as_deref().unwrap_or("2,2"))?;
            let basis = BasisSpec::computational(dims)?;
            StateFile::from_states(basis.vectors(), None, None, None)
        }
        FamilyName::Fourier => {
            let d = args.d;
            if d == 0 {
                return Err(CliError::Input("dimension must be positive".into()));
            }
            let scale = 1.0 / (d as f64).sqrt();
            let vectors = (0..d)
                .map(|o| {
                    let amps = (0..d).map(|k| root_of_unity(d, o * k) * scale).collect();
                    PureState::new(vec![d], amps)
                })
                .collect::<Result<Vec<_>, _>>()?;
            StateFile::from_states(&vectors, None, None, None)
        }
    };
    Ok(Outcome::new(&file, Vec::new()))
}
