//! `dsirs`: validate instances, run Adjusted Winner, solve the fairness
//! problems exactly or approximately, and run budget-sweep simulations.
//!
//! Exit status: 0 on success, 2 when no feasible plan exists, 1 on invalid
//! input. Results go to standard output as JSON; diagnostics to standard
//! error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use dsirs::exact::objective_value;
use dsirs::fptas::{fptas_awns_rho_with, FptasError, FptasOptions, GuessMode, O2Mode, Orientation};
use dsirs::rational::{parse_rational, to_fraction_string};
use dsirs::{
    classic_aw, oracle_best_plan, solve_awns_exact, welfare, AwContext, ExactError, Instance, Objective,
    OracleCriterion, OracleOutcome, Plan, QMode, Rho,
};
use dsirs_sim::sweep::DEFAULT_BUDGETS;
use dsirs_sim::{
    aggregate, aggregates_csv, format_matrices, load_utility_matrices, results_csv, run_sweep, synthesize_matrices,
    ModePair, Op, SweepConfig,
};
use serde::Deserialize;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "dsirs",
    version,
    about = "Split-free Adjusted Winner with budgeted resource sale"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check an instance file and summarize it.
    Validate {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Classic Adjusted Winner and the split-free plan for a sale set.
    Aw {
        #[arg(long)]
        instance: PathBuf,
        /// Comma-separated names of resources to sell.
        #[arg(long, value_delimiter = ',')]
        sell: Vec<String>,
    },
    /// Exact optimum over the split-free plans of every affordable sale set.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum)]
        objective: ObjectiveArg,
        /// Bound on d or ρ for the minimum-cost objectives.
        #[arg(long)]
        threshold: Option<String>,
    },
    /// Approximate minimum ρ within a factor of 1 + ε.
    Fptas {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value = "1/10")]
        epsilon: String,
        #[arg(long, value_enum, default_value_t = GuessArg::Exhaustive)]
        guesses: GuessArg,
        #[arg(long, value_enum, default_value_t = O2Arg::Opportunity)]
        o2: O2Arg,
    },
    /// Exact optimum over every plan, not only Adjusted Winner ones.
    Oracle {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum)]
        criterion: CriterionArg,
        /// Fixed revenue share for every plan instead of the balancing one.
        #[arg(long)]
        q: Option<String>,
    },
    /// Budget sweep over utility matrices; writes results.csv and
    /// aggregates.csv.
    Simulate {
        /// JSON sweep configuration; flags override its fields.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Number of synthetic matrices to generate instead of reading data.
        #[arg(long)]
        synthetic: Option<usize>,
        /// Matrix file in the block format.
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        epsilon: Option<String>,
        /// Matrices kept from a data file.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Write synthetic utility matrices in the block format.
    Gen {
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ObjectiveArg {
    D,
    Rho,
    Nw,
    #[value(name = "d-c")]
    DC,
    #[value(name = "rho-c")]
    RhoC,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CriterionArg {
    MinD,
    MinRho,
    EnvyFree,
    MaxNash,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GuessArg {
    Exhaustive,
    PerScale,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum O2Arg {
    Opportunity,
    Strict,
}

/// A run that completed without an input error.
enum Outcome {
    Done(Value),
    Infeasible(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Done(v)) => {
            let text = serde_json::to_string_pretty(&v).expect("JSON serializes");
            // a closed pipe (e.g. `| head`) is not an error of ours
            let _ = writeln!(std::io::stdout(), "{text}");
            ExitCode::SUCCESS
        }
        Ok(Outcome::Infeasible(msg)) => {
            eprintln!("infeasible: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Validate { instance } => validate(&instance),
        Command::Aw { instance, sell } => aw(&instance, &sell),
        Command::Solve {
            instance,
            objective,
            threshold,
        } => solve(&instance, objective, threshold.as_deref()),
        Command::Fptas {
            instance,
            epsilon,
            guesses,
            o2,
        } => fptas(&instance, &epsilon, guesses, o2),
        Command::Oracle { instance, criterion, q } => oracle(&instance, criterion, q.as_deref()),
        Command::Simulate {
            config,
            synthetic,
            data,
            out,
            seed,
            epsilon,
            limit,
        } => simulate(SimulateArgs {
            config,
            synthetic,
            data,
            out,
            seed,
            epsilon,
            limit,
        }),
        Command::Gen { count, seed, out } => gen(count, seed, &out),
    }
}

fn read_instance(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Instance::from_json_str(&text).with_context(|| format!("invalid instance {}", path.display()))
}

fn rational_arg(flag: &str, text: &str) -> Result<num_rational::BigRational> {
    parse_rational(text).with_context(|| format!("--{flag}: cannot parse {text:?} as a rational"))
}

fn validate(path: &Path) -> Result<Outcome> {
    let inst = read_instance(path)?;
    Ok(Outcome::Done(json!({
        "valid": true,
        "resources": inst.len(),
        "budget": inst.budget().to_string(),
        "total_u1": inst.total(dsirs::Agent::One),
        "total_u2": inst.total(dsirs::Agent::Two),
    })))
}

fn plan_report(inst: &Instance, plan: &Plan) -> Value {
    let r = welfare(plan, inst).expect("plan partitions the instance");
    json!({
        "plan": plan.to_json(inst),
        "w1": to_fraction_string(&r.w1),
        "w2": to_fraction_string(&r.w2),
        "d": to_fraction_string(&r.d),
        "rho": rho_string(&r.rho),
        "feasible": r.feasible,
    })
}

fn rho_string(rho: &Rho) -> String {
    match rho {
        Rho::Finite(v) => to_fraction_string(v),
        Rho::Infinite => "inf".to_string(),
    }
}

fn aw(path: &Path, sell: &[String]) -> Result<Outcome> {
    let inst = read_instance(path)?;
    let s0 = inst
        .set_from_names(sell)
        .map_err(|name| anyhow::anyhow!("--sell: unknown resource {name:?}"))?;
    let classic = classic_aw(&inst).context("classic Adjusted Winner")?;
    let ctx = AwContext::new(&inst);
    let (_, _, halt) = ctx.subplan(s0);
    let derived = ctx.derived_plan(s0);
    let names = |idx: &[usize]| idx.iter().map(|&i| inst.resource(i).name.clone()).collect::<Vec<_>>();
    let split = classic.split.as_ref().map(|s| {
        json!({
            "resource": inst.resource(s.resource).name,
            "retained": to_fraction_string(&s.retained),
            "advantaged": match s.advantaged { dsirs::Agent::One => 1, dsirs::Agent::Two => 2 },
        })
    });
    let mut derived_json = plan_report(&inst, &derived);
    derived_json["halt"] = json!(halt.as_str());
    derived_json["affordable"] = json!(inst.affordable(s0));
    Ok(Outcome::Done(json!({
        "classic": {
            "s1": inst.names(classic.s1),
            "s2": inst.names(classic.s2),
            "transferred": names(&classic.transferred),
            "before_split": [classic.before_split.0, classic.before_split.1],
            "split": split,
            "w1": to_fraction_string(&classic.w1),
            "w2": to_fraction_string(&classic.w2),
        },
        "derived": derived_json,
    })))
}

fn solve(path: &Path, objective: ObjectiveArg, threshold: Option<&str>) -> Result<Outcome> {
    let inst = read_instance(path)?;
    let need = || -> Result<num_rational::BigRational> {
        match threshold {
            Some(t) => rational_arg("threshold", t),
            None => bail!("--threshold is required for the minimum-cost objectives"),
        }
    };
    let objective = match objective {
        ObjectiveArg::D => Objective::MinD,
        ObjectiveArg::Rho => Objective::MinRho,
        ObjectiveArg::Nw => Objective::MaxNash,
        ObjectiveArg::DC => Objective::MinCostGivenD(need()?),
        ObjectiveArg::RhoC => Objective::MinCostGivenRho(need()?),
    };
    match solve_awns_exact(&inst, &objective) {
        Ok(res) => {
            debug_assert_eq!(objective_value(&inst, &objective, res.best()), res.objective);
            Ok(Outcome::Done(serde_json::to_value(res.to_json(&inst))?))
        }
        Err(ExactError::Infeasible) => Ok(Outcome::Infeasible(ExactError::Infeasible.to_string())),
        Err(e) => Err(e.into()),
    }
}

fn fptas(path: &Path, epsilon: &str, guesses: GuessArg, o2: O2Arg) -> Result<Outcome> {
    let inst = read_instance(path)?;
    let eps = rational_arg("epsilon", epsilon)?;
    let opts = FptasOptions {
        guess_mode: match guesses {
            GuessArg::Exhaustive => GuessMode::Exhaustive,
            GuessArg::PerScale => GuessMode::PerScale,
        },
        orientation: Orientation::Both,
        o2_mode: match o2 {
            O2Arg::Opportunity => O2Mode::Opportunity,
            O2Arg::Strict => O2Mode::StrictPaper,
        },
    };
    match fptas_awns_rho_with(&inst, &eps, &opts) {
        Ok(out) => Ok(Outcome::Done(serde_json::to_value(out.result.to_json(&inst))?)),
        Err(FptasError::Infeasible) => Ok(Outcome::Infeasible(FptasError::Infeasible.to_string())),
        Err(e) => Err(anyhow::Error::new(e).context("--epsilon")),
    }
}

fn oracle(path: &Path, criterion: CriterionArg, q: Option<&str>) -> Result<Outcome> {
    let inst = read_instance(path)?;
    let q = match q {
        Some(t) => QMode::Pinned(rational_arg("q", t)?),
        None => QMode::Derived,
    };
    let criterion = match criterion {
        CriterionArg::MinD => OracleCriterion::MinD,
        CriterionArg::MinRho => OracleCriterion::MinRho,
        CriterionArg::EnvyFree => OracleCriterion::ExistsEnvyFree,
        CriterionArg::MaxNash => OracleCriterion::MaxNash,
    };
    match oracle_best_plan(&inst, &criterion, &q) {
        Ok(OracleOutcome::Optimum(res)) => Ok(Outcome::Done(serde_json::to_value(res.to_json(&inst))?)),
        Ok(OracleOutcome::EnvyFree { exists, witnesses }) => Ok(Outcome::Done(json!({
            "exists": exists,
            "witnesses": witnesses.iter().map(|p| plan_report(&inst, p)).collect::<Vec<_>>(),
        }))),
        Err(ExactError::Infeasible) => Ok(Outcome::Infeasible(ExactError::Infeasible.to_string())),
        Err(e) => Err(e.into()),
    }
}

/// Sweep configuration file; every field is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    data: Option<PathBuf>,
    synthetic: Option<usize>,
    limit: Option<usize>,
    budgets: Option<Vec<u64>>,
    /// Pairs written `cost/price`, e.g. `avg/max`.
    modes: Option<Vec<String>>,
    epsilon: Option<String>,
    seed: Option<u64>,
    dominance: Option<u64>,
    guesses: Option<String>,
}

struct SimulateArgs {
    config: Option<PathBuf>,
    synthetic: Option<usize>,
    data: Option<PathBuf>,
    out: PathBuf,
    seed: Option<u64>,
    epsilon: Option<String>,
    limit: Option<usize>,
}

fn parse_mode(text: &str) -> Result<ModePair> {
    let (c, p) = text
        .split_once('/')
        .with_context(|| format!("modes: {text:?} is not of the form cost/price"))?;
    match (Op::parse(c.trim()), Op::parse(p.trim())) {
        (Some(cost), Some(price)) => Ok(ModePair { cost, price }),
        _ => bail!("modes: {text:?} uses an operator other than avg, max or min"),
    }
}

fn simulate(args: SimulateArgs) -> Result<Outcome> {
    let file: ConfigFile = match &args.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("config {}", p.display()))?
        }
        None => ConfigFile::default(),
    };
    let mut config = SweepConfig {
        budgets: file.budgets.unwrap_or_else(|| DEFAULT_BUDGETS.to_vec()),
        ..SweepConfig::default()
    };
    if let Some(modes) = &file.modes {
        config.modes = modes.iter().map(|m| parse_mode(m)).collect::<Result<_>>()?;
    }
    if let Some(e) = args.epsilon.as_ref().or(file.epsilon.as_ref()) {
        config.epsilon = rational_arg("epsilon", e)?;
    }
    if let Some(s) = args.seed.or(file.seed) {
        config.seed = s;
    }
    if let Some(d) = file.dominance {
        config.dominance = d;
    }
    if let Some(g) = &file.guesses {
        config.guess_mode = match g.as_str() {
            "exhaustive" => GuessMode::Exhaustive,
            "per-scale" => GuessMode::PerScale,
            other => bail!("guesses: unknown mode {other:?}"),
        };
    }
    if config.budgets.is_empty() || config.modes.is_empty() {
        bail!("budgets and modes must be non-empty");
    }
    let limit = args.limit.or(file.limit).unwrap_or(dsirs_sim::matrix::DEFAULT_LIMIT);
    let matrices = match (args.synthetic.or(file.synthetic), args.data.or(file.data)) {
        (Some(n), None) => synthesize_matrices(n, config.seed),
        (None, Some(path)) => load_utility_matrices(&path, limit)?,
        (Some(_), Some(_)) => bail!("--synthetic and --data are mutually exclusive"),
        (None, None) => bail!("one of --synthetic or --data (or the config fields) is required"),
    };
    if matrices.is_empty() {
        bail!("no accepted utility matrices");
    }

    let records = run_sweep(&matrices, &config)?;
    let rows = aggregate(&records)?;
    std::fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let results = args.out.join("results.csv");
    let aggregates = args.out.join("aggregates.csv");
    std::fs::write(&results, results_csv(&records)).with_context(|| format!("writing {}", results.display()))?;
    std::fs::write(&aggregates, aggregates_csv(&rows)).with_context(|| format!("writing {}", aggregates.display()))?;
    Ok(Outcome::Done(json!({
        "instances": matrices.len(),
        "records": records.len(),
        "infeasible": records.iter().filter(|r| !r.feasible()).count(),
        "results": results.display().to_string(),
        "aggregates": aggregates.display().to_string(),
    })))
}

fn gen(count: usize, seed: u64, out: &Path) -> Result<Outcome> {
    if count == 0 {
        bail!("--count must be at least 1");
    }
    let matrices = synthesize_matrices(count, seed);
    std::fs::write(out, format_matrices(&matrices)).with_context(|| format!("writing {}", out.display()))?;
    Ok(Outcome::Done(
        json!({ "count": count, "seed": seed, "out": out.display().to_string() }),
    ))
}
