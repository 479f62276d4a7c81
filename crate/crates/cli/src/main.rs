//! `keyshift` command line: solve MTD rotation games, run the experiment
//! sweeps, and simulate policies.
//!
//! Exit codes: 0 solved and certified, 1 solved but certification failed,
//! 2 strategy-space budget exceeded, 3 usage or parse errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use keyshift::document::load_spec;
use keyshift::equilibrium::StationaryPolicy;
use keyshift::experiments::{
    beta_grid, beta_sweep_table, bundle_meta, certificate_table, compare_uniform,
    compare_uniform_table, cost_sweep_table, game_shape, policies_from_bundle, policies_table,
    power_sweep_table, run_simulation, simulation_out, simulation_table, solve_bundle,
    solve_game, spec_hash, sweep_beta, sweep_cost, sweep_power, PowerScenario, ResultBundle,
    SolveOptions,
};
use keyshift::game::{CostKind, GameSpec};
use keyshift::sim::SimulationConfig;
use keyshift::{Error, SimulationSummary};

#[derive(Parser)]
#[command(
    name = "keyshift",
    version,
    about = "Equilibrium solver and simulator for encryption-rotation MTD games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    /// JSON result bundle only.
    Json,
    /// JSON result bundle plus CSV tables.
    Csv,
}

#[derive(Args)]
struct CommonArgs {
    /// Game description file (JSON).
    #[arg(long)]
    spec: PathBuf,

    /// Output directory; created if missing.
    #[arg(long, default_value = "out")]
    out: PathBuf,

    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,

    /// Refuse to build bimatrix games larger than this many cells.
    #[arg(long, default_value_t = 10_000_000)]
    max_cells: u64,

    /// Initial Lemke-Howson label (1-based).
    #[arg(long, default_value_t = 1)]
    label: usize,

    /// Seed for commands that sample.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one game: equilibrium policies, values, certificate.
    Solve {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Solve across a discount-factor grid.
    SweepBeta {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        step: f64,
    },
    /// Compare the equilibrium defender against uniform play.
    CompareUniform {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Solve per (discount, cost model) and report one state's value.
    SweepCost {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated: none,log,linear.
        #[arg(long, default_value = "none,log,linear")]
        models: String,
        /// Cost value; defaults to the spec's q.
        #[arg(long)]
        q: Option<f64>,
        /// Grid as from:to:step.
        #[arg(long, default_value = "0.1:0.9:0.1")]
        betas: String,
        /// 1-based state whose defender value is reported.
        #[arg(long, default_value_t = 2)]
        state: usize,
    },
    /// Solve per power scenario ("p1,p2,..:p1,p2,.." defender:attacker).
    SweepPower {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long = "scenario")]
        scenarios: Vec<String>,
    },
    /// Monte-Carlo simulation of stationary policies.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 10_000)]
        episodes: usize,
        /// Steps per episode; 0 picks a horizon from the discounted tail.
        #[arg(long, default_value_t = 0)]
        horizon: usize,
        /// Result bundle of a previous solve to take policies from.
        #[arg(long)]
        policies: Option<PathBuf>,
        /// Solve the spec first and simulate its equilibrium policies.
        #[arg(long, default_value_t = false)]
        solve_first: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // clap would exit 2; usage problems are 3 here.
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::BudgetExceeded { .. } => 2,
        _ => 3,
    }
}

fn solve_options(common: &CommonArgs) -> SolveOptions {
    SolveOptions {
        label: common.label,
        max_cells: common.max_cells,
        ..SolveOptions::default()
    }
}

fn write_out(dir: &Path, name: &str, contents: &str) -> keyshift::Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(name), contents)?;
    Ok(())
}

fn write_tables(
    common: &CommonArgs,
    tables: &[(&str, keyshift::emit::Table)],
) -> keyshift::Result<()> {
    if common.format == OutputFormat::Csv {
        for (name, table) in tables {
            write_out(&common.out, &format!("{name}.csv"), &table.to_csv())?;
        }
    }
    Ok(())
}

fn parse_models(text: &str) -> keyshift::Result<Vec<CostKind>> {
    text.split(',')
        .map(|token| match token.trim() {
            "none" => Ok(CostKind::None),
            "linear" => Ok(CostKind::Linear),
            "log" => Ok(CostKind::Logarithmic),
            other => Err(Error::Usage(format!(
                "unknown cost model {other:?} (expected none, log, linear)"
            ))),
        })
        .collect()
}

fn parse_betas(text: &str) -> keyshift::Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Usage(format!(
            "beta grid must be from:to:step, got {text:?}"
        )));
    }
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::Usage(format!("bad number {s:?} in beta grid")))
    };
    beta_grid(parse(parts[0])?, parse(parts[1])?, parse(parts[2])?)
}

fn parse_scenario(text: &str, techniques: usize) -> keyshift::Result<PowerScenario> {
    let vectors: Vec<&str> = text.split(':').collect();
    if vectors.len() != 2 {
        return Err(Error::Usage(format!(
            "scenario must be defender:attacker power lists, got {text:?}"
        )));
    }
    let parse_list = |s: &str| -> keyshift::Result<Vec<f64>> {
        s.split(',')
            .map(|x| {
                x.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Usage(format!("bad power value {x:?}")))
            })
            .collect()
    };
    let scenario = PowerScenario {
        defender: parse_list(vectors[0])?,
        attacker: parse_list(vectors[1])?,
    };
    if scenario.defender.len() != techniques || scenario.attacker.len() != techniques {
        return Err(Error::Usage(format!(
            "scenario {text:?} needs {techniques} entries per player"
        )));
    }
    Ok(scenario)
}

/// Mirror-image power scenarios used when none are given: ascending,
/// equal, and descending technique powers.
fn default_scenarios(spec: &GameSpec<f64>) -> Vec<PowerScenario> {
    let n = spec.num_techniques;
    let up: Vec<f64> = (0..n).map(|i| 1.0 + 2.0 * i as f64 / (n.max(2) - 1) as f64).collect();
    let down: Vec<f64> = up.iter().rev().copied().collect();
    let mean = up.iter().sum::<f64>() / n as f64;
    let equal = vec![mean; n];
    [up, equal, down]
        .into_iter()
        .map(|p| PowerScenario {
            defender: p.clone(),
            attacker: p,
        })
        .collect()
}

fn print_summary(summary: &SimulationSummary) {
    println!(
        "simulated {} episodes/start x {} steps (seed {})",
        summary.episodes_per_start, summary.horizon, summary.seed
    );
    for s in &summary.per_start {
        println!(
            "  s{}: defender {:.4} +/- {:.4}, attacker {:.4} +/- {:.4}",
            s.start + 1,
            s.mean_defender,
            s.se_defender,
            s.mean_attacker,
            s.se_attacker
        );
    }
    println!(
        "  switch rate {:.4}",
        keyshift::empirical_switch_rate(summary)
    );
}

fn run(cli: Cli) -> keyshift::Result<u8> {
    match cli.command {
        Command::Solve { common } => {
            let spec = load_spec(&common.spec)?;
            let outcome = solve_game(&spec, &solve_options(&common))?;
            let bundle = solve_bundle(&outcome, common.label);
            write_out(&common.out, "result.json", &bundle.to_json())?;
            write_tables(
                &common,
                &[
                    ("policies", policies_table(&outcome)),
                    ("values", values_for(&outcome)),
                    ("certificate", certificate_table(&outcome)),
                ],
            )?;
            println!(
                "solved {}x{} bimatrix (label {}), certificate {}",
                outcome.rows,
                outcome.cols,
                common.label,
                if outcome.certificate.passed {
                    "PASSED"
                } else {
                    "FAILED"
                }
            );
            for s in 0..outcome.spec.state_count() {
                println!(
                    "  s{}: defender value {:.6}, attacker value {:.6}",
                    s + 1,
                    outcome.defender_values.values[s],
                    outcome.attacker_values.values[s]
                );
            }
            if let Some(slot) = outcome.slot {
                if !slot.strict {
                    eprintln!(
                        "warning: slot duration {}s does not strictly undercut the fastest brute-force sweep",
                        slot.seconds
                    );
                }
                println!("  rotation slot: {}s (strict: {})", slot.seconds, slot.strict);
            }
            Ok(if outcome.certificate.passed { 0 } else { 1 })
        }
        Command::SweepBeta {
            common,
            from,
            to,
            step,
        } => {
            let spec = load_spec(&common.spec)?;
            let points = sweep_beta(&spec, from, to, step, &solve_options(&common))?;
            let table = beta_sweep_table(&points);
            let mut bundle = empty_bundle(&spec, "sweep-beta", &common);
            bundle.sweep = Some(table.clone());
            write_out(&common.out, "result.json", &bundle.to_json())?;
            write_tables(&common, &[("sweep_beta", table)])?;
            println!("swept {} discount factors", points.len());
            Ok(0)
        }
        Command::CompareUniform { common } => {
            let spec = load_spec(&common.spec)?;
            let rows = compare_uniform(&spec, &solve_options(&common))?;
            let table = compare_uniform_table(&rows);
            let mut bundle = empty_bundle(&spec, "compare-uniform", &common);
            bundle.sweep = Some(table.clone());
            write_out(&common.out, "result.json", &bundle.to_json())?;
            write_tables(&common, &[("compare_uniform", table)])?;
            for r in &rows {
                println!(
                    "  s{}: equilibrium {:.4}, uniform {:.4}, increase {}",
                    r.state + 1,
                    r.equilibrium,
                    r.uniform,
                    r.percent_increase
                        .map_or("undefined".to_string(), |p| format!("{p:.2}%"))
                );
            }
            Ok(0)
        }
        Command::SweepCost {
            common,
            models,
            q,
            betas,
            state,
        } => {
            let spec = load_spec(&common.spec)?;
            if state == 0 || state > spec.state_count() {
                return Err(Error::Usage(format!(
                    "state {state} outside 1..={}",
                    spec.state_count()
                )));
            }
            let kinds = parse_models(&models)?;
            let grid = parse_betas(&betas)?;
            let q = q.unwrap_or_else(|| {
                spec.cost_model.q().copied().unwrap_or(0.0)
            });
            let points = sweep_cost(&spec, &kinds, q, &grid, &solve_options(&common))?;
            let table = cost_sweep_table(&points, state - 1);
            let mut bundle = empty_bundle(&spec, "sweep-cost", &common);
            bundle.sweep = Some(table.clone());
            write_out(&common.out, "result.json", &bundle.to_json())?;
            write_tables(&common, &[("sweep_cost", table)])?;
            println!("swept {} (beta, model) points", points.len());
            Ok(0)
        }
        Command::SweepPower { common, scenarios } => {
            let spec = load_spec(&common.spec)?;
            let scenarios = if scenarios.is_empty() {
                default_scenarios(&spec)
            } else {
                scenarios
                    .iter()
                    .map(|s| parse_scenario(s, spec.num_techniques))
                    .collect::<keyshift::Result<Vec<_>>>()?
            };
            let points = sweep_power(&spec, &scenarios, &solve_options(&common))?;
            let table = power_sweep_table(&points);
            let mut bundle = empty_bundle(&spec, "sweep-power", &common);
            bundle.sweep = Some(table.clone());
            write_out(&common.out, "result.json", &bundle.to_json())?;
            write_tables(&common, &[("sweep_power", table)])?;
            println!("swept {} power scenarios", points.len());
            Ok(0)
        }
        Command::Simulate {
            common,
            episodes,
            horizon,
            policies,
            solve_first,
        } => {
            let spec = load_spec(&common.spec)?;
            let (defender, attacker): (StationaryPolicy<f64>, StationaryPolicy<f64>) =
                if solve_first {
                    let outcome = solve_game(&spec, &solve_options(&common))?;
                    (
                        outcome.defender_policy.map::<f64>(),
                        outcome.attacker_policy.map::<f64>(),
                    )
                } else if let Some(path) = policies {
                    let text = std::fs::read_to_string(&path)?;
                    let bundle = ResultBundle::parse(&text)?;
                    policies_from_bundle(&bundle, &spec)?
                } else {
                    return Err(Error::Usage(
                        "simulate needs --policies <result.json> or --solve-first".into(),
                    ));
                };

            let horizon = if horizon == 0 {
                keyshift::experiments::simulation_horizon(&spec, 1e-6)
            } else {
                horizon
            };
            let config = SimulationConfig {
                episodes_per_start: episodes,
                horizon,
                seed: common.seed.unwrap_or(0),
            };
            let summary = run_simulation(&spec, &defender, &attacker, &config)?;

            let mut bundle = empty_bundle(&spec, "simulate", &common);
            bundle.meta.seed = Some(config.seed);
            bundle.simulation = Some(simulation_out(&summary));
            write_out(&common.out, "result.json", &bundle.to_json())?;
            write_tables(&common, &[("simulation", simulation_table(&summary))])?;
            print_summary(&summary);
            Ok(0)
        }
    }
}

fn values_for(outcome: &keyshift::experiments::SolveOutcome) -> keyshift::emit::Table {
    keyshift::experiments::values_table(outcome)
}

fn empty_bundle(spec: &GameSpec<f64>, command: &str, common: &CommonArgs) -> ResultBundle {
    let mut meta = bundle_meta(spec, command, Some(common.label), common.seed);
    meta.spec_sha256 = spec_hash(spec);
    ResultBundle {
        meta,
        game: game_shape(spec),
        policies: None,
        values: None,
        certificate: None,
        timing: None,
        sweep: None,
        simulation: None,
    }
}
