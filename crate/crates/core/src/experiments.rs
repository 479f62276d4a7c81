//! End-to-end runs: solve, experiment sweeps, and the machine-readable
//! result bundle the CLI writes.
//!
//! The solve pipeline is: exact rational bimatrix -> Lemke-Howson ->
//! verification gate -> policy projection -> values -> no-deviation
//! certificate. Sweeps dispatch independent solves in parallel and
//! assemble plain tables.

use chrono::Utc;
use num::rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::document::SpecDocument;
use crate::emit::{emit, Table};
use crate::equilibrium::{
    deviation_certificate, percentage_increase, policy_values, project_attacker_policy,
    project_defender_policy, AttackerCriterion, DeviationOptions, DeviationReport,
    StationaryPolicy, ValueVector,
};
use crate::error::{Error, Result};
use crate::game::{max_slot_duration, CostKind, GameSpec, SlotDuration, StateId};
use crate::linalg::Mat;
use crate::scalar::Scalar;
use crate::sim::{simulate, SimulationConfig, SimulationSummary};
use crate::solver::{lemke_howson, verify_nash, MixedStrategyPair, NashReport};
use crate::strategy::{
    attacker_strategy_count, build_rational_bimatrix, defender_strategy_count, truncation_horizon,
    AttackerValuation, BuildOptions,
};

/// Knobs for one solve.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Initial Lemke-Howson label, 1-based.
    pub label: usize,
    pub max_cells: u64,
    pub eval_tolerance: f64,
    pub certificate_epsilon: f64,
    pub attacker_criterion: AttackerCriterion,
    pub attacker_valuation: AttackerValuation,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            label: 1,
            max_cells: 10_000_000,
            eval_tolerance: 1e-9,
            certificate_epsilon: 1e-6,
            attacker_criterion: AttackerCriterion::default(),
            attacker_valuation: AttackerValuation::default(),
        }
    }
}

/// Everything a solve produces.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub spec: GameSpec<f64>,
    pub rows: usize,
    pub cols: usize,
    pub pair: MixedStrategyPair<BigRational>,
    pub nash_check: NashReport,
    pub defender_policy: StationaryPolicy<BigRational>,
    pub attacker_policy: StationaryPolicy<BigRational>,
    pub defender_values: ValueVector<f64>,
    pub attacker_values: ValueVector<f64>,
    pub certificate: DeviationReport,
    pub slot: Option<SlotDuration>,
}

/// Solve the full pipeline for one spec.
pub fn solve_game(spec: &GameSpec<f64>, options: &SolveOptions) -> Result<SolveOutcome> {
    let spec = spec.clone().validated()?;
    let build = BuildOptions {
        max_cells: options.max_cells,
        eval_tolerance: options.eval_tolerance,
        attacker_valuation: options.attacker_valuation,
    };
    let bimatrix = build_rational_bimatrix(&spec, &build)?;
    let pair = lemke_howson(&bimatrix, options.label)?;
    let nash_check = verify_nash(&bimatrix, &pair, 1e-9)?;
    if !nash_check.ok {
        return Err(Error::Numeric(format!(
            "pivoting returned a non-equilibrium: {nash_check:?}"
        )));
    }

    let rational_spec = spec.map::<BigRational>();
    let defender_policy = project_defender_policy(&rational_spec, &pair.row)?;
    let attacker_policy = project_attacker_policy(&rational_spec, &pair.col)?;

    let e = defender_policy.map::<f64>();
    let h = attacker_policy.map::<f64>();
    let (defender_values, attacker_values) =
        policy_values(&spec, &e, &h, options.eval_tolerance)?;
    let certificate = deviation_certificate(
        &spec,
        &e,
        &h,
        &DeviationOptions {
            epsilon: options.certificate_epsilon,
            attacker_criterion: options.attacker_criterion,
            eval_tolerance: options.eval_tolerance,
        },
    )?;

    let slot = spec
        .timing
        .as_ref()
        .map(|t| max_slot_duration(&t.brute_force_seconds, t.margin))
        .transpose()?;

    Ok(SolveOutcome {
        rows: bimatrix.rows(),
        cols: bimatrix.cols(),
        spec,
        pair,
        nash_check,
        defender_policy,
        attacker_policy,
        defender_values,
        attacker_values,
        certificate,
        slot,
    })
}

/// One solve of a beta sweep.
#[derive(Debug, Clone)]
pub struct BetaPoint {
    pub beta: f64,
    pub defender_values: Vec<f64>,
    pub attacker_values: Vec<f64>,
}

/// Inclusive beta grid `from, from + step, ..., <= to`.
pub fn beta_grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !(from > 0.0 && from < 1.0 && to > 0.0 && to < 1.0) {
        return Err(Error::Usage(format!(
            "betas must lie strictly inside (0, 1); got {from}..{to}"
        )));
    }
    if from > to {
        return Err(Error::Usage(format!(
            "reversed sweep bounds: from {from} > to {to}"
        )));
    }
    if step <= 0.0 {
        return Err(Error::Usage(format!("step must be positive; got {step}")));
    }
    let mut betas = Vec::new();
    let mut i = 0usize;
    loop {
        let beta = from + step * i as f64;
        if beta > to + 1e-9 {
            break;
        }
        betas.push(beta);
        i += 1;
    }
    Ok(betas)
}

/// Solve once per beta; everything else fixed.
pub fn sweep_beta(
    spec: &GameSpec<f64>,
    from: f64,
    to: f64,
    step: f64,
    options: &SolveOptions,
) -> Result<Vec<BetaPoint>> {
    let betas = beta_grid(from, to, step)?;
    betas
        .par_iter()
        .map(|&beta| {
            let mut spec = spec.clone();
            spec.discount = beta;
            let outcome = solve_game(&spec, options)?;
            Ok(BetaPoint {
                beta,
                defender_values: outcome.defender_values.values.clone(),
                attacker_values: outcome.attacker_values.values.clone(),
            })
        })
        .collect()
}

/// Equilibrium-vs-uniform comparison row.
#[derive(Debug, Clone)]
pub struct UniformComparison {
    pub state: usize,
    pub equilibrium: f64,
    pub uniform: f64,
    pub percent_increase: Option<f64>,
}

/// Evaluate the defender under its equilibrium policy and under uniform
/// play, both against the equilibrium attacker.
pub fn compare_uniform(
    spec: &GameSpec<f64>,
    options: &SolveOptions,
) -> Result<Vec<UniformComparison>> {
    let outcome = solve_game(spec, options)?;
    let h = outcome.attacker_policy.map::<f64>();
    let uniform = StationaryPolicy::<f64>::uniform(spec.state_count(), spec.state_count());
    let (v_uniform, _) = policy_values(&outcome.spec, &uniform, &h, options.eval_tolerance)?;
    let pct = percentage_increase(&outcome.defender_values, &v_uniform);
    Ok((0..spec.state_count())
        .map(|s| UniformComparison {
            state: s,
            equilibrium: outcome.defender_values.values[s],
            uniform: v_uniform.values[s],
            percent_increase: pct[s],
        })
        .collect())
}

/// One (beta, cost-model) solve of a cost sweep.
#[derive(Debug, Clone)]
pub struct CostPoint {
    pub beta: f64,
    pub kind: CostKind,
    pub defender_values: Vec<f64>,
}

/// Solve per (beta, model) with the given cost value `q`.
pub fn sweep_cost(
    spec: &GameSpec<f64>,
    kinds: &[CostKind],
    q: f64,
    betas: &[f64],
    options: &SolveOptions,
) -> Result<Vec<CostPoint>> {
    if kinds.is_empty() || betas.is_empty() {
        return Err(Error::Usage("cost sweep needs models and betas".into()));
    }
    let mut jobs = Vec::new();
    for &beta in betas {
        for &kind in kinds {
            jobs.push((beta, kind));
        }
    }
    jobs.par_iter()
        .map(|&(beta, kind)| {
            let mut spec = spec.clone();
            spec.discount = beta;
            spec.cost_model = kind.model(q);
            let outcome = solve_game(&spec, options)?;
            Ok(CostPoint {
                beta,
                kind,
                defender_values: outcome.defender_values.values.clone(),
            })
        })
        .collect()
}

/// Power vectors for one sweep scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerScenario {
    pub defender: Vec<f64>,
    pub attacker: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct PowerPoint {
    pub scenario: PowerScenario,
    pub defender_values: Vec<f64>,
}

/// Solve once per power scenario at the spec's discount factor.
pub fn sweep_power(
    spec: &GameSpec<f64>,
    scenarios: &[PowerScenario],
    options: &SolveOptions,
) -> Result<Vec<PowerPoint>> {
    if scenarios.is_empty() {
        return Err(Error::Usage("power sweep needs at least one scenario".into()));
    }
    for sc in scenarios {
        if sc.defender.len() != spec.num_techniques || sc.attacker.len() != spec.num_techniques {
            return Err(Error::Usage(format!(
                "power scenarios need {} entries per player",
                spec.num_techniques
            )));
        }
    }
    scenarios
        .par_iter()
        .map(|sc| {
            let mut spec = spec.clone();
            spec.defender_power = sc.defender.clone();
            spec.attacker_power = sc.attacker.clone();
            let outcome = solve_game(&spec, options)?;
            Ok(PowerPoint {
                scenario: sc.clone(),
                defender_values: outcome.defender_values.values.clone(),
            })
        })
        .collect()
}

/// Horizon for simulation value estimates: discounted tail below
/// `epsilon` relative to the value scale.
pub fn simulation_horizon(spec: &GameSpec<f64>, epsilon_relative: f64) -> usize {
    let u_max = spec.max_abs_stage_utility().max(1.0);
    let scale = u_max / (1.0 - spec.discount);
    truncation_horizon(u_max, spec.discount, 0.0, epsilon_relative * scale)
}

// ---------------------------------------------------------------------------
// Result bundle
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BundleMeta {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub spec_sha256: String,
    pub created_at: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GameShape {
    pub techniques: usize,
    pub keys_per_technique: usize,
    pub states: usize,
    pub defender_strategies: String,
    pub attacker_strategies: String,
}

/// Policies as formatted probability matrices, actions by states.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PoliciesOut {
    pub defender: Vec<Vec<String>>,
    pub attacker: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ValuesOut {
    pub defender: Vec<String>,
    pub attacker: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CertificateEntryOut {
    pub state: usize,
    pub value: String,
    pub best_response: String,
    pub regret: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CertificateOut {
    pub passed: bool,
    pub epsilon: String,
    pub attacker_criterion: String,
    pub defender: Vec<CertificateEntryOut>,
    pub attacker: Vec<CertificateEntryOut>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TimingOut {
    pub max_slot_seconds: String,
    pub strict: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SimulationStartOut {
    pub start: usize,
    pub mean_defender: String,
    pub se_defender: String,
    pub mean_attacker: String,
    pub se_attacker: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SimulationOut {
    pub episodes_per_start: usize,
    pub horizon: usize,
    pub seed: u64,
    pub switch_rate: String,
    pub visit_distribution: Vec<String>,
    pub per_start: Vec<SimulationStartOut>,
}

/// Machine-readable record of one command run. Re-running with the same
/// spec, label and seed reproduces identical numeric content; only
/// `created_at` differs.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ResultBundle {
    pub meta: BundleMeta,
    pub game: GameShape,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policies: Option<PoliciesOut>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<ValuesOut>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateOut>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<TimingOut>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Table>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationOut>,
}

impl ResultBundle {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("bundle always serializes")
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// SHA-256 of the canonical spec document, hex-encoded.
pub fn spec_hash(spec: &GameSpec<f64>) -> String {
    let canonical = SpecDocument::from_game_spec(spec).canonical_string();
    let digest = Sha256::digest(canonical.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn bundle_meta(
    spec: &GameSpec<f64>,
    command: &str,
    label: Option<usize>,
    seed: Option<u64>,
) -> BundleMeta {
    BundleMeta {
        tool: "keyshift".to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: command.to_string(),
        spec_sha256: spec_hash(spec),
        created_at: Utc::now().to_rfc3339(),
        label,
        seed,
    }
}

pub fn game_shape(spec: &GameSpec<f64>) -> GameShape {
    GameShape {
        techniques: spec.num_techniques,
        keys_per_technique: spec.keys_per_technique,
        states: spec.state_count(),
        defender_strategies: defender_strategy_count(spec).to_string(),
        attacker_strategies: attacker_strategy_count(spec).to_string(),
    }
}

fn matrix_strings(mat: &Mat<BigRational>) -> Vec<Vec<String>> {
    (0..mat.rows())
        .map(|r| (0..mat.cols()).map(|c| emit(mat[(r, c)].to_f64())).collect())
        .collect()
}

fn certificate_out(report: &DeviationReport) -> CertificateOut {
    let entries = |list: &[crate::equilibrium::CertificateEntry]| {
        list.iter()
            .map(|e| CertificateEntryOut {
                state: e.state + 1,
                value: emit(e.value),
                best_response: emit(e.best_response),
                regret: emit(e.regret),
            })
            .collect()
    };
    CertificateOut {
        passed: report.passed,
        epsilon: emit(report.epsilon),
        attacker_criterion: match report.attacker_criterion {
            AttackerCriterion::Myopic => "myopic".to_string(),
            AttackerCriterion::Discounted => "discounted".to_string(),
        },
        defender: entries(&report.defender),
        attacker: entries(&report.attacker),
    }
}

/// Bundle for a plain solve.
pub fn solve_bundle(outcome: &SolveOutcome, label: usize) -> ResultBundle {
    ResultBundle {
        meta: bundle_meta(&outcome.spec, "solve", Some(label), None),
        game: game_shape(&outcome.spec),
        policies: Some(PoliciesOut {
            defender: matrix_strings(outcome.defender_policy.matrix()),
            attacker: matrix_strings(outcome.attacker_policy.matrix()),
        }),
        values: Some(ValuesOut {
            defender: outcome.defender_values.values.iter().map(|v| emit(*v)).collect(),
            attacker: outcome.attacker_values.values.iter().map(|v| emit(*v)).collect(),
        }),
        certificate: Some(certificate_out(&outcome.certificate)),
        timing: outcome.slot.map(|s| TimingOut {
            max_slot_seconds: emit(s.seconds),
            strict: s.strict,
        }),
        sweep: None,
        simulation: None,
    }
}

pub fn simulation_out(summary: &SimulationSummary) -> SimulationOut {
    SimulationOut {
        episodes_per_start: summary.episodes_per_start,
        horizon: summary.horizon,
        seed: summary.seed,
        switch_rate: emit(crate::sim::empirical_switch_rate(summary)),
        visit_distribution: summary.visit_distribution.iter().map(|v| emit(*v)).collect(),
        per_start: summary
            .per_start
            .iter()
            .map(|s| SimulationStartOut {
                start: s.start + 1,
                mean_defender: emit(s.mean_defender),
                se_defender: emit(s.se_defender),
                mean_attacker: emit(s.mean_attacker),
                se_attacker: emit(s.se_attacker),
            })
            .collect(),
    }
}

/// Parse the policies stored in a bundle back into usable form.
pub fn policies_from_bundle(
    bundle: &ResultBundle,
    spec: &GameSpec<f64>,
) -> Result<(StationaryPolicy<f64>, StationaryPolicy<f64>)> {
    let policies = bundle
        .policies
        .as_ref()
        .ok_or_else(|| Error::Usage("bundle carries no policies".into()))?;
    let parse_matrix = |rows: &Vec<Vec<String>>, name: &str| -> Result<Mat<f64>> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if nrows == 0 || rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Parse(format!("{name} policy matrix is ragged")));
        }
        let mut mat = Mat::filled(nrows, ncols, 0.0f64);
        for (r, row) in rows.iter().enumerate() {
            for (c, cell) in row.iter().enumerate() {
                mat[(r, c)] = cell
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad number {cell:?} in {name} policy")))?;
            }
        }
        Ok(mat)
    };
    let e = StationaryPolicy::new(parse_matrix(&policies.defender, "defender")?)?;
    let h = StationaryPolicy::new(parse_matrix(&policies.attacker, "attacker")?)?;
    if e.state_count() != spec.state_count() || h.state_count() != spec.state_count() {
        return Err(Error::DimensionMismatch(
            "bundle policies do not match the spec".into(),
        ));
    }
    Ok((e, h))
}

// ---------------------------------------------------------------------------
// Tables
// ---------------------------------------------------------------------------

/// Long-form policy table: player,action,state,probability.
pub fn policies_table(outcome: &SolveOutcome) -> Table {
    let mut table = Table::new(&["player", "action", "state", "probability"]);
    let mut emit_policy = |player: &str, policy: &StationaryPolicy<BigRational>| {
        for state in 0..policy.state_count() {
            for action in 0..policy.action_count() {
                table.push(vec![
                    player.to_string(),
                    (action + 1).to_string(),
                    (state + 1).to_string(),
                    emit(policy.prob(action, state).to_f64()),
                ]);
            }
        }
    };
    emit_policy("defender", &outcome.defender_policy);
    emit_policy("attacker", &outcome.attacker_policy);
    table
}

pub fn values_table(outcome: &SolveOutcome) -> Table {
    let mut table = Table::new(&["state", "value_defender", "value_attacker"]);
    for s in 0..outcome.spec.state_count() {
        table.push(vec![
            (s + 1).to_string(),
            emit(outcome.defender_values.values[s]),
            emit(outcome.attacker_values.values[s]),
        ]);
    }
    table
}

pub fn certificate_table(outcome: &SolveOutcome) -> Table {
    let mut table = Table::new(&["player", "state", "value", "best_response", "regret"]);
    for (player, entries) in [
        ("defender", &outcome.certificate.defender),
        ("attacker", &outcome.certificate.attacker),
    ] {
        for e in entries {
            table.push(vec![
                player.to_string(),
                (e.state + 1).to_string(),
                emit(e.value),
                emit(e.best_response),
                emit(e.regret),
            ]);
        }
    }
    table
}

pub fn beta_sweep_table(points: &[BetaPoint]) -> Table {
    let mut table = Table::new(&["beta", "state", "value_defender", "value_attacker"]);
    for p in points {
        for s in 0..p.defender_values.len() {
            table.push(vec![
                emit(p.beta),
                (s + 1).to_string(),
                emit(p.defender_values[s]),
                emit(p.attacker_values[s]),
            ]);
        }
    }
    table
}

pub fn compare_uniform_table(rows: &[UniformComparison]) -> Table {
    let mut table = Table::new(&["state", "value_equilibrium", "value_uniform", "percent_increase"]);
    for r in rows {
        table.push(vec![
            (r.state + 1).to_string(),
            emit(r.equilibrium),
            emit(r.uniform),
            r.percent_increase.map_or("NA".to_string(), emit),
        ]);
    }
    table
}

/// One row per (beta, model) at the chosen state (1-based column).
pub fn cost_sweep_table(points: &[CostPoint], state: usize) -> Table {
    let mut table = Table::new(&["beta", "model", "state", "value_defender"]);
    for p in points {
        table.push(vec![
            emit(p.beta),
            p.kind.name().to_string(),
            (state + 1).to_string(),
            emit(p.defender_values[state]),
        ]);
    }
    table
}

pub fn power_sweep_table(points: &[PowerPoint]) -> Table {
    let mut table = Table::new(&["scenario", "defender_power", "attacker_power", "state", "value_defender"]);
    for (i, p) in points.iter().enumerate() {
        let join = |v: &[f64]| {
            v.iter().map(|x| emit(*x)).collect::<Vec<_>>().join(":")
        };
        for s in 0..p.defender_values.len() {
            table.push(vec![
                (i + 1).to_string(),
                join(&p.scenario.defender),
                join(&p.scenario.attacker),
                (s + 1).to_string(),
                emit(p.defender_values[s]),
            ]);
        }
    }
    table
}

pub fn simulation_table(summary: &SimulationSummary) -> Table {
    let mut table = Table::new(&[
        "start",
        "mean_defender",
        "se_defender",
        "mean_attacker",
        "se_attacker",
    ]);
    for s in &summary.per_start {
        table.push(vec![
            (s.start + 1).to_string(),
            emit(s.mean_defender),
            emit(s.se_defender),
            emit(s.mean_attacker),
            emit(s.se_attacker),
        ]);
    }
    table
}

/// Convenience wrapper used by the CLI and tests: simulate from every
/// state under the given policies.
pub fn run_simulation(
    spec: &GameSpec<f64>,
    defender: &StationaryPolicy<f64>,
    attacker: &StationaryPolicy<f64>,
    config: &SimulationConfig,
) -> Result<SimulationSummary> {
    let starts: Vec<StateId> = spec.states().collect();
    simulate(spec, defender, attacker, &starts, config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_grid_validation_and_contents() {
        let grid = beta_grid(0.1, 0.9, 0.1).unwrap();
        assert_eq!(grid.len(), 9);
        assert!((grid[8] - 0.9).abs() < 1e-12);

        assert!(matches!(beta_grid(0.9, 0.1, 0.1), Err(Error::Usage(_))));
        assert!(matches!(beta_grid(0.0, 0.5, 0.1), Err(Error::Usage(_))));
        assert!(matches!(beta_grid(0.1, 0.5, 0.0), Err(Error::Usage(_))));
        assert_eq!(beta_grid(0.5, 0.5, 0.1).unwrap(), vec![0.5]);
    }

    #[test]
    fn spec_hash_is_stable_and_input_sensitive() {
        let spec = GameSpec::two_by_two();
        let a = spec_hash(&spec);
        let b = spec_hash(&spec);
        assert_eq!(a, b);
        assert_eq!(a.len(), 64);

        let mut other = spec;
        other.discount = 0.5;
        assert_ne!(a, spec_hash(&other));
    }

    #[test]
    fn tables_align_with_headers() {
        let points = vec![BetaPoint {
            beta: 0.5,
            defender_values: vec![1.0, 2.0],
            attacker_values: vec![3.0, 4.0],
        }];
        let table = beta_sweep_table(&points);
        assert_eq!(table.rows.len(), 2);
        for row in &table.rows {
            assert_eq!(row.len(), table.headers.len());
        }
        assert_eq!(table.rows[0][0], "0.5");
    }
}
