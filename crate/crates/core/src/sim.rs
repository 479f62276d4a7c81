//! Monte-Carlo simulation of the rotation process under stationary
//! policies; the independent oracle for [`crate::equilibrium::policy_values`].
//!
//! Determinism contract: episode `e` started from the `p`-th start state
//! draws from a ChaCha12 generator seeded with the run seed and set to
//! stream `p * episodes + e`. Serial and parallel runs therefore produce
//! bit-identical summaries.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::equilibrium::StationaryPolicy;
use crate::game::{update_consecutive_changes, AttackerAction, DefenderAction, GameSpec, StateId};
use crate::linalg::Mat;
use crate::scalar::Scalar;

/// One simulated step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub state: usize,
    pub defender_target: usize,
    pub attacker_technique: usize,
    pub defender_utility: f64,
    pub attacker_utility: f64,
    /// Consecutive-change counter in force when the step was played.
    pub consecutive_changes: u32,
}

/// Full trace of one episode.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeRecord {
    /// RNG stream index the episode was drawn from.
    pub stream: u64,
    pub start: usize,
    pub steps: Vec<StepRecord>,
    pub discounted_return_defender: f64,
    pub discounted_return_attacker: f64,
}

/// Mean and standard error of the per-episode returns from one start.
#[derive(Debug, Clone, PartialEq)]
pub struct PerStartStats {
    pub start: usize,
    pub episodes: usize,
    pub mean_defender: f64,
    pub se_defender: f64,
    pub mean_attacker: f64,
    pub se_attacker: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationSummary {
    pub episodes_per_start: usize,
    pub horizon: usize,
    pub seed: u64,
    pub per_start: Vec<PerStartStats>,
    /// Fraction of steps spent in each state.
    pub visit_distribution: Vec<f64>,
    /// Observed defender action frequencies, actions x states.
    pub defender_action_freq: Mat<f64>,
    /// Observed attacker action frequencies, techniques x states.
    pub attacker_action_freq: Mat<f64>,
    pub total_steps: u64,
    pub switch_steps: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct SimulationConfig {
    pub episodes_per_start: usize,
    pub horizon: usize,
    pub seed: u64,
}

/// Column of a policy as a plain probability vector.
fn column(policy: &Mat<f64>, state: usize) -> Vec<f64> {
    (0..policy.rows()).map(|a| policy[(a, state)]).collect()
}

fn validate_distribution(probs: &[f64]) -> Result<()> {
    if probs.iter().any(|p| *p < -1e-12 || !p.is_finite()) {
        return Err(Error::Numeric("policy column has invalid entries".into()));
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::Numeric(format!(
            "policy column sums to {sum}, expected 1"
        )));
    }
    Ok(())
}

fn sample(probs: &[f64], rng: &mut ChaCha12Rng) -> usize {
    let draw: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if draw < acc {
            return i;
        }
    }
    probs.len() - 1
}

/// Play one episode of `horizon` steps from `start` on stream `stream`.
pub fn simulate_episode(
    spec: &GameSpec<f64>,
    defender: &Mat<f64>,
    attacker: &Mat<f64>,
    start: StateId,
    horizon: usize,
    seed: u64,
    stream: u64,
) -> EpisodeRecord {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);

    let mut steps = Vec::with_capacity(horizon);
    let mut state = start;
    let mut n = 0u32;
    let mut weight = 1.0;
    let mut return_defender = 0.0;
    let mut return_attacker = 0.0;

    for _ in 0..horizon {
        let target_index = sample(&column(defender, state.index()), &mut rng);
        let technique = sample(&column(attacker, state.index()), &mut rng);
        let a1 = DefenderAction {
            target: spec.state_by_index(target_index).expect("valid target"),
        };
        let a2 = AttackerAction { technique };

        let u1 = spec.defender_stage_utility(a1, a2, state, n);
        let u2 = spec.attacker_stage_utility(a1, a2, state);
        return_defender += weight * u1;
        return_attacker += weight * u2;
        steps.push(StepRecord {
            state: state.index(),
            defender_target: target_index,
            attacker_technique: technique,
            defender_utility: u1,
            attacker_utility: u2,
            consecutive_changes: n,
        });

        let next = a1.target;
        n = update_consecutive_changes(n, state, next);
        state = next;
        weight *= spec.discount;
    }

    EpisodeRecord {
        stream,
        start: start.index(),
        steps,
        discounted_return_defender: return_defender,
        discounted_return_attacker: return_attacker,
    }
}

fn stats(start: usize, returns: &[(f64, f64)]) -> PerStartStats {
    let n = returns.len();
    let mean = |pick: fn(&(f64, f64)) -> f64| returns.iter().map(pick).sum::<f64>() / n as f64;
    let mean_d = mean(|r| r.0);
    let mean_a = mean(|r| r.1);
    let se = |pick: fn(&(f64, f64)) -> f64, mean: f64| {
        if n < 2 {
            return 0.0;
        }
        let var = returns
            .iter()
            .map(|r| (pick(r) - mean).powi(2))
            .sum::<f64>()
            / (n - 1) as f64;
        (var / n as f64).sqrt()
    };
    PerStartStats {
        start,
        episodes: n,
        mean_defender: mean_d,
        se_defender: se(|r| r.0, mean_d),
        mean_attacker: mean_a,
        se_attacker: se(|r| r.1, mean_a),
    }
}

/// Run `episodes_per_start` episodes from every listed start state.
///
/// Episodes execute in parallel but are aggregated in stream order, so the
/// summary does not depend on scheduling.
pub fn simulate<S: Scalar>(
    spec: &GameSpec<S>,
    defender: &StationaryPolicy<S>,
    attacker: &StationaryPolicy<S>,
    starts: &[StateId],
    config: &SimulationConfig,
) -> Result<SimulationSummary> {
    if config.episodes_per_start == 0 || config.horizon == 0 {
        return Err(Error::Usage(
            "simulation needs at least one episode and one step".into(),
        ));
    }
    let fspec = spec.map::<f64>();
    let k = fspec.state_count();
    let e = defender.map::<f64>().matrix().clone();
    let h = attacker.map::<f64>().matrix().clone();
    if e.rows() != k || e.cols() != k || h.rows() != fspec.num_techniques || h.cols() != k {
        return Err(Error::DimensionMismatch(
            "policy shapes do not match the spec".into(),
        ));
    }
    for state in 0..k {
        validate_distribution(&column(&e, state))?;
        validate_distribution(&column(&h, state))?;
    }

    let episodes = config.episodes_per_start;
    let records: Vec<EpisodeRecord> = (0..starts.len() * episodes)
        .into_par_iter()
        .map(|flat| {
            let start = starts[flat / episodes];
            simulate_episode(
                &fspec,
                &e,
                &h,
                start,
                config.horizon,
                config.seed,
                flat as u64,
            )
        })
        .collect();

    let mut per_start = Vec::with_capacity(starts.len());
    let mut visits = vec![0u64; k];
    let mut defender_counts = Mat::filled(k, k, 0u64);
    let mut attacker_counts = Mat::filled(fspec.num_techniques, k, 0u64);
    let mut switch_steps = 0u64;
    let mut total_steps = 0u64;

    for (p, start) in starts.iter().enumerate() {
        let slice = &records[p * episodes..(p + 1) * episodes];
        let returns: Vec<(f64, f64)> = slice
            .iter()
            .map(|r| (r.discounted_return_defender, r.discounted_return_attacker))
            .collect();
        per_start.push(stats(start.index(), &returns));
        for record in slice {
            for step in &record.steps {
                visits[step.state] += 1;
                defender_counts[(step.defender_target, step.state)] += 1;
                attacker_counts[(step.attacker_technique, step.state)] += 1;
                if step.defender_target != step.state {
                    switch_steps += 1;
                }
                total_steps += 1;
            }
        }
    }

    let state_totals: Vec<u64> = (0..k)
        .map(|s| (0..k).map(|a| defender_counts[(a, s)]).sum())
        .collect();
    let freq = |counts: &Mat<u64>| {
        Mat::from_fn(counts.rows(), counts.cols(), |a, s| {
            if state_totals[s] == 0 {
                0.0
            } else {
                counts[(a, s)] as f64 / state_totals[s] as f64
            }
        })
    };

    Ok(SimulationSummary {
        episodes_per_start: episodes,
        horizon: config.horizon,
        seed: config.seed,
        per_start,
        visit_distribution: visits
            .iter()
            .map(|v| *v as f64 / total_steps.max(1) as f64)
            .collect(),
        defender_action_freq: freq(&defender_counts),
        attacker_action_freq: freq(&attacker_counts),
        total_steps,
        switch_steps,
    })
}

/// Fraction of simulated steps on which the state changed.
pub fn empirical_switch_rate(summary: &SimulationSummary) -> f64 {
    if summary.total_steps == 0 {
        return 0.0;
    }
    summary.switch_steps as f64 / summary.total_steps as f64
}
