//! From bimatrix equilibrium to per-state stationary policies, values and
//! a no-deviation certificate.
//!
//! The bimatrix mixes whole strategies; summing each strategy's weight
//! into its per-state action gives the stationary policies `E` (defender,
//! K x K) and `H` (attacker, N x K). Values come from the defender-driven
//! Markov chain; the certificate solves each player's best-response
//! problem and checks nobody gains more than epsilon anywhere.

use crate::error::{Error, Result};
use crate::game::{CostModel, GameSpec, StateId};
use crate::linalg::{solve_linear, Mat};
use crate::scalar::Scalar;
use crate::strategy::{
    attacker_strategy_count, defender_strategy_count, truncation_horizon, AttackerStrategy,
    DefenderStrategy,
};

/// Per-state action distribution; column `j` is the distribution over
/// actions in state `s_{j+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryPolicy<S> {
    probs: Mat<S>,
}

impl<S: Scalar> StationaryPolicy<S> {
    pub fn new(probs: Mat<S>) -> Result<Self> {
        for j in 0..probs.cols() {
            let mut sum = 0.0;
            for i in 0..probs.rows() {
                let p = probs[(i, j)].to_f64();
                if p < -1e-12 {
                    return Err(Error::Numeric(format!(
                        "negative probability {p} in state column {j}"
                    )));
                }
                sum += p;
            }
            if (sum - 1.0).abs() > 1e-9 {
                return Err(Error::Numeric(format!(
                    "state column {j} sums to {sum}, expected 1"
                )));
            }
        }
        Ok(StationaryPolicy { probs })
    }

    /// Equal probability over every action in every state.
    pub fn uniform(action_count: usize, state_count: usize) -> Self {
        let p = S::from_f64(action_count as f64).recip();
        StationaryPolicy {
            probs: Mat::filled(action_count, state_count, p),
        }
    }

    /// Deterministic defender policy as a 0/1 matrix.
    pub fn point_mass_defender(f: &DefenderStrategy, state_count: usize) -> Self {
        let mut probs = Mat::filled(state_count, state_count, S::zero());
        for (state, target) in f.targets().iter().enumerate() {
            probs[(target.index(), state)] = S::one();
        }
        StationaryPolicy { probs }
    }

    /// Deterministic attacker policy as a 0/1 matrix.
    pub fn point_mass_attacker(g: &AttackerStrategy, techniques: usize) -> Self {
        let state_count = g.techniques().len();
        let mut probs = Mat::filled(techniques, state_count, S::zero());
        for (state, &technique) in g.techniques().iter().enumerate() {
            probs[(technique, state)] = S::one();
        }
        StationaryPolicy { probs }
    }

    pub fn action_count(&self) -> usize {
        self.probs.rows()
    }

    pub fn state_count(&self) -> usize {
        self.probs.cols()
    }

    pub fn prob(&self, action: usize, state: usize) -> &S {
        &self.probs[(action, state)]
    }

    pub fn matrix(&self) -> &Mat<S> {
        &self.probs
    }

    pub fn map<T: Scalar>(&self) -> StationaryPolicy<T> {
        StationaryPolicy {
            probs: self.probs.map(|v| T::from_f64(v.to_f64())),
        }
    }
}

/// Per-state value for one player.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueVector<S> {
    pub values: Vec<S>,
}

impl<S: Scalar> ValueVector<S> {
    pub fn get(&self, state: StateId) -> &S {
        &self.values[state.index()]
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(Scalar::to_f64).collect()
    }
}

/// Sum strategy-level mixed weights into per-state defender action
/// probabilities. Column sums equal the input total exactly.
pub fn project_defender_policy<S: Scalar>(
    spec: &GameSpec<S>,
    mixed: &[S],
) -> Result<StationaryPolicy<S>> {
    let expected = defender_strategy_count(spec);
    if mixed.len() as u128 != expected {
        return Err(Error::DimensionMismatch(format!(
            "mixed vector has {} entries, expected {expected} defender strategies",
            mixed.len()
        )));
    }
    let k = spec.state_count();
    let mut probs = Mat::filled(k, k, S::zero());
    for (l, weight) in mixed.iter().enumerate() {
        if weight.is_zero() {
            continue;
        }
        let f = DefenderStrategy::from_lex_index(spec, l as u128);
        for (state, target) in f.targets().iter().enumerate() {
            probs[(target.index(), state)] =
                probs[(target.index(), state)].clone() + weight.clone();
        }
    }
    StationaryPolicy::new(probs)
}

/// Attacker analogue of [`project_defender_policy`]: an `N x K` policy.
pub fn project_attacker_policy<S: Scalar>(
    spec: &GameSpec<S>,
    mixed: &[S],
) -> Result<StationaryPolicy<S>> {
    let expected = attacker_strategy_count(spec);
    if mixed.len() as u128 != expected {
        return Err(Error::DimensionMismatch(format!(
            "mixed vector has {} entries, expected {expected} attacker strategies",
            mixed.len()
        )));
    }
    let k = spec.state_count();
    let mut probs = Mat::filled(spec.num_techniques, k, S::zero());
    for (l, weight) in mixed.iter().enumerate() {
        if weight.is_zero() {
            continue;
        }
        let g = AttackerStrategy::from_lex_index(spec, l as u128);
        for (state, &technique) in g.techniques().iter().enumerate() {
            probs[(technique, state)] = probs[(technique, state)].clone() + weight.clone();
        }
    }
    StationaryPolicy::new(probs)
}

fn check_shapes<S: Scalar>(
    spec: &GameSpec<S>,
    defender: &StationaryPolicy<S>,
    attacker: &StationaryPolicy<S>,
) -> Result<()> {
    let k = spec.state_count();
    if defender.action_count() != k || defender.state_count() != k {
        return Err(Error::DimensionMismatch(format!(
            "defender policy {}x{}, expected {k}x{k}",
            defender.action_count(),
            defender.state_count()
        )));
    }
    if attacker.action_count() != spec.num_techniques || attacker.state_count() != k {
        return Err(Error::DimensionMismatch(format!(
            "attacker policy {}x{}, expected {}x{k}",
            attacker.action_count(),
            attacker.state_count(),
            spec.num_techniques
        )));
    }
    Ok(())
}

/// Chain transition matrix under the defender policy: `P[s][s']` is the
/// probability of moving to `s'` from `s` (the defender action *is* the
/// successor).
fn chain_matrix<S: Scalar>(defender: &StationaryPolicy<S>) -> Mat<S> {
    let k = defender.state_count();
    Mat::from_fn(k, k, |s, next| defender.prob(next, s).clone())
}

/// Expected stage utilities at every state (cost term excluded).
fn expected_stage_utilities<S: Scalar>(
    spec: &GameSpec<S>,
    defender: &StationaryPolicy<S>,
    attacker: &StationaryPolicy<S>,
) -> (Vec<S>, Vec<S>) {
    let mut r1 = Vec::with_capacity(spec.state_count());
    let mut r2 = Vec::with_capacity(spec.state_count());
    for s in spec.states() {
        let mut e1 = S::zero();
        let mut e2 = S::zero();
        for a1 in spec.defender_actions() {
            let pd = defender.prob(a1.target.index(), s.index()).clone();
            if pd.is_zero() {
                continue;
            }
            for a2 in spec.attacker_actions() {
                let pa = attacker.prob(a2.technique, s.index()).clone();
                if pa.is_zero() {
                    continue;
                }
                let w = pd.clone() * pa;
                e1 = e1 + w.clone() * spec.defender_stage_utility(a1, a2, s, 0);
                e2 = e2 + w * spec.attacker_stage_utility(a1, a2, s);
            }
        }
        r1.push(e1);
        r2.push(e2);
    }
    (r1, r2)
}

/// Solve `v = r + beta P v` for the stationary chain.
fn chain_values<S: Scalar>(spec: &GameSpec<S>, chain: &Mat<S>, rewards: &[S]) -> Result<Vec<S>> {
    let k = chain.rows();
    let system = Mat::from_fn(k, k, |s, next| {
        let kronecker = if s == next { S::one() } else { S::zero() };
        kronecker - spec.discount.clone() * chain[(s, next)].clone()
    });
    solve_linear(&system, rewards)
}

fn linear_cost_slope(spec: &GameSpec<f64>) -> f64 {
    match spec.cost_model {
        CostModel::Linear { q } => q,
        _ => 0.0,
    }
}

/// Finite-horizon expected value over the augmented (state, change-count)
/// chain; `n` resets on self-transitions and the cost term accrues per
/// step. Horizon comes from the discounted tail bound.
fn augmented_chain_values(
    spec: &GameSpec<f64>,
    chain: &Mat<f64>,
    rewards: &[f64],
    tolerance: f64,
) -> Vec<f64> {
    let k = chain.rows();
    let horizon = truncation_horizon(
        spec.max_abs_stage_utility(),
        spec.discount,
        linear_cost_slope(spec),
        tolerance,
    );
    let costs: Vec<f64> = (0..=horizon as u32).map(|n| spec.cost_model.cost(n)).collect();

    // value[s][n] with `n` capped at the horizon (n at step t is < t).
    let width = horizon + 1;
    let mut value = vec![0.0f64; k * width];
    let mut next = vec![0.0f64; k * width];
    for _ in 0..horizon {
        for s in 0..k {
            for n in 0..width {
                let mut future = 0.0;
                for succ in 0..k {
                    let p = chain[(s, succ)];
                    if p == 0.0 {
                        continue;
                    }
                    let n_next = if succ == s { 0 } else { (n + 1).min(horizon) };
                    future += p * value[succ * width + n_next];
                }
                next[s * width + n] = rewards[s] - costs[n] + spec.discount * future;
            }
        }
        std::mem::swap(&mut value, &mut next);
    }
    (0..k).map(|s| value[s * width]).collect()
}

/// Per-state equilibrium values for both players under stationary
/// policies.
///
/// Without a cost model the defender values solve the K x K linear system
/// of the induced chain exactly; with one they come from the augmented
/// finite-horizon recursion truncated below `eval_tolerance`. Attacker
/// utilities carry no cost term, so their discounted stream always uses
/// the stationary solve.
pub fn policy_values<S: Scalar>(
    spec: &GameSpec<S>,
    defender: &StationaryPolicy<S>,
    attacker: &StationaryPolicy<S>,
    eval_tolerance: f64,
) -> Result<(ValueVector<S>, ValueVector<S>)> {
    check_shapes(spec, defender, attacker)?;
    let chain = chain_matrix(defender);
    let (r1, r2) = expected_stage_utilities(spec, defender, attacker);

    let defender_values = if spec.cost_model.is_none() {
        chain_values(spec, &chain, &r1)?
    } else {
        let fspec = spec.map::<f64>();
        let fchain = chain.map(Scalar::to_f64);
        let fr1: Vec<f64> = r1.iter().map(Scalar::to_f64).collect();
        augmented_chain_values(&fspec, &fchain, &fr1, eval_tolerance)
            .into_iter()
            .map(S::from_f64)
            .collect()
    };
    let attacker_values = chain_values(spec, &chain, &r2)?;

    Ok((
        ValueVector {
            values: defender_values,
        },
        ValueVector {
            values: attacker_values,
        },
    ))
}

/// How the attacker side of the certificate is judged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AttackerCriterion {
    /// Compare first-step stage utilities, mirroring the attacker's myopic
    /// valuation. Since the attacker never moves the chain, a per-state
    /// stage optimum is also optimal for the discounted stream.
    #[default]
    Myopic,
    /// Compare discounted streams along the defender-driven chain.
    Discounted,
}

#[derive(Debug, Clone)]
pub struct DeviationOptions {
    pub epsilon: f64,
    pub attacker_criterion: AttackerCriterion,
    /// Tail tolerance for cost-active value evaluation.
    pub eval_tolerance: f64,
}

impl Default for DeviationOptions {
    fn default() -> Self {
        DeviationOptions {
            epsilon: 1e-6,
            attacker_criterion: AttackerCriterion::default(),
            eval_tolerance: 1e-9,
        }
    }
}

/// One state's entry in the certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateEntry {
    pub state: usize,
    pub value: f64,
    pub best_response: f64,
    pub regret: f64,
}

/// Structured outcome of the no-deviation check; failure is data, not an
/// error.
#[derive(Debug, Clone)]
pub struct DeviationReport {
    pub passed: bool,
    pub epsilon: f64,
    pub attacker_criterion: AttackerCriterion,
    pub defender: Vec<CertificateEntry>,
    pub attacker: Vec<CertificateEntry>,
}

impl DeviationReport {
    pub fn max_regret(&self) -> f64 {
        self.defender
            .iter()
            .chain(self.attacker.iter())
            .map(|e| e.regret)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Defender best response against a fixed attacker policy: value
/// iteration on the deterministic-transition decision problem, run until
/// the sup-norm error is below `accuracy`.
fn defender_best_response(
    spec: &GameSpec<f64>,
    attacker: &StationaryPolicy<f64>,
    accuracy: f64,
) -> Vec<f64> {
    let k = spec.state_count();
    let beta = spec.discount;
    // Expected stage utility of action a in state s (cost excluded).
    let mut stage = Mat::filled(k, k, 0.0f64);
    for s in spec.states() {
        for a1 in spec.defender_actions() {
            let mut e = 0.0;
            for a2 in spec.attacker_actions() {
                e += attacker.prob(a2.technique, s.index())
                    * spec.defender_stage_utility(a1, a2, s, 0);
            }
            stage[(s.index(), a1.target.index())] = e;
        }
    }

    if spec.cost_model.is_none() {
        let mut v = vec![0.0f64; k];
        let threshold = accuracy * (1.0 - beta) / beta;
        for _ in 0..10_000_000u64 {
            let mut next = vec![f64::NEG_INFINITY; k];
            for s in 0..k {
                for target in 0..k {
                    let candidate = stage[(s, target)] + beta * v[target];
                    if candidate > next[s] {
                        next[s] = candidate;
                    }
                }
            }
            let delta = v
                .iter()
                .zip(&next)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            v = next;
            if delta <= threshold {
                break;
            }
        }
        v
    } else {
        // Finite-horizon backward induction over (state, change count).
        let horizon = truncation_horizon(
            spec.max_abs_stage_utility(),
            beta,
            linear_cost_slope(spec),
            accuracy,
        );
        let costs: Vec<f64> = (0..=horizon as u32).map(|n| spec.cost_model.cost(n)).collect();
        let width = horizon + 1;
        let mut value = vec![0.0f64; k * width];
        let mut next = vec![0.0f64; k * width];
        for _ in 0..horizon {
            for s in 0..k {
                for n in 0..width {
                    let mut best = f64::NEG_INFINITY;
                    for target in 0..k {
                        let n_next = if target == s { 0 } else { (n + 1).min(horizon) };
                        let candidate =
                            stage[(s, target)] + beta * value[target * width + n_next];
                        if candidate > best {
                            best = candidate;
                        }
                    }
                    next[s * width + n] = best - costs[n];
                }
            }
            std::mem::swap(&mut value, &mut next);
        }
        (0..k).map(|s| value[s * width]).collect()
    }
}

/// Certify that neither player can improve its value by more than
/// `epsilon` in any state by unilaterally deviating.
///
/// The defender's best response is a decision problem over the chain it
/// controls (solved to `epsilon / 10`); the attacker's is per-state stage
/// maximization against the defender's column, reported either myopically
/// or as the discounted stream it induces.
pub fn deviation_certificate<S: Scalar>(
    spec: &GameSpec<S>,
    defender: &StationaryPolicy<S>,
    attacker: &StationaryPolicy<S>,
    options: &DeviationOptions,
) -> Result<DeviationReport> {
    check_shapes(spec, defender, attacker)?;
    let fspec = spec.map::<f64>();
    let e = defender.map::<f64>();
    let h = attacker.map::<f64>();
    let (v1, v2) = policy_values(&fspec, &e, &h, options.eval_tolerance)?;

    let best1 = defender_best_response(&fspec, &h, options.epsilon / 10.0);
    let defender_entries: Vec<CertificateEntry> = (0..fspec.state_count())
        .map(|s| CertificateEntry {
            state: s,
            value: v1.values[s],
            best_response: best1[s],
            regret: best1[s] - v1.values[s],
        })
        .collect();

    // Attacker stage expectations against the defender column, actual and
    // best.
    let mut stage_actual = Vec::with_capacity(fspec.state_count());
    let mut stage_best = Vec::with_capacity(fspec.state_count());
    for s in fspec.states() {
        let mut actual = 0.0;
        let mut best = f64::NEG_INFINITY;
        for a2 in fspec.attacker_actions() {
            let mut e2 = 0.0;
            for a1 in fspec.defender_actions() {
                e2 += e.prob(a1.target.index(), s.index())
                    * fspec.attacker_stage_utility(a1, a2, s);
            }
            actual += h.prob(a2.technique, s.index()) * e2;
            best = best.max(e2);
        }
        stage_actual.push(actual);
        stage_best.push(best);
    }

    let attacker_entries: Vec<CertificateEntry> = match options.attacker_criterion {
        AttackerCriterion::Myopic => (0..fspec.state_count())
            .map(|s| CertificateEntry {
                state: s,
                value: stage_actual[s],
                best_response: stage_best[s],
                regret: stage_best[s] - stage_actual[s],
            })
            .collect(),
        AttackerCriterion::Discounted => {
            let chain = chain_matrix(&e);
            let best2 = chain_values(&fspec, &chain, &stage_best)?;
            (0..fspec.state_count())
                .map(|s| CertificateEntry {
                    state: s,
                    value: v2.values[s],
                    best_response: best2[s],
                    regret: best2[s] - v2.values[s],
                })
                .collect()
        }
    };

    let passed = defender_entries
        .iter()
        .chain(attacker_entries.iter())
        .all(|entry| entry.regret <= options.epsilon);
    Ok(DeviationReport {
        passed,
        epsilon: options.epsilon,
        attacker_criterion: options.attacker_criterion,
        defender: defender_entries,
        attacker: attacker_entries,
    })
}

/// Per-state percentage increase `100 * (v_eq - v_alt) / |v_alt|`; `None`
/// flags an undefined entry where the baseline is zero.
pub fn percentage_increase<S: Scalar>(v_eq: &ValueVector<S>, v_alt: &ValueVector<S>) -> Vec<Option<S>> {
    v_eq.values
        .iter()
        .zip(&v_alt.values)
        .map(|(eq, alt)| {
            if alt.is_zero() {
                None
            } else {
                Some(S::from_f64(100.0) * (eq.clone() - alt.clone()) / alt.abs())
            }
        })
        .collect()
}
