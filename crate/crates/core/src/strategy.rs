//! Pure stationary strategies and the induced bimatrix game.
//!
//! A defender strategy picks one target combination per state (`K^K` of
//! them), an attacker strategy one technique per state (`N^K`). Because the
//! defender alone moves the game, a defender strategy induces a
//! deterministic, eventually-periodic trajectory from every start state;
//! discounted values along it have an exact closed form when no switching
//! cost is active, and a tolerance-truncated sum otherwise.

use num::rational::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{
    update_consecutive_changes, AttackerAction, DefenderAction, GameSpec, StateId,
};
use crate::linalg::Mat;
use crate::scalar::Scalar;

/// Defender pure stationary strategy: one target per state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefenderStrategy {
    targets: Vec<StateId>,
}

impl DefenderStrategy {
    pub fn new<S: Scalar>(spec: &GameSpec<S>, targets: Vec<StateId>) -> Result<Self> {
        if targets.len() != spec.state_count() {
            return Err(Error::DimensionMismatch(format!(
                "defender strategy has {} entries, expected {}",
                targets.len(),
                spec.state_count()
            )));
        }
        Ok(DefenderStrategy { targets })
    }

    /// Decode the strategy at a lexicographic position: the action index at
    /// state `s_j` is the `j`-th most significant base-`K` digit.
    pub fn from_lex_index<S: Scalar>(spec: &GameSpec<S>, mut index: u128) -> Self {
        let k = spec.state_count();
        let mut digits = vec![0usize; k];
        for j in (0..k).rev() {
            digits[j] = (index % k as u128) as usize;
            index /= k as u128;
        }
        DefenderStrategy {
            targets: digits
                .into_iter()
                .map(|d| spec.state_by_index(d).expect("digit in range"))
                .collect(),
        }
    }

    pub fn action(&self, state: StateId) -> DefenderAction {
        DefenderAction {
            target: self.targets[state.index()],
        }
    }

    pub fn successor(&self, state: StateId) -> StateId {
        self.targets[state.index()]
    }

    pub fn targets(&self) -> &[StateId] {
        &self.targets
    }
}

/// Attacker pure stationary strategy: one technique per state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackerStrategy {
    techniques: Vec<usize>,
}

impl AttackerStrategy {
    pub fn new<S: Scalar>(spec: &GameSpec<S>, techniques: Vec<usize>) -> Result<Self> {
        if techniques.len() != spec.state_count() {
            return Err(Error::DimensionMismatch(format!(
                "attacker strategy has {} entries, expected {}",
                techniques.len(),
                spec.state_count()
            )));
        }
        if let Some(&t) = techniques.iter().find(|&&t| t >= spec.num_techniques) {
            return Err(Error::TechniqueOutOfRange {
                technique: t,
                techniques: spec.num_techniques,
            });
        }
        Ok(AttackerStrategy { techniques })
    }

    pub fn from_lex_index<S: Scalar>(spec: &GameSpec<S>, mut index: u128) -> Self {
        let k = spec.state_count();
        let n = spec.num_techniques;
        let mut digits = vec![0usize; k];
        for j in (0..k).rev() {
            digits[j] = (index % n as u128) as usize;
            index /= n as u128;
        }
        AttackerStrategy { techniques: digits }
    }

    pub fn action(&self, state: StateId) -> AttackerAction {
        AttackerAction {
            technique: self.techniques[state.index()],
        }
    }

    pub fn techniques(&self) -> &[usize] {
        &self.techniques
    }
}

/// `K^K`, without overflowing for the sizes the budget guard admits.
pub fn defender_strategy_count<S: Scalar>(spec: &GameSpec<S>) -> u128 {
    let k = spec.state_count() as u128;
    (0..spec.state_count()).fold(1u128, |acc, _| acc.saturating_mul(k))
}

/// `N^K`.
pub fn attacker_strategy_count<S: Scalar>(spec: &GameSpec<S>) -> u128 {
    let n = spec.num_techniques as u128;
    (0..spec.state_count()).fold(1u128, |acc, _| acc.saturating_mul(n))
}

/// Lazily yield all defender strategies in lexicographic order, refusing
/// when the count exceeds `limit`.
pub fn enumerate_defender_strategies<S: Scalar>(
    spec: &GameSpec<S>,
    limit: u64,
) -> Result<impl Iterator<Item = DefenderStrategy> + '_> {
    let count = defender_strategy_count(spec);
    if count > u128::from(limit) {
        return Err(Error::BudgetExceeded {
            cells: count,
            max_cells: limit,
        });
    }
    Ok((0..count).map(move |i| DefenderStrategy::from_lex_index(spec, i)))
}

/// Lazily yield all attacker strategies in lexicographic order.
pub fn enumerate_attacker_strategies<S: Scalar>(
    spec: &GameSpec<S>,
    limit: u64,
) -> Result<impl Iterator<Item = AttackerStrategy> + '_> {
    let count = attacker_strategy_count(spec);
    if count > u128::from(limit) {
        return Err(Error::BudgetExceeded {
            cells: count,
            max_cells: limit,
        });
    }
    Ok((0..count).map(move |i| AttackerStrategy::from_lex_index(spec, i)))
}

/// Prefix-plus-cycle decomposition of the deterministic path a defender
/// strategy drives from a start state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrajectoryShape {
    pub start: StateId,
    pub prefix: Vec<StateId>,
    pub cycle: Vec<StateId>,
}

/// Follow `f` from `start` until a state repeats.
pub fn trajectory(f: &DefenderStrategy, start: StateId) -> TrajectoryShape {
    let mut seen: Vec<StateId> = Vec::new();
    let mut cursor = start;
    loop {
        if let Some(pos) = seen.iter().position(|s| *s == cursor) {
            let cycle = seen.split_off(pos);
            return TrajectoryShape {
                start,
                prefix: seen,
                cycle,
            };
        }
        seen.push(cursor);
        cursor = f.successor(cursor);
    }
}

/// Cycle structure of a strategy's successor map, shared by every start
/// state: each state is either on a cycle or leads into one.
#[derive(Debug, Clone)]
struct SuccessorGraph {
    successor: Vec<usize>,
    /// States on cycles, cycle by cycle in successor order.
    cycles: Vec<Vec<usize>>,
    /// Off-cycle states ordered so that each appears after its successor.
    resolve_order: Vec<usize>,
}

impl SuccessorGraph {
    fn new(f: &DefenderStrategy, k: usize) -> Self {
        let successor: Vec<usize> = (0..k).map(|s| f.targets[s].index()).collect();

        // color: 0 unvisited, 1 on current walk, 2 done
        let mut color = vec![0u8; k];
        let mut cycles = Vec::new();
        let mut resolve_order = Vec::new();
        for mut s in 0..k {
            if color[s] != 0 {
                continue;
            }
            let mut walk = Vec::new();
            while color[s] == 0 {
                color[s] = 1;
                walk.push(s);
                s = successor[s];
            }
            if color[s] == 1 {
                // Found a new cycle; everything before its entry is a tail.
                let entry = walk.iter().position(|&w| w == s).expect("on walk");
                let cycle: Vec<usize> = walk.split_off(entry);
                for &c in &cycle {
                    color[c] = 2;
                }
                cycles.push(cycle);
            }
            // Tail states resolve once their successor is resolved.
            while let Some(t) = walk.pop() {
                color[t] = 2;
                resolve_order.push(t);
            }
        }
        SuccessorGraph {
            successor,
            cycles,
            resolve_order,
        }
    }

    /// Exact discounted values for every start state given per-state stage
    /// utilities: the unique solution of `phi(s) = u(s) + beta * phi(f(s))`.
    fn discounted_values<S: Scalar>(&self, u: &[S], beta: &S, cycle_factors: &[S]) -> Vec<S> {
        let k = self.successor.len();
        let mut phi = vec![S::zero(); k];
        for cycle in &self.cycles {
            let len = cycle.len();
            // Sum of discounted utilities once around the cycle.
            let mut around = S::zero();
            let mut weight = S::one();
            for &c in cycle {
                around = around + weight.clone() * u[c].clone();
                weight = weight * beta.clone();
            }
            let entry_value = around * cycle_factors[len].clone();
            phi[cycle[0]] = entry_value;
            // Walk the cycle backwards from the entry point.
            for i in (1..len).rev() {
                let c = cycle[i];
                let next = cycle[(i + 1) % len];
                phi[c] = u[c].clone() + beta.clone() * phi[next].clone();
            }
        }
        for &s in &self.resolve_order {
            phi[s] = u[s].clone() + beta.clone() * phi[self.successor[s]].clone();
        }
        phi
    }
}

/// `1 / (1 - beta^len)` for every cycle length up to `K`.
fn cycle_factors<S: Scalar>(beta: &S, k: usize) -> Vec<S> {
    (0..=k)
        .map(|len| {
            if len == 0 {
                S::zero()
            } else {
                (S::one() - beta.powu(len as u32)).recip()
            }
        })
        .collect()
}

fn stage_utilities<S: Scalar>(
    spec: &GameSpec<S>,
    f: &DefenderStrategy,
    g: &AttackerStrategy,
) -> Vec<S> {
    spec.states()
        .map(|s| spec.defender_stage_utility(f.action(s), g.action(s), s, 0))
        .collect()
}

/// Closed-form discounted defender values from every start state; only
/// valid with no switching cost (stage utilities are then stationary).
pub fn defender_values_closed_form<S: Scalar>(
    spec: &GameSpec<S>,
    f: &DefenderStrategy,
    g: &AttackerStrategy,
) -> Vec<S> {
    let graph = SuccessorGraph::new(f, spec.state_count());
    let factors = cycle_factors(&spec.discount, spec.state_count());
    graph.discounted_values(&stage_utilities(spec, f, g), &spec.discount, &factors)
}

/// Truncation horizon making the discounted tail (including a linear-cost
/// term growing like `q * t`) smaller than `eps`.
pub fn truncation_horizon(u_max: f64, beta: f64, q_linear: f64, eps: f64) -> usize {
    assert!(beta > 0.0 && beta < 1.0, "discount outside (0, 1)");
    let mut t = 1usize;
    loop {
        let geom = beta.powi(t as i32) * u_max / (1.0 - beta);
        // sum_{j >= t} j * beta^j = beta^t * (t + beta * (1 - t)) / (1-beta)^2
        let arith = q_linear
            * beta.powi(t as i32)
            * (t as f64 + beta * (1.0 - t as f64))
            / ((1.0 - beta) * (1.0 - beta));
        if geom + arith.abs() < eps || t > 20_000_000 {
            return t;
        }
        // Grow fast, then binary-search the crossing.
        if geom + arith.abs() > 1e6 * eps {
            t = (t as f64 * 1.5).ceil() as usize;
        } else {
            t += 1;
        }
    }
}

/// Truncated discounted defender value with the consecutive-change counter
/// evolving along the trajectory (any cost model). Float evaluation.
pub fn truncated_defender_value(
    spec: &GameSpec<f64>,
    f: &DefenderStrategy,
    g: &AttackerStrategy,
    start: StateId,
    horizon: usize,
) -> f64 {
    let mut total = 0.0;
    let mut weight = 1.0;
    let mut state = start;
    let mut n = 0u32;
    for _ in 0..horizon {
        total += weight * spec.defender_stage_utility(f.action(state), g.action(state), state, n);
        let next = f.successor(state);
        n = update_consecutive_changes(n, state, next);
        state = next;
        weight *= spec.discount;
    }
    total
}

/// Discounted accumulated defender utility from one start state.
///
/// With no cost model this is the exact fixed point of
/// `phi(s) = U1(f(s), g(s), s) + beta * phi(f(s))`; with a cost model it is
/// a truncated sum whose tail is below `eval_tolerance`.
pub fn discounted_defender_value<S: Scalar>(
    spec: &GameSpec<S>,
    f: &DefenderStrategy,
    g: &AttackerStrategy,
    start: StateId,
    eval_tolerance: f64,
) -> S {
    if spec.cost_model.is_none() {
        defender_values_closed_form(spec, f, g)[start.index()].clone()
    } else {
        let fspec = spec.map::<f64>();
        let q = match &fspec.cost_model {
            crate::game::CostModel::Linear { q } => *q,
            _ => 0.0,
        };
        let horizon = truncation_horizon(
            fspec.max_abs_stage_utility(),
            fspec.discount,
            q,
            eval_tolerance,
        );
        S::from_f64(truncated_defender_value(&fspec, f, g, start, horizon))
    }
}

/// Attacker's first-step utility: the attacker cannot anticipate later
/// actions, so its accumulated term is evaluated at `t = 1` only.
pub fn myopic_attacker_value<S: Scalar>(
    spec: &GameSpec<S>,
    f: &DefenderStrategy,
    g: &AttackerStrategy,
    start: StateId,
) -> S {
    spec.attacker_stage_utility(f.action(start), g.action(start), start)
}

/// How attacker bimatrix entries are valued.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AttackerValuation {
    /// First-step stage utility only (the primary construction).
    #[default]
    MyopicFirstStep,
    /// Sensitivity alternative: discount the attacker stream like the
    /// defender's.
    Discounted,
}

/// Accumulated-utility matrices over all pure stationary strategy pairs.
///
/// Row `i` is the defender strategy at lexicographic position `i`, column
/// `j` the attacker strategy at position `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BimatrixGame<S> {
    pub defender: Mat<S>,
    pub attacker: Mat<S>,
}

impl<S: Scalar> BimatrixGame<S> {
    pub fn new(defender: Mat<S>, attacker: Mat<S>) -> Result<Self> {
        if defender.rows() != attacker.rows() || defender.cols() != attacker.cols() {
            return Err(Error::DimensionMismatch(format!(
                "payoff matrices {}x{} vs {}x{}",
                defender.rows(),
                defender.cols(),
                attacker.rows(),
                attacker.cols()
            )));
        }
        Ok(BimatrixGame { defender, attacker })
    }

    pub fn rows(&self) -> usize {
        self.defender.rows()
    }

    pub fn cols(&self) -> usize {
        self.defender.cols()
    }

    pub fn map<T: Scalar>(&self) -> BimatrixGame<T> {
        BimatrixGame {
            defender: self.defender.map(|v| T::from_f64(v.to_f64())),
            attacker: self.attacker.map(|v| T::from_f64(v.to_f64())),
        }
    }
}

/// Options for assembling the bimatrix.
#[derive(Debug, Clone)]
pub struct BuildOptions {
    /// Refuse to build more than this many cells.
    pub max_cells: u64,
    /// Tail tolerance for truncated (cost-active) evaluation.
    pub eval_tolerance: f64,
    pub attacker_valuation: AttackerValuation,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            max_cells: 10_000_000,
            eval_tolerance: 1e-9,
            attacker_valuation: AttackerValuation::default(),
        }
    }
}

/// Number of bimatrix cells `K^K * N^K` the spec induces.
pub fn bimatrix_cells<S: Scalar>(spec: &GameSpec<S>) -> u128 {
    defender_strategy_count(spec).saturating_mul(attacker_strategy_count(spec))
}

/// Build both accumulated-utility matrices.
///
/// Each defender entry sums the discounted values over all start states,
/// each attacker entry sums the first-step utilities over all start
/// states. Rows are computed in parallel; every cell is pure.
pub fn build_bimatrix<S: Scalar>(
    spec: &GameSpec<S>,
    options: &BuildOptions,
) -> Result<BimatrixGame<S>> {
    let cells = bimatrix_cells(spec);
    if cells > u128::from(options.max_cells) {
        return Err(Error::BudgetExceeded {
            cells,
            max_cells: options.max_cells,
        });
    }

    let n_rows = defender_strategy_count(spec) as usize;
    let n_cols = attacker_strategy_count(spec) as usize;
    let k = spec.state_count();
    let factors = cycle_factors(&spec.discount, k);
    let exact = spec.cost_model.is_none();

    let fspec = spec.map::<f64>();
    let horizon = if exact {
        0
    } else {
        let q = match &fspec.cost_model {
            crate::game::CostModel::Linear { q } => *q,
            _ => 0.0,
        };
        truncation_horizon(
            fspec.max_abs_stage_utility(),
            fspec.discount,
            q,
            options.eval_tolerance,
        )
    };

    let row_pairs: Vec<(Vec<S>, Vec<S>)> = (0..n_rows)
        .into_par_iter()
        .map(|i| {
            let f = DefenderStrategy::from_lex_index(spec, i as u128);
            let graph = SuccessorGraph::new(&f, k);
            let mut defender_row = Vec::with_capacity(n_cols);
            let mut attacker_row = Vec::with_capacity(n_cols);
            for j in 0..n_cols {
                let g = AttackerStrategy::from_lex_index(spec, j as u128);
                let x = if exact {
                    let u = stage_utilities(spec, &f, &g);
                    let phi = graph.discounted_values(&u, &spec.discount, &factors);
                    phi.into_iter().fold(S::zero(), |acc, v| acc + v)
                } else {
                    let total: f64 = fspec
                        .states()
                        .map(|s| truncated_defender_value(&fspec, &f, &g, s, horizon))
                        .sum();
                    S::from_f64(total)
                };
                let y = match options.attacker_valuation {
                    AttackerValuation::MyopicFirstStep => spec
                        .states()
                        .map(|s| myopic_attacker_value(spec, &f, &g, s))
                        .fold(S::zero(), |acc, v| acc + v),
                    AttackerValuation::Discounted => {
                        let u2: Vec<S> = spec
                            .states()
                            .map(|s| spec.attacker_stage_utility(f.action(s), g.action(s), s))
                            .collect();
                        graph
                            .discounted_values(&u2, &spec.discount, &factors)
                            .into_iter()
                            .fold(S::zero(), |acc, v| acc + v)
                    }
                };
                defender_row.push(x);
                attacker_row.push(y);
            }
            (defender_row, attacker_row)
        })
        .collect();

    let mut defender_rows = Vec::with_capacity(n_rows);
    let mut attacker_rows = Vec::with_capacity(n_rows);
    for (d, a) in row_pairs {
        defender_rows.push(d);
        attacker_rows.push(a);
    }
    BimatrixGame::new(Mat::from_rows(defender_rows), Mat::from_rows(attacker_rows))
}

/// Exact rational bimatrix of a float-parameterized game; the standard
/// input to the pivoting solver.
pub fn build_rational_bimatrix(
    spec: &GameSpec<f64>,
    options: &BuildOptions,
) -> Result<BimatrixGame<BigRational>> {
    build_bimatrix(&spec.map::<BigRational>(), options)
}
