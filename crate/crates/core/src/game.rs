//! Domain model of the MTD rotation game.
//!
//! A defender (base station) rotates among `N` encryption techniques with
//! `M` keys each; a state is one technique/key combination, so there are
//! `K = N * M` states. The defender's action picks the next combination
//! outright (it alone controls transitions, deterministically); the
//! attacker picks which technique to brute-force. Stage utilities combine
//! protection rewards, switching rewards, decryption power and an optional
//! switching-cost term driven by the number of consecutive changes.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One technique/key combination, with its flat index.
///
/// The enumeration convention is fixed: `index = technique * M + key`, so
/// keys of the same technique are adjacent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId {
    index: usize,
    technique: usize,
    key: usize,
}

impl StateId {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn technique(&self) -> usize {
        self.technique
    }

    pub fn key(&self) -> usize {
        self.key
    }
}

impl std::fmt::Display for StateId {
    /// States print 1-based (`s1`, `s2`, ...) to match the usual naming.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "s{}", self.index + 1)
    }
}

/// Defender action: switch to (or stay at) a specific combination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DefenderAction {
    pub target: StateId,
}

/// Attacker action: the technique under brute-force attack.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AttackerAction {
    pub technique: usize,
}

/// Switching-cost model, a function of the consecutive-change counter `n`.
#[derive(Debug, Clone, PartialEq)]
pub enum CostModel<S> {
    None,
    /// `C(q, n) = q * n`
    Linear { q: S },
    /// `C(q, n) = q * ln(n + 1)`
    Logarithmic { q: S },
}

impl<S: Scalar> CostModel<S> {
    pub fn cost(&self, n: u32) -> S {
        match self {
            CostModel::None => S::zero(),
            CostModel::Linear { q } => q.clone() * S::from_f64(f64::from(n)),
            CostModel::Logarithmic { q } => {
                q.clone() * S::from_f64((f64::from(n) + 1.0).ln())
            }
        }
    }

    pub fn q(&self) -> Option<&S> {
        match self {
            CostModel::None => None,
            CostModel::Linear { q } | CostModel::Logarithmic { q } => Some(q),
        }
    }

    pub fn is_none(&self) -> bool {
        matches!(self, CostModel::None)
    }

    pub fn map<T: Scalar>(&self) -> CostModel<T> {
        match self {
            CostModel::None => CostModel::None,
            CostModel::Linear { q } => CostModel::Linear {
                q: T::from_f64(q.to_f64()),
            },
            CostModel::Logarithmic { q } => CostModel::Logarithmic {
                q: T::from_f64(q.to_f64()),
            },
        }
    }
}

/// Cost-model family without its parameter; sweep inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostKind {
    None,
    Linear,
    Logarithmic,
}

impl CostKind {
    pub fn model(self, q: f64) -> CostModel<f64> {
        match self {
            CostKind::None => CostModel::None,
            CostKind::Linear => CostModel::Linear { q },
            CostKind::Logarithmic => CostModel::Logarithmic { q },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CostKind::None => "none",
            CostKind::Linear => "linear",
            CostKind::Logarithmic => "log",
        }
    }
}

/// Condition under which the defender earns the higher protection reward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DefenderRewardRule {
    /// Higher reward when the attacker brute-forces a technique other than
    /// the one currently in use.
    #[default]
    AttackerOnOtherTechnique,
    /// Alternate reading: compare against the technique the defender is
    /// switching to instead of the current one.
    AttackerOffDefenderTarget,
}

/// Condition under which the attacker earns the "matched" reward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AttackerMatchRule {
    /// Matched when brute-forcing the technique currently in use.
    ///
    /// This is the default: it gives the attacker a strict incentive to
    /// track the active technique, so equilibrium attacker behavior is
    /// pinned down by payoffs rather than by solver tie-breaking.
    #[default]
    CurrentTechniqueOnly,
    /// Stricter reading: the attack must hit the current technique *and*
    /// the defender's move must keep that technique in place. Under this
    /// rule a technique-hopping defender leaves the attacker fully
    /// indifferent, which degenerates equilibrium selection.
    CurrentTechniqueAndKept,
}

/// Which reward condition variant each utility uses. The defaults encode
/// the primary reading; alternates exist so sensitivity runs can flip them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RewardConventions {
    pub defender: DefenderRewardRule,
    pub attacker: AttackerMatchRule,
}

/// Protection / attack reward levels.
#[derive(Debug, Clone, PartialEq)]
pub struct Rewards<S> {
    /// Defender reward when the attacked technique misses (R1 high).
    pub defender_other_tech: S,
    /// Defender reward when the attacker is on the current technique.
    pub defender_same_tech: S,
    /// Attacker reward in the matched condition (R2 high).
    pub attacker_match: S,
    pub attacker_miss: S,
}

/// Per-move switching rewards for the defender.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionRewards<S> {
    /// Same technique, different key.
    pub key: S,
    /// Different technique.
    pub technique: S,
    /// No move at all.
    pub stay: S,
}

/// Brute-force timing inputs: seconds per full key-space sweep, per
/// technique, plus the safety margin applied to the minimum.
#[derive(Debug, Clone, PartialEq)]
pub struct Timing {
    pub brute_force_seconds: Vec<f64>,
    pub margin: f64,
}

/// Full game parameterization.
#[derive(Debug, Clone, PartialEq)]
pub struct GameSpec<S> {
    pub num_techniques: usize,
    pub keys_per_technique: usize,
    /// Discount factor, strictly inside (0, 1).
    pub discount: S,
    pub rewards: Rewards<S>,
    /// Power to decrypt a packet, indexed by technique.
    pub defender_power: Vec<S>,
    pub attacker_power: Vec<S>,
    pub transition: TransitionRewards<S>,
    pub cost_model: CostModel<S>,
    pub timing: Option<Timing>,
    pub conventions: RewardConventions,
}

impl<S: Scalar> GameSpec<S> {
    /// Number of states `K = N * M`.
    pub fn state_count(&self) -> usize {
        self.num_techniques * self.keys_per_technique
    }

    /// Validate the structural invariants, returning the spec on success.
    pub fn validated(self) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidSpec(msg));
        if self.num_techniques < 1 {
            return invalid("need at least one technique".into());
        }
        if self.keys_per_technique < 1 {
            return invalid("need at least one key per technique".into());
        }
        let beta = self.discount.to_f64();
        if !(beta > 0.0 && beta < 1.0) {
            return invalid(format!("discount {beta} outside (0, 1)"));
        }
        for (name, powers) in [
            ("defender", &self.defender_power),
            ("attacker", &self.attacker_power),
        ] {
            if powers.len() != self.num_techniques {
                return invalid(format!(
                    "{name} power has {} entries, expected {}",
                    powers.len(),
                    self.num_techniques
                ));
            }
            if powers.iter().any(|p| *p < S::zero()) {
                return invalid(format!("{name} power entries must be nonnegative"));
            }
        }
        if let Some(q) = self.cost_model.q() {
            if *q < S::zero() {
                return invalid("cost value q must be nonnegative".into());
            }
        }
        if let Some(timing) = &self.timing {
            if timing.brute_force_seconds.is_empty() {
                return Err(Error::EmptyBruteForceTimes);
            }
            if timing.brute_force_seconds.len() != self.num_techniques {
                return invalid(format!(
                    "timing has {} entries, expected {}",
                    timing.brute_force_seconds.len(),
                    self.num_techniques
                ));
            }
            if timing.brute_force_seconds.iter().any(|t| *t <= 0.0) {
                return invalid("brute-force times must be positive".into());
            }
            if !(timing.margin > 0.0 && timing.margin <= 1.0) {
                return Err(Error::InvalidMargin(timing.margin));
            }
        }
        Ok(self)
    }

    /// State for a (technique, key) pair under the fixed enumeration.
    pub fn state(&self, technique: usize, key: usize) -> Result<StateId> {
        if technique >= self.num_techniques {
            return Err(Error::TechniqueOutOfRange {
                technique,
                techniques: self.num_techniques,
            });
        }
        if key >= self.keys_per_technique {
            return Err(Error::KeyOutOfRange {
                key,
                keys: self.keys_per_technique,
            });
        }
        Ok(StateId {
            index: technique * self.keys_per_technique + key,
            technique,
            key,
        })
    }

    /// Inverse of [`GameSpec::state`]: recover the pair from a flat index.
    pub fn state_by_index(&self, index: usize) -> Result<StateId> {
        if index >= self.state_count() {
            return Err(Error::StateOutOfRange {
                index,
                states: self.state_count(),
            });
        }
        Ok(StateId {
            index,
            technique: index / self.keys_per_technique,
            key: index % self.keys_per_technique,
        })
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.state_count()).map(|i| self.state_by_index(i).expect("in range"))
    }

    pub fn defender_actions(&self) -> impl Iterator<Item = DefenderAction> + '_ {
        self.states().map(|target| DefenderAction { target })
    }

    pub fn attacker_actions(&self) -> impl Iterator<Item = AttackerAction> + '_ {
        (0..self.num_techniques).map(|technique| AttackerAction { technique })
    }

    /// Switching reward `T1`: technique change, key-only change, or stay.
    pub fn transition_reward(&self, action: DefenderAction, state: StateId) -> S {
        if action.target.technique != state.technique {
            self.transition.technique.clone()
        } else if action.target.key != state.key {
            self.transition.key.clone()
        } else {
            self.transition.stay.clone()
        }
    }

    fn defender_reward(&self, a1: DefenderAction, a2: AttackerAction, state: StateId) -> S {
        let reference = match self.conventions.defender {
            DefenderRewardRule::AttackerOnOtherTechnique => state.technique,
            DefenderRewardRule::AttackerOffDefenderTarget => a1.target.technique,
        };
        if a2.technique != reference {
            self.rewards.defender_other_tech.clone()
        } else {
            self.rewards.defender_same_tech.clone()
        }
    }

    fn attacker_reward(&self, a1: DefenderAction, a2: AttackerAction, state: StateId) -> S {
        let matched = match self.conventions.attacker {
            AttackerMatchRule::CurrentTechniqueAndKept => {
                a2.technique == state.technique && a1.target.technique == state.technique
            }
            AttackerMatchRule::CurrentTechniqueOnly => a2.technique == state.technique,
        };
        if matched {
            self.rewards.attacker_match.clone()
        } else {
            self.rewards.attacker_miss.clone()
        }
    }

    /// Defender stage utility `R1 + T1 - P1 - C(q, n)` where `n` counts the
    /// consecutive method changes made so far.
    pub fn defender_stage_utility(
        &self,
        a1: DefenderAction,
        a2: AttackerAction,
        state: StateId,
        consecutive_changes: u32,
    ) -> S {
        self.defender_reward(a1, a2, state) + self.transition_reward(a1, state)
            - self.defender_power[state.technique].clone()
            - self.cost_model.cost(consecutive_changes)
    }

    /// Attacker stage utility `R2 - P2`.
    pub fn attacker_stage_utility(
        &self,
        a1: DefenderAction,
        a2: AttackerAction,
        state: StateId,
    ) -> S {
        self.attacker_reward(a1, a2, state) - self.attacker_power[state.technique].clone()
    }

    /// Largest stage-utility magnitude over both players and all action
    /// pairs, ignoring the cost term. Used for discounted tail bounds.
    pub fn max_abs_stage_utility(&self) -> f64 {
        let mut max = 0.0f64;
        for s in self.states() {
            for a1 in self.defender_actions() {
                for a2 in self.attacker_actions() {
                    let u1 = self.defender_stage_utility(a1, a2, s, 0).to_f64().abs();
                    let u2 = self.attacker_stage_utility(a1, a2, s).to_f64().abs();
                    max = max.max(u1).max(u2);
                }
            }
        }
        max
    }

    /// Convert every numeric field to another scalar type. Exact whenever
    /// `T::from_f64` is exact (e.g. `f64` to rationals).
    pub fn map<T: Scalar>(&self) -> GameSpec<T> {
        let conv = |v: &S| T::from_f64(v.to_f64());
        GameSpec {
            num_techniques: self.num_techniques,
            keys_per_technique: self.keys_per_technique,
            discount: conv(&self.discount),
            rewards: Rewards {
                defender_other_tech: conv(&self.rewards.defender_other_tech),
                defender_same_tech: conv(&self.rewards.defender_same_tech),
                attacker_match: conv(&self.rewards.attacker_match),
                attacker_miss: conv(&self.rewards.attacker_miss),
            },
            defender_power: self.defender_power.iter().map(&conv).collect(),
            attacker_power: self.attacker_power.iter().map(&conv).collect(),
            transition: TransitionRewards {
                key: conv(&self.transition.key),
                technique: conv(&self.transition.technique),
                stay: conv(&self.transition.stay),
            },
            cost_model: self.cost_model.map::<T>(),
            timing: self.timing.clone(),
            conventions: self.conventions,
        }
    }
}

impl GameSpec<f64> {
    /// The reference configuration: two techniques, two keys each,
    /// rewards 10/5, powers 1/3, switching rewards 5 (key) / 10
    /// (technique), discount 0.75, no switching cost.
    pub fn two_by_two() -> Self {
        GameSpec {
            num_techniques: 2,
            keys_per_technique: 2,
            discount: 0.75,
            rewards: Rewards {
                defender_other_tech: 10.0,
                defender_same_tech: 5.0,
                attacker_match: 10.0,
                attacker_miss: 5.0,
            },
            defender_power: vec![1.0, 3.0],
            attacker_power: vec![1.0, 3.0],
            transition: TransitionRewards {
                key: 5.0,
                technique: 10.0,
                stay: 0.0,
            },
            cost_model: CostModel::None,
            timing: None,
            conventions: RewardConventions::default(),
        }
    }
}

/// Deterministic successor: the game moves exactly where the defender
/// points, regardless of the attacker's action.
pub fn next_state(a1: DefenderAction) -> StateId {
    a1.target
}

/// Consecutive-change counter update: reset on a self-transition,
/// increment on any move.
pub fn update_consecutive_changes(n: u32, state: StateId, next: StateId) -> u32 {
    if next == state {
        0
    } else {
        n + 1
    }
}

/// Slot duration derived from brute-force completion times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlotDuration {
    pub seconds: f64,
    /// Whether the strict bound `t < min(t_i)` actually holds; false at
    /// margin exactly 1.0.
    pub strict: bool,
}

/// Largest safe rotation slot: `margin * min(t_i)`. The defender must act
/// strictly before the fastest brute-force sweep completes, so a margin of
/// 1.0 is flagged as not strictly safe.
pub fn max_slot_duration(brute_force_seconds: &[f64], margin: f64) -> Result<SlotDuration> {
    if brute_force_seconds.is_empty() {
        return Err(Error::EmptyBruteForceTimes);
    }
    if !(margin > 0.0 && margin <= 1.0) {
        return Err(Error::InvalidMargin(margin));
    }
    if brute_force_seconds.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::InvalidSpec(
            "brute-force times must be positive".into(),
        ));
    }
    let min = brute_force_seconds
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let seconds = margin * min;
    Ok(SlotDuration {
        seconds,
        strict: seconds < min,
    })
}
