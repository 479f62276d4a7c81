//! The on-disk game description: a strict JSON document.
//!
//! Unknown keys are rejected rather than ignored — a typo in a reward name
//! would silently invalidate an experiment otherwise. Parsing reports
//! serde_json's line/column diagnostics; re-serializing a parsed document
//! is the canonical form used for hashing and reproducibility.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{CostModel, GameSpec, Rewards, RewardConventions, Timing, TransitionRewards};

fn default_margin() -> f64 {
    0.9
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RewardsDoc {
    pub defender_other_tech: f64,
    pub defender_same_tech: f64,
    pub attacker_match: f64,
    pub attacker_miss: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PowerDoc {
    pub defender: Vec<f64>,
    pub attacker: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TransitionDoc {
    pub key: f64,
    pub technique: f64,
    /// Reward for not moving; no switching happened, so it defaults to 0.
    #[serde(default)]
    pub stay: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum CostKindDoc {
    None,
    Linear,
    Log,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CostDoc {
    pub model: CostKindDoc,
    pub q: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TimingDoc {
    pub brute_force_seconds: Vec<f64>,
    #[serde(default = "default_margin")]
    pub margin: f64,
}

/// Top-level document. Field order here is the canonical key order.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub techniques: u32,
    pub keys_per_technique: u32,
    pub beta: f64,
    pub rewards: RewardsDoc,
    pub power: PowerDoc,
    pub transition: TransitionDoc,
    pub cost: CostDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<TimingDoc>,
}

impl SpecDocument {
    /// Parse from JSON text with line/column diagnostics.
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Canonical serialized form: pretty JSON in declaration key order.
    pub fn canonical_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("document always serializes")
    }

    /// Validate and convert into a game spec.
    pub fn to_game_spec(&self) -> Result<GameSpec<f64>> {
        let cost_model = match self.cost.model {
            CostKindDoc::None => CostModel::None,
            CostKindDoc::Linear => CostModel::Linear { q: self.cost.q },
            CostKindDoc::Log => CostModel::Logarithmic { q: self.cost.q },
        };
        GameSpec {
            num_techniques: self.techniques as usize,
            keys_per_technique: self.keys_per_technique as usize,
            discount: self.beta,
            rewards: Rewards {
                defender_other_tech: self.rewards.defender_other_tech,
                defender_same_tech: self.rewards.defender_same_tech,
                attacker_match: self.rewards.attacker_match,
                attacker_miss: self.rewards.attacker_miss,
            },
            defender_power: self.power.defender.clone(),
            attacker_power: self.power.attacker.clone(),
            transition: TransitionRewards {
                key: self.transition.key,
                technique: self.transition.technique,
                stay: self.transition.stay,
            },
            cost_model,
            timing: self.timing.as_ref().map(|t| Timing {
                brute_force_seconds: t.brute_force_seconds.clone(),
                margin: t.margin,
            }),
            conventions: RewardConventions::default(),
        }
        .validated()
    }

    pub fn from_game_spec(spec: &GameSpec<f64>) -> Self {
        let (model, q) = match spec.cost_model {
            CostModel::None => (CostKindDoc::None, 0.0),
            CostModel::Linear { q } => (CostKindDoc::Linear, q),
            CostModel::Logarithmic { q } => (CostKindDoc::Log, q),
        };
        SpecDocument {
            techniques: spec.num_techniques as u32,
            keys_per_technique: spec.keys_per_technique as u32,
            beta: spec.discount,
            rewards: RewardsDoc {
                defender_other_tech: spec.rewards.defender_other_tech,
                defender_same_tech: spec.rewards.defender_same_tech,
                attacker_match: spec.rewards.attacker_match,
                attacker_miss: spec.rewards.attacker_miss,
            },
            power: PowerDoc {
                defender: spec.defender_power.clone(),
                attacker: spec.attacker_power.clone(),
            },
            transition: TransitionDoc {
                key: spec.transition.key,
                technique: spec.transition.technique,
                stay: spec.transition.stay,
            },
            cost: CostDoc { model, q },
            timing: spec.timing.as_ref().map(|t| TimingDoc {
                brute_force_seconds: t.brute_force_seconds.clone(),
                margin: t.margin,
            }),
        }
    }
}

/// Read and validate a spec file in one step.
pub fn load_spec(path: &std::path::Path) -> Result<GameSpec<f64>> {
    let text = std::fs::read_to_string(path)?;
    SpecDocument::parse(&text)?.to_game_spec()
}
