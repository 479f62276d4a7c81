//! keyshift: solver and simulator for moving-target-defense
//! encryption-rotation games.
//!
//! A defender rotates encryption technique/key combinations while an
//! eavesdropper picks techniques to brute-force. Transitions are driven by
//! the defender alone, so equilibria of the discounted game come from a
//! bimatrix game over all pure stationary strategies: [`strategy`] builds
//! the accumulated-utility matrices, [`solver`] finds a mixed equilibrium
//! by exact-arithmetic Lemke-Howson pivoting, [`equilibrium`] projects it
//! to per-state policies, evaluates values and certifies that no
//! unilateral deviation pays, and [`sim`] replays the rotation process as
//! a seeded Monte-Carlo check. [`experiments`] wires these into the solve
//! and sweep runs the CLI exposes.
//!
//! Numeric work is generic over [`scalar::Scalar`]: `f64` (alias
//! [`Real`]) for evaluation, exact [`Rational`] wherever values feed the
//! pivoting solver.

pub mod document;
pub mod emit;
pub mod equilibrium;
pub mod error;
pub mod experiments;
pub mod game;
pub mod linalg;
pub mod scalar;
pub mod sim;
pub mod solver;
pub mod strategy;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Default floating-point scalar.
pub type Real = f64;
/// Exact scalar used by the pivoting solver.
pub type Rational = num::rational::BigRational;

pub use document::{load_spec, SpecDocument};
pub use equilibrium::{
    deviation_certificate, policy_values, project_attacker_policy, project_defender_policy,
    AttackerCriterion, DeviationOptions, DeviationReport, StationaryPolicy, ValueVector,
};
pub use game::{
    max_slot_duration, next_state, update_consecutive_changes, AttackerAction, CostKind,
    CostModel, DefenderAction, GameSpec, SlotDuration, StateId,
};
pub use sim::{empirical_switch_rate, simulate, SimulationConfig, SimulationSummary};
pub use solver::{lemke_howson, support_enumeration, verify_nash, MixedStrategyPair, NashReport};
pub use strategy::{
    build_bimatrix, build_rational_bimatrix, discounted_defender_value,
    enumerate_attacker_strategies, enumerate_defender_strategies, myopic_attacker_value,
    trajectory, AttackerStrategy, BimatrixGame, BuildOptions, DefenderStrategy, TrajectoryShape,
};
