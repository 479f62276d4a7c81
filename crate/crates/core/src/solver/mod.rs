//! Mixed Nash equilibrium computation for finite bimatrix games.
//!
//! [`lemke_howson`] does the real work in exact rational arithmetic;
//! [`support_enumeration`] independently enumerates all extreme equilibria
//! of small games as an oracle; [`verify_nash`] is the common
//! epsilon-equilibrium gate both answer to.

mod lemke;
mod support;

pub use lemke::lemke_howson;
pub use support::support_enumeration;

use num::rational::BigRational;
use num::traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::Scalar;
use crate::strategy::BimatrixGame;

/// Mixed strategies for both players: a distribution over rows and one
/// over columns.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedStrategyPair<S> {
    pub row: Vec<S>,
    pub col: Vec<S>,
}

impl<S: Scalar> MixedStrategyPair<S> {
    pub fn map<T: Scalar>(&self) -> MixedStrategyPair<T> {
        MixedStrategyPair {
            row: self.row.iter().map(|v| T::from_f64(v.to_f64())).collect(),
            col: self.col.iter().map(|v| T::from_f64(v.to_f64())).collect(),
        }
    }

    /// Check that both vectors are distributions: entries nonnegative and
    /// summing to one within `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        for (name, vec) in [("row", &self.row), ("col", &self.col)] {
            if vec.iter().any(|p| p.to_f64() < -tol) {
                return Err(Error::Numeric(format!("negative {name} probability")));
            }
            let sum: f64 = vec.iter().map(Scalar::to_f64).sum();
            if (sum - 1.0).abs() > tol.max(1e-12) {
                return Err(Error::Numeric(format!("{name} probabilities sum to {sum}")));
            }
        }
        Ok(())
    }
}

/// Outcome of an epsilon-equilibrium check; regrets are the largest gain a
/// unilateral pure deviation offers.
#[derive(Debug, Clone, PartialEq)]
pub struct NashReport {
    pub ok: bool,
    pub row_value: f64,
    pub col_value: f64,
    pub row_regret: f64,
    pub col_regret: f64,
}

/// Verify that no player gains more than `epsilon` by deviating.
pub fn verify_nash<S: Scalar, T: Scalar>(
    game: &BimatrixGame<S>,
    pair: &MixedStrategyPair<T>,
    epsilon: f64,
) -> Result<NashReport> {
    let m = game.rows();
    let n = game.cols();
    if pair.row.len() != m || pair.col.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "strategy pair {}x{} against game {m}x{n}",
            pair.row.len(),
            pair.col.len()
        )));
    }

    let x: Vec<f64> = pair.row.iter().map(Scalar::to_f64).collect();
    let y: Vec<f64> = pair.col.iter().map(Scalar::to_f64).collect();

    // Row payoffs X y and column payoffs x^T Y.
    let mut row_payoffs = vec![0.0; m];
    let mut col_payoffs = vec![0.0; n];
    for i in 0..m {
        for j in 0..n {
            row_payoffs[i] += game.defender[(i, j)].to_f64() * y[j];
            col_payoffs[j] += game.attacker[(i, j)].to_f64() * x[i];
        }
    }
    let row_value: f64 = (0..m).map(|i| x[i] * row_payoffs[i]).sum();
    let col_value: f64 = (0..n).map(|j| y[j] * col_payoffs[j]).sum();
    let row_best = row_payoffs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let col_best = col_payoffs.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let row_regret = row_best - row_value;
    let col_regret = col_best - col_value;
    Ok(NashReport {
        ok: row_regret <= epsilon && col_regret <= epsilon,
        row_value,
        col_value,
        row_regret,
        col_regret,
    })
}

/// Exact rational copies of both payoff matrices, shifted by a common
/// additive constant so every entry is strictly positive. Shifting leaves
/// the equilibrium set untouched; the solver needs the positivity.
pub(crate) fn positive_rational_payoffs<S: Scalar>(
    game: &BimatrixGame<S>,
) -> (Mat<BigRational>, Mat<BigRational>) {
    let a = game.defender.map(Scalar::to_rational);
    let b = game.attacker.map(Scalar::to_rational);
    let min = a
        .iter()
        .chain(b.iter())
        .min()
        .cloned()
        .unwrap_or_else(BigRational::zero);
    if min > BigRational::zero() {
        return (a, b);
    }
    let shift = BigRational::from_f64(1.0) - min;
    (
        a.map(|v| v + shift.clone()),
        b.map(|v| v + shift.clone()),
    )
}

#[cfg(test)]
pub(crate) mod test_games {
    use super::*;

    /// Dominant-strategy game: unique equilibrium at (row 1, col 1).
    pub fn dominant() -> BimatrixGame<f64> {
        BimatrixGame::new(
            Mat::from_rows(vec![vec![3.0, 0.0], vec![5.0, 1.0]]),
            Mat::from_rows(vec![vec![3.0, 5.0], vec![0.0, 1.0]]),
        )
        .unwrap()
    }

    /// Matching-type symmetric game: unique equilibrium mixes uniformly.
    pub fn matching() -> BimatrixGame<f64> {
        BimatrixGame::new(
            Mat::from_rows(vec![vec![1.0, -1.0], vec![-1.0, 1.0]]),
            Mat::from_rows(vec![vec![-1.0, 1.0], vec![1.0, -1.0]]),
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::test_games::*;
    use super::*;

    #[test]
    fn verify_accepts_the_dominant_equilibrium() {
        let game = dominant();
        let pair = MixedStrategyPair {
            row: vec![0.0, 1.0],
            col: vec![0.0, 1.0],
        };
        let report = verify_nash(&game, &pair, 1e-9).unwrap();
        assert!(report.ok);
        assert_eq!(report.row_value, 1.0);
        assert_eq!(report.row_regret, 0.0);
    }

    #[test]
    fn verify_reports_regret_for_non_equilibrium() {
        let game = dominant();
        // Both players on their first strategy: the row player passes up
        // the payoff 5 available from row 2.
        let pair = MixedStrategyPair {
            row: vec![1.0, 0.0],
            col: vec![1.0, 0.0],
        };
        let report = verify_nash(&game, &pair, 1e-9).unwrap();
        assert!(!report.ok);
        assert_eq!(report.row_regret, 2.0);
    }

    #[test]
    fn verify_rejects_uniform_in_dominant_game() {
        let game = dominant();
        let pair = MixedStrategyPair {
            row: vec![0.5, 0.5],
            col: vec![0.5, 0.5],
        };
        let report = verify_nash(&game, &pair, 1e-9).unwrap();
        assert!(!report.ok);
        // Row payoffs against uniform y are (1.5, 3); value is 2.25.
        assert!((report.row_regret - 0.75).abs() < 1e-12);
        assert!((report.col_regret - 0.75).abs() < 1e-12);
    }

    #[test]
    fn verify_checks_dimensions() {
        let game = dominant();
        let pair = MixedStrategyPair {
            row: vec![1.0],
            col: vec![0.0, 1.0],
        };
        assert!(verify_nash(&game, &pair, 1e-9).is_err());
    }

    #[test]
    fn positivization_shifts_to_strictly_positive() {
        let (a, b) = positive_rational_payoffs(&matching());
        assert!(a.iter().all(|v| *v > BigRational::zero()));
        assert!(b.iter().all(|v| *v > BigRational::zero()));
    }

    #[test]
    fn pair_validation() {
        let good = MixedStrategyPair {
            row: vec![0.25, 0.75],
            col: vec![1.0],
        };
        assert!(good.validate(1e-12).is_ok());
        let bad = MixedStrategyPair {
            row: vec![0.5, 0.75],
            col: vec![1.0],
        };
        assert!(bad.validate(1e-12).is_err());
    }
}
