//! Lemke-Howson complementary pivoting in exact rational arithmetic.
//!
//! Labels 1..=m belong to the row player's strategies, m+1..=m+n to the
//! column player's. Two tableaus are kept, one per best-response polytope:
//!
//! * the x-system `B^T x + s = 1` (n equations) over variables
//!   `x_1..x_m` (ids 1..=m) and slacks `s_1..s_n` (ids m+1..=m+n),
//! * the y-system `A y + r = 1` (m equations) over variables
//!   `y_1..y_n` (ids m+1..=m+n) and slacks `r_1..r_m` (ids 1..=m).
//!
//! Complementary variables share an id. Dropping a label enters its
//! nonbasic variable; afterwards each leaving variable's complement enters
//! the other system until the dropped label's variable leaves somewhere.
//! Degenerate ties are resolved by a lexicographic minimum-ratio test over
//! the initial identity columns, which rules out cycling.

use num::rational::BigRational;
use num::traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::Scalar;
use crate::strategy::BimatrixGame;

use super::{positive_rational_payoffs, MixedStrategyPair};

/// One constraint system; column 0 is the right-hand side and column `v`
/// holds variable id `v`'s coefficients.
struct Tableau {
    coeffs: Mat<BigRational>,
    basis: Vec<usize>,
    /// Columns forming the initial identity, in lexicographic-test order.
    identity_cols: Vec<usize>,
}

impl Tableau {
    fn rows(&self) -> usize {
        self.basis.len()
    }

    /// Lexicographic minimum-ratio row for entering column `e`: among rows
    /// with positive pivot coefficient, minimize rhs / coeff with ties
    /// broken on the initial identity columns. The comparison multiplies
    /// through by both (positive) pivot coefficients to stay exact.
    fn ratio_test(&self, e: usize) -> Result<usize> {
        let mut best: Option<usize> = None;
        for row in 0..self.rows() {
            if self.coeffs[(row, e)] <= BigRational::zero() {
                continue;
            }
            best = Some(match best {
                None => row,
                Some(current) => {
                    if self.lex_less(row, current, e) {
                        row
                    } else {
                        current
                    }
                }
            });
        }
        best.ok_or_else(|| {
            Error::Numeric("unbounded ray in Lemke-Howson pivoting".into())
        })
    }

    /// Whether row `a`'s ratio vector is lexicographically below row `b`'s.
    fn lex_less(&self, a: usize, b: usize, e: usize) -> bool {
        let pa = &self.coeffs[(a, e)];
        let pb = &self.coeffs[(b, e)];
        for &col in std::iter::once(&0usize).chain(self.identity_cols.iter()) {
            let lhs = self.coeffs[(a, col)].clone() * pb.clone();
            let rhs = self.coeffs[(b, col)].clone() * pa.clone();
            if lhs != rhs {
                return lhs < rhs;
            }
        }
        unreachable!("identity columns keep tableau rows lexicographically distinct");
    }

    /// Pivot variable `e` into the basis at `row`; returns the leaving id.
    fn pivot(&mut self, row: usize, e: usize) -> usize {
        let cols = self.coeffs.cols();
        let pivot = self.coeffs[(row, e)].clone();
        debug_assert!(pivot > BigRational::zero());

        for c in 0..cols {
            if !self.coeffs[(row, c)].is_zero() {
                self.coeffs[(row, c)] = self.coeffs[(row, c)].clone() / pivot.clone();
            }
        }
        for r in 0..self.rows() {
            if r == row || self.coeffs[(r, e)].is_zero() {
                continue;
            }
            let factor = self.coeffs[(r, e)].clone();
            for c in 0..cols {
                if self.coeffs[(row, c)].is_zero() {
                    continue;
                }
                let delta = factor.clone() * self.coeffs[(row, c)].clone();
                self.coeffs[(r, c)] = self.coeffs[(r, c)].clone() - delta;
            }
        }

        std::mem::replace(&mut self.basis[row], e)
    }

    /// Basic solution restricted to variable ids in `lo..=hi`, indexed from
    /// `lo`.
    fn solution(&self, lo: usize, hi: usize) -> Vec<BigRational> {
        let mut values = vec![BigRational::zero(); hi - lo + 1];
        for (row, &var) in self.basis.iter().enumerate() {
            if (lo..=hi).contains(&var) {
                values[var - lo] = self.coeffs[(row, 0)].clone();
            }
        }
        values
    }
}

fn x_system(b: &Mat<BigRational>) -> Tableau {
    let (m, n) = (b.rows(), b.cols());
    let mut coeffs = Mat::filled(n, 1 + m + n, BigRational::zero());
    for j in 0..n {
        coeffs[(j, 0)] = BigRational::from_f64(1.0);
        for i in 0..m {
            coeffs[(j, 1 + i)] = b[(i, j)].clone();
        }
        coeffs[(j, 1 + m + j)] = BigRational::from_f64(1.0);
    }
    Tableau {
        coeffs,
        basis: (0..n).map(|j| m + 1 + j).collect(),
        identity_cols: (0..n).map(|j| 1 + m + j).collect(),
    }
}

fn y_system(a: &Mat<BigRational>) -> Tableau {
    let (m, n) = (a.rows(), a.cols());
    let mut coeffs = Mat::filled(m, 1 + m + n, BigRational::zero());
    for i in 0..m {
        coeffs[(i, 0)] = BigRational::from_f64(1.0);
        for j in 0..n {
            coeffs[(i, 1 + m + j)] = a[(i, j)].clone();
        }
        coeffs[(i, 1 + i)] = BigRational::from_f64(1.0);
    }
    Tableau {
        coeffs,
        basis: (0..m).map(|i| i + 1).collect(),
        identity_cols: (0..m).map(|i| 1 + i).collect(),
    }
}

fn normalize(mut v: Vec<BigRational>) -> Result<Vec<BigRational>> {
    let total = v.iter().fold(BigRational::zero(), |acc, p| acc + p.clone());
    if total <= BigRational::zero() {
        return Err(Error::Numeric(
            "pivoting terminated at the zero vertex".into(),
        ));
    }
    for p in &mut v {
        *p = p.clone() / total.clone();
    }
    Ok(v)
}

/// Run Lemke-Howson from `initial_label` (1-based, in `1..=rows+cols`).
///
/// Payoffs are converted to exact rationals and shifted positive; the
/// shift does not change the returned strategies. The result always passes
/// [`super::verify_nash`] — pivoting cannot stall because ties are broken
/// lexicographically — and probabilities sum to exactly one.
pub fn lemke_howson<S: Scalar>(
    game: &BimatrixGame<S>,
    initial_label: usize,
) -> Result<MixedStrategyPair<BigRational>> {
    let (m, n) = (game.rows(), game.cols());
    let labels = m + n;
    if initial_label == 0 || initial_label > labels {
        return Err(Error::LabelOutOfRange {
            label: initial_label,
            labels,
        });
    }

    let (a, b) = positive_rational_payoffs(game);
    let mut x_tab = x_system(&b);
    let mut y_tab = y_system(&a);

    // true: pivot in the x-system next; false: in the y-system.
    let mut in_x = initial_label <= m;
    let mut entering = initial_label;
    let max_pivots = 10_000 + 100 * labels;

    for _ in 0..max_pivots {
        let tableau = if in_x { &mut x_tab } else { &mut y_tab };
        let row = tableau.ratio_test(entering)?;
        let leaving = tableau.pivot(row, entering);
        if leaving == initial_label {
            let x = normalize(x_tab.solution(1, m))?;
            let y = normalize(y_tab.solution(m + 1, m + n))?;
            return Ok(MixedStrategyPair { row: x, col: y });
        }
        // The leaving variable's complement lives in the other system.
        entering = leaving;
        in_x = !in_x;
    }
    Err(Error::PivotBound(max_pivots))
}

#[cfg(test)]
mod tests {
    use super::super::test_games::*;
    use super::super::verify_nash;
    use super::*;
    use crate::scalar::ratio;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_game(rng: &mut StdRng, rows: usize, cols: usize) -> BimatrixGame<f64> {
        BimatrixGame::new(
            Mat::from_fn(rows, cols, |_, _| rng.gen_range(-5..=5) as f64),
            Mat::from_fn(rows, cols, |_, _| rng.gen_range(-5..=5) as f64),
        )
        .unwrap()
    }

    #[test]
    fn solves_dominant_strategy_game() {
        let pair = lemke_howson(&dominant(), 1).unwrap();
        assert_eq!(pair.row, vec![ratio(0, 1), ratio(1, 1)]);
        assert_eq!(pair.col, vec![ratio(0, 1), ratio(1, 1)]);
    }

    #[test]
    fn solves_matching_game_uniformly() {
        let pair = lemke_howson(&matching(), 1).unwrap();
        assert_eq!(pair.row, vec![ratio(1, 2), ratio(1, 2)]);
        assert_eq!(pair.col, vec![ratio(1, 2), ratio(1, 2)]);
    }

    #[test]
    fn all_labels_yield_verified_equilibria() {
        let mut rng = StdRng::seed_from_u64(99);
        for _ in 0..20 {
            let game = random_game(&mut rng, 3, 3);
            for label in 1..=6 {
                let pair = lemke_howson(&game, label).unwrap();
                pair.validate(0.0).unwrap();
                let report = verify_nash(&game, &pair, 1e-9).unwrap();
                assert!(report.ok, "label {label} failed: {report:?}");
            }
        }
    }

    #[test]
    fn probabilities_sum_to_exactly_one() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..10 {
            let game = random_game(&mut rng, 4, 3);
            let pair = lemke_howson(&game, 2).unwrap();
            let row_sum = pair
                .row
                .iter()
                .fold(BigRational::zero(), |acc, p| acc + p.clone());
            let col_sum = pair
                .col
                .iter()
                .fold(BigRational::zero(), |acc, p| acc + p.clone());
            assert_eq!(row_sum, ratio(1, 1));
            assert_eq!(col_sum, ratio(1, 1));
        }
    }

    #[test]
    fn survives_fully_degenerate_games() {
        // Every payoff equal: any pair is an equilibrium, and every pivot
        // step ties; termination exercises the lexicographic rule.
        let flat = BimatrixGame::new(
            Mat::filled(4, 4, 5.0),
            Mat::filled(4, 4, 5.0),
        )
        .unwrap();
        for label in 1..=8 {
            let pair = lemke_howson(&flat, label).unwrap();
            assert!(verify_nash(&flat, &pair, 1e-9).unwrap().ok);
        }
    }

    #[test]
    fn shift_invariance_of_returned_strategies() {
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..10 {
            let game = random_game(&mut rng, 3, 4);
            let shifted = BimatrixGame::new(
                game.defender.map(|v| v + 17.0),
                game.attacker.map(|v| v + 17.0),
            )
            .unwrap();
            let before = lemke_howson(&game, 1).unwrap();
            let after = lemke_howson(&shifted, 1).unwrap();
            assert_eq!(before, after);
            // Regrets are shift-invariant too.
            let r0 = verify_nash(&game, &before, 1e-9).unwrap();
            let r1 = verify_nash(&shifted, &before, 1e-9).unwrap();
            assert!((r0.row_regret - r1.row_regret).abs() < 1e-9);
            assert!((r0.col_regret - r1.col_regret).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_out_of_range_label() {
        assert!(matches!(
            lemke_howson(&dominant(), 0),
            Err(Error::LabelOutOfRange { .. })
        ));
        assert!(matches!(
            lemke_howson(&dominant(), 5),
            Err(Error::LabelOutOfRange { .. })
        ));
    }

    #[test]
    fn one_by_one_game() {
        let game = BimatrixGame::new(
            Mat::from_rows(vec![vec![-2.0]]),
            Mat::from_rows(vec![vec![3.0]]),
        )
        .unwrap();
        for label in 1..=2 {
            let pair = lemke_howson(&game, label).unwrap();
            assert_eq!(pair.row, vec![ratio(1, 1)]);
            assert_eq!(pair.col, vec![ratio(1, 1)]);
        }
    }
}
