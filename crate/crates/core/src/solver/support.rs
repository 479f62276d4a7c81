//! Support enumeration over best-response polytope vertices.
//!
//! For each candidate support (a square subset of tight constraints) the
//! indifference system is solved exactly; feasible solutions are vertices
//! of the polytopes `P = {x >= 0, B^T x <= 1}` and `Q = {y >= 0, A y <= 1}`.
//! Every completely-labeled vertex pair normalizes to a Nash equilibrium,
//! and every extreme equilibrium (in particular every Lemke-Howson
//! endpoint) shows up this way, degenerate games included.

use std::collections::{BTreeMap, BTreeSet};

use num::rational::BigRational;
use num::traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{solve_linear, Mat};
use crate::scalar::Scalar;
use crate::strategy::BimatrixGame;

use super::{positive_rational_payoffs, verify_nash, MixedStrategyPair};

/// A linear constraint `coef . v <= rhs` tagged with its label.
struct Constraint {
    coef: Vec<BigRational>,
    rhs: BigRational,
    label: usize,
}

fn dot(coef: &[BigRational], point: &[BigRational]) -> BigRational {
    coef.iter()
        .zip(point)
        .fold(BigRational::zero(), |acc, (c, v)| acc + c.clone() * v.clone())
}

/// Visit every `k`-subset of `0..n` in lexicographic order.
fn for_each_combination(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        // Advance to the next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// All vertices of the polytope cut out by `constraints` in dimension
/// `dim`, keyed by position, valued by the labels of their tight
/// constraints.
fn polytope_vertices(
    dim: usize,
    constraints: &[Constraint],
) -> BTreeMap<Vec<BigRational>, BTreeSet<usize>> {
    let mut vertices = BTreeMap::new();
    for_each_combination(constraints.len(), dim, |subset| {
        let a = Mat::from_fn(dim, dim, |r, c| constraints[subset[r]].coef[c].clone());
        let b: Vec<BigRational> = subset
            .iter()
            .map(|&i| constraints[i].rhs.clone())
            .collect();
        let point = match solve_linear(&a, &b) {
            Ok(p) => p,
            Err(_) => return, // singular basis
        };
        if constraints
            .iter()
            .any(|c| dot(&c.coef, &point) > c.rhs)
        {
            return; // infeasible
        }
        if point.iter().all(Zero::is_zero) {
            return; // the artificial origin, never part of an equilibrium
        }
        vertices.entry(point.clone()).or_insert_with(|| {
            constraints
                .iter()
                .filter(|c| dot(&c.coef, &point) == c.rhs)
                .map(|c| c.label)
                .collect()
        });
    });
    vertices
}

fn normalize(v: &[BigRational]) -> Vec<BigRational> {
    let total = v.iter().fold(BigRational::zero(), |acc, p| acc + p.clone());
    v.iter().map(|p| p.clone() / total.clone()).collect()
}

/// Enumerate extreme Nash equilibria of a small game.
///
/// Refuses games larger than `max_dim` per side; the basis enumeration is
/// exponential, which is fine for the oracle sizes this backs.
pub fn support_enumeration<S: Scalar>(
    game: &BimatrixGame<S>,
    max_dim: usize,
) -> Result<Vec<MixedStrategyPair<BigRational>>> {
    let (m, n) = (game.rows(), game.cols());
    if m > max_dim || n > max_dim {
        return Err(Error::OracleDimension {
            rows: m,
            cols: n,
            max_dim,
        });
    }
    let (a, b) = positive_rational_payoffs(game);
    let one = BigRational::from_f64(1.0);

    // P = {x >= 0, B^T x <= 1}: label i+1 for x_i = 0, label m+1+j for a
    // tight column constraint.
    let mut x_constraints = Vec::with_capacity(m + n);
    for i in 0..m {
        let mut coef = vec![BigRational::zero(); m];
        coef[i] = -one.clone();
        x_constraints.push(Constraint {
            coef,
            rhs: BigRational::zero(),
            label: i + 1,
        });
    }
    for j in 0..n {
        x_constraints.push(Constraint {
            coef: (0..m).map(|i| b[(i, j)].clone()).collect(),
            rhs: one.clone(),
            label: m + 1 + j,
        });
    }

    // Q = {y >= 0, A y <= 1}: label m+1+j for y_j = 0, label i+1 for a
    // tight row constraint.
    let mut y_constraints = Vec::with_capacity(m + n);
    for j in 0..n {
        let mut coef = vec![BigRational::zero(); n];
        coef[j] = -one.clone();
        y_constraints.push(Constraint {
            coef,
            rhs: BigRational::zero(),
            label: m + 1 + j,
        });
    }
    for i in 0..m {
        y_constraints.push(Constraint {
            coef: (0..n).map(|j| a[(i, j)].clone()).collect(),
            rhs: one.clone(),
            label: i + 1,
        });
    }

    let x_vertices = polytope_vertices(m, &x_constraints);
    let y_vertices = polytope_vertices(n, &y_constraints);

    let full: BTreeSet<usize> = (1..=m + n).collect();
    let mut out = Vec::new();
    for (x, x_labels) in &x_vertices {
        for (y, y_labels) in &y_vertices {
            let union: BTreeSet<usize> = x_labels.union(y_labels).copied().collect();
            if union != full {
                continue;
            }
            let pair = MixedStrategyPair {
                row: normalize(x),
                col: normalize(y),
            };
            if verify_nash(game, &pair, 1e-9)?.ok && !out.contains(&pair) {
                out.push(pair);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::test_games::*;
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn combinations_cover_all_subsets() {
        let mut seen = Vec::new();
        for_each_combination(4, 2, |s| seen.push(s.to_vec()));
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }

    #[test]
    fn dominant_game_has_exactly_the_pure_equilibrium() {
        let found = support_enumeration(&dominant(), 8).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].row, vec![ratio(0, 1), ratio(1, 1)]);
        assert_eq!(found[0].col, vec![ratio(0, 1), ratio(1, 1)]);
    }

    #[test]
    fn matching_game_contains_the_uniform_pair() {
        let found = support_enumeration(&matching(), 8).unwrap();
        let uniform = MixedStrategyPair {
            row: vec![ratio(1, 2), ratio(1, 2)],
            col: vec![ratio(1, 2), ratio(1, 2)],
        };
        assert!(found.contains(&uniform), "found: {found:?}");
    }

    #[test]
    fn degenerate_duplicated_rows_still_yield_equilibria() {
        let game = BimatrixGame::new(
            Mat::from_rows(vec![vec![2.0, 0.0], vec![2.0, 0.0], vec![0.0, 1.0]]),
            Mat::from_rows(vec![vec![1.0, 0.0], vec![1.0, 0.0], vec![0.0, 2.0]]),
        )
        .unwrap();
        let found = support_enumeration(&game, 8).unwrap();
        assert!(!found.is_empty());
        for pair in &found {
            assert!(verify_nash(&game, pair, 1e-9).unwrap().ok);
        }
    }

    #[test]
    fn refuses_large_games() {
        let game = BimatrixGame::new(Mat::filled(9, 2, 1.0), Mat::filled(9, 2, 1.0)).unwrap();
        assert!(matches!(
            support_enumeration(&game, 8),
            Err(Error::OracleDimension { .. })
        ));
    }
}
