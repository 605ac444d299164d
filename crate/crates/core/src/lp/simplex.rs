//! Phase-one simplex with Bland's rule over the rationals.
//!
//! Rows are sign-normalized so `b ≥ 0` and one artificial variable per row
//! forms the starting basis. The artificial columns stay in the tableau, so
//! at optimality the phase-one duals are `yᵢ = 1 − (reduced cost of
//! artificial i)`. A positive optimum means infeasible, and `−y` (mapped back
//! through the row sign flips) is a Farkas certificate.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Certificate, LpOutcome, RationalSystem};

struct Tableau {
    /// `m` rows of `k + m` coefficients followed by the basic value.
    rows: Vec<Vec<BigRational>>,
    /// Reduced costs of all `k + m` columns followed by `−objective`.
    cost: Vec<BigRational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.rows[row].clone();
        let eliminate = |target: &mut Vec<BigRational>| {
            let f = target[col].clone();
            if f.is_zero() {
                return;
            }
            for (t, r) in target.iter_mut().zip(&pivot_row) {
                if !r.is_zero() {
                    *t -= &f * r;
                }
            }
        };
        for (i, target) in self.rows.iter_mut().enumerate() {
            if i != row {
                eliminate(target);
            }
        }
        eliminate(&mut self.cost);
        self.basis[row] = col;
    }
}

/// Decides `A x = b, x ≥ 0` exactly. Deterministic: the same system always
/// yields the same witness or certificate.
pub fn solve(system: &RationalSystem) -> LpOutcome {
    let m = system.row_count();
    let k = system.var_count();
    let width = k + m;

    let signs: Vec<bool> = system.rhs().iter().map(|b| b.is_negative()).collect();
    let rows: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let flip = |v: &BigRational| if signs[i] { -v } else { v.clone() };
            let mut row: Vec<BigRational> = system.rows()[i].iter().map(flip).collect();
            row.extend((0..m).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row.push(flip(&system.rhs()[i]));
            row
        })
        .collect();
    // Objective Σ artificials; reduced costs of originals are −Σᵢ Aᵢⱼ.
    let mut cost = vec![BigRational::zero(); width + 1];
    for row in &rows {
        for j in 0..k {
            cost[j] -= &row[j];
        }
        cost[width] -= &row[width];
    }
    let mut tableau = Tableau {
        rows,
        cost,
        basis: (k..width).collect(),
    };

    loop {
        let Some(col) = (0..width).find(|&j| tableau.cost[j].is_negative()) else {
            break;
        };
        let mut best: Option<(usize, BigRational)> = None;
        for (i, row) in tableau.rows.iter().enumerate() {
            if !row[col].is_positive() {
                continue;
            }
            let ratio = &row[width] / &row[col];
            let better = match &best {
                None => true,
                Some((b, r)) => ratio < *r || (ratio == *r && tableau.basis[i] < tableau.basis[*b]),
            };
            if better {
                best = Some((i, ratio));
            }
        }
        // Phase one is bounded below by 0, so an entering column always has a
        // positive entry.
        let (row, _) = best.expect("phase-one objective is bounded");
        tableau.pivot(row, col);
    }

    let objective = -tableau.cost[width].clone();
    if objective.is_zero() {
        let mut x = vec![BigRational::zero(); k];
        for (i, &b) in tableau.basis.iter().enumerate() {
            if b < k {
                x[b] = tableau.rows[i][width].clone();
            }
        }
        return LpOutcome::Feasible(x);
    }
    let multipliers = (0..m)
        .map(|i| {
            let y = BigRational::one() - &tableau.cost[k + i];
            if signs[i] {
                y
            } else {
                -y
            }
        })
        .collect();
    LpOutcome::Infeasible(
        Certificate::from_multipliers(system, multipliers).expect("one multiplier per row"),
    )
}
