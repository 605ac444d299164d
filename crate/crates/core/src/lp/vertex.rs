//! Feasibility by exhaustive search over basic solutions. Exponential in the
//! number of variables; used as a cross-check on small systems.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::RationalSystem;

/// Solves `A_S x_S = b` for the columns `S`; `None` when the columns are
/// dependent or the system is inconsistent.
fn solve_on(system: &RationalSystem, columns: &[usize]) -> Option<Vec<BigRational>> {
    let m = system.row_count();
    let r = columns.len();
    let mut aug: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let mut row: Vec<BigRational> =
                columns.iter().map(|&j| system.rows()[i][j].clone()).collect();
            row.push(system.rhs()[i].clone());
            row
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..r {
        let p = (pivot_row..m).find(|&i| !aug[i][col].is_zero())?;
        aug.swap(pivot_row, p);
        let lead = aug[pivot_row][col].clone();
        for v in aug[pivot_row].iter_mut() {
            *v /= &lead;
        }
        let pivot = aug[pivot_row].clone();
        for (i, row) in aug.iter_mut().enumerate() {
            if i != pivot_row && !row[col].is_zero() {
                let f = row[col].clone();
                for (v, p) in row.iter_mut().zip(&pivot) {
                    *v -= &f * p;
                }
            }
        }
        pivot_row += 1;
    }
    if aug[r..].iter().any(|row| !row[r].is_zero()) {
        return None;
    }
    Some(aug[..r].iter().map(|row| row[r].clone()).collect())
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// A nonnegative solution if one exists. Every feasible system has a basic
/// feasible solution, so trying all independent column subsets decides
/// feasibility.
pub fn vertex_feasible(system: &RationalSystem) -> Option<Vec<BigRational>> {
    let k = system.var_count();
    if system.rhs().iter().all(Zero::is_zero) {
        return Some(vec![BigRational::zero(); k]);
    }
    for size in 1..=system.row_count().min(k) {
        let mut cols: Vec<usize> = (0..size).collect();
        loop {
            if let Some(xs) = solve_on(system, &cols) {
                if xs.iter().all(|v| !v.is_negative()) {
                    let mut x = vec![BigRational::zero(); k];
                    for (&j, v) in cols.iter().zip(xs) {
                        x[j] = v;
                    }
                    return Some(x);
                }
            }
            if !next_combination(&mut cols, k) {
                break;
            }
        }
    }
    None
}
