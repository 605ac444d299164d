//! Independent feasibility oracle for `A x = b, x ≥ 0`.
//!
//! Works over the integers: rows are scaled to integer coefficients, a row
//! basis is chosen greedily, and every column subset of size `rank(A)` is
//! solved by fraction-free Gauss-Jordan elimination. A system is feasible
//! iff it is consistent and some such basic solution is nonnegative.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use ontic_core::lp::RationalSystem;

fn integer_rows(system: &RationalSystem) -> Vec<Vec<BigInt>> {
    system
        .rows()
        .iter()
        .zip(system.rhs())
        .map(|(row, b)| {
            let lcm = row
                .iter()
                .chain(std::iter::once(b))
                .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            row.iter()
                .chain(std::iter::once(b))
                .map(|v| (v * BigRational::from_integer(lcm.clone())).to_integer())
                .collect()
        })
        .collect()
}

/// Rank by fraction-free forward elimination.
fn rank(rows: &[Vec<BigInt>], cols: usize) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| r[..cols].to_vec()).collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for i in rank + 1..m.len() {
            let f = m[i][c].clone();
            let lead = m[rank][c].clone();
            for j in 0..cols {
                m[i][j] = &lead * &m[i][j] - &f * &m[rank][j];
            }
        }
        rank += 1;
    }
    rank
}

/// Solves the square system `[a | b]` (r × r+1) fraction-free. Returns
/// numerators and the common denominator, or `None` if singular.
fn gauss_jordan(mut m: Vec<Vec<BigInt>>) -> Option<(Vec<BigInt>, BigInt)> {
    let r = m.len();
    let mut prev = BigInt::one();
    for k in 0..r {
        let p = (k..r).find(|&i| !m[i][k].is_zero())?;
        m.swap(k, p);
        for i in 0..r {
            if i == k {
                continue;
            }
            for j in 0..=r {
                if j == k {
                    continue;
                }
                let num = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                let (q, rem) = num.div_rem(&prev);
                assert!(rem.is_zero(), "fraction-free step must divide exactly");
                m[i][j] = q;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let numerators = (0..r).map(|i| m[i][r].clone()).collect();
    Some((numerators, m[0][0].clone()))
}

/// Whether the system has a nonnegative solution.
pub fn oracle_feasible(system: &RationalSystem) -> bool {
    let k = system.var_count();
    let rows = integer_rows(system);
    if rows.iter().all(|r| r[k].is_zero()) {
        return true;
    }
    let rank_a = rank(&rows, k);
    if rank(&rows, k + 1) > rank_a {
        return false;
    }
    let mut basis_rows: Vec<Vec<BigInt>> = Vec::new();
    for row in &rows {
        let mut trial = basis_rows.clone();
        trial.push(row.clone());
        if rank(&trial, k) > basis_rows.len() {
            basis_rows = trial;
        }
    }
    let r = rank_a;
    let mut cols: Vec<usize> = (0..r).collect();
    loop {
        let square: Vec<Vec<BigInt>> = basis_rows
            .iter()
            .map(|row| {
                let mut v: Vec<BigInt> = cols.iter().map(|&j| row[j].clone()).collect();
                v.push(row[k].clone());
                v
            })
            .collect();
        if let Some((nums, den)) = gauss_jordan(square) {
            if nums.iter().all(|n| n.is_zero() || n.is_positive() == den.is_positive()) {
                return true;
            }
        }
        // next r-combination of 0..k
        let mut i = r;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if cols[i] < k - r + i {
                cols[i] += 1;
                for j in i + 1..r {
                    cols[j] = cols[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// A random system with `k ≤ 16` variables, `m ≤ 10` rows, and coefficients
/// in `-3..=3`; half of them are feasible by construction.
pub fn random_system<G: Rng>(rng: &mut G) -> RationalSystem {
    let k = rng.random_range(1..=16);
    let m = rng.random_range(1..=10);
    let q = |v: i64| BigRational::from_integer(BigInt::from(v));
    let rows: Vec<Vec<BigRational>> = (0..m)
        .map(|_| (0..k).map(|_| q(rng.random_range(-3..=3))).collect())
        .collect();
    let rhs = if rng.random_bool(0.5) {
        let x: Vec<BigRational> = (0..k)
            .map(|_| if rng.random_bool(0.5) { q(0) } else { q(rng.random_range(1..=3)) })
            .collect();
        rows.iter()
            .map(|r| r.iter().zip(&x).fold(q(0), |acc, (a, b)| acc + a * b))
            .collect()
    } else {
        (0..m).map(|_| q(rng.random_range(-3..=3))).collect()
    };
    RationalSystem::new(rows, rhs).expect("consistent shape")
}
