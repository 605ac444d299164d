//! Indicator moment systems.
//!
//! If every ray `g` had a support set whose `ρ₁`-measure behaved like a
//! fair coin `X_g` with `P(X_g = 1, X_h = 1) = ½·tr(P_g P_h)`, the joint law
//! of `X_{g₁}, …, X_{gₙ}` would be a distribution on `2ⁿ` atoms. The moment
//! system states those constraints; infeasibility refutes the premise.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::QSqrt3;
use crate::lp::{self, verify_certificate, LpOutcome, RationalSystem};
use crate::qstate::Ray;

pub const MAX_INDICATORS: usize = 20;

/// Atom `a` has `X_{g_i} = 1` iff bit `n − 1 − i` of `a` is set, so atom
/// names read `p{x₁x₂…xₙ}` and index order is lexicographic.
#[derive(Clone, Debug)]
pub struct MomentSystem {
    rays: Vec<(String, Ray<QSqrt3>)>,
    overlaps: Vec<Vec<BigRational>>,
    constraint_names: Vec<String>,
    system: RationalSystem,
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

impl MomentSystem {
    pub fn n(&self) -> usize {
        self.rays.len()
    }

    pub fn rays(&self) -> &[(String, Ray<QSqrt3>)] {
        &self.rays
    }

    /// `tr(P_{g_i} P_{g_j})`, exact.
    pub fn overlap(&self, i: usize, j: usize) -> &BigRational {
        &self.overlaps[i][j]
    }

    pub fn system(&self) -> &RationalSystem {
        &self.system
    }

    pub fn constraint_names(&self) -> &[String] {
        &self.constraint_names
    }

    pub fn atom_count(&self) -> usize {
        1 << self.n()
    }

    pub fn atom_name(&self, atom: usize) -> String {
        atom_name(self.n(), atom)
    }

    pub fn atom_names(&self) -> Vec<String> {
        (0..self.atom_count()).map(|a| self.atom_name(a)).collect()
    }

    /// Value of `X_{g_i}` on `atom`.
    pub fn bit(&self, atom: usize, i: usize) -> bool {
        (atom >> (self.n() - 1 - i)) & 1 == 1
    }

    /// `P(X_{g_i} = a, X_{g_j} = b)` implied by the singleton and pair rows.
    pub fn joint(&self, i: usize, j: usize, a: bool, b: bool) -> BigRational {
        let both = &self.overlaps[i][j] * half();
        match (a, b) {
            (true, true) => both,
            (true, false) | (false, true) => half() - both,
            (false, false) => BigRational::one() - half() - half() + both,
        }
    }

    /// The row `Σ_{atoms with X_i = a, X_j = b} p = P(X_i = a, X_j = b)`.
    pub fn marginal_row(&self, i: usize, j: usize, a: bool, b: bool) -> (Vec<BigRational>, BigRational) {
        let row = (0..self.atom_count())
            .map(|atom| {
                if self.bit(atom, i) == a && self.bit(atom, j) == b {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        (row, self.joint(i, j, a, b))
    }
}

pub fn atom_name(n: usize, atom: usize) -> String {
    let bits: String = (0..n)
        .map(|i| if (atom >> (n - 1 - i)) & 1 == 1 { '1' } else { '0' })
        .collect();
    format!("p{bits}")
}

/// `row·p = rhs` with atom names, e.g. `p000 + p111 = -1/8`.
pub fn format_identity(names: &[String], row: &[BigRational], rhs: &BigRational) -> String {
    let mut out = String::new();
    for (name, c) in names.iter().zip(row) {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else { "+" };
        let abs = c.abs();
        let term = if abs.is_one() { name.clone() } else { format!("{abs}*{name}") };
        if out.is_empty() {
            out = if c.is_negative() { format!("-{term}") } else { term };
        } else {
            out = format!("{out} {sign} {term}");
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    format!("{out} = {rhs}")
}

/// Normalization, `n` singleton rows `P(X_g = 1) = ½`, and `n(n−1)/2` pair
/// rows `P(X_g = 1, X_h = 1) = ½·tr(P_g P_h)` over `2ⁿ` atoms.
pub fn build_moment_system(rays: &[(String, Ray<QSqrt3>)]) -> Result<MomentSystem> {
    let n = rays.len();
    if n == 0 || n > MAX_INDICATORS {
        return Err(Error::RayCount(n));
    }
    let dim = rays[0].1.dim();
    if let Some((_, r)) = rays.iter().find(|(_, r)| r.dim() != dim) {
        return Err(Error::DimensionMismatch(dim, r.dim()));
    }
    let mut overlaps = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let ov = rays[i].1.overlap(&rays[j].1)?;
            overlaps[i][j] = ov.as_rational().cloned().ok_or(Error::IrrationalOverlap(i, j))?;
        }
    }
    let atoms = 1usize << n;
    let bit = |atom: usize, i: usize| (atom >> (n - 1 - i)) & 1 == 1;
    let indicator = |pred: &dyn Fn(usize) -> bool| -> Vec<BigRational> {
        (0..atoms)
            .map(|a| if pred(a) { BigRational::one() } else { BigRational::zero() })
            .collect()
    };
    let mut rows = vec![indicator(&|_| true)];
    let mut rhs = vec![BigRational::one()];
    let mut names = vec!["normalization".to_string()];
    for (i, (name, _)) in rays.iter().enumerate() {
        rows.push(indicator(&|a| bit(a, i)));
        rhs.push(half());
        names.push(format!("P(X[{name}]=1)"));
    }
    for i in 0..n {
        for j in i + 1..n {
            let both = &overlaps[i][j] * half();
            // P(X_g = 0, X_h = 1) = ½ − ½·overlap must be a probability.
            assert!(!(half() - &both).is_negative(), "overlap above 1");
            rows.push(indicator(&|a| bit(a, i) && bit(a, j)));
            rhs.push(both);
            names.push(format!("P(X[{}]=1,X[{}]=1)", rays[i].0, rays[j].0));
        }
    }
    Ok(MomentSystem {
        rays: rays.to_vec(),
        overlaps,
        constraint_names: names,
        system: RationalSystem::new(rows, rhs)?,
    })
}

/// Solves exactly and re-verifies the result by substitution.
pub fn solve_feasibility(system: &MomentSystem) -> Result<LpOutcome> {
    let outcome = lp::solve(system.system());
    let verified = match &outcome {
        LpOutcome::Feasible(x) => system.system().satisfied_by(x),
        LpOutcome::Infeasible(cert) => verify_certificate(system.system(), cert)?,
    };
    if !verified {
        return Err(Error::LinearSystem("solver result failed re-verification".into()));
    }
    Ok(outcome)
}
