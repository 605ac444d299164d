//! Exact feasibility of `A x = b, x ≥ 0` over the rationals, with verified
//! witnesses and Farkas certificates.

mod simplex;
mod text;
mod vertex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub use simplex::solve;
pub use text::{parse_certificate, parse_system, write_certificate, write_system};
pub use vertex::vertex_feasible;

/// `m` equality rows over `k` nonnegative variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSystem {
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
}

impl RationalSystem {
    pub fn new(rows: Vec<Vec<BigRational>>, rhs: Vec<BigRational>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::LinearSystem("need at least one row and one variable".into()));
        }
        if rows.len() != rhs.len() {
            return Err(Error::LengthMismatch {
                expected: rows.len(),
                got: rhs.len(),
            });
        }
        let vars = rows[0].len();
        if let Some(r) = rows.iter().find(|r| r.len() != vars) {
            return Err(Error::LengthMismatch {
                expected: vars,
                got: r.len(),
            });
        }
        Ok(Self { rows, rhs })
    }

    /// Integer convenience constructor.
    pub fn from_integers(rows: &[&[i64]], rhs: &[i64]) -> Result<Self> {
        let q = |v: i64| BigRational::from_integer(BigInt::from(v));
        Self::new(
            rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect(),
            rhs.iter().map(|&v| q(v)).collect(),
        )
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    pub fn rhs(&self) -> &[BigRational] {
        &self.rhs
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn var_count(&self) -> usize {
        self.rows[0].len()
    }

    /// Whether `x ≥ 0` satisfies every row exactly.
    pub fn satisfied_by(&self, x: &[BigRational]) -> bool {
        x.len() == self.var_count()
            && x.iter().all(|v| !v.is_negative())
            && self.rows.iter().zip(&self.rhs).all(|(row, b)| dot(row, x) == *b)
    }

    /// `(Σ cᵢ·rowᵢ, Σ cᵢ·rhsᵢ)`.
    pub fn combine(&self, multipliers: &[BigRational]) -> Result<(Vec<BigRational>, BigRational)> {
        if multipliers.len() != self.row_count() {
            return Err(Error::LengthMismatch {
                expected: self.row_count(),
                got: multipliers.len(),
            });
        }
        let mut row = vec![BigRational::zero(); self.var_count()];
        let mut rhs = BigRational::zero();
        for ((c, r), b) in multipliers.iter().zip(&self.rows).zip(&self.rhs) {
            if c.is_zero() {
                continue;
            }
            for (acc, a) in row.iter_mut().zip(r) {
                *acc += c * a;
            }
            rhs += c * b;
        }
        Ok((row, rhs))
    }
}

pub(crate) fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

/// Row multipliers whose combination reads `(nonnegative row)·x = negative`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub multipliers: Vec<BigRational>,
    pub derived_row: Vec<BigRational>,
    pub derived_rhs: BigRational,
}

impl Certificate {
    pub fn from_multipliers(system: &RationalSystem, multipliers: Vec<BigRational>) -> Result<Self> {
        let (derived_row, derived_rhs) = system.combine(&multipliers)?;
        Ok(Self {
            multipliers,
            derived_row,
            derived_rhs,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Feasible(Vec<BigRational>),
    Infeasible(Certificate),
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Self::Feasible(_))
    }
}

/// Recomputes the combination from the multipliers and checks the Farkas
/// condition: derived row `≥ 0` entrywise and derived rhs `< 0`. Stored
/// derived values must match the recomputation.
pub fn verify_certificate(system: &RationalSystem, cert: &Certificate) -> Result<bool> {
    if cert.derived_row.len() != system.var_count() {
        return Err(Error::LengthMismatch {
            expected: system.var_count(),
            got: cert.derived_row.len(),
        });
    }
    let (row, rhs) = system.combine(&cert.multipliers)?;
    Ok(row == cert.derived_row
        && rhs == cert.derived_rhs
        && row.iter().all(|a| !a.is_negative())
        && rhs.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn verify_examples() {
        let sys = RationalSystem::from_integers(&[&[1]], &[-1]).unwrap();
        let cert = Certificate::from_multipliers(&sys, vec![q(1, 1)]).unwrap();
        assert!(verify_certificate(&sys, &cert).unwrap());
        let zero = Certificate::from_multipliers(&sys, vec![q(0, 1)]).unwrap();
        assert!(!verify_certificate(&sys, &zero).unwrap());
        let flipped = Certificate::from_multipliers(&sys, vec![q(-1, 1)]).unwrap();
        assert!(!verify_certificate(&sys, &flipped).unwrap());
        let mut tampered = cert.clone();
        tampered.derived_rhs = q(-2, 1);
        assert!(!verify_certificate(&sys, &tampered).unwrap());
        let wide = Certificate {
            multipliers: vec![q(1, 1)],
            derived_row: vec![q(1, 1), q(0, 1)],
            derived_rhs: q(-1, 1),
        };
        assert!(verify_certificate(&sys, &wide).is_err());
    }

    #[test]
    fn shape_validation() {
        assert!(RationalSystem::from_integers(&[], &[]).is_err());
        assert!(RationalSystem::from_integers(&[&[1, 2], &[1]], &[0, 0]).is_err());
        assert!(RationalSystem::from_integers(&[&[1, 2]], &[0, 0]).is_err());
    }
}
