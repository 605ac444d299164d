//! The three-ray contradiction: real qubit rays at 120° on the Bloch circle
//! (60° apart as vectors) have pairwise overlap 1/4, and no joint law of
//! three fair indicators has the implied pair table.

use num_rational::BigRational;
use num_traits::Signed;

use super::moments::{build_moment_system, format_identity, solve_feasibility, MomentSystem};
use crate::error::Result;
use crate::field::QSqrt3;
use crate::lp::{verify_certificate, vertex_feasible, Certificate, LpOutcome, RationalSystem};
use crate::qstate::Ray;

/// `(1, 0)`, `(1/2, √3/2)`, `(1/2, −√3/2)`.
pub fn trine_rays() -> Vec<(String, Ray<QSqrt3>)> {
    let half = QSqrt3::ratio(1, 2);
    let root = QSqrt3::new(BigRational::from_integer(0.into()), BigRational::new(1.into(), 2.into()));
    [
        ("g1", [QSqrt3::ratio(1, 1), QSqrt3::ratio(0, 1)]),
        ("g2", [half.clone(), root.clone()]),
        ("g3", [half, -root]),
    ]
    .into_iter()
    .map(|(name, v)| (name.to_string(), Ray::from_real(&v).expect("nonzero")))
    .collect()
}

/// Outcome of a moment-system run on any ray list.
#[derive(Clone, Debug)]
pub struct MomentReport {
    pub system: MomentSystem,
    pub outcome: LpOutcome,
    /// Whether the outcome re-verified by substitution.
    pub verified: bool,
    /// The basic-solution search agrees with the simplex decision; `None`
    /// when the system is too large to enumerate.
    pub cross_check: Option<bool>,
}

impl MomentReport {
    /// `p… = value` lines for a feasible witness, or the certificate identity.
    pub fn conclusion(&self) -> String {
        let names = self.system.atom_names();
        match &self.outcome {
            LpOutcome::Feasible(x) => {
                let parts: Vec<String> = names
                    .iter()
                    .zip(x)
                    .map(|(n, v)| format!("{n} = {v}"))
                    .collect();
                format!("FEASIBLE: {}", parts.join(", "))
            }
            LpOutcome::Infeasible(c) => format!(
                "{} : INFEASIBLE",
                format_identity(&names, &c.derived_row, &c.derived_rhs)
            ),
        }
    }
}

/// Largest system the basic-solution cross-check enumerates.
pub const CROSS_CHECK_MAX_INDICATORS: usize = 4;

pub fn moment_report(rays: &[(String, Ray<QSqrt3>)]) -> Result<MomentReport> {
    let system = build_moment_system(rays)?;
    let outcome = solve_feasibility(&system)?;
    let verified = match &outcome {
        LpOutcome::Feasible(x) => system.system().satisfied_by(x),
        LpOutcome::Infeasible(c) => verify_certificate(system.system(), c)?,
    };
    let cross_check = (system.n() <= CROSS_CHECK_MAX_INDICATORS)
        .then(|| vertex_feasible(system.system()).is_some() == outcome.is_feasible());
    Ok(MomentReport {
        system,
        outcome,
        verified,
        cross_check,
    })
}

#[derive(Clone, Debug)]
pub struct TripleReport {
    pub moments: MomentReport,
    /// The three marginal rows `P(X₁=0,X₂=0)`, `P(X₁=0,X₃=1)`, `P(X₂=1,X₃=1)`
    /// over the eight atoms.
    pub marginals: RationalSystem,
    pub marginal_equations: Vec<String>,
    /// The combination `(+1, −1, +1)` of the marginal rows.
    pub combination: Certificate,
    pub combination_verified: bool,
    pub identity: String,
    pub narrative: Vec<String>,
}

impl TripleReport {
    /// Every exact check holds: overlaps 1/4, combination verified with a
    /// negative right-hand side, and the solver reports infeasible with a
    /// verified certificate.
    pub fn pass(&self) -> bool {
        let quarter = BigRational::new(1.into(), 4.into());
        let s = &self.moments.system;
        let overlaps_ok = (0..3).all(|i| (i + 1..3).all(|j| *s.overlap(i, j) == quarter));
        overlaps_ok
            && self.combination_verified
            && self.combination.derived_rhs.is_negative()
            && !self.moments.outcome.is_feasible()
            && self.moments.verified
            && self.moments.cross_check != Some(false)
    }
}

pub fn triple_test() -> Result<TripleReport> {
    let moments = moment_report(&trine_rays())?;
    let s = &moments.system;
    let names = s.atom_names();
    let picks = [(0, 1, false, false), (0, 2, false, true), (1, 2, true, true)];
    let (rows, rhs): (Vec<_>, Vec<_>) = picks
        .iter()
        .map(|&(i, j, a, b)| s.marginal_row(i, j, a, b))
        .unzip();
    let marginals = RationalSystem::new(rows, rhs)?;
    let marginal_equations: Vec<String> = marginals
        .rows()
        .iter()
        .zip(marginals.rhs())
        .map(|(r, b)| format_identity(&names, r, b))
        .collect();
    let one = BigRational::from_integer(1.into());
    let combination = Certificate::from_multipliers(&marginals, vec![one.clone(), -one.clone(), one])?;
    let combination_verified = verify_certificate(&marginals, &combination)?;
    let identity = format_identity(&names, &combination.derived_row, &combination.derived_rhs);

    let mut narrative = Vec::new();
    narrative.push("Indicators X_g1, X_g2, X_g3 are fair coins whose pairwise joint law is fixed by the overlaps.".to_string());
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        narrative.push(format!(
            "tr(P_{} P_{}) = {}, so P(1,1) = {}, P(1,0) = P(0,1) = {}, P(0,0) = {}",
            s.rays()[i].0,
            s.rays()[j].0,
            s.overlap(i, j),
            s.joint(i, j, true, true),
            s.joint(i, j, true, false),
            s.joint(i, j, false, false),
        ));
    }
    narrative.push("Marginalizing the joint law onto pairs gives:".to_string());
    narrative.extend(marginal_equations.iter().map(|e| format!("  {e}")));
    narrative.push(format!(
        "Adding the first and third and subtracting the second gives {identity}, impossible for probabilities."
    ));

    Ok(TripleReport {
        moments,
        marginals,
        marginal_equations,
        combination,
        combination_verified,
        identity,
        narrative,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trine_values() {
        let r = triple_test().unwrap();
        assert!(r.pass());
        assert_eq!(
            r.marginal_equations,
            vec!["p000 + p001 = 1/8", "p001 + p011 = 3/8", "p011 + p111 = 1/8"]
        );
        assert_eq!(r.identity, "p000 + p111 = -1/8");
        assert_eq!(r.moments.cross_check, Some(true));
    }
}
