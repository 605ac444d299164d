//! Support sets `Λ_h` and the measure identities that follow from adequacy
//! on a basis `{g, g⊥}`.

use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::field::{Quantity, Real};
use crate::ontology::{
    describe_ray, total_variation, EpistemicMeasure, Experiment, NodeSet, OnticSpace,
    OntologicalModel,
};
use crate::qstate::Ray;

/// `Λ_h`: nodes whose response to the test of `h` is outcome 1 with
/// certainty, plus the nodes with an intermediate response.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportSet {
    pub ray: String,
    pub members: NodeSet,
    /// Nodes with `tol < p < 1 − tol`.
    pub residual: NodeSet,
}

/// Membership is `p ≥ 1 − tol`; `tol` is 0 for exact models.
pub fn support_set<R: Real>(model: &OntologicalModel<R>, h: &Ray<R>, tol: &R) -> Result<SupportSet> {
    let table = model.responses(&Experiment::projective(h))?;
    let threshold = R::one() - tol.clone();
    let members = table.rows.iter().map(|row| row[1] >= threshold).collect();
    let residual = table
        .rows
        .iter()
        .map(|row| row[1] > *tol && row[1] < threshold)
        .collect();
    Ok(SupportSet {
        ray: describe_ray(h),
        members: NodeSet::new(members),
        residual: NodeSet::new(residual),
    })
}

/// One measured identity: `measured` should equal `expected`.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck<R> {
    pub identity: String,
    pub measured: R,
    pub expected: R,
    pub deviation: R,
    pub pass: bool,
}

impl<R: Real> IdentityCheck<R> {
    pub fn new(identity: impl Into<String>, measured: R, expected: R, tol: &R) -> Self {
        let deviation = (measured.clone() - expected.clone()).magnitude();
        let pass = deviation <= *tol;
        Self {
            identity: identity.into(),
            measured,
            expected,
            deviation,
            pass,
        }
    }

    pub fn to_record(&self) -> IdentityRecord {
        IdentityRecord {
            identity: self.identity.clone(),
            measured: self.measured.quantity(),
            expected: self.expected.quantity(),
            deviation: self.deviation.quantity(),
            pass: self.pass,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityRecord {
    pub identity: String,
    pub measured: Quantity,
    pub expected: Quantity,
    pub deviation: Quantity,
    pub pass: bool,
}

/// A named family of node subsets `B`.
pub type TestSets = Vec<(String, NodeSet)>;

/// The empty set, the full set, `random` subsets with independent fair
/// membership, and, on sphere meshes, `hemispheres` random open hemispheres.
pub fn test_sets<R: Real, G: Rng + ?Sized>(
    space: &OnticSpace<R>,
    random: usize,
    hemispheres: usize,
    rng: &mut G,
) -> TestSets {
    let n = space.len();
    let mut sets = vec![
        ("empty".to_string(), NodeSet::empty(n)),
        ("all".to_string(), NodeSet::full(n)),
    ];
    for i in 0..random {
        let members = (0..n).map(|_| rng.random_bool(0.5)).collect();
        sets.push((format!("random{i}"), NodeSet::new(members)));
    }
    if let Some(points) = space.points() {
        for i in 0..hemispheres {
            let a = crate::qstate::BlochVector::random_unit(rng).as_array();
            let members = points
                .iter()
                .map(|p| a[0] * p[0] + a[1] * p[1] + a[2] * p[2] > 0.0)
                .collect();
            sets.push((format!("hemisphere{i}"), NodeSet::new(members)));
        }
    }
    sets
}

#[derive(Clone, Debug)]
pub struct SupportReport<R> {
    pub ray: String,
    pub checks: Vec<IdentityCheck<R>>,
}

impl<R: Real> SupportReport<R> {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck<R>> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn max_deviation(&self) -> R {
        crate::field::max_of(self.checks.iter().map(|c| c.deviation.clone()))
    }
}

/// Checks, for the basis `{g, g⊥}`:
///
/// - `ρ_g(Λ_g) = 1` and `ρ_g(Λ_{g⊥}) = 0`;
/// - `ρ_g` gives no mass to nodes answering the `g⊥` test with `0 < p < 1`;
/// - `ρ₁ = ρ_g + ρ_{g⊥}` node by node (trivial when `ρ₁` is built here);
/// - `ρ₁(Λ_g ∩ Λ_{g⊥}) = 0`;
/// - `ρ_g(B) = ρ₁(B ∩ Λ_g)` for every test set `B`.
#[allow(clippy::too_many_arguments)]
pub fn verify_support_identities<R: Real>(
    model: &OntologicalModel<R>,
    g: &Ray<R>,
    rho_g: &EpistemicMeasure<R>,
    rho_perp: &EpistemicMeasure<R>,
    rho_one: Option<&EpistemicMeasure<R>>,
    sets: &TestSets,
    tol: &R,
) -> Result<SupportReport<R>> {
    let membership_tol = if R::EXACT { R::zero() } else { R::tolerance() };
    let g_perp = g.perp()?;
    let support_g = support_set(model, g, &membership_tol)?;
    let support_perp = support_set(model, &g_perp, &membership_tol)?;
    let built = rho_g.sum(rho_perp)?;
    let rho_one = rho_one.unwrap_or(&built);
    let (zero, one) = (R::zero(), R::one());

    let mut checks = vec![
        IdentityCheck::new(
            "prep(g) on support(g) = 1",
            rho_g.mass_on(&support_g.members),
            one,
            tol,
        ),
        IdentityCheck::new(
            "prep(g) on support(g_perp) = 0",
            rho_g.mass_on(&support_perp.members),
            zero.clone(),
            tol,
        ),
        IdentityCheck::new(
            "prep(g) on residual(g_perp) = 0",
            rho_g.mass_on(&support_perp.residual),
            zero.clone(),
            tol,
        ),
        IdentityCheck::new(
            "rho1 = prep(g) + prep(g_perp)",
            rho_one.max_mass_deviation(&built)?,
            zero.clone(),
            tol,
        ),
        IdentityCheck::new(
            "rho1 on support(g) & support(g_perp) = 0",
            rho_one.mass_on(&support_g.members.intersect(&support_perp.members)),
            zero,
            tol,
        ),
    ];
    for (name, set) in sets {
        checks.push(IdentityCheck::new(
            format!("prep(g)[{name}] = rho1[{name} & support(g)]"),
            rho_g.mass_on(set),
            rho_one.mass_on(&set.intersect(&support_g.members)),
            tol,
        ));
    }
    Ok(SupportReport {
        ray: support_g.ray,
        checks,
    })
}

#[derive(Clone, Debug)]
pub struct OverlapReport<R> {
    pub check: IdentityCheck<R>,
    /// Total variation between the supplied `ρ₁` and `prep(h) + prep(h⊥)`,
    /// when the model prepares both. Nonzero means `ρ₁` depends on the basis.
    pub injectivity_defect: Option<R>,
}

/// Compares `ρ₁(Λ_g ∩ Λ_h)` with `tr(P_g P_h)`.
pub fn overlap_identity_check<R: Real>(
    model: &OntologicalModel<R>,
    rho_one: &EpistemicMeasure<R>,
    g: &Ray<R>,
    h: &Ray<R>,
    tol: &R,
) -> Result<OverlapReport<R>> {
    let membership_tol = if R::EXACT { R::zero() } else { R::tolerance() };
    let support_g = support_set(model, g, &membership_tol)?;
    let support_h = support_set(model, h, &membership_tol)?;
    let check = IdentityCheck::new(
        format!(
            "rho1 on support({}) & support({}) = overlap",
            support_g.ray, support_h.ray
        ),
        rho_one.mass_on(&support_g.members.intersect(&support_h.members)),
        g.overlap(h)?,
        tol,
    );
    let injectivity_defect = match (model.prepare_ray(h)?, model.prepare_ray(&h.perp()?)?) {
        (Some(a), Some(b)) => Some(total_variation(rho_one, &a.sum(&b)?)?),
        _ => None,
    };
    Ok(OverlapReport {
        check,
        injectivity_defect,
    })
}
