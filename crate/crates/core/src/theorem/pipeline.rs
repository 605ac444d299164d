//! The staged audit of the argument that the density-matrix map cannot be
//! injective, run either on a concrete model or abstractly.

use std::fmt;

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::moments::MomentSystem;
use super::support::{
    overlap_identity_check, test_sets, verify_support_identities, IdentityCheck, IdentityRecord,
};
use super::triple::{trine_rays, triple_test, TripleReport};
use crate::error::Result;
use crate::field::Real;
use crate::ontology::{
    mix, total_variation, EpistemicMeasure, Experiment, NodeSet, OntologicalModel, PauliAxis,
};
use crate::qstate::{DensityMatrix, Operator, Ray};

/// A generator (`first == second`) or the mixture
/// `weight·first + (1 − weight)·second`.
#[derive(Clone, Debug)]
pub struct Mixture<R> {
    pub first: usize,
    pub second: usize,
    pub weight: R,
    pub measure: EpistemicMeasure<R>,
}

impl<R: Real> Mixture<R> {
    pub fn describe(&self, model: &OntologicalModel<R>) -> String {
        let name = |i: usize| model.generators()[i].name.as_str();
        if self.first == self.second {
            return name(self.first).to_string();
        }
        let rest = R::one() - self.weight.clone();
        format!(
            "{}*({}) + {}*({})",
            self.weight,
            name(self.first),
            rest,
            name(self.second)
        )
    }
}

/// Generators first, then for each pair `i < j` the mixtures with weights
/// `step, 2·step, … < 1`.
pub fn mixture_grid<R: Real>(model: &OntologicalModel<R>, step: &R) -> Result<Vec<Mixture<R>>> {
    crate::qstate::check_unit_interval(step)?;
    let gens = model.generators();
    let mut out: Vec<Mixture<R>> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| Mixture {
            first: i,
            second: i,
            weight: R::one(),
            measure: g.measure.clone(),
        })
        .collect();
    if step.is_zero() {
        return Ok(out);
    }
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let mut s = step.clone();
            while s < R::one() {
                out.push(Mixture {
                    first: i,
                    second: j,
                    weight: s.clone(),
                    measure: mix(&s, &gens[i].measure, &gens[j].measure)?,
                });
                s = s + step.clone();
            }
        }
    }
    Ok(out)
}

/// Two preparations with the same density matrix.
#[derive(Clone, Debug)]
pub struct DoublePreimage<R> {
    pub first: Mixture<R>,
    pub second: Mixture<R>,
    pub state: DensityMatrix<R>,
    pub dmap_deviation: R,
    pub total_variation: R,
}

/// The first pair on the mixture grid (in grid order) whose density
/// matrices agree within the backend tolerance while their total variation
/// exceeds `threshold`.
pub fn find_double_preimage<R: Real>(
    model: &OntologicalModel<R>,
    step: &R,
    threshold: &R,
) -> Result<Option<DoublePreimage<R>>> {
    let grid = mixture_grid(model, step)?;
    let states: Vec<&DensityMatrix<R>> = grid
        .iter()
        .map(|m| model.dmap(&m.measure))
        .collect::<Result<_>>()?;
    let tol = R::tolerance();
    for p in 0..grid.len() {
        for q in p + 1..grid.len() {
            let dev = states[p].operator().max_deviation(states[q].operator())?;
            if dev > tol {
                continue;
            }
            let tv = total_variation(&grid[p].measure, &grid[q].measure)?;
            if tv > *threshold {
                return Ok(Some(DoublePreimage {
                    first: grid[p].clone(),
                    second: grid[q].clone(),
                    state: states[p].clone(),
                    dmap_deviation: dev,
                    total_variation: tv,
                }));
            }
        }
    }
    Ok(None)
}

/// `[[a, b], [c, d]]` with exact entries where the backend has them, and
/// `I/2`-style names for multiples of the identity.
pub fn format_operator<R: Real>(op: &Operator<R>) -> String {
    let n = op.dim();
    let scaled_identity = Operator::<R>::identity(n).scale(&R::from_ratio(1, n as i64));
    if op.max_deviation(&scaled_identity).is_ok_and(|d| d <= R::tolerance()) {
        return if n == 1 { "I".to_string() } else { format!("I/{n}") };
    }
    let entry = |c: &Complex<R>| {
        if c.im.is_zero() {
            c.re.to_string()
        } else if c.re.is_zero() {
            format!("({})*i", c.im)
        } else {
            format!("{} + ({})*i", c.re, c.im)
        }
    };
    let rows: Vec<String> = (0..n)
        .map(|i| {
            let cells: Vec<String> = (0..n).map(|j| entry(op.entry(i, j))).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StageStatus {
    Passed,
    Broken,
    Assumed,
    Certified,
    NotReached,
}

impl fmt::Display for StageStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Passed => "PASS",
            Self::Broken => "BREAK",
            Self::Assumed => "ASSUMED",
            Self::Certified => "CERTIFIED",
            Self::NotReached => "NOT REACHED",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Stage {
    pub index: usize,
    pub name: &'static str,
    pub identity: &'static str,
    pub status: StageStatus,
    pub checks: Vec<IdentityRecord>,
    pub notes: Vec<String>,
}

const STAGES: [(&str, &str); 7] = [
    ("hypotheses", "every effect is an experiment; generators are adequate"),
    ("dmap convexity", "D(s a + (1-s) b) = s D(a) + (1-s) D(b)"),
    ("injectivity scan", "D(a) = D(b) implies a = b"),
    ("basis preparations", "rho1 = prep(g) + prep(g_perp) for every basis"),
    ("support identities", "prep(g)(B) = rho1(B & support(g))"),
    ("overlap identities", "rho1(support(g) & support(h)) = tr(P_g P_h)"),
    ("moment system", "joint law of the support indicators"),
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineReport {
    pub model: String,
    pub stages: Vec<Stage>,
    /// First stage whose status is `Broken`.
    pub broke_at: Option<usize>,
    /// The contradiction identity when stage 6 is reached.
    pub certificate: Option<String>,
}

impl PipelineReport {
    fn new(model: impl Into<String>) -> Self {
        Self {
            model: model.into(),
            stages: Vec::new(),
            broke_at: None,
            certificate: None,
        }
    }

    fn push(&mut self, status: StageStatus, checks: Vec<IdentityRecord>, notes: Vec<String>) -> bool {
        let index = self.stages.len();
        let (name, identity) = STAGES[index];
        self.stages.push(Stage {
            index,
            name,
            identity,
            status,
            checks,
            notes,
        });
        if status == StageStatus::Broken && self.broke_at.is_none() {
            self.broke_at = Some(index);
        }
        status != StageStatus::Broken
    }

    fn finish(mut self) -> Self {
        while self.stages.len() < STAGES.len() {
            self.push(StageStatus::NotReached, Vec::new(), Vec::new());
        }
        self
    }

    /// Whether the run reached the contradiction.
    pub fn reached_certificate(&self) -> bool {
        self.stages
            .last()
            .is_some_and(|s| s.status == StageStatus::Certified)
    }
}

#[derive(Clone, Debug)]
pub struct PipelineOptions<R> {
    /// Tolerance for adequacy and measure identities.
    pub tol: R,
    /// Mixing-weight grid step for the convexity and injectivity stages.
    pub step: R,
    /// Random node subsets (and, on sphere meshes, hemispheres) per basis.
    pub random_sets: usize,
    pub seed: u64,
}

impl<R: Real> Default for PipelineOptions<R> {
    fn default() -> Self {
        Self {
            tol: if R::EXACT { R::zero() } else { R::from_ratio(1, 1_000_000) },
            step: R::from_ratio(1, 4),
            random_sets: 5,
            seed: 0,
        }
    }
}

fn stage6_certificate(triple: &TripleReport) -> (StageStatus, Vec<IdentityRecord>, Vec<String>) {
    let status = if triple.pass() {
        StageStatus::Certified
    } else {
        StageStatus::Broken
    };
    let mut notes = triple.marginal_equations.clone();
    notes.push(format!("{} : INFEASIBLE", triple.identity));
    (status, Vec::new(), notes)
}

/// The argument with no model: stages 0–5 are the hypotheses and their
/// consequences, stage 6 is computed.
pub fn abstract_pipeline() -> Result<PipelineReport> {
    let mut report = PipelineReport::new("abstract qubit");
    let assumed = [
        "every qubit effect is the outcome of some experiment; every density matrix is prepared",
        "adequacy on mixtures forces D to be convex-linear",
        "hypothesis under test: D is injective",
        "rho1 := D^-1(I) equals prep(g) + prep(g_perp) for every basis {g, g_perp}",
        "adequacy on the test of g gives prep(g)(B) = rho1(B & support(g))",
        "hence rho1(support(g) & support(h)) = tr(P_g P_h)",
    ];
    for note in assumed {
        report.push(StageStatus::Assumed, Vec::new(), vec![note.to_string()]);
    }
    let triple = triple_test()?;
    let (status, checks, notes) = stage6_certificate(&triple);
    report.push(status, checks, notes);
    if status == StageStatus::Certified {
        report.certificate = Some(triple.identity.clone());
    }
    Ok(report.finish())
}

fn records<R: Real>(checks: &[IdentityCheck<R>]) -> Vec<IdentityRecord> {
    checks.iter().map(IdentityCheck::to_record).collect()
}

/// Runs the stages on `model` and stops at the first break.
pub fn proof_pipeline_audit<R: Real>(
    model: &OntologicalModel<R>,
    options: &PipelineOptions<R>,
) -> Result<PipelineReport> {
    let mut report = PipelineReport::new(model.name());
    let tol = &options.tol;
    let dim = model
        .generators()
        .first()
        .and_then(|g| g.measure.state())
        .map_or(2, DensityMatrix::dim);
    let battery: Vec<Experiment<R>> = if dim == 2 {
        PauliAxis::ALL.iter().map(|a| Experiment::pauli(*a)).collect()
    } else {
        vec![Experiment::trivial(dim)]
    };

    // Stage 0: hypotheses.
    {
        let coverage = model.coverage();
        let mut notes = vec![format!("response coverage: {coverage}")];
        let mut checks = Vec::new();
        let mut ok = coverage.covers_all_effects();
        if !ok {
            notes.push(match &coverage {
                crate::ontology::Coverage::Listed(names) => {
                    format!("E surjective: FAIL ({} tests only)", names.len())
                }
                other => format!("E surjective: FAIL ({other})"),
            });
        } else {
            notes.push("E surjective: PASS".to_string());
        }
        for g in model.generators() {
            for x in &battery {
                let r = model.adequacy_check(&g.measure, x, tol)?;
                ok &= r.pass;
                checks.push(
                    IdentityCheck::new(
                        format!("adequacy {} on {}", g.name, x.name()),
                        r.max_deviation,
                        R::zero(),
                        tol,
                    )
                    .to_record(),
                );
            }
        }
        notes.push("D surjectivity is not checked on a finite generator list".to_string());
        let status = if ok { StageStatus::Passed } else { StageStatus::Broken };
        if !report.push(status, checks, notes) {
            return Ok(report.finish());
        }
    }

    // Stage 1: dmap convexity on generator pairs.
    {
        let gens = model.generators();
        let mut checks = Vec::new();
        let mut ok = true;
        let x = &battery[battery.len() - 1];
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                let mut s = options.step.clone();
                while s < R::one() && !s.is_zero() {
                    let r = model.dmap_convexity_audit(&gens[i].measure, &gens[j].measure, &s, x)?;
                    ok &= r.pass;
                    let dev = if r.dmap_deviation > r.chain_deviation {
                        r.dmap_deviation
                    } else {
                        r.chain_deviation
                    };
                    checks.push(
                        IdentityCheck::new(
                            format!("convexity {s}*{} + (1-{s})*{}", gens[i].name, gens[j].name),
                            dev,
                            R::zero(),
                            &R::tolerance(),
                        )
                        .to_record(),
                    );
                    s = s + options.step.clone();
                }
            }
        }
        let status = if ok { StageStatus::Passed } else { StageStatus::Broken };
        if !report.push(status, checks, Vec::new()) {
            return Ok(report.finish());
        }
    }

    // Stage 2: injectivity scan.
    {
        let found = find_double_preimage(model, &options.step, &R::tolerance())?;
        let (status, notes) = match found {
            Some(w) => (
                StageStatus::Broken,
                vec![
                    format!("double preimage of {}:", format_operator(w.state.operator())),
                    format!("  a = {}", w.first.describe(model)),
                    format!("  b = {}", w.second.describe(model)),
                    format!(
                        "  dmap deviation {}, total variation {}",
                        w.dmap_deviation, w.total_variation
                    ),
                ],
            ),
            None => (
                StageStatus::Passed,
                vec!["no two grid mixtures share a density matrix".to_string()],
            ),
        };
        if !report.push(status, Vec::new(), notes) {
            return Ok(report.finish());
        }
    }

    if dim != 2 {
        report.push(
            StageStatus::Broken,
            Vec::new(),
            vec![format!("basis stages need a qubit model, got dimension {dim}")],
        );
        return Ok(report.finish());
    }

    // Stage 3: ρ₁ from each trine basis.
    let rays: Vec<(String, Ray<R>)> = trine_rays()
        .into_iter()
        .map(|(n, r)| Ok((n, r.map(R::from_qsqrt3)?)))
        .collect::<Result<_>>()?;
    let mut bases = Vec::new();
    {
        let mut notes = Vec::new();
        for (name, g) in &rays {
            let perp = g.perp()?;
            match (model.prepare_ray(g)?, model.prepare_ray(&perp)?) {
                (Some(a), Some(b)) => bases.push((a.clone(), b.clone(), a.sum(&b)?)),
                _ => notes.push(format!("no preparation maps to P_{name} or its complement")),
            }
        }
        if !notes.is_empty() {
            report.push(StageStatus::Broken, Vec::new(), notes);
            return Ok(report.finish());
        }
        let mut checks = Vec::new();
        let mut ok = true;
        for i in 0..bases.len() {
            for j in i + 1..bases.len() {
                let c = IdentityCheck::new(
                    format!("rho1[{}] = rho1[{}] (total variation)", rays[i].0, rays[j].0),
                    total_variation(&bases[i].2, &bases[j].2)?,
                    R::zero(),
                    tol,
                );
                ok &= c.pass;
                checks.push(c.to_record());
            }
        }
        let notes = if ok {
            Vec::new()
        } else {
            vec!["rho1 depends on the basis: the injectivity defect is nonzero".to_string()]
        };
        let status = if ok { StageStatus::Passed } else { StageStatus::Broken };
        if !report.push(status, checks, notes) {
            return Ok(report.finish());
        }
    }
    let rho_one = bases[0].2.clone();

    // Stage 4: support identities per basis.
    {
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
        let sets = test_sets(model.space(), options.random_sets, options.random_sets, &mut rng);
        let mut checks = Vec::new();
        let mut ok = true;
        for ((_, g), (rho_g, rho_perp, _)) in rays.iter().zip(&bases) {
            let r = verify_support_identities(model, g, rho_g, rho_perp, Some(&rho_one), &sets, tol)?;
            ok &= r.pass();
            checks.extend(records(&r.checks));
        }
        let status = if ok { StageStatus::Passed } else { StageStatus::Broken };
        if !report.push(status, checks, Vec::new()) {
            return Ok(report.finish());
        }
    }

    // Stage 5: overlap identities.
    {
        let mut checks = Vec::new();
        let mut ok = true;
        for i in 0..rays.len() {
            for j in i..rays.len() {
                let r = overlap_identity_check(model, &rho_one, &rays[i].1, &rays[j].1, tol)?;
                ok &= r.check.pass;
                checks.push(r.check.to_record());
            }
        }
        let status = if ok { StageStatus::Passed } else { StageStatus::Broken };
        if !report.push(status, checks, Vec::new()) {
            return Ok(report.finish());
        }
    }

    // Stage 6: the model's own atom masses against the moment rows.
    let triple = triple_test()?;
    let (status, _, mut notes) = stage6_certificate(&triple);
    let atom_masses = model_atom_masses(model, &rho_one, &rays, &triple.moments.system)?;
    let violation = triple
        .moments
        .system
        .system()
        .rows()
        .iter()
        .zip(triple.moments.system.system().rhs())
        .map(|(row, b)| {
            let lhs = row.iter().zip(&atom_masses).fold(R::zero(), |acc, (c, p)| {
                acc + R::from_rational(c) * p.clone()
            });
            (lhs - R::from_rational(b)).magnitude()
        })
        .fold(R::zero(), |acc, v| if v > acc { v } else { acc });
    notes.push(format!("largest moment-row violation by the model's atom masses: {violation}"));
    report.push(status, Vec::new(), notes);
    if status == StageStatus::Certified {
        report.certificate = Some(triple.identity);
    }
    Ok(report.finish())
}

/// `½·ρ₁(⋂ᵢ Λ_{gᵢ} or its complement)` for each atom.
fn model_atom_masses<R: Real>(
    model: &OntologicalModel<R>,
    rho_one: &EpistemicMeasure<R>,
    rays: &[(String, Ray<R>)],
    system: &MomentSystem,
) -> Result<Vec<R>> {
    let membership_tol = if R::EXACT { R::zero() } else { R::tolerance() };
    let supports: Vec<NodeSet> = rays
        .iter()
        .map(|(_, g)| Ok(super::support::support_set(model, g, &membership_tol)?.members))
        .collect::<Result<_>>()?;
    let half = R::from_ratio(1, 2);
    Ok((0..system.atom_count())
        .map(|atom| {
            let mut set = NodeSet::full(model.space().len());
            for (i, s) in supports.iter().enumerate() {
                set = set.intersect(&if system.bit(atom, i) { s.clone() } else { s.complement() });
            }
            rho_one.mass_on(&set) * half.clone()
        })
        .collect())
}
