use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use num_traits::{One, Zero};

use super::measure::{mix, EpistemicMeasure};
use super::space::OnticSpace;
use crate::error::{Error, Result};
use crate::field::{max_of, Real};
use crate::qstate::{born, ray_to_bloch, DensityMatrix, Operator, Povm, Ray};

/// A measurement procedure. Any valid POVM can be wrapped, which is how the
/// experiment-to-POVM association is made surjective.
#[derive(Clone, Debug, PartialEq)]
pub struct Experiment<R> {
    name: String,
    povm: Povm<R>,
}

/// The three Pauli observables of a qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    pub fn name(self) -> &'static str {
        match self {
            Self::X => "x",
            Self::Y => "y",
            Self::Z => "z",
        }
    }

    /// Eigenray for eigenvalue `+1` (`positive`) or `−1`, with entries in
    /// ℚ(i) so that exact backends represent it.
    pub fn eigenray<R: Real>(self, positive: bool) -> Ray<R> {
        let one = Complex::<R>::one();
        let zero = Complex::<R>::zero();
        let i = Complex::new(R::zero(), R::one());
        let sign = |c: Complex<R>| if positive { c } else { -c };
        let v = match self {
            Self::Z if positive => vec![one, zero],
            Self::Z => vec![zero, one],
            Self::X => vec![one.clone(), sign(one)],
            Self::Y => vec![one, sign(i)],
        };
        Ray::new(v).expect("nonzero")
    }
}

impl<R: Real> Experiment<R> {
    pub fn new(name: impl Into<String>, povm: Povm<R>) -> Self {
        Self {
            name: name.into(),
            povm,
        }
    }

    /// The two-outcome test of a ray: `P_h` with label 1, `I − P_h` with label 0.
    pub fn projective(ray: &Ray<R>) -> Self {
        let p = ray.projector();
        let complement = Operator::identity(ray.dim()).sub(&p).expect("same dimension");
        let povm = Povm::new(vec![0.0, 1.0], vec![complement, p]).expect("projective test");
        Self::new(format!("test[{}]", describe_ray(ray)), povm)
    }

    /// `{E: 1, I − E: 0}` for an effect operator.
    pub fn two_outcome(name: impl Into<String>, effect: Operator<R>) -> Result<Self> {
        let complement = Operator::identity(effect.dim()).sub(&effect)?;
        Ok(Self::new(name, Povm::new(vec![0.0, 1.0], vec![complement, effect])?))
    }

    /// The σ test with labels `+1` and `−1`.
    pub fn pauli(axis: PauliAxis) -> Self {
        let plus = axis.eigenray::<R>(true).projector();
        let minus = axis.eigenray::<R>(false).projector();
        let povm = Povm::new(vec![1.0, -1.0], vec![plus, minus]).expect("Pauli test");
        Self::new(format!("sigma_{}", axis.name()), povm)
    }

    /// The single-outcome POVM `{I}` with label 1.
    pub fn trivial(dim: usize) -> Self {
        let povm = Povm::new(vec![1.0], vec![Operator::identity(dim)]).expect("identity");
        Self::new("trivial", povm)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn povm(&self) -> &Povm<R> {
        &self.povm
    }

    pub fn dim(&self) -> usize {
        self.povm.dim()
    }

    pub fn labels(&self) -> &[f64] {
        self.povm.labels()
    }
}

/// Short human name of a ray: `+z`, `-x`, ... for Pauli eigenrays, the Bloch
/// vector for other qubit rays, the amplitudes otherwise.
pub fn describe_ray<R: Real>(ray: &Ray<R>) -> String {
    if ray.dim() == 2 {
        for axis in PauliAxis::ALL {
            for positive in [true, false] {
                let tol = R::tolerance();
                if ray.same_ray(&axis.eigenray(positive), &tol) {
                    return format!("{}{}", if positive { '+' } else { '-' }, axis.name());
                }
            }
        }
        if let Ok(b) = ray_to_bloch(ray) {
            let b = b.to_f64();
            return format!("bloch({:.6},{:.6},{:.6})", b.x, b.y, b.z);
        }
    }
    let parts: Vec<String> = ray
        .vector()
        .iter()
        .map(|c| format!("{:.6}{:+.6}i", c.re.to_f64(), c.im.to_f64()))
        .collect();
    format!("[{}]", parts.join(","))
}

/// Which experiments a response function answers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coverage {
    /// Every finite POVM.
    AllPovms,
    /// Every two-outcome POVM `{E, I − E}` (hence every effect), and POVMs
    /// whose effects commute.
    TwoOutcome,
    /// Only the named experiments.
    Listed(Vec<String>),
}

impl Coverage {
    /// Whether every effect can occur in some answered experiment.
    pub fn covers_all_effects(&self) -> bool {
        matches!(self, Self::AllPovms | Self::TwoOutcome)
    }
}

impl fmt::Display for Coverage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::AllPovms => f.write_str("all finite POVMs"),
            Self::TwoOutcome => f.write_str("all two-outcome and commuting POVMs"),
            Self::Listed(names) => write!(f, "{} tests only ({})", names.len(), names.join(", ")),
        }
    }
}

/// Outcome probabilities per node: `rows[node][outcome]`, outcomes in the
/// experiment's label order.
#[derive(Clone, Debug, PartialEq)]
pub struct ResponseTable<R> {
    pub rows: Vec<Vec<R>>,
}

impl<R: Real> ResponseTable<R> {
    pub fn check(&self, outcomes: usize, tol: &R) -> Result<()> {
        for (node, row) in self.rows.iter().enumerate() {
            if row.len() != outcomes {
                return Err(Error::InvalidResponse {
                    node,
                    detail: format!("{} probabilities for {outcomes} outcomes", row.len()),
                });
            }
            if let Some(p) = row.iter().find(|p| **p < -tol.clone()) {
                return Err(Error::InvalidResponse {
                    node,
                    detail: format!("negative probability {p}"),
                });
            }
            let sum = row.iter().fold(R::zero(), |acc, p| acc + p.clone());
            if (sum.clone() - R::one()).magnitude() > *tol {
                return Err(Error::InvalidResponse {
                    node,
                    detail: format!("probabilities sum to {sum}"),
                });
            }
        }
        Ok(())
    }
}

/// `(λ, experiment) ↦ outcome distribution`.
pub trait ResponseFunction<R: Real>: Send + Sync {
    fn describe(&self) -> String;

    fn coverage(&self) -> Coverage;

    /// Whether every answered projective test gets 0/1 responses.
    fn deterministic(&self) -> bool {
        false
    }

    fn responses(&self, space: &OnticSpace<R>, experiment: &Experiment<R>)
        -> Result<ResponseTable<R>>;
}

/// Builds the preparation a model associates with a pure state.
pub trait RayPreparer<R: Real>: Send + Sync {
    fn prepare(&self, space: &Arc<OnticSpace<R>>, ray: &Ray<R>) -> Result<Option<EpistemicMeasure<R>>>;
}

/// A named generator of the preparable set.
#[derive(Clone, Debug)]
pub struct Generator<R> {
    pub name: String,
    pub measure: EpistemicMeasure<R>,
}

/// Ontic space, response function, and a finite list of generator
/// preparations whose convex hull is the preparable set. The density-matrix
/// map is read from the generators and extended to mixtures linearly.
#[derive(Clone)]
pub struct OntologicalModel<R> {
    name: String,
    space: Arc<OnticSpace<R>>,
    response: Arc<dyn ResponseFunction<R>>,
    generators: Vec<Generator<R>>,
    preparer: Option<Arc<dyn RayPreparer<R>>>,
}

impl<R: Real> fmt::Debug for OntologicalModel<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OntologicalModel")
            .field("name", &self.name)
            .field("nodes", &self.space.len())
            .field("response", &self.response.describe())
            .field(
                "generators",
                &self.generators.iter().map(|g| &g.name).collect::<Vec<_>>(),
            )
            .finish()
    }
}

/// Predicted outcome probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeDistribution<R> {
    pub labels: Vec<f64>,
    pub probabilities: Vec<R>,
}

impl<R: Real> OutcomeDistribution<R> {
    pub fn probability(&self, label: f64) -> Option<&R> {
        self.labels
            .iter()
            .position(|l| *l == label)
            .map(|i| &self.probabilities[i])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeComparison<R> {
    pub label: f64,
    pub model: R,
    pub born: R,
}

/// Model prediction against the Born rule for one experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct AdequacyReport<R> {
    pub experiment: String,
    pub outcomes: Vec<OutcomeComparison<R>>,
    pub max_deviation: R,
    pub tolerance: R,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainLink<R> {
    pub label: f64,
    /// `∫ ρ_mix ℙ`
    pub predicted_mix: R,
    /// `tr(D(ρ_mix) E)`
    pub born_mix: R,
    /// `s ∫ ρa ℙ + (1 − s) ∫ ρb ℙ`
    pub predicted_combination: R,
    /// `tr((s D(ρa) + (1 − s) D(ρb)) E)`
    pub born_combination: R,
}

/// Convex-linearity audit of the density-matrix map for one mixture.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexityReport<R> {
    pub weight: R,
    pub experiment: String,
    pub dmap_deviation: R,
    pub chain: Vec<ChainLink<R>>,
    pub chain_deviation: R,
    pub tolerance: R,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Distinguishability<R> {
    Indistinguishable { dmap_deviation: R },
    DistinguishedBy { experiment: Experiment<R>, gap: R, dmap_deviation: R },
}

impl<R: Real> Distinguishability<R> {
    pub fn is_indistinguishable(&self) -> bool {
        matches!(self, Self::Indistinguishable { .. })
    }
}

impl<R: Real> OntologicalModel<R> {
    /// Generators must be probability measures on `space` with an associated
    /// density matrix.
    pub fn new(
        name: impl Into<String>,
        space: Arc<OnticSpace<R>>,
        response: Arc<dyn ResponseFunction<R>>,
        generators: Vec<Generator<R>>,
    ) -> Result<Self> {
        let tol = R::tolerance();
        for g in &generators {
            if !(Arc::ptr_eq(g.measure.space(), &space) || **g.measure.space() == *space) {
                return Err(Error::SpaceMismatch);
            }
            if !g.measure.is_probability(&tol) {
                return Err(Error::Definition {
                    line: None,
                    message: format!(
                        "generator {} has total mass {}, expected 1",
                        g.name,
                        g.measure.total_mass()
                    ),
                });
            }
            if g.measure.state().is_none() {
                return Err(Error::DmapUndefined(format!("generator {}", g.name)));
            }
        }
        Ok(Self {
            name: name.into(),
            space,
            response,
            generators,
            preparer: None,
        })
    }

    pub fn with_preparer(mut self, preparer: Arc<dyn RayPreparer<R>>) -> Self {
        self.preparer = Some(preparer);
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> &Arc<OnticSpace<R>> {
        &self.space
    }

    pub fn response(&self) -> &Arc<dyn ResponseFunction<R>> {
        &self.response
    }

    pub fn generators(&self) -> &[Generator<R>] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Option<&EpistemicMeasure<R>> {
        self.generators
            .iter()
            .find(|g| g.name == name)
            .map(|g| &g.measure)
    }

    pub fn coverage(&self) -> Coverage {
        self.response.coverage()
    }

    fn check_measure(&self, rho: &EpistemicMeasure<R>) -> Result<()> {
        if Arc::ptr_eq(rho.space(), &self.space) || **rho.space() == *self.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    pub fn responses(&self, experiment: &Experiment<R>) -> Result<ResponseTable<R>> {
        let table = self.response.responses(&self.space, experiment)?;
        if table.rows.len() != self.space.len() {
            return Err(Error::LengthMismatch {
                expected: self.space.len(),
                got: table.rows.len(),
            });
        }
        table.check(experiment.labels().len(), &R::tolerance())?;
        Ok(table)
    }

    /// `∫ ρ(dλ) ℙ_{λ,x}` per outcome. Sums run in node order.
    pub fn predict(
        &self,
        rho: &EpistemicMeasure<R>,
        experiment: &Experiment<R>,
    ) -> Result<OutcomeDistribution<R>> {
        self.check_measure(rho)?;
        let table = self.responses(experiment)?;
        Ok(predict_with_table(rho, experiment, &table))
    }

    /// The density matrix associated with a preparation.
    pub fn dmap<'a>(&self, rho: &'a EpistemicMeasure<R>) -> Result<&'a DensityMatrix<R>> {
        self.check_measure(rho)?;
        rho.state()
            .ok_or_else(|| Error::DmapUndefined("this measure".to_string()))
    }

    /// Compares the prediction for `rho` with the Born rule for `dmap(rho)`.
    pub fn adequacy_check(
        &self,
        rho: &EpistemicMeasure<R>,
        experiment: &Experiment<R>,
        tol: &R,
    ) -> Result<AdequacyReport<R>> {
        let state = self.dmap(rho)?;
        let predicted = self.predict(rho, experiment)?;
        adequacy_from_prediction(state, experiment, predicted, tol)
    }

    /// Checks `D(mix) = s·D(ρa) + (1 − s)·D(ρb)` and the trace chain
    /// `∫ρ_mix ℙ = tr(D(mix) E) = s∫ρa ℙ + (1−s)∫ρb ℙ = tr((sDa + (1−s)Db) E)`
    /// outcome by outcome.
    pub fn dmap_convexity_audit(
        &self,
        a: &EpistemicMeasure<R>,
        b: &EpistemicMeasure<R>,
        s: &R,
        experiment: &Experiment<R>,
    ) -> Result<ConvexityReport<R>> {
        let tol = R::tolerance();
        let mixed = mix(s, a, b)?;
        let d_mix = self.dmap(&mixed)?;
        let (da, db) = (self.dmap(a)?, self.dmap(b)?);
        let combined = DensityMatrix::mix(s, da, db)?;
        let dmap_deviation = d_mix.operator().max_deviation(combined.operator())?;

        let table = self.responses(experiment)?;
        let p_mix = predict_with_table(&mixed, experiment, &table);
        let p_a = predict_with_table(a, experiment, &table);
        let p_b = predict_with_table(b, experiment, &table);
        let t = R::one() - s.clone();
        let mut chain = Vec::with_capacity(experiment.labels().len());
        for (k, effect) in experiment.povm().effects().iter().enumerate() {
            chain.push(ChainLink {
                label: experiment.labels()[k],
                predicted_mix: p_mix.probabilities[k].clone(),
                born_mix: born(d_mix, effect)?,
                predicted_combination: s.clone() * p_a.probabilities[k].clone()
                    + t.clone() * p_b.probabilities[k].clone(),
                born_combination: born(&combined, effect)?,
            });
        }
        let chain_deviation = max_of(chain.iter().flat_map(|l| {
            let v = [
                l.predicted_mix.clone(),
                l.born_mix.clone(),
                l.predicted_combination.clone(),
                l.born_combination.clone(),
            ];
            let first = v[0].clone();
            v.into_iter().map(move |x| (x - first.clone()).magnitude())
        }));
        let pass = dmap_deviation <= tol && chain_deviation <= tol;
        Ok(ConvexityReport {
            weight: s.clone(),
            experiment: experiment.name().to_string(),
            dmap_deviation,
            chain,
            chain_deviation,
            tolerance: tol,
            pass,
        })
    }

    /// Two preparations are indistinguishable iff their density matrices
    /// agree; otherwise a two-outcome test separating them is returned.
    pub fn empirical_distinguishability(
        &self,
        a: &EpistemicMeasure<R>,
        b: &EpistemicMeasure<R>,
    ) -> Result<Distinguishability<R>> {
        let (da, db) = (self.dmap(a)?, self.dmap(b)?);
        let dmap_deviation = da.operator().max_deviation(db.operator())?;
        if dmap_deviation <= R::tolerance() {
            return Ok(Distinguishability::Indistinguishable { dmap_deviation });
        }
        let delta = da.operator().sub(db.operator())?;
        let ray = R::distinguishing_ray(&delta).ok_or(Error::DmapUndefined(
            "a separating test (states differ below resolution)".to_string(),
        ))?;
        let experiment = Experiment::projective(&ray);
        let effect = &experiment.povm().effects()[1];
        let gap = (born(da, effect)? - born(db, effect)?).magnitude();
        Ok(Distinguishability::DistinguishedBy {
            experiment,
            gap,
            dmap_deviation,
        })
    }

    /// The model's preparation for a pure state: the model's own rule when it
    /// has one, otherwise a generator whose density matrix is `P_ray`.
    pub fn prepare_ray(&self, ray: &Ray<R>) -> Result<Option<EpistemicMeasure<R>>> {
        if let Some(p) = &self.preparer {
            return p.prepare(&self.space, ray);
        }
        let target = ray.projector();
        let tol = R::tolerance();
        for g in &self.generators {
            if let Some(state) = g.measure.state() {
                if state.operator().max_deviation(&target)? <= tol {
                    return Ok(Some(g.measure.clone()));
                }
            }
        }
        Ok(None)
    }
}

pub(crate) fn predict_with_table<R: Real>(
    rho: &EpistemicMeasure<R>,
    experiment: &Experiment<R>,
    table: &ResponseTable<R>,
) -> OutcomeDistribution<R> {
    let outcomes = experiment.labels().len();
    let mut probabilities = vec![R::zero(); outcomes];
    for (node, row) in table.rows.iter().enumerate() {
        let mass = rho.node_mass(node);
        if mass.is_zero() {
            continue;
        }
        for (acc, p) in probabilities.iter_mut().zip(row) {
            *acc = acc.clone() + mass.clone() * p.clone();
        }
    }
    OutcomeDistribution {
        labels: experiment.labels().to_vec(),
        probabilities,
    }
}

fn adequacy_from_prediction<R: Real>(
    state: &DensityMatrix<R>,
    experiment: &Experiment<R>,
    predicted: OutcomeDistribution<R>,
    tol: &R,
) -> Result<AdequacyReport<R>> {
    let mut outcomes = Vec::with_capacity(predicted.labels.len());
    for (k, effect) in experiment.povm().effects().iter().enumerate() {
        outcomes.push(OutcomeComparison {
            label: predicted.labels[k],
            model: predicted.probabilities[k].clone(),
            born: born(state, effect)?,
        });
    }
    let max_deviation = max_of(
        outcomes
            .iter()
            .map(|o| (o.model.clone() - o.born.clone()).magnitude()),
    );
    let pass = max_deviation <= *tol;
    Ok(AdequacyReport {
        experiment: experiment.name().to_string(),
        outcomes,
        max_deviation,
        tolerance: tol.clone(),
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::QSqrt3;

    #[test]
    fn pauli_eigenrays_are_orthonormal_pairs() {
        for axis in PauliAxis::ALL {
            let plus = axis.eigenray::<QSqrt3>(true);
            let minus = axis.eigenray::<QSqrt3>(false);
            assert_eq!(plus.overlap(&minus).unwrap(), QSqrt3::ratio(0, 1));
            assert_eq!(describe_ray(&plus), format!("+{}", axis.name()));
        }
    }

    #[test]
    fn response_table_check() {
        let t = ResponseTable {
            rows: vec![vec![0.5, 0.5], vec![0.7, 0.2]],
        };
        assert!(matches!(
            t.check(2, &1e-9),
            Err(Error::InvalidResponse { node: 1, .. })
        ));
        let t = ResponseTable {
            rows: vec![vec![1.5, -0.5]],
        };
        assert!(t.check(2, &1e-9).is_err());
    }
}
