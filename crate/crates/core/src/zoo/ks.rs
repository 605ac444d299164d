//! The Kochen–Specker qubit model on a quadrature mesh of the Bloch sphere.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ontology::{
    mix, sphere_mesh, total_variation, Coverage, EpistemicMeasure, Experiment, Generator,
    OnticSpace, OntologicalModel, PauliAxis, QuadratureOrder, RayPreparer, ResponseFunction,
    ResponseTable,
};
use crate::qstate::{ray_to_bloch, DensityMatrix, Operator, Ray};

/// Effects with `|a| ≤ SCALAR_GAP` in `e = a0·I + a·σ` respond with `a0`
/// everywhere.
const SCALAR_GAP: f64 = 1e-12;
/// Spectral weights within this distance of 0 or 1 are snapped, so projective
/// tests get exact 0/1 responses.
const SNAP: f64 = 1e-12;
/// Two Bloch directions commute when their cross product is below this.
const PARALLEL_GAP: f64 = 1e-9;

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn snap(x: f64) -> f64 {
    if x.abs() <= SNAP {
        0.0
    } else if (x - 1.0).abs() <= SNAP {
        1.0
    } else {
        x
    }
}

/// `e = a0·I + a·σ`.
fn pauli_decomposition(e: &Operator<f64>) -> (f64, [f64; 3]) {
    let e00 = e.entry(0, 0).re;
    let e11 = e.entry(1, 1).re;
    let e01 = e.entry(0, 1);
    ((e00 + e11) / 2.0, [e01.re, -e01.im, (e00 - e11) / 2.0])
}

/// Deterministic hemisphere responses.
///
/// For commuting effects `e_k = α_k·P_m + β_k·P_{m⊥}` the response is
/// `α_k` on the open hemisphere `{m·λ > 0}` and `β_k` elsewhere. The axis `m`
/// is taken from the non-scalar effect with the greatest label, so for a test
/// `{I − P_h: 0, P_h: 1}` it is `b_h` and boundary nodes answer 0.
#[derive(Clone, Copy, Debug, Default)]
pub struct KsResponse;

impl ResponseFunction<f64> for KsResponse {
    fn describe(&self) -> String {
        "Kochen-Specker hemisphere rule".to_string()
    }

    fn coverage(&self) -> Coverage {
        Coverage::TwoOutcome
    }

    fn deterministic(&self) -> bool {
        true
    }

    fn responses(
        &self,
        space: &OnticSpace<f64>,
        experiment: &Experiment<f64>,
    ) -> Result<ResponseTable<f64>> {
        let unsupported = |why: &str| Error::UnsupportedExperiment {
            model: "ks".to_string(),
            experiment: format!("{} ({why})", experiment.name()),
        };
        if experiment.dim() != 2 {
            return Err(Error::QubitOnly(experiment.dim()));
        }
        let points = space
            .points()
            .ok_or_else(|| unsupported("space has no sphere coordinates"))?;
        let parts: Vec<(f64, [f64; 3])> = experiment
            .povm()
            .effects()
            .iter()
            .map(|e| pauli_decomposition(e.operator()))
            .collect();
        let norm = |a: &[f64; 3]| dot(a, a).sqrt();

        let axis = parts
            .iter()
            .zip(experiment.labels())
            .filter(|((_, a), _)| norm(a) > SCALAR_GAP)
            .max_by(|(_, l1), (_, l2)| l1.total_cmp(l2))
            .map(|((_, a), _)| {
                let n = norm(a);
                [a[0] / n, a[1] / n, a[2] / n]
            });
        let Some(m) = axis else {
            let row: Vec<f64> = parts.iter().map(|(a0, _)| snap(*a0)).collect();
            return Ok(ResponseTable {
                rows: vec![row; space.len()],
            });
        };

        let mut upper = Vec::with_capacity(parts.len());
        let mut lower = Vec::with_capacity(parts.len());
        for (a0, a) in &parts {
            let along = dot(a, &m);
            let cross = [
                a[1] * m[2] - a[2] * m[1],
                a[2] * m[0] - a[0] * m[2],
                a[0] * m[1] - a[1] * m[0],
            ];
            if norm(&cross) > PARALLEL_GAP {
                return Err(unsupported("effects do not commute"));
            }
            upper.push(snap(a0 + along));
            lower.push(snap(a0 - along));
        }
        let rows = points
            .iter()
            .map(|p| {
                if dot(&m, p) > 0.0 {
                    upper.clone()
                } else {
                    lower.clone()
                }
            })
            .collect();
        Ok(ResponseTable { rows })
    }
}

/// Unit Bloch vector of a qubit ray.
fn bloch_direction(g: &Ray<f64>) -> Result<[f64; 3]> {
    Ok(ray_to_bloch(g)?.as_array())
}

/// The preparation for ray `g`: density `(1/π)·max(0, b_g·λ)`, rescaled to
/// unit quadrature mass, with density matrix `P_g`.
pub fn ks_prepare(space: &Arc<OnticSpace<f64>>, g: &Ray<f64>) -> Result<EpistemicMeasure<f64>> {
    if g.dim() != 2 {
        return Err(Error::QubitOnly(g.dim()));
    }
    let points = space.points().ok_or(Error::SpaceMismatch)?;
    let n = bloch_direction(g)?;
    let raw: Vec<f64> = points.iter().map(|p| dot(&n, p).max(0.0) / PI).collect();
    let mass: f64 = raw.iter().zip(space.weights()).map(|(d, w)| d * w).sum();
    let density = raw.into_iter().map(|d| d / mass).collect();
    Ok(EpistemicMeasure::new(space.clone(), density)?.with_state(DensityMatrix::pure(g)))
}

/// Prepares any qubit ray with [`ks_prepare`].
#[derive(Clone, Copy, Debug, Default)]
pub struct KsPreparer;

impl RayPreparer<f64> for KsPreparer {
    fn prepare(
        &self,
        space: &Arc<OnticSpace<f64>>,
        ray: &Ray<f64>,
    ) -> Result<Option<EpistemicMeasure<f64>>> {
        ks_prepare(space, ray).map(Some)
    }
}

/// The six Pauli eigenrays in the order `+z, −z, +x, −x, +y, −y`.
pub fn pauli_rays<R: crate::Real>() -> Vec<(String, Ray<R>)> {
    [PauliAxis::Z, PauliAxis::X, PauliAxis::Y]
        .into_iter()
        .flat_map(|axis| {
            [true, false].map(|positive| {
                let sign = if positive { '+' } else { '-' };
                (format!("{sign}{}", axis.name()), axis.eigenray(positive))
            })
        })
        .collect()
}

/// The KS model with the given generator rays. The mesh avoids the great
/// circles of the Pauli tests and of the generator rays.
pub fn ks_model_with(
    order: QuadratureOrder,
    rays: &[(String, Ray<f64>)],
) -> Result<OntologicalModel<f64>> {
    let mut guarded = vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    for (_, g) in rays {
        guarded.push(bloch_direction(g)?);
    }
    let space = Arc::new(sphere_mesh(order, &guarded)?);
    let generators = rays
        .iter()
        .map(|(name, g)| {
            Ok(Generator {
                name: name.clone(),
                measure: ks_prepare(&space, g)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(
        OntologicalModel::new("ks", space, Arc::new(KsResponse), generators)?
            .with_preparer(Arc::new(KsPreparer)),
    )
}

/// The KS model with the six Pauli eigenstates as generators.
pub fn ks_model(order: QuadratureOrder) -> Result<OntologicalModel<f64>> {
    ks_model_with(order, &pauli_rays())
}

/// Evidence that the KS density-matrix map is many-to-one.
#[derive(Clone, Debug)]
pub struct KsWitness {
    /// `½ρ(+z) + ½ρ(−z)`
    pub rho_a: EpistemicMeasure<f64>,
    /// `½ρ(+x) + ½ρ(−x)`
    pub rho_b: EpistemicMeasure<f64>,
    pub total_variation: f64,
    /// Largest entrywise distance of either density matrix from `I/2`.
    pub dmap_deviation: f64,
    /// Largest `|predict(ρa) − predict(ρb)|` over the tests.
    pub prediction_gap: f64,
    /// Largest adequacy deviation of either measure over the tests.
    pub adequacy_deviation: f64,
    pub tests: usize,
}

/// Builds the ±z and ±x equal mixtures in `model` and compares them over
/// `tests`.
pub fn ks_noninjectivity_witness(
    model: &OntologicalModel<f64>,
    tests: &[Experiment<f64>],
) -> Result<KsWitness> {
    let prep = |axis: PauliAxis, positive: bool| -> Result<EpistemicMeasure<f64>> {
        model
            .prepare_ray(&axis.eigenray(positive))?
            .ok_or_else(|| Error::DmapUndefined(format!("no preparation for {}", axis.name())))
    };
    let rho_a = mix(&0.5, &prep(PauliAxis::Z, true)?, &prep(PauliAxis::Z, false)?)?;
    let rho_b = mix(&0.5, &prep(PauliAxis::X, true)?, &prep(PauliAxis::X, false)?)?;
    let half = DensityMatrix::<f64>::maximally_mixed(2);
    let dmap_deviation = model
        .dmap(&rho_a)?
        .operator()
        .max_deviation(half.operator())?
        .max(model.dmap(&rho_b)?.operator().max_deviation(half.operator())?);

    let mut prediction_gap: f64 = 0.0;
    let mut adequacy_deviation: f64 = 0.0;
    for x in tests {
        let pa = model.predict(&rho_a, x)?;
        let pb = model.predict(&rho_b, x)?;
        for (a, b) in pa.probabilities.iter().zip(&pb.probabilities) {
            prediction_gap = prediction_gap.max((a - b).abs());
        }
        for rho in [&rho_a, &rho_b] {
            let report = model.adequacy_check(rho, x, &1e-6)?;
            adequacy_deviation = adequacy_deviation.max(report.max_deviation);
        }
    }
    Ok(KsWitness {
        total_variation: total_variation(&rho_a, &rho_b)?,
        rho_a,
        rho_b,
        dmap_deviation,
        prediction_gap,
        adequacy_deviation,
        tests: tests.len(),
    })
}

/// A qubit ray from a unit Bloch direction, as used for random tests.
pub fn ray_from_direction(b: [f64; 3]) -> Result<Ray<f64>> {
    crate::qstate::bloch_to_ray(&crate::qstate::BlochVector::new(b[0], b[1], b[2]))
}

/// `(1 + b_g·b_h)/2` evaluated on Bloch vectors; the closed form of
/// `tr(P_g P_h)` for qubits.
pub fn bloch_overlap(g: &Ray<f64>, h: &Ray<f64>) -> Result<f64> {
    Ok((1.0 + dot(&bloch_direction(g)?, &bloch_direction(h)?)) / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::BlochVector;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn small() -> OntologicalModel<f64> {
        ks_model(QuadratureOrder { theta: 16, phi: 32 }).unwrap()
    }

    #[test]
    fn preparation_is_normalized_hemisphere() {
        let model = small();
        let g = PauliAxis::Z.eigenray::<f64>(true);
        let rho = ks_prepare(model.space(), &g).unwrap();
        assert!((rho.total_mass() - 1.0).abs() < 1e-14);
        let points = model.space().points().unwrap();
        for (i, p) in points.iter().enumerate() {
            assert_eq!(rho.node_mass(i) > 0.0, p[2] > 0.0);
        }
    }

    #[test]
    fn projective_responses_are_exactly_binary() {
        let model = small();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let h = ray_from_direction(BlochVector::random_unit(&mut rng).as_array()).unwrap();
            let table = model.responses(&Experiment::projective(&h)).unwrap();
            for row in &table.rows {
                assert!(row == &[0.0, 1.0] || row == &[1.0, 0.0], "{row:?}");
            }
        }
    }

    #[test]
    fn prepared_ray_answers_its_own_test() {
        let model = small();
        let g = ray_from_direction([0.6, 0.0, 0.8]).unwrap();
        let rho = ks_prepare(model.space(), &g).unwrap();
        let p = model.predict(&rho, &Experiment::projective(&g)).unwrap();
        assert!((p.probability(1.0).unwrap() - 1.0).abs() < 1e-14);
        let p = model
            .predict(&rho, &Experiment::projective(&g.perp().unwrap()))
            .unwrap();
        assert_eq!(p.probability(1.0), Some(&0.0));
    }

    #[test]
    fn boundary_goes_to_outcome_zero() {
        let z = [0.0, 0.0, 1.0];
        let space = Arc::new(sphere_mesh(QuadratureOrder { theta: 3, phi: 4 }, &[]).unwrap());
        let table = KsResponse
            .responses(&space, &Experiment::projective(&ray_from_direction(z).unwrap()))
            .unwrap();
        for (p, row) in space.points().unwrap().iter().zip(&table.rows) {
            if p[2] == 0.0 {
                assert_eq!(row, &[1.0, 0.0]);
            }
        }
    }

    #[test]
    fn noncommuting_povm_is_unsupported() {
        let model = small();
        let third = |r: Ray<f64>| r.projector().scale(&(2.0 / 3.0));
        let trine: Vec<Operator<f64>> = [0.0f64, 2.0, 4.0]
            .iter()
            .map(|k| {
                let a = k * PI / 3.0;
                third(ray_from_direction([a.sin(), 0.0, a.cos()]).unwrap())
            })
            .collect();
        let povm = crate::qstate::Povm::new(vec![0.0, 1.0, 2.0], trine).unwrap();
        assert!(matches!(
            model.responses(&Experiment::new("trine", povm)),
            Err(Error::UnsupportedExperiment { .. })
        ));
        let unsharp = Experiment::two_outcome(
            "unsharp",
            PauliAxis::X.eigenray::<f64>(true).projector().scale(&0.5),
        )
        .unwrap();
        let rho = model.generator("+z").unwrap();
        let report = model.adequacy_check(rho, &unsharp, &1e-12).unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn pauli_rays_order() {
        let names: Vec<String> = pauli_rays::<f64>().into_iter().map(|(n, _)| n).collect();
        assert_eq!(names, ["+z", "-z", "+x", "-x", "+y", "-y"]);
    }
}
