//! The ψ-ontic model: ontic states are rays, preparations are point masses,
//! and responses are the Born rule itself.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{QSqrt3, Real};
use crate::ontology::{
    Coverage, EpistemicMeasure, Experiment, Generator, OnticSpace, OntologicalModel, PauliAxis,
    RayPreparer, ResponseFunction, ResponseTable, SpaceKind,
};
use crate::qstate::{born, DensityMatrix, Effect, Ray};

/// `p(φ, e) = tr(P_φ e)`.
pub struct BornResponse<R> {
    states: Vec<DensityMatrix<R>>,
}

impl<R: Real> BornResponse<R> {
    pub fn new(rays: &[Ray<R>]) -> Self {
        Self {
            states: rays.iter().map(DensityMatrix::pure).collect(),
        }
    }
}

impl<R: Real> ResponseFunction<R> for BornResponse<R> {
    fn describe(&self) -> String {
        "Born rule on ray nodes".to_string()
    }

    fn coverage(&self) -> Coverage {
        Coverage::AllPovms
    }

    fn responses(&self, space: &OnticSpace<R>, experiment: &Experiment<R>) -> Result<ResponseTable<R>> {
        if space.len() != self.states.len() {
            return Err(Error::SpaceMismatch);
        }
        let effects: &[Effect<R>] = experiment.povm().effects();
        let rows = self
            .states
            .iter()
            .map(|state| effects.iter().map(|e| born(state, e)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        Ok(ResponseTable { rows })
    }
}

/// Prepares a ray as the point mass on the node holding it.
struct NodeLookup<R> {
    rays: Vec<Ray<R>>,
}

impl<R: Real> RayPreparer<R> for NodeLookup<R> {
    fn prepare(&self, space: &Arc<OnticSpace<R>>, ray: &Ray<R>) -> Result<Option<EpistemicMeasure<R>>> {
        let tol = R::tolerance();
        match self.rays.iter().position(|r| r.dim() == ray.dim() && r.same_ray(ray, &tol)) {
            Some(node) => Ok(Some(
                EpistemicMeasure::point_mass(space.clone(), node)?
                    .with_state(DensityMatrix::pure(&self.rays[node])),
            )),
            None => Ok(None),
        }
    }
}

/// One node and one point-mass generator per named ray.
pub fn psi_ontic_build<R: Real>(rays: Vec<(String, Ray<R>)>) -> Result<OntologicalModel<R>> {
    if rays.is_empty() {
        return Err(Error::EmptyRayList);
    }
    let dim = rays[0].1.dim();
    if let Some((_, r)) = rays.iter().find(|(_, r)| r.dim() != dim) {
        return Err(Error::DimensionMismatch(dim, r.dim()));
    }
    let (names, vectors): (Vec<String>, Vec<Ray<R>>) = rays.into_iter().unzip();
    let weights = vec![R::one(); names.len()];
    let space = Arc::new(OnticSpace::new(SpaceKind::Rays, names.clone(), weights)?);
    let generators = names
        .iter()
        .zip(&vectors)
        .enumerate()
        .map(|(node, (name, ray))| {
            Ok(Generator {
                name: name.clone(),
                measure: EpistemicMeasure::point_mass(space.clone(), node)?
                    .with_state(DensityMatrix::pure(ray)),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let response = Arc::new(BornResponse::new(&vectors));
    Ok(OntologicalModel::new("psi-ontic", space, response, generators)?
        .with_preparer(Arc::new(NodeLookup { rays: vectors })))
}

/// The ψ-ontic model on the eigenbases of σ_z and σ_x: `+z, −z, +x, −x`.
pub fn psi_ontic_4() -> OntologicalModel<QSqrt3> {
    let rays = [PauliAxis::Z, PauliAxis::X]
        .into_iter()
        .flat_map(|axis| {
            [true, false].map(|positive| {
                let sign = if positive { '+' } else { '-' };
                (format!("{sign}{}", axis.name()), axis.eigenray(positive))
            })
        })
        .collect();
    psi_ontic_build(rays).expect("four qubit rays")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::{mix, total_variation, Distinguishability};
    use num_traits::{One, Zero};

    #[test]
    fn i_over_two_has_two_preimages() {
        let model = psi_ontic_4();
        let half = QSqrt3::ratio(1, 2);
        let g = |n: &str| model.generator(n).unwrap().clone();
        let a = mix(&half, &g("+z"), &g("-z")).unwrap();
        let b = mix(&half, &g("+x"), &g("-x")).unwrap();
        let verdict = model.empirical_distinguishability(&a, &b).unwrap();
        assert!(verdict.is_indistinguishable());
        assert_eq!(total_variation(&a, &b).unwrap(), QSqrt3::one());
        assert_eq!(
            model.dmap(&a).unwrap(),
            &DensityMatrix::<QSqrt3>::maximally_mixed(2)
        );
    }

    #[test]
    fn distinct_pure_states_are_told_apart_by_sigma_z() {
        let model = psi_ontic_4();
        let verdict = model
            .empirical_distinguishability(model.generator("+z").unwrap(), model.generator("+x").unwrap())
            .unwrap();
        match verdict {
            Distinguishability::DistinguishedBy { experiment, gap, .. } => {
                assert_eq!(experiment.name(), "test[+z]");
                assert_eq!(gap, QSqrt3::ratio(1, 2));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn adequacy_is_exact() {
        let model = psi_ontic_4();
        let zero = QSqrt3::zero();
        for g in model.generators() {
            for axis in PauliAxis::ALL {
                let r = model.adequacy_check(&g.measure, &Experiment::pauli(axis), &zero).unwrap();
                assert!(r.pass && r.max_deviation.is_zero());
            }
        }
    }

    #[test]
    fn convexity_audit_on_z_basis() {
        let model = psi_ontic_4();
        let g = |n: &str| model.generator(n).unwrap().clone();
        let x = Experiment::pauli(PauliAxis::X);
        let r = model
            .dmap_convexity_audit(&g("+z"), &g("-z"), &QSqrt3::ratio(1, 2), &x)
            .unwrap();
        assert!(r.pass && r.dmap_deviation.is_zero() && r.chain_deviation.is_zero());
        let r = model
            .dmap_convexity_audit(&g("+z"), &g("+x"), &QSqrt3::zero(), &x)
            .unwrap();
        assert!(r.pass);
    }

    #[test]
    fn empty_and_single() {
        assert!(matches!(
            psi_ontic_build::<QSqrt3>(vec![]),
            Err(Error::EmptyRayList)
        ));
        let single = psi_ontic_build(vec![("g".to_string(), PauliAxis::Z.eigenray::<QSqrt3>(true))]).unwrap();
        assert_eq!(single.generators().len(), 1);
    }
}
