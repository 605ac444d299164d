//! The Spekkens toy model: four ontic states, six epistemic states, and
//! deterministic answers to the three Pauli tests.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::QSqrt3;
use crate::ontology::{
    AdequacyReport, Coverage, EpistemicMeasure, Experiment, Generator, NodeSet, OnticSpace,
    OntologicalModel, PauliAxis, ResponseFunction, ResponseTable,
};
use crate::qstate::{DensityMatrix, Operator};

/// `(name, axis, positive, ontic states)`, ontic states numbered from 1.
const EPISTEMIC_STATES: [(&str, PauliAxis, bool, [usize; 2]); 6] = [
    ("z+", PauliAxis::Z, true, [1, 2]),
    ("z-", PauliAxis::Z, false, [3, 4]),
    ("x+", PauliAxis::X, true, [1, 3]),
    ("x-", PauliAxis::X, false, [2, 4]),
    ("y+", PauliAxis::Y, true, [1, 4]),
    ("y-", PauliAxis::Y, false, [2, 3]),
];

fn node_set(states: [usize; 2]) -> NodeSet {
    NodeSet::from_indices(4, &[states[0] - 1, states[1] - 1])
}

/// Answers an effect when it is `0`, `I`, or a Pauli eigenprojector: the
/// ontic states in the matching epistemic state respond 1, the others 0.
#[derive(Clone, Copy, Debug, Default)]
pub struct SpekkensResponse;

impl SpekkensResponse {
    fn indicator(op: &Operator<QSqrt3>) -> Option<NodeSet> {
        if op.dim() != 2 {
            return None;
        }
        if *op == Operator::zero(2) {
            return Some(NodeSet::empty(4));
        }
        if *op == Operator::identity(2) {
            return Some(NodeSet::full(4));
        }
        EPISTEMIC_STATES
            .iter()
            .find(|(_, axis, positive, _)| *op == axis.eigenray::<QSqrt3>(*positive).projector())
            .map(|(_, _, _, states)| node_set(*states))
    }
}

impl ResponseFunction<QSqrt3> for SpekkensResponse {
    fn describe(&self) -> String {
        "Spekkens toy-model responses".to_string()
    }

    fn coverage(&self) -> Coverage {
        Coverage::Listed(PauliAxis::ALL.iter().map(|a| format!("sigma_{}", a.name())).collect())
    }

    fn deterministic(&self) -> bool {
        true
    }

    fn responses(
        &self,
        space: &OnticSpace<QSqrt3>,
        experiment: &Experiment<QSqrt3>,
    ) -> Result<ResponseTable<QSqrt3>> {
        let sets = experiment
            .povm()
            .effects()
            .iter()
            .map(|e| Self::indicator(e.operator()))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::UnsupportedExperiment {
                model: "spekkens".to_string(),
                experiment: experiment.name().to_string(),
            })?;
        let rows = (0..space.len())
            .map(|node| {
                sets.iter()
                    .map(|s| if s.contains(node) { QSqrt3::one() } else { QSqrt3::zero() })
                    .collect()
            })
            .collect();
        Ok(ResponseTable { rows })
    }
}

/// The four-state model with generators `z+, z−, x+, x−, y+, y−`, each
/// uniform on two ontic states and mapped to its Pauli eigenprojector.
pub fn spekkens_model() -> OntologicalModel<QSqrt3> {
    let space = Arc::new(
        OnticSpace::finite((1..=4).map(|i| i.to_string()).collect()).expect("four labels"),
    );
    let generators = EPISTEMIC_STATES
        .iter()
        .map(|(name, axis, positive, states)| Generator {
            name: name.to_string(),
            measure: EpistemicMeasure::uniform_on(space.clone(), &node_set(*states).indices())
                .expect("two nodes")
                .with_state(DensityMatrix::pure(&axis.eigenray(*positive))),
        })
        .collect();
    OntologicalModel::new("spekkens", space, Arc::new(SpekkensResponse), generators)
        .expect("valid generators")
}

#[derive(Clone, Debug)]
pub struct SpekkensAudit {
    /// One report per generator and Pauli test, generators outermost.
    pub checks: Vec<(String, AdequacyReport<QSqrt3>)>,
    pub coverage: Coverage,
    /// Whether every qubit effect is answered; false for this model.
    pub experiments_surjective: bool,
    /// Whether the six generators have pairwise distinct density matrices.
    pub dmap_injective_on_generators: bool,
}

impl SpekkensAudit {
    pub fn all_exact(&self) -> bool {
        self.checks.iter().all(|(_, r)| r.max_deviation.is_zero())
    }

    pub fn surjectivity_line(&self) -> String {
        if self.experiments_surjective {
            "E surjective: PASS".to_string()
        } else {
            match &self.coverage {
                Coverage::Listed(names) => {
                    format!("E surjective: FAIL ({} tests only)", names.len())
                }
                other => format!("E surjective: FAIL ({other})"),
            }
        }
    }
}

/// Exact adequacy of every generator on the three Pauli tests, plus the
/// hypothesis audit.
pub fn spekkens_audit() -> Result<SpekkensAudit> {
    let model = spekkens_model();
    let zero = QSqrt3::zero();
    let mut checks = Vec::new();
    for g in model.generators() {
        for axis in PauliAxis::ALL {
            let report = model.adequacy_check(&g.measure, &Experiment::pauli(axis), &zero)?;
            checks.push((g.name.clone(), report));
        }
    }
    let states: Vec<&DensityMatrix<QSqrt3>> = model
        .generators()
        .iter()
        .map(|g| model.dmap(&g.measure))
        .collect::<Result<_>>()?;
    let dmap_injective_on_generators = states
        .iter()
        .enumerate()
        .all(|(i, a)| states[i + 1..].iter().all(|b| a != b));
    let coverage = model.coverage();
    Ok(SpekkensAudit {
        checks,
        experiments_surjective: coverage.covers_all_effects(),
        coverage,
        dmap_injective_on_generators,
    })
}
