use std::fmt::Write as _;

use ontic_core::ontology::LoadedModel;
use ontic_core::theorem::{find_double_preimage, format_operator};
use ontic_core::{OntologicalModel, Quantity};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::WitnessArgs;
use crate::models::{battery, resolve, scalar, tolerance, Backend};
use crate::{CliError, Rendered};

#[derive(Debug, Serialize)]
pub struct PairRecord {
    pub first: String,
    pub second: String,
    /// The shared density matrix.
    pub state: String,
    pub dmap_deviation: Quantity,
    pub total_variation: Quantity,
    /// Largest `|predict(first) − predict(second)|` over the tests.
    pub prediction_gap: Quantity,
}

#[derive(Debug, Serialize)]
pub struct WitnessRecord {
    pub command: &'static str,
    pub model: String,
    pub backend: &'static str,
    pub step: Quantity,
    pub threshold: Quantity,
    pub tolerance: Quantity,
    pub seed: u64,
    pub tests: usize,
    pub found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairRecord>,
    pub pass: bool,
}

pub fn run(args: &WitnessArgs) -> Result<Rendered<WitnessRecord>, CliError> {
    match resolve(&args.model.model, args.model.quadrature)? {
        LoadedModel::Exact(m) => search(&m, args),
        LoadedModel::Float(m) => search(&m, args),
    }
}

fn search<R: Backend>(
    model: &OntologicalModel<R>,
    args: &WitnessArgs,
) -> Result<Rendered<WitnessRecord>, CliError> {
    let tol: R = tolerance(args.model.tol.as_deref())?;
    let step: R = scalar("--step", &args.step)?;
    let threshold: R = scalar("--threshold", &args.threshold)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.model.seed);
    let (tests, _) = battery(model, args.tests, &mut rng);

    let found = find_double_preimage(model, &step, &threshold)?;
    let mut pass = false;
    let pair = match found {
        None => None,
        Some(d) => {
            let mut gap = R::zero();
            for x in &tests {
                let pa = model.predict(&d.first.measure, x)?;
                let pb = model.predict(&d.second.measure, x)?;
                for (a, b) in pa.probabilities.into_iter().zip(pb.probabilities) {
                    let diff = (a - b).magnitude();
                    if diff > gap {
                        gap = diff;
                    }
                }
            }
            pass = gap <= tol;
            Some(PairRecord {
                first: d.first.describe(model),
                second: d.second.describe(model),
                state: format_operator(d.state.operator()),
                dmap_deviation: d.dmap_deviation.quantity(),
                total_variation: d.total_variation.quantity(),
                prediction_gap: gap.quantity(),
            })
        }
    };
    let record = WitnessRecord {
        command: "witness",
        model: model.name().to_string(),
        backend: R::NAME,
        step: step.quantity(),
        threshold: threshold.quantity(),
        tolerance: tol.quantity(),
        seed: args.model.seed,
        tests: tests.len(),
        found: pair.is_some(),
        pair,
        pass,
    };
    Ok(Rendered {
        text: render(&record),
        pass: record.pass,
        record,
    })
}

fn render(r: &WitnessRecord) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "witness search: model {} ({} backend), grid step {}, total variation above {}",
        r.model, r.backend, r.step, r.threshold
    );
    match &r.pair {
        None => {
            let _ = writeln!(out, "none found in search budget");
        }
        Some(p) => {
            let _ = writeln!(out, "a = {}", p.first);
            let _ = writeln!(out, "b = {}", p.second);
            let _ = writeln!(out, "D(a) = D(b) = {}  (entrywise deviation {})", p.state, p.dmap_deviation);
            let _ = writeln!(out, "total variation(a, b) = {}", p.total_variation);
            let _ = writeln!(
                out,
                "prediction gap over {} tests (seed {}) = {}  tolerance {}  {}",
                r.tests,
                r.seed,
                p.prediction_gap,
                r.tolerance,
                if r.pass { "PASS" } else { "FAIL" }
            );
        }
    }
    out
}
