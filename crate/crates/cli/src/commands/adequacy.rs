use std::fmt::Write as _;

use ontic_core::ontology::LoadedModel;
use ontic_core::{OntologicalModel, Quantity};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::AdequacyArgs;
use crate::models::{battery, resolve, tolerance, Backend};
use crate::{CliError, Rendered};

#[derive(Debug, Serialize)]
pub struct GeneratorRow {
    pub generator: String,
    pub worst_test: String,
    pub max_deviation: Quantity,
    pub failures: usize,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct AdequacyRecord {
    pub command: &'static str,
    pub model: String,
    pub backend: &'static str,
    pub seed: u64,
    pub tests: usize,
    pub random_tests: usize,
    /// Battery entries the model does not answer.
    pub skipped: Vec<String>,
    pub tolerance: Quantity,
    pub generators: Vec<GeneratorRow>,
    pub checks: usize,
    pub failures: usize,
    pub max_deviation: Quantity,
    pub pass: bool,
}

pub fn run(args: &AdequacyArgs) -> Result<Rendered<AdequacyRecord>, CliError> {
    match resolve(&args.model.model, args.model.quadrature)? {
        LoadedModel::Exact(m) => audit(&m, args),
        LoadedModel::Float(m) => audit(&m, args),
    }
}

fn audit<R: Backend>(
    model: &OntologicalModel<R>,
    args: &AdequacyArgs,
) -> Result<Rendered<AdequacyRecord>, CliError> {
    let tol: R = tolerance(args.model.tol.as_deref())?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.model.seed);
    let (tests, skipped) = battery(model, args.tests, &mut rng);
    let mut rows = Vec::new();
    let mut overall = R::zero();
    for g in model.generators() {
        let mut worst: Option<(R, String)> = None;
        let mut failures = 0;
        for x in &tests {
            let report = model.adequacy_check(&g.measure, x, &tol)?;
            if !report.pass {
                failures += 1;
            }
            if worst.as_ref().is_none_or(|(d, _)| report.max_deviation > *d) {
                worst = Some((report.max_deviation, report.experiment));
            }
        }
        let worst = worst.unwrap_or_else(|| (R::zero(), "-".to_string()));
        if worst.0 > overall {
            overall = worst.0.clone();
        }
        rows.push(GeneratorRow {
            generator: g.name.clone(),
            worst_test: worst.1,
            max_deviation: worst.0.quantity(),
            failures,
            pass: failures == 0,
        });
    }
    let failures: usize = rows.iter().map(|r| r.failures).sum();
    let record = AdequacyRecord {
        command: "adequacy",
        model: model.name().to_string(),
        backend: R::NAME,
        seed: args.model.seed,
        tests: tests.len(),
        random_tests: tests.iter().filter(|x| !x.name().starts_with("sigma_")).count(),
        skipped,
        tolerance: tol.quantity(),
        checks: rows.len() * tests.len(),
        failures,
        max_deviation: overall.quantity(),
        pass: failures == 0 && !rows.is_empty(),
        generators: rows,
    };
    Ok(Rendered {
        text: render(&record),
        pass: record.pass,
        record,
    })
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn render(r: &AdequacyRecord) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "adequacy: model {} ({} backend)", r.model, r.backend);
    let _ = writeln!(
        out,
        "battery: {} tests (3 Pauli + {} random, seed {}), tolerance {}",
        r.tests, r.random_tests, r.seed, r.tolerance
    );
    for s in &r.skipped {
        let _ = writeln!(out, "skipped: {s} (not answered by the model)");
    }
    for g in &r.generators {
        let _ = writeln!(
            out,
            "  {:<12} max deviation {} on {}  failures {}  {}",
            g.generator,
            g.max_deviation,
            g.worst_test,
            g.failures,
            verdict(g.pass)
        );
    }
    let _ = writeln!(
        out,
        "checks {}  failures {}  max deviation {}  {}",
        r.checks,
        r.failures,
        r.max_deviation,
        verdict(r.pass)
    );
    out
}
