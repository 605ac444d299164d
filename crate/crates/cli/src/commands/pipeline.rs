use std::fmt::Write as _;

use ontic_core::ontology::LoadedModel;
use ontic_core::theorem::{abstract_pipeline, proof_pipeline_audit, PipelineOptions, PipelineReport};
use ontic_core::OntologicalModel;
use serde::Serialize;

use crate::args::PipelineArgs;
use crate::models::{resolve, scalar, tolerance, Backend};
use crate::{CliError, Rendered};

#[derive(Debug, Serialize)]
pub struct PipelineRecord {
    pub command: &'static str,
    #[serde(flatten)]
    pub report: PipelineReport,
    pub pass: bool,
}

pub fn run(args: &PipelineArgs) -> Result<Rendered<PipelineRecord>, CliError> {
    let report = match &args.model {
        None => abstract_pipeline()?,
        Some(name) => match resolve(name, args.quadrature)? {
            LoadedModel::Exact(m) => audit(&m, args)?,
            LoadedModel::Float(m) => audit(&m, args)?,
        },
    };
    let record = PipelineRecord {
        command: "pipeline",
        pass: report.reached_certificate(),
        report,
    };
    Ok(Rendered {
        text: render(&record.report),
        pass: record.pass,
        record,
    })
}

fn audit<R: Backend>(model: &OntologicalModel<R>, args: &PipelineArgs) -> Result<PipelineReport, CliError> {
    let options = PipelineOptions {
        tol: tolerance(args.tol.as_deref())?,
        step: scalar("--step", &args.step)?,
        random_sets: args.sets,
        seed: args.seed,
    };
    Ok(proof_pipeline_audit(model, &options)?)
}

pub fn render(r: &PipelineReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "pipeline: {}", r.model);
    for s in &r.stages {
        let _ = writeln!(out, "stage {} {:<20} {}", s.index, s.name, s.status);
        let _ = writeln!(out, "  claim: {}", s.identity);
        for c in &s.checks {
            let _ = writeln!(
                out,
                "  {}: measured {} expected {} deviation {} {}",
                c.identity,
                c.measured,
                c.expected,
                c.deviation,
                if c.pass { "PASS" } else { "FAIL" }
            );
        }
        for n in &s.notes {
            let _ = writeln!(out, "  {n}");
        }
    }
    match (r.broke_at, &r.certificate) {
        (Some(i), _) => {
            let _ = writeln!(out, "chain breaks at stage {i} ({})", r.stages[i].name);
        }
        (None, Some(c)) => {
            let _ = writeln!(out, "contradiction certified: {c}");
        }
        (None, None) => {
            let _ = writeln!(out, "no break and no certificate");
        }
    }
    out
}
