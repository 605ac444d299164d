use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex;
use ontic_core::field::{format_complex, parse_complex};
use ontic_core::lp::LpOutcome;
use ontic_core::ontology::PauliAxis;
use ontic_core::theorem::{moment_report, triple_test, trine_rays, MomentReport};
use ontic_core::{QSqrt3, Ray};
use serde::{Deserialize, Serialize};

use crate::args::TripleArgs;
use crate::{CliError, Rendered};

#[derive(Debug, Serialize)]
pub struct RayRow {
    pub name: String,
    pub vector: Vec<String>,
}

/// Pair statistics implied by the overlap: `P(X_i = a, X_j = b)`.
#[derive(Debug, Serialize)]
pub struct PairRow {
    pub first: String,
    pub second: String,
    pub overlap: String,
    pub p11: String,
    pub p10: String,
    pub p01: String,
    pub p00: String,
}

#[derive(Debug, Serialize)]
pub struct CertificateRecord {
    pub multipliers: Vec<String>,
    pub derived_row: Vec<String>,
    pub derived_rhs: String,
}

#[derive(Debug, Serialize)]
pub struct AtomRow {
    pub atom: String,
    pub probability: String,
}

#[derive(Debug, Serialize)]
pub struct TripleRecord {
    pub command: &'static str,
    pub rays: Vec<RayRow>,
    pub pairs: Vec<PairRow>,
    pub constraints: usize,
    pub atoms: usize,
    /// Only for the default trine run.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub marginal_equations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub marginal_combination: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub marginal_identity: Option<String>,
    pub decision: &'static str,
    pub conclusion: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<AtomRow>>,
    pub verified: bool,
    /// Agreement with the basic-solution search; absent above four rays.
    pub cross_check: Option<bool>,
    pub pass: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RayFile {
    ray: Vec<RayEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RayEntry {
    name: String,
    vector: Vec<String>,
}

/// `[[ray]]` tables with `name` and exact `vector` components, the same
/// syntax as model definition files.
fn load_rays(path: &str) -> Result<Vec<(String, Ray<QSqrt3>)>, CliError> {
    let fail = |message: String| CliError::RayFile {
        path: path.to_string(),
        message,
    };
    let text = std::fs::read_to_string(path).map_err(|e| fail(e.to_string()))?;
    let file: RayFile = toml::from_str(&text).map_err(|e| fail(e.to_string()))?;
    file.ray
        .into_iter()
        .map(|entry| {
            let components = entry
                .vector
                .iter()
                .map(|c| parse_complex(c).map_err(|e| fail(format!("ray {}: {e}", entry.name))))
                .collect::<Result<Vec<Complex<QSqrt3>>, _>>()?;
            let ray = Ray::new(components).map_err(|e| fail(format!("ray {}: {e}", entry.name)))?;
            Ok((entry.name, ray))
        })
        .collect()
}

fn named(axes: &[(PauliAxis, bool)]) -> Vec<(String, Ray<QSqrt3>)> {
    axes.iter()
        .map(|&(a, p)| (format!("{}{}", if p { '+' } else { '-' }, a.name()), a.eigenray(p)))
        .collect()
}

pub fn ray_set(spec: &str) -> Result<Vec<(String, Ray<QSqrt3>)>, CliError> {
    Ok(match spec {
        "default" => trine_rays(),
        "orthogonal-pair" => named(&[(PauliAxis::Z, true), (PauliAxis::Z, false)]),
        "right-angle" => named(&[(PauliAxis::X, true), (PauliAxis::Y, true), (PauliAxis::Z, true)]),
        path if Path::new(path).is_file() => load_rays(path)?,
        other => {
            return Err(CliError::RayFile {
                path: other.to_string(),
                message: "not a ray set name (default, orthogonal-pair, right-angle) or a readable file".into(),
            })
        }
    })
}

fn strings<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn base_record(m: &MomentReport) -> TripleRecord {
    let s = &m.system;
    let rays = s
        .rays()
        .iter()
        .map(|(name, r)| RayRow {
            name: name.clone(),
            vector: r.vector().iter().map(format_complex).collect(),
        })
        .collect();
    let mut pairs = Vec::new();
    for i in 0..s.n() {
        for j in i + 1..s.n() {
            pairs.push(PairRow {
                first: s.rays()[i].0.clone(),
                second: s.rays()[j].0.clone(),
                overlap: s.overlap(i, j).to_string(),
                p11: s.joint(i, j, true, true).to_string(),
                p10: s.joint(i, j, true, false).to_string(),
                p01: s.joint(i, j, false, true).to_string(),
                p00: s.joint(i, j, false, false).to_string(),
            });
        }
    }
    let names = s.atom_names();
    let (decision, certificate, witness) = match &m.outcome {
        LpOutcome::Infeasible(c) => (
            "INFEASIBLE",
            Some(CertificateRecord {
                multipliers: strings(&c.multipliers),
                derived_row: strings(&c.derived_row),
                derived_rhs: c.derived_rhs.to_string(),
            }),
            None,
        ),
        LpOutcome::Feasible(x) => (
            "FEASIBLE",
            None,
            Some(
                names
                    .iter()
                    .zip(x)
                    .map(|(a, p)| AtomRow {
                        atom: a.clone(),
                        probability: p.to_string(),
                    })
                    .collect(),
            ),
        ),
    };
    TripleRecord {
        command: "triple-test",
        rays,
        pairs,
        constraints: s.system().row_count(),
        atoms: s.atom_count(),
        marginal_equations: Vec::new(),
        marginal_combination: None,
        marginal_identity: None,
        decision,
        conclusion: m.conclusion(),
        certificate,
        witness,
        verified: m.verified,
        cross_check: m.cross_check,
        pass: m.verified && m.cross_check != Some(false),
    }
}

pub fn run(args: &TripleArgs) -> Result<Rendered<TripleRecord>, CliError> {
    let record = if args.rays == "default" {
        let t = triple_test()?;
        let mut record = base_record(&t.moments);
        record.marginal_equations = t.marginal_equations.clone();
        record.marginal_combination = Some(strings(&t.combination.multipliers));
        record.marginal_identity = Some(t.identity.clone());
        record.pass = t.pass();
        record
    } else {
        base_record(&moment_report(&ray_set(&args.rays)?)?)
    };
    Ok(Rendered {
        text: render(&record),
        pass: record.pass,
        record,
    })
}

fn render(r: &TripleRecord) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "rays:");
    for ray in &r.rays {
        let _ = writeln!(out, "  {} = ({})", ray.name, ray.vector.join(", "));
    }
    let _ = writeln!(out, "pair table (overlap tr(P_g P_h), then P(X_g = a, X_h = b)):");
    let _ = writeln!(out, "  {:<10} {:<8} {:<8} {:<8} {:<8} {:<8}", "pair", "overlap", "P(1,1)", "P(1,0)", "P(0,1)", "P(0,0)");
    for p in &r.pairs {
        let _ = writeln!(
            out,
            "  {:<10} {:<8} {:<8} {:<8} {:<8} {:<8}",
            format!("{},{}", p.first, p.second),
            p.overlap,
            p.p11,
            p.p10,
            p.p01,
            p.p00
        );
    }
    let _ = writeln!(out, "moment system: {} constraints over {} atoms", r.constraints, r.atoms);
    if !r.marginal_equations.is_empty() {
        let _ = writeln!(out, "marginals:");
        for e in &r.marginal_equations {
            let _ = writeln!(out, "  {e}");
        }
        if let (Some(c), Some(id)) = (&r.marginal_combination, &r.marginal_identity) {
            let _ = writeln!(out, "combination ({}) of the marginals: {id}", c.join(", "));
        }
    }
    if let Some(c) = &r.certificate {
        let _ = writeln!(out, "certificate multipliers: {}", c.multipliers.join(" "));
    }
    let _ = writeln!(out, "{}", r.conclusion);
    let cross = match r.cross_check {
        Some(true) => "agrees",
        Some(false) => "DISAGREES",
        None => "skipped",
    };
    let _ = writeln!(
        out,
        "verified: {}  basic-solution cross-check: {cross}",
        if r.verified { "yes" } else { "NO" }
    );
    out
}
