//! Model definition files.
//!
//! A definition is a TOML document:
//!
//! ```toml
//! name = "two-rays"
//! space = "rays"          # "spekkens4" | "sphere-quadrature" | "rays"
//! response = "born"       # "spekkens" | "ks" | "born" | "table"
//!
//! [quadrature]            # sphere-quadrature only; default 64 x 128
//! theta = 64
//! phi = 128
//!
//! [[ray]]
//! name = "g"
//! vector = ["1/2", "1/2*sqrt3"]
//!
//! [[generator]]           # omitted: one generator per ray (or the built-in set)
//! name = "a"
//! ray = "g"               # point mass on / KS preparation of a ray
//! # nodes = ["1", "2"]    # or uniform on nodes
//! # density = ["1/2", ...]# or an explicit density per node
//! # state = [["1/2", "0"], ["0", "1/2"]]  # density matrix for nodes/density
//! # state_ray = "g"       # or the projector of a ray
//!
//! [[test]]                # response = "table": one per answered test
//! ray = "g"
//! outcome1 = ["1", "0"]   # per-node probability that the test of the ray answers 1
//! ```
//!
//! Amplitudes and probabilities are exact strings over ℚ(√3)(i) such as
//! `1/2`, `-1/2*sqrt3`, `1/2*i`. Semantic errors carry the line of the
//! offending entry.

use std::path::Path;
use std::sync::Arc;

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::Deserialize;
use toml::Spanned;

use super::measure::EpistemicMeasure;
use super::model::{
    Coverage, Experiment, Generator, OntologicalModel, ResponseFunction, ResponseTable,
};
use super::quadrature::QuadratureOrder;
use super::space::{OnticSpace, SpaceKind};
use crate::error::{Error, Result};
use crate::field::{parse_complex, QSqrt3, Real};
use crate::qstate::{DensityMatrix, Operator, Ray};
use crate::zoo::{ks_model_with, pauli_rays, spekkens_model, BornResponse};

/// A model read from a definition file, in the backend its space calls for.
#[derive(Debug)]
pub enum LoadedModel {
    Exact(OntologicalModel<QSqrt3>),
    Float(OntologicalModel<f64>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    name: Option<String>,
    space: Spanned<String>,
    response: Spanned<String>,
    quadrature: Option<Spanned<RawQuadrature>>,
    #[serde(default, rename = "ray")]
    rays: Vec<Spanned<RawRay>>,
    #[serde(default, rename = "generator")]
    generators: Vec<Spanned<RawGenerator>>,
    #[serde(default, rename = "test")]
    tests: Vec<Spanned<RawTest>>,
}

#[derive(Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQuadrature {
    theta: usize,
    phi: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRay {
    name: String,
    vector: Vec<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGenerator {
    name: String,
    ray: Option<String>,
    nodes: Option<Vec<String>>,
    density: Option<Vec<String>>,
    state: Option<Vec<Vec<String>>>,
    state_ray: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTest {
    ray: String,
    outcome1: Vec<String>,
}

struct Context<'a> {
    text: &'a str,
}

impl Context<'_> {
    fn line_of(&self, offset: usize) -> usize {
        self.text[..offset.min(self.text.len())].matches('\n').count() + 1
    }

    fn error<T>(&self, span: std::ops::Range<usize>, message: impl Into<String>) -> Result<T> {
        Err(Error::Definition {
            line: Some(self.line_of(span.start)),
            message: message.into(),
        })
    }
}

/// Reads and builds a model definition file.
pub fn load_model(path: &Path, order: Option<QuadratureOrder>) -> Result<LoadedModel> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Definition {
        line: None,
        message: format!("{}: {e}", path.display()),
    })?;
    parse_model(&text, order)
}

/// Builds a model from definition text. `order` overrides the file's
/// quadrature section.
pub fn parse_model(text: &str, order: Option<QuadratureOrder>) -> Result<LoadedModel> {
    let cx = Context { text };
    let raw: RawModel = toml::from_str(text).map_err(|e| Error::Definition {
        line: e.span().map(|s| cx.line_of(s.start)),
        message: e.message().to_string(),
    })?;

    let rays = parse_rays(&cx, &raw.rays)?;
    let name = raw.name.clone();
    let space_span = raw.space.span();
    let response_span = raw.response.span();
    match (raw.space.get_ref().as_str(), raw.response.get_ref().as_str()) {
        ("sphere-quadrature", "ks") => {
            let order = match (order, &raw.quadrature) {
                (Some(o), _) => o,
                (None, Some(q)) => {
                    let RawQuadrature { theta, phi } = *q.get_ref();
                    if theta == 0 || phi == 0 {
                        return cx.error(q.span(), "quadrature orders must be positive");
                    }
                    QuadratureOrder { theta, phi }
                }
                (None, None) => QuadratureOrder::default(),
            };
            let generator_rays = if raw.generators.is_empty() {
                pauli_rays()
            } else {
                let mut out = Vec::new();
                for g in &raw.generators {
                    let body = g.get_ref();
                    let Some(ray_name) = &body.ray else {
                        return cx.error(g.span(), "sphere generators are given by `ray`");
                    };
                    let ray = lookup(&cx, &rays, ray_name, g.span())?;
                    if ray.dim() != 2 {
                        return cx.error(g.span(), "the KS model is a qubit model");
                    }
                    out.push((body.name.clone(), ray.map(QSqrt3::to_f64)?));
                }
                out
            };
            let model = ks_model_with(order, &generator_rays)?;
            Ok(LoadedModel::Float(rename(model, name)))
        }
        ("spekkens4", "spekkens") if raw.generators.is_empty() => {
            Ok(LoadedModel::Exact(rename(spekkens_model(), name)))
        }
        ("spekkens4", response @ ("spekkens" | "table")) => {
            let space = Arc::new(OnticSpace::finite((1..=4).map(|i| i.to_string()).collect())?);
            let responder: Arc<dyn ResponseFunction<QSqrt3>> = if response == "spekkens" {
                Arc::new(crate::zoo::SpekkensResponse)
            } else {
                Arc::new(table_response(&cx, &space, &rays, &raw.tests)?)
            };
            let generators = build_generators(&cx, &space, &rays, &raw.generators, false)?;
            let model = OntologicalModel::new(
                name.unwrap_or_else(|| "custom".into()),
                space,
                responder,
                generators,
            )?;
            Ok(LoadedModel::Exact(model))
        }
        ("rays", response @ ("born" | "table")) => {
            if rays.is_empty() {
                return cx.error(space_span, "a rays space needs at least one [[ray]]");
            }
            let dim = rays[0].1.dim();
            if rays.iter().any(|(_, r)| r.dim() != dim) {
                return cx.error(space_span, "all rays must have the same dimension");
            }
            let labels = rays.iter().map(|(n, _)| n.clone()).collect();
            let space = Arc::new(OnticSpace::new(
                SpaceKind::Rays,
                labels,
                vec![QSqrt3::one(); rays.len()],
            )?);
            let responder: Arc<dyn ResponseFunction<QSqrt3>> = if response == "born" {
                let vectors: Vec<Ray<QSqrt3>> = rays.iter().map(|(_, r)| r.clone()).collect();
                Arc::new(BornResponse::new(&vectors))
            } else {
                Arc::new(table_response(&cx, &space, &rays, &raw.tests)?)
            };
            let generators = build_generators(&cx, &space, &rays, &raw.generators, true)?;
            let model = OntologicalModel::new(
                name.unwrap_or_else(|| "custom".into()),
                space,
                responder,
                generators,
            )?;
            Ok(LoadedModel::Exact(model))
        }
        ("spekkens4" | "rays" | "sphere-quadrature", other) => cx.error(
            response_span,
            format!(
                "response {other:?} is not available on space {:?}",
                raw.space.get_ref()
            ),
        ),
        (other, _) => cx.error(
            space_span,
            format!("unknown space {other:?}; expected spekkens4, sphere-quadrature, or rays"),
        ),
    }
}

fn rename<R: Real>(model: OntologicalModel<R>, name: Option<String>) -> OntologicalModel<R> {
    match name {
        Some(n) => model.renamed(n),
        None => model,
    }
}

fn parse_exact(cx: &Context<'_>, s: &str, span: std::ops::Range<usize>) -> Result<Complex<QSqrt3>> {
    parse_complex(s).or_else(|e| cx.error(span, e.to_string()))
}

fn parse_real(cx: &Context<'_>, s: &str, span: std::ops::Range<usize>) -> Result<QSqrt3> {
    let c = parse_exact(cx, s, span.clone())?;
    if !c.im.is_zero() {
        return cx.error(span, format!("{s:?} must be real"));
    }
    Ok(c.re)
}

fn parse_rays(cx: &Context<'_>, raw: &[Spanned<RawRay>]) -> Result<Vec<(String, Ray<QSqrt3>)>> {
    let mut out: Vec<(String, Ray<QSqrt3>)> = Vec::new();
    for r in raw {
        let body = r.get_ref();
        if out.iter().any(|(n, _)| *n == body.name) {
            return cx.error(r.span(), format!("duplicate ray {:?}", body.name));
        }
        let vector = body
            .vector
            .iter()
            .map(|s| parse_exact(cx, s.get_ref(), s.span()))
            .collect::<Result<Vec<_>>>()?;
        let ray = Ray::new(vector).or_else(|e| cx.error(r.span(), e.to_string()))?;
        out.push((body.name.clone(), ray));
    }
    Ok(out)
}

fn lookup<'a>(
    cx: &Context<'_>,
    rays: &'a [(String, Ray<QSqrt3>)],
    name: &str,
    span: std::ops::Range<usize>,
) -> Result<&'a Ray<QSqrt3>> {
    match rays.iter().find(|(n, _)| n == name) {
        Some((_, r)) => Ok(r),
        None => cx.error(span, format!("unknown ray {name:?}")),
    }
}

fn build_generators(
    cx: &Context<'_>,
    space: &Arc<OnticSpace<QSqrt3>>,
    rays: &[(String, Ray<QSqrt3>)],
    raw: &[Spanned<RawGenerator>],
    ray_nodes: bool,
) -> Result<Vec<Generator<QSqrt3>>> {
    if raw.is_empty() {
        if !ray_nodes {
            return Err(Error::Definition {
                line: None,
                message: "at least one [[generator]] is required".into(),
            });
        }
        return rays
            .iter()
            .enumerate()
            .map(|(node, (name, ray))| {
                Ok(Generator {
                    name: name.clone(),
                    measure: EpistemicMeasure::point_mass(space.clone(), node)?
                        .with_state(DensityMatrix::pure(ray)),
                })
            })
            .collect();
    }
    let mut out: Vec<Generator<QSqrt3>> = Vec::new();
    for g in raw {
        let span = g.span();
        let body = g.get_ref();
        if out.iter().any(|o| o.name == body.name) {
            return cx.error(span, format!("duplicate generator {:?}", body.name));
        }
        let given = [body.ray.is_some(), body.nodes.is_some(), body.density.is_some()];
        if given.iter().filter(|b| **b).count() != 1 {
            return cx.error(span, "give exactly one of `ray`, `nodes`, `density`");
        }
        let wrap = |r: Result<EpistemicMeasure<QSqrt3>>| r.or_else(|e| cx.error(span.clone(), e.to_string()));
        let measure = if let Some(ray_name) = &body.ray {
            if !ray_nodes {
                return cx.error(span, "`ray` generators need a rays space");
            }
            let ray = lookup(cx, rays, ray_name, span.clone())?;
            let node = space.index_of(ray_name).expect("ray nodes are labelled by name");
            wrap(EpistemicMeasure::point_mass(space.clone(), node))?
                .with_state(DensityMatrix::pure(ray))
        } else {
            let measure = if let Some(nodes) = &body.nodes {
                let mut indices = Vec::with_capacity(nodes.len());
                for n in nodes {
                    match space.index_of(n) {
                        Some(i) => indices.push(i),
                        None => return cx.error(span, format!("unknown node {n:?}")),
                    }
                }
                wrap(EpistemicMeasure::uniform_on(space.clone(), &indices))?
            } else {
                let density = body
                    .density
                    .as_ref()
                    .expect("checked above")
                    .iter()
                    .map(|s| parse_real(cx, s, span.clone()))
                    .collect::<Result<Vec<_>>>()?;
                wrap(EpistemicMeasure::new(space.clone(), density))?
            };
            let state = match (&body.state, &body.state_ray) {
                (Some(rows), None) => {
                    let rows = rows
                        .iter()
                        .map(|row| row.iter().map(|s| parse_exact(cx, s, span.clone())).collect())
                        .collect::<Result<Vec<Vec<_>>>>()?;
                    let op = Operator::from_rows(rows).or_else(|e| cx.error(span.clone(), e.to_string()))?;
                    DensityMatrix::new(op).or_else(|e| cx.error(span.clone(), e.to_string()))?
                }
                (None, Some(r)) => DensityMatrix::pure(lookup(cx, rays, r, span.clone())?),
                _ => return cx.error(span, "give exactly one of `state`, `state_ray`"),
            };
            measure.with_state(state)
        };
        out.push(Generator {
            name: body.name.clone(),
            measure,
        });
    }
    Ok(out)
}

/// Responses given by explicit per-node tables for a list of ray tests.
/// An effect is answered when it is `0`, `I`, a listed `P_h`, or a listed
/// `I − P_h`.
pub struct TableResponse {
    tests: Vec<(String, Operator<QSqrt3>, Vec<QSqrt3>)>,
}

impl TableResponse {
    fn column(&self, op: &Operator<QSqrt3>, nodes: usize) -> Option<Vec<QSqrt3>> {
        let dim = op.dim();
        if *op == Operator::zero(dim) {
            return Some(vec![QSqrt3::zero(); nodes]);
        }
        if *op == Operator::identity(dim) {
            return Some(vec![QSqrt3::one(); nodes]);
        }
        for (_, p, values) in &self.tests {
            if p.dim() != dim {
                continue;
            }
            if op == p {
                return Some(values.clone());
            }
            if Operator::identity(dim).sub(p).ok().as_ref() == Some(op) {
                return Some(values.iter().map(|v| QSqrt3::one() - v.clone()).collect());
            }
        }
        None
    }
}

impl ResponseFunction<QSqrt3> for TableResponse {
    fn describe(&self) -> String {
        format!("explicit response table ({} tests)", self.tests.len())
    }

    fn coverage(&self) -> Coverage {
        Coverage::Listed(self.tests.iter().map(|(n, _, _)| n.clone()).collect())
    }

    fn deterministic(&self) -> bool {
        self.tests
            .iter()
            .all(|(_, _, v)| v.iter().all(|p| p.is_zero() || p.is_one()))
    }

    fn responses(
        &self,
        space: &OnticSpace<QSqrt3>,
        experiment: &Experiment<QSqrt3>,
    ) -> Result<ResponseTable<QSqrt3>> {
        let columns = experiment
            .povm()
            .effects()
            .iter()
            .map(|e| self.column(e.operator(), space.len()))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::UnsupportedExperiment {
                model: "table".to_string(),
                experiment: experiment.name().to_string(),
            })?;
        let rows = (0..space.len())
            .map(|node| columns.iter().map(|c| c[node].clone()).collect())
            .collect();
        Ok(ResponseTable { rows })
    }
}

fn table_response(
    cx: &Context<'_>,
    space: &OnticSpace<QSqrt3>,
    rays: &[(String, Ray<QSqrt3>)],
    raw: &[Spanned<RawTest>],
) -> Result<TableResponse> {
    if raw.is_empty() {
        return Err(Error::Definition {
            line: None,
            message: "a table response needs at least one [[test]]".into(),
        });
    }
    let mut tests = Vec::new();
    for t in raw {
        let body = t.get_ref();
        let ray = lookup(cx, rays, &body.ray, t.span())?;
        if body.outcome1.len() != space.len() {
            return cx.error(
                t.span(),
                format!("{} probabilities for {} nodes", body.outcome1.len(), space.len()),
            );
        }
        let values = body
            .outcome1
            .iter()
            .map(|s| parse_real(cx, s, t.span()))
            .collect::<Result<Vec<_>>>()?;
        if values.iter().any(|v| *v < QSqrt3::zero() || *v > QSqrt3::one()) {
            return cx.error(t.span(), "probabilities must lie in [0, 1]");
        }
        tests.push((format!("test[{}]", body.ray), ray.projector(), values));
    }
    Ok(TableResponse { tests })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::PauliAxis;

    #[test]
    fn rays_born_model() {
        let text = r#"
name = "two"
space = "rays"
response = "born"

[[ray]]
name = "up"
vector = ["1", "0"]

[[ray]]
name = "trine"
vector = ["1/2", "1/2*sqrt3"]
"#;
        let LoadedModel::Exact(model) = parse_model(text, None).unwrap() else {
            panic!("expected exact backend")
        };
        assert_eq!(model.name(), "two");
        assert_eq!(model.generators().len(), 2);
        let r = model
            .adequacy_check(
                model.generator("trine").unwrap(),
                &Experiment::pauli(PauliAxis::Z),
                &QSqrt3::zero(),
            )
            .unwrap();
        assert!(r.pass);
        assert_eq!(r.outcomes[0].model, QSqrt3::ratio(1, 4));
    }

    #[test]
    fn custom_table_model() {
        let text = r#"
space = "spekkens4"
response = "table"

[[ray]]
name = "z"
vector = ["1", "0"]

[[generator]]
name = "half"
nodes = ["1", "3"]
state = [["1/2", "0"], ["0", "1/2"]]

[[test]]
ray = "z"
outcome1 = ["1", "1", "0", "0"]
"#;
        let LoadedModel::Exact(model) = parse_model(text, None).unwrap() else {
            panic!()
        };
        let x = Experiment::projective(&PauliAxis::Z.eigenray::<QSqrt3>(true));
        let r = model
            .adequacy_check(model.generator("half").unwrap(), &x, &QSqrt3::zero())
            .unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn sphere_model_with_order_override() {
        let text = "space = \"sphere-quadrature\"\nresponse = \"ks\"\n[quadrature]\ntheta = 4\nphi = 8\n";
        let LoadedModel::Float(model) = parse_model(text, None).unwrap() else {
            panic!()
        };
        assert_eq!(model.space().len(), 32);
        let LoadedModel::Float(model) =
            parse_model(text, Some(QuadratureOrder { theta: 2, phi: 2 })).unwrap()
        else {
            panic!()
        };
        assert_eq!(model.space().len(), 4);
    }

    #[test]
    fn diagnostics_carry_lines() {
        let line = |text: &str| match parse_model(text, None) {
            Err(Error::Definition { line, .. }) => line,
            other => panic!("{other:?}"),
        };
        assert_eq!(line("space = \"rays\"\nresponse = \n"), Some(2));
        assert_eq!(line("space = \"torus\"\nresponse = \"born\"\n"), Some(1));
        let bad_ray = "space = \"rays\"\nresponse = \"born\"\n\n[[ray]]\nname = \"g\"\nvector = [\"1/0\", \"1\"]\n";
        assert_eq!(line(bad_ray), Some(6));
        let unknown = "space = \"rays\"\nresponse = \"born\"\n[[ray]]\nname = \"g\"\nvector = [\"1\", \"0\"]\n[[generator]]\nname = \"a\"\nray = \"h\"\n";
        assert_eq!(line(unknown), Some(6));
    }
}
