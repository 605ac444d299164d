use std::path::Path;

use num_complex::Complex;
use ontic_core::ontology::{load_model, Coverage, Experiment, LoadedModel, PauliAxis};
use ontic_core::qstate::BlochVector;
use ontic_core::zoo::{ks_model, psi_ontic_4, ray_from_direction, spekkens_model};
use ontic_core::{OntologicalModel, QSqrt3, QuadratureOrder, Ray, Real};
use rand::Rng;

use crate::CliError;

pub const BUILT_INS: [&str; 3] = ["ks", "spekkens", "psi-ontic-4"];

/// Built-in name first, then a definition file path.
pub fn resolve(name: &str, order: Option<QuadratureOrder>) -> Result<LoadedModel, CliError> {
    match name {
        "ks" => Ok(LoadedModel::Float(ks_model(order.unwrap_or_default())?)),
        "spekkens" => Ok(LoadedModel::Exact(spekkens_model())),
        "psi-ontic-4" => Ok(LoadedModel::Exact(psi_ontic_4().renamed("psi-ontic-4"))),
        path if Path::new(path).is_file() => load_model(Path::new(path), order).map_err(|e| {
            CliError::Definition {
                path: path.to_string(),
                source: e,
            }
        }),
        other => Err(CliError::UnknownModel(other.to_string())),
    }
}

/// Scalar backends the commands run on.
pub trait Backend: Real {
    const NAME: &'static str;

    fn parse_scalar(s: &str) -> Option<Self>;

    /// A random qubit ray from an area-uniform Bloch direction.
    fn random_ray<G: Rng + ?Sized>(rng: &mut G) -> Ray<Self>;

    fn default_tolerance() -> Self;
}

impl Backend for f64 {
    const NAME: &'static str = "float";

    fn parse_scalar(s: &str) -> Option<Self> {
        match s.split_once('/') {
            Some((n, d)) => {
                let (n, d): (f64, f64) = (n.trim().parse().ok()?, d.trim().parse().ok()?);
                (d != 0.0).then_some(n / d)
            }
            None => s.trim().parse().ok(),
        }
        .filter(|v: &f64| v.is_finite())
    }

    fn random_ray<G: Rng + ?Sized>(rng: &mut G) -> Ray<Self> {
        ray_from_direction(BlochVector::random_unit(rng).as_array()).expect("unit direction")
    }

    fn default_tolerance() -> Self {
        1e-6
    }
}

/// Stereographic coordinates are kept to this many fractional bits, so exact
/// random rays sit within about 1e-5 of the sampled direction.
const STEREO_SCALE: i64 = 1 << 16;

impl Backend for QSqrt3 {
    const NAME: &'static str = "exact";

    /// Exact forms (`1/10`, `1/2*sqrt3`) and plain decimals (`0.1`).
    fn parse_scalar(s: &str) -> Option<Self> {
        if let Ok(v) = s.trim().parse() {
            return Some(v);
        }
        let (whole, frac) = s.trim().split_once('.')?;
        if frac.is_empty() || frac.len() > 15 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = whole.starts_with('-');
        let whole: i64 = match whole.trim_start_matches(['-', '+']) {
            "" => 0,
            w => w.parse().ok()?,
        };
        let den = 10i64.checked_pow(frac.len() as u32)?;
        let num = whole.checked_mul(den)?.checked_add(frac.parse::<i64>().ok()?)?;
        Some(QSqrt3::ratio(if negative { -num } else { num }, den))
    }

    /// `(1, u + iv)` where `(u, v)` is the stereographic image of the
    /// direction rounded to a dyadic grid; the ray is exact and rational.
    fn random_ray<G: Rng + ?Sized>(rng: &mut G) -> Ray<Self> {
        let b = BlochVector::random_unit(rng);
        let lift = 1.0 + b.z;
        if lift < 1e-9 {
            return PauliAxis::Z.eigenray(false);
        }
        let round = |x: f64| QSqrt3::ratio((x / lift * STEREO_SCALE as f64).round() as i64, STEREO_SCALE);
        Ray::new(vec![
            Complex::new(QSqrt3::ratio(1, 1), QSqrt3::ratio(0, 1)),
            Complex::new(round(b.x), round(b.y)),
        ])
        .expect("first component is nonzero")
    }

    fn default_tolerance() -> Self {
        QSqrt3::ratio(0, 1)
    }
}

pub fn scalar<R: Backend>(flag: &str, value: &str) -> Result<R, CliError> {
    R::parse_scalar(value).ok_or_else(|| CliError::BadValue {
        flag: flag.to_string(),
        value: value.to_string(),
        backend: R::NAME,
    })
}

pub fn tolerance<R: Backend>(tol: Option<&str>) -> Result<R, CliError> {
    tol.map_or_else(|| Ok(R::default_tolerance()), |t| scalar("--tol", t))
}

/// The three Pauli tests, then `random` projective tests when the model
/// answers arbitrary two-outcome experiments. Tests the model does not
/// answer are returned separately by name.
pub fn battery<R: Backend, G: Rng + ?Sized>(
    model: &OntologicalModel<R>,
    random: usize,
    rng: &mut G,
) -> (Vec<Experiment<R>>, Vec<String>) {
    let mut tests: Vec<Experiment<R>> = PauliAxis::ALL.iter().map(|a| Experiment::pauli(*a)).collect();
    if !matches!(model.coverage(), Coverage::Listed(_)) {
        tests.extend((0..random).map(|_| Experiment::projective(&R::random_ray(rng))));
    }
    let (answered, skipped): (Vec<_>, Vec<_>) =
        tests.into_iter().partition(|x| model.responses(x).is_ok());
    (answered, skipped.into_iter().map(|x| x.name().to_string()).collect())
}
