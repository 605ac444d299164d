//! Finite-dimensional quantum objects: operators, density matrices, effects,
//! POVMs and rays, generic over the scalar backend.

mod bloch;
pub(crate) mod spectral;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{complex_deviation, max_of, Real};

pub use bloch::{bloch_to_ray, ray_to_bloch, BlochVector};
pub use spectral::hermitian_eigen;

/// A square complex matrix, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator<R> {
    dim: usize,
    entries: Vec<Complex<R>>,
}

impl<R: Real> Operator<R> {
    pub fn new(dim: usize, entries: Vec<Complex<R>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        if entries.len() != dim * dim {
            return Err(Error::NotSquare {
                dim,
                len: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Complex<R>>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::NotSquare {
                dim,
                len: rows.iter().map(Vec::len).sum(),
            });
        }
        Self::new(dim, rows.into_iter().flatten().collect())
    }

    /// Real-entry convenience constructor.
    pub fn from_real_rows(rows: &[&[R]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|x| Complex::new(x.clone(), R::zero())).collect())
                .collect(),
        )
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut op = Self::zero(dim);
        for i in 0..dim {
            op.entries[i * dim + i] = Complex::one();
        }
        op
    }

    /// `|v⟩⟨v|` for an unnormalized vector.
    pub fn outer(v: &[Complex<R>]) -> Self {
        let dim = v.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for a in v {
            for b in v {
                entries.push(a.clone() * b.conj());
            }
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> &Complex<R> {
        &self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex<R>] {
        &self.entries
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(self.entry(j, i).conj());
            }
        }
        Self { dim: n, entries }
    }

    pub fn trace(&self) -> Complex<R> {
        (0..self.dim).fold(Complex::zero(), |acc, i| acc + self.entry(i, i).clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        })
    }

    pub fn scale(&self, s: &R) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a.scale(s.clone())).collect(),
        }
    }

    /// `s·a + (1 − s)·b`.
    pub fn convex(s: &R, a: &Self, b: &Self) -> Result<Self> {
        a.scale(s).add(&b.scale(&(R::one() - s.clone())))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex::zero();
                for k in 0..n {
                    acc = acc + self.entry(i, k).clone() * other.entry(k, j).clone();
                }
                entries.push(acc);
            }
        }
        Ok(Self { dim: n, entries })
    }

    /// `tr(A·B)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Result<Complex<R>> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut acc = Complex::zero();
        for i in 0..n {
            for k in 0..n {
                acc = acc + self.entry(i, k).clone() * other.entry(k, i).clone();
            }
        }
        Ok(acc)
    }

    /// Largest entrywise deviation, measured as `max(|Δre|, |Δim|)`.
    pub fn max_deviation(&self, other: &Self) -> Result<R> {
        self.check_dim(other)?;
        Ok(max_of(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| complex_deviation(a, b)),
        ))
    }

    pub fn hermitian_defect(&self) -> R {
        let adj = self.adjoint();
        self.max_deviation(&adj).expect("same dimension")
    }

    pub fn is_hermitian(&self, tol: &R) -> bool {
        self.hermitian_defect() <= *tol
    }

    /// Converts entries to another backend through `f64` or exact embedding.
    pub fn map<S: Real>(&self, f: impl Fn(&R) -> S) -> Operator<S> {
        Operator {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|c| Complex::new(f(&c.re), f(&c.im)))
                .collect(),
        }
    }
}

/// A hermitian, unit-trace, positive semidefinite operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<R>(Operator<R>);

impl<R: Real> DensityMatrix<R> {
    pub fn new(op: Operator<R>) -> Result<Self> {
        Self::with_tolerance(op, &R::tolerance())
    }

    pub fn with_tolerance(op: Operator<R>, tol: &R) -> Result<Self> {
        let defect = op.hermitian_defect();
        if defect > *tol {
            return Err(Error::NotHermitian(defect.to_f64()));
        }
        let tr = op.trace();
        let trace_err = (tr.re.clone() - R::one()).magnitude();
        if trace_err > *tol || tr.im.magnitude() > *tol {
            return Err(Error::InvalidTrace(tr.re.to_f64()));
        }
        if let Some(neg) = R::psd_defect(&op, tol) {
            return Err(Error::NotPositive(neg.to_f64()));
        }
        Ok(Self(op))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(Operator::identity(dim).scale(&R::from_ratio(1, dim as i64)))
    }

    pub fn pure(ray: &Ray<R>) -> Self {
        Self(ray.projector())
    }

    /// `s·a + (1 − s)·b`; `s` must lie in `[0, 1]`.
    pub fn mix(s: &R, a: &Self, b: &Self) -> Result<Self> {
        check_unit_interval(s)?;
        Ok(Self(Operator::convex(s, &a.0, &b.0)?))
    }

    pub fn operator(&self) -> &Operator<R> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }
}

pub(crate) fn check_unit_interval<R: Real>(s: &R) -> Result<()> {
    if *s < R::zero() || *s > R::one() {
        return Err(Error::MixingWeight(s.to_f64()));
    }
    Ok(())
}

/// A hermitian operator with spectrum in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Effect<R>(Operator<R>);

impl<R: Real> Effect<R> {
    pub fn new(op: Operator<R>) -> Result<Self> {
        match effect_violation(&op, &R::tolerance()) {
            None => Ok(Self(op)),
            Some(EffectViolation::NotHermitian(d)) => Err(Error::NotHermitian(d.to_f64())),
            Some(EffectViolation::Negative(d)) => Err(Error::NotPositive(d.to_f64())),
            Some(EffectViolation::AboveIdentity(d)) => Err(Error::AboveIdentity(d.to_f64())),
        }
    }

    pub fn operator(&self) -> &Operator<R> {
        &self.0
    }

    pub fn identity(dim: usize) -> Self {
        Self(Operator::identity(dim))
    }
}

enum EffectViolation<R> {
    NotHermitian(R),
    Negative(R),
    AboveIdentity(R),
}

fn effect_violation<R: Real>(op: &Operator<R>, tol: &R) -> Option<EffectViolation<R>> {
    let defect = op.hermitian_defect();
    if defect > *tol {
        return Some(EffectViolation::NotHermitian(defect));
    }
    if let Some(neg) = R::psd_defect(op, tol) {
        return Some(EffectViolation::Negative(neg));
    }
    let complement = Operator::identity(op.dim).sub(op).expect("same dimension");
    R::psd_defect(&complement, tol).map(EffectViolation::AboveIdentity)
}

/// The first condition a candidate POVM violates.
#[derive(Clone, Debug, PartialEq)]
pub enum PovmViolation {
    Empty,
    LabelCount { labels: usize, effects: usize },
    DuplicateLabel(f64),
    DimensionMismatch { index: usize, dim: usize, expected: usize },
    NotHermitian { index: usize, defect: f64 },
    NotPositive { index: usize, eigenvalue: f64 },
    AboveIdentity { index: usize, excess: f64 },
    SumNotIdentity { deviation: f64 },
}

impl std::fmt::Display for PovmViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Empty => write!(f, "no outcomes"),
            Self::LabelCount { labels, effects } => {
                write!(f, "{labels} labels for {effects} effects")
            }
            Self::DuplicateLabel(l) => write!(f, "duplicate outcome label {l}"),
            Self::DimensionMismatch {
                index,
                dim,
                expected,
            } => write!(f, "effect {index} has dimension {dim}, expected {expected}"),
            Self::NotHermitian { index, defect } => {
                write!(f, "effect {index} is not hermitian (defect {defect:e})")
            }
            Self::NotPositive { index, eigenvalue } => {
                write!(f, "effect {index} is not positive ({eigenvalue:e})")
            }
            Self::AboveIdentity { index, excess } => {
                write!(f, "effect {index} exceeds the identity ({excess:e})")
            }
            Self::SumNotIdentity { deviation } => {
                write!(f, "effects sum to identity only within {deviation:e}")
            }
        }
    }
}

/// Validity report for a candidate POVM.
#[derive(Clone, Debug, PartialEq)]
pub struct PovmReport {
    pub violation: Option<PovmViolation>,
}

impl PovmReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks labels, effect validity, and the completeness relation, stopping at
/// the first violation.
pub fn validate_povm<R: Real>(labels: &[f64], operators: &[Operator<R>]) -> PovmReport {
    let violation = povm_violation(labels, operators, &R::tolerance());
    PovmReport { violation }
}

fn povm_violation<R: Real>(
    labels: &[f64],
    operators: &[Operator<R>],
    tol: &R,
) -> Option<PovmViolation> {
    if operators.is_empty() {
        return Some(PovmViolation::Empty);
    }
    if labels.len() != operators.len() {
        return Some(PovmViolation::LabelCount {
            labels: labels.len(),
            effects: operators.len(),
        });
    }
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Some(PovmViolation::DuplicateLabel(*l));
        }
    }
    let dim = operators[0].dim;
    let mut sum = Operator::zero(dim);
    for (index, op) in operators.iter().enumerate() {
        if op.dim != dim {
            return Some(PovmViolation::DimensionMismatch {
                index,
                dim: op.dim,
                expected: dim,
            });
        }
        match effect_violation(op, tol) {
            Some(EffectViolation::NotHermitian(d)) => {
                return Some(PovmViolation::NotHermitian {
                    index,
                    defect: d.to_f64(),
                })
            }
            Some(EffectViolation::Negative(d)) => {
                return Some(PovmViolation::NotPositive {
                    index,
                    eigenvalue: d.to_f64(),
                })
            }
            Some(EffectViolation::AboveIdentity(d)) => {
                return Some(PovmViolation::AboveIdentity {
                    index,
                    excess: d.to_f64(),
                })
            }
            None => {}
        }
        sum = sum.add(op).expect("dimension checked");
    }
    let deviation = sum
        .max_deviation(&Operator::identity(dim))
        .expect("dimension checked");
    (deviation > *tol).then(|| PovmViolation::SumNotIdentity {
        deviation: deviation.to_f64(),
    })
}

/// A POVM with a finite set of real outcome labels.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm<R> {
    labels: Vec<f64>,
    effects: Vec<Effect<R>>,
}

impl<R: Real> Povm<R> {
    pub fn new(labels: Vec<f64>, operators: Vec<Operator<R>>) -> Result<Self> {
        if let Some(v) = validate_povm(&labels, &operators).violation {
            return Err(Error::InvalidPovm(v));
        }
        Ok(Self {
            labels,
            effects: operators.into_iter().map(Effect).collect(),
        })
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn effects(&self) -> &[Effect<R>] {
        &self.effects
    }

    pub fn dim(&self) -> usize {
        self.effects[0].0.dim
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// A one-dimensional subspace, represented by any nonzero vector in it.
///
/// Float rays are normalized on construction. Exact rays keep the given
/// vector and divide by its squared norm wherever a unit vector is implied,
/// so `span(1, 1)` has the exact projector `[[1/2, 1/2], [1/2, 1/2]]`.
#[derive(Clone, Debug)]
pub struct Ray<R> {
    vector: Vec<Complex<R>>,
    norm_sqr: R,
}

impl<R: Real> Ray<R> {
    pub fn new(vector: Vec<Complex<R>>) -> Result<Self> {
        if vector.is_empty() {
            return Err(Error::EmptyDimension);
        }
        let norm_sqr = vector
            .iter()
            .fold(R::zero(), |acc, c| acc + c.norm_sqr());
        if norm_sqr.is_zero() {
            return Err(Error::ZeroVector);
        }
        match norm_sqr.try_sqrt() {
            Some(norm) => Ok(Self {
                vector: vector.into_iter().map(|c| c.unscale(norm.clone())).collect(),
                norm_sqr: R::one(),
            }),
            None => Ok(Self { vector, norm_sqr }),
        }
    }

    pub fn from_real(components: &[R]) -> Result<Self> {
        Self::new(
            components
                .iter()
                .map(|x| Complex::new(x.clone(), R::zero()))
                .collect(),
        )
    }

    /// The `k`-th computational basis ray.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = vec![Complex::zero(); dim];
        v[k] = Complex::one();
        Self::new(v).expect("nonzero basis vector")
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }

    pub fn vector(&self) -> &[Complex<R>] {
        &self.vector
    }

    pub fn norm_sqr(&self) -> &R {
        &self.norm_sqr
    }

    /// `⟨self|other⟩` of the stored representatives.
    pub fn inner(&self, other: &Self) -> Result<Complex<R>> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(self
            .vector
            .iter()
            .zip(&other.vector)
            .fold(Complex::zero(), |acc, (a, b)| acc + a.conj() * b.clone()))
    }

    /// `P_g = |ψ⟩⟨ψ|` for a unit vector ψ in the ray.
    pub fn projector(&self) -> Operator<R> {
        Operator::outer(&self.vector).scale(&(R::one() / self.norm_sqr.clone()))
    }

    /// `tr(P_g P_h) = |⟨g|h⟩|²` for unit representatives.
    pub fn overlap(&self, other: &Self) -> Result<R> {
        let ip = self.inner(other)?;
        Ok(ip.norm_sqr() / (self.norm_sqr.clone() * other.norm_sqr.clone()))
    }

    /// Phase-invariant equality: `|⟨g|h⟩|² ≥ 1 − tol`.
    pub fn same_ray(&self, other: &Self, tol: &R) -> bool {
        match self.overlap(other) {
            Ok(o) => o >= R::one() - tol.clone(),
            Err(_) => false,
        }
    }

    /// The orthogonal ray of a qubit ray: `(a, b) ↦ (−b̄, ā)`.
    pub fn perp(&self) -> Result<Self> {
        if self.dim() != 2 {
            return Err(Error::QubitOnly(self.dim()));
        }
        let (a, b) = (&self.vector[0], &self.vector[1]);
        Ok(Self {
            vector: vec![-b.conj(), a.conj()],
            norm_sqr: self.norm_sqr.clone(),
        })
    }

    pub fn map<S: Real>(&self, f: impl Fn(&R) -> S) -> Result<Ray<S>> {
        Ray::new(
            self.vector
                .iter()
                .map(|c| Complex::new(f(&c.re), f(&c.im)))
                .collect(),
        )
    }
}

/// `tr(P_g P_h)` for two rays of equal dimension.
pub fn overlap<R: Real>(g: &Ray<R>, h: &Ray<R>) -> Result<R> {
    g.overlap(h)
}

/// Born-rule probability `tr(D·E)`.
pub fn born<R: Real>(state: &DensityMatrix<R>, effect: &Effect<R>) -> Result<R> {
    Ok(state.0.trace_product(&effect.0)?.re)
}

/// Clamps a Born probability into `[0, 1]` for reporting.
pub fn clamp_probability<R: Real>(p: R) -> R {
    if p < R::zero() {
        R::zero()
    } else if p > R::one() {
        R::one()
    } else {
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::QSqrt3;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> QSqrt3 {
        QSqrt3::ratio(n, d)
    }

    fn trine() -> [Ray<QSqrt3>; 3] {
        let half = q(1, 2);
        let s = QSqrt3::new(BigRational::zero(), BigRational::new(1.into(), 2.into()));
        [
            Ray::from_real(&[q(1, 1), q(0, 1)]).unwrap(),
            Ray::from_real(&[half.clone(), s.clone()]).unwrap(),
            Ray::from_real(&[half, -s]).unwrap(),
        ]
    }

    #[test]
    fn projector_examples() {
        let p = Ray::<QSqrt3>::basis(2, 0).projector();
        assert_eq!(
            p,
            Operator::from_real_rows(&[&[q(1, 1), q(0, 1)], &[q(0, 1), q(0, 1)]]).unwrap()
        );
        let diag = Ray::from_real(&[q(1, 1), q(1, 1)]).unwrap().projector();
        let half = q(1, 2);
        assert_eq!(
            diag,
            Operator::from_real_rows(&[&[half.clone(), half.clone()], &[half.clone(), half]])
                .unwrap()
        );
        let alpha = 0.7f64;
        let phased = Ray::new(vec![Complex::new(alpha.cos(), alpha.sin()), Complex::zero()])
            .unwrap()
            .projector();
        assert!(phased.max_deviation(&Ray::<f64>::basis(2, 0).projector()).unwrap() < 1e-15);
    }

    #[test]
    fn trine_overlaps_are_one_quarter() {
        let rays = trine();
        for i in 0..3 {
            assert_eq!(rays[i].overlap(&rays[i]).unwrap(), q(1, 1));
            for j in 0..3 {
                if i != j {
                    assert_eq!(rays[i].overlap(&rays[j]).unwrap(), q(1, 4));
                }
            }
        }
        let perp = rays[1].perp().unwrap();
        assert_eq!(rays[1].overlap(&perp).unwrap(), q(0, 1));
    }

    #[test]
    fn born_examples() {
        let rays = trine();
        let mixed = DensityMatrix::<QSqrt3>::maximally_mixed(2);
        let e = Effect::new(rays[1].projector()).unwrap();
        assert_eq!(born(&mixed, &e).unwrap(), q(1, 2));
        let d = DensityMatrix::pure(&rays[0]);
        assert_eq!(born(&d, &e).unwrap(), q(1, 4));
        assert_eq!(born(&d, &Effect::identity(2)).unwrap(), q(1, 1));
    }

    #[test]
    fn overlap_dimension_mismatch() {
        let a = Ray::<f64>::basis(2, 0);
        let b = Ray::<f64>::basis(3, 0);
        assert!(matches!(a.overlap(&b), Err(Error::DimensionMismatch(2, 3))));
    }

    #[test]
    fn povm_validation() {
        let g = Ray::from_real(&[q(1, 1), q(1, 1)]).unwrap();
        let ok = validate_povm(&[1.0, 0.0], &[g.projector(), g.perp().unwrap().projector()]);
        assert!(ok.is_valid());
        let bad = validate_povm(&[1.0, 0.0], &[g.projector(), g.projector()]);
        assert!(matches!(
            bad.violation,
            Some(PovmViolation::SumNotIdentity { deviation }) if (deviation - 1.0).abs() < 1e-12
        ));
        let id = Operator::<QSqrt3>::identity(2);
        let trivial = validate_povm(&[0.0, 1.0], &[id.scale(&q(1, 3)), id.scale(&q(2, 3))]);
        assert!(trivial.is_valid());
        let dup = validate_povm(&[1.0, 1.0], &[id.scale(&q(1, 3)), id.scale(&q(2, 3))]);
        assert_eq!(dup.violation, Some(PovmViolation::DuplicateLabel(1.0)));
        let neg = validate_povm(&[0.0, 1.0], &[id.scale(&q(-1, 3)), id.scale(&q(4, 3))]);
        assert!(matches!(
            neg.violation,
            Some(PovmViolation::NotPositive { index: 0, .. })
        ));
        let above = validate_povm(&[0.0], &[id.scale(&q(3, 2))]);
        assert!(matches!(
            above.violation,
            Some(PovmViolation::AboveIdentity { index: 0, .. })
        ));
    }

    #[test]
    fn density_matrix_validation() {
        let op = Operator::from_real_rows(&[&[q(1, 1), q(1, 1)], &[q(1, 1), q(0, 1)]]).unwrap();
        assert!(matches!(DensityMatrix::new(op), Err(Error::NotPositive(_))));
        let op = Operator::from_real_rows(&[&[q(1, 1), q(0, 1)], &[q(0, 1), q(1, 1)]]).unwrap();
        assert!(matches!(DensityMatrix::new(op), Err(Error::InvalidTrace(_))));
        let op = Operator::from_real_rows(&[&[q(1, 2), q(1, 4)], &[q(0, 1), q(1, 2)]]).unwrap();
        assert!(matches!(DensityMatrix::new(op), Err(Error::NotHermitian(_))));
    }
}
