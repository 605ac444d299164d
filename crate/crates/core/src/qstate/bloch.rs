use num_complex::Complex;
use rand::Rng;
use serde::Serialize;

use super::Ray;
use crate::error::{Error, Result};
use crate::field::{Real, FLOAT_TOLERANCE};

/// A point in the Bloch ball. Convention: `span(1, 0)` is the north pole
/// `(0, 0, 1)`; components are the expectations of σx, σy, σz.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlochVector<R> {
    pub x: R,
    pub y: R,
    pub z: R,
}

impl<R: Real> BlochVector<R> {
    pub fn new(x: R, y: R, z: R) -> Self {
        Self { x, y, z }
    }

    pub fn dot(&self, other: &Self) -> R {
        self.x.clone() * other.x.clone()
            + self.y.clone() * other.y.clone()
            + self.z.clone() * other.z.clone()
    }

    pub fn norm_sqr(&self) -> R {
        self.dot(self)
    }

    pub fn to_f64(&self) -> BlochVector<f64> {
        BlochVector::new(self.x.to_f64(), self.y.to_f64(), self.z.to_f64())
    }
}

impl BlochVector<f64> {
    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Area-uniform sample on the unit sphere.
    pub fn random_unit<G: Rng + ?Sized>(rng: &mut G) -> Self {
        let z: f64 = rng.random_range(-1.0..=1.0);
        let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let s = (1.0 - z * z).max(0.0).sqrt();
        Self::new(s * phi.cos(), s * phi.sin(), z)
    }
}

/// Bloch vector of a qubit ray.
pub fn ray_to_bloch<R: Real>(g: &Ray<R>) -> Result<BlochVector<R>> {
    if g.dim() != 2 {
        return Err(Error::QubitOnly(g.dim()));
    }
    let v = g.vector();
    let n = g.norm_sqr().clone();
    let cross: Complex<R> = v[0].conj() * v[1].clone();
    let two = R::from_ratio(2, 1);
    Ok(BlochVector::new(
        two.clone() * cross.re / n.clone(),
        two * cross.im / n.clone(),
        (v[0].norm_sqr() - v[1].norm_sqr()) / n,
    ))
}

/// The qubit ray with unit Bloch vector `b`.
pub fn bloch_to_ray(b: &BlochVector<f64>) -> Result<Ray<f64>> {
    let norm = b.norm_sqr().sqrt();
    if (norm - 1.0).abs() > FLOAT_TOLERANCE {
        return Err(Error::NotUnitBloch(norm));
    }
    let theta = b.z.clamp(-1.0, 1.0).acos();
    let phi = b.y.atan2(b.x);
    Ray::new(vec![
        Complex::new((theta / 2.0).cos(), 0.0),
        Complex::from_polar((theta / 2.0).sin(), phi),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::QSqrt3;
    use num_rational::BigRational;
    use num_traits::Zero;
    use rand::SeedableRng;

    #[test]
    fn north_pole_convention() {
        let b = ray_to_bloch(&Ray::<f64>::basis(2, 0)).unwrap();
        assert_eq!(b, BlochVector::new(0.0, 0.0, 1.0));
    }

    #[test]
    fn trine_ray_bloch_vector() {
        // span(1/2, √3/2): ⟨σx⟩ = √3/2, ⟨σy⟩ = 0, ⟨σz⟩ = 1/4 − 3/4
        let half_sqrt3 = QSqrt3::new(BigRational::zero(), BigRational::new(1.into(), 2.into()));
        let g = Ray::from_real(&[QSqrt3::ratio(1, 2), half_sqrt3.clone()]).unwrap();
        let b = ray_to_bloch(&g).unwrap();
        assert_eq!(b, BlochVector::new(half_sqrt3, QSqrt3::zero(), QSqrt3::ratio(-1, 2)));
    }

    #[test]
    fn round_trip_random_rays() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..100 {
            let b = BlochVector::random_unit(&mut rng);
            let g = bloch_to_ray(&b).unwrap();
            let back = ray_to_bloch(&g).unwrap();
            assert!((back.x - b.x).abs() < 1e-12);
            assert!((back.y - b.y).abs() < 1e-12);
            assert!((back.z - b.z).abs() < 1e-12);
            let again = bloch_to_ray(&back).unwrap();
            assert!(again.same_ray(&g, &1e-12));
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            bloch_to_ray(&BlochVector::new(0.5, 0.0, 0.0)),
            Err(Error::NotUnitBloch(_))
        ));
        assert!(matches!(
            ray_to_bloch(&Ray::<f64>::basis(3, 0)),
            Err(Error::QubitOnly(3))
        ));
    }
}
