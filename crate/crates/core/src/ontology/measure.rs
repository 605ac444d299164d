use std::sync::Arc;

use super::space::{NodeSet, OnticSpace};
use crate::error::{Error, Result};
use crate::field::Real;
use crate::qstate::{check_unit_interval, DensityMatrix};

/// A nonnegative measure on an ontic space, given by a density per node:
/// the mass of node `i` is `density[i] · weight[i]`.
///
/// A measure may carry the density matrix its preparation is associated
/// with; mixtures combine those linearly.
#[derive(Clone, Debug)]
pub struct EpistemicMeasure<R> {
    space: Arc<OnticSpace<R>>,
    density: Vec<R>,
    state: Option<DensityMatrix<R>>,
}

impl<R: Real> EpistemicMeasure<R> {
    pub fn new(space: Arc<OnticSpace<R>>, density: Vec<R>) -> Result<Self> {
        if density.len() != space.len() {
            return Err(Error::LengthMismatch {
                expected: space.len(),
                got: density.len(),
            });
        }
        if let Some(i) = density.iter().position(|d| *d < R::zero()) {
            return Err(Error::NegativeDensity(i));
        }
        let measure = Self {
            space,
            density,
            state: None,
        };
        if measure.total_mass().is_zero() {
            return Err(Error::ZeroMass);
        }
        Ok(measure)
    }

    /// Unit mass on one node.
    pub fn point_mass(space: Arc<OnticSpace<R>>, node: usize) -> Result<Self> {
        let w = space.weights()[node].clone();
        if w.is_zero() {
            return Err(Error::ZeroMass);
        }
        let mut density = vec![R::zero(); space.len()];
        density[node] = R::one() / w;
        Self::new(space, density)
    }

    /// Uniform probability over a node subset.
    pub fn uniform_on(space: Arc<OnticSpace<R>>, nodes: &[usize]) -> Result<Self> {
        let mass: R = nodes
            .iter()
            .fold(R::zero(), |acc, &i| acc + space.weights()[i].clone());
        if mass.is_zero() {
            return Err(Error::ZeroMass);
        }
        let mut density = vec![R::zero(); space.len()];
        for &i in nodes {
            density[i] = R::one() / mass.clone();
        }
        Self::new(space, density)
    }

    pub fn with_state(mut self, state: DensityMatrix<R>) -> Self {
        self.state = Some(state);
        self
    }

    pub fn space(&self) -> &Arc<OnticSpace<R>> {
        &self.space
    }

    pub fn density(&self) -> &[R] {
        &self.density
    }

    pub fn state(&self) -> Option<&DensityMatrix<R>> {
        self.state.as_ref()
    }

    pub fn node_mass(&self, node: usize) -> R {
        self.density[node].clone() * self.space.weights()[node].clone()
    }

    pub fn total_mass(&self) -> R {
        (0..self.density.len()).fold(R::zero(), |acc, i| acc + self.node_mass(i))
    }

    /// `ρ(B)` for a node subset `B`.
    pub fn mass_on(&self, set: &NodeSet) -> R {
        (0..self.density.len())
            .filter(|&i| set.contains(i))
            .fold(R::zero(), |acc, i| acc + self.node_mass(i))
    }

    pub fn is_probability(&self, tol: &R) -> bool {
        (self.total_mass() - R::one()).magnitude() <= *tol
    }

    /// The set of nodes carrying positive mass.
    pub fn support(&self) -> NodeSet {
        NodeSet::new(
            (0..self.density.len())
                .map(|i| self.node_mass(i) > R::zero())
                .collect(),
        )
    }

    pub fn same_space(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.space, &other.space) || self.space == other.space
    }

    fn check_space(&self, other: &Self) -> Result<()> {
        if self.same_space(other) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// The (unnormalized) sum `ρa + ρb`; carries no density matrix.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        Self::new(
            self.space.clone(),
            self.density
                .iter()
                .zip(&other.density)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }

    pub fn scaled(&self, factor: &R) -> Result<Self> {
        Self::new(
            self.space.clone(),
            self.density.iter().map(|d| d.clone() * factor.clone()).collect(),
        )
    }

    /// Restriction `B ↦ ρ(B ∩ S)`.
    pub fn restricted(&self, set: &NodeSet) -> Vec<R> {
        self.density
            .iter()
            .enumerate()
            .map(|(i, d)| if set.contains(i) { d.clone() } else { R::zero() })
            .collect()
    }

    /// Largest per-node mass difference.
    pub fn max_mass_deviation(&self, other: &Self) -> Result<R> {
        self.check_space(other)?;
        Ok(crate::field::max_of(
            (0..self.density.len()).map(|i| (self.node_mass(i) - other.node_mass(i)).magnitude()),
        ))
    }
}

/// `s·ρa + (1 − s)·ρb`.
pub fn mix<R: Real>(
    s: &R,
    a: &EpistemicMeasure<R>,
    b: &EpistemicMeasure<R>,
) -> Result<EpistemicMeasure<R>> {
    check_unit_interval(s)?;
    a.check_space(b)?;
    let t = R::one() - s.clone();
    let density = a
        .density
        .iter()
        .zip(&b.density)
        .map(|(x, y)| s.clone() * x.clone() + t.clone() * y.clone())
        .collect();
    let mut m = EpistemicMeasure::new(a.space.clone(), density)?;
    if let (Some(da), Some(db)) = (&a.state, &b.state) {
        m.state = Some(DensityMatrix::mix(s, da, db)?);
    }
    Ok(m)
}

/// `½ Σ weight·|density_a − density_b|`.
pub fn total_variation<R: Real>(a: &EpistemicMeasure<R>, b: &EpistemicMeasure<R>) -> Result<R> {
    a.check_space(b)?;
    let sum = (0..a.density.len()).fold(R::zero(), |acc, i| {
        acc + (a.node_mass(i) - b.node_mass(i)).magnitude()
    });
    Ok(sum / R::from_ratio(2, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::QSqrt3;

    fn space() -> Arc<OnticSpace<QSqrt3>> {
        Arc::new(OnticSpace::finite((1..=4).map(|i| i.to_string()).collect()).unwrap())
    }

    #[test]
    fn mix_examples() {
        let s = space();
        let a = EpistemicMeasure::point_mass(s.clone(), 0).unwrap();
        let b = EpistemicMeasure::point_mass(s.clone(), 1).unwrap();
        let one = mix(&QSqrt3::ratio(1, 1), &a, &b).unwrap();
        assert_eq!(one.density(), a.density());
        let half = mix(&QSqrt3::ratio(1, 2), &a, &b).unwrap();
        assert_eq!(half.node_mass(0), QSqrt3::ratio(1, 2));
        assert_eq!(half.node_mass(1), QSqrt3::ratio(1, 2));
        assert!(matches!(
            mix(&QSqrt3::ratio(3, 2), &a, &b),
            Err(Error::MixingWeight(_))
        ));
    }

    #[test]
    fn total_variation_examples() {
        let s = space();
        let a = EpistemicMeasure::uniform_on(s.clone(), &[0, 1]).unwrap();
        let b = EpistemicMeasure::uniform_on(s.clone(), &[2, 3]).unwrap();
        assert_eq!(total_variation(&a, &a).unwrap(), QSqrt3::ratio(0, 1));
        assert_eq!(total_variation(&a, &b).unwrap(), QSqrt3::ratio(1, 1));
        let other = Arc::new(OnticSpace::finite(vec!["x".into()]).unwrap());
        let c = EpistemicMeasure::point_mass(other, 0).unwrap();
        assert!(matches!(total_variation(&a, &c), Err(Error::SpaceMismatch)));
    }

    #[test]
    fn zero_mass_rejected() {
        let s = space();
        assert!(matches!(
            EpistemicMeasure::new(s, vec![QSqrt3::ratio(0, 1); 4]),
            Err(Error::ZeroMass)
        ));
    }
}
