use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::field::Real;

/// What kind of ontic space a node list stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceKind {
    /// A genuinely finite set with unit weights.
    Finite,
    /// Quadrature mesh on the unit sphere S².
    SphereQuadrature { theta: usize, phi: usize },
    /// Nodes are qubit (or qudit) rays.
    Rays,
}

/// A finite node set standing for a measurable space; every subset of nodes
/// is measurable.
#[derive(Clone, Debug, PartialEq)]
pub struct OnticSpace<R> {
    kind: SpaceKind,
    labels: Vec<String>,
    weights: Vec<R>,
    points: Option<Vec<[f64; 3]>>,
}

impl<R: Real> OnticSpace<R> {
    pub fn new(kind: SpaceKind, labels: Vec<String>, weights: Vec<R>) -> Result<Self> {
        if labels.len() != weights.len() {
            return Err(Error::LengthMismatch {
                expected: labels.len(),
                got: weights.len(),
            });
        }
        let mut seen = HashSet::with_capacity(labels.len());
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateNode(l.clone()));
            }
        }
        if let Some(i) = weights.iter().position(|w| *w < R::zero()) {
            return Err(Error::NegativeWeight(i));
        }
        Ok(Self {
            kind,
            labels,
            weights,
            points: None,
        })
    }

    /// Finite space with unit weights.
    pub fn finite(labels: Vec<String>) -> Result<Self> {
        let n = labels.len();
        Self::new(SpaceKind::Finite, labels, vec![R::one(); n])
    }

    pub fn with_points(mut self, points: Vec<[f64; 3]>) -> Result<Self> {
        if points.len() != self.labels.len() {
            return Err(Error::LengthMismatch {
                expected: self.labels.len(),
                got: points.len(),
            });
        }
        self.points = Some(points);
        Ok(self)
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.kind
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weights(&self) -> &[R] {
        &self.weights
    }

    pub fn points(&self) -> Option<&[[f64; 3]]> {
        self.points.as_deref()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// A subset of the nodes of an ontic space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeSet {
    members: Vec<bool>,
}

impl NodeSet {
    pub fn new(members: Vec<bool>) -> Self {
        Self { members }
    }

    pub fn empty(len: usize) -> Self {
        Self::new(vec![false; len])
    }

    pub fn full(len: usize) -> Self {
        Self::new(vec![true; len])
    }

    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut members = vec![false; len];
        for &i in indices {
            members[i] = true;
        }
        Self::new(members)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, node: usize) -> bool {
        self.members[node]
    }

    pub fn members(&self) -> &[bool] {
        &self.members
    }

    pub fn count(&self) -> usize {
        self.members.iter().filter(|m| **m).count()
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..self.members.len()).filter(|&i| self.members[i]).collect()
    }

    pub fn intersect(&self, other: &Self) -> Self {
        Self::new(
            self.members
                .iter()
                .zip(&other.members)
                .map(|(a, b)| *a && *b)
                .collect(),
        )
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::new(
            self.members
                .iter()
                .zip(&other.members)
                .map(|(a, b)| *a || *b)
                .collect(),
        )
    }

    pub fn complement(&self) -> Self {
        Self::new(self.members.iter().map(|m| !m).collect())
    }
}
