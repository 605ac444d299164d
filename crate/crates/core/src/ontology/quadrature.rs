//! Product quadrature on S²: Gauss–Legendre in cos θ times the uniform
//! (midpoint) rule in φ.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use super::space::{OnticSpace, SpaceKind};
use crate::error::{Error, Result};

/// Nodes closer than this to a guarded great circle are jittered.
const BOUNDARY_GAP: f64 = 1e-12;
const JITTER: f64 = 1e-7;

/// Number of nodes in cos θ and in φ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadratureOrder {
    pub theta: usize,
    pub phi: usize,
}

impl Default for QuadratureOrder {
    fn default() -> Self {
        Self { theta: 64, phi: 128 }
    }
}

impl fmt::Display for QuadratureOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.theta, self.phi)
    }
}

impl FromStr for QuadratureOrder {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Definition {
            line: None,
            message: format!("quadrature order {s:?} is not of the form <theta>x<phi>"),
        };
        let (t, p) = s.split_once(['x', 'X']).ok_or_else(bad)?;
        let theta: usize = t.trim().parse().map_err(|_| bad())?;
        let phi: usize = p.trim().parse().map_err(|_| bad())?;
        if theta == 0 || phi == 0 {
            return Err(bad());
        }
        Ok(Self { theta, phi })
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn sphere_point(cos_theta: f64, phi: f64) -> [f64; 3] {
    let s = (1.0 - cos_theta * cos_theta).max(0.0).sqrt();
    [s * phi.cos(), s * phi.sin(), cos_theta]
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Builds the product mesh as an ontic space with sphere coordinates.
///
/// Nodes within `1e-12` of a great circle `{λ : a·λ = 0}` for any `a` in
/// `guarded` are shifted by `1e-7` in cos θ and φ until clear, so that
/// deterministic responses to those tests never see a boundary node.
pub fn sphere_mesh(order: QuadratureOrder, guarded: &[[f64; 3]]) -> Result<OnticSpace<f64>> {
    let (cos_nodes, gl_weights) = gauss_legendre(order.theta);
    let dphi = TAU / order.phi as f64;
    let mut labels = Vec::with_capacity(order.theta * order.phi);
    let mut weights = Vec::with_capacity(order.theta * order.phi);
    let mut points = Vec::with_capacity(order.theta * order.phi);
    for (k, (&c, &w)) in cos_nodes.iter().zip(&gl_weights).enumerate() {
        for j in 0..order.phi {
            let mut cos_theta = c;
            let mut phi = (j as f64 + 0.5) * dphi;
            let mut p = sphere_point(cos_theta, phi);
            let mut attempts = 0;
            while guarded.iter().any(|a| dot(a, &p).abs() < BOUNDARY_GAP) && attempts < 8 {
                cos_theta = (cos_theta + JITTER).clamp(-1.0, 1.0);
                phi += JITTER;
                p = sphere_point(cos_theta, phi);
                attempts += 1;
            }
            labels.push(format!("t{k}p{j}"));
            weights.push(w * dphi);
            points.push(p);
        }
    }
    OnticSpace::new(
        SpaceKind::SphereQuadrature {
            theta: order.theta,
            phi: order.phi,
        },
        labels,
        weights,
    )?
    .with_points(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_small_orders() {
        let (x, w) = gauss_legendre(2);
        let r = 1.0 / 3f64.sqrt();
        assert!((x[0] + r).abs() < 1e-15 && (x[1] - r).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-15 && (w[1] - 1.0).abs() < 1e-15);
        let (x, w) = gauss_legendre(3);
        assert_eq!(x[1], 0.0);
        assert!((w[1] - 8.0 / 9.0).abs() < 1e-14);
        assert!((x[2] - 0.6f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(64);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
        // exact up to degree 127
        for deg in [2usize, 10, 40, 126] {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
            assert!((q - 2.0 / (deg as f64 + 1.0)).abs() < 1e-13, "degree {deg}");
        }
    }

    #[test]
    fn mesh_area_and_guard() {
        let space = sphere_mesh(QuadratureOrder::default(), &[]).unwrap();
        assert_eq!(space.len(), 8192);
        let area: f64 = space.weights().iter().sum();
        assert!((area - 4.0 * PI).abs() < 1e-12);

        // odd theta order puts a ring on the equator
        let z = [0.0, 0.0, 1.0];
        let plain = sphere_mesh(QuadratureOrder { theta: 5, phi: 8 }, &[]).unwrap();
        assert!(plain.points().unwrap().iter().any(|p| dot(p, &z).abs() < 1e-12));
        let guarded = sphere_mesh(QuadratureOrder { theta: 5, phi: 8 }, &[z]).unwrap();
        assert!(guarded.points().unwrap().iter().all(|p| dot(p, &z).abs() >= 1e-12));
    }

    #[test]
    fn order_parsing() {
        assert_eq!(
            "64x128".parse::<QuadratureOrder>().unwrap(),
            QuadratureOrder::default()
        );
        assert!("64".parse::<QuadratureOrder>().is_err());
        assert!("0x3".parse::<QuadratureOrder>().is_err());
    }
}
