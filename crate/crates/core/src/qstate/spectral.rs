//! Spectral checks. Qubit operators use the closed-form characteristic
//! polynomial; larger float operators go through nalgebra's hermitian
//! eigensolver. Exact operators are tested through principal minors.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex;
use num_traits::{One, Zero};

use super::{Operator, Ray};
use crate::field::{QSqrt3, Real, FLOAT_TOLERANCE};

/// Eigenvalues in ascending order with matching unit eigenvectors.
pub fn hermitian_eigen(op: &Operator<f64>) -> (Vec<f64>, Vec<Vec<Complex<f64>>>) {
    if op.dim() == 2 {
        return qubit_eigen(op);
    }
    let n = op.dim();
    let m = DMatrix::from_row_slice(n, n, op.entries());
    let eig = SymmetricEigen::new(m);
    let mut pairs: Vec<(f64, Vec<Complex<f64>>)> = (0..n)
        .map(|k| {
            let col = eig.eigenvectors.column(k);
            (eig.eigenvalues[k], col.iter().copied().collect())
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

fn qubit_eigen(op: &Operator<f64>) -> (Vec<f64>, Vec<Vec<Complex<f64>>>) {
    let a = op.entry(0, 0).re;
    let d = op.entry(1, 1).re;
    let b = *op.entry(0, 1);
    let mean = 0.5 * (a + d);
    let half_gap = 0.5 * (a - d);
    let r = (half_gap * half_gap + b.norm_sqr()).sqrt();
    let (lo, hi) = (mean - r, mean + r);
    let vector = |lambda: f64, upper: bool| -> Vec<Complex<f64>> {
        if b.norm() <= f64::EPSILON * (a.abs() + d.abs()).max(1.0) {
            if upper == (a >= d) {
                vec![Complex::one(), Complex::zero()]
            } else {
                vec![Complex::zero(), Complex::one()]
            }
        } else {
            let v = [b, Complex::new(lambda - a, 0.0)];
            let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            v.iter().map(|c| c / norm).collect()
        }
    };
    (vec![lo, hi], vec![vector(lo, false), vector(hi, true)])
}

pub(crate) fn min_eigenvalue(op: &Operator<f64>) -> f64 {
    hermitian_eigen(op).0[0]
}

/// Eigenray of the eigenvalue with the largest magnitude.
pub(crate) fn dominant_eigenray(delta: &Operator<f64>) -> Option<Ray<f64>> {
    let (values, vectors) = hermitian_eigen(delta);
    let (idx, v) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))?;
    if v.abs() <= FLOAT_TOLERANCE {
        return None;
    }
    Ray::new(vectors[idx].clone()).ok()
}

/// Determinant over ℚ(√3)(i) by Gaussian elimination.
fn determinant(mut m: Vec<Vec<Complex<QSqrt3>>>) -> Complex<QSqrt3> {
    let n = m.len();
    let mut det = Complex::<QSqrt3>::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Complex::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det = det * p.clone();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone() / p.clone();
            for c in col..n {
                let delta = factor.clone() * m[col][c].clone();
                m[r][c] = m[r][c].clone() - delta;
            }
        }
    }
    det
}

/// Smallest principal minor of a hermitian exact operator. The operator is
/// positive semidefinite iff this is nonnegative.
pub(crate) fn min_principal_minor(op: &Operator<QSqrt3>) -> QSqrt3 {
    let n = op.dim();
    if n == 2 {
        let a = op.entry(0, 0).re.clone();
        let d = op.entry(1, 1).re.clone();
        let det = a.clone() * d.clone() - op.entry(0, 1).norm_sqr();
        return [a, d, det].into_iter().min().expect("three minors");
    }
    assert!(n < 16, "exact positivity check limited to small dimensions");
    let mut worst: Option<QSqrt3> = None;
    for mask in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let sub = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| op.entry(i, j).clone()).collect())
            .collect();
        let minor = determinant(sub).re;
        if worst.as_ref().is_none_or(|w| minor < *w) {
            worst = Some(minor);
        }
    }
    worst.expect("at least one minor")
}

/// Among the computational-basis rays and the "Pauli-like" rays
/// `e_j ± e_k`, `e_j ± i·e_k`, the one whose projector has the largest
/// `|tr(P·Δ)|`; the first wins ties. These projectors span the hermitian
/// operators, so a nonzero `delta` always yields a ray.
pub(crate) fn best_pauli_like_ray(delta: &Operator<QSqrt3>) -> Option<Ray<QSqrt3>> {
    let n = delta.dim();
    let mut candidates: Vec<Ray<QSqrt3>> = (0..n).map(|k| Ray::basis(n, k)).collect();
    let one = Complex::<QSqrt3>::one();
    let i = Complex::new(QSqrt3::zero(), QSqrt3::one());
    for j in 0..n {
        for k in j + 1..n {
            for phase in [one.clone(), -one.clone(), i.clone(), -i.clone()] {
                let mut v = vec![Complex::zero(); n];
                v[j] = one.clone();
                v[k] = phase;
                candidates.push(Ray::new(v).expect("nonzero"));
            }
        }
    }
    let mut best: Option<(QSqrt3, Ray<QSqrt3>)> = None;
    for ray in candidates {
        let gap = ray
            .projector()
            .trace_product(delta)
            .expect("same dimension")
            .re
            .magnitude();
        if best.as_ref().is_none_or(|(g, _)| gap > *g) {
            best = Some((gap, ray));
        }
    }
    best.filter(|(g, _)| !g.is_zero()).map(|(_, r)| r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_closed_form_matches_nalgebra() {
        let op = Operator::new(
            2,
            vec![
                Complex::new(0.3, 0.0),
                Complex::new(0.1, -0.2),
                Complex::new(0.1, 0.2),
                Complex::new(-0.4, 0.0),
            ],
        )
        .unwrap();
        let (closed, vecs) = qubit_eigen(&op);
        let m = DMatrix::from_row_slice(2, 2, op.entries());
        let mut reference: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        reference.sort_by(f64::total_cmp);
        for (a, b) in closed.iter().zip(&reference) {
            assert!((a - b).abs() < 1e-12);
        }
        // H v = λ v
        for (lambda, v) in closed.iter().zip(&vecs) {
            for row in 0..2 {
                let hv = op.entry(row, 0) * v[0] + op.entry(row, 1) * v[1];
                assert!((hv - v[row] * lambda).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn general_dimension_eigen() {
        let op = Operator::new(
            3,
            vec![
                Complex::new(2.0, 0.0),
                Complex::new(0.0, 1.0),
                Complex::new(0.0, 0.0),
                Complex::new(0.0, -1.0),
                Complex::new(2.0, 0.0),
                Complex::new(0.0, 0.0),
                Complex::new(0.0, 0.0),
                Complex::new(0.0, 0.0),
                Complex::new(5.0, 0.0),
            ],
        )
        .unwrap();
        let (values, _) = hermitian_eigen(&op);
        let expected = [1.0, 3.0, 5.0];
        for (a, b) in values.iter().zip(expected) {
            assert!((a - b).abs() < 1e-10, "{values:?}");
        }
    }

    #[test]
    fn exact_minors() {
        let q = QSqrt3::ratio;
        let op = Operator::from_real_rows(&[
            &[q(1, 1), q(1, 1), q(0, 1)],
            &[q(1, 1), q(1, 1), q(0, 1)],
            &[q(0, 1), q(0, 1), q(1, 2)],
        ])
        .unwrap();
        assert_eq!(min_principal_minor(&op), q(0, 1));
        let op = Operator::from_real_rows(&[
            &[q(1, 1), q(2, 1), q(0, 1)],
            &[q(2, 1), q(1, 1), q(0, 1)],
            &[q(0, 1), q(0, 1), q(1, 1)],
        ])
        .unwrap();
        assert!(min_principal_minor(&op) < q(0, 1));
    }
}
