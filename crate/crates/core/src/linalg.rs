//! Dense linear-algebra helpers: the cyclic Jacobi eigensolver, spectrum
//! clustering, and orthonormal-basis utilities shared by the geometry modules.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{GeometryError, Result};

/// A linear operator on the ambient tangent space, in the fixed orthonormal basis.
pub type Operator = DMatrix<f64>;

/// A vector in the ambient tangent space, in the fixed orthonormal basis.
pub type AmbientVector = DVector<f64>;

pub const DEFAULT_EIGEN_TOL: f64 = 1e-12;
pub const MAX_SWEEPS: usize = 100;

/// One group of numerically equal eigenvalues.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cluster {
    pub value: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub clusters: Vec<Cluster>,
    /// Columns are orthonormal eigenvectors, ordered like `eigenvalues`.
    #[serde(skip)]
    pub eigenvectors: Operator,
    /// Frobenius norm of `op - Q diag(eigenvalues) Q^T`.
    pub residual: f64,
    pub sweeps: usize,
}

impl SpectrumReport {
    pub fn multiplicities(&self) -> Vec<(f64, usize)> {
        self.clusters.iter().map(|c| (c.value, c.multiplicity)).collect()
    }

    /// Multiplicity of the cluster within `tol` of `value`, zero if absent.
    pub fn multiplicity_of(&self, value: f64, tol: f64) -> usize {
        self.clusters
            .iter()
            .filter(|c| (c.value - value).abs() <= tol)
            .map(|c| c.multiplicity)
            .sum()
    }
}

/// Largest entry of `|op - op^T|`.
pub fn asymmetry(op: &Operator) -> f64 {
    let n = op.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((op[(i, j)] - op[(j, i)]).abs());
        }
    }
    worst
}

fn off_diagonal_norm(a: &Operator) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Eigen-decomposition of a self-adjoint operator by cyclic Jacobi rotations.
///
/// Converges when the off-diagonal Frobenius norm drops below
/// `tol * max(1, |op|_F)`; gives up after [`MAX_SWEEPS`] sweeps. Eigenvalues
/// closer than `10 * tol` are grouped into one cluster.
pub fn sym_eigen(op: &Operator, tol: f64) -> Result<SpectrumReport> {
    if !op.is_square() {
        return Err(GeometryError::DimensionMismatch {
            expected: op.nrows(),
            got: op.ncols(),
        });
    }
    if op.iter().any(|x| !x.is_finite()) {
        return Err(GeometryError::NonFinite { what: "operator" });
    }
    let defect = asymmetry(op);
    if defect > tol {
        return Err(GeometryError::Asymmetric { defect, tol });
    }

    let n = op.nrows();
    let mut a = (op + op.transpose()) * 0.5;
    let mut v = Operator::identity(n, n);
    let threshold = tol * op.norm().max(1.0);

    let mut sweeps = 0;
    let mut off = off_diagonal_norm(&a);
    while off >= threshold {
        if sweeps == MAX_SWEEPS {
            return Err(GeometryError::NoConvergence { sweeps, off });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut a, &mut v, p, q, c, s);
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
    let mut eigenvectors = Operator::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &v.column(src));
    }

    let lambda = Operator::from_diagonal(&DVector::from_vec(eigenvalues.clone()));
    let residual = (op - &eigenvectors * lambda * eigenvectors.transpose()).norm();

    Ok(SpectrumReport {
        clusters: cluster(&eigenvalues, 10.0 * tol),
        eigenvalues,
        eigenvectors,
        residual,
        sweeps,
    })
}

// A <- R^T A R, V <- V R for the Givens rotation in the (p, q) plane.
fn rotate(a: &mut Operator, v: &mut Operator, p: usize, q: usize, c: f64, s: f64) {
    let n = a.nrows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

/// Single-linkage grouping of ascending values with gap `width`.
pub fn cluster(sorted: &[f64], width: f64) -> Vec<Cluster> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for &x in sorted {
        match out.last_mut() {
            Some((sum, count)) if x - last <= width => {
                *sum += x;
                *count += 1;
            }
            _ => out.push((x, 1)),
        }
        last = x;
    }
    out.into_iter()
        .map(|(sum, count)| Cluster {
            value: sum / count as f64,
            multiplicity: count,
        })
        .collect()
}

/// Gram-Schmidt completion of the orthonormal set `given` to an orthonormal
/// basis of the whole space, returning only the new vectors.
pub fn orthonormal_complement(given: &[AmbientVector], dim: usize) -> Vec<AmbientVector> {
    let mut basis: Vec<AmbientVector> = given.to_vec();
    let mut added = Vec::new();
    for i in 0..dim {
        let mut v = AmbientVector::zeros(dim);
        v[i] = 1.0;
        // two passes for stability
        for _ in 0..2 {
            for b in &basis {
                let c = b.dot(&v);
                v.axpy(-c, b, 1.0);
            }
        }
        let n = v.norm();
        if n > 1e-8 {
            v /= n;
            basis.push(v.clone());
            added.push(v);
        }
        if basis.len() == dim {
            break;
        }
    }
    added
}

/// Matrix of `op` in the orthonormal frame whose vectors are the columns of `frame`.
pub fn restrict(op: &Operator, frame: &Operator) -> Operator {
    frame.transpose() * op * frame
}

/// Columns-to-matrix convenience.
pub fn frame_from(vectors: &[AmbientVector]) -> Operator {
    Operator::from_columns(vectors)
}

/// Outer product `u v^T`.
pub fn outer(u: &AmbientVector, v: &AmbientVector) -> Operator {
    u * v.transpose()
}

/// Operator norm (largest singular value).
pub fn op_norm(op: &Operator) -> f64 {
    if op.is_empty() {
        return 0.0;
    }
    op.clone().singular_values().max()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_one_cluster() {
        let rep = sym_eigen(&Operator::identity(6, 6), DEFAULT_EIGEN_TOL).unwrap();
        assert_eq!(rep.clusters, vec![Cluster { value: 1.0, multiplicity: 6 }]);
        assert_eq!(rep.sweeps, 0);
    }

    #[test]
    fn diagonal_clusters() {
        let d = Operator::from_diagonal(&DVector::from_vec(vec![0.0, 4.0, 0.0]));
        let rep = sym_eigen(&d, DEFAULT_EIGEN_TOL).unwrap();
        assert_eq!(rep.multiplicities(), vec![(0.0, 2), (4.0, 1)]);
    }

    #[test]
    fn rejects_asymmetric() {
        let mut m = Operator::identity(3, 3);
        m[(0, 2)] = 0.5;
        match sym_eigen(&m, 1e-12) {
            Err(GeometryError::Asymmetric { defect, .. }) => assert_eq!(defect, 0.5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn two_by_two_rotation() {
        let m = Operator::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let rep = sym_eigen(&m, 1e-14).unwrap();
        assert!((rep.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((rep.eigenvalues[1] - 3.0).abs() < 1e-14);
        assert!(rep.residual < 1e-13);
    }

    #[test]
    fn complement_is_orthonormal() {
        let mut u = AmbientVector::from_vec(vec![1.0, 1.0, 0.0, 1.0]);
        u.normalize_mut();
        let rest = orthonormal_complement(&[u.clone()], 4);
        assert_eq!(rest.len(), 3);
        let mut all = vec![u];
        all.extend(rest);
        let f = frame_from(&all);
        assert!((f.transpose() * &f - Operator::identity(4, 4)).norm() < 1e-14);
    }

    #[test]
    fn cluster_width() {
        let c = cluster(&[0.0, 1e-13, 1.0, 1.0 + 5e-12, 2.0], 1e-11);
        assert_eq!(c.len(), 3);
        assert_eq!(c[1].multiplicity, 2);
    }
}
