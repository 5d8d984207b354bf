//! Linear model of a tangent space of the complex quadric: metric, Kähler
//! structure `J`, the circle of real structures `A_θ`, and the ambient
//! curvature and Jacobi operators.
//!
//! Basis order is `(Z_1, …, Z_m, JZ_1, …, JZ_m)` with `Z_i ∈ V(A)`; the metric
//! is the identity Gram matrix, so `J` and `A` have entries in `{-1, 0, 1}`.

use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::linalg::{AmbientVector, Operator};

pub const MAX_M: usize = 64;

/// Tolerance on the canonical angle for calling a vector singular.
pub const SINGULAR_ANGLE_TOL: f64 = 1e-8;

/// Tolerance on `|U| - 1` for inputs that must be unit vectors.
pub const UNIT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct TangentModel {
    m: usize,
    j: Operator,
    a: Operator,
}

impl TangentModel {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 || m > MAX_M {
            return Err(GeometryError::InvalidDimension { m, max: MAX_M });
        }
        let dim = 2 * m;
        let mut j = Operator::zeros(dim, dim);
        let mut a = Operator::zeros(dim, dim);
        for i in 0..m {
            // J Z_i = JZ_i, J(JZ_i) = -Z_i
            j[(m + i, i)] = 1.0;
            j[(i, m + i)] = -1.0;
            a[(i, i)] = 1.0;
            a[(m + i, m + i)] = -1.0;
        }
        Ok(Self { m, j, a })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        2 * self.m
    }

    pub fn j(&self) -> &Operator {
        &self.j
    }

    pub fn a(&self) -> &Operator {
        &self.a
    }

    pub fn ja(&self) -> Operator {
        &self.j * &self.a
    }

    /// `Z_i` for `i` in `1..=m`.
    pub fn z(&self, i: usize) -> AmbientVector {
        assert!((1..=self.m).contains(&i), "Z index {i} out of range");
        let mut v = AmbientVector::zeros(self.dim());
        v[i - 1] = 1.0;
        v
    }

    /// `JZ_i` for `i` in `1..=m`.
    pub fn jz(&self, i: usize) -> AmbientVector {
        assert!((1..=self.m).contains(&i), "Z index {i} out of range");
        let mut v = AmbientVector::zeros(self.dim());
        v[self.m + i - 1] = 1.0;
        v
    }

    pub fn vector(&self, coords: &[f64]) -> Result<AmbientVector> {
        if coords.len() != self.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim(),
                got: coords.len(),
            });
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(GeometryError::NonFinite { what: "vector" });
        }
        Ok(AmbientVector::from_column_slice(coords))
    }

    pub fn conjugation(&self, theta: f64) -> ConjugationFamily<'_> {
        ConjugationFamily { base: self, theta }
    }

    /// `A_θ = cos θ · A + sin θ · JA`.
    pub fn rotate_conjugation(&self, theta: f64) -> Operator {
        &self.a * theta.cos() + self.ja() * theta.sin()
    }

    /// Canonical angle of a unit vector with respect to the whole circle of
    /// conjugations through this model's `A`.
    pub fn canonical_angle(&self, u: &AmbientVector) -> Result<CanonicalAngle> {
        self.canonical_angle_wrt(&self.a, u)
    }

    /// Canonical angle computed from a specific conjugation `a` of the circle.
    /// The result does not depend on which member is passed.
    pub fn canonical_angle_wrt(&self, a: &Operator, u: &AmbientVector) -> Result<CanonicalAngle> {
        self.check_unit("U", u)?;
        let au = a * u;
        let jau = &self.j * &au;
        let c = u.dot(&au);
        let s = u.dot(&jau);
        let cos2t = (c * c + s * s).sqrt().min(1.0);
        let t = 0.5 * cos2t.acos();
        Ok(CanonicalAngle::new(t))
    }

    /// The full nine-term ambient curvature `R̄(X,Y)Z`.
    pub fn ambient_curvature(
        &self,
        x: &AmbientVector,
        y: &AmbientVector,
        z: &AmbientVector,
    ) -> AmbientVector {
        let j = &self.j;
        let a = &self.a;
        let jx = j * x;
        let jy = j * y;
        let jz = j * z;
        let ax = a * x;
        let ay = a * y;
        let jax = j * &ax;
        let jay = j * &ay;

        y.dot(z) * x - x.dot(z) * y + jy.dot(z) * &jx - jx.dot(z) * &jy - 2.0 * jx.dot(y) * jz
            + ay.dot(z) * &ax
            - ax.dot(z) * &ay
            + jay.dot(z) * &jax
            - jax.dot(z) * &jay
    }

    /// Jacobi operator `Y ↦ R̄(Y,U)U` as a matrix.
    pub fn ambient_jacobi(&self, u: &AmbientVector) -> Result<Operator> {
        self.check_unit("U", u)?;
        let dim = self.dim();
        let mut out = Operator::zeros(dim, dim);
        for i in 0..dim {
            let mut e = AmbientVector::zeros(dim);
            e[i] = 1.0;
            out.set_column(i, &self.ambient_curvature(&e, u, u));
        }
        Ok(out)
    }

    pub(crate) fn check_unit(&self, what: &'static str, u: &AmbientVector) -> Result<()> {
        if u.len() != self.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim(),
                got: u.len(),
            });
        }
        if u.iter().any(|x| !x.is_finite()) {
            return Err(GeometryError::NonFinite { what });
        }
        let norm = u.norm();
        if (norm - 1.0).abs() > UNIT_TOL {
            let symbol = match what {
                "normal" => "N",
                other => other,
            };
            return Err(GeometryError::NotUnit { what, symbol, norm });
        }
        Ok(())
    }
}

/// One member `A_θ` of the circle of real structures.
#[derive(Debug, Clone, Copy)]
pub struct ConjugationFamily<'a> {
    pub base: &'a TangentModel,
    pub theta: f64,
}

impl ConjugationFamily<'_> {
    pub fn operator(&self) -> Operator {
        self.base.rotate_conjugation(self.theta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SingularType {
    /// `t = 0`: the vector lies in `V(A)` for some conjugation.
    Principal,
    /// `t = π/4`: the vector is `(Z_1 + JZ_2)/√2`.
    Isotropic,
    Generic,
}

impl SingularType {
    pub fn label(self) -> &'static str {
        match self {
            SingularType::Principal => "A-principal",
            SingularType::Isotropic => "A-isotropic",
            SingularType::Generic => "generic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CanonicalAngle {
    /// In `[0, π/4]`.
    pub t: f64,
    pub kind: SingularType,
}

impl CanonicalAngle {
    fn new(t: f64) -> Self {
        let kind = if t < SINGULAR_ANGLE_TOL {
            SingularType::Principal
        } else if (t - FRAC_PI_4).abs() < SINGULAR_ANGLE_TOL {
            SingularType::Isotropic
        } else {
            SingularType::Generic
        };
        Self { t, kind }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn assert_small(x: f64, tol: f64) {
        assert!(x.abs() < tol, "{x} not below {tol}");
    }

    #[test]
    fn canonical_blocks_m3() {
        let t = TangentModel::new(3).unwrap();
        for i in 1..=3 {
            assert_eq!(t.j() * t.z(i), t.jz(i));
            assert_eq!(t.j() * t.jz(i), -t.z(i));
            assert_eq!(t.a() * t.z(i), t.z(i));
            assert_eq!(t.a() * t.jz(i), -t.jz(i));
        }
        assert_eq!(t.a().trace(), 0.0);
    }

    #[test]
    fn exact_structure_identities() {
        let t = TangentModel::new(4).unwrap();
        let id = Operator::identity(8, 8);
        assert_eq!(t.j() * t.j() + &id, Operator::zeros(8, 8));
        assert_eq!(t.a() * t.a(), id);
        assert_eq!(t.a() * t.j() + t.j() * t.a(), Operator::zeros(8, 8));
        assert_eq!(t.a().transpose(), *t.a());
        assert_eq!(t.j().transpose() * t.j(), id);
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(matches!(
            TangentModel::new(0),
            Err(GeometryError::InvalidDimension { m: 0, .. })
        ));
        assert!(TangentModel::new(MAX_M + 1).is_err());
    }

    #[test]
    fn conjugation_circle() {
        let t = TangentModel::new(3).unwrap();
        assert_eq!(t.rotate_conjugation(0.0), *t.a());
        let api = t.rotate_conjugation(PI);
        assert!((api.clone() + t.a()).norm() < 1e-15);
        assert!((&api * &api - Operator::identity(6, 6)).norm() < 1e-14);
        let a3 = t.conjugation(PI / 3.0).operator();
        assert!((&a3 * &a3 - Operator::identity(6, 6)).norm() < 1e-14);
        assert!((&a3 * t.j() + t.j() * &a3).norm() < 1e-14);
    }

    #[test]
    fn canonical_angle_singular_cases() {
        let t = TangentModel::new(3).unwrap();
        let p = t.canonical_angle(&t.z(1)).unwrap();
        assert_eq!(p.t, 0.0);
        assert_eq!(p.kind, SingularType::Principal);

        let iso = (t.z(1) + t.jz(2)) * FRAC_1_SQRT_2;
        let c = t.canonical_angle(&iso).unwrap();
        assert_small(c.t - FRAC_PI_4, 1e-12);
        assert_eq!(c.kind, SingularType::Isotropic);

        let g = t.z(1) * 0.3_f64.cos() + t.jz(2) * 0.3_f64.sin();
        let c = t.canonical_angle(&g).unwrap();
        assert_small(c.t - 0.3, 1e-12);
        assert_eq!(c.kind, SingularType::Generic);
    }

    #[test]
    fn canonical_angle_rejects_non_unit() {
        let t = TangentModel::new(3).unwrap();
        let err = t.canonical_angle(&(t.z(1) * 2.0)).unwrap_err();
        assert!(matches!(err, GeometryError::NotUnit { .. }));
    }

    #[test]
    fn curvature_two_z1_example() {
        let t = TangentModel::new(3).unwrap();
        let r = t.ambient_curvature(&t.z(1), &t.z(2), &t.z(2));
        assert_eq!(r, t.z(1) * 2.0);
        let x = t.z(1) + t.jz(3);
        assert_eq!(t.ambient_curvature(&x, &x, &t.z(2)).norm(), 0.0);
    }

    #[test]
    fn jacobi_annihilates_u() {
        let t = TangentModel::new(3).unwrap();
        let u = (t.z(1) * 0.6 + t.jz(2) * 0.8).normalize();
        let ru = t.ambient_jacobi(&u).unwrap();
        assert_small((ru * &u).norm(), 1e-14);
    }
}
