//! Pointwise data of a real hypersurface `M ⊂ Q^m` and the identities of its
//! induced geometry: Gauss, Codazzi, Ricci, the structure Jacobi operator and
//! its covariant derivative.
//!
//! Every operator is stored as a full ambient matrix in the model basis. Maps
//! that live on `TM` annihilate the unit normal `N`.

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::linalg::{
    asymmetry, frame_from, orthonormal_complement, outer, sym_eigen, AmbientVector, Operator,
    SpectrumReport, DEFAULT_EIGEN_TOL,
};
use crate::tangent::{CanonicalAngle, TangentModel};

/// Residual tolerance for curvature identities.
pub const IDENTITY_TOL: f64 = 1e-11;
/// Residual tolerance for exact constructions.
pub const CONSTRUCTION_TOL: f64 = 1e-13;
/// Bound on `|Sξ − αξ|` for data to count as Hopf.
pub const HOPF_TOL: f64 = 1e-10;
/// Bound on `|g(X, N)|` for a vector to count as tangent.
pub const TANGENT_TOL: f64 = 1e-10;
/// Bound on `|S − Sᵀ|` accepted on input.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Tangential/normal splitting of the real structure `A` along `M`.
///
/// `A` is the member `A_θ` of the circle adapted to `N`: `g(AN, ξ) = 0` and
/// `g(AN, N) = cos 2t ≥ 0`. The closed forms for the Ricci tensor, `R_ξ` and
/// the Hopf identities hold in this gauge; the Gauss and Codazzi equations
/// hold for every member.
#[derive(Debug, Clone)]
pub struct ConjugationSplit {
    /// The adapted conjugation.
    pub a: Operator,
    /// Its angle `θ` in `A_θ = cos θ · A + sin θ · JA`.
    pub theta: f64,
    /// Tangential part of `A` on `TM` (`BN = 0`).
    pub b: Operator,
    /// Vector representing `ρ(X) = g(AX, N)` on tangent `X`; equals the tangential part of `AN`.
    pub rho: AmbientVector,
    pub a_xi: AmbientVector,
    pub an: AmbientVector,
    pub an_tangent: AmbientVector,
    /// `g(Aξ, ξ) = −g(AN, N)`.
    pub g_axi_xi: f64,
}

#[derive(Debug, Clone)]
pub struct HypersurfaceData {
    model: TangentModel,
    normal: AmbientVector,
    xi: AmbientVector,
    projector: Operator,
    phi: Operator,
    shape: Operator,
    alpha: f64,
    q_xi: f64,
    dalpha: AmbientVector,
    split: ConjugationSplit,
    shape_projected: bool,
}

impl HypersurfaceData {
    /// Induce `(φ, ξ, η)` and the conjugation split from a unit normal and a
    /// shape operator. A shape operator that does not annihilate `N` is
    /// replaced by its compression to `N^⊥` and [`shape_projected`] is set.
    ///
    /// [`shape_projected`]: HypersurfaceData::shape_projected
    pub fn induce_from_normal(
        model: TangentModel,
        normal: AmbientVector,
        shape: Operator,
    ) -> Result<Self> {
        model.check_unit("normal", &normal)?;
        let dim = model.dim();
        if shape.nrows() != dim || shape.ncols() != dim {
            return Err(GeometryError::DimensionMismatch {
                expected: dim,
                got: shape.nrows().max(shape.ncols()),
            });
        }
        if shape.iter().any(|x| !x.is_finite()) {
            return Err(GeometryError::NonFinite { what: "shape operator" });
        }
        let defect = asymmetry(&shape);
        if defect > SYMMETRY_TOL {
            return Err(GeometryError::Asymmetric {
                defect,
                tol: SYMMETRY_TOL,
            });
        }

        let projector = Operator::identity(dim, dim) - outer(&normal, &normal);
        let mut s = (&shape + shape.transpose()) * 0.5;
        let shape_projected = (&s * &normal).norm() > CONSTRUCTION_TOL;
        if shape_projected {
            s = &projector * s * &projector;
        }

        let j = model.j();
        let xi = -(j * &normal);
        let theta = {
            let an = model.a() * &normal;
            let c = an.dot(&normal);
            let s = (j * &an).dot(&normal);
            if c.hypot(s) < CONSTRUCTION_TOL {
                0.0
            } else {
                s.atan2(c)
            }
        };
        let a = model.rotate_conjugation(theta);
        let a = &a;
        let phi = &projector * j * &projector;
        let alpha = xi.dot(&(&s * &xi));

        let a_xi = a * &xi;
        let an = a * &normal;
        let an_tangent = &projector * &an;
        let split = ConjugationSplit {
            a: a.clone(),
            theta,
            b: &projector * a * &projector,
            rho: an_tangent.clone(),
            g_axi_xi: a_xi.dot(&xi),
            a_xi,
            an,
            an_tangent,
        };
        let dalpha = &split.an_tangent * (2.0 * split.g_axi_xi);

        Ok(Self {
            model,
            normal,
            xi,
            projector,
            phi,
            shape: s,
            alpha,
            q_xi: 2.0 * alpha,
            dalpha,
            split,
            shape_projected,
        })
    }

    /// Override the gauge scalar `q(ξ)`.
    pub fn with_q_xi(mut self, q_xi: f64) -> Self {
        self.q_xi = q_xi;
        self
    }

    /// Override the gradient of `α`, given as the vector `d` with `Xα = g(d, X)`.
    pub fn with_dalpha(mut self, dalpha: AmbientVector) -> Result<Self> {
        if dalpha.len() != self.model.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.model.dim(),
                got: dalpha.len(),
            });
        }
        self.dalpha = &self.projector * dalpha;
        Ok(self)
    }

    pub fn model(&self) -> &TangentModel {
        &self.model
    }
    pub fn m(&self) -> usize {
        self.model.m()
    }
    pub fn normal(&self) -> &AmbientVector {
        &self.normal
    }
    pub fn xi(&self) -> &AmbientVector {
        &self.xi
    }
    pub fn eta(&self, x: &AmbientVector) -> f64 {
        x.dot(&self.xi)
    }
    pub fn phi(&self) -> &Operator {
        &self.phi
    }
    pub fn shape(&self) -> &Operator {
        &self.shape
    }
    pub fn projector(&self) -> &Operator {
        &self.projector
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn q_xi(&self) -> f64 {
        self.q_xi
    }
    pub fn dalpha(&self) -> &AmbientVector {
        &self.dalpha
    }
    pub fn split(&self) -> &ConjugationSplit {
        &self.split
    }
    pub fn shape_projected(&self) -> bool {
        self.shape_projected
    }

    pub fn normal_angle(&self) -> CanonicalAngle {
        self.model
            .canonical_angle(&self.normal)
            .expect("normal validated at construction")
    }

    /// `|Sξ − αξ|`.
    pub fn hopf_defect(&self) -> f64 {
        (&self.shape * &self.xi - &self.xi * self.alpha).norm()
    }

    pub fn is_hopf(&self) -> bool {
        self.hopf_defect() < HOPF_TOL
    }

    fn require_hopf(&self) -> Result<()> {
        let defect = self.hopf_defect();
        if defect < HOPF_TOL {
            Ok(())
        } else {
            Err(GeometryError::HopfRequired { defect })
        }
    }

    pub fn check_tangent(&self, what: &'static str, x: &AmbientVector) -> Result<()> {
        if x.len() != self.model.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.model.dim(),
                got: x.len(),
            });
        }
        let component = x.dot(&self.normal);
        if component.abs() > TANGENT_TOL * x.norm().max(1.0) {
            return Err(GeometryError::NotTangent { what, component });
        }
        Ok(())
    }

    /// Orthonormal basis of `TM`, `ξ` first.
    pub fn tangent_basis(&self) -> Vec<AmbientVector> {
        let mut basis = vec![self.xi.clone()];
        basis.extend(orthonormal_complement(
            &[self.normal.clone(), self.xi.clone()],
            self.model.dim(),
        ));
        basis
    }

    /// Columns form an orthonormal basis of `TM`, `ξ` first.
    pub fn tangent_frame(&self) -> Operator {
        frame_from(&self.tangent_basis())
    }

    /// Spectrum of `op` restricted to `TM`.
    pub fn tangent_spectrum(&self, op: &Operator) -> Result<SpectrumReport> {
        let f = self.tangent_frame();
        let r = f.transpose() * op * &f;
        let r = (&r + r.transpose()) * 0.5;
        sym_eigen(&r, DEFAULT_EIGEN_TOL)
    }

    /// Orthonormal basis of the maximal complex subspace `𝒞 = ker η ∩ TM`.
    pub fn complex_subspace_basis(&self) -> Vec<AmbientVector> {
        self.tangent_basis().into_iter().skip(1).collect()
    }

    fn apply_on_tangent<F>(&self, f: F) -> Operator
    where
        F: Fn(&AmbientVector) -> AmbientVector,
    {
        let dim = self.model.dim();
        let mut out = Operator::zeros(dim, dim);
        for i in 0..dim {
            let e = self.projector.column(i).into_owned();
            out.set_column(i, &f(&e));
        }
        out
    }

    /// Curvature `R(X,Y)Z` of `M` from the Gauss equation, written with `φ`, `B`, `ρ`.
    pub fn induced_curvature(
        &self,
        x: &AmbientVector,
        y: &AmbientVector,
        z: &AmbientVector,
    ) -> Result<AmbientVector> {
        self.check_tangent("X", x)?;
        self.check_tangent("Y", y)?;
        self.check_tangent("Z", z)?;
        Ok(self.curvature_unchecked(x, y, z))
    }

    fn curvature_unchecked(
        &self,
        x: &AmbientVector,
        y: &AmbientVector,
        z: &AmbientVector,
    ) -> AmbientVector {
        let j = self.model.j();
        let a = &self.split.a;
        let s = &self.shape;
        let phi = &self.phi;
        let b = &self.split.b;
        let xi = &self.xi;
        let rho = |v: &AmbientVector| v.dot(&self.split.rho);

        let sx = s * x;
        let sy = s * y;
        let jx = j * x;
        let jy = j * y;
        let ax = a * x;
        let ay = a * y;
        let jax = j * &ax;
        let jay = j * &ay;
        let bx = b * x;
        let by = b * y;

        sy.dot(z) * &sx - sx.dot(z) * &sy + y.dot(z) * x - x.dot(z) * y + jy.dot(z) * (phi * x)
            - jx.dot(z) * (phi * y)
            - 2.0 * jx.dot(y) * (phi * z)
            + ay.dot(z) * &bx
            - ax.dot(z) * &by
            + jay.dot(z) * (phi * &bx)
            - jay.dot(z) * rho(x) * xi
            - jax.dot(z) * (phi * &by)
            + jax.dot(z) * rho(y) * xi
    }

    /// Ricci tensor from the closed-form contraction of the Gauss equation.
    pub fn ricci(&self, x: &AmbientVector) -> Result<AmbientVector> {
        self.check_tangent("X", x)?;
        Ok(self.ricci_unchecked(x))
    }

    fn ricci_unchecked(&self, x: &AmbientVector) -> AmbientVector {
        let m = self.model.m() as f64;
        let a = &self.split.a;
        let s = &self.shape;
        let sp = &self.split;
        let phi_a_xi = &self.phi * &sp.a_xi;
        let ax = a * x;
        let h = s.trace();
        let sx = s * x;

        (2.0 * m - 1.0) * x - 3.0 * self.eta(x) * &self.xi + sp.g_axi_xi * (&sp.b * x)
            - ax.dot(&self.normal) * phi_a_xi
            + ax.dot(&self.xi) * &sp.a_xi
            + h * &sx
            - s * sx
    }

    /// Ricci operator on `TM` (annihilates `N`).
    pub fn ricci_operator(&self) -> Operator {
        self.apply_on_tangent(|e| self.ricci_unchecked(e))
    }

    /// Right-hand side of the Codazzi equation, `(∇_X S)Y − (∇_Y S)X`.
    pub fn codazzi_rhs(&self, x: &AmbientVector, y: &AmbientVector) -> Result<AmbientVector> {
        self.check_tangent("X", x)?;
        self.check_tangent("Y", y)?;
        Ok(self.codazzi_unchecked(x, y))
    }

    fn codazzi_unchecked(&self, x: &AmbientVector, y: &AmbientVector) -> AmbientVector {
        let a = &self.split.a;
        let phi = &self.phi;
        let b = &self.split.b;
        let xi = &self.xi;
        let rho = |v: &AmbientVector| v.dot(&self.split.rho);
        let eta_ax = self.eta(&(a * x));
        let eta_ay = self.eta(&(a * y));
        let bx = b * x;
        let by = b * y;

        self.eta(x) * (phi * y) - self.eta(y) * (phi * x) - 2.0 * (phi * x).dot(y) * xi
            + rho(x) * &by
            - rho(y) * &bx
            + eta_ax * (phi * &by)
            - eta_ax * rho(y) * xi
            - eta_ay * (phi * &bx)
            + eta_ay * rho(x) * xi
    }

    /// `(∇_ξ S)Y = (Yα)ξ + αφSY − SφSY + [Codazzi correction at (ξ, Y)]`.
    pub fn nabla_s_at_xi(&self, y: &AmbientVector) -> Result<AmbientVector> {
        self.require_hopf()?;
        self.check_tangent("Y", y)?;
        Ok(self.nabla_s_at_xi_unchecked(y))
    }

    fn nabla_s_at_xi_unchecked(&self, y: &AmbientVector) -> AmbientVector {
        let s = &self.shape;
        let phi = &self.phi;
        let sy = s * y;
        let phisy = phi * &sy;
        y.dot(&self.dalpha) * &self.xi + self.alpha * &phisy - s * &phisy
            + self.codazzi_unchecked(&self.xi, y)
    }

    /// `∇_ξ S` as an operator on `TM`.
    pub fn nabla_s_at_xi_operator(&self) -> Result<Operator> {
        self.require_hopf()?;
        Ok(self.apply_on_tangent(|e| self.nabla_s_at_xi_unchecked(e)))
    }

    /// Tangential part of `∇_X(Aξ)` for a caller-supplied gauge value `q(X)`.
    pub fn nabla_a_xi(&self, x: &AmbientVector, q_x: f64) -> Result<AmbientVector> {
        self.check_tangent("X", x)?;
        let sp = &self.split;
        let phi_a_xi = &self.phi * &sp.a_xi;
        let sx = &self.shape * x;
        Ok((q_x - sx.dot(&self.xi)) * phi_a_xi + &sp.b * (&self.phi * &sx))
    }

    /// Structure Jacobi operator `R_ξ` on `TM` in its Hopf closed form.
    pub fn structure_jacobi(&self) -> Operator {
        let sp = &self.split;
        let phi_a_xi = &self.phi * &sp.a_xi;
        let alpha = self.alpha;
        let xi = &self.xi;
        let s = &self.shape;
        self.apply_on_tangent(|y| {
            y - self.eta(y) * xi + sp.g_axi_xi * (&sp.b * y) - sp.a_xi.dot(y) * &sp.a_xi
                - phi_a_xi.dot(y) * &phi_a_xi
                + alpha * (s * y)
                - alpha * alpha * self.eta(y) * xi
        })
    }

    /// Full expansion of `(∇_X R_ξ)Y`, ambient-valued, as a matrix acting on
    /// tangent `Y`. `q(X)`, `∇_X S` and `Xα` must be supplied by the caller.
    pub fn cov_deriv_structure_jacobi(
        &self,
        x: &AmbientVector,
        q_x: f64,
        nabla_s_x: &Operator,
        dalpha_x: f64,
    ) -> Result<Operator> {
        self.check_tangent("X", x)?;
        let dim = self.model.dim();
        if nabla_s_x.nrows() != dim || nabla_s_x.ncols() != dim {
            return Err(GeometryError::DimensionMismatch {
                expected: dim,
                got: nabla_s_x.nrows(),
            });
        }
        let defect = asymmetry(nabla_s_x);
        if defect > SYMMETRY_TOL {
            return Err(GeometryError::Asymmetric {
                defect,
                tol: SYMMETRY_TOL,
            });
        }
        Ok(self.cov_deriv_unchecked(x, q_x, nabla_s_x, dalpha_x))
    }

    fn cov_deriv_unchecked(
        &self,
        x: &AmbientVector,
        q_x: f64,
        nabla_s_x: &Operator,
        dalpha_x: f64,
    ) -> Operator {
        let j = self.model.j();
        let a = &self.split.a;
        let s = &self.shape;
        let phi = &self.phi;
        let sp = &self.split;
        let b = &sp.b;
        let xi = &self.xi;
        let n = &self.normal;
        let alpha = self.alpha;
        let c = sp.g_axi_xi;
        let a_xi = &sp.a_xi;
        let an = &sp.an;
        let phi_a_xi = phi * a_xi;

        let sx = s * x;
        let phisx = phi * &sx;
        let bphisx = b * &phisx;
        let phibphisx = phi * &bphisx;
        // q(X) − g(SX, ξ); the second term is αη(X) for Hopf data
        let qa = q_x - sx.dot(xi);
        let eta_a_xi = a_xi.dot(xi);

        self.apply_on_tangent(|y| {
            let eta_y = self.eta(y);
            let by = b * y;
            let ay = a * y;
            let jay = j * &ay;
            let sx_y = sx.dot(y);
            let axi_y = a_xi.dot(y);
            let phiaxi_y = phi_a_xi.dot(y);

            let mut v = -phisx.dot(y) * xi - eta_y * &phisx
                + bphisx.dot(xi) * &by
                + a_xi.dot(&phisx) * &by;
            v += c * (q_x * &jay + sx_y * an - q_x * ay.dot(xi) * n);
            v += c * (sx_y * c * n + an.dot(y) * &sx);
            v -= (qa * phiaxi_y + bphisx.dot(y)) * a_xi;
            v -= axi_y * (qa * &phi_a_xi + &bphisx);
            v -= (c * sx_y - sx.dot(a_xi) * eta_y) * &phi_a_xi;
            v += qa * axi_y * &phi_a_xi;
            v -= (qa * c * eta_y - bphisx.dot(&(phi * y))) * &phi_a_xi;
            v -= phiaxi_y * (eta_a_xi * &sx - sx.dot(a_xi) * xi);
            v += phiaxi_y * (qa * a_xi - c * qa * xi - &phibphisx);
            v += dalpha_x * (s * y) + alpha * (nabla_s_x * y)
                - 2.0 * alpha * dalpha_x * eta_y * xi
                - alpha * alpha * phisx.dot(y) * xi
                - alpha * alpha * eta_y * &phisx;
            v
        })
    }

    /// `(∇_ξ R_ξ)` from the full expansion at `X = ξ`, using the stored
    /// `q(ξ)`, `dα` and the Codazzi value of `∇_ξ S`.
    pub fn reeb_cov_deriv_structure_jacobi(&self) -> Result<Operator> {
        let nabla_s = self.nabla_s_at_xi_operator()?;
        let dalpha_xi = self.dalpha.dot(&self.xi);
        Ok(self.cov_deriv_unchecked(&self.xi, self.q_xi, &nabla_s, dalpha_xi))
    }

    /// The specialised Hopf form of `(∇_ξ R_ξ)Y` (the expansion after
    /// substituting `Sξ = αξ`), evaluated directly.
    pub fn reeb_parallel_display(&self, y: &AmbientVector) -> Result<AmbientVector> {
        self.require_hopf()?;
        self.check_tangent("Y", y)?;
        let j = self.model.j();
        let a = &self.split.a;
        let sp = &self.split;
        let c = sp.g_axi_xi;
        let q = self.q_xi;
        let alpha = self.alpha;
        let xi = &self.xi;
        let n = &self.normal;
        let eta_y = self.eta(y);
        let ay = a * y;
        let phi_a_xi = &self.phi * &sp.a_xi;
        let xi_alpha = self.dalpha.dot(xi);

        Ok(c * (q * (j * &ay) + alpha * eta_y * &sp.an - q * ay.dot(xi) * n)
            + c * (alpha * eta_y * c * n + alpha * sp.an.dot(y) * xi)
            - (q - alpha) * c * eta_y * &phi_a_xi
            - phi_a_xi.dot(y) * c * (q - alpha) * xi
            + xi_alpha * (&self.shape * y)
            + alpha * self.nabla_s_at_xi_unchecked(y)
            - 2.0 * alpha * xi_alpha * eta_y * xi)
    }

    /// `max_i |(∇_ξ R_ξ) Y_i|` over [`tangent_basis`](Self::tangent_basis).
    pub fn reeb_parallel_residual(&self) -> Result<f64> {
        let d = self.reeb_cov_deriv_structure_jacobi()?;
        Ok(self.max_over_basis(&d))
    }

    /// `max_i |M Y_i|` over the tangent basis.
    pub fn max_over_basis(&self, op: &Operator) -> f64 {
        self.tangent_basis()
            .iter()
            .map(|y| (op * y).norm())
            .fold(0.0, f64::max)
    }

    /// `φS − Sφ`.
    pub fn reeb_flow_commutator(&self) -> Operator {
        &self.phi * &self.shape - &self.shape * &self.phi
    }

    /// Largest absolute entry, over tangent basis pairs, of the Hopf
    /// identity relating `SφS`, `φS + Sφ`, `φ` and the `A`-terms.
    pub fn hopf_identity_residual(&self) -> Result<f64> {
        self.require_hopf()?;
        let j = self.model.j();
        let s = &self.shape;
        let phi = &self.phi;
        let sp = &self.split;
        let a_xi = &sp.a_xi;
        let an = &sp.an;
        let c = sp.g_axi_xi;
        let jt_a_xi = j.transpose() * a_xi;

        // entry (row Y, column X) is the bilinear form at (X, Y)
        let form = 2.0 * s * phi * s - self.alpha * (phi * s + s * phi) - 2.0 * phi
            + outer(a_xi, an)
            - outer(an, a_xi)
            - outer(&jt_a_xi, a_xi)
            + outer(a_xi, &jt_a_xi)
            - 2.0 * c * outer(&self.xi, an)
            + 2.0 * c * outer(an, &self.xi);
        let frame = self.tangent_frame();
        let restricted = frame.transpose() * form * frame;
        Ok(restricted.amax())
    }

    /// `max_X |Xα − (ξα)η(X) − 2g(Aξ,ξ)g(X,AN)|` over the tangent basis.
    pub fn alpha_gradient_residual(&self) -> f64 {
        let sp = &self.split;
        let xi_alpha = self.dalpha.dot(&self.xi);
        self.tangent_basis()
            .iter()
            .map(|x| {
                (x.dot(&self.dalpha) - xi_alpha * self.eta(x) - 2.0 * sp.g_axi_xi * x.dot(&sp.an))
                    .abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn to_record(&self) -> HypersurfaceRecord {
        let dim = self.model.dim();
        HypersurfaceRecord {
            m: self.model.m(),
            normal: self.normal.iter().copied().collect(),
            shape: (0..dim)
                .map(|i| (0..dim).map(|j| self.shape[(i, j)]).collect())
                .collect(),
            alpha: self.alpha,
            q_xi: self.q_xi,
            family: None,
            k: None,
            r: None,
        }
    }

    /// Rebuild from a serialized record; `α` is recomputed and must agree
    /// with the stored value.
    pub fn from_record(rec: &HypersurfaceRecord) -> Result<Self> {
        let model = TangentModel::new(rec.m)?;
        let dim = model.dim();
        let normal = model.vector(&rec.normal)?;
        if rec.shape.len() != dim {
            return Err(GeometryError::DimensionMismatch {
                expected: dim,
                got: rec.shape.len(),
            });
        }
        let mut shape = Operator::zeros(dim, dim);
        for (i, row) in rec.shape.iter().enumerate() {
            if row.len() != dim {
                return Err(GeometryError::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                shape[(i, j)] = v;
            }
        }
        if !rec.alpha.is_finite() || !rec.q_xi.is_finite() {
            return Err(GeometryError::NonFinite { what: "alpha/q_xi" });
        }
        let h = Self::induce_from_normal(model, normal, shape)?;
        if (h.alpha - rec.alpha).abs() > 1e-9 * h.alpha.abs().max(1.0) {
            return Err(GeometryError::AlphaMismatch {
                stored: rec.alpha,
                computed: h.alpha,
            });
        }
        Ok(h.with_q_xi(rec.q_xi))
    }
}

/// Serialized form of [`HypersurfaceData`]; `S` is row-major in the model basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypersurfaceRecord {
    pub m: usize,
    #[serde(rename = "N")]
    pub normal: Vec<f64>,
    #[serde(rename = "S")]
    pub shape: Vec<Vec<f64>>,
    pub alpha: f64,
    pub q_xi: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn isotropic(m: usize) -> (TangentModel, AmbientVector) {
        let t = TangentModel::new(m).unwrap();
        let n = (t.z(1) + t.jz(2)) * FRAC_1_SQRT_2;
        (t, n)
    }

    #[test]
    fn isotropic_normal_zero_shape() {
        let (t, n) = isotropic(3);
        let expected_xi = (t.z(2) - t.jz(1)) * FRAC_1_SQRT_2;
        let h = HypersurfaceData::induce_from_normal(t, n, Operator::zeros(6, 6)).unwrap();
        assert!((h.xi() - expected_xi).norm() < 1e-15);
        assert_eq!(h.alpha(), 0.0);
        assert_eq!(h.split().g_axi_xi, 0.0);
        assert!(h.split().an.dot(h.normal()).abs() < 1e-15);
        assert!(h.split().a_xi.dot(h.normal()).abs() < 1e-15);
    }

    #[test]
    fn principal_normal_conjugation() {
        let t = TangentModel::new(3).unwrap();
        let n = t.z(1);
        let mut s = Operator::identity(6, 6) * 0.7;
        s[(0, 0)] = 0.0;
        let h = HypersurfaceData::induce_from_normal(t, n.clone(), s).unwrap();
        assert!((&h.split().a_xi + h.xi()).norm() < 1e-15);
        assert!((&h.split().an - &n).norm() < 1e-15);
        assert!(!h.shape_projected());
    }

    #[test]
    fn almost_contact_identity() {
        let (t, n) = isotropic(4);
        let h = HypersurfaceData::induce_from_normal(t, n, Operator::zeros(8, 8)).unwrap();
        let phi2 = h.phi() * h.phi();
        let target = -h.projector() + outer(h.xi(), h.xi());
        assert!((phi2 - target).norm() < 1e-13);
        assert!((h.phi() * h.xi()).norm() < 1e-15);
        assert!((h.phi() * h.normal()).norm() < 1e-15);
    }

    #[test]
    fn shape_not_annihilating_normal_is_projected() {
        let (t, n) = isotropic(3);
        let h = HypersurfaceData::induce_from_normal(t, n.clone(), Operator::identity(6, 6))
            .unwrap();
        assert!(h.shape_projected());
        assert!((h.shape() * &n).norm() < 1e-15);
    }

    #[test]
    fn rejects_non_unit_normal_and_asymmetric_shape() {
        let t = TangentModel::new(3).unwrap();
        let err = HypersurfaceData::induce_from_normal(t.clone(), t.z(1) * 1.5, Operator::zeros(6, 6))
            .unwrap_err();
        assert!(matches!(err, GeometryError::NotUnit { .. }));
        let mut s = Operator::zeros(6, 6);
        s[(1, 2)] = 1.0;
        let err = HypersurfaceData::induce_from_normal(t, AmbientVector::from_fn(6, |i, _| if i == 0 { 1.0 } else { 0.0 }), s)
            .unwrap_err();
        assert!(matches!(err, GeometryError::Asymmetric { .. }));
    }

    #[test]
    fn non_tangent_inputs_rejected() {
        let (t, n) = isotropic(3);
        let h = HypersurfaceData::induce_from_normal(t, n.clone(), Operator::zeros(6, 6)).unwrap();
        let xi = h.xi().clone();
        assert!(matches!(
            h.induced_curvature(&n, &xi, &xi),
            Err(GeometryError::NotTangent { .. })
        ));
        assert!(h.ricci(&n).is_err());
        assert!(h.codazzi_rhs(&xi, &n).is_err());
        assert!(h.nabla_a_xi(&n, 0.0).is_err());
    }

    #[test]
    fn non_hopf_rejected() {
        let (t, n) = isotropic(3);
        let mut h0 = HypersurfaceData::induce_from_normal(t.clone(), n.clone(), Operator::zeros(6, 6)).unwrap();
        let xi = h0.xi().clone();
        let e = h0.complex_subspace_basis()[0].clone();
        let s = outer(&xi, &e) + outer(&e, &xi);
        h0 = HypersurfaceData::induce_from_normal(t, n, s).unwrap();
        assert!(!h0.is_hopf());
        assert!(matches!(h0.nabla_s_at_xi(&e), Err(GeometryError::HopfRequired { .. })));
        assert!(h0.reeb_parallel_residual().is_err());
        assert!(h0.hopf_identity_residual().is_err());
    }

    #[test]
    fn structure_jacobi_kills_xi_for_zero_shape() {
        let (t, n) = isotropic(3);
        let h = HypersurfaceData::induce_from_normal(t, n, Operator::zeros(6, 6)).unwrap();
        let r = h.structure_jacobi();
        assert!((&r * h.xi()).norm() < 1e-15);
        assert!(asymmetry(&r) < 1e-15);
    }

    #[test]
    fn nabla_a_xi_zero_shape() {
        let (t, n) = isotropic(3);
        let h = HypersurfaceData::induce_from_normal(t, n, Operator::zeros(6, 6)).unwrap();
        let x = h.complex_subspace_basis()[2].clone();
        let v = h.nabla_a_xi(&x, 1.7).unwrap();
        let expected = h.phi() * &h.split().a_xi * 1.7;
        assert!((v - expected).norm() < 1e-15);
    }

    #[test]
    fn zero_shape_isotropic_reeb_derivative_vanishes() {
        let (t, n) = isotropic(3);
        let h = HypersurfaceData::induce_from_normal(t, n, Operator::zeros(6, 6)).unwrap();
        assert!(h.reeb_parallel_residual().unwrap() < 1e-15);
    }

    #[test]
    fn injected_dalpha_defect() {
        let (t, n) = isotropic(3);
        let h = HypersurfaceData::induce_from_normal(t, n, Operator::zeros(6, 6)).unwrap();
        assert_eq!(h.alpha_gradient_residual(), 0.0);
        let e = h.tangent_basis()[2].clone();
        let d = h.dalpha() + &e * 0.25;
        let h = h.with_dalpha(d).unwrap();
        assert!((h.alpha_gradient_residual() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn record_round_trip_and_alpha_check() {
        let (t, n) = isotropic(3);
        let h = HypersurfaceData::induce_from_normal(t, n, Operator::zeros(6, 6)).unwrap();
        let mut rec = h.to_record();
        let back = HypersurfaceData::from_record(&rec).unwrap();
        assert_eq!(back.to_record(), rec);
        rec.alpha = 0.5;
        assert!(matches!(
            HypersurfaceData::from_record(&rec),
            Err(GeometryError::AlphaMismatch { .. })
        ));
    }
}
