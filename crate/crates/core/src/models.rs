//! Model hypersurfaces realized as pointwise [`HypersurfaceData`]: the tube
//! `𝒯_A` over `ℂP^k ⊂ Q^{2k}`, Hopf candidates with `A`-principal normal,
//! and randomized isotropic or generic Hopf data for property checks.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

use rand::Rng;
use serde::Serialize;

use crate::error::{GeometryError, Result};
use crate::hypersurface::{HypersurfaceData, HypersurfaceRecord, CONSTRUCTION_TOL};
use crate::linalg::{asymmetry, orthonormal_complement, outer, AmbientVector, Operator, SpectrumReport};
use crate::tangent::{SingularType, TangentModel, MAX_M};

/// Half-width of the window around `r = π/4` skipped by radius grids.
pub const QUARTER_PI_WINDOW: f64 = 0.01;

/// Principal curvature paired with `λ` on `φX` by the Hopf identity:
/// `(αλ + 2) / (2λ − α)`. The map is an involution.
pub fn paired_curvature(alpha: f64, lambda: f64) -> f64 {
    (alpha * lambda + 2.0) / (2.0 * lambda - alpha)
}

/// Reeb curvature `2 cot 2r` of the tube of radius `r`.
pub fn tube_alpha(r: f64) -> f64 {
    2.0 / (2.0 * r).tan()
}

/// Radius in `(0, π/2)` with `2 cot 2r = α`.
pub fn radius_from_alpha(alpha: f64) -> f64 {
    0.5 * 2.0_f64.atan2(alpha)
}

/// `n` evenly spaced radii on `[r_min, r_max]` with the points inside the
/// `π/4` window removed. Returns `(kept, skipped)`.
pub fn radius_grid(r_min: f64, r_max: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let pts: Vec<f64> = match n {
        0 => Vec::new(),
        1 => vec![r_min],
        _ => (0..n)
            .map(|i| r_min + (r_max - r_min) * i as f64 / (n - 1) as f64)
            .collect(),
    };
    pts.into_iter()
        .partition(|r| (r - FRAC_PI_4).abs() >= QUARTER_PI_WINDOW)
}

/// The default 20-point radius grid used by the tube suites.
pub fn default_radius_grid() -> Vec<f64> {
    radius_grid(0.05, FRAC_PI_2 - 0.05, 20).0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum TubeVariant {
    /// `W_1`, `W_2` spanned by `Z`'s, each `A`-invariant.
    #[default]
    Preserving,
    /// `A W_1 = W_2`.
    Swapped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TubeOptions {
    /// Reject `r = π/4`, where `α` vanishes.
    pub non_vanishing: bool,
    pub variant: TubeVariant,
}

impl Default for TubeOptions {
    fn default() -> Self {
        Self {
            non_vanishing: true,
            variant: TubeVariant::Preserving,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TubeModel {
    k: usize,
    r: f64,
    variant: TubeVariant,
    data: HypersurfaceData,
    w1: Vec<AmbientVector>,
    w2: Vec<AmbientVector>,
}

impl TubeModel {
    pub fn build(k: usize, r: f64) -> Result<Self> {
        Self::build_with(k, r, TubeOptions::default())
    }

    pub fn build_with(k: usize, r: f64, opts: TubeOptions) -> Result<Self> {
        if k < 2 || 2 * k > MAX_M {
            return Err(GeometryError::InvalidParameter(format!(
                "tube needs 2 <= k <= {}, got k = {k}",
                MAX_M / 2
            )));
        }
        if !(r > 0.0 && r < FRAC_PI_2) {
            return Err(GeometryError::InvalidRadius {
                r,
                reason: "radius must lie in (0, pi/2)".into(),
            });
        }
        if opts.non_vanishing && (r - FRAC_PI_4).abs() <= 1e-12 {
            return Err(GeometryError::InvalidRadius {
                r,
                reason: "r = pi/4 gives alpha = 0; admissible radii are (0, pi/4) U (pi/4, pi/2)"
                    .into(),
            });
        }

        let m = 2 * k;
        let model = TangentModel::new(m)?;
        let normal = (model.z(1) + model.jz(2)) * FRAC_1_SQRT_2;
        let xi = (model.z(2) - model.jz(1)) * FRAC_1_SQRT_2;
        let alpha = tube_alpha(r);

        let (w1, w2) = match opts.variant {
            TubeVariant::Preserving => {
                let span = |lo: usize, hi: usize| {
                    (lo..=hi)
                        .flat_map(|i| [model.z(i), model.jz(i)])
                        .collect::<Vec<_>>()
                };
                (span(3, k + 1), span(k + 2, 2 * k))
            }
            TubeVariant::Swapped => {
                let mut w1 = Vec::new();
                let mut w2 = Vec::new();
                for j in 1..k {
                    let (a, b) = (2 + j, k + 1 + j);
                    let u = (model.z(a) + model.jz(b)) * FRAC_1_SQRT_2;
                    let v = (model.z(a) - model.jz(b)) * FRAC_1_SQRT_2;
                    w1.push(model.j() * &u);
                    w1.push(u);
                    w2.push(model.j() * &v);
                    w2.push(v);
                }
                (w1, w2)
            }
        };

        let dim = model.dim();
        let mut s = outer(&xi, &xi) * alpha;
        let neg_tan = -r.tan();
        let cot = 1.0 / r.tan();
        for w in &w1 {
            s += outer(w, w) * neg_tan;
        }
        for w in &w2 {
            s += outer(w, w) * cot;
        }
        debug_assert_eq!(s.nrows(), dim);

        let data = HypersurfaceData::induce_from_normal(model, normal, s)?;
        let tube = Self {
            k,
            r,
            variant: opts.variant,
            data,
            w1,
            w2,
        };
        tube.verify()?;
        Ok(tube)
    }

    fn verify(&self) -> Result<()> {
        let h = &self.data;
        let sp = h.split();
        let fail = |what: &str, value: f64| {
            Err(GeometryError::InvalidParameter(format!(
                "tube invariant violated: {what} = {value:.3e}"
            )))
        };
        if h.normal_angle().kind != SingularType::Isotropic {
            return fail("canonical angle offset", (h.normal_angle().t - FRAC_PI_4).abs());
        }
        let iso = sp.g_axi_xi.abs().max(sp.a_xi.dot(h.normal()).abs()).max(sp.an.dot(h.normal()).abs());
        if iso > CONSTRUCTION_TOL {
            return fail("isotropy defect", iso);
        }
        let comm = h.reeb_flow_commutator().norm();
        if comm > CONSTRUCTION_TOL {
            return fail("|S phi - phi S|", comm);
        }
        let kill = (h.shape() * &sp.a_xi).norm().max((h.shape() * &sp.an).norm());
        if kill > CONSTRUCTION_TOL {
            return fail("|S A xi| + |S AN|", kill);
        }
        let spec = h.tangent_spectrum(h.shape())?;
        let dev = max_spectrum_deviation(&spec.eigenvalues, &self.expected_shape_eigenvalues());
        if dev > 1e-10 {
            return fail("shape spectrum deviation", dev);
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.k
    }
    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn variant(&self) -> TubeVariant {
        self.variant
    }
    pub fn data(&self) -> &HypersurfaceData {
        &self.data
    }
    pub fn into_data(self) -> HypersurfaceData {
        self.data
    }
    pub fn alpha(&self) -> f64 {
        self.data.alpha()
    }
    pub fn w1(&self) -> &[AmbientVector] {
        &self.w1
    }
    pub fn w2(&self) -> &[AmbientVector] {
        &self.w2
    }

    /// `(value, multiplicity)` pairs of the principal curvatures on `TM`.
    pub fn expected_shape_spectrum(&self) -> Vec<(f64, usize)> {
        let k = self.k;
        vec![
            (tube_alpha(self.r), 1),
            (0.0, 2),
            (-self.r.tan(), 2 * k - 2),
            (1.0 / self.r.tan(), 2 * k - 2),
        ]
    }

    pub fn expected_shape_eigenvalues(&self) -> Vec<f64> {
        expand_sorted(&self.expected_shape_spectrum())
    }

    /// `(value, multiplicity)` pairs of the structure Jacobi operator on `TM`.
    pub fn expected_structure_jacobi_spectrum(&self) -> Vec<(f64, usize)> {
        let t = self.r.tan();
        vec![(0.0, 3), (t * t, 2 * self.k - 2), (1.0 / (t * t), 2 * self.k - 2)]
    }

    pub fn structure_jacobi_spectrum(&self) -> Result<SpectrumReport> {
        tube_structure_jacobi_spectrum(self)
    }

    pub fn to_record(&self) -> HypersurfaceRecord {
        let mut rec = self.data.to_record();
        rec.family = Some("T_A".into());
        rec.k = Some(self.k);
        rec.r = Some(self.r);
        rec
    }
}

/// Spectrum of `R_ξ` restricted to `TM`.
pub fn tube_structure_jacobi_spectrum(t: &TubeModel) -> Result<SpectrumReport> {
    let h = t.data();
    h.tangent_spectrum(&h.structure_jacobi())
}

/// Sorted list with every value repeated by its multiplicity.
pub fn expand_sorted(pairs: &[(f64, usize)]) -> Vec<f64> {
    let mut out: Vec<f64> = pairs
        .iter()
        .flat_map(|&(v, k)| std::iter::repeat_n(v, k))
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Largest relative deviation `|a_i − b_i| / max(1, |b_i|)` between two
/// sorted lists; infinite if the lengths differ.
pub fn max_spectrum_deviation(actual: &[f64], expected: &[f64]) -> f64 {
    if actual.len() != expected.len() {
        return f64::INFINITY;
    }
    actual
        .iter()
        .zip(expected)
        .map(|(a, b)| (a - b).abs() / b.abs().max(1.0))
        .fold(0.0, f64::max)
}

/// How the shape operator of a principal candidate acts on `𝒞`.
#[derive(Debug, Clone)]
pub enum CandidateSpectrum {
    /// `m − 1` values `λ_i` for `Z_{i+1}`; `JZ_{i+1}` receives the paired
    /// curvature `(αλ_i + 2)/(2λ_i − α)`.
    Paired(Vec<f64>),
    /// `2m − 2` values for `Z_2..Z_m, JZ_2..JZ_m`, unpaired.
    Diagonal(Vec<f64>),
    /// A symmetric `(2m−2) × (2m−2)` matrix in the frame `Z_2..Z_m, JZ_2..JZ_m`.
    Matrix(Operator),
}

/// Which of the derived pointwise constraints were imposed when building a candidate.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ConstraintFlags {
    pub conjugated_shape: bool,
    pub hopf_identity: bool,
    pub quadratic_with_a: bool,
    pub quadratic_conjugated: bool,
}

/// Hopf data with `A`-principal normal `N = Z_1`, so `AN = N`, `Aξ = −ξ`.
#[derive(Debug, Clone)]
pub struct PrincipalCandidate {
    data: HypersurfaceData,
    imposed_conjugation: Option<Operator>,
    flags: ConstraintFlags,
}

impl PrincipalCandidate {
    pub fn m(&self) -> usize {
        self.data.m()
    }
    pub fn alpha(&self) -> f64 {
        self.data.alpha()
    }
    pub fn data(&self) -> &HypersurfaceData {
        &self.data
    }
    pub fn flags(&self) -> ConstraintFlags {
        self.flags
    }

    /// Orthonormal frame `Z_2..Z_m, JZ_2..JZ_m` of `𝒞` as columns.
    pub fn complex_frame(&self) -> Operator {
        principal_complex_frame(self.data.model())
    }

    /// Replace the action of `A` on `𝒞` by `a_c` (given in [`complex_frame`]
    /// coordinates) when evaluating the derived equations.
    ///
    /// [`complex_frame`]: Self::complex_frame
    pub fn with_imposed_conjugation(mut self, a_c: Operator) -> Result<Self> {
        let n = 2 * self.m() - 2;
        if a_c.nrows() != n || a_c.ncols() != n {
            return Err(GeometryError::DimensionMismatch {
                expected: n,
                got: a_c.nrows(),
            });
        }
        self.imposed_conjugation = Some(a_c);
        Ok(self)
    }

    pub fn with_flags(mut self, flags: ConstraintFlags) -> Self {
        self.flags = flags;
        self
    }

    pub fn imposed_conjugation(&self) -> Option<&Operator> {
        self.imposed_conjugation.as_ref()
    }

    /// `A` on the ambient space with the imposed block substituted on `𝒞`.
    pub fn effective_conjugation(&self) -> Operator {
        let a = self.data.split().a.clone();
        match &self.imposed_conjugation {
            None => a,
            Some(a_c) => {
                let f = self.complex_frame();
                let pc = &f * f.transpose();
                let outside = Operator::identity(a.nrows(), a.ncols()) - &pc;
                &outside * &a * &outside + &f * a_c * f.transpose()
            }
        }
    }

    /// Candidate at which `∇_ξ R_ξ` vanishes pointwise: `S` diagonal on
    /// `Z_i ↦ λ`, `JZ_i ↦ μ` with `λ = μ + 6/α` and
    /// `μ² + (6/α − α)μ − 4 = 0`. It violates the Hopf identity.
    pub fn reeb_parallel_point(m: usize, alpha: f64) -> Result<Self> {
        if alpha == 0.0 || !alpha.is_finite() {
            return Err(GeometryError::VanishingReebCurvature);
        }
        let b = 6.0 / alpha - alpha;
        let mu = 0.5 * (-b + (b * b + 16.0).sqrt());
        let lambda = mu + 6.0 / alpha;
        let mut diag = vec![lambda; m - 1];
        diag.extend(std::iter::repeat_n(mu, m - 1));
        build_principal_candidate(m, alpha, CandidateSpectrum::Diagonal(diag))
    }

    /// Candidate with `A|𝒞 = Id` imposed and `S|𝒞` chosen so that both
    /// quadratic relations hold: eigenvalues are the roots of
    /// `αλ² − (α² + 6)λ + 2α = 0`, split `n_low : n_high` in a rotated frame.
    pub fn quadratic_solution<R: Rng + ?Sized>(m: usize, alpha: f64, rng: &mut R) -> Result<Self> {
        if alpha == 0.0 || !alpha.is_finite() {
            return Err(GeometryError::VanishingReebCurvature);
        }
        let n = 2 * m - 2;
        let (lo, hi) = quadratic_roots(alpha);
        let n_low = rng.gen_range(0..=n);
        let q = random_orthogonal(n, rng);
        let mut d = Operator::zeros(n, n);
        for i in 0..n {
            d[(i, i)] = if i < n_low { lo } else { hi };
        }
        let s_c = &q * d * q.transpose();
        let s_c = (&s_c + s_c.transpose()) * 0.5;
        let c = build_principal_candidate(m, alpha, CandidateSpectrum::Matrix(s_c))?;
        Ok(c.with_imposed_conjugation(Operator::identity(n, n))?
            .with_flags(ConstraintFlags {
                quadratic_with_a: true,
                quadratic_conjugated: true,
                ..ConstraintFlags::default()
            }))
    }
}

/// Roots of `αλ² − (α² + 6)λ + 2α = 0`, ascending.
pub fn quadratic_roots(alpha: f64) -> (f64, f64) {
    let b = alpha * alpha + 6.0;
    let disc = (b * b - 8.0 * alpha * alpha).sqrt();
    let r1 = (b - disc) / (2.0 * alpha);
    let r2 = (b + disc) / (2.0 * alpha);
    (r1.min(r2), r1.max(r2))
}

fn principal_complex_frame(model: &TangentModel) -> Operator {
    let m = model.m();
    let cols: Vec<AmbientVector> = (2..=m)
        .map(|i| model.z(i))
        .chain((2..=m).map(|i| model.jz(i)))
        .collect();
    Operator::from_columns(&cols)
}

pub fn build_principal_candidate(
    m: usize,
    alpha: f64,
    spec: CandidateSpectrum,
) -> Result<PrincipalCandidate> {
    if m < 2 {
        return Err(GeometryError::InvalidDimension { m, max: MAX_M });
    }
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(GeometryError::VanishingReebCurvature);
    }
    let model = TangentModel::new(m)?;
    let n = 2 * m - 2;
    let frame = principal_complex_frame(&model);
    let (s_c, flags) = match spec {
        CandidateSpectrum::Paired(lambdas) => {
            if lambdas.len() != m - 1 {
                return Err(GeometryError::DimensionMismatch {
                    expected: m - 1,
                    got: lambdas.len(),
                });
            }
            let mut d = Operator::zeros(n, n);
            for (i, &l) in lambdas.iter().enumerate() {
                if (2.0 * l - alpha).abs() < 1e-12 {
                    return Err(GeometryError::InvalidParameter(format!(
                        "principal curvature {l} equals alpha/2; no paired value exists"
                    )));
                }
                d[(i, i)] = l;
                d[(m - 1 + i, m - 1 + i)] = paired_curvature(alpha, l);
            }
            (
                d,
                ConstraintFlags {
                    hopf_identity: true,
                    ..ConstraintFlags::default()
                },
            )
        }
        CandidateSpectrum::Diagonal(values) => {
            if values.len() != n {
                return Err(GeometryError::DimensionMismatch {
                    expected: n,
                    got: values.len(),
                });
            }
            (
                Operator::from_diagonal(&AmbientVector::from_vec(values)),
                ConstraintFlags::default(),
            )
        }
        CandidateSpectrum::Matrix(mat) => {
            if mat.nrows() != n || mat.ncols() != n {
                return Err(GeometryError::DimensionMismatch {
                    expected: n,
                    got: mat.nrows(),
                });
            }
            let defect = asymmetry(&mat);
            if defect > 1e-12 {
                return Err(GeometryError::Asymmetric { defect, tol: 1e-12 });
            }
            (mat, ConstraintFlags::default())
        }
    };
    let normal = model.z(1);
    let xi = -model.jz(1);
    let s = outer(&xi, &xi) * alpha + &frame * s_c * frame.transpose();
    let s = (&s + s.transpose()) * 0.5;
    let data = HypersurfaceData::induce_from_normal(model, normal, s)?;
    Ok(PrincipalCandidate {
        data,
        imposed_conjugation: None,
        flags,
    })
}

/// Haar-ish random orthogonal matrix from Gram-Schmidt of Gaussian columns.
pub fn random_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Operator {
    let g = Operator::from_fn(n, n, |_, _| gaussian(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            let col = -q.column(j);
            q.set_column(j, &col);
        }
    }
    q
}

pub(crate) fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box-Muller
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub fn random_unit<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> AmbientVector {
    loop {
        let v = AmbientVector::from_fn(dim, |_, _| gaussian(rng));
        let n = v.norm();
        if n > 1e-6 {
            return v / n;
        }
    }
}

/// Isotropic Hopf data sharing the tube's `N`, `α = 2 cot 2r`, and
/// `SAξ = SAN = 0`, but with `S|𝒬` built from random `φ`-pairs
/// `(λ, (αλ+2)/(2λ−α))` in a random `J`-adapted frame. The Hopf identity
/// holds exactly while `Sφ ≠ φS` in general.
pub fn perturbed_tube<R: Rng + ?Sized>(k: usize, r: f64, rng: &mut R) -> Result<HypersurfaceData> {
    let tube = TubeModel::build(k, r)?;
    let alpha = tube.alpha();
    let h = tube.data();
    let model = h.model().clone();
    let j = model.j();
    let sp = h.split();
    let fixed = vec![
        h.normal().clone(),
        h.xi().clone(),
        sp.a_xi.clone(),
        &sp.an / sp.an.norm(),
    ];
    let dim = model.dim();

    let mut frame = fixed.clone();
    let mut s = outer(h.xi(), h.xi()) * alpha;
    while frame.len() < dim {
        let mut v = random_unit(dim, rng);
        for _ in 0..2 {
            for b in &frame {
                let c = b.dot(&v);
                v.axpy(-c, b, 1.0);
            }
        }
        let nv = v.norm();
        if nv < 1e-6 {
            continue;
        }
        v /= nv;
        let jv = j * &v;
        let lambda = loop {
            let l: f64 = rng.gen_range(-3.0..3.0);
            if (2.0 * l - alpha).abs() > 0.2 {
                break l;
            }
        };
        s += outer(&v, &v) * lambda + outer(&jv, &jv) * paired_curvature(alpha, lambda);
        frame.push(v);
        frame.push(jv);
    }
    HypersurfaceData::induce_from_normal(model, h.normal().clone(), s)
}

/// Hopf data with a random unit normal and random symmetric `S` on `𝒞`.
pub fn random_hopf<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<HypersurfaceData> {
    let model = TangentModel::new(m)?;
    let dim = model.dim();
    let normal = random_unit(dim, rng);
    let xi = -(model.j() * &normal);
    let alpha: f64 = rng.gen_range(-3.0..3.0);
    let rest = orthonormal_complement(&[normal.clone(), xi.clone()], dim);
    let f = Operator::from_columns(&rest);
    let g = Operator::from_fn(rest.len(), rest.len(), |_, _| gaussian(rng));
    let sym = (&g + g.transpose()) * 0.5;
    let s = outer(&xi, &xi) * alpha + &f * sym * f.transpose();
    let s = (&s + s.transpose()) * 0.5;
    HypersurfaceData::induce_from_normal(model, normal, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn alpha_at_pi_over_six() {
        let t = TubeModel::build(2, PI / 6.0).unwrap();
        assert!((t.alpha() - 1.154_700_538_379_251_5).abs() < 1e-12);
    }

    #[test]
    fn shape_spectrum_pi_over_six() {
        let t = TubeModel::build(2, PI / 6.0).unwrap();
        let spec = t.data().tangent_spectrum(t.data().shape()).unwrap();
        let s3 = 3.0_f64.sqrt();
        let expected = expand_sorted(&[(2.0 / s3, 1), (0.0, 2), (-1.0 / s3, 2), (s3, 2)]);
        assert!(max_spectrum_deviation(&spec.eigenvalues, &expected) < 1e-12);
    }

    #[test]
    fn tangent_dimension_k3() {
        let t = TubeModel::build(3, 0.4).unwrap();
        assert_eq!(t.data().tangent_basis().len(), 11);
        let total: usize = t.expected_shape_spectrum().iter().map(|p| p.1).sum();
        assert_eq!(total, 11);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(TubeModel::build(1, 0.5).is_err());
        assert!(TubeModel::build(2, 0.0).is_err());
        assert!(TubeModel::build(2, FRAC_PI_2).is_err());
        assert!(matches!(
            TubeModel::build(2, FRAC_PI_4),
            Err(GeometryError::InvalidRadius { .. })
        ));
        let t = TubeModel::build_with(
            2,
            FRAC_PI_4,
            TubeOptions {
                non_vanishing: false,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(t.alpha().abs() < 1e-15);
    }

    #[test]
    fn swapped_variant_swaps_under_a() {
        let t = TubeModel::build_with(
            3,
            0.5,
            TubeOptions {
                variant: TubeVariant::Swapped,
                ..Default::default()
            },
        )
        .unwrap();
        let a = t.data().model().a();
        let w2 = Operator::from_columns(t.w2());
        let proj2 = &w2 * w2.transpose();
        for w in t.w1() {
            let aw = a * w;
            assert!((&proj2 * &aw - &aw).norm() < 1e-14);
        }
    }

    #[test]
    fn radius_inversion() {
        for &r in &[0.1, 0.5, 0.7, 0.9, 1.4] {
            assert!((radius_from_alpha(tube_alpha(r)) - r).abs() < 1e-13);
        }
    }

    #[test]
    fn grid_shapes() {
        assert_eq!(default_radius_grid().len(), 20);
        let (kept, skipped) = radius_grid(0.1, 1.5, 30);
        assert_eq!(kept.len() + skipped.len(), 30);
        assert_eq!(skipped.len(), 1);
    }

    #[test]
    fn paired_curvature_is_involution() {
        for &alpha in &[-2.0, 0.3, 1.0, 4.0] {
            for &l in &[-1.5, 0.2, 2.5] {
                let mu = paired_curvature(alpha, l);
                assert!((paired_curvature(alpha, mu) - l).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn candidate_rejects_zero_alpha() {
        assert!(matches!(
            build_principal_candidate(3, 0.0, CandidateSpectrum::Paired(vec![1.0, 2.0])),
            Err(GeometryError::VanishingReebCurvature)
        ));
    }

    #[test]
    fn candidate_is_hopf_and_principal() {
        let c = build_principal_candidate(3, 1.0, CandidateSpectrum::Paired(vec![0.3, -2.0])).unwrap();
        let h = c.data();
        assert!(h.is_hopf());
        assert_eq!(h.normal_angle().kind, SingularType::Principal);
        for x in h.tangent_basis() {
            assert!((h.model().a() * &x).dot(h.normal()).abs() < 1e-15);
        }
    }

    #[test]
    fn perturbed_tube_is_isotropic_hopf() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = perturbed_tube(3, 0.6, &mut rng).unwrap();
        assert!(h.is_hopf());
        assert_eq!(h.normal_angle().kind, SingularType::Isotropic);
        assert!((h.shape() * &h.split().a_xi).norm() < 1e-12);
        assert!(h.reeb_flow_commutator().norm() > 1e-3);
    }

    #[test]
    fn quadratic_roots_solve() {
        for &a in &[-3.0, -0.5, 0.7, 2.0] {
            let (lo, hi) = quadratic_roots(a);
            for l in [lo, hi] {
                assert!((a * l * l - (a * a + 6.0) * l + 2.0 * a).abs() < 1e-10);
            }
        }
    }
}
