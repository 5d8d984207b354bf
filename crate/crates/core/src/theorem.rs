//! Logical chains behind the two classification results, evaluated at a point.
//!
//! For an `A`-principal normal, Reeb-parallel `R_ξ` forces a sequence of
//! operator identities on `𝒞` ending in two quadratic relations whose
//! difference is `4α(AX − X) = 0`. `A|𝒞 = Id` then has trace `2m − 2`, while
//! `trace A = 0` and `g(Aξ,ξ) + g(AN,N) = 0` force `trace A|𝒞 = 0`.
//!
//! For an `A`-isotropic normal, Reeb-parallel `R_ξ` is equivalent to
//! `Sφ = φS`, and the classifier matches the data against the tube `𝒯_A`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{GeometryError, Result};
use crate::hypersurface::HypersurfaceData;
use crate::linalg::{op_norm, AmbientVector, Operator};
use crate::models::{
    expand_sorted, max_spectrum_deviation, radius_from_alpha, random_orthogonal, tube_alpha,
    PrincipalCandidate,
};
use crate::report::CheckReport;
use crate::tangent::{SingularType, TangentModel};

/// Residual bound for the derived identities.
pub const CHAIN_TOL: f64 = 1e-10;
/// Relative tolerance for matching a spectrum against the tube template.
pub const SPECTRUM_MATCH_REL_TOL: f64 = 1e-8;
/// Default bound on `|∇_ξ R_ξ|` for classification.
pub const CLASSIFY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "reason", rename_all = "kebab-case")]
pub enum ChainVerdict {
    Consistent,
    Contradiction(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainResidual {
    pub name: &'static str,
    pub identity: &'static str,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainReport {
    pub m: usize,
    pub alpha: f64,
    pub residuals: Vec<ChainResidual>,
    /// `|A|𝒞 − Id|` (operator norm).
    pub conjugation_defect: f64,
    pub trace_on_c: f64,
    pub tol: f64,
    pub verdict: ChainVerdict,
}

impl ChainReport {
    pub fn residual(&self, name: &str) -> Option<f64> {
        self.residuals.iter().find(|r| r.name == name).map(|r| r.residual)
    }
}

pub fn principal_chain_residuals(c: &PrincipalCandidate) -> Result<ChainReport> {
    principal_chain_residuals_with_tol(c, CHAIN_TOL)
}

/// Evaluate every identity of the principal chain over a basis of `𝒞`,
/// using the imposed conjugation (if any) in place of `A` on `𝒞`.
pub fn principal_chain_residuals_with_tol(c: &PrincipalCandidate, tol: f64) -> Result<ChainReport> {
    let h = c.data();
    let alpha = h.alpha();
    if alpha == 0.0 {
        return Err(GeometryError::VanishingReebCurvature);
    }
    let m = h.m();
    let a = c.effective_conjugation();
    let j = h.model().j();
    let phi = h.phi();
    let s = h.shape();
    let xi = h.xi();
    let n = h.normal();
    let q = h.q_xi();
    let xi_alpha = h.dalpha().dot(xi);
    let nabla_s = h.nabla_s_at_xi_operator()?;
    let s2 = s * s;
    let frame = c.complex_frame();
    let basis: Vec<AmbientVector> = frame.column_iter().map(|c| c.into_owned()).collect();

    let worst = |f: &dyn Fn(&AmbientVector) -> AmbientVector| {
        basis.iter().map(|y| f(y).norm()).fold(0.0, f64::max)
    };
    let phi_a = phi * &a;

    let mut residuals = vec![
        ChainResidual {
            name: "reeb_parallel_principal",
            identity: "-q(xi) JAY - q(xi) eta(Y) N + (xi alpha) SY + alpha (nabla_xi S)Y - 2 alpha (xi alpha) eta(Y) xi = 0",
            residual: worst(&|y| {
                let eta = y.dot(xi);
                -q * (j * (&a * y)) - q * eta * n + xi_alpha * (s * y) + alpha * (&nabla_s * y)
                    - 2.0 * alpha * xi_alpha * eta * xi
            }),
        },
        ChainResidual {
            name: "reeb_derivative_of_shape",
            identity: "(nabla_xi S)Y = 2 phi A Y",
            residual: worst(&|y| &nabla_s * y - 2.0 * (&phi_a * y)),
        },
        ChainResidual {
            name: "codazzi_combined",
            identity: "alpha phi S Y - S phi S Y + phi Y = 3 phi A Y",
            residual: worst(&|y| {
                let sy = s * y;
                alpha * (phi * &sy) - s * (phi * &sy) + phi * y - 3.0 * (&phi_a * y)
            }),
        },
        ChainResidual {
            name: "principal_hopf_identity",
            identity: "2 S phi S Y = alpha (S phi + phi S) Y + 2 phi Y",
            residual: worst(&|y| {
                2.0 * (s * phi * s * y) - alpha * ((s * phi + phi * s) * y) - 2.0 * (phi * y)
            }),
        },
        ChainResidual {
            name: "commutator_identity",
            identity: "alpha (phi S - S phi) Y = 6 phi A Y",
            residual: worst(&|y| alpha * ((phi * s - s * phi) * y) - 6.0 * (&phi_a * y)),
        },
        ChainResidual {
            name: "conjugation_fixes_shape",
            identity: "A S X = S X for X in C",
            residual: worst(&|x| &a * (s * x) - s * x),
        },
        ChainResidual {
            name: "phi_s_phi_identity",
            identity: "alpha^2 phi S phi X = -2 alpha S^2 X + alpha^2 S X + 2 alpha X + 12 S X",
            residual: worst(&|x| {
                alpha * alpha * (phi * s * phi * x) + 2.0 * alpha * (&s2 * x)
                    - alpha * alpha * (s * x)
                    - 2.0 * alpha * x
                    - 12.0 * (s * x)
            }),
        },
    ];
    let quad_a = |x: &AmbientVector| {
        3.0 * alpha * (&a * x) + alpha * (&s2 * x) - alpha * alpha * (s * x) - alpha * x - 6.0 * (s * x)
    };
    let quad_conj = |x: &AmbientVector| {
        3.0 * alpha * x + alpha * (&s2 * x) - alpha * alpha * (s * x) - alpha * (&a * x) - 6.0 * (s * x)
    };
    residuals.push(ChainResidual {
        name: "quadratic_with_a",
        identity: "3 alpha A X + alpha S^2 X - alpha^2 S X - alpha X - 6 S X = 0",
        residual: worst(&quad_a),
    });
    residuals.push(ChainResidual {
        name: "quadratic_conjugated",
        identity: "3 alpha X + alpha S^2 X - alpha^2 S X - alpha A X - 6 S X = 0",
        residual: worst(&quad_conj),
    });

    let a_c = frame.transpose() * &a * &frame;
    let nc = a_c.nrows();
    let conjugation_defect = op_norm(&(&a_c - Operator::identity(nc, nc)));
    let trace_on_c = a_c.trace();

    let failing: Vec<&str> = residuals
        .iter()
        .filter(|r| r.residual.is_nan() || r.residual >= tol)
        .map(|r| r.name)
        .collect();
    let verdict = if !failing.is_empty() {
        ChainVerdict::Contradiction(format!(
            "derived identities violated: {}",
            failing.join(", ")
        ))
    } else if trace_on_c.abs() > tol {
        ChainVerdict::Contradiction(format!(
            "identities force A|C = Id with trace {} = 2m-2, but trace(A) = 0 requires trace(A|C) = 0",
            fmt_num(trace_on_c)
        ))
    } else {
        ChainVerdict::Consistent
    };

    Ok(ChainReport {
        m,
        alpha,
        residuals,
        conjugation_defect,
        trace_on_c,
        tol,
        verdict,
    })
}

fn fmt_num(x: f64) -> String {
    if (x - x.round()).abs() < 1e-9 {
        format!("{}", x.round() as i64)
    } else {
        format!("{x}")
    }
}

/// Outcome of the nonexistence argument for one sampled `α`.
#[derive(Debug, Clone, Serialize)]
pub struct SampleOutcome {
    pub alpha: f64,
    /// `|A_c − Id|` at the least-squares solution of the stacked system for the solvable `S`.
    pub identity_defect: f64,
    /// Stacked residual of both quadratic relations at that solution.
    pub joint_residual: f64,
    /// `|(L_A − L_conj) − 4α(A_c − Id)|` for a random `A_c` and random symmetric `S`.
    pub difference_identity: f64,
    /// Least-squares residual of the stacked system for a random symmetric `S`.
    pub generic_residual: f64,
    /// `trace(A_c)` at the forced solution.
    pub trace_on_c: f64,
    /// `|A_c φ + φ A_c|` at the forced solution (anti-commutation defect).
    pub anticommutation_defect: f64,
    pub chain_verdict: ChainVerdict,
    pub contradiction: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct NonexistenceCertificate {
    pub m: usize,
    pub seed: u64,
    /// `trace(A)` over the full tangent space of the model.
    pub model_trace: f64,
    pub samples: Vec<SampleOutcome>,
}

impl NonexistenceCertificate {
    pub fn passed(&self) -> bool {
        self.model_trace == 0.0 && self.samples.iter().all(|s| s.contradiction)
    }

    pub fn to_report(&self, tol: f64) -> CheckReport {
        let mut rep = CheckReport::new("nonexistence")
            .param("m", self.m)
            .param("samples", self.samples.len())
            .param("tol", tol)
            .with_seed(self.seed);
        rep.check("trace_A_full_space", self.model_trace.abs(), tol);
        let expected = (2 * self.m - 2) as f64;
        for (i, s) in self.samples.iter().enumerate() {
            let tag = format!("sample[{i}]");
            rep.check(&format!("{tag}.joint_system_solvable"), s.joint_residual, tol);
            rep.check(&format!("{tag}.forces_identity_on_C"), s.identity_defect, tol);
            rep.check(&format!("{tag}.difference_identity"), s.difference_identity, tol);
            rep.check(&format!("{tag}.trace_on_C_is_2m-2"), (s.trace_on_c - expected).abs(), tol);
            rep.check_exceeds(
                &format!("{tag}.identity_not_a_conjugation"),
                s.anticommutation_defect,
                tol,
            );
            rep.check_exceeds(&format!("{tag}.contradiction"), if s.contradiction { 1.0 } else { 0.0 }, 0.5);
        }
        rep.outcome(
            "alphas",
            self.samples.iter().map(|s| s.alpha).collect::<Vec<_>>(),
        );
        rep.outcome(
            "verdict",
            if self.passed() {
                "contradiction in every sample"
            } else {
                "certificate incomplete"
            },
        );
        rep
    }
}

/// Draw `count` nonzero `α` values with `|α| ∈ [0.1, 5]` and random sign.
pub fn sample_alphas(count: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mag: f64 = rng.gen_range(0.1..5.0);
            if rng.gen::<bool>() {
                mag
            } else {
                -mag
            }
        })
        .collect()
}

/// For each `α`: solve the stacked pair of quadratic relations for the
/// unknown block `A_c = A|𝒞`, confirm the solution is `Id`, and compare its
/// trace `2m − 2` with the structural requirement `trace A|𝒞 = 0`.
pub fn principal_nonexistence_certificate(
    m: usize,
    alpha_samples: &[f64],
    seed: u64,
) -> Result<NonexistenceCertificate> {
    if m < 3 {
        return Err(GeometryError::InvalidParameter(format!(
            "nonexistence certificate needs m >= 3, got {m}"
        )));
    }
    if let Some(bad) = alpha_samples.iter().find(|a| **a == 0.0 || !a.is_finite()) {
        return Err(GeometryError::InvalidParameter(format!(
            "alpha samples must be finite and nonzero, got {bad}"
        )));
    }
    let model = TangentModel::new(m)?;
    let model_trace = model.a().trace();
    let n = 2 * m - 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = Operator::identity(n, n);

    let mut samples = Vec::with_capacity(alpha_samples.len());
    for &alpha in alpha_samples {
        let cand = PrincipalCandidate::quadratic_solution(m, alpha, &mut rng)?;
        let s_c = {
            let f = cand.complex_frame();
            f.transpose() * cand.data().shape() * &f
        };
        let phi_c = {
            let f = cand.complex_frame();
            f.transpose() * cand.data().phi() * &f
        };

        // L_A(A_c) = 3α A_c + P(S),  L_conj(A_c) = −α A_c + 3α Id + P(S)
        // with P(S) = α S² − α² S − 6 S (all on 𝒞).
        let (a_c, joint_residual) = solve_stacked(alpha, &s_c);
        let identity_defect = op_norm(&(&a_c - &id));
        let anticommutation_defect = op_norm(&(&a_c * &phi_c + &phi_c * &a_c));

        let s_rand = {
            let g = Operator::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
            (&g + g.transpose()) * 0.5
        };
        let a_rand = {
            let q = random_orthogonal(n, &mut rng);
            let signs = Operator::from_fn(n, n, |i, j| {
                if i == j {
                    if i % 2 == 0 { 1.0 } else { -1.0 }
                } else {
                    0.0
                }
            });
            &q * signs * q.transpose()
        };
        let difference_identity = {
            let p = poly(alpha, &s_rand);
            let l_a = 3.0 * alpha * &a_rand + &p - alpha * &id;
            let l_conj = 3.0 * alpha * &id + &p - alpha * &a_rand;
            (l_a - l_conj - 4.0 * alpha * (&a_rand - &id)).norm()
        };
        let (_, generic_residual) = solve_stacked(alpha, &s_rand);

        let chain = principal_chain_residuals(&cand)?;
        let forced = identity_defect < CHAIN_TOL && joint_residual < CHAIN_TOL;
        let trace_on_c = a_c.trace();
        let contradiction = forced
            && trace_on_c.abs() > CHAIN_TOL
            && matches!(chain.verdict, ChainVerdict::Contradiction(_));

        samples.push(SampleOutcome {
            alpha,
            identity_defect,
            joint_residual,
            difference_identity,
            generic_residual,
            trace_on_c,
            anticommutation_defect,
            chain_verdict: chain.verdict,
            contradiction,
        });
    }
    Ok(NonexistenceCertificate {
        m,
        seed,
        model_trace,
        samples,
    })
}

fn poly(alpha: f64, s: &Operator) -> Operator {
    alpha * (s * s) - alpha * alpha * s - 6.0 * s
}

/// Least-squares solution of
/// `3α A_c = −P(S) + α Id` and `−α A_c = −P(S) − 3α Id` for `A_c`.
/// The coefficient map `A_c ↦ (3α A_c, −α A_c)` has `CᵀC = 10α² Id`, so the
/// normal equations give `A_c = (3α b₁ − α b₂) / (10α²)`.
fn solve_stacked(alpha: f64, s_c: &Operator) -> (Operator, f64) {
    let n = s_c.nrows();
    let id = Operator::identity(n, n);
    let p = poly(alpha, s_c);
    let b1 = -&p + alpha * &id;
    let b2 = -&p - 3.0 * alpha * &id;
    let a_c = (3.0 * alpha * &b1 - alpha * &b2) / (10.0 * alpha * alpha);
    let r1 = 3.0 * alpha * &a_c - &b1;
    let r2 = -alpha * &a_c - &b2;
    let residual = (r1.norm_squared() + r2.norm_squared()).sqrt();
    (a_c, residual)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ClassificationVerdict {
    /// `A`-principal Hopf data with Reeb-parallel `R_ξ` and `α ≠ 0`: no such
    /// hypersurface exists, so the data cannot come from one.
    NonexistentPrincipal,
    Tube { k: usize, r: f64 },
    OutsideHypotheses { reason: String },
}

impl ClassificationVerdict {
    pub fn label(&self) -> String {
        match self {
            ClassificationVerdict::NonexistentPrincipal => "nonexistent-principal".into(),
            ClassificationVerdict::Tube { k, r } => format!("tube k={k} r={r:.6}"),
            ClassificationVerdict::OutsideHypotheses { reason } => {
                format!("outside-hypotheses ({reason})")
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationResult {
    pub singular_type: SingularType,
    pub canonical_angle: f64,
    pub hopf: bool,
    pub hopf_defect: f64,
    pub alpha: f64,
    pub reeb_parallel_residual: Option<f64>,
    pub spectrum_deviation: Option<f64>,
    pub verdict: ClassificationVerdict,
}

pub fn classify(h: &HypersurfaceData, tol: f64) -> Result<ClassificationResult> {
    let angle = h.normal_angle();
    let hopf_defect = h.hopf_defect();
    let hopf = h.is_hopf();
    let alpha = h.alpha();
    let mut out = ClassificationResult {
        singular_type: angle.kind,
        canonical_angle: angle.t,
        hopf,
        hopf_defect,
        alpha,
        reeb_parallel_residual: None,
        spectrum_deviation: None,
        verdict: ClassificationVerdict::NonexistentPrincipal,
    };
    let outside = |reason: String| ClassificationVerdict::OutsideHypotheses { reason };

    if !hopf {
        out.verdict = outside(format!("not Hopf, |S xi - alpha xi| = {hopf_defect:.3e}"));
        return Ok(out);
    }
    if alpha.abs() < tol {
        out.verdict = outside("vanishing geodesic Reeb flow".into());
        return Ok(out);
    }
    let residual = h.reeb_parallel_residual()?;
    out.reeb_parallel_residual = Some(residual);
    let parallel = residual < tol;

    out.verdict = match angle.kind {
        SingularType::Generic => outside(format!(
            "normal is not singular (canonical angle t = {:.6})",
            angle.t
        )),
        SingularType::Principal if parallel => ClassificationVerdict::NonexistentPrincipal,
        SingularType::Principal | SingularType::Isotropic if !parallel => outside(format!(
            "structure Jacobi operator is not Reeb-parallel (residual {residual:.3e})"
        )),
        _ => {
            let m = h.m();
            let r = radius_from_alpha(alpha);
            if !m.is_multiple_of(2) || m < 4 {
                outside(format!("isotropic Reeb-parallel data needs even m >= 4, got m = {m}"))
            } else {
                let k = m / 2;
                let t = r.tan();
                let template = expand_sorted(&[
                    (tube_alpha(r), 1),
                    (0.0, 2),
                    (-t, 2 * k - 2),
                    (1.0 / t, 2 * k - 2),
                ]);
                let spec = h.tangent_spectrum(h.shape())?;
                let dev = max_spectrum_deviation(&spec.eigenvalues, &template);
                out.spectrum_deviation = Some(dev);
                if dev <= SPECTRUM_MATCH_REL_TOL {
                    ClassificationVerdict::Tube { k, r }
                } else {
                    outside(format!(
                        "principal curvatures do not match the tube template (deviation {dev:.3e})"
                    ))
                }
            }
        }
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_principal_candidate, CandidateSpectrum, TubeModel, TubeOptions};
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn tube_round_trip() {
        let t = TubeModel::build(2, 0.6).unwrap();
        let c = classify(t.data(), CLASSIFY_TOL).unwrap();
        match c.verdict {
            ClassificationVerdict::Tube { k, r } => {
                assert_eq!(k, 2);
                assert!((r - 0.6).abs() < 1e-10);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(c.verdict.label(), "tube k=2 r=0.600000");
    }

    #[test]
    fn vanishing_alpha_is_outside() {
        let t = TubeModel::build_with(
            2,
            FRAC_PI_4,
            TubeOptions {
                non_vanishing: false,
                ..Default::default()
            },
        )
        .unwrap();
        let c = classify(t.data(), CLASSIFY_TOL).unwrap();
        assert_eq!(
            c.verdict,
            ClassificationVerdict::OutsideHypotheses {
                reason: "vanishing geodesic Reeb flow".into()
            }
        );
    }

    #[test]
    fn reeb_parallel_principal_point_is_nonexistent() {
        let c = PrincipalCandidate::reeb_parallel_point(3, 0.8).unwrap();
        let res = classify(c.data(), CLASSIFY_TOL).unwrap();
        assert_eq!(res.verdict, ClassificationVerdict::NonexistentPrincipal);
        let chain = principal_chain_residuals(&c).unwrap();
        assert!(chain.residual("reeb_derivative_of_shape").unwrap() < 1e-12);
        assert!(chain.residual("codazzi_combined").unwrap() < 1e-12);
        assert!(chain.residual("principal_hopf_identity").unwrap() < 1e-12);
        assert!(chain.residual("commutator_identity").unwrap() < 1e-12);
        assert!(chain.residual("conjugation_fixes_shape").unwrap() > 0.1);
        assert!(chain.residual("phi_s_phi_identity").unwrap() > 0.1);
        assert!(matches!(chain.verdict, ChainVerdict::Contradiction(_)));
    }

    #[test]
    fn generic_paired_candidate_breaks_commutator_identity() {
        let c = build_principal_candidate(3, 1.0, CandidateSpectrum::Paired(vec![0.3, -1.2])).unwrap();
        let chain = principal_chain_residuals(&c).unwrap();
        assert!(chain.residual("principal_hopf_identity").unwrap() < 1e-12);
        assert!(chain.residual("commutator_identity").unwrap() > 1e-3);
        assert!(matches!(chain.verdict, ChainVerdict::Contradiction(_)));
    }

    #[test]
    fn imposed_identity_makes_quadratics_coincide() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let c = PrincipalCandidate::quadratic_solution(3, 1.3, &mut rng).unwrap();
        let chain = principal_chain_residuals(&c).unwrap();
        let qa = chain.residual("quadratic_with_a").unwrap();
        let qc = chain.residual("quadratic_conjugated").unwrap();
        assert!(qa < 1e-12 && qc < 1e-12);
        assert!((chain.trace_on_c - 4.0).abs() < 1e-12);
        assert!(chain.conjugation_defect < 1e-12);
        assert!(matches!(chain.verdict, ChainVerdict::Contradiction(_)));
    }

    #[test]
    fn certificate_small() {
        let cert = principal_nonexistence_certificate(3, &[0.5, -0.5, 1.0, -1.0, 2.0], 7).unwrap();
        assert!(cert.passed());
        for s in &cert.samples {
            assert!((s.trace_on_c - 4.0).abs() < 1e-10);
            assert!(s.generic_residual > 1e-6);
        }
        assert!(principal_nonexistence_certificate(3, &[0.0], 7).is_err());
        assert!(principal_nonexistence_certificate(2, &[1.0], 7).is_err());
    }
}
