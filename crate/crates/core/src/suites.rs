//! Verification suites behind the command-line subcommands. Each returns a
//! [`CheckReport`]; errors are reserved for invalid input.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_3};
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{GeometryError, Result};
use crate::hypersurface::{HypersurfaceData, HypersurfaceRecord};
use crate::linalg::{asymmetry, Operator, SpectrumReport};
use crate::models::{
    expand_sorted, max_spectrum_deviation, radius_grid, random_unit, TubeModel, TubeOptions,
};
use crate::report::CheckReport;
use crate::tangent::{SingularType, TangentModel};
use crate::theorem::{classify, principal_nonexistence_certificate, ClassificationVerdict};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const AMBIENT_RANDOM_TRIPLES: usize = 20;

/// Compare a computed spectrum with `(value, multiplicity)` pairs: one
/// check on the eigenvalues (absolute), one on the multiplicity pattern.
fn spectrum_checks(
    rep: &mut CheckReport,
    name: &str,
    actual: &SpectrumReport,
    expected: &[(f64, usize)],
    tol: f64,
) {
    let want = expand_sorted(expected);
    let dev = if want.len() == actual.eigenvalues.len() {
        actual
            .eigenvalues
            .iter()
            .zip(&want)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    rep.check(&format!("{name}.eigenvalues"), dev, tol);

    let mut mismatched = 0usize;
    let mut want_pairs: Vec<(f64, usize)> = expected.iter().copied().filter(|p| p.1 > 0).collect();
    want_pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    // merge coincident expected values (e.g. tan²r = cot²r at r = π/4)
    let mut merged: Vec<(f64, usize)> = Vec::new();
    for (v, k) in want_pairs {
        match merged.last_mut() {
            Some(last) if (last.0 - v).abs() <= tol => last.1 += k,
            _ => merged.push((v, k)),
        }
    }
    for (v, k) in &merged {
        let got = actual.multiplicity_of(*v, tol);
        mismatched += got.abs_diff(*k);
    }
    let got_total: usize = actual.clusters.iter().map(|c| c.multiplicity).sum();
    let want_total: usize = merged.iter().map(|p| p.1).sum();
    mismatched += got_total.abs_diff(want_total);
    rep.check(&format!("{name}.multiplicities"), mismatched as f64, 0.0);
}

/// Tangent-space algebra and both singular Jacobi spectra.
pub fn cmd_verify_ambient(m: usize, tol: f64, seed: u64) -> Result<CheckReport> {
    check_tol(tol)?;
    let model = TangentModel::new(m)?;
    let dim = model.dim();
    let id = Operator::identity(dim, dim);
    let mut rep = CheckReport::new("verify ambient")
        .param("m", m)
        .param("tol", tol)
        .with_seed(seed);
    if m < 3 {
        rep.note("paper assumes m >= 3");
    }

    let j = model.j();
    let a = model.a();
    rep.check("J^2 = -Id", (j * j + &id).amax(), tol);
    rep.check("A^2 = Id", (a * a - &id).amax(), tol);
    rep.check("AJ + JA = 0", (a * j + j * a).amax(), tol);
    rep.check("trace(A) = 0", a.trace().abs(), tol);
    rep.check("A self-adjoint", asymmetry(a), tol);
    rep.check("J orthogonal", (j.transpose() * j - &id).amax(), tol);
    let a3 = model.rotate_conjugation(FRAC_PI_3);
    rep.check("A_theta^2 = Id", (&a3 * &a3 - &id).amax(), tol);
    rep.check("A_theta J + J A_theta = 0", (&a3 * j + j * &a3).amax(), tol);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bianchi = 0.0_f64;
    let mut skew = 0.0_f64;
    for _ in 0..AMBIENT_RANDOM_TRIPLES {
        let x = random_unit(dim, &mut rng);
        let y = random_unit(dim, &mut rng);
        let z = random_unit(dim, &mut rng);
        let w = random_unit(dim, &mut rng);
        let b = model.ambient_curvature(&x, &y, &z)
            + model.ambient_curvature(&y, &z, &x)
            + model.ambient_curvature(&z, &x, &y);
        bianchi = bianchi.max(b.norm());
        // g(R(X,Y)Z, W) = −g(R(X,Y)W, Z)
        let s = model.ambient_curvature(&x, &y, &z).dot(&w) + model.ambient_curvature(&x, &y, &w).dot(&z);
        skew = skew.max(s.abs());
    }
    rep.check("first Bianchi identity", bianchi, tol.max(1e-12));
    rep.check("curvature skew in last pair", skew, tol.max(1e-12));

    let principal = model.z(1);
    let angle = model.canonical_angle(&principal)?;
    rep.check("principal canonical angle", angle.t, tol);
    let jac = model.ambient_jacobi(&principal)?;
    rep.check("principal Jacobi self-adjoint", asymmetry(&jac), tol);
    let spec = crate::linalg::sym_eigen(&jac, crate::linalg::DEFAULT_EIGEN_TOL)?;
    spectrum_checks(&mut rep, "principal Jacobi spectrum", &spec, &[(0.0, m), (2.0, m)], tol);
    rep.outcome("principal_spectrum", spec.multiplicities());

    if m >= 2 {
        let iso = (model.z(1) + model.jz(2)) * FRAC_1_SQRT_2;
        let angle = model.canonical_angle(&iso)?;
        rep.check(
            "isotropic canonical angle",
            (angle.t - std::f64::consts::FRAC_PI_4).abs(),
            tol,
        );
        let jac = model.ambient_jacobi(&iso)?;
        rep.check("isotropic Jacobi self-adjoint", asymmetry(&jac), tol);
        let spec = crate::linalg::sym_eigen(&jac, crate::linalg::DEFAULT_EIGEN_TOL)?;
        spectrum_checks(
            &mut rep,
            "isotropic Jacobi spectrum",
            &spec,
            &[(0.0, 3), (1.0, 2 * m - 4), (4.0, 1)],
            tol,
        );
        rep.outcome("isotropic_spectrum", spec.multiplicities());
    } else {
        rep.note("m = 1 has no isotropic vectors; isotropic checks skipped");
    }
    Ok(rep)
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(GeometryError::InvalidParameter(format!(
            "tolerance must be positive and finite, got {tol}"
        )))
    }
}

/// Per-point checks on the tube `𝒯_A`.
pub fn cmd_verify_tube(k: usize, r: f64, tol: f64, opts: TubeOptions) -> Result<CheckReport> {
    check_tol(tol)?;
    let tube = TubeModel::build_with(k, r, opts)?;
    let mut rep = CheckReport::new("verify tube")
        .param("k", k)
        .param("r", r)
        .param("tol", tol)
        .param("non_vanishing", opts.non_vanishing);
    tube_checks(&mut rep, &tube, tol)?;
    rep.outcome("alpha", tube.alpha());
    rep.outcome("shape_spectrum", tube.expected_shape_spectrum());
    rep.outcome("structure_jacobi_spectrum", tube.expected_structure_jacobi_spectrum());
    Ok(rep)
}

fn tube_checks(rep: &mut CheckReport, tube: &TubeModel, tol: f64) -> Result<()> {
    let h = tube.data();
    let sp = h.split();
    rep.check("hopf", h.hopf_defect(), tol);
    rep.check("hopf identity", h.hopf_identity_residual()?, tol);
    rep.check("S A xi = 0", (h.shape() * &sp.a_xi).norm(), tol);
    rep.check("S A N = 0", (h.shape() * &sp.an).norm(), tol);
    rep.check("S phi - phi S = 0", h.reeb_flow_commutator().norm(), tol);

    let spec = h.tangent_spectrum(h.shape())?;
    rep.check(
        "shape spectrum (relative)",
        max_spectrum_deviation(&spec.eigenvalues, &tube.expected_shape_eigenvalues()),
        tol,
    );
    let rxi = tube.structure_jacobi_spectrum()?;
    spectrum_checks(
        rep,
        "structure Jacobi spectrum",
        &rxi,
        &tube.expected_structure_jacobi_spectrum(),
        tol,
    );
    rep.check(
        "nabla_xi S = 0",
        h.max_over_basis(&h.nabla_s_at_xi_operator()?),
        tol,
    );
    rep.check("reeb parallel residual", h.reeb_parallel_residual()?, tol);
    Ok(())
}

/// Tube checks over an evenly spaced radius grid. Radii within the `π/4`
/// window are skipped and listed.
pub fn cmd_scan_tube(
    k: usize,
    r_min: f64,
    r_max: f64,
    steps: usize,
    tol: f64,
    opts: TubeOptions,
) -> Result<CheckReport> {
    check_tol(tol)?;
    if !(r_min > 0.0 && r_max < FRAC_PI_2 && r_min <= r_max) {
        return Err(GeometryError::InvalidRadius {
            r: if r_min > 0.0 { r_max } else { r_min },
            reason: format!("scan range [{r_min}, {r_max}] must satisfy 0 < r_min <= r_max < pi/2"),
        });
    }
    if steps == 0 {
        return Err(GeometryError::InvalidParameter("steps must be at least 1".into()));
    }
    let (kept, skipped) = if opts.non_vanishing {
        radius_grid(r_min, r_max, steps)
    } else {
        (radius_grid(r_min, r_max, steps).0.into_iter().chain(radius_grid(r_min, r_max, steps).1).collect(), Vec::new())
    };
    let mut kept = kept;
    kept.sort_by(f64::total_cmp);

    let mut rep = CheckReport::new("scan tube")
        .param("k", k)
        .param("r_min", r_min)
        .param("r_max", r_max)
        .param("steps", steps)
        .param("tol", tol)
        .param("non_vanishing", opts.non_vanishing);

    let mut worst: Vec<(String, f64, f64, bool)> = Vec::new();
    let mut failing_radii = Vec::new();
    for &r in &kept {
        let tube = TubeModel::build_with(k, r, opts)?;
        let mut point = CheckReport::new("verify tube");
        tube_checks(&mut point, &tube, tol)?;
        if !point.all_passed() {
            failing_radii.push(r);
        }
        for c in &point.checks {
            match worst.iter_mut().find(|w| w.0 == c.name) {
                Some(w) => {
                    w.1 = w.1.max(c.residual);
                    w.3 &= c.pass;
                }
                None => worst.push((c.name.clone(), c.residual, c.tol, c.pass)),
            }
        }
    }
    for (name, residual, tol, pass) in worst {
        let label = format!("worst {name}");
        let ok = rep.check(&label, residual, tol);
        debug_assert_eq!(ok, pass || residual <= tol);
    }
    for r in &skipped {
        rep.note(format!("skipped r = {r:.17} (within the pi/4 exclusion window)"));
    }
    rep.outcome("points", kept.len());
    rep.outcome("skipped", skipped);
    rep.outcome("failing_radii", failing_radii);
    Ok(rep)
}

pub fn cmd_nonexistence(m: usize, alphas: &[f64], seed: u64, tol: f64) -> Result<CheckReport> {
    check_tol(tol)?;
    let cert = principal_nonexistence_certificate(m, alphas, seed)?;
    Ok(cert.to_report(tol))
}

/// Failure to load a serialized hypersurface.
#[derive(Debug)]
pub enum LoadError {
    /// Malformed JSON or a schema mismatch; carries line and column.
    Parse(serde_json::Error),
    Invalid(GeometryError),
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Parse(e) => write!(
                f,
                "malformed hypersurface JSON at line {} column {}: {e}",
                e.line(),
                e.column()
            ),
            LoadError::Invalid(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for LoadError {}

pub fn load_hypersurface(text: &str) -> std::result::Result<HypersurfaceData, LoadError> {
    let rec: HypersurfaceRecord = serde_json::from_str(text).map_err(LoadError::Parse)?;
    HypersurfaceData::from_record(&rec).map_err(LoadError::Invalid)
}

pub fn cmd_classify(h: &HypersurfaceData, tol: f64) -> Result<CheckReport> {
    check_tol(tol)?;
    let res = classify(h, tol)?;
    let mut rep = CheckReport::new("classify")
        .param("m", h.m())
        .param("tol", tol);
    if h.shape_projected() {
        rep.note("shape operator had a normal component and was projected to TM");
    }
    rep.check("hopf", res.hopf_defect, crate::hypersurface::HOPF_TOL);
    if res.hopf {
        rep.check_exceeds("alpha nonzero", res.alpha.abs(), tol);
    }
    if let Some(r) = res.reeb_parallel_residual {
        rep.check("reeb parallel residual", r, tol);
    }
    if res.singular_type == SingularType::Isotropic && res.hopf {
        rep.outcome(
            "commutator_residual",
            h.max_over_basis(&h.reeb_flow_commutator()),
        );
    }
    if let Some(d) = res.spectrum_deviation {
        rep.check("tube spectrum match", d, crate::theorem::SPECTRUM_MATCH_REL_TOL);
    }
    rep.outcome("singular_type", res.singular_type.label());
    rep.outcome("canonical_angle", res.canonical_angle);
    rep.outcome("alpha", res.alpha);
    rep.outcome("verdict", res.verdict.label());
    match &res.verdict {
        ClassificationVerdict::Tube { k, r } => {
            rep.outcome("k", *k);
            rep.outcome("r", *r);
        }
        ClassificationVerdict::NonexistentPrincipal => {
            rep.note("A-principal Hopf data with Reeb-parallel structure Jacobi operator and alpha != 0 cannot occur on a hypersurface");
        }
        ClassificationVerdict::OutsideHypotheses { reason } => {
            rep.mark_hypotheses_unmet(reason.clone());
        }
    }
    Ok(rep)
}

/// What `spectrum` reports on.
#[derive(Debug, Clone)]
pub enum SpectrumTarget {
    /// Jacobi operators of the principal and isotropic model vectors.
    Ambient { m: usize },
    /// Shape and structure Jacobi operators of the tube.
    Tube { k: usize, r: f64, opts: TubeOptions },
    /// Shape and structure Jacobi operators of loaded data.
    Data(Box<HypersurfaceData>),
}

pub fn cmd_spectrum(target: &SpectrumTarget, tol: f64) -> Result<CheckReport> {
    check_tol(tol)?;
    let eig_tol = crate::linalg::DEFAULT_EIGEN_TOL;
    let mut rep = CheckReport::new("spectrum").param("tol", tol);
    match target {
        SpectrumTarget::Ambient { m } => {
            let model = TangentModel::new(*m)?;
            rep = rep.param("m", *m).param("target", "ambient");
            let spec = crate::linalg::sym_eigen(&model.ambient_jacobi(&model.z(1))?, eig_tol)?;
            rep.check("principal residual", spec.residual, tol);
            spectrum_checks(&mut rep, "principal", &spec, &[(0.0, *m), (2.0, *m)], tol);
            rep.outcome("principal", &spec);
            if *m >= 2 {
                let iso = (model.z(1) + model.jz(2)) * FRAC_1_SQRT_2;
                let spec = crate::linalg::sym_eigen(&model.ambient_jacobi(&iso)?, eig_tol)?;
                rep.check("isotropic residual", spec.residual, tol);
                spectrum_checks(
                    &mut rep,
                    "isotropic",
                    &spec,
                    &[(0.0, 3), (1.0, 2 * m - 4), (4.0, 1)],
                    tol,
                );
                rep.outcome("isotropic", &spec);
            }
        }
        SpectrumTarget::Tube { k, r, opts } => {
            let tube = TubeModel::build_with(*k, *r, *opts)?;
            rep = rep
                .param("k", *k)
                .param("r", *r)
                .param("target", "tube")
                .param("non_vanishing", opts.non_vanishing);
            let h = tube.data();
            let s = h.tangent_spectrum(h.shape())?;
            rep.check(
                "shape (relative)",
                max_spectrum_deviation(&s.eigenvalues, &tube.expected_shape_eigenvalues()),
                tol,
            );
            rep.outcome("shape", &s);
            let rxi = tube.structure_jacobi_spectrum()?;
            spectrum_checks(
                &mut rep,
                "structure Jacobi",
                &rxi,
                &tube.expected_structure_jacobi_spectrum(),
                tol,
            );
            rep.outcome("structure_jacobi", &rxi);
        }
        SpectrumTarget::Data(h) => {
            rep = rep.param("m", h.m()).param("target", "data");
            let s = h.tangent_spectrum(h.shape())?;
            rep.check("shape residual", s.residual, tol);
            rep.outcome("shape", &s);
            let rxi = h.tangent_spectrum(&h.structure_jacobi())?;
            rep.check("structure Jacobi residual", rxi.residual, tol);
            rep.outcome("structure_jacobi", &rxi);
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::TubeVariant;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn ambient_m4_passes() {
        let rep = cmd_verify_ambient(4, DEFAULT_TOL, 7).unwrap();
        assert!(rep.all_passed(), "{}", rep.to_json());
        assert_eq!(rep.exit_code(), 0);
    }

    #[test]
    fn ambient_m2_warns() {
        let rep = cmd_verify_ambient(2, DEFAULT_TOL, 7).unwrap();
        assert!(rep.all_passed());
        assert!(rep.notes.iter().any(|n| n == "paper assumes m >= 3"));
        assert!(cmd_verify_ambient(0, DEFAULT_TOL, 7).is_err());
    }

    #[test]
    fn tube_point_passes() {
        let rep = cmd_verify_tube(2, 0.6, 1e-11, TubeOptions::default()).unwrap();
        assert!(rep.all_passed(), "{}", rep.to_json());
        let sw = TubeOptions {
            variant: TubeVariant::Swapped,
            ..Default::default()
        };
        assert!(cmd_verify_tube(3, 1.1, 1e-11, sw).unwrap().all_passed());
    }

    #[test]
    fn tube_at_quarter_pi_is_input_error() {
        let err = cmd_verify_tube(2, FRAC_PI_4, 1e-11, TubeOptions::default()).unwrap_err();
        assert!(err.to_string().contains("pi/4"));
    }

    #[test]
    fn scan_skips_window() {
        let rep = cmd_scan_tube(3, 0.1, 1.5, 30, 1e-11, TubeOptions::default()).unwrap();
        assert!(rep.all_passed(), "{}", rep.to_json());
        assert_eq!(rep.outcome["points"], 29);
        assert_eq!(rep.notes.len(), 1);
    }

    #[test]
    fn classify_round_trip_through_json() {
        let tube = TubeModel::build(2, 0.6).unwrap();
        let text = crate::report::to_json_string(&tube.to_record());
        let h = load_hypersurface(&text).unwrap();
        let rep = cmd_classify(&h, 1e-9).unwrap();
        assert_eq!(rep.outcome["verdict"], "tube k=2 r=0.600000");
        assert_eq!(rep.exit_code(), 0);
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = load_hypersurface("{\"m\": 2,\n \"N\": [1, }").unwrap_err();
        assert!(matches!(err, LoadError::Parse(_)));
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn non_unit_normal_message() {
        let mut rec = TubeModel::build(2, 0.6).unwrap().to_record();
        rec.normal[0] *= 2.0;
        let err = load_hypersurface(&serde_json::to_string(&rec).unwrap()).unwrap_err();
        assert!(err.to_string().starts_with("normal not unit (|N| = "), "{err}");
    }

    #[test]
    fn spectrum_targets() {
        assert!(cmd_spectrum(&SpectrumTarget::Ambient { m: 5 }, DEFAULT_TOL).unwrap().all_passed());
        let t = SpectrumTarget::Tube {
            k: 2,
            r: 0.4,
            opts: TubeOptions::default(),
        };
        assert!(cmd_spectrum(&t, DEFAULT_TOL).unwrap().all_passed());
    }
}
