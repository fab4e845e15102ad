//! Machine checks for matching claims, certificates and passivity.

use crate::error::{Error, Result};
use crate::linalg::{
    c64, fmt_c, hermitian_eigenvalues, identity, inverse, norm_fro, norm_max, rank, Lu, Matrix, C64,
    EPS_STRUCT,
};
use crate::moments::{moment_derivative_oracle, split_tilde};
use crate::reduction::{CertificateKind, MatchCertificate, ModelRef};
use crate::systems::{markov_parameters, DescriptorModel, Generator, LtiSystem, PortHamiltonianSystem};
use serde::{Deserialize, Serialize};

/// Default relative tolerance for verification checks.
pub const DEFAULT_TOL: f64 = 1e-8;

/// One named check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }

    fn record(&mut self, name: impl Into<String>, residual: f64, tolerance: f64) {
        let pass = residual.is_finite() && residual <= tolerance;
        self.checks.push(CheckRecord { name: name.into(), residual, tolerance, pass, note: None });
    }

    fn flag(&mut self, name: impl Into<String>, ok: bool) {
        self.record(name, if ok { 0.0 } else { 1.0 }, 0.0);
    }

    fn note_last(&mut self, note: &str) {
        if let Some(c) = self.checks.last_mut() {
            c.note = Some(note.to_string());
        }
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }
}

/// Which side a tangential direction multiplies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchSide {
    Right,
    Left,
}

/// Matching of the first `order` Taylor coefficients at `point`, optionally
/// along a direction (`m×1` on the right, `1×p` on the left).
#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationCondition {
    pub point: C64,
    pub order: usize,
    pub direction: Option<Matrix>,
}

impl InterpolationCondition {
    /// Collapses consecutive repeated points into one condition of higher order.
    pub fn from_points(points: &[C64], directions: Option<&[Matrix]>) -> Vec<Self> {
        let mut out: Vec<InterpolationCondition> = Vec::new();
        for (i, &p) in points.iter().enumerate() {
            let dir = directions.and_then(|d| d.get(i).cloned());
            match out.last_mut() {
                Some(last) if (last.point - p).norm() <= 1e-12 * (1.0 + p.norm()) => last.order += 1,
                _ => out.push(InterpolationCondition { point: p, order: 1, direction: dir }),
            }
        }
        out
    }
}

fn project(m: &Matrix, dir: &Option<Matrix>, side: MatchSide) -> Result<Matrix> {
    match (dir, side) {
        (None, _) => Ok(m.clone()),
        (Some(l), MatchSide::Right) if l.nrows() == m.ncols() => Ok(m * l),
        (Some(r), MatchSide::Left) if r.ncols() == m.nrows() => Ok(r * m),
        _ => Err(Error::DimensionMismatch("tangent direction does not fit the port count".into())),
    }
}

/// Per-point, per-derivative residuals `‖(K − K̂)⁽ᵏ⁾(sᵢ)lᵢ‖/k!` (or `‖rᵢ(…)‖`).
/// A check passes when the residual is at most `tol·max(1, ‖K⁽ᵏ⁾(sᵢ)lᵢ‖/k!)`.
pub fn verify_finite_match(
    orig: &LtiSystem,
    red: &LtiSystem,
    conditions: &[InterpolationCondition],
    side: MatchSide,
    tol: f64,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::default();
    for cond in conditions {
        let a = moment_derivative_oracle(orig, cond.point, cond.order)?;
        let b = moment_derivative_oracle(red, cond.point, cond.order)?;
        for k in 0..cond.order {
            let lhs = project(&a[k], &cond.direction, side)?;
            let rhs = project(&b[k], &cond.direction, side)?;
            let residual = norm_fro(&(&lhs - &rhs));
            report.record(
                format!("interpolation at {} derivative {}", fmt_c(cond.point), k),
                residual,
                tol * norm_fro(&lhs).max(1.0),
            );
        }
    }
    Ok(report)
}

/// Anything with Markov parameters `[0, CB, CAB, …]`.
pub trait MarkovSource {
    fn markov(&self, count: usize) -> Result<Vec<Matrix>>;
}

impl MarkovSource for LtiSystem {
    fn markov(&self, count: usize) -> Result<Vec<Matrix>> {
        Ok(markov_parameters(self, count))
    }
}

impl MarkovSource for PortHamiltonianSystem {
    fn markov(&self, count: usize) -> Result<Vec<Matrix>> {
        Ok(markov_parameters(&self.to_lti(), count))
    }
}

impl MarkovSource for DescriptorModel {
    fn markov(&self, count: usize) -> Result<Vec<Matrix>> {
        self.markov_parameters(count)
    }
}

/// Entrywise comparison of the first `count` Markov parameters.
pub fn verify_markov_match(
    orig: &dyn MarkovSource,
    red: &dyn MarkovSource,
    count: usize,
    tol: f64,
) -> Result<VerificationReport> {
    let a = orig.markov(count)?;
    let b = red.markov(count)?;
    let mut report = VerificationReport::default();
    for k in 0..count {
        if a[k].shape() != b[k].shape() {
            return Err(Error::DimensionMismatch("models have different port counts".into()));
        }
        let residual = norm_max(&(&a[k] - &b[k]));
        report.record(format!("markov parameter {k}"), residual, tol * norm_max(&a[k]).max(1.0));
    }
    Ok(report)
}

fn identity_check(report: &mut VerificationReport, name: &str, lhs: &Matrix, rhs: &Matrix, tol: f64) -> Result<()> {
    if lhs.shape() != rhs.shape() {
        return Err(Error::DimensionMismatch(format!(
            "{name}: {}x{} against {}x{}",
            lhs.nrows(),
            lhs.ncols(),
            rhs.nrows(),
            rhs.ncols()
        )));
    }
    let residual = norm_fro(&(lhs - rhs));
    report.record(name, residual, tol * (1.0 + norm_fro(lhs).max(norm_fro(rhs))));
    Ok(())
}

fn kind_mismatch(kind: CertificateKind, why: &str) -> Error {
    Error::KindMismatch(format!("{kind:?} certificate {why}"))
}

/// Checks every identity of the certificate's kind against the reduced
/// realization, together with invertibility of `P`.
pub fn verify_certificate(red: ModelRef<'_>, cert: &MatchCertificate, tol: f64) -> Result<VerificationReport> {
    let kind = cert.kind;
    let d = red.efgh();
    match (&cert.generator, kind.is_right()) {
        (Generator::Right(_), false) => return Err(kind_mismatch(kind, "needs a left generator")),
        (Generator::Left(_), true) => return Err(kind_mismatch(kind, "needs a right generator")),
        _ => {}
    }
    let derivative_kind = kind == CertificateKind::MarkovLeftDerivative;
    if derivative_kind != (d.derivatives > 0) {
        return Err(kind_mismatch(kind, "does not fit the model's differentiated ports"));
    }
    if d.e.is_some() && !matches!(kind, CertificateKind::MarkovLeft | CertificateKind::MarkovLeftHat) && !derivative_kind {
        return Err(kind_mismatch(kind, "cannot certify a descriptor model"));
    }
    let nu = d.f.nrows();
    let p = &cert.p;
    let gen_order = cert.generator.order() - usize::from(kind == CertificateKind::MarkovPiTilde);
    if p.shape() != (nu, nu) || gen_order != nu {
        return Err(Error::DimensionMismatch(format!(
            "certificate of order {} against a model of order {nu}",
            cert.generator.order()
        )));
    }
    let e = d.e.clone().unwrap_or_else(|| identity(nu));
    let (f, g, h, phi) = (&d.f, &d.g, &d.h, &cert.moments);
    let mut report = VerificationReport::default();

    let p_rank = rank(p);
    let invertible = p_rank == nu && Lu::new(p).is_ok();
    report.flag("P invertible", invertible);

    match &cert.generator {
        Generator::Right(gen) => {
            let (s, l) = (gen.s(), gen.l());
            match kind {
                CertificateKind::FiniteRight => {
                    identity_check(&mut report, "HP = moments", &(h * p), phi, tol)?;
                    identity_check(&mut report, "FP + GL = PS", &(f * p + g * l), &(p * s), tol)?;
                }
                CertificateKind::MarkovPi => {
                    identity_check(&mut report, "moments S = HPS", &(phi * s), &(h * p * s), tol)?;
                    identity_check(&mut report, "FPS + GL = P", &(f * p * s + g * l), p, tol)?;
                }
                CertificateKind::MarkovPiBar => {
                    identity_check(&mut report, "moments = HP", phi, &(h * p), tol)?;
                    identity_check(&mut report, "FPS + GLS = P", &(f * p * s + g * l * s), p, tol)?;
                }
                CertificateKind::MarkovPiTilde => {
                    let split = split_tilde(gen)?;
                    if split.s2.nrows() != nu {
                        return Err(Error::DimensionMismatch("split generator does not fit the model".into()));
                    }
                    identity_check(&mut report, "moments = HP", phi, &(h * p), tol)?;
                    identity_check(
                        &mut report,
                        "FPS2 + G(l1 S1 + L2 S2) = P",
                        &(f * p * &split.s2 + g * split.coupling()),
                        p,
                        tol,
                    )?;
                }
                _ => unreachable!("right kinds only"),
            }
        }
        Generator::Left(gen) => {
            let (q, r) = (gen.q(), gen.r());
            match kind {
                CertificateKind::FiniteLeft => {
                    identity_check(&mut report, "QP = PF + RH", &(q * p), &(p * f + r * h), tol)?;
                    identity_check(&mut report, "PG = moments", &(p * g), phi, tol)?;
                }
                CertificateKind::MarkovLeft | CertificateKind::MarkovLeftHat | CertificateKind::MarkovLeftDerivative => {
                    identity_check(&mut report, "QPF + RH = PE", &(q * p * f + r * h), &(p * &e), tol)?;
                    let (name, lhs) = match kind {
                        CertificateKind::MarkovLeft => ("QPG = Q moments", q * p * g),
                        CertificateKind::MarkovLeftHat => ("Q(QP + RH)G = Q moments", q * (q * p + r * h) * g),
                        _ => ("PG = Q moments", p * g),
                    };
                    identity_check(&mut report, name, &lhs, &(q * phi), tol)?;
                }
                _ => unreachable!("left kinds only"),
            }
        }
    }
    Ok(report)
}

/// Data for a storage-function test.
#[derive(Debug, Clone, Copy)]
pub enum PassivityData<'a> {
    /// `SᵀP + PS ≤ ΠᵀQBL + LᵀBᵀQΠ`
    Family { s: &'a Matrix, l: &'a Matrix, pi: &'a Matrix, q: &'a Matrix, b: &'a Matrix },
    /// `P𝒬ᵀ + 𝒬P ≤ ℛBᵀΥᵀ − ΥBℛᵀ`, checked exactly as written.
    Left { qc: &'a Matrix, rc: &'a Matrix, ups: &'a Matrix, b: &'a Matrix },
    /// `AᵀP + PA ≤ 0` with `PB = Cᵀ`.
    Lti(&'a LtiSystem),
}

fn psd_defect(name: &str, m: &Matrix, scale: f64, tol: f64, report: &mut VerificationReport) {
    let top = hermitian_eigenvalues(m).last().copied().unwrap_or(0.0);
    report.record(name, top.max(0.0), tol * scale.max(1e-300));
}

/// Storage-function test with the candidate `P`. The report fails when `P`
/// is not symmetric positive definite or the inequality is violated beyond
/// `tol` relative to its terms.
pub fn passivity_check(data: PassivityData<'_>, p: &Matrix, tol: f64) -> Result<VerificationReport> {
    let mut report = VerificationReport::default();
    if !p.is_square() {
        return Err(Error::DimensionMismatch("P must be square".into()));
    }
    let asym = norm_max(&(p - p.adjoint()));
    report.record("P symmetric", asym, EPS_STRUCT * norm_max(p).max(1e-300));
    let min_eig = hermitian_eigenvalues(p).first().copied().unwrap_or(0.0);
    report.flag("P positive definite", min_eig > 1e-12 * norm_max(p));
    match data {
        PassivityData::Family { s, l, pi, q, b } => {
            let lhs = s.adjoint() * p + p * s;
            let coupling = pi.adjoint() * q * b * l;
            let rhs = &coupling + coupling.adjoint();
            let scale = norm_fro(&lhs) + norm_fro(&rhs);
            psd_defect("S*P + PS - (Pi*QBL + L*B*QPi) <= 0", &(lhs - rhs), scale, tol, &mut report);
        }
        PassivityData::Left { qc, rc, ups, b } => {
            let lhs = p * qc.adjoint() + qc * p;
            let rhs = rc * b.adjoint() * ups.adjoint() - ups * b * rc.adjoint();
            let scale = norm_fro(&lhs) + norm_fro(&rhs);
            psd_defect("PQ* + QP - (RB*Y* - YBR*) <= 0", &(lhs - rhs), scale, tol, &mut report);
            report.note_last("as-printed inequality");
        }
        PassivityData::Lti(sys) => {
            let lhs = sys.a().adjoint() * p + p * sys.a();
            psd_defect("A*P + PA <= 0", &lhs, norm_fro(&lhs) + norm_fro(p), tol, &mut report);
            let pb = p * sys.b();
            let ct = sys.c().adjoint();
            identity_check(&mut report, "PB = C*", &pb, &ct, tol)?;
        }
    }
    Ok(report)
}

/// Port-Hamiltonian realization of the family member at `G = P⁻¹ΠᵀQB`, with
/// `Q̃ = P`, `J̃ = ½(MP⁻¹ − P⁻¹Mᵀ)` and `R̃ = −½(MP⁻¹ + P⁻¹Mᵀ)` for `M = S − GL`.
pub fn ph_from_certificate(
    s: &Matrix,
    l: &Matrix,
    pi: &Matrix,
    q: &Matrix,
    b: &Matrix,
    p: &Matrix,
) -> Result<PortHamiltonianSystem> {
    let report = passivity_check(PassivityData::Family { s, l, pi, q, b }, p, DEFAULT_TOL)?;
    if !report.passed() {
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        return Err(Error::CertificateInvalid(failed.join("; ")));
    }
    let pinv = inverse(p)?;
    let g = &pinv * pi.transpose() * q * b;
    let m = s - &g * l;
    let half = c64(0.5, 0.0);
    let j = (&m * &pinv - &pinv * m.transpose()) * half;
    let r = -(&m * &pinv + &pinv * m.transpose()) * half;
    let out = PortHamiltonianSystem::new_symmetrized(j, r, p.clone(), g)
        .map_err(|e| Error::CertificateInvalid(e.to_string()))?;
    Ok(out.with_detected_flags())
}
