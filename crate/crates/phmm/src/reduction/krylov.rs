use super::certificate::{CertificateKind, Certified, MatchCertificate};
use super::family::{gram_inverse_checked, reject_spectrum_clash};
use super::structured::carry_flags;
use crate::error::{Error, Result};
use crate::linalg::{c64, identity, inverse, max_imag, norm_fro, rank, realify, Matrix, C64};
use crate::systems::{resolvent_solve, Generator, GeneratorRight, LtiSystem, PortHamiltonianSystem};

/// A projection basis `V`, an optional test basis `W`, and the realifier `M`
/// such that `V̂ = VM` is real whenever the data are closed under conjugation.
#[derive(Debug, Clone, PartialEq)]
pub struct KrylovBasis {
    pub v: Matrix,
    pub w: Option<Matrix>,
    pub m: Matrix,
}

impl KrylovBasis {
    /// `V̂ = VM`.
    pub fn v_hat(&self) -> Matrix {
        &self.v * &self.m
    }
}

fn close(a: C64, b: C64) -> bool {
    (a - b).norm() <= 1e-10 * (1.0 + a.norm().max(b.norm()))
}

fn close_mat(a: &Matrix, b: &Matrix) -> bool {
    a.shape() == b.shape() && norm_fro(&(a - b)) <= 1e-10 * (1.0 + norm_fro(a).max(norm_fro(b)))
}

/// Position of each column inside its chain of repeated points.
fn chain_positions(points: &[C64]) -> Vec<usize> {
    let mut pos = Vec::with_capacity(points.len());
    for (j, &p) in points.iter().enumerate() {
        if j > 0 && close(points[j - 1], p) {
            pos.push(pos[j - 1] + 1);
        } else {
            pos.push(0);
        }
    }
    pos
}

fn check_tangents(points: &[C64], tangents: &[Matrix], inputs: usize) -> Result<()> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("at least one interpolation point is required".into()));
    }
    if points.len() != tangents.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} points but {} tangents",
            points.len(),
            tangents.len()
        )));
    }
    for (j, t) in tangents.iter().enumerate() {
        if t.shape() != (inputs, 1) {
            return Err(Error::DimensionMismatch(format!("tangent {j} must be {inputs}x1")));
        }
        if j > 0 && close(points[j - 1], points[j]) && !close_mat(&tangents[j - 1], t) {
            return Err(Error::InvalidArgument("a repeated point must reuse its tangent".into()));
        }
    }
    Ok(())
}

/// Generator `(S, L)` whose Sylvester solution is exactly the Krylov basis:
/// `S` carries the points on its diagonal and `−1` above it inside each run
/// of a repeated point; `L` holds the tangents at the head of each run.
pub fn interpolation_generator(points: &[C64], tangents: &[Matrix]) -> Result<GeneratorRight> {
    let m = tangents.first().map_or(0, |t| t.nrows());
    check_tangents(points, tangents, m)?;
    let nu = points.len();
    let pos = chain_positions(points);
    let mut s = Matrix::zeros(nu, nu);
    let mut l = Matrix::zeros(m, nu);
    for j in 0..nu {
        s[(j, j)] = points[j];
        if pos[j] > 0 {
            s[(j - 1, j)] = c64(-1.0, 0.0);
        } else {
            l.set_column(j, &tangents[j].column(0));
        }
    }
    GeneratorRight::new(s, l)
}

/// Pairs each column with a conjugate partner: same chain position,
/// conjugate point and conjugate tangent.
fn realifier(points: &[C64], tangents: &[Matrix]) -> Matrix {
    let nu = points.len();
    let pos = chain_positions(points);
    let mut m = identity(nu);
    let mut used = vec![false; nu];
    for j in 0..nu {
        if used[j] || points[j].im.abs() <= 1e-12 * (1.0 + points[j].norm()) {
            continue;
        }
        let partner = (j + 1..nu).find(|&k| {
            !used[k]
                && pos[k] == pos[j]
                && close(points[k], points[j].conj())
                && close_mat(&tangents[k], &tangents[j].conjugate())
        });
        if let Some(k) = partner {
            used[j] = true;
            used[k] = true;
            // (v, v̄) ↦ (Re v, Im v)
            m[(j, j)] = c64(0.5, 0.0);
            m[(k, j)] = c64(0.5, 0.0);
            m[(j, k)] = c64(0.0, -0.5);
            m[(k, k)] = c64(0.0, 0.5);
        }
    }
    m
}

/// `V = [(s₁I − A)⁻¹Bl₁, …]`. Inside a run of a repeated point the next
/// column is `(s₀I − A)⁻¹` applied to the previous one.
pub fn krylov_basis(sys: &LtiSystem, points: &[C64], tangents: &[Matrix]) -> Result<KrylovBasis> {
    check_tangents(points, tangents, sys.b().ncols())?;
    let n = sys.order();
    let nu = points.len();
    let pos = chain_positions(points);
    let mut v = Matrix::zeros(n, nu);
    for j in 0..nu {
        let rhs = if pos[j] == 0 { sys.b() * &tangents[j] } else { v.columns(j - 1, 1).into_owned() };
        let col = resolvent_solve(sys.a(), points[j], &rhs)?;
        v.set_column(j, &col.column(0));
    }
    let r = rank(&v);
    if r < nu {
        return Err(Error::RankDeficientBasis { rank: r, expected: nu });
    }
    Ok(KrylovBasis { v, w: None, m: realifier(points, tangents) })
}

/// `V = [B, AB, …, A^{ν−1}B]` with the test basis `W = V(VᵀV)⁻¹`, so `WᵀV = I`.
pub fn markov_krylov_basis(sys: &LtiSystem, nu: usize) -> Result<KrylovBasis> {
    if nu == 0 {
        return Err(Error::InvalidArgument("basis size must be positive".into()));
    }
    let (n, m) = (sys.order(), sys.b().ncols());
    let k = nu * m;
    let mut v = Matrix::zeros(n, k);
    let mut block = sys.b().clone();
    for i in 0..nu {
        v.view_mut((0, i * m), (n, m)).copy_from(&block);
        block = sys.a() * block;
    }
    let r = rank(&v);
    if r < k {
        return Err(Error::RankDeficientBasis { rank: r, expected: k });
    }
    let w = &v * inverse(&(v.transpose() * &v))?.transpose();
    Ok(KrylovBasis { v, w: Some(w), m: identity(k) })
}

/// `(WᵀAV, WᵀB, CV)`; requires `WᵀV = I`.
pub fn petrov_galerkin(sys: &LtiSystem, v: &Matrix, w: &Matrix) -> Result<LtiSystem> {
    let n = sys.order();
    if v.nrows() != n || w.shape() != v.shape() {
        return Err(Error::DimensionMismatch("bases must both be n×ν".into()));
    }
    let wt = w.transpose();
    let defect = norm_fro(&(&wt * v - identity(v.ncols())));
    if defect > 1e-8 * (v.ncols() as f64).sqrt() {
        return Err(Error::InvalidArgument(format!("WᵀV deviates from I by {defect:e}")));
    }
    LtiSystem::new(&wt * sys.a() * v, &wt * sys.b(), sys.c() * v)
}

/// Structure-preserving projection on the real Krylov basis `V̂`:
/// `Ŵ = QV̂(V̂ᵀQV̂)⁻¹`, `J_r = ŴᵀJŴ`, `R_r = ŴᵀRŴ`, `Q_r = V̂ᵀQV̂`, `B_r = ŴᵀB`.
pub fn reduce_ph_krylov(
    sys: &PortHamiltonianSystem,
    points: &[C64],
    tangents: &[Matrix],
) -> Result<Certified<PortHamiltonianSystem>> {
    let lti = sys.to_lti();
    let basis = krylov_basis(&lti, points, tangents)?;
    let v_hat = basis.v_hat();
    if max_imag(&v_hat) > 1e-10 * norm_fro(&v_hat) {
        return Err(Error::NotReal(max_imag(&v_hat) / norm_fro(&v_hat)));
    }
    let v_hat = realify(&v_hat.map(|z| c64(z.re, 0.0)))?;
    let gram = v_hat.transpose() * sys.q() * &v_hat;
    let w_hat = sys.q() * &v_hat * gram_inverse_checked(&gram)?;
    let wt = w_hat.transpose();
    let model = PortHamiltonianSystem::new_symmetrized(
        &wt * sys.j() * &w_hat,
        &wt * sys.r() * &w_hat,
        gram,
        &wt * sys.b(),
    )?;
    let model = carry_flags(sys, model)?;

    let gen = interpolation_generator(points, tangents)?;
    let minv = inverse(&basis.m)?;
    let eff = GeneratorRight::new(&minv * gen.s() * &basis.m, gen.l() * &basis.m)?;
    reject_spectrum_clash(&model.a(), eff.s())?;
    let nu = points.len();
    Ok(Certified {
        certificate: MatchCertificate {
            kind: CertificateKind::FiniteRight,
            p: identity(nu),
            moments: lti.c() * &v_hat,
            generator: Generator::Right(eff),
        },
        model,
    })
}
