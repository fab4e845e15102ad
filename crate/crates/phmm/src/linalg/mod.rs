//! Dense complex linear algebra used by every other module.
//!
//! Matrices are `nalgebra` dynamic matrices over `Complex64`. The helpers here
//! add the tolerance policy on top: pivot thresholds for solves, conjugate
//! pairing for spectra of real matrices, rank decisions and real-ification.

mod sylvester;

pub use sylvester::{
    kronecker_operator, solve_sylvester, sylvester_residual, sylvester_rhs, SylvesterForm,
};

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type Matrix = DMatrix<C64>;

/// Relative residual accepted for solved linear and Sylvester systems.
pub const EPS_SOLVE: f64 = 1e-10;
/// Relative tolerance for structural symmetry checks.
pub const EPS_STRUCT: f64 = 1e-10;
/// Imaginary parts below this fraction of the norm are dropped by [`realify`].
pub const EPS_REAL: f64 = 1e-12;

pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Builds a real matrix from row slices.
pub fn real(rows: &[&[f64]]) -> Matrix {
    let nr = rows.len();
    let nc = rows.first().map_or(0, |r| r.len());
    Matrix::from_fn(nr, nc, |i, j| c64(rows[i][j], 0.0))
}

/// Builds a real matrix from row-major data.
pub fn real_from_rows(nr: usize, nc: usize, data: &[f64]) -> Matrix {
    Matrix::from_fn(nr, nc, |i, j| c64(data[i * nc + j], 0.0))
}

pub fn real_diag(d: &[f64]) -> Matrix {
    let n = d.len();
    Matrix::from_fn(n, n, |i, j| if i == j { c64(d[i], 0.0) } else { C64::default() })
}

pub fn column(v: &[C64]) -> Matrix {
    Matrix::from_column_slice(v.len(), 1, v)
}

pub fn real_column(v: &[f64]) -> Matrix {
    Matrix::from_fn(v.len(), 1, |i, _| c64(v[i], 0.0))
}

pub fn real_row(v: &[f64]) -> Matrix {
    Matrix::from_fn(1, v.len(), |_, j| c64(v[j], 0.0))
}

pub fn identity(n: usize) -> Matrix {
    Matrix::identity(n, n)
}

/// Upper Jordan block with eigenvalue `eig` and ones on the superdiagonal.
pub fn jordan_block(eig: C64, size: usize) -> Matrix {
    Matrix::from_fn(size, size, |i, j| {
        if i == j {
            eig
        } else if j == i + 1 {
            c64(1.0, 0.0)
        } else {
            C64::default()
        }
    })
}

pub fn norm_fro(m: &Matrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn norm_max(m: &Matrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_imag(m: &Matrix) -> f64 {
    m.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
}

pub fn is_real(m: &Matrix) -> bool {
    m.iter().all(|z| z.im == 0.0)
}

/// Drops imaginary parts below `EPS_REAL · ‖m‖`; errors when larger ones remain.
pub fn realify(m: &Matrix) -> Result<Matrix> {
    let tol = EPS_REAL * norm_fro(m).max(f64::MIN_POSITIVE);
    let worst = max_imag(m);
    if worst > tol {
        return Err(Error::NotReal(worst));
    }
    Ok(m.map(|z| c64(z.re, 0.0)))
}

pub fn real_part(m: &Matrix) -> DMatrix<f64> {
    m.map(|z| z.re)
}

pub fn to_complex(m: &DMatrix<f64>) -> Matrix {
    m.map(|x| c64(x, 0.0))
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    Matrix::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

/// Column-major vectorization.
pub fn vec_of(m: &Matrix) -> DVector<C64> {
    DVector::from_column_slice(m.as_slice())
}

pub fn unvec(v: &DVector<C64>, rows: usize, cols: usize) -> Matrix {
    Matrix::from_column_slice(rows, cols, v.as_slice())
}

/// Relative Frobenius distance `‖a−b‖ / max(1, ‖a‖, ‖b‖)`.
pub fn rel_diff(a: &Matrix, b: &Matrix) -> f64 {
    let scale = norm_fro(a).max(norm_fro(b)).max(1.0);
    norm_fro(&(a - b)) / scale
}

/// Symmetric part `(m + m*)/2`.
pub fn hermitian_part(m: &Matrix) -> Matrix {
    (m + m.adjoint()) * c64(0.5, 0.0)
}

/// LU factorization with partial pivoting and an explicit pivot threshold.
pub struct Lu {
    inner: nalgebra::LU<C64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl Lu {
    pub fn new(a: &Matrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "LU needs a square matrix, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        let n = a.nrows();
        let threshold = n as f64 * norm_max(a) * f64::EPSILON / 2.0;
        let inner = a.clone().lu();
        let u = inner.u();
        let pivot = (0..n).map(|i| u[(i, i)].norm()).fold(f64::INFINITY, f64::min);
        if n > 0 && (pivot <= threshold || !pivot.is_finite() || norm_max(a) == 0.0) {
            return Err(Error::SingularMatrix { pivot, threshold });
        }
        Ok(Lu { inner })
    }

    pub fn solve(&self, b: &Matrix) -> Result<Matrix> {
        self.inner
            .solve(b)
            .ok_or(Error::SingularMatrix { pivot: 0.0, threshold: 0.0 })
    }

    pub fn determinant(&self) -> C64 {
        self.inner.determinant()
    }
}

/// Solves `a·x = b` by row-pivoted elimination.
pub fn solve_linear(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "solve: A has {} rows, B has {}",
            a.nrows(),
            b.nrows()
        )));
    }
    Lu::new(a)?.solve(b)
}

pub fn inverse(a: &Matrix) -> Result<Matrix> {
    solve_linear(a, &identity(a.nrows()))
}

/// Determinant via the pivoted factorization; zero for singular input.
pub fn determinant(a: &Matrix) -> C64 {
    a.clone().lu().determinant()
}

/// Eigenvalues by Hessenberg reduction and shifted QR iteration.
///
/// For real input the complex eigenvalues are returned as exact conjugate
/// pairs and isolated near-real values have their imaginary part removed.
pub fn spectrum(a: &Matrix) -> Result<Vec<C64>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("spectrum of a non-square matrix".into()));
    }
    let n = a.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    if !a.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidArgument("non-finite matrix entry".into()));
    }
    let mut eig = schur_diagonal(a).ok_or(Error::NoConvergence)?;
    if is_real(a) {
        pair_conjugates(&mut eig, norm_fro(a));
    }
    Ok(eig)
}

/// Triangular-form eigenvalues. Exactly nilpotent shift patterns can stall
/// the complex iteration, so the real iteration and a fixed unitary
/// similarity are tried before giving up.
fn schur_diagonal(a: &Matrix) -> Option<Vec<C64>> {
    let n = a.nrows();
    let iters = 100 * n;
    let diag = |m: &Matrix| -> Option<Vec<C64>> {
        let t = nalgebra::linalg::Schur::try_new(m.clone(), f64::EPSILON, iters)?.unpack().1;
        Some((0..n).map(|i| t[(i, i)]).collect())
    };
    if let Some(e) = diag(a) {
        return Some(e);
    }
    if is_real(a) {
        let re = real_part(a);
        if let Some(s) = nalgebra::linalg::Schur::try_new(re, f64::EPSILON, iters) {
            return Some(s.complex_eigenvalues().iter().copied().collect());
        }
    }
    // Householder reflector built from a fixed irregular vector.
    let mut v = Matrix::zeros(n, 1);
    for i in 0..n {
        v[(i, 0)] = c64(1.0 + 0.37 * i as f64, 0.11 * (i * i) as f64);
    }
    let vn = norm_fro(&v);
    v /= c64(vn, 0.0);
    let h = identity(n) - &v * v.adjoint() * c64(2.0, 0.0);
    diag(&(&h * a * &h))
}

fn pair_conjugates(eig: &mut [C64], scale: f64) {
    let tol = 1e-7 * scale.max(1.0);
    let n = eig.len();
    let mut done = vec![false; n];
    for i in 0..n {
        if done[i] {
            continue;
        }
        done[i] = true;
        if eig[i].im.abs() <= f64::EPSILON * scale.max(1.0) * 16.0 {
            eig[i].im = 0.0;
            continue;
        }
        let target = eig[i].conj();
        let partner = (0..n)
            .filter(|&k| !done[k])
            .min_by(|&p, &q| (eig[p] - target).norm().total_cmp(&(eig[q] - target).norm()));
        match partner {
            Some(k) if (eig[k] - target).norm() <= tol => {
                done[k] = true;
                let re = 0.5 * (eig[i].re + eig[k].re);
                let im = 0.5 * (eig[i].im.abs() + eig[k].im.abs());
                let sign = if eig[i].im >= 0.0 { 1.0 } else { -1.0 };
                eig[i] = c64(re, sign * im);
                eig[k] = c64(re, -sign * im);
            }
            _ => eig[i].im = 0.0,
        }
    }
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &Matrix) -> Vec<f64> {
    let h = hermitian_part(m);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Numerical rank from a column-pivoted QR factorization, using the
/// threshold `k · ‖m‖₂ · 1e-12` with `k` the column count.
pub fn rank(m: &Matrix) -> usize {
    let k = m.ncols();
    if m.nrows() == 0 || k == 0 {
        return 0;
    }
    let qr = m.clone().col_piv_qr();
    let r = qr.r();
    let d = r.nrows().min(r.ncols());
    let lead = (0..d).map(|i| r[(i, i)].norm()).fold(0.0, f64::max);
    if lead == 0.0 {
        return 0;
    }
    let tol = k as f64 * lead * 1e-12;
    (0..d).filter(|&i| r[(i, i)].norm() > tol).count()
}

/// Least-squares solution of `y·t ≈ x`.
pub fn least_squares(y: &Matrix, x: &Matrix) -> Result<Matrix> {
    if y.nrows() != x.nrows() {
        return Err(Error::DimensionMismatch("least squares row mismatch".into()));
    }
    let svd = y.clone().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let eps = smax * 1e-13 * y.ncols().max(1) as f64;
    svd.solve(x, eps).map_err(|e| Error::InvalidArgument(e.to_string()))
}

/// Matrix exponential by scaling and squaring of a Taylor series.
pub fn expm(a: &Matrix) -> Matrix {
    let n = a.nrows();
    let norm = a.iter().map(|z| z.norm()).sum::<f64>().max(norm_fro(a));
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm * scale > 0.25 {
        scale *= 0.5;
        squarings += 1;
    }
    let x = a * c64(scale, 0.0);
    let mut term = identity(n);
    let mut sum = identity(n);
    for k in 1..=20 {
        term = &term * &x * c64(1.0 / k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Block diagonal assembly.
pub fn block_diag(blocks: &[&Matrix]) -> Matrix {
    let nr: usize = blocks.iter().map(|b| b.nrows()).sum();
    let nc: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = Matrix::zeros(nr, nc);
    let (mut r0, mut c0) = (0, 0);
    for b in blocks {
        out.view_mut((r0, c0), b.shape()).copy_from(*b);
        r0 += b.nrows();
        c0 += b.ncols();
    }
    out
}

/// Minimum pairwise distance test between two spectra.
pub(crate) fn closest_pair(a: &[C64], b: &[C64]) -> Option<(C64, C64, f64)> {
    let mut best: Option<(C64, C64, f64)> = None;
    for &x in a {
        for &y in b {
            let d = (x - y).norm();
            if best.is_none_or(|(_, _, bd)| d < bd) {
                best = Some((x, y, d));
            }
        }
    }
    best
}

/// Formats a complex scalar compactly for messages.
pub fn fmt_c(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}
