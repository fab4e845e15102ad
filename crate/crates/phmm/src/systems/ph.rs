use super::lti::{LtiSystem, Transfer};
use crate::error::{Error, Result};
use crate::linalg::{
    c64, hermitian_eigenvalues, norm_max, realify, Lu, Matrix, C64, EPS_STRUCT,
};

/// `ẋ = (J−R)Qx + Bu`, `y = BᵀQx` with real J skew, R and Q symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct PortHamiltonianSystem {
    j: Matrix,
    r: Matrix,
    q: Matrix,
    b: Matrix,
    r_psd: bool,
    q_pd: bool,
}

fn skew_defect(m: &Matrix) -> f64 {
    norm_max(&(m + m.transpose()))
}

fn sym_defect(m: &Matrix) -> f64 {
    norm_max(&(m - m.transpose()))
}

/// Smallest eigenvalue of a symmetric matrix relative to its size.
pub(crate) fn min_eig_rel(m: &Matrix) -> f64 {
    let ev = hermitian_eigenvalues(m);
    let scale = ev.iter().map(|x| x.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    ev.first().copied().unwrap_or(0.0) / scale
}

impl PortHamiltonianSystem {
    /// Validates the structure without repairing it.
    pub fn new(j: Matrix, r: Matrix, q: Matrix, b: Matrix) -> Result<Self> {
        let n = j.nrows();
        for (name, m) in [("J", &j), ("R", &r), ("Q", &q)] {
            if m.shape() != (n, n) {
                return Err(Error::DimensionMismatch(format!("{name} must be {n}x{n}")));
            }
        }
        if b.nrows() != n {
            return Err(Error::DimensionMismatch(format!("B must have {n} rows")));
        }
        let j = realify(&j)?;
        let r = realify(&r)?;
        let q = realify(&q)?;
        let b = realify(&b)?;
        if skew_defect(&j) > EPS_STRUCT * norm_max(&j) {
            return Err(Error::Invariant("J is not skew-symmetric".into()));
        }
        if sym_defect(&r) > EPS_STRUCT * norm_max(&r) {
            return Err(Error::Invariant("R is not symmetric".into()));
        }
        if sym_defect(&q) > EPS_STRUCT * norm_max(&q) {
            return Err(Error::Invariant("Q is not symmetric".into()));
        }
        if n > 0 && Lu::new(&q).is_err() {
            return Err(Error::Invariant("Q is not invertible".into()));
        }
        Ok(PortHamiltonianSystem { j, r, q, b, r_psd: false, q_pd: false })
    }

    /// Replaces J, R and Q by their skew/symmetric parts before validating.
    pub fn new_symmetrized(j: Matrix, r: Matrix, q: Matrix, b: Matrix) -> Result<Self> {
        let half = c64(0.5, 0.0);
        let j = (&j - j.transpose()) * half;
        let r = (&r + r.transpose()) * half;
        let q = (&q + q.transpose()) * half;
        Self::new(j, r, q, b)
    }

    /// Sets the definiteness flags after checking them by eigenvalues.
    pub fn with_flags(mut self, r_psd: bool, q_pd: bool) -> Result<Self> {
        if r_psd && min_eig_rel(&self.r) < -EPS_STRUCT {
            return Err(Error::Invariant("R is not positive semidefinite".into()));
        }
        if q_pd && min_eig_rel(&self.q) <= EPS_STRUCT {
            return Err(Error::Invariant("Q is not positive definite".into()));
        }
        self.r_psd = r_psd;
        self.q_pd = q_pd;
        Ok(self)
    }

    /// Sets every flag that the eigenvalue checks support.
    pub fn with_detected_flags(self) -> Self {
        let r_psd = min_eig_rel(&self.r) >= -EPS_STRUCT;
        let q_pd = min_eig_rel(&self.q) > EPS_STRUCT;
        let mut s = self;
        s.r_psd = r_psd;
        s.q_pd = q_pd;
        s
    }

    pub fn j(&self) -> &Matrix {
        &self.j
    }
    pub fn r(&self) -> &Matrix {
        &self.r
    }
    pub fn q(&self) -> &Matrix {
        &self.q
    }
    pub fn b(&self) -> &Matrix {
        &self.b
    }
    pub fn order(&self) -> usize {
        self.j.nrows()
    }
    pub fn r_psd(&self) -> bool {
        self.r_psd
    }
    pub fn q_pd(&self) -> bool {
        self.q_pd
    }

    /// `(J−R)Q`
    pub fn a(&self) -> Matrix {
        (&self.j - &self.r) * &self.q
    }

    /// `BᵀQ`
    pub fn c(&self) -> Matrix {
        self.b.transpose() * &self.q
    }

    pub fn to_lti(&self) -> LtiSystem {
        LtiSystem::new(self.a(), self.b.clone(), self.c()).expect("validated dimensions")
    }

    /// Stored energy `½xᵀQx` for a real state.
    pub fn hamiltonian(&self, x: &[f64]) -> f64 {
        let n = self.order();
        let mut h = 0.0;
        for i in 0..n {
            for k in 0..n {
                h += x[i] * self.q[(i, k)].re * x[k];
            }
        }
        0.5 * h
    }
}

pub fn ph_to_lti(sys: &PortHamiltonianSystem) -> LtiSystem {
    sys.to_lti()
}

impl Transfer for PortHamiltonianSystem {
    fn inputs(&self) -> usize {
        self.b.ncols()
    }
    fn outputs(&self) -> usize {
        self.b.ncols()
    }
    fn transfer(&self, s: C64) -> Result<Matrix> {
        self.to_lti().transfer(s)
    }
}
