use crate::error::{Error, Result};
use crate::linalg::{fmt_c, identity, Lu, Matrix, C64};

/// Frequency-domain evaluation shared by every realization.
pub trait Transfer {
    fn inputs(&self) -> usize;
    fn outputs(&self) -> usize;
    /// `K(s)` as a `p×m` matrix.
    fn transfer(&self, s: C64) -> Result<Matrix>;
}

/// Standard realization `ẋ = Ax + Bu`, `y = Cx`.
#[derive(Debug, Clone, PartialEq)]
pub struct LtiSystem {
    a: Matrix,
    b: Matrix,
    c: Matrix,
}

impl LtiSystem {
    pub fn new(a: Matrix, b: Matrix, c: Matrix) -> Result<Self> {
        let n = a.nrows();
        if !a.is_square() || b.nrows() != n || c.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "A {}x{}, B {}x{}, C {}x{}",
                a.nrows(),
                a.ncols(),
                b.nrows(),
                b.ncols(),
                c.nrows(),
                c.ncols()
            )));
        }
        Ok(LtiSystem { a, b, c })
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }
    pub fn b(&self) -> &Matrix {
        &self.b
    }
    pub fn c(&self) -> &Matrix {
        &self.c
    }
    pub fn order(&self) -> usize {
        self.a.nrows()
    }
}

/// Solves `(sI − A)X = rhs`, mapping singularity to a pole hit.
pub(crate) fn resolvent_solve(a: &Matrix, s: C64, rhs: &Matrix) -> Result<Matrix> {
    let shifted = identity(a.nrows()) * s - a;
    match Lu::new(&shifted) {
        Ok(lu) => lu.solve(rhs),
        Err(Error::SingularMatrix { .. }) => Err(Error::PoleHit(fmt_c(s))),
        Err(e) => Err(e),
    }
}

impl Transfer for LtiSystem {
    fn inputs(&self) -> usize {
        self.b.ncols()
    }
    fn outputs(&self) -> usize {
        self.c.nrows()
    }
    fn transfer(&self, s: C64) -> Result<Matrix> {
        Ok(&self.c * resolvent_solve(&self.a, s, &self.b)?)
    }
}

/// `[0, CB, CAB, …, CA^{k−2}B]`, the expansion coefficients of `K` in `1/s`.
pub fn markov_parameters(sys: &LtiSystem, count: usize) -> Vec<Matrix> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    out.push(Matrix::zeros(sys.outputs(), sys.inputs()));
    let mut akb = sys.b.clone();
    for _ in 1..count {
        out.push(&sys.c * &akb);
        akb = &sys.a * akb;
    }
    out
}
