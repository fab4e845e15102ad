use crate::error::{Error, Result};
use crate::linalg::{jordan_block, rank, spectrum, Matrix, C64};

/// Right interpolation data: `ω̇ = Sω`, `u = Lω`, with `(L, S)` observable.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorRight {
    s: Matrix,
    l: Matrix,
}

/// Left interpolation data: `ω̇ = 𝒬ω + ℛv`, with `(𝒬, ℛ)` controllable.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorLeft {
    q: Matrix,
    r: Matrix,
}

fn observable(s: &Matrix, l: &Matrix) -> bool {
    let nu = s.nrows();
    let m = l.nrows();
    let mut stacked = Matrix::zeros(m * nu, nu);
    let mut block = l.clone();
    for k in 0..nu {
        stacked.view_mut((k * m, 0), (m, nu)).copy_from(&block);
        block *= s;
    }
    rank(&stacked) == nu
}

impl GeneratorRight {
    pub fn new(s: Matrix, l: Matrix) -> Result<Self> {
        if !s.is_square() || l.ncols() != s.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "S {}x{} with L {}x{}",
                s.nrows(),
                s.ncols(),
                l.nrows(),
                l.ncols()
            )));
        }
        if !observable(&s, &l) {
            return Err(Error::Invariant("pair (L, S) is not observable".into()));
        }
        Ok(GeneratorRight { s, l })
    }

    /// Jordan block at `eig` of the given size.
    pub fn jordan(eig: C64, size: usize, l: Matrix) -> Result<Self> {
        Self::new(jordan_block(eig, size), l)
    }

    pub fn s(&self) -> &Matrix {
        &self.s
    }
    pub fn l(&self) -> &Matrix {
        &self.l
    }
    pub fn order(&self) -> usize {
        self.s.nrows()
    }
    pub fn points(&self) -> Result<Vec<C64>> {
        spectrum(&self.s)
    }
}

impl GeneratorLeft {
    pub fn new(q: Matrix, r: Matrix) -> Result<Self> {
        if !q.is_square() || r.nrows() != q.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "Q {}x{} with R {}x{}",
                q.nrows(),
                q.ncols(),
                r.nrows(),
                r.ncols()
            )));
        }
        if !observable(&q.transpose(), &r.transpose()) {
            return Err(Error::Invariant("pair (Q, R) is not controllable".into()));
        }
        Ok(GeneratorLeft { q, r })
    }

    /// Transposed Jordan block (lower shift) at `eig`.
    pub fn jordan_transposed(eig: C64, size: usize, r: Matrix) -> Result<Self> {
        Self::new(jordan_block(eig, size).transpose(), r)
    }

    pub fn q(&self) -> &Matrix {
        &self.q
    }
    pub fn r(&self) -> &Matrix {
        &self.r
    }
    pub fn order(&self) -> usize {
        self.q.nrows()
    }
    pub fn points(&self) -> Result<Vec<C64>> {
        spectrum(&self.q)
    }
}

/// Either kind of generator.
#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    Right(GeneratorRight),
    Left(GeneratorLeft),
}

impl Generator {
    pub fn order(&self) -> usize {
        match self {
            Generator::Right(g) => g.order(),
            Generator::Left(g) => g.order(),
        }
    }
    pub fn as_right(&self) -> Result<&GeneratorRight> {
        match self {
            Generator::Right(g) => Ok(g),
            Generator::Left(_) => Err(Error::InvalidArgument("a right generator is required".into())),
        }
    }
    pub fn as_left(&self) -> Result<&GeneratorLeft> {
        match self {
            Generator::Left(g) => Ok(g),
            Generator::Right(_) => Err(Error::InvalidArgument("a left generator is required".into())),
        }
    }
}
