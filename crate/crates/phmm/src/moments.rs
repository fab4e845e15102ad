//! Moments at finite points and Markov-type moments, on either side.
//!
//! Moments are the entries of `CΠ` (right) or `ΥB` (left). For a Jordan block
//! generator these are the plain Taylor coefficients `[K, K′, K″/2!, …]`.

use crate::error::{Error, Result};
use crate::linalg::{solve_sylvester, spectrum, Matrix, SylvesterForm, C64};
use crate::systems::{resolvent_solve, Generator, GeneratorRight, LtiSystem};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Right,
    Left,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentKind {
    Finite,
    MarkovPi,
    MarkovPiBar,
    MarkovPiTilde,
    MarkovUpsilon,
    MarkovUpsilonHat,
}

impl MomentKind {
    pub fn side(self) -> Side {
        match self {
            MomentKind::MarkovUpsilon | MomentKind::MarkovUpsilonHat => Side::Left,
            _ => Side::Right,
        }
    }
}

/// A solved Sylvester equation together with its data.
#[derive(Debug, Clone, PartialEq)]
pub struct SylvesterSolution {
    pub matrix: Matrix,
    pub form: SylvesterForm,
    pub generator: Generator,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentVector {
    /// Right side: `p×1` columns of `CΠ`; left side: `1×m` rows of `ΥB`.
    pub values: Vec<Matrix>,
    pub side: Side,
    pub kind: MomentKind,
    pub points: Vec<C64>,
}

impl MomentVector {
    fn from_stacked(stacked: &Matrix, side: Side, kind: MomentKind, points: Vec<C64>) -> Self {
        let values = match side {
            Side::Right => (0..stacked.ncols()).map(|j| stacked.columns(j, 1).into_owned()).collect(),
            Side::Left => (0..stacked.nrows()).map(|i| stacked.rows(i, 1).into_owned()).collect(),
        };
        MomentVector { values, side, kind, points }
    }

    /// Reassembles `CΠ` (`p×ν`) or `ΥB` (`ν×m`).
    pub fn stacked(&self) -> Matrix {
        let Some(first) = self.values.first() else {
            return Matrix::zeros(0, 0);
        };
        match self.side {
            Side::Right => {
                let mut out = Matrix::zeros(first.nrows(), self.values.len());
                for (j, v) in self.values.iter().enumerate() {
                    out.set_column(j, &v.column(0));
                }
                out
            }
            Side::Left => {
                let mut out = Matrix::zeros(self.values.len(), first.ncols());
                for (i, v) in self.values.iter().enumerate() {
                    out.set_row(i, &v.row(0));
                }
                out
            }
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn check_ports(sys: &LtiSystem, gen: &Generator) -> Result<()> {
    match gen {
        Generator::Right(g) if g.l().nrows() != sys.b().ncols() => Err(Error::DimensionMismatch(
            format!("L has {} rows, plant has {} inputs", g.l().nrows(), sys.b().ncols()),
        )),
        Generator::Left(g) if g.r().ncols() != sys.c().nrows() => Err(Error::DimensionMismatch(
            format!("R has {} columns, plant has {} outputs", g.r().ncols(), sys.c().nrows()),
        )),
        _ => Ok(()),
    }
}

/// Solves `AΠ + BL = ΠS` (right) or `𝒬Υ = ΥA + ℛC` (left) and returns the moments.
pub fn moments_finite(sys: &LtiSystem, gen: &Generator) -> Result<(MomentVector, SylvesterSolution)> {
    check_ports(sys, gen)?;
    match gen {
        Generator::Right(g) => {
            let pi = solve_sylvester(SylvesterForm::FiniteRight, sys.a(), g.s(), &(sys.b() * g.l()))?;
            let mv = MomentVector::from_stacked(&(sys.c() * &pi), Side::Right, MomentKind::Finite, g.points()?);
            Ok((mv, SylvesterSolution { matrix: pi, form: SylvesterForm::FiniteRight, generator: gen.clone() }))
        }
        Generator::Left(g) => {
            let ups = solve_sylvester(SylvesterForm::FiniteLeft, sys.a(), g.q(), &(g.r() * sys.c()))?;
            let mv = MomentVector::from_stacked(&(&ups * sys.b()), Side::Left, MomentKind::Finite, g.points()?);
            Ok((mv, SylvesterSolution { matrix: ups, form: SylvesterForm::FiniteLeft, generator: gen.clone() }))
        }
    }
}

/// Block pieces of a generator `S = [[0, S₁], [0, S₂]]`, `L = [l₁, L₂]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TildeSplit {
    pub l1: Matrix,
    pub s1: Matrix,
    pub l2: Matrix,
    pub s2: Matrix,
}

impl TildeSplit {
    /// The coupling term `l₁S₁ + L₂S₂` of the reduced-size equation.
    pub fn coupling(&self) -> Matrix {
        &self.l1 * &self.s1 + &self.l2 * &self.s2
    }
}

pub fn split_tilde(gen: &GeneratorRight) -> Result<TildeSplit> {
    let s = gen.s();
    let k = s.nrows();
    if k < 2 {
        return Err(Error::InvalidArgument("reduced-size Markov construction needs order ≥ 2".into()));
    }
    let scale = crate::linalg::norm_max(s).max(1.0);
    let leading = s.column(0).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if leading > 1e-14 * scale {
        return Err(Error::InvalidArgument("S must have a zero first column".into()));
    }
    Ok(TildeSplit {
        l1: gen.l().columns(0, 1).into_owned(),
        s1: s.view((0, 1), (1, k - 1)).into_owned(),
        l2: gen.l().columns(1, k - 1).into_owned(),
        s2: s.view((1, 1), (k - 1, k - 1)).into_owned(),
    })
}

/// Markov-type moments for the requested construction.
pub fn moments_markov(
    sys: &LtiSystem,
    gen: &Generator,
    kind: MomentKind,
) -> Result<(MomentVector, SylvesterSolution)> {
    check_ports(sys, gen)?;
    let (a, b, c) = (sys.a(), sys.b(), sys.c());
    match kind {
        MomentKind::Finite => moments_finite(sys, gen),
        MomentKind::MarkovPi | MomentKind::MarkovPiBar => {
            let g = gen.as_right()?;
            let form = if kind == MomentKind::MarkovPi {
                SylvesterForm::MarkovRight
            } else {
                SylvesterForm::MarkovRightShifted
            };
            let pi = solve_sylvester(form, a, g.s(), &(b * g.l()))?;
            let stacked = if kind == MomentKind::MarkovPi { c * &pi * g.s() } else { c * &pi };
            let mv = MomentVector::from_stacked(&stacked, Side::Right, kind, g.points()?);
            Ok((mv, SylvesterSolution { matrix: pi, form, generator: gen.clone() }))
        }
        MomentKind::MarkovPiTilde => {
            let g = gen.as_right()?;
            let split = split_tilde(g)?;
            let pi = solve_sylvester(SylvesterForm::MarkovRight, a, &split.s2, &(b * split.coupling()))?;
            let mv = MomentVector::from_stacked(&(c * &pi), Side::Right, kind, spectrum(&split.s2)?);
            Ok((mv, SylvesterSolution { matrix: pi, form: SylvesterForm::MarkovRight, generator: gen.clone() }))
        }
        MomentKind::MarkovUpsilon | MomentKind::MarkovUpsilonHat => {
            let g = gen.as_left()?;
            let form = if kind == MomentKind::MarkovUpsilon {
                SylvesterForm::MarkovLeft
            } else {
                SylvesterForm::MarkovLeftShifted
            };
            let rc = g.r() * c;
            let ups = solve_sylvester(form, a, g.q(), &rc)?;
            let stacked = if kind == MomentKind::MarkovUpsilon {
                g.q() * &ups * b
            } else {
                g.q() * (g.q() * &ups + &rc) * b
            };
            let mv = MomentVector::from_stacked(&stacked, Side::Left, kind, g.points()?);
            Ok((mv, SylvesterSolution { matrix: ups, form, generator: gen.clone() }))
        }
    }
}

/// Taylor data `(−1)^k C(s₀I−A)^{−(k+1)}B = K⁽ᵏ⁾(s₀)/k!` for `k = 0..count`,
/// computed by repeated resolvent solves. Matches `CΠ` for a Jordan block.
pub fn moment_derivative_oracle(sys: &LtiSystem, s0: C64, count: usize) -> Result<Vec<Matrix>> {
    let mut out = Vec::with_capacity(count);
    let mut x = sys.b().clone();
    let mut sign = 1.0;
    for _ in 0..count {
        x = resolvent_solve(sys.a(), s0, &x)?;
        out.push(sys.c() * &x * C64::new(sign, 0.0));
        sign = -sign;
    }
    Ok(out)
}
