use super::{
    closest_pair, fmt_c, identity, kron, norm_fro, spectrum, unvec, vec_of, Lu, Matrix, C64,
    EPS_SOLVE,
};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// The six Sylvester-type identities. `A` is the plant matrix, `S` the
/// generator matrix (named 𝒬 for the left forms), `C` the coupling term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SylvesterForm {
    /// `A·X + C = X·S`
    FiniteRight,
    /// `S·X = X·A + C`
    FiniteLeft,
    /// `A·X·S + C = X`
    MarkovRight,
    /// `A·X·S + C·S = X`
    MarkovRightShifted,
    /// `X = S·X·A + C`
    MarkovLeft,
    /// `X = S·X·A + C·A`
    MarkovLeftShifted,
}

impl SylvesterForm {
    pub fn is_right(self) -> bool {
        matches!(
            self,
            SylvesterForm::FiniteRight | SylvesterForm::MarkovRight | SylvesterForm::MarkovRightShifted
        )
    }

    pub fn is_markov(self) -> bool {
        !matches!(self, SylvesterForm::FiniteRight | SylvesterForm::FiniteLeft)
    }

    /// Shape of the unknown for a plant of order `n` and generator of order `nu`.
    pub fn solution_shape(self, n: usize, nu: usize) -> (usize, usize) {
        if self.is_right() {
            (n, nu)
        } else {
            (nu, n)
        }
    }
}

fn check_dims(form: SylvesterForm, a: &Matrix, s: &Matrix, c: &Matrix) -> Result<()> {
    if !a.is_square() || !s.is_square() {
        return Err(Error::DimensionMismatch("Sylvester operands must be square".into()));
    }
    let expect = form.solution_shape(a.nrows(), s.nrows());
    if c.shape() != expect {
        return Err(Error::DimensionMismatch(format!(
            "{form:?}: coupling term is {}x{}, expected {}x{}",
            c.nrows(),
            c.ncols(),
            expect.0,
            expect.1
        )));
    }
    Ok(())
}

/// The vectorized operator `𝒦` with `𝒦·vec(X) = vec(rhs)`.
pub fn kronecker_operator(form: SylvesterForm, a: &Matrix, s: &Matrix) -> Matrix {
    let n = a.nrows();
    let nu = s.nrows();
    match form {
        SylvesterForm::FiniteRight => kron(&identity(nu), a) - kron(&s.transpose(), &identity(n)),
        SylvesterForm::FiniteLeft => kron(&identity(n), s) - kron(&a.transpose(), &identity(nu)),
        SylvesterForm::MarkovRight | SylvesterForm::MarkovRightShifted => {
            identity(n * nu) - kron(&s.transpose(), a)
        }
        SylvesterForm::MarkovLeft | SylvesterForm::MarkovLeftShifted => {
            identity(n * nu) - kron(&a.transpose(), s)
        }
    }
}

/// Right-hand side matching [`kronecker_operator`], in matrix shape.
pub fn sylvester_rhs(form: SylvesterForm, a: &Matrix, s: &Matrix, c: &Matrix) -> Matrix {
    match form {
        SylvesterForm::FiniteRight => -c,
        SylvesterForm::FiniteLeft | SylvesterForm::MarkovRight | SylvesterForm::MarkovLeft => c.clone(),
        SylvesterForm::MarkovRightShifted => c * s,
        SylvesterForm::MarkovLeftShifted => c * a,
    }
}

/// The defect of the defining identity, written as `lhs − rhs`.
pub fn sylvester_residual(form: SylvesterForm, a: &Matrix, s: &Matrix, c: &Matrix, x: &Matrix) -> Matrix {
    match form {
        SylvesterForm::FiniteRight => a * x + c - x * s,
        SylvesterForm::FiniteLeft => s * x - x * a - c,
        SylvesterForm::MarkovRight => a * x * s + c - x,
        SylvesterForm::MarkovRightShifted => a * x * s + c * s - x,
        SylvesterForm::MarkovLeft => s * x * a + c - x,
        SylvesterForm::MarkovLeftShifted => s * x * a + c * a - x,
    }
}

fn check_solvable(form: SylvesterForm, a: &Matrix, s: &Matrix) -> Result<()> {
    let la = spectrum(a)?;
    let ls = spectrum(s)?;
    if form.is_markov() {
        for &x in &la {
            for &y in &ls {
                let p: C64 = x * y;
                if (p - 1.0).norm() <= 1e-8 {
                    return Err(Error::SpectrumProductClash(format!(
                        "{} * {} = 1",
                        fmt_c(x),
                        fmt_c(y)
                    )));
                }
            }
        }
    } else if let Some((x, y, d)) = closest_pair(&la, &ls) {
        if d <= 1e-8 * (1.0 + x.norm().max(y.norm())) {
            return Err(Error::SpectrumClash(format!(
                "{} (plant) ~ {} (generator)",
                fmt_c(x),
                fmt_c(y)
            )));
        }
    }
    Ok(())
}

/// Solves one of the six Sylvester forms by Kronecker vectorization.
///
/// Solvability is checked from the spectra for plants up to order 50 and
/// from pivot failure of the vectorized system otherwise.
pub fn solve_sylvester(form: SylvesterForm, a: &Matrix, s: &Matrix, c: &Matrix) -> Result<Matrix> {
    check_dims(form, a, s, c)?;
    let n = a.nrows();
    let nu = s.nrows();
    if n <= 50 {
        check_solvable(form, a, s)?;
    }
    let op = kronecker_operator(form, a, s);
    let rhs = vec_of(&sylvester_rhs(form, a, s, c));
    let rhs = Matrix::from_column_slice(rhs.len(), 1, rhs.as_slice());
    let sol = match Lu::new(&op) {
        Ok(lu) => lu.solve(&rhs)?,
        Err(Error::SingularMatrix { .. }) => {
            let msg = "vectorized operator is singular".to_string();
            return Err(if form.is_markov() {
                Error::SpectrumProductClash(msg)
            } else {
                Error::SpectrumClash(msg)
            });
        }
        Err(e) => return Err(e),
    };
    let (r, cdim) = form.solution_shape(n, nu);
    let x = unvec(&sol.column(0).into_owned(), r, cdim);
    let res = norm_fro(&sylvester_residual(form, a, s, c, &x));
    let bound = EPS_SOLVE * (norm_fro(a) + norm_fro(s) + 1.0) * (norm_fro(&x) + norm_fro(c)).max(1e-300);
    if res > bound {
        return Err(Error::IllConditioned { residual: res, bound });
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, jordan_block, real, real_column, rel_diff};

    #[test]
    fn scalar_finite_right() {
        let a = real(&[&[-2.0]]);
        let s = real(&[&[0.0]]);
        let c = real(&[&[1.0]]);
        let x = solve_sylvester(SylvesterForm::FiniteRight, &a, &s, &c).unwrap();
        assert!((x[(0, 0)] - c64(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn ladder_jordan_right() {
        let a = real(&[
            &[0.0, -1.0, 0.0, 0.0],
            &[1.0, -1.0, -1.0, 0.0],
            &[0.0, 1.0, 0.0, -1.0],
            &[0.0, 0.0, 1.0, -2.0],
        ]);
        let b = real_column(&[1.0, 0.0, 0.0, 0.0]);
        let l = real(&[&[1.0, 0.0]]);
        let s = jordan_block(C64::default(), 2);
        let x = solve_sylvester(SylvesterForm::FiniteRight, &a, &s, &(&b * &l)).unwrap();
        let expect = real(&[&[3.0, -11.0], &[1.0, -3.0], &[2.0, -9.0], &[1.0, -5.0]]);
        assert!(rel_diff(&x, &expect) < 1e-13);
    }

    #[test]
    fn clash_detected() {
        let a = real(&[&[-1.0]]);
        let s = real(&[&[-1.0]]);
        let c = real(&[&[1.0]]);
        assert!(matches!(
            solve_sylvester(SylvesterForm::FiniteRight, &a, &s, &c),
            Err(Error::SpectrumClash(_))
        ));
        let s = real(&[&[-1.0]]);
        assert!(matches!(
            solve_sylvester(SylvesterForm::MarkovRight, &a, &s, &c),
            Err(Error::SpectrumProductClash(_))
        ));
    }
}
