use super::lti::{LtiSystem, Transfer};
use crate::error::{Error, Result};
use crate::linalg::{c64, fmt_c, Lu, Matrix, C64};

/// `EΞ̇ = FΞ + Gu`, `ψ = HΞ`, optionally with a differentiated input or output.
#[derive(Debug, Clone, PartialEq)]
pub struct DescriptorModel {
    e: Matrix,
    f: Matrix,
    g: Matrix,
    h: Matrix,
    input_derivative: bool,
    output_derivative: bool,
}

/// Fixed probe points for the pencil regularity test.
const REGULARITY_PROBES: [(f64, f64); 3] = [(0.731_1, 0.211_3), (-1.372_9, 0.590_4), (2.904_7, -1.118_6)];

impl DescriptorModel {
    pub fn new(
        e: Matrix,
        f: Matrix,
        g: Matrix,
        h: Matrix,
        input_derivative: bool,
        output_derivative: bool,
    ) -> Result<Self> {
        let nu = e.nrows();
        if !e.is_square() || f.shape() != (nu, nu) || g.nrows() != nu || h.ncols() != nu {
            return Err(Error::DimensionMismatch("descriptor matrices are inconsistent".into()));
        }
        let regular = REGULARITY_PROBES.iter().any(|&(re, im)| {
            let tau = c64(re, im);
            Lu::new(&(&e * tau - &f)).is_ok()
        });
        if nu > 0 && !regular {
            return Err(Error::Invariant("pencil τE−F is singular".into()));
        }
        Ok(DescriptorModel { e, f, g, h, input_derivative, output_derivative })
    }

    pub fn e(&self) -> &Matrix {
        &self.e
    }
    pub fn f(&self) -> &Matrix {
        &self.f
    }
    pub fn g(&self) -> &Matrix {
        &self.g
    }
    pub fn h(&self) -> &Matrix {
        &self.h
    }
    pub fn input_derivative(&self) -> bool {
        self.input_derivative
    }
    pub fn output_derivative(&self) -> bool {
        self.output_derivative
    }
    pub fn order(&self) -> usize {
        self.e.nrows()
    }

    fn derivative_count(&self) -> i32 {
        self.input_derivative as i32 + self.output_derivative as i32
    }

    /// Expansion coefficients at `s = ∞` of `H(sE−F)⁻¹G·s^d`: entry `j` is
    /// the coefficient of `s^{−j}`. Needs `E` invertible.
    pub fn markov_parameters(&self, count: usize) -> Result<Vec<Matrix>> {
        let lu = Lu::new(&self.e).map_err(|_| Error::SingularE)?;
        let einv_f = lu.solve(&self.f)?;
        let d = self.derivative_count() as usize;
        let mut v = lu.solve(&self.g)?;
        let mut out = Vec::with_capacity(count);
        // c₀ = 0, c_k = H(E⁻¹F)^{k−1}E⁻¹G; the derivative shift drops the first d.
        let total = count + d;
        let mut raw = vec![Matrix::zeros(self.h.nrows(), self.g.ncols())];
        for _ in 1..total {
            raw.push(&self.h * &v);
            v = &einv_f * v;
        }
        out.extend(raw.into_iter().skip(d).take(count));
        Ok(out)
    }

    /// State-space form `(E⁻¹F, E⁻¹G, H)`; only for models without
    /// differentiated ports.
    pub fn to_lti(&self) -> Result<LtiSystem> {
        if self.derivative_count() > 0 {
            return Err(Error::InvalidArgument("model has a differentiated port".into()));
        }
        let lu = Lu::new(&self.e).map_err(|_| Error::SingularE)?;
        LtiSystem::new(lu.solve(&self.f)?, lu.solve(&self.g)?, self.h.clone())
    }
}

impl Transfer for DescriptorModel {
    fn inputs(&self) -> usize {
        self.g.ncols()
    }
    fn outputs(&self) -> usize {
        self.h.nrows()
    }
    fn transfer(&self, s: C64) -> Result<Matrix> {
        let pencil = &self.e * s - &self.f;
        let x = match Lu::new(&pencil) {
            Ok(lu) => lu.solve(&self.g)?,
            Err(Error::SingularMatrix { .. }) => return Err(Error::PoleHit(fmt_c(s))),
            Err(e) => return Err(e),
        };
        Ok(&self.h * x * s.powi(self.derivative_count()))
    }
}
