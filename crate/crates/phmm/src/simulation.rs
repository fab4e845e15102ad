//! Time-domain interconnections of plants with signal generators, integrated
//! by classical fixed-step Runge–Kutta, and an energy audit for
//! port-Hamiltonian models.

use crate::error::{Error, Result};
use crate::linalg::{c64, expm, inverse, real_part, realify, solve_sylvester, spectrum, to_complex, Matrix, SylvesterForm};
use crate::moments::moments_finite;
use crate::systems::{Generator, GeneratorLeft, GeneratorRight, LtiSystem, PortHamiltonianSystem};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

type RMat = DMatrix<f64>;
type RVec = DVector<f64>;

/// How the plant is wired to a right generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RightForm {
    /// `ẋ = Ax + BLω`, `y = Cx`; prediction `CΠω`.
    Standard,
    /// `Aẋ = x − BLω`, `y = Cẋ`; prediction `CΠSω` with `AΠS + BL = Π`.
    ImplicitOutput,
    /// `Aẋ = x − Bu̇`, `u̇ = LSω`, `y = Cx`; prediction `CΠ̄ω` with `AΠ̄S + BLS = Π̄`.
    DerivativeInput,
}

/// How the plant is wired to a left generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeftForm {
    /// `ẋ = Ax + Bu`, `ω̇ = 𝒬ω + ℛCx`, `d = ω + Υx`, so `ḋ = 𝒬d + ΥBu`.
    Finite,
    /// Impulse: `Aẋ = x − Bu`, `y = Cẋ`, `d = ω − Υx`, so `ḋ = 𝒬d + 𝒬ΥBu`.
    /// Step: `Aẋ = x − Bu̇`, `y = Cx`, `d̂ = 𝒬(ω − Υ̂x)`, so
    /// `d̂' = 𝒬d̂ + 𝒬(𝒬Υ̂ + ℛC)Bu̇`.
    Descriptor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputKind {
    Impulse,
    Step,
}

/// Sampled trajectories of one simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub t: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// `y` for right generators, `d` or `d̂` for left ones.
    pub outputs: Vec<Vec<f64>>,
    pub predicted: Vec<Vec<f64>>,
    /// Largest `‖output − predicted‖∞` over the last fifth of the horizon.
    pub tail_residual: f64,
    /// `1 + max ‖predicted‖∞` over the same window.
    pub tail_scale: f64,
    /// `exp(α·0.8·horizon)` with `α` the slowest plant decay rate.
    pub transient_bound: f64,
    pub note: Option<String>,
}

impl SimResult {
    pub fn relative_tail_residual(&self) -> f64 {
        self.tail_residual / self.tail_scale
    }

    /// Columns `t, x1.., y1.., pred1..`.
    pub fn to_csv(&self) -> String {
        let nx = self.states.first().map_or(0, Vec::len);
        let ny = self.outputs.first().map_or(0, Vec::len);
        let mut out = String::from("t");
        for i in 1..=nx {
            let _ = write!(out, ",x{i}");
        }
        for i in 1..=ny {
            let _ = write!(out, ",y{i}");
        }
        for i in 1..=ny {
            let _ = write!(out, ",pred{i}");
        }
        out.push('\n');
        for k in 0..self.t.len() {
            let _ = write!(out, "{:.16e}", self.t[k]);
            for v in self.states[k].iter().chain(&self.outputs[k]).chain(&self.predicted[k]) {
                let _ = write!(out, ",{v:.16e}");
            }
            out.push('\n');
        }
        out
    }
}

fn to_real(m: &Matrix) -> Result<RMat> {
    Ok(real_part(&realify(m)?))
}

fn max_abs_eig(m: &RMat) -> Result<f64> {
    Ok(spectrum(&to_complex(m))?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

fn check_step(dynamics: &RMat, dt: f64, horizon: f64) -> Result<usize> {
    if dt <= 0.0 || horizon <= 0.0 || !dt.is_finite() || !horizon.is_finite() {
        return Err(Error::InvalidArgument("horizon and step must be positive".into()));
    }
    let rho = max_abs_eig(dynamics)?;
    let bound = if rho > 0.0 { 2.8 / rho } else { f64::INFINITY };
    if dt >= bound {
        return Err(Error::DegenerateStep { dt, bound });
    }
    let steps = (horizon / dt).round() as usize;
    if steps < 1 {
        return Err(Error::InvalidArgument("horizon shorter than one step".into()));
    }
    Ok(steps)
}

/// Largest real part of the plant spectrum; must be negative.
fn plant_decay(a: &Matrix) -> Result<f64> {
    let alpha = spectrum(a)?.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    if alpha.is_nan() || alpha >= 0.0 {
        return Err(Error::UnstablePlant(alpha));
    }
    Ok(alpha)
}

fn check_marginal(m: &Matrix) -> Result<()> {
    let worst = spectrum(m)?.iter().map(|z| z.re.abs()).fold(0.0, f64::max);
    if worst > 1e-8 {
        return Err(Error::UnstableGenerator(worst));
    }
    Ok(())
}

/// One classical RK4 step of `ż = f(t, z)`.
fn rk4_step(f: &dyn Fn(f64, &RVec) -> RVec, t: f64, z: &RVec, h: f64) -> RVec {
    let k1 = f(t, z);
    let k2 = f(t + 0.5 * h, &(z + &k1 * (0.5 * h)));
    let k3 = f(t + 0.5 * h, &(z + &k2 * (0.5 * h)));
    let k4 = f(t + h, &(z + &k3 * h));
    z + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

struct Trajectory {
    t: Vec<f64>,
    z: Vec<RVec>,
}

fn integrate_linear(m: &RMat, z0: RVec, steps: usize, dt: f64) -> Trajectory {
    let f = |_t: f64, z: &RVec| m * z;
    let mut t = Vec::with_capacity(steps + 1);
    let mut z = Vec::with_capacity(steps + 1);
    t.push(0.0);
    z.push(z0);
    for k in 0..steps {
        let next = rk4_step(&f, k as f64 * dt, &z[k], dt);
        z.push(next);
        t.push((k + 1) as f64 * dt);
    }
    Trajectory { t, z }
}

fn finish(
    traj: Trajectory,
    n: usize,
    outputs: Vec<Vec<f64>>,
    predicted: Vec<Vec<f64>>,
    transient_bound: f64,
    note: Option<String>,
) -> SimResult {
    let len = traj.t.len();
    let start = len - (len / 5).max(1);
    let mut tail_residual: f64 = 0.0;
    let mut peak: f64 = 0.0;
    for k in start..len {
        for (a, b) in outputs[k].iter().zip(&predicted[k]) {
            tail_residual = tail_residual.max((a - b).abs());
            peak = peak.max(b.abs());
        }
    }
    if transient_bound > 1e-6 {
        log::warn!("transient bound {transient_bound:e} exceeds 1e-6; lengthen the horizon");
    }
    SimResult {
        states: traj.z.iter().map(|z| z.rows(0, n).iter().copied().collect()).collect(),
        t: traj.t,
        outputs,
        predicted,
        tail_residual,
        tail_scale: 1.0 + peak,
        transient_bound,
        note,
    }
}

fn block(top_left: &RMat, top_right: &RMat, bottom_right: &RMat) -> RMat {
    let (n, k) = (top_left.nrows(), bottom_right.nrows());
    let mut m = RMat::zeros(n + k, n + k);
    m.view_mut((0, 0), (n, n)).copy_from(top_left);
    m.view_mut((0, n), (n, k)).copy_from(top_right);
    m.view_mut((n, n), (k, k)).copy_from(bottom_right);
    m
}

fn vec_rows(v: &RVec) -> Vec<f64> {
    v.iter().copied().collect()
}

/// Plant driven by `ω̇ = Sω`, `ω(0) = w0`, compared with the moment-predicted
/// steady state.
pub fn simulate_right(
    sys: &LtiSystem,
    gen: &GeneratorRight,
    w0: &[f64],
    horizon: f64,
    dt: f64,
    form: RightForm,
) -> Result<SimResult> {
    let nu = gen.order();
    if w0.len() != nu {
        return Err(Error::DimensionMismatch(format!("initial generator state must have {nu} entries")));
    }
    if gen.l().nrows() != sys.b().ncols() {
        return Err(Error::DimensionMismatch("L rows must equal the plant input count".into()));
    }
    let alpha = plant_decay(sys.a())?;
    check_marginal(gen.s())?;
    let (a, b, c) = (to_real(sys.a())?, to_real(sys.b())?, to_real(sys.c())?);
    let (s, l) = (to_real(gen.s())?, to_real(gen.l())?);
    let n = a.nrows();

    // Effective dynamics, output map on z = [x; ω], and the predicted output matrix.
    let (m, out_map, phi, decay) = match form {
        RightForm::Standard => {
            let m = block(&a, &(&b * &l), &s);
            let mut out_map = RMat::zeros(c.nrows(), n + nu);
            out_map.view_mut((0, 0), (c.nrows(), n)).copy_from(&c);
            let (_, sol) = moments_finite(sys, &Generator::Right(gen.clone()))?;
            (m, out_map, to_real(&(sys.c() * &sol.matrix))?, alpha)
        }
        RightForm::ImplicitOutput | RightForm::DerivativeInput => {
            let ainv = to_real(&inverse(sys.a())?)?;
            let drive = if form == RightForm::ImplicitOutput { &b * &l } else { &b * &l * &s };
            let m = block(&ainv, &(-(&ainv * drive)), &s);
            let pi = if form == RightForm::ImplicitOutput {
                let pi = solve_sylvester(SylvesterForm::MarkovRight, sys.a(), gen.s(), &(sys.b() * gen.l()))?;
                to_real(&(sys.c() * pi * gen.s()))?
            } else {
                let pi = solve_sylvester(SylvesterForm::MarkovRightShifted, sys.a(), gen.s(), &(sys.b() * gen.l()))?;
                to_real(&(sys.c() * pi))?
            };
            let out_map = if form == RightForm::ImplicitOutput {
                &c * m.rows(0, n)
            } else {
                let mut o = RMat::zeros(c.nrows(), n + nu);
                o.view_mut((0, 0), (c.nrows(), n)).copy_from(&c);
                o
            };
            let decay = spectrum(&inverse(sys.a())?)?.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
            (m, out_map, pi, decay)
        }
    };
    let steps = check_step(&m, dt, horizon)?;
    let mut z0 = RVec::zeros(n + nu);
    z0.rows_mut(n, nu).copy_from_slice(w0);
    let traj = integrate_linear(&m, z0, steps, dt);
    let outputs: Vec<Vec<f64>> = traj.z.iter().map(|z| vec_rows(&(&out_map * z))).collect();
    let propagator = real_part(&expm(&(gen.s() * c64(dt, 0.0))));
    let mut w = RMat::from_column_slice(nu, 1, w0);
    let mut predicted = Vec::with_capacity(traj.t.len());
    for _ in &traj.t {
        predicted.push((&phi * &w).iter().copied().collect());
        w = &propagator * w;
    }
    let transient = (decay * 0.8 * horizon).exp();
    Ok(finish(traj, n, outputs, predicted, transient, None))
}

/// Plant started at rest, hit by an impulse or a step, feeding a left
/// generator. The output `d` (or `d̂`) is compared with the closed-form
/// solution of its own linear equation.
pub fn simulate_left(
    sys: &LtiSystem,
    gen: &GeneratorLeft,
    form: LeftForm,
    input: InputKind,
    horizon: f64,
    dt: f64,
) -> Result<SimResult> {
    if gen.r().ncols() != sys.c().nrows() {
        return Err(Error::DimensionMismatch("R columns must equal the plant output count".into()));
    }
    if sys.b().ncols() != 1 {
        return Err(Error::DimensionMismatch("left simulations drive a single input".into()));
    }
    let alpha = plant_decay(sys.a())?;
    let nu = gen.order();
    let (a, b, c) = (to_real(sys.a())?, to_real(sys.b())?, to_real(sys.c())?);
    let (q, r) = (to_real(gen.q())?, to_real(gen.r())?);
    let n = a.nrows();
    let rc = &r * &c;

    // z = [x; ω] or [x; ω; 1] for a finite step; returns (M, z0+, d-map, drive, note).
    let (m, z0, d_map, drive, decay, note, step_integral) = match form {
        LeftForm::Finite => {
            let ups = to_real(&solve_sylvester(SylvesterForm::FiniteLeft, sys.a(), gen.q(), &(gen.r() * sys.c()))?)?;
            let drive = &ups * &b;
            let mut d_map = RMat::zeros(nu, n + nu + 1);
            d_map.view_mut((0, 0), (nu, n)).copy_from(&ups);
            d_map.view_mut((0, n), (nu, nu)).copy_from(&RMat::identity(nu, nu));
            let mut m = RMat::zeros(n + nu + 1, n + nu + 1);
            m.view_mut((0, 0), (n, n)).copy_from(&a);
            m.view_mut((n, 0), (nu, n)).copy_from(&rc);
            m.view_mut((n, n), (nu, nu)).copy_from(&q);
            let mut z0 = RVec::zeros(n + nu + 1);
            match input {
                InputKind::Impulse => z0.rows_mut(0, n).copy_from(&b.column(0)),
                InputKind::Step => {
                    m.view_mut((0, n + nu), (n, 1)).copy_from(&b);
                    z0[n + nu] = 1.0;
                }
            }
            let note = "output d = omega + Upsilon x".to_string();
            (m, z0, d_map, drive, alpha, note, input == InputKind::Step)
        }
        LeftForm::Descriptor => {
            let ainv_c = inverse(sys.a())?;
            let ainv = to_real(&ainv_c)?;
            let jump_x = -(&ainv * &b);
            let mut m = RMat::zeros(n + nu + 1, n + nu + 1);
            m.view_mut((0, 0), (n, n)).copy_from(&ainv);
            let mut z0 = RVec::zeros(n + nu + 1);
            z0.rows_mut(0, n).copy_from(&jump_x.column(0));
            let mut d_map = RMat::zeros(nu, n + nu + 1);
            let decay = spectrum(&ainv_c)?.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
            match input {
                InputKind::Impulse => {
                    // y = Cẋ = CA⁻¹x for t > 0; the impulse in y kicks ω by −ℛCA⁻¹B.
                    m.view_mut((n, 0), (nu, n)).copy_from(&(&rc * &ainv));
                    m.view_mut((n, n), (nu, nu)).copy_from(&q);
                    z0.rows_mut(n, nu).copy_from(&(&rc * &jump_x).column(0));
                    let ups = to_real(&solve_sylvester(SylvesterForm::MarkovLeft, sys.a(), gen.q(), &(gen.r() * sys.c()))?)?;
                    d_map.view_mut((0, 0), (nu, n)).copy_from(&(-&ups));
                    d_map.view_mut((0, n), (nu, nu)).copy_from(&RMat::identity(nu, nu));
                    let drive = &q * &ups * &b;
                    let note = "output d = omega - Upsilon x".to_string();
                    (m, z0, d_map, drive, decay, note, false)
                }
                InputKind::Step => {
                    m.view_mut((n, 0), (nu, n)).copy_from(&rc);
                    m.view_mut((n, n), (nu, nu)).copy_from(&q);
                    let ups_hat = to_real(&solve_sylvester(
                        SylvesterForm::MarkovLeftShifted,
                        sys.a(),
                        gen.q(),
                        &(gen.r() * sys.c()),
                    )?)?;
                    d_map.view_mut((0, 0), (nu, n)).copy_from(&(-(&q * &ups_hat)));
                    d_map.view_mut((0, n), (nu, nu)).copy_from(&q);
                    let drive = &q * (&q * &ups_hat + &rc) * &b;
                    let note = "output d_hat = Q(omega - Upsilon_hat x)".to_string();
                    (m, z0, d_map, drive, decay, note, false)
                }
            }
        }
    };
    let steps = check_step(&m, dt, horizon)?;
    let traj = integrate_linear(&m, z0, steps, dt);
    let outputs: Vec<Vec<f64>> = traj.z.iter().map(|z| vec_rows(&(&d_map * z))).collect();

    // Closed form of ḋ = 𝒬d + drive·u: e^{𝒬t}·drive for an impulse, and
    // the top block of exp([[𝒬, drive], [0, 0]]t)·e_last for a step.
    let gen_aug = {
        let mut g = RMat::zeros(nu + 1, nu + 1);
        g.view_mut((0, 0), (nu, nu)).copy_from(&q);
        g.view_mut((0, nu), (nu, 1)).copy_from(&drive);
        to_complex(&g)
    };
    let propagator = real_part(&expm(&(&gen_aug * c64(dt, 0.0))));
    let mut state = RVec::zeros(nu + 1);
    if step_integral {
        state[nu] = 1.0;
    } else {
        state.rows_mut(0, nu).copy_from(&drive.column(0));
    }
    let mut predicted = Vec::with_capacity(traj.t.len());
    for _ in &traj.t {
        predicted.push(state.rows(0, nu).iter().copied().collect());
        state = &propagator * state;
    }
    let transient = (decay * 0.8 * horizon).exp();
    Ok(finish(traj, n, outputs, predicted, transient, Some(note)))
}

/// Largest per-step excess of stored energy over supplied energy,
/// `max_k [ℋ(x_{k+1}) − ℋ(x_k) − ∫uᵀy]₊`, under the input `u(t)`.
pub fn energy_audit(
    sys: &PortHamiltonianSystem,
    u: &dyn Fn(f64) -> Vec<f64>,
    x0: &[f64],
    horizon: f64,
    dt: f64,
) -> Result<f64> {
    if !(sys.r_psd() && sys.q_pd()) {
        return Err(Error::FlagsMissing);
    }
    let n = sys.order();
    if x0.len() != n {
        return Err(Error::DimensionMismatch(format!("initial state must have {n} entries")));
    }
    let a = to_real(&sys.a())?;
    let b = to_real(sys.b())?;
    let c = to_real(&sys.c())?;
    let steps = check_step(&a, dt, horizon)?;
    let m_in = b.ncols();
    // z = [x; supplied energy]
    let f = |t: f64, z: &RVec| -> RVec {
        let uv = u(t);
        let uvec = RVec::from_iterator(m_in, uv.iter().copied().chain(std::iter::repeat(0.0)).take(m_in));
        let x = z.rows(0, n).into_owned();
        let mut out = RVec::zeros(n + 1);
        out.rows_mut(0, n).copy_from(&(&a * &x + &b * &uvec));
        out[n] = uvec.dot(&(&c * &x));
        out
    };
    let mut z = RVec::zeros(n + 1);
    z.rows_mut(0, n).copy_from_slice(x0);
    let mut h_prev = sys.hamiltonian(x0);
    let mut worst: f64 = 0.0;
    for k in 0..steps {
        let next = rk4_step(&f, k as f64 * dt, &z, dt);
        let x: Vec<f64> = next.rows(0, n).iter().copied().collect();
        let h_next = sys.hamiltonian(&x);
        worst = worst.max(h_next - h_prev - (next[n] - z[n]));
        h_prev = h_next;
        z = next;
    }
    Ok(worst)
}
