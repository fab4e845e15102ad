use super::generator::GeneratorRight;
use super::ph::PortHamiltonianSystem;
use crate::error::{Error, Result};
use crate::linalg::{block_diag, inverse, real, real_diag, real_from_rows, Matrix};

/// Fourth order RLC ladder with `Q = diag(1/C₁, 1/L₁, 1/C₂, 1/L₂)`.
pub fn ladder_system(r: [f64; 3], c: [f64; 2], l: [f64; 2]) -> Result<PortHamiltonianSystem> {
    let named = [
        ("R1", r[0]),
        ("R2", r[1]),
        ("R3", r[2]),
        ("C1", c[0]),
        ("C2", c[1]),
        ("L1", l[0]),
        ("L2", l[1]),
    ];
    for (name, v) in named {
        if v.is_nan() || v <= 0.0 {
            return Err(Error::NonPositiveParameter(name.into()));
        }
    }
    let j = real(&[
        &[0.0, -1.0, 0.0, 0.0],
        &[1.0, 0.0, -1.0, 0.0],
        &[0.0, 1.0, 0.0, -1.0],
        &[0.0, 0.0, 1.0, 0.0],
    ]);
    let rr = real_diag(&[0.0, r[0], 0.0, r[1] + r[2]]);
    let q = real_diag(&[1.0 / c[0], 1.0 / l[0], 1.0 / c[1], 1.0 / l[1]]);
    let b = real(&[&[1.0], &[0.0], &[0.0], &[0.0]]);
    Ok(PortHamiltonianSystem::new(j, rr, q, b)?.with_detected_flags())
}

/// Ladder with unit resistances and an explicit diagonal energy matrix.
pub fn ladder_with_q(q: [f64; 4]) -> Result<PortHamiltonianSystem> {
    for (k, v) in q.iter().enumerate() {
        if v.is_nan() || *v <= 0.0 {
            return Err(Error::NonPositiveParameter(format!("q{}", k + 1)));
        }
    }
    ladder_system([1.0; 3], [1.0 / q[0], 1.0 / q[2]], [1.0 / q[1], 1.0 / q[3]])
}

/// Inductance matrix of the machine. The printed (5,5) entry is zero, which
/// makes the matrix indefinite; `l55` supplies that entry.
pub fn smib_inductance(l55: f64) -> Matrix {
    real_from_rows(
        6,
        6,
        &[
            0.22, 0.0, 0.01, 0.01, 0.0, 0.0, //
            0.0, 0.219, 0.0, 0.0, 0.009, 0.009, //
            0.01, 0.0, 1.825, 1.660, 0.0, 0.0, //
            0.01, 0.0, 1.660, 1.8313, 0.0, 0.0, //
            0.0, 0.009, 0.0, 0.0, l55, 0.009, //
            0.0, 0.009, 0.0, 0.0, 0.009, 0.134,
        ],
    )
}

/// Default for the missing (5,5) inductance entry, equal to the (6,6) entry.
pub const SMIB_DEFAULT_L55: f64 = 0.134;
/// Default load angle; the printed port matrix has sin δ = cos δ = 0.7071.
pub const SMIB_DEFAULT_DELTA: f64 = std::f64::consts::FRAC_PI_4;

/// Linearized single machine infinite bus model (7 states, 3 ports).
pub fn smib_system(delta: f64) -> Result<PortHamiltonianSystem> {
    smib_system_with(delta, SMIB_DEFAULT_L55)
}

pub fn smib_system_with(delta: f64, l55: f64) -> Result<PortHamiltonianSystem> {
    let lmat = smib_inductance(l55);
    let linv = inverse(&lmat)?;
    let q = block_diag(&[&linv, &real(&[&[1.0 / 6.0]])]);
    let q = (&q + q.transpose()) * crate::linalg::c64(0.5, 0.0);
    let r = real_diag(&[0.031, 0.031, 0.0006, 0.0284, 0.00619, 0.023638, 10.0]);
    let j = Matrix::zeros(7, 7);
    let mut bdata = [0.0; 21];
    bdata[6 * 3] = 1.0;
    bdata[2 * 3 + 1] = 1.0;
    bdata[2] = delta.sin();
    bdata[3 + 2] = delta.cos();
    let b = real_from_rows(7, 3, &bdata);
    Ok(PortHamiltonianSystem::new(j, r, q, b)?.with_detected_flags())
}

/// Interpolation data of the machine example: four real points and
/// tangential directions `l₁ = e₁, l₂ = e₂, l₃ = e₃, l₄ = e₁ + e₃`.
pub fn smib_generator() -> GeneratorRight {
    let s = real_diag(&[0.055, 0.01, 1.667, 0.0021]);
    let l = real(&[&[1.0, 0.0, 0.0, 1.0], &[0.0, 1.0, 0.0, 0.0], &[0.0, 0.0, 1.0, 1.0]]);
    GeneratorRight::new(s, l).expect("observable by construction")
}

/// The printed `S − GL` and `G` of the machine example, rounded to four decimals.
pub fn smib_printed_tables() -> (Matrix, Matrix) {
    let sgl = real_from_rows(
        4,
        4,
        &[
            -1.6667, -0.0048, -0.0004, -1.7220, //
            -0.0000, -0.0081, -0.0002, -0.0002, //
            0.0000, -0.4825, -0.0875, -1.7545, //
            -0.0000, 0.0047, 0.0004, 0.0025,
        ],
    );
    let g = real_from_rows(
        4,
        3,
        &[
            1.7217, 0.0048, 0.0004, //
            0.0000, 0.0181, 0.0002, //
            -0.0000, 0.4825, 1.7545, //
            0.0000, -0.0047, -0.0004,
        ],
    );
    (sgl, g)
}
