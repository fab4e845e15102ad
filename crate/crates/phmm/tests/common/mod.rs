//! Random instances shared by the property suites.
#![allow(dead_code)]

use phmm::linalg::{c64, identity, Matrix};
use phmm::systems::{GeneratorLeft, GeneratorRight, LtiSystem, PortHamiltonianSystem};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Entries uniform in `[-1, 1]`.
pub fn rand_matrix(rng: &mut StdRng, r: usize, c: usize) -> Matrix {
    Matrix::from_fn(r, c, |_, _| c64(rng.gen_range(-1.0..1.0), 0.0))
}

pub fn rand_complex(rng: &mut StdRng, r: usize, c: usize) -> Matrix {
    Matrix::from_fn(r, c, |_, _| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// Skew `J`, `R ⪰ 0.05I`, `Q ⪰ 0.5I`; the flags are verified.
pub fn random_ph(rng: &mut StdRng, n: usize, m: usize) -> PortHamiltonianSystem {
    let x = rand_matrix(rng, n, n);
    let y = rand_matrix(rng, n, n);
    let z = rand_matrix(rng, n, n);
    let j = &x - x.transpose();
    let r = &y * y.transpose() * c64(0.5, 0.0) + identity(n) * c64(0.05, 0.0);
    let q = &z * z.transpose() + identity(n) * c64(0.5, 0.0);
    let b = rand_matrix(rng, n, m);
    PortHamiltonianSystem::new_symmetrized(j, r, q, b).unwrap().with_flags(true, true).unwrap()
}

/// Shifted so that every eigenvalue has real part at most `-0.5`.
pub fn random_stable(rng: &mut StdRng, n: usize, m: usize, p: usize) -> LtiSystem {
    let x = rand_matrix(rng, n, n);
    let bound = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let a = &x - identity(n) * c64(bound + 0.5, 0.0);
    LtiSystem::new(a, rand_matrix(rng, n, m), rand_matrix(rng, p, n)).unwrap()
}

/// Distinct positive points spread over `[0.2, 8]` on a jittered log grid,
/// so the interpolation bases stay well conditioned.
pub fn positive_points(rng: &mut StdRng, k: usize) -> Vec<f64> {
    if k == 1 {
        return vec![rng.gen_range(0.2..3.0)];
    }
    (0..k)
        .map(|i| 0.2 * 40f64.powf(i as f64 / (k - 1) as f64) * rng.gen_range(-0.15f64..0.15).exp())
        .collect()
}

/// Diagonal right generator with random `L`.
pub fn diagonal_right(rng: &mut StdRng, points: &[f64], m: usize) -> GeneratorRight {
    let s = Matrix::from_fn(points.len(), points.len(), |i, j| c64(if i == j { points[i] } else { 0.0 }, 0.0));
    loop {
        let l = rand_matrix(rng, m, points.len()).map(|z| z + c64(0.3, 0.0));
        if let Ok(g) = GeneratorRight::new(s.clone(), l) {
            return g;
        }
    }
}

pub fn diagonal_left(rng: &mut StdRng, points: &[f64], p: usize) -> GeneratorLeft {
    let q = Matrix::from_fn(points.len(), points.len(), |i, j| c64(if i == j { points[i] } else { 0.0 }, 0.0));
    loop {
        let r = rand_matrix(rng, points.len(), p).map(|z| z + c64(0.3, 0.0));
        if let Ok(g) = GeneratorLeft::new(q.clone(), r) {
            return g;
        }
    }
}

pub fn max_abs(m: &Matrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest eigenvalue of the Hermitian part, computed via nalgebra directly.
pub fn sym_eigs(m: &Matrix) -> Vec<f64> {
    let re = nalgebra::DMatrix::<f64>::from_fn(m.nrows(), m.ncols(), |i, j| 0.5 * (m[(i, j)].re + m[(j, i)].re));
    let mut ev: Vec<f64> = re.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}
