mod common;

use common::*;
use phmm::linalg::{
    c64, expm, identity, rel_diff, solve_linear, solve_sylvester, spectrum, Matrix, SylvesterForm, C64,
};
use proptest::prelude::*;

const FORMS: [SylvesterForm; 6] = [
    SylvesterForm::FiniteRight,
    SylvesterForm::FiniteLeft,
    SylvesterForm::MarkovRight,
    SylvesterForm::MarkovRightShifted,
    SylvesterForm::MarkovLeft,
    SylvesterForm::MarkovLeftShifted,
];

/// Defining identity written out independently of the library.
fn defect(form: SylvesterForm, a: &Matrix, s: &Matrix, c: &Matrix, x: &Matrix) -> Matrix {
    match form {
        SylvesterForm::FiniteRight => a * x + c - x * s,
        SylvesterForm::FiniteLeft => s * x - x * a - c,
        SylvesterForm::MarkovRight => a * x * s + c - x,
        SylvesterForm::MarkovRightShifted => a * x * s + c * s - x,
        SylvesterForm::MarkovLeft => s * x * a + c - x,
        SylvesterForm::MarkovLeftShifted => s * x * a + c * a - x,
    }
}

/// Assembles the linear map column by column from unit matrices and solves
/// the dense system with nalgebra's LU.
fn oracle(form: SylvesterForm, a: &Matrix, s: &Matrix, c: &Matrix) -> Matrix {
    let (r, k) = c.shape();
    let zero = Matrix::zeros(r, k);
    let mut op = Matrix::zeros(r * k, r * k);
    for col in 0..r * k {
        let mut e = zero.clone();
        e[(col % r, col / r)] = c64(1.0, 0.0);
        let img = defect(form, a, s, &zero, &e);
        op.set_column(col, &Matrix::from_column_slice(r * k, 1, img.as_slice()).column(0));
    }
    let rhs = -defect(form, a, s, c, &zero);
    let rhs = Matrix::from_column_slice(r * k, 1, rhs.as_slice());
    let sol = op.lu().solve(&rhs).expect("oracle operator is regular");
    Matrix::from_column_slice(r, k, sol.as_slice())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn sylvester_matches_kronecker_oracle(seed in any::<u64>(), complex in any::<bool>()) {
        let mut g = rng(seed);
        let a = random_stable(&mut g, 5, 1, 1).a().clone() * c64(0.3, 0.0);
        let s = if complex { rand_complex(&mut g, 3, 3) } else { rand_matrix(&mut g, 3, 3) } * c64(0.5, 0.0);
        for form in FORMS {
            let (r, k) = form.solution_shape(5, 3);
            let c = rand_matrix(&mut g, r, k);
            let x = match solve_sylvester(form, &a, &s, &c) {
                Ok(x) => x,
                Err(e) => {
                    // Only a genuine near-clash may be refused.
                    prop_assert!(matches!(e, phmm::Error::SpectrumClash(_) | phmm::Error::SpectrumProductClash(_)), "{e}");
                    continue;
                }
            };
            let o = oracle(form, &a, &s, &c);
            prop_assert!(rel_diff(&x, &o) <= 1e-10, "{form:?}: {}", rel_diff(&x, &o));
            let d = defect(form, &a, &s, &c, &x);
            prop_assert!(max_abs(&d) <= 1e-10 * (1.0 + max_abs(&x)));
        }
    }

    #[test]
    fn spectrum_trace_and_determinant(seed in any::<u64>(), n in 1usize..8) {
        let mut g = rng(seed);
        let a = rand_matrix(&mut g, n, n);
        let ev = spectrum(&a).unwrap();
        prop_assert_eq!(ev.len(), n);
        let tr: C64 = (0..n).map(|i| a[(i, i)]).sum();
        let sum: C64 = ev.iter().sum();
        prop_assert!((tr - sum).norm() <= 1e-9 * (1.0 + tr.norm()));
        let prod: C64 = ev.iter().product();
        let det = a.clone().determinant();
        prop_assert!((prod - det).norm() <= 1e-9 * (1.0 + det.norm()));
        // real input: the multiset is closed under conjugation
        for z in &ev {
            prop_assert!(ev.iter().any(|w| (w - z.conj()).norm() <= 1e-8 * (1.0 + z.norm())));
        }
    }

    #[test]
    fn expm_group_property(seed in any::<u64>(), n in 1usize..6) {
        let mut g = rng(seed);
        let a = rand_matrix(&mut g, n, n) * c64(1.5, 0.0);
        let prod = expm(&a) * expm(&(-&a));
        prop_assert!(rel_diff(&prod, &identity(n)) <= 1e-10);
        let half = expm(&(&a * c64(0.5, 0.0)));
        prop_assert!(rel_diff(&(&half * &half), &expm(&a)) <= 1e-10);
    }

    #[test]
    fn linear_solve_residual(seed in any::<u64>(), n in 1usize..10) {
        let mut g = rng(seed);
        let a = rand_matrix(&mut g, n, n) + identity(n) * c64(n as f64, 0.0);
        let b = rand_complex(&mut g, n, 2);
        let x = solve_linear(&a, &b).unwrap();
        prop_assert!(max_abs(&(&a * &x - &b)) <= 1e-12 * (1.0 + max_abs(&b)));
    }
}

#[test]
fn expm_matches_scalar_exponential() {
    let e = expm(&Matrix::from_element(1, 1, c64(-0.7, 2.0)));
    let z = c64(-0.7, 2.0).exp();
    assert!((e[(0, 0)] - z).norm() < 1e-14);
}
