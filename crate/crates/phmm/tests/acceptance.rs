//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

mod common;

use common::*;
use phmm::linalg::{c64, expm, real_part, real_row, solve_sylvester, Matrix, SylvesterForm, C64};
use phmm::moments::moments_finite;
use phmm::reduction::*;
use phmm::simulation::{energy_audit, simulate_right, RightForm};
use phmm::systems::*;
use phmm::verification::{passivity_check, verify_certificate, PassivityData, DEFAULT_TOL};
use phmm::Error;
use rand::Rng;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s(e: Error) -> String {
    e.to_string()
}

fn unit_ladder() -> PortHamiltonianSystem {
    ladder_system([1.0; 3], [1.0; 2], [1.0; 2]).unwrap()
}

fn c2_ladder() -> PortHamiltonianSystem {
    ladder_with_q([1.0, 1.0, 2.0, 1.0]).unwrap()
}

fn samples() -> Vec<C64> {
    vec![
        c64(0.3, 0.0),
        c64(1.0, 1.0),
        c64(-0.4, 2.0),
        c64(2.5, -0.7),
        c64(0.1, 5.0),
        c64(7.0, 0.0),
        c64(-2.0, 0.5),
        c64(0.0, 0.8),
    ]
}

/// Largest relative deviation of a SISO transfer from `f` over the sample points.
fn transfer_error<T: Transfer>(m: &T, f: impl Fn(C64) -> C64) -> Result<f64, String> {
    let mut worst: f64 = 0.0;
    for s in samples() {
        let k = m.transfer(s).map_err(e2s)?[(0, 0)];
        let want = f(s);
        worst = worst.max((k - want).norm() / want.norm().max(1e-300));
    }
    Ok(worst)
}

fn rel(a: &Matrix, b: &Matrix) -> f64 {
    max_abs(&(a - b)) / max_abs(b).max(1.0)
}

fn jordan0(size: usize) -> GeneratorRight {
    let e1 = Matrix::from_fn(1, size, |_, j| c64(if j == 0 { 1.0 } else { 0.0 }, 0.0));
    GeneratorRight::jordan(c64(0.0, 0.0), size, e1).unwrap()
}

fn jordan0_left(size: usize) -> GeneratorLeft {
    let e1 = Matrix::from_fn(size, 1, |i, _| c64(if i == 0 { 1.0 } else { 0.0 }, 0.0));
    GeneratorLeft::jordan_transposed(c64(0.0, 0.0), size, e1).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let (mv, _) = moments_finite(&unit_ladder().to_lti(), &Generator::Right(jordan0(2))).map_err(e2s)?;
    let elapsed = start.elapsed();
    let eta: Vec<C64> = mv.values.iter().map(|v| v[(0, 0)]).collect();
    ensure((eta[0] - c64(3.0, 0.0)).norm() <= 1e-10, || format!("eta0 = {}", eta[0]))?;
    ensure((eta[1] - c64(-11.0, 0.0)).norm() <= 1e-10, || format!("eta1 = {}", eta[1]))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("moments [{:.3}, {:.3}] in {elapsed:?}", eta[0].re, eta[1].re))
}

fn criterion_2() -> Outcome {
    let red = reduce_ph_finite(&c2_ladder(), &Generator::Right(jordan0(2))).map_err(e2s)?;
    let m = &red.model;
    let r = |rows: &[&[f64]]| phmm::linalg::real(rows);
    let q = r(&[&[261.0, 82.0], &[82.0, 26.0]]) / c64(31.0, 0.0);
    let checks = [
        ("J", rel(m.j(), &r(&[&[0.0, 2.0], &[-2.0, 0.0]]))),
        ("R", rel(m.r(), &r(&[&[3.0, -11.0], &[-11.0, 41.0]]))),
        ("Q", rel(m.q(), &q)),
        ("B", rel(m.b(), &r(&[&[3.0], &[-9.0]]))),
    ];
    for (name, err) in checks {
        ensure(err <= 1e-8, || format!("{name} deviates by {err:e}"))?;
    }
    let err = transfer_error(m, |s| 9.0 * (3.0 * s + 4.0) / (31.0 * s * s + 45.0 * s + 12.0))?;
    ensure(err <= 1e-8, || format!("transfer deviates by {err:e}"))?;
    Ok(format!("matrices and transfer reproduced, transfer error {err:.1e}"))
}

fn criterion_3() -> Outcome {
    let sys = c2_ladder();
    let gen = Generator::Right(jordan0(3));
    let tilde = reduce_ph_markov(&sys, &gen, MarkovVariant::PiTilde).map_err(e2s)?;
    ensure(tilde.model.order() == 2, || format!("order {}", tilde.model.order()))?;
    let err = transfer_error(&tilde.model, |s| (s + 1.0) / (s * s + s + 1.0))?;
    ensure(err <= 1e-8, || format!("pi_tilde transfer deviates by {err:e}"))?;
    // index 0 holds the vanishing feedthrough; η₁..η₃ follow
    let orig = markov_parameters(&sys.to_lti(), 4);
    let red = markov_parameters(&tilde.model.to_lti(), 4);
    for (k, want) in [(1, 1.0), (2, 0.0), (3, -1.0)] {
        let (a, b) = (orig[k][(0, 0)], red[k][(0, 0)]);
        ensure((a - c64(want, 0.0)).norm() <= 1e-10, || format!("original eta{k} = {a}"))?;
        ensure((b - a).norm() <= 1e-10, || format!("reduced eta{k} = {b}, original {a}"))?;
    }
    let pi = reduce_ph_markov(&sys, &gen, MarkovVariant::Pi).map_err(e2s)?;
    let err_pi = transfer_error(&pi.model, |s| (s * s + s + 2.0) / (s * (s * s + s + 3.0)))?;
    ensure(err_pi <= 1e-8, || format!("pi transfer deviates by {err_pi:e}"))?;
    Ok(format!("pi_tilde error {err:.1e}, Markov (1, 0, -1) matched, pi error {err_pi:.1e}"))
}

fn criterion_4() -> Outcome {
    let sys = c2_ladder();
    let gen = Generator::Left(jordan0_left(2));
    let hat = reduce_ph_markov(&sys, &gen, MarkovVariant::UpsilonHat).map_err(e2s)?;
    let err_hat = transfer_error(&hat.model, |s| (s + 1.0) / (s * s + s + 3.0))?;
    let finite = reduce_ph_finite(&sys, &gen).map_err(e2s)?;
    let err_fin = transfer_error(&finite.model, |s| 9.0 * (3.0 * s + 2.0) / (32.0 * s * s + 27.0 * s + 6.0))?;
    // what the left projection does produce: the same model as the right one
    let err_alt = transfer_error(&finite.model, |s| 9.0 * (3.0 * s + 4.0) / (31.0 * s * s + 45.0 * s + 12.0))?;
    let detail = format!(
        "upsilon_hat error {err_hat:.1e}; left finite error {err_fin:.1e} against 9(3s+2)/(32s^2+27s+6), \
         computed model equals 9(3s+4)/(31s^2+45s+12) to {err_alt:.1e}"
    );
    ensure(err_hat <= 1e-8 && err_fin <= 1e-8, || detail.clone())?;
    Ok(detail)
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let sys = smib_system(SMIB_DEFAULT_DELTA).map_err(e2s)?;
    let gen = smib_generator();
    let red = reduce_ph_finite(&sys, &Generator::Right(gen.clone())).map_err(e2s)?;
    let (k, kr) = (sys.to_lti(), red.model.to_lti());
    let mut worst: f64 = 0.0;
    for (i, s) in gen.points().map_err(e2s)?.into_iter().enumerate() {
        let l = gen.l().columns(i, 1).into_owned();
        let d = (k.transfer(s).map_err(e2s)? - kr.transfer(s).map_err(e2s)?) * l;
        worst = worst.max(d.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt());
    }
    ensure(worst <= 1e-6, || format!("tangential residual {worst:e}"))?;
    let m = &red.model;
    ensure(m.r_psd() && m.q_pd(), || "reduced flags lost".into())?;
    ensure(max_abs(&(m.j() + m.j().transpose())) <= 1e-10 * max_abs(m.j()), || "J not skew".into())?;
    ensure(sym_eigs(m.r())[0] >= -1e-10 * max_abs(m.r()), || "R not PSD".into())?;
    ensure(sym_eigs(m.q())[0] > 0.0, || "Q not PD".into())?;

    let pi = solve_sylvester(SylvesterForm::FiniteRight, k.a(), gen.s(), &(k.b() * gen.l())).map_err(e2s)?;
    let p = pi.transpose() * sys.q() * &pi;
    let data = PassivityData::Family { s: gen.s(), l: gen.l(), pi: &pi, q: sys.q(), b: sys.b() };
    let rep = passivity_check(data, &p, DEFAULT_TOL).map_err(e2s)?;
    ensure(rep.passed(), || format!("passivity report {rep:?}"))?;

    let g = ph_gain(&sys, &Generator::Right(gen.clone())).map_err(e2s)?;
    let sgl = gen.s() - &g * gen.l();
    let (printed_sgl, printed_g) = smib_printed_tables();
    let table_dev = max_abs(&(real_part_c(&sgl) - &printed_sgl)).max(max_abs(&(real_part_c(&g) - &printed_g)));
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    let table = if table_dev <= 1e-3 { "agree" } else { "differ (informational)" };
    Ok(format!(
        "tangential residual {worst:.1e}, passivity with P = Pi^T Q Pi holds, printed tables {table} by {table_dev:.1e}, {elapsed:?}"
    ))
}

fn real_part_c(m: &Matrix) -> Matrix {
    m.map(|z| c64(z.re, 0.0))
}

const FORMS: [SylvesterForm; 6] = [
    SylvesterForm::FiniteRight,
    SylvesterForm::FiniteLeft,
    SylvesterForm::MarkovRight,
    SylvesterForm::MarkovRightShifted,
    SylvesterForm::MarkovLeft,
    SylvesterForm::MarkovLeftShifted,
];

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

fn kron_oracle(form: SylvesterForm, a: &Matrix, s: &Matrix, c: &Matrix) -> Matrix {
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
    let sol = op.lu().solve(&Matrix::from_column_slice(r * k, 1, rhs.as_slice())).expect("regular operator");
    Matrix::from_column_slice(r, k, sol.as_slice())
}

fn suite_a() -> Result<f64, String> {
    let mut worst: f64 = 0.0;
    for seed in 0..20u64 {
        let mut g = rng(1000 + seed);
        let n = g.gen_range(2..=12);
        let nu = g.gen_range(1..=4);
        let sys = random_stable(&mut g, n, 1, 1);
        let pts = positive_points(&mut g, nu);
        let right = diagonal_right(&mut g, &pts, 1);
        let left = diagonal_left(&mut g, &pts, 1);
        let fr = ReducedFamilyRight::new(&sys, &right).map_err(e2s)?;
        let fl = ReducedFamilyLeft::new(&sys, &left).map_err(e2s)?;
        let mut done = 0;
        while done < 10 {
            let gg = rand_matrix(&mut g, nu, 1) * c64(2.0, 0.0);
            let hh = rand_matrix(&mut g, 1, nu) * c64(2.0, 0.0);
            let (Ok(a), Ok(b)) = (fr.member(&gg), fl.member(&hh)) else { continue };
            done += 1;
            let (ma, _) = moments_finite(&a, &Generator::Right(right.clone())).map_err(e2s)?;
            let (mb, _) = moments_finite(&b, &Generator::Left(left.clone())).map_err(e2s)?;
            worst = worst.max(rel(&ma.stacked(), fr.cr())).max(rel(&mb.stacked(), fl.br()));
        }
    }
    ensure(worst <= 1e-8, || format!("(a) gain-invariance residual {worst:e}"))?;
    Ok(worst)
}

fn suite_b() -> Result<f64, String> {
    let mut worst: f64 = 0.0;
    for seed in 0..10u64 {
        let mut g = rng(2000 + seed);
        let a = random_stable(&mut g, 5, 1, 1).a().clone() * c64(0.3, 0.0);
        let s = rand_matrix(&mut g, 3, 3) * c64(0.5, 0.0);
        for form in FORMS {
            let (r, k) = form.solution_shape(5, 3);
            let c = rand_matrix(&mut g, r, k);
            let x = solve_sylvester(form, &a, &s, &c).map_err(e2s)?;
            worst = worst.max(rel(&x, &kron_oracle(form, &a, &s, &c)));
        }
    }
    ensure(worst <= 1e-10, || format!("(b) Kronecker oracle deviation {worst:e}"))?;
    Ok(worst)
}

fn structure_ok(m: &PortHamiltonianSystem) -> bool {
    let sc = |x: &Matrix| max_abs(x).max(1.0);
    max_abs(&(m.j() + m.j().transpose())) <= 1e-9 * sc(m.j())
        && max_abs(&(m.r() - m.r().transpose())) <= 1e-9 * sc(m.r())
        && max_abs(&(m.q() - m.q().transpose())) <= 1e-9 * sc(m.q())
        && sym_eigs(m.r())[0] >= -1e-9 * sc(m.r())
        && sym_eigs(m.q())[0] > 0.0
}

fn suite_c() -> Result<usize, String> {
    let mut count = 0;
    for seed in 0..50u64 {
        let mut g = rng(3000 + seed);
        let n = g.gen_range(3..=10);
        let sys = random_ph(&mut g, n, 1);
        let nu = g.gen_range(1..=n.min(4));
        let pts = positive_points(&mut g, nu);
        let right = Generator::Right(diagonal_right(&mut g, &pts, 1));
        let left = Generator::Left(diagonal_left(&mut g, &pts, 1));
        for red in [reduce_ph_finite(&sys, &right), reduce_ph_finite(&sys, &left)] {
            let red = red.map_err(e2s)?;
            ensure(structure_ok(&red.model), || format!("(c) structure lost for seed {seed}"))?;
            count += 1;
        }
    }
    Ok(count)
}

fn suite_d() -> Result<f64, String> {
    let mut worst: f64 = 0.0;
    for seed in 0..10u64 {
        let mut g = rng(4000 + seed);
        let n = g.gen_range(4..=10);
        let sys = random_stable(&mut g, n, 1, 1);
        let x = positive_points(&mut g, 2);
        let z = c64(x[0], x[1]);
        let t = rand_complex(&mut g, 1, 1);
        let points = [c64(x[0], 0.0), z, z.conj()];
        let tangents = [rand_matrix(&mut g, 1, 1), t.clone(), t.conjugate()];
        let v = krylov_basis(&sys, &points, &tangents).map_err(e2s)?.v;
        let gen = interpolation_generator(&points, &tangents).map_err(e2s)?;
        let pi = solve_sylvester(SylvesterForm::FiniteRight, sys.a(), gen.s(), &(sys.b() * gen.l())).map_err(e2s)?;
        let eq = basis_equivalence(&v, &pi).map_err(e2s)?;
        ensure(eq.equivalent, || format!("(d) bases differ for seed {seed}"))?;
        worst = worst.max(eq.residual / max_abs(&v).max(1.0));
    }
    ensure(worst <= 1e-8, || format!("(d) residual {worst:e}"))?;
    Ok(worst)
}

fn suite_e() -> Result<usize, String> {
    let sys = c2_ladder();
    let lti = sys.to_lti();
    let mut certs: Vec<(ReducedModel, MatchCertificate)> = Vec::new();
    let mut push_ph = |c: Certified<PortHamiltonianSystem>| certs.push((ReducedModel::Ph(c.model), c.certificate));
    push_ph(reduce_ph_finite(&sys, &Generator::Right(jordan0(2))).map_err(e2s)?);
    push_ph(reduce_ph_finite(&sys, &Generator::Left(jordan0_left(2))).map_err(e2s)?);
    push_ph(reduce_ph_markov(&sys, &Generator::Right(jordan0(3)), MarkovVariant::Pi).map_err(e2s)?);
    push_ph(reduce_ph_markov(&sys, &Generator::Right(jordan0(3)), MarkovVariant::PiTilde).map_err(e2s)?);
    let shifted = GeneratorRight::jordan(c64(0.3, 0.0), 2, real_row(&[1.0, 0.0])).unwrap();
    push_ph(reduce_ph_markov(&sys, &Generator::Right(shifted), MarkovVariant::PiBar).map_err(e2s)?);
    push_ph(reduce_ph_markov(&sys, &Generator::Left(jordan0_left(2)), MarkovVariant::Upsilon).map_err(e2s)?);
    push_ph(reduce_ph_markov(&sys, &Generator::Left(jordan0_left(2)), MarkovVariant::UpsilonHat).map_err(e2s)?);
    let one = Matrix::from_element(1, 1, c64(1.0, 0.0));
    push_ph(reduce_ph_krylov(&sys, &[c64(0.5, 1.0), c64(0.5, -1.0)], &[one.clone(), one]).map_err(e2s)?);
    push_ph(reduce_ph_finite(&smib_system(SMIB_DEFAULT_DELTA).unwrap(), &Generator::Right(smib_generator())).map_err(e2s)?);
    let h = real_row(&[0.4, -0.3, 0.7]);
    for v in 1..=4u8 {
        let r = reduce_descriptor_markov(&lti, &jordan0_left(3), DescriptorVariant::from_index(v).unwrap(), &h).map_err(e2s)?;
        certs.push((ReducedModel::Descriptor(r.model), r.certificate));
    }
    let fam = ReducedFamilyRight::new(&lti, &jordan0(2)).map_err(e2s)?;
    let r = fam.certified_member(&phmm::linalg::real_column(&[1.0, 2.0])).map_err(e2s)?;
    certs.push((ReducedModel::Lti(r.model), r.certificate));
    let fam = ReducedFamilyLeft::new(&lti, &jordan0_left(2)).map_err(e2s)?;
    let r = fam.certified_member(&real_row(&[1.0, 2.0])).map_err(e2s)?;
    certs.push((ReducedModel::Lti(r.model), r.certificate));
    let r = markov_companion_model(&lti, &[1.0, 2.0, 0.5], 0.3).map_err(e2s)?;
    certs.push((ReducedModel::Lti(r.model), r.certificate));
    for (model, cert) in &certs {
        let rep = verify_certificate(model.as_ref(), cert, DEFAULT_TOL).map_err(e2s)?;
        ensure(rep.passed(), || format!("(e) {:?} certificate fails: {rep:?}", cert.kind))?;
    }
    Ok(certs.len())
}

fn criterion_6() -> Outcome {
    let a = suite_a()?;
    let b = suite_b()?;
    let c = suite_c()?;
    let d = suite_d()?;
    let e = suite_e()?;
    Ok(format!(
        "(a) {a:.1e}, (b) {b:.1e}, (c) {c} structured reductions, (d) {d:.1e}, (e) {e} certificates verified"
    ))
}

fn criterion_7() -> Outcome {
    let lti = unit_ladder().to_lti();
    let constant = GeneratorRight::new(phmm::linalg::real(&[&[0.0]]), phmm::linalg::real(&[&[1.0]])).unwrap();
    let run = simulate_right(&lti, &constant, &[1.0], 80.0, 1e-3, RightForm::Standard).map_err(e2s)?;
    let y_end = run.outputs.last().unwrap()[0];
    ensure(run.tail_residual <= 1e-4 && (y_end - 3.0).abs() <= 1e-4, || {
        format!("constant input: tail {:e}, final y {y_end}", run.tail_residual)
    })?;

    // u = cos(wt): steady state |K(iw)|cos(wt + arg K(iw))
    let w = 1.3;
    let osc = GeneratorRight::new(phmm::linalg::real(&[&[0.0, w], &[-w, 0.0]]), real_row(&[1.0, 0.0])).unwrap();
    let run = simulate_right(&lti, &osc, &[1.0, 0.0], 80.0, 1e-3, RightForm::Standard).map_err(e2s)?;
    let k = lti.transfer(c64(0.0, w)).map_err(e2s)?[(0, 0)];
    let start = run.t.len() * 4 / 5;
    let (mut scc, mut sss, mut scs, mut syc, mut sys_) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for i in start..run.t.len() {
        let (c, s, y) = ((w * run.t[i]).cos(), (w * run.t[i]).sin(), run.outputs[i][0]);
        scc += c * c;
        sss += s * s;
        scs += c * s;
        syc += y * c;
        sys_ += y * s;
    }
    let det = scc * sss - scs * scs;
    let alpha = (syc * sss - sys_ * scs) / det;
    let beta = (sys_ * scc - syc * scs) / det;
    // y = α cos + β sin = A cos(wt + φ) with α = A cos φ, β = −A sin φ
    let amp = alpha.hypot(beta);
    let phase = (-beta).atan2(alpha);
    let amp_err = (amp - k.norm()).abs();
    let phase_err = (phase - k.arg()).abs();
    ensure(amp_err <= 1e-4 && phase_err <= 1e-4, || format!("sinusoid: amplitude error {amp_err:e}, phase error {phase_err:e}"))?;

    // RK4 order: halving dt must shrink the error against expm by at least 8x
    let gen = jordan0(2);
    let horizon = 4.0;
    let n = lti.order();
    let mut m = Matrix::zeros(n + 2, n + 2);
    m.view_mut((0, 0), (n, n)).copy_from(lti.a());
    m.view_mut((0, n), (n, 2)).copy_from(&(lti.b() * gen.l()));
    m.view_mut((n, n), (2, 2)).copy_from(gen.s());
    let mut z0 = Matrix::zeros(n + 2, 1);
    z0[(n + 1, 0)] = c64(1.0, 0.0);
    let exact = real_part(&(expm(&(m * c64(horizon, 0.0))) * z0));
    let err_at = |dt: f64| -> Result<f64, String> {
        let r = simulate_right(&lti, &gen, &[0.0, 1.0], horizon, dt, RightForm::Standard).map_err(e2s)?;
        let last = r.states.last().unwrap();
        Ok((0..n).map(|i| (last[i] - exact[(i, 0)]).abs()).fold(0.0, f64::max))
    };
    let (e1, e2) = (err_at(0.2)?, err_at(0.1)?);
    let ratio = e1 / e2;
    ensure(ratio >= 8.0, || format!("RK4 error ratio {ratio:.2} ({e1:e} -> {e2:e})"))?;
    Ok(format!(
        "final y {y_end:.6}, sinusoid amplitude/phase errors {amp_err:.1e}/{phase_err:.1e}, RK4 ratio {ratio:.1}"
    ))
}

fn criterion_8() -> Outcome {
    let sys = c2_ladder();
    let mut models = vec![("ladder", unit_ladder()), ("ladder-c2", sys.clone())];
    let name_ph = |n: &'static str, c: Result<Certified<PortHamiltonianSystem>, Error>| c.map(|c| (n, c.model)).map_err(e2s);
    models.push(name_ph("finite-right", reduce_ph_finite(&sys, &Generator::Right(jordan0(2))))?);
    models.push(name_ph("finite-left", reduce_ph_finite(&sys, &Generator::Left(jordan0_left(2))))?);
    models.push(name_ph("pi", reduce_ph_markov(&sys, &Generator::Right(jordan0(3)), MarkovVariant::Pi))?);
    models.push(name_ph("pi-tilde", reduce_ph_markov(&sys, &Generator::Right(jordan0(3)), MarkovVariant::PiTilde))?);
    let shifted = GeneratorRight::jordan(c64(0.3, 0.0), 2, real_row(&[1.0, 0.0])).unwrap();
    models.push(name_ph("pi-bar", reduce_ph_markov(&sys, &Generator::Right(shifted), MarkovVariant::PiBar))?);
    models.push(name_ph("upsilon", reduce_ph_markov(&sys, &Generator::Left(jordan0_left(2)), MarkovVariant::Upsilon))?);
    models.push(name_ph("upsilon-hat", reduce_ph_markov(&sys, &Generator::Left(jordan0_left(2)), MarkovVariant::UpsilonHat))?);
    let one = Matrix::from_element(1, 1, c64(1.0, 0.0));
    models.push(name_ph("krylov", reduce_ph_krylov(&sys, &[c64(0.5, 1.0), c64(0.5, -1.0)], &[one.clone(), one]))?);
    let smib = smib_system(SMIB_DEFAULT_DELTA).map_err(e2s)?;
    models.push(name_ph("smib-reduced", reduce_ph_finite(&smib, &Generator::Right(smib_generator())))?);

    let mut g = rng(8);
    let mut worst: f64 = 0.0;
    for (name, model) in &models {
        let m = model.b().ncols();
        let n = model.order();
        // bounded input: a few sinusoids with random frequency and phase, |u| ≤ 1
        let waves: Vec<Vec<(f64, f64, f64)>> = (0..m)
            .map(|_| (0..3).map(|_| (g.gen_range(0.0..1.0 / 3.0), g.gen_range(0.1..4.0), g.gen_range(0.0..std::f64::consts::TAU))).collect())
            .collect();
        let u = move |t: f64| -> Vec<f64> {
            waves.iter().map(|w| w.iter().map(|&(a, f, p)| a * (f * t + p).sin()).sum()).collect()
        };
        let x0: Vec<f64> = (0..n).map(|_| g.gen_range(-1.0..1.0)).collect();
        let violation = energy_audit(model, &u, &x0, 20.0, 1e-3).map_err(e2s)?;
        ensure(violation <= 1e-6, || format!("{name}: violation {violation:e}"))?;
        worst = worst.max(violation);
    }
    Ok(format!("{} models, worst violation {worst:.1e}", models.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("ladder finite moments", criterion_1),
        ("ladder pH reduction golden values", criterion_2),
        ("Markov matching golden values", criterion_3),
        ("left-side golden values", criterion_4),
        ("SMIB tangential reduction", criterion_5),
        ("property suites", criterion_6),
        ("steady-state semantics", criterion_7),
        ("energy audit", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (tag, detail) = match std::panic::catch_unwind(check) {
            Ok(Ok(d)) => ("PASS", d),
            Ok(Err(d)) => ("FAIL", d),
            Err(_) => ("FAIL", "panicked".to_string()),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("criterion {}: {tag} {name} | {detail} [{:.2?}]", i + 1, start.elapsed());
    }
    if failed > 0 {
        println!("{failed} of 8 criteria failed");
        std::process::exit(1);
    }
    println!("all 8 criteria passed");
}
