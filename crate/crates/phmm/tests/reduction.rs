use phmm::linalg::{c64, real, real_column, real_row, rel_diff, Matrix, C64};
use phmm::reduction::*;
use phmm::systems::*;

fn ladder_c2() -> PortHamiltonianSystem {
    ladder_with_q([1.0, 1.0, 2.0, 1.0]).unwrap()
}

fn eval<T: Transfer>(m: &T, s: C64) -> C64 {
    m.transfer(s).unwrap()[(0, 0)]
}

fn sample_points() -> Vec<C64> {
    vec![c64(0.3, 0.0), c64(1.0, 1.0), c64(-0.4, 2.0), c64(2.5, -0.7), c64(0.1, 5.0), c64(7.0, 0.0), c64(-2.0, 0.5), c64(0.0, 0.8)]
}

fn assert_transfer<T: Transfer>(m: &T, f: impl Fn(C64) -> C64, tol: f64) {
    for s in sample_points() {
        let (a, b) = (eval(m, s), f(s));
        assert!((a - b).norm() <= tol * b.norm().max(1e-12), "at {s}: {a} vs {b}");
    }
}

#[test]
fn ladder_finite_right_golden() {
    let sys = ladder_c2();
    let gen = Generator::Right(GeneratorRight::jordan(c64(0.0, 0.0), 2, real_row(&[1.0, 0.0])).unwrap());
    let red = reduce_ph_finite(&sys, &gen).unwrap();
    let m = &red.model;
    assert!(rel_diff(m.j(), &real(&[&[0.0, 2.0], &[-2.0, 0.0]])) < 1e-10);
    assert!(rel_diff(m.r(), &real(&[&[3.0, -11.0], &[-11.0, 41.0]])) < 1e-10);
    let q = real(&[&[261.0, 82.0], &[82.0, 26.0]]) / c64(31.0, 0.0);
    assert!(rel_diff(m.q(), &q) < 1e-10);
    assert!(rel_diff(m.b(), &real_column(&[3.0, -9.0])) < 1e-10);
    assert_transfer(m, |s| 9.0 * (3.0 * s + 4.0) / (31.0 * s * s + 45.0 * s + 12.0), 1e-8);
}

#[test]
fn ladder_markov_pi_tilde_and_pi() {
    let sys = ladder_c2();
    let s = phmm::linalg::jordan_block(c64(0.0, 0.0), 3);
    let gen = Generator::Right(GeneratorRight::new(s.clone(), real_row(&[1.0, 0.0, 0.0])).unwrap());
    let red = reduce_ph_markov(&sys, &gen, MarkovVariant::PiTilde).unwrap();
    assert_eq!(red.model.order(), 2);
    assert_transfer(&red.model, |s| (s + 1.0) / (s * s + s + 1.0), 1e-8);
    let red = reduce_ph_markov(&sys, &gen, MarkovVariant::Pi).unwrap();
    assert_transfer(&red.model, |s| (s * s + s + 2.0) / (s * (s * s + s + 3.0)), 1e-8);
}

#[test]
fn ladder_left_side() {
    let sys = ladder_c2();
    let rc = real_column(&[1.0, 0.0]);
    let gen = Generator::Left(GeneratorLeft::jordan_transposed(c64(0.0, 0.0), 2, rc.clone()).unwrap());
    let red = reduce_ph_finite(&sys, &gen).unwrap();
    for s in sample_points() {
        println!("left finite {s}: {} vs printed {}", eval(&red.model, s), 9.0 * (3.0 * s + 2.0) / (32.0 * s * s + 27.0 * s + 6.0));
    }
    let red = reduce_ph_markov(&sys, &gen, MarkovVariant::UpsilonHat).unwrap();
    assert_transfer(&red.model, |s| (s + 1.0) / (s * s + s + 3.0), 1e-8);
    let up = reduce_ph_markov(&sys, &gen, MarkovVariant::Upsilon).unwrap();
    println!("upsilon J {:?}", up.model.j());
}

#[test]
fn descriptor_variants_match_markov() {
    let sys = ladder_c2().to_lti();
    let nu = 3;
    let gen = GeneratorLeft::jordan_transposed(c64(0.0, 0.0), nu, real_column(&[1.0, 0.0, 0.0])).unwrap();
    let h = real_row(&[0.4, -0.3, 0.7]);
    let orig = markov_parameters(&sys, 6);
    for v in 1..=4u8 {
        let var = DescriptorVariant::from_index(v).unwrap();
        let red = reduce_descriptor_markov(&sys, &gen, var, &h).unwrap();
        let mp = red.model.markov_parameters(6).unwrap();
        let matched = if v % 2 == 1 { nu + 1 } else { nu };
        for k in 0..matched {
            assert!((mp[k][(0, 0)] - orig[k][(0, 0)]).norm() < 1e-9, "variant {v} k {k}: {} vs {}", mp[k][(0, 0)], orig[k][(0, 0)]);
        }
    }
}

#[test]
fn krylov_matches_finite() {
    let sys = ladder_c2();
    let t = real_column(&[1.0]);
    let red = reduce_ph_krylov(&sys, &[c64(0.0, 0.0), c64(0.0, 0.0)], &[t.clone(), t]).unwrap();
    assert_transfer(&red.model, |s| 9.0 * (3.0 * s + 4.0) / (31.0 * s * s + 45.0 * s + 12.0), 1e-8);
    let red = reduce_ph_krylov(&sys, &[c64(0.5, 1.0), c64(0.5, -1.0)], &[real_column(&[1.0]), real_column(&[1.0])]).unwrap();
    let k = sys.to_lti();
    for s in [c64(0.5, 1.0), c64(0.5, -1.0)] {
        assert!((eval(&red.model, s) - eval(&k, s)).norm() < 1e-9);
    }
}

#[test]
fn mirror_examples() {
    let sys = LtiSystem::new(phmm::linalg::real_diag(&[-1.0, -10.0]), real_column(&[4.0, 0.1]), real_row(&[1.0, 1.0])).unwrap();
    assert_eq!(mirror_points(&sys, 1).unwrap(), vec![c64(1.0, 0.0)]);
    let a: Matrix = real(&[&[-1.0, 2.0, 0.0], &[-2.0, -1.0, 0.0], &[0.0, 0.0, -5.0]]);
    let sys = LtiSystem::new(a, real_column(&[1.0, 1.0, 0.01]), real_row(&[1.0, 1.0, 1.0])).unwrap();
    let pts = mirror_points(&sys, 2).unwrap();
    assert!((pts[0] - c64(1.0, 2.0)).norm() < 1e-9 && (pts[1] - c64(1.0, -2.0)).norm() < 1e-9, "{pts:?}");
}

mod certificates {
    use super::*;
    use phmm::verification::{verify_certificate, DEFAULT_TOL};

    fn check(model: ModelRef<'_>, cert: &MatchCertificate) {
        let rep = verify_certificate(model, cert, DEFAULT_TOL).unwrap();
        assert!(rep.passed(), "{:?}: {:#?}", cert.kind, rep);
    }

    #[test]
    fn every_construction_verifies() {
        let sys = ladder_c2();
        let right2 = Generator::Right(GeneratorRight::jordan(c64(0.0, 0.0), 2, real_row(&[1.0, 0.0])).unwrap());
        let right3 = Generator::Right(GeneratorRight::jordan(c64(0.0, 0.0), 3, real_row(&[1.0, 0.0, 0.0])).unwrap());
        let left2 = Generator::Left(GeneratorLeft::jordan_transposed(c64(0.0, 0.0), 2, real_column(&[1.0, 0.0])).unwrap());
        let r = reduce_ph_finite(&sys, &right2).unwrap();
        check(ModelRef::Ph(&r.model), &r.certificate);
        let r = reduce_ph_finite(&sys, &left2).unwrap();
        check(ModelRef::Ph(&r.model), &r.certificate);
        for v in [MarkovVariant::Pi, MarkovVariant::PiTilde] {
            let r = reduce_ph_markov(&sys, &right3, v).unwrap();
            check(ModelRef::Ph(&r.model), &r.certificate);
        }
        let shifted = Generator::Right(GeneratorRight::jordan(c64(0.3, 0.0), 2, real_row(&[1.0, 0.0])).unwrap());
        for v in [MarkovVariant::Pi, MarkovVariant::PiBar] {
            let r = reduce_ph_markov(&sys, &shifted, v).unwrap();
            check(ModelRef::Ph(&r.model), &r.certificate);
        }
        for v in [MarkovVariant::Upsilon, MarkovVariant::UpsilonHat] {
            let r = reduce_ph_markov(&sys, &left2, v).unwrap();
            check(ModelRef::Ph(&r.model), &r.certificate);
        }
        let lti = sys.to_lti();
        let gl = GeneratorLeft::jordan_transposed(c64(0.0, 0.0), 3, real_column(&[1.0, 0.0, 0.0])).unwrap();
        for v in 1..=4 {
            let r = reduce_descriptor_markov(&lti, &gl, DescriptorVariant::from_index(v).unwrap(), &real_row(&[0.4, -0.3, 0.7])).unwrap();
            check(ModelRef::Descriptor(&r.model), &r.certificate);
        }
        let r = markov_companion_model(&lti, &[1.0, 2.0, 3.0], 0.5).unwrap();
        check(ModelRef::Lti(&r.model), &r.certificate);
        let t = real_column(&[1.0]);
        let r = reduce_ph_krylov(&sys, &[c64(0.5, 1.0), c64(0.5, -1.0), c64(2.0, 0.0)], &[t.clone(), t.clone(), t]).unwrap();
        check(ModelRef::Ph(&r.model), &r.certificate);
        let fam = ReducedFamilyRight::new(&lti, right2.as_right().unwrap()).unwrap();
        let r = fam.certified_member(&real_column(&[1.0, 2.0])).unwrap();
        check(ModelRef::Lti(&r.model), &r.certificate);
    }
}
