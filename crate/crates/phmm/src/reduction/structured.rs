use super::certificate::{CertificateKind, Certified, MatchCertificate};
use super::family::{gram_inverse_checked, reject_spectrum_clash};
use super::{real_column_basis, similarity};
use crate::error::{Error, Result};
use crate::linalg::{
    block_diag, c64, fmt_c, identity, inverse, norm_fro, solve_sylvester, spectrum, Matrix,
    SylvesterForm,
};
use crate::moments::{moments_finite, moments_markov, split_tilde, MomentKind};
use crate::systems::{Generator, GeneratorLeft, GeneratorRight, PortHamiltonianSystem};
use serde::{Deserialize, Serialize};

/// Which Sylvester solution drives a Markov-parameter reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarkovVariant {
    Pi,
    PiBar,
    PiTilde,
    Upsilon,
    UpsilonHat,
}

impl MarkovVariant {
    fn moment_kind(self) -> MomentKind {
        match self {
            MarkovVariant::Pi => MomentKind::MarkovPi,
            MarkovVariant::PiBar => MomentKind::MarkovPiBar,
            MarkovVariant::PiTilde => MomentKind::MarkovPiTilde,
            MarkovVariant::Upsilon => MomentKind::MarkovUpsilon,
            MarkovVariant::UpsilonHat => MomentKind::MarkovUpsilonHat,
        }
    }
}

/// A congruence of definite data is definite, so losing a flag here means
/// the projection basis is numerically rank deficient.
pub(crate) fn carry_flags(orig: &PortHamiltonianSystem, red: PortHamiltonianSystem) -> Result<PortHamiltonianSystem> {
    red.with_flags(orig.r_psd(), orig.q_pd()).map_err(|e| match e {
        Error::Invariant(_) => Error::SingularGram,
        other => other,
    })
}

/// `J̃ = ΠᵀQJQΠ`, `R̃ = ΠᵀQRQΠ`, `Q̃ = (ΠᵀQΠ)⁻¹`, `B̃ = ΠᵀQB` for a real basis.
fn project_right(sys: &PortHamiltonianSystem, pi: &Matrix) -> Result<(PortHamiltonianSystem, Matrix)> {
    let qp = sys.q() * pi;
    let gram = pi.transpose() * &qp;
    let q_red = gram_inverse_checked(&gram)?;
    let model = PortHamiltonianSystem::new_symmetrized(
        qp.transpose() * sys.j() * &qp,
        qp.transpose() * sys.r() * &qp,
        q_red,
        qp.transpose() * sys.b(),
    )?;
    Ok((carry_flags(sys, model)?, gram))
}

/// `J̃ = ΥJΥᵀ`, `R̃ = ΥRΥᵀ`, `Q̃ = (ΥQ⁻¹Υᵀ)⁻¹`, `B̃ = ΥB` for a real basis.
fn project_left(sys: &PortHamiltonianSystem, ups: &Matrix, b_red: Matrix) -> Result<PortHamiltonianSystem> {
    let gram = ups * inverse(sys.q())? * ups.transpose();
    let q_red = gram_inverse_checked(&gram)?;
    let model = PortHamiltonianSystem::new_symmetrized(
        ups * sys.j() * ups.transpose(),
        ups * sys.r() * ups.transpose(),
        q_red,
        b_red,
    )?;
    carry_flags(sys, model)
}

/// Generator seen from the real basis `Π_r = ΠT⁻¹`.
fn transform_right(gen: &GeneratorRight, t: &Matrix) -> Result<GeneratorRight> {
    if *t == identity(t.nrows()) {
        return Ok(gen.clone());
    }
    GeneratorRight::new(similarity(t, gen.s())?, gen.l() * inverse(t)?)
}

/// Generator seen from the real basis `Υ_r = T⁻¹Υ`.
fn transform_left(gen: &GeneratorLeft, t: &Matrix) -> Result<GeneratorLeft> {
    if *t == identity(t.nrows()) {
        return Ok(gen.clone());
    }
    let tinv = inverse(t)?;
    GeneratorLeft::new(&tinv * gen.q() * t, tinv * gen.r())
}

/// Real basis of the row space: `Υ = T·Υ_r`.
fn real_row_basis(ups: &Matrix) -> Result<(Matrix, Matrix)> {
    let (xr, t) = real_column_basis(&ups.transpose())?;
    Ok((xr.transpose(), t.transpose()))
}

fn reject_product_clash(a: &Matrix, b: &Matrix) -> Result<()> {
    for x in spectrum(a)? {
        for y in spectrum(b)? {
            if (x * y - 1.0).norm() <= 1e-8 {
                return Err(Error::SpectrumProductClash(format!(
                    "{} * {} = 1 between reduced model and generator",
                    fmt_c(x),
                    fmt_c(y)
                )));
            }
        }
    }
    Ok(())
}

/// Structure-preserving reduction matching the moments at the generator's
/// spectrum. The side follows the generator.
pub fn reduce_ph_finite(sys: &PortHamiltonianSystem, gen: &Generator) -> Result<Certified<PortHamiltonianSystem>> {
    let lti = sys.to_lti();
    let (_, sol) = moments_finite(&lti, gen)?;
    match gen {
        Generator::Right(g) => {
            let (pi, t) = real_column_basis(&sol.matrix)?;
            let eff = transform_right(g, &t)?;
            let (model, gram) = project_right(sys, &pi)?;
            reject_spectrum_clash(&model.a(), eff.s())?;
            Ok(Certified {
                certificate: MatchCertificate {
                    kind: CertificateKind::FiniteRight,
                    p: gram,
                    moments: lti.c() * &pi,
                    generator: Generator::Right(eff),
                },
                model,
            })
        }
        Generator::Left(g) => {
            let (ups, t) = real_row_basis(&sol.matrix)?;
            let eff = transform_left(g, &t)?;
            let model = project_left(sys, &ups, &ups * sys.b())?;
            reject_spectrum_clash(&model.a(), eff.q())?;
            Ok(Certified {
                certificate: MatchCertificate {
                    kind: CertificateKind::FiniteLeft,
                    p: identity(ups.nrows()),
                    moments: &ups * sys.b(),
                    generator: Generator::Left(eff),
                },
                model,
            })
        }
    }
}

/// Structure-preserving reduction matching Markov-type moments.
pub fn reduce_ph_markov(
    sys: &PortHamiltonianSystem,
    gen: &Generator,
    variant: MarkovVariant,
) -> Result<Certified<PortHamiltonianSystem>> {
    let lti = sys.to_lti();
    let (_, sol) = moments_markov(&lti, gen, variant.moment_kind())?;
    match variant {
        MarkovVariant::Pi | MarkovVariant::PiBar | MarkovVariant::PiTilde => {
            let g = gen.as_right()?;
            let (pi, t) = real_column_basis(&sol.matrix)?;
            let (model, gram) = project_right(sys, &pi)?;
            let (kind, eff, s_check) = match variant {
                MarkovVariant::Pi => {
                    let eff = transform_right(g, &t)?;
                    let s = eff.s().clone();
                    (CertificateKind::MarkovPi, eff, s)
                }
                MarkovVariant::PiBar => {
                    let eff = transform_right(g, &t)?;
                    let s = eff.s().clone();
                    (CertificateKind::MarkovPiBar, eff, s)
                }
                _ => {
                    let full_t = block_diag(&[&identity(1), &t]);
                    let eff = transform_right(g, &full_t)?;
                    let s2 = split_tilde(&eff)?.s2;
                    (CertificateKind::MarkovPiTilde, eff, s2)
                }
            };
            reject_product_clash(&model.a(), &s_check)?;
            Ok(Certified {
                certificate: MatchCertificate {
                    kind,
                    p: gram,
                    moments: lti.c() * &pi,
                    generator: Generator::Right(eff),
                },
                model,
            })
        }
        MarkovVariant::Upsilon => {
            let g = gen.as_left()?;
            let (ups, t) = real_row_basis(&sol.matrix)?;
            let eff = transform_left(g, &t)?;
            let model = project_left(sys, &ups, &ups * sys.b())?;
            reject_product_clash(&model.a(), eff.q())?;
            Ok(Certified {
                certificate: MatchCertificate {
                    kind: CertificateKind::MarkovLeft,
                    p: identity(ups.nrows()),
                    moments: &ups * sys.b(),
                    generator: Generator::Left(eff),
                },
                model,
            })
        }
        MarkovVariant::UpsilonHat => {
            let g = gen.as_left()?;
            let (ups_hat, t) = real_row_basis(&sol.matrix)?;
            let eff = transform_left(g, &t)?;
            upsilon_hat_reduction(sys, &ups_hat, eff)
        }
    }
}

/// Port matrix `B̃ = αΥ̂B` and witness `P̂ = αP₁`, where `P₁` solves
/// `P₁ = 𝒬P₁F + ℛH₁` with `H₁ = (Υ̂B)ᵀQ̃`, and `α²` is fixed by the second
/// matching identity `𝒬(𝒬P̂ + ℛH)G = 𝒬(𝒬Υ̂ + ℛC)B`.
fn upsilon_hat_reduction(
    sys: &PortHamiltonianSystem,
    ups_hat: &Matrix,
    eff: GeneratorLeft,
) -> Result<Certified<PortHamiltonianSystem>> {
    let (qc, rc) = (eff.q(), eff.r());
    let base_b = ups_hat * sys.b();
    let unit = project_left(sys, ups_hat, base_b.clone())?;
    let f = unit.a();
    let h1 = unit.c();
    let p1 = solve_sylvester(SylvesterForm::MarkovLeft, &f, qc, &(rc * &h1))?;
    let drive = qc * ups_hat + rc * sys.c();
    let target = qc * &drive * sys.b();
    let lhs = qc * (qc * &p1 + rc * &h1) * &base_b;
    let lhs_norm = norm_fro(&lhs);
    let target_norm = norm_fro(&target);
    let alpha_sq = if lhs_norm == 0.0 && target_norm == 0.0 {
        1.0
    } else if lhs_norm == 0.0 {
        return Err(Error::MatchingInfeasible("reduced drive vanishes".into()));
    } else {
        lhs.iter().zip(target.iter()).map(|(a, b)| (a.conj() * b).re).sum::<f64>() / (lhs_norm * lhs_norm)
    };
    let defect = norm_fro(&(&lhs * c64(alpha_sq, 0.0) - &target));
    if alpha_sq.is_nan() || alpha_sq <= 0.0 || defect > 1e-8 * target_norm.max(1e-300) {
        return Err(Error::MatchingInfeasible(format!(
            "no positive scaling solves the second identity (alpha^2 = {alpha_sq:e}, defect {defect:e})"
        )));
    }
    let alpha = alpha_sq.sqrt();
    let model = project_left(sys, ups_hat, &base_b * c64(alpha, 0.0))?;
    reject_product_clash(&model.a(), qc)?;
    Ok(Certified {
        certificate: MatchCertificate {
            kind: CertificateKind::MarkovLeftHat,
            p: p1 * c64(alpha, 0.0),
            moments: drive * sys.b(),
            generator: Generator::Left(eff),
        },
        model,
    })
}
