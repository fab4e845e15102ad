use super::certificate::{CertificateKind, Certified, MatchCertificate};
use crate::error::{Error, Result};
use crate::linalg::{closest_pair, fmt_c, identity, inverse, rank, spectrum, Lu, Matrix};
use crate::moments::{moments_finite, SylvesterSolution};
use crate::systems::{Generator, GeneratorLeft, GeneratorRight, LtiSystem, PortHamiltonianSystem};

fn reject_clash(a: &Matrix, b: &Matrix) -> Result<()> {
    let la = spectrum(a)?;
    let lb = spectrum(b)?;
    if let Some((x, y, d)) = closest_pair(&la, &lb) {
        if d <= 1e-8 * (1.0 + x.norm().max(y.norm())) {
            return Err(Error::SpectrumClash(format!(
                "reduced eigenvalue {} meets interpolation point {}",
                fmt_c(x),
                fmt_c(y)
            )));
        }
    }
    Ok(())
}

/// `(S − GL, G, CΠ)` for every admissible gain `G`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedFamilyRight {
    generator: GeneratorRight,
    cr: Matrix,
    solution: SylvesterSolution,
}

impl ReducedFamilyRight {
    pub fn new(sys: &LtiSystem, gen: &GeneratorRight) -> Result<Self> {
        let (mv, solution) = moments_finite(sys, &Generator::Right(gen.clone()))?;
        Ok(ReducedFamilyRight { generator: gen.clone(), cr: mv.stacked(), solution })
    }

    pub fn generator(&self) -> &GeneratorRight {
        &self.generator
    }
    pub fn cr(&self) -> &Matrix {
        &self.cr
    }
    pub fn solution(&self) -> &SylvesterSolution {
        &self.solution
    }

    pub fn member(&self, g: &Matrix) -> Result<LtiSystem> {
        let (s, l) = (self.generator.s(), self.generator.l());
        if g.shape() != (s.nrows(), l.nrows()) {
            return Err(Error::DimensionMismatch(format!(
                "gain must be {}x{}",
                s.nrows(),
                l.nrows()
            )));
        }
        let f = s - g * l;
        reject_clash(&f, s)?;
        LtiSystem::new(f, g.clone(), self.cr.clone())
    }

    /// Member together with the witness `P = I`.
    pub fn certified_member(&self, g: &Matrix) -> Result<Certified<LtiSystem>> {
        let model = self.member(g)?;
        let nu = self.generator.order();
        Ok(Certified {
            model,
            certificate: MatchCertificate {
                kind: CertificateKind::FiniteRight,
                p: identity(nu),
                generator: Generator::Right(self.generator.clone()),
                moments: self.cr.clone(),
            },
        })
    }
}

/// `(𝒬 − ℛH, ΥB, H)` for every admissible gain `H`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedFamilyLeft {
    generator: GeneratorLeft,
    br: Matrix,
    solution: SylvesterSolution,
}

impl ReducedFamilyLeft {
    pub fn new(sys: &LtiSystem, gen: &GeneratorLeft) -> Result<Self> {
        let (mv, solution) = moments_finite(sys, &Generator::Left(gen.clone()))?;
        Ok(ReducedFamilyLeft { generator: gen.clone(), br: mv.stacked(), solution })
    }

    pub fn generator(&self) -> &GeneratorLeft {
        &self.generator
    }
    pub fn br(&self) -> &Matrix {
        &self.br
    }
    pub fn solution(&self) -> &SylvesterSolution {
        &self.solution
    }

    pub fn member(&self, h: &Matrix) -> Result<LtiSystem> {
        let (q, r) = (self.generator.q(), self.generator.r());
        if h.shape() != (r.ncols(), q.nrows()) {
            return Err(Error::DimensionMismatch(format!(
                "gain must be {}x{}",
                r.ncols(),
                q.nrows()
            )));
        }
        let f = q - r * h;
        reject_clash(&f, q)?;
        LtiSystem::new(f, self.br.clone(), h.clone())
    }

    pub fn certified_member(&self, h: &Matrix) -> Result<Certified<LtiSystem>> {
        let model = self.member(h)?;
        let nu = self.generator.order();
        Ok(Certified {
            model,
            certificate: MatchCertificate {
                kind: CertificateKind::FiniteLeft,
                p: identity(nu),
                generator: Generator::Left(self.generator.clone()),
                moments: self.br.clone(),
            },
        })
    }
}

fn gram_inverse(gram: &Matrix) -> Result<Matrix> {
    if rank(gram) < gram.nrows() || Lu::new(gram).is_err() {
        return Err(Error::SingularGram);
    }
    inverse(gram)
}

/// The unique gain for which the family member admits a port-Hamiltonian
/// realization: `G = (Π*QΠ)⁻¹Π*QB` or `H = B*Υ*(ΥQ⁻¹Υ*)⁻¹`.
pub fn ph_gain(sys: &PortHamiltonianSystem, gen: &Generator) -> Result<Matrix> {
    let (_, sol) = moments_finite(&sys.to_lti(), gen)?;
    let q = sys.q();
    match gen {
        Generator::Right(_) => {
            let pi = &sol.matrix;
            let gram = pi.adjoint() * q * pi;
            Ok(gram_inverse(&gram)? * pi.adjoint() * q * sys.b())
        }
        Generator::Left(_) => {
            let ups = &sol.matrix;
            let gram = ups * inverse(q)? * ups.adjoint();
            Ok(sys.b().adjoint() * ups.adjoint() * gram_inverse(&gram)?)
        }
    }
}

pub(crate) fn gram_inverse_checked(gram: &Matrix) -> Result<Matrix> {
    gram_inverse(gram)
}

pub(crate) fn reject_spectrum_clash(a: &Matrix, b: &Matrix) -> Result<()> {
    reject_clash(a, b)
}
