use super::certificate::{CertificateKind, Certified, MatchCertificate};
use super::family::reject_spectrum_clash;
use crate::error::{Error, Result};
use crate::linalg::{identity, jordan_block, solve_sylvester, Lu, Matrix, SylvesterForm, C64};
use crate::systems::{DescriptorModel, Generator, GeneratorLeft, LtiSystem};
use serde::{Deserialize, Serialize};

/// The four descriptor families matching Markov-type moments from the left.
/// All share `E = 𝒬 − ℛH` and `F = I`; they differ in `G` and in which port
/// carries a derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DescriptorVariant {
    /// `G = −ΥB`
    Upsilon,
    /// `G = −𝒬ΥB`, differentiated output
    UpsilonOutputDerivative,
    /// `G = −(𝒬Υ̂ + ℛC)B`
    UpsilonHat,
    /// `G = −𝒬(𝒬Υ̂ + ℛC)B`, differentiated input
    UpsilonHatInputDerivative,
}

impl DescriptorVariant {
    /// Numbered as 1..=4 in the order listed above.
    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            1 => Ok(Self::Upsilon),
            2 => Ok(Self::UpsilonOutputDerivative),
            3 => Ok(Self::UpsilonHat),
            4 => Ok(Self::UpsilonHatInputDerivative),
            _ => Err(Error::InvalidArgument(format!("descriptor variant {i} is not in 1..=4"))),
        }
    }

    pub fn index(self) -> u8 {
        self as u8 + 1
    }
}

/// Descriptor model `(𝒬 − ℛH)Ξ̇ = Ξ + Gu` for a free gain `H`, with certificate `P = −I`.
pub fn reduce_descriptor_markov(
    sys: &LtiSystem,
    gen: &GeneratorLeft,
    variant: DescriptorVariant,
    h: &Matrix,
) -> Result<Certified<DescriptorModel>> {
    let (qc, rc) = (gen.q(), gen.r());
    let nu = gen.order();
    if rc.ncols() != sys.c().nrows() {
        return Err(Error::DimensionMismatch(format!(
            "R has {} columns, plant has {} outputs",
            rc.ncols(),
            sys.c().nrows()
        )));
    }
    if h.shape() != (rc.ncols(), nu) {
        return Err(Error::DimensionMismatch(format!("gain must be {}x{}", rc.ncols(), nu)));
    }
    let e = qc - rc * h;
    if Lu::new(&e).is_err() {
        return Err(Error::SingularE);
    }
    reject_spectrum_clash(&e, qc)?;

    let rc_c = rc * sys.c();
    let drive = match variant {
        DescriptorVariant::Upsilon | DescriptorVariant::UpsilonOutputDerivative => {
            solve_sylvester(SylvesterForm::MarkovLeft, sys.a(), qc, &rc_c)?
        }
        DescriptorVariant::UpsilonHat | DescriptorVariant::UpsilonHatInputDerivative => {
            let ups_hat = solve_sylvester(SylvesterForm::MarkovLeftShifted, sys.a(), qc, &rc_c)?;
            qc * ups_hat + rc_c
        }
    };
    let phi = drive * sys.b();
    let (g, kind, input_d, output_d) = match variant {
        DescriptorVariant::Upsilon | DescriptorVariant::UpsilonHat => {
            (-phi.clone(), CertificateKind::MarkovLeft, false, false)
        }
        DescriptorVariant::UpsilonOutputDerivative => {
            (-(qc * &phi), CertificateKind::MarkovLeftDerivative, false, true)
        }
        DescriptorVariant::UpsilonHatInputDerivative => {
            (-(qc * &phi), CertificateKind::MarkovLeftDerivative, true, false)
        }
    };
    let model = DescriptorModel::new(e, identity(nu), g, h.clone(), input_d, output_d)?;
    Ok(Certified {
        model,
        certificate: MatchCertificate {
            kind,
            p: -identity(nu),
            generator: Generator::Left(gen.clone()),
            moments: phi,
        },
    })
}

/// Companion-form member of the left Markov family for a SISO plant:
/// `F` has ones on the superdiagonal and last row `−coeffs`, `H = e₁ᵀ`, and
/// `G` repeats the first `ν − 1` entries of `ΥB` followed by `g_last`.
/// The generator is the lower shift with `ℛ = e₁`, and `P = I`.
pub fn markov_companion_model(sys: &LtiSystem, coeffs: &[f64], g_last: f64) -> Result<Certified<LtiSystem>> {
    if sys.b().ncols() != 1 || sys.c().nrows() != 1 {
        return Err(Error::DimensionMismatch("companion family needs a SISO plant".into()));
    }
    let nu = coeffs.len();
    if nu == 0 {
        return Err(Error::InvalidArgument("at least one coefficient is required".into()));
    }
    let mut rc = Matrix::zeros(nu, 1);
    rc[(0, 0)] = C64::new(1.0, 0.0);
    let gen = GeneratorLeft::new(jordan_block(C64::new(0.0, 0.0), nu).transpose(), rc.clone())?;
    let ups = solve_sylvester(SylvesterForm::MarkovLeft, sys.a(), gen.q(), &(&rc * sys.c()))?;
    let phi = &ups * sys.b();

    let mut f = Matrix::zeros(nu, nu);
    for i in 0..nu - 1 {
        f[(i, i + 1)] = C64::new(1.0, 0.0);
    }
    for (j, &a) in coeffs.iter().enumerate() {
        f[(nu - 1, j)] = C64::new(-a, 0.0);
    }
    let mut g = Matrix::zeros(nu, 1);
    for i in 0..nu - 1 {
        g[(i, 0)] = phi[(i, 0)];
    }
    g[(nu - 1, 0)] = C64::new(g_last, 0.0);
    let h = rc.transpose();
    let model = LtiSystem::new(f, g, h)?;
    Ok(Certified {
        model,
        certificate: MatchCertificate {
            kind: CertificateKind::MarkovLeft,
            p: identity(nu),
            generator: Generator::Left(gen),
            moments: phi,
        },
    })
}
