use crate::linalg::Matrix;
use crate::systems::{DescriptorModel, Generator, LtiSystem, PortHamiltonianSystem};
use serde::{Deserialize, Serialize};

/// Which set of matching identities a certificate witnesses. Below, `(E, F,
/// G, H)` is the reduced realization (`E = I` for state-space models) and `φ`
/// the moment matrix stored with the certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    /// `HP = φ`, `FP + GL = PS`
    FiniteRight,
    /// `𝒬P = PF + ℛH`, `PG = φ`
    FiniteLeft,
    /// `φS = HPS`, `FPS + GL = P`
    MarkovPi,
    /// `φ = HP`, `FPS + GLS = P`
    MarkovPiBar,
    /// `φ = HP`, `FPS₂ + G(l₁S₁ + L₂S₂) = P`
    MarkovPiTilde,
    /// `𝒬PF + ℛH = PE`, `𝒬PG = 𝒬φ`
    MarkovLeft,
    /// `𝒬PF + ℛH = PE`, `𝒬(𝒬P + ℛH)G = 𝒬φ`
    MarkovLeftHat,
    /// `𝒬PF + ℛH = PE`, `PG = 𝒬φ` (models with one differentiated port)
    MarkovLeftDerivative,
}

impl CertificateKind {
    pub fn is_right(self) -> bool {
        matches!(
            self,
            CertificateKind::FiniteRight
                | CertificateKind::MarkovPi
                | CertificateKind::MarkovPiBar
                | CertificateKind::MarkovPiTilde
        )
    }
}

/// An invertible `P` together with the interpolation data it refers to.
///
/// `generator` is expressed in the coordinates of the reduced model, so
/// checking the identities needs nothing beyond the reduced realization.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchCertificate {
    pub kind: CertificateKind,
    pub p: Matrix,
    pub generator: Generator,
    pub moments: Matrix,
}

/// Borrowed view of any reduced realization.
#[derive(Debug, Clone, Copy)]
pub enum ModelRef<'a> {
    Ph(&'a PortHamiltonianSystem),
    Lti(&'a LtiSystem),
    Descriptor(&'a DescriptorModel),
}

/// Owned reduced realization.
#[derive(Debug, Clone, PartialEq)]
pub enum ReducedModel {
    Ph(PortHamiltonianSystem),
    Lti(LtiSystem),
    Descriptor(DescriptorModel),
}

impl ReducedModel {
    pub fn as_ref(&self) -> ModelRef<'_> {
        match self {
            ReducedModel::Ph(m) => ModelRef::Ph(m),
            ReducedModel::Lti(m) => ModelRef::Lti(m),
            ReducedModel::Descriptor(m) => ModelRef::Descriptor(m),
        }
    }
}

/// The `(E, F, G, H)` data and the number of differentiated ports.
pub(crate) struct Efgh {
    pub e: Option<Matrix>,
    pub f: Matrix,
    pub g: Matrix,
    pub h: Matrix,
    pub derivatives: usize,
}

impl ModelRef<'_> {
    pub(crate) fn efgh(&self) -> Efgh {
        match self {
            ModelRef::Ph(m) => Efgh { e: None, f: m.a(), g: m.b().clone(), h: m.c(), derivatives: 0 },
            ModelRef::Lti(m) => {
                Efgh { e: None, f: m.a().clone(), g: m.b().clone(), h: m.c().clone(), derivatives: 0 }
            }
            ModelRef::Descriptor(m) => Efgh {
                e: Some(m.e().clone()),
                f: m.f().clone(),
                g: m.g().clone(),
                h: m.h().clone(),
                derivatives: m.input_derivative() as usize + m.output_derivative() as usize,
            },
        }
    }
}

/// A reduced model with the certificate of its matching property.
#[derive(Debug, Clone, PartialEq)]
pub struct Certified<M> {
    pub model: M,
    pub certificate: MatchCertificate,
}
