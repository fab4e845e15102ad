//! Reduced-model families, structure-preserving reductions and their
//! matching certificates.

mod certificate;
mod descriptor;
mod equivalence;
mod family;
mod krylov;
mod mirror;
mod structured;

pub use certificate::{CertificateKind, Certified, MatchCertificate, ModelRef, ReducedModel};
pub use descriptor::{markov_companion_model, reduce_descriptor_markov, DescriptorVariant};
pub use equivalence::{basis_equivalence, BasisEquivalence};
pub use family::{ph_gain, ReducedFamilyLeft, ReducedFamilyRight};
pub use krylov::{
    interpolation_generator, krylov_basis, markov_krylov_basis, petrov_galerkin, reduce_ph_krylov,
    KrylovBasis,
};
pub use mirror::mirror_points;
pub use structured::{reduce_ph_finite, reduce_ph_markov, MarkovVariant};

use crate::error::{Error, Result};
use crate::linalg::{identity, inverse, max_imag, norm_fro, realify, to_complex, Matrix, EPS_REAL};

/// Real basis of the column space of `x`: returns `(xr, t)` with `x = xr·t`.
///
/// Real input is returned unchanged with `t = I`; otherwise the column space
/// of `[Re x, Im x]` must have dimension equal to the column count of `x`.
pub(crate) fn real_column_basis(x: &Matrix) -> Result<(Matrix, Matrix)> {
    let k = x.ncols();
    if max_imag(x) <= EPS_REAL * norm_fro(x) {
        return Ok((realify(x)?, identity(k)));
    }
    let n = x.nrows();
    let mut stacked = nalgebra::DMatrix::<f64>::zeros(n, 2 * k);
    for i in 0..n {
        for j in 0..k {
            stacked[(i, j)] = x[(i, j)].re;
            stacked[(i, k + j)] = x[(i, j)].im;
        }
    }
    let svd = stacked.svd(true, false);
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let smax = svd.singular_values[order[0]];
    if order.len() > k && svd.singular_values[order[k]] > 1e-10 * smax {
        return Err(Error::NotReal(svd.singular_values[order[k]] / smax));
    }
    let u = svd.u.expect("requested left vectors");
    let mut basis = nalgebra::DMatrix::<f64>::zeros(n, k);
    for (c, &idx) in order.iter().take(k).enumerate() {
        basis.set_column(c, &u.column(idx));
    }
    let xr = to_complex(&basis);
    let t = xr.transpose() * x;
    Ok((xr, t))
}

/// `T·M·T⁻¹` and `N·T⁻¹` for a change of basis `T`.
pub(crate) fn similarity(t: &Matrix, m: &Matrix) -> Result<Matrix> {
    Ok(t * m * inverse(t)?)
}
