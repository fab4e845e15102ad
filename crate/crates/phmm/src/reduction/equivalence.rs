use crate::error::{Error, Result};
use crate::linalg::{least_squares, norm_fro, rank, Lu, Matrix};

/// Least-squares change of basis `T` with `X ≈ YT`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisEquivalence {
    pub t: Matrix,
    pub residual: f64,
    /// `residual ≤ 1e-8·‖X‖` and `T` invertible.
    pub equivalent: bool,
}

/// Tests whether two full-rank bases span the same subspace.
pub fn basis_equivalence(x: &Matrix, y: &Matrix) -> Result<BasisEquivalence> {
    if x.shape() != y.shape() {
        return Err(Error::DimensionMismatch(format!(
            "bases are {}x{} and {}x{}",
            x.nrows(),
            x.ncols(),
            y.nrows(),
            y.ncols()
        )));
    }
    let k = x.ncols();
    for m in [x, y] {
        let r = rank(m);
        if r < k {
            return Err(Error::RankDeficientBasis { rank: r, expected: k });
        }
    }
    let t = least_squares(y, x)?;
    let residual = norm_fro(&(x - y * &t));
    let equivalent = residual <= 1e-8 * norm_fro(x) && rank(&t) == k && Lu::new(&t).is_ok();
    Ok(BasisEquivalence { t, residual, equivalent })
}
