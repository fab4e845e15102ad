use crate::error::Result;
use crate::linalg::{c64, identity, is_real, norm_fro, spectrum, Lu, Matrix, C64};
use crate::systems::LtiSystem;
use std::cmp::Ordering;

/// Eigenvector of `a` for the eigenvalue `lambda` by inverse iteration with a
/// slightly perturbed shift.
fn inverse_iteration(a: &Matrix, lambda: C64) -> Option<Matrix> {
    let n = a.nrows();
    let scale = norm_fro(a).max(1.0);
    let shift = lambda + c64(1e-9 * scale, 1e-9 * scale);
    let lu = Lu::new(&(a - identity(n) * shift)).ok()?;
    let mut v = Matrix::from_element(n, 1, c64(1.0, 0.0));
    for k in 0..n {
        v[(k, 0)] += c64(0.1 * k as f64, 0.0);
    }
    for _ in 0..4 {
        v = lu.solve(&v).ok()?;
        let nv = norm_fro(&v);
        if !nv.is_finite() || nv == 0.0 {
            return None;
        }
        v /= c64(nv, 0.0);
    }
    Some(v)
}

/// Residue magnitude `‖Cv‖·‖wᵀB‖/|wᵀv|` of a simple pole. `None` when the pole
/// is (numerically) defective.
fn residue(sys: &LtiSystem, lambda: C64) -> Option<f64> {
    let v = inverse_iteration(sys.a(), lambda)?;
    let w = inverse_iteration(&sys.a().transpose(), lambda)?;
    let wv = (w.transpose() * &v)[(0, 0)].norm();
    if wv <= 1e-8 {
        return None;
    }
    Some(norm_fro(&(sys.c() * &v)) * norm_fro(&(w.transpose() * sys.b())) / wv)
}

fn tol_cmp(a: f64, b: f64) -> Ordering {
    if (a - b).abs() <= 1e-8 * a.abs().max(b.abs()).max(1e-300) {
        Ordering::Equal
    } else {
        a.total_cmp(&b)
    }
}

/// Negated poles with the largest residues, keeping conjugate pairs together.
///
/// Candidates are ordered by residue magnitude (descending), then `|Im|`
/// (ascending), then pole magnitude (ascending), then `Im` (descending). A
/// pair that would overflow `nu` is skipped in favour of the next real pole.
/// A defective state matrix falls back to ordering by `|Re λ|` ascending.
pub fn mirror_points(sys: &LtiSystem, nu: usize) -> Result<Vec<C64>> {
    let poles = spectrum(sys.a())?;
    let distinct = poles.iter().enumerate().all(|(i, &p)| {
        poles.iter().skip(i + 1).all(|&q| (p - q).norm() > 1e-8 * (1.0 + p.norm()))
    });
    let residues: Option<Vec<f64>> = if distinct {
        poles.iter().map(|&p| residue(sys, p)).collect()
    } else {
        None
    };
    let mut order: Vec<usize> = (0..poles.len()).collect();
    match &residues {
        Some(res) => order.sort_by(|&i, &j| {
            tol_cmp(res[j], res[i])
                .then(tol_cmp(poles[i].im.abs(), poles[j].im.abs()))
                .then(tol_cmp(poles[i].norm(), poles[j].norm()))
                .then(poles[j].im.total_cmp(&poles[i].im))
        }),
        None => {
            log::warn!("state matrix is defective; ordering mirror points by |Re λ|");
            order.sort_by(|&i, &j| {
                tol_cmp(poles[i].re.abs(), poles[j].re.abs()).then(poles[j].im.total_cmp(&poles[i].im))
            })
        }
    }

    let real_input = is_real(sys.a()) && is_real(sys.b()) && is_real(sys.c());
    let mut taken = vec![false; poles.len()];
    let mut out = Vec::with_capacity(nu);
    for &i in &order {
        if out.len() >= nu {
            break;
        }
        if taken[i] {
            continue;
        }
        let p = poles[i];
        if p.im == 0.0 || !real_input {
            taken[i] = true;
            out.push(-p);
            continue;
        }
        if out.len() + 2 > nu {
            continue;
        }
        let partner = (0..poles.len())
            .filter(|&k| !taken[k] && k != i)
            .min_by(|&a, &b| (poles[a] - p.conj()).norm().total_cmp(&(poles[b] - p.conj()).norm()));
        taken[i] = true;
        let (hi, lo) = match partner {
            Some(k) => {
                taken[k] = true;
                if p.im > 0.0 { (p, poles[k]) } else { (poles[k], p) }
            }
            None => (p, p.conj()),
        };
        // mirror of the upper pole has negative imaginary part; list Im descending
        out.push(-lo);
        out.push(-hi);
    }
    Ok(out)
}
