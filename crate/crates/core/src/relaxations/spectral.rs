use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::{RelaxationValue, Witness};
use crate::error::{Error, Result};
use crate::graph::{laplacian, InstancePair};

/// Smallest generalized eigenvalue of the pencil `(L(Gbar), L(Hbar))` over
/// vectors with `x' L(Hbar) x > 0`.
///
/// The kernel `K` of `L(Hbar)` is eliminated exactly: on the range `R` the
/// numerator is replaced by its Schur complement
/// `A_RR - A_RK A_KK^+ A_KR`, which accounts for the free choice of the
/// kernel component. When the demand graph is a single edge this is the
/// effective-resistance energy of the s-t network.
pub fn solve_spectral(pair: &InstancePair) -> Result<RelaxationValue> {
    let n = pair.n();
    let a = laplacian(&pair.g);
    let b = laplacian(&pair.h);

    let eb = SymmetricEigen::new(b.clone());
    let bmax = eb.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
    if bmax <= 1e-300 {
        return Err(Error::DegeneratePencil);
    }
    let cutoff = 1e-12 * bmax;
    let (range_idx, kernel_idx): (Vec<usize>, Vec<usize>) =
        (0..n).partition(|&i| eb.eigenvalues[i] > cutoff);
    let r = range_idx.len();
    let basis = |idx: &[usize]| {
        DMatrix::from_fn(n, idx.len(), |row, col| eb.eigenvectors[(row, idx[col])])
    };
    let ur = basis(&range_idx);
    let uk = basis(&kernel_idx);
    let lam = DVector::from_iterator(r, range_idx.iter().map(|&i| eb.eigenvalues[i]));

    let a_rr = ur.transpose() * &a * &ur;
    let a_kr = uk.transpose() * &a * &ur;
    let a_kk = uk.transpose() * &a * &uk;
    let amax = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let pinv_kk = pseudo_inverse(&a_kk, amax * n as f64);
    let schur = &a_rr - a_kr.transpose() * &pinv_kk * &a_kr;

    let inv_sqrt = lam.map(|l| 1.0 / l.sqrt());
    let m = DMatrix::from_fn(r, r, |i, j| {
        inv_sqrt[i] * 0.5 * (schur[(i, j)] + schur[(j, i)]) * inv_sqrt[j]
    });
    let em = SymmetricEigen::new(m);
    let (best, _) = em
        .eigenvalues
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
    let z = em.eigenvectors.column(best).into_owned();
    let y = z.component_mul(&inv_sqrt);
    let kernel_part = -(&pinv_kk * &a_kr * &y);
    let x = &ur * &y + &uk * kernel_part;

    let num = (x.transpose() * &a * &x)[0];
    let den = (x.transpose() * &b * &x)[0];
    let value = (num / den).max(0.0);
    let x = x / den.sqrt();
    Ok(RelaxationValue {
        value,
        witness: Witness::Spectral(x.iter().copied().collect()),
        rounds: 0,
        active_cuts: 0,
    })
}

/// Eigenvalues below `1e-12 * scale` count as zero.
fn pseudo_inverse(m: &DMatrix<f64>, scale: f64) -> DMatrix<f64> {
    let k = m.nrows();
    if k == 0 {
        return DMatrix::zeros(0, 0);
    }
    let e = SymmetricEigen::new(m.clone());
    let cutoff = 1e-12 * scale.max(1e-300);
    let mut out = DMatrix::zeros(k, k);
    for i in 0..k {
        let l = e.eigenvalues[i];
        if l > cutoff {
            let v = e.eigenvectors.column(i);
            out += (v * v.transpose()) / l;
        }
    }
    out
}

/// `x' L(Gbar) x / x' L(Hbar) x`, or `+inf` when the denominator vanishes.
pub fn spectral_ratio(pair: &InstancePair, x: &[f64]) -> f64 {
    let num = crate::graph::quadratic_energy(&pair.g, x);
    let den = crate::graph::quadratic_energy(&pair.h, x);
    if den > 0.0 {
        num / den
    } else {
        f64::INFINITY
    }
}
