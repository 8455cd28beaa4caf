//! Small dense helpers: SVD nullspace, proportionality fits.

use nalgebra::DVector;

use crate::graded::{CMat, C64, ZERO};

/// Relative singular-value threshold declaring a null direction.
pub const NULL_THRESHOLD: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct Nullspace {
    pub basis: Vec<DVector<C64>>,
    pub singular_values: Vec<f64>,
}

/// Null directions of `m`: right singular vectors with `σ < rel·σ_max`.
pub fn nullspace(m: &CMat, rel: f64) -> Nullspace {
    let n = m.ncols();
    // thin SVD drops directions when rows < cols
    let padded = if m.nrows() < n {
        let mut p = CMat::zeros(n, n);
        p.rows_mut(0, m.nrows()).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("v_t requested");
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let basis = sv
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= rel * smax || smax == 0.0)
        .map(|(k, _)| vt.row(k).transpose().map(|z| z.conj()))
        .collect();
    let mut sorted = sv;
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    Nullspace { basis, singular_values: sorted }
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn vec_max_abs(v: &[C64]) -> f64 {
    v.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Least-squares scalar `c` with `a ≈ c·b`, and `max|a - c·b|`.
pub fn fit_scalar(a: &CMat, b: &CMat) -> (C64, f64) {
    let num: C64 = b.iter().zip(a.iter()).map(|(x, y)| x.conj() * y).sum();
    let den: f64 = b.iter().map(|x| x.norm_sqr()).sum();
    if den == 0.0 {
        return (ZERO, max_abs(a));
    }
    let c = num / den;
    (c, max_abs_diff(a, &(b * c)))
}

/// Component of `v` orthogonal to `u`, as a max-abs residual of `v ∈ C·u`.
pub fn eigen_residual(v: &[C64], u: &[C64]) -> (C64, f64) {
    let den: f64 = u.iter().map(|x| x.norm_sqr()).sum();
    let c: C64 = if den == 0.0 { ZERO } else { u.iter().zip(v).map(|(x, y)| x.conj() * y).sum::<C64>() / den };
    let r = v.iter().zip(u).fold(0.0_f64, |acc, (y, x)| acc.max((y - c * x).norm()));
    (c, r)
}
