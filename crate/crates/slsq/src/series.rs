//! Matrix-valued series in `z⁻¹` truncated at a fixed order.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::graded::{GradedSpace, SuperMatrix, C64};

/// `Σ_{r=0}^{N} c_r z^{-r}`, constant term first.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedCurrent {
    space: GradedSpace,
    coeffs: Vec<SuperMatrix>,
}

impl TruncatedCurrent {
    pub fn new(coeffs: Vec<SuperMatrix>) -> Result<Self> {
        let first = coeffs.first().ok_or_else(|| Error::Invalid("a current needs at least one coefficient".into()))?;
        let space = first.space_out().clone();
        if coeffs.iter().any(|c| c.space_out() != &space || c.space_in() != &space) {
            return Err(Error::DimensionMismatch("current coefficients act on different spaces".into()));
        }
        Ok(Self { space, coeffs })
    }

    pub fn zero(space: &GradedSpace, order: usize) -> Self {
        Self { space: space.clone(), coeffs: vec![SuperMatrix::zeros(space); order + 1] }
    }

    /// The constant series `m`.
    pub fn constant(m: &SuperMatrix, order: usize) -> Self {
        let mut s = Self::zero(m.space_out(), order);
        s.coeffs[0] = m.clone();
        s
    }

    pub fn one(space: &GradedSpace, order: usize) -> Self {
        Self::constant(&SuperMatrix::identity(space), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn coeffs(&self) -> &[SuperMatrix] {
        &self.coeffs
    }

    /// Coefficient of `z^{-r}`.
    pub fn coeff(&self, r: usize) -> &SuperMatrix {
        &self.coeffs[r]
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|m| m.scale(s))
    }

    pub fn map(&self, f: impl Fn(&SuperMatrix) -> SuperMatrix) -> Self {
        Self { space: self.space.clone(), coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// `m·A(z)`
    pub fn left_mul(&self, m: &SuperMatrix) -> Self {
        self.map(|c| m * c)
    }

    /// `A(z)·m`
    pub fn right_mul(&self, m: &SuperMatrix) -> Self {
        self.map(|c| c * m)
    }

    /// `z⁻¹·A(z)`, dropping the top coefficient.
    pub fn shift(&self) -> Self {
        let mut coeffs = vec![SuperMatrix::zeros(&self.space)];
        coeffs.extend(self.coeffs[..self.order()].iter().cloned());
        Self { space: self.space.clone(), coeffs }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() || self.space != other.space {
            return Err(Error::DimensionMismatch(format!(
                "currents of order {} and {} on spaces of dim {} and {}",
                self.order(),
                other.order(),
                self.space.dim(),
                other.space.dim()
            )));
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.order();
        let coeffs = (0..=n)
            .map(|r| {
                (0..=r).fold(SuperMatrix::zeros(&self.space), |acc, a| &acc + &(&self.coeffs[a] * &other.coeffs[r - a]))
            })
            .collect();
        Ok(Self { space: self.space.clone(), coeffs })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { space: self.space.clone(), coeffs })
    }

    /// Inverse by recursion on the coefficients; needs an invertible constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.coeffs[0].inverse().map_err(|_| Error::Singular("constant term of the current".into()))?;
        let mut out = vec![c0.clone()];
        for r in 1..=self.order() {
            let s = (1..=r).fold(SuperMatrix::zeros(&self.space), |acc, a| &acc + &(&self.coeffs[a] * &out[r - a]));
            out.push(-&(&c0 * &s));
        }
        Ok(Self { space: self.space.clone(), coeffs: out })
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, c| acc.max(c.max_abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).fold(0.0, |acc, (a, b)| acc.max(a.max_abs_diff(b)))
    }
}

impl Mul for &TruncatedCurrent {
    type Output = TruncatedCurrent;

    fn mul(self, rhs: &TruncatedCurrent) -> TruncatedCurrent {
        self.try_mul(rhs).expect("currents of equal order and space")
    }
}

impl Add for &TruncatedCurrent {
    type Output = TruncatedCurrent;

    fn add(self, rhs: &TruncatedCurrent) -> TruncatedCurrent {
        self.try_add(rhs).expect("currents of equal order and space")
    }
}

impl Sub for &TruncatedCurrent {
    type Output = TruncatedCurrent;

    fn sub(self, rhs: &TruncatedCurrent) -> TruncatedCurrent {
        self + &(-rhs)
    }
}

impl Neg for &TruncatedCurrent {
    type Output = TruncatedCurrent;

    fn neg(self) -> TruncatedCurrent {
        self.map(|c| -c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{c, CMat, ONE};

    fn sample(seed: f64, order: usize) -> TruncatedCurrent {
        let s = GradedSpace::atypical();
        let coeffs = (0..=order)
            .map(|r| {
                let d = CMat::from_fn(2, 2, |i, j| c((seed * (r + 2 * i + j + 1) as f64).sin(), (seed + r as f64 * 0.3 - j as f64).cos()));
                SuperMatrix::square(&s, d).unwrap()
            })
            .collect();
        TruncatedCurrent::new(coeffs).unwrap()
    }

    #[test]
    fn associative() {
        let (a, b, cc) = (sample(0.3, 5), sample(1.7, 5), sample(-0.9, 5));
        let l = &(&a * &b) * &cc;
        let r = &a * &(&b * &cc);
        assert!(l.max_abs_diff(&r) < 1e-12);
    }

    #[test]
    fn inverse_both_sides() {
        let a = sample(0.4, 6);
        let inv = a.inverse().unwrap();
        let one = TruncatedCurrent::one(a.space(), 6);
        assert!((&a * &inv).max_abs_diff(&one) < 1e-10);
        assert!((&inv * &a).max_abs_diff(&one) < 1e-10);
    }

    #[test]
    fn truncation_is_consistent() {
        let (a, b) = (sample(0.3, 6), sample(1.1, 6));
        let short = |x: &TruncatedCurrent| TruncatedCurrent::new(x.coeffs()[..4].to_vec()).unwrap();
        let full = &a * &b;
        let cut = &short(&a) * &short(&b);
        for r in 0..4 {
            assert!(full.coeff(r).max_abs_diff(cut.coeff(r)) < 1e-14);
        }
    }

    #[test]
    fn shift_moves_coefficients() {
        let a = sample(0.2, 3);
        let s = a.shift();
        assert_eq!(s.coeff(0).max_abs(), 0.0);
        assert_eq!(s.coeff(2), a.coeff(1));
        assert_eq!(s.scale(ONE), s);
    }
}
