//! Z2-graded spaces and supermatrices.
//!
//! Tensor products follow the Koszul rule `(X⊗Y)(v⊗w) = (-1)^{p(Y)p(v)} Xv⊗Yw`.
//! On matrix units this is the sign `(-1)^{(p(k)+p(l))p(j)}` at entry
//! `((i,k),(j,l))`, which makes
//! `(A⊗B)(C⊗D) = (-1)^{p(B)p(C)} AC⊗BD` hold for homogeneous factors.
//! The formula is linear in each factor, so mixed-parity matrices are handled
//! as the sum of their homogeneous parts without further bookkeeping.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn from_bit(b: u8) -> Self {
        if b.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// `(-1)^{p q}`
    pub fn koszul(self, other: Parity) -> f64 {
        if self == Parity::Odd && other == Parity::Odd {
            -1.0
        } else {
            1.0
        }
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bit(self.bit() + rhs.bit())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => write!(f, "even"),
            Parity::Odd => write!(f, "odd"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedSpace {
    parity: Vec<Parity>,
}

impl GradedSpace {
    pub fn new(parity: Vec<Parity>) -> Result<Self> {
        if parity.is_empty() {
            return Err(Error::ZeroDimension);
        }
        Ok(Self { parity })
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        Self::new(bits.iter().map(|&b| Parity::from_bit(b)).collect())
    }

    /// C^{1|1} with basis (w1, w0): even, odd.
    pub fn atypical() -> Self {
        Self { parity: vec![Parity::Even, Parity::Odd] }
    }

    /// Kac module basis (v0, v1, v2, v21).
    pub fn typical() -> Self {
        Self { parity: vec![Parity::Even, Parity::Odd, Parity::Odd, Parity::Even] }
    }

    pub fn dim(&self) -> usize {
        self.parity.len()
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.parity[i]
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parity
    }

    pub fn bits(&self) -> Vec<u8> {
        self.parity.iter().map(|p| p.bit()).collect()
    }

    /// Index `(i, k)` of the product is `i * other.dim() + k`.
    pub fn tensor(&self, other: &GradedSpace) -> GradedSpace {
        let mut parity = Vec::with_capacity(self.dim() * other.dim());
        for &a in &self.parity {
            for &b in &other.parity {
                parity.push(a + b);
            }
        }
        GradedSpace { parity }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuperMatrix {
    out: GradedSpace,
    inp: GradedSpace,
    data: CMat,
    parity: Option<Parity>,
}

impl SuperMatrix {
    pub fn new(out: GradedSpace, inp: GradedSpace, data: CMat) -> Result<Self> {
        if data.nrows() != out.dim() || data.ncols() != inp.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} entries for spaces of dimension {} and {}",
                data.nrows(),
                data.ncols(),
                out.dim(),
                inp.dim()
            )));
        }
        Ok(Self { out, inp, data, parity: None })
    }

    /// Square matrix on `space` with a declared parity; every nonzero entry is checked.
    pub fn homogeneous(space: &GradedSpace, data: CMat, parity: Parity) -> Result<Self> {
        Self::new(space.clone(), space.clone(), data)?.with_parity(parity)
    }

    pub fn square(space: &GradedSpace, data: CMat) -> Result<Self> {
        Self::new(space.clone(), space.clone(), data)
    }

    pub fn zeros(space: &GradedSpace) -> Self {
        let n = space.dim();
        Self { out: space.clone(), inp: space.clone(), data: CMat::zeros(n, n), parity: Some(Parity::Even) }
    }

    pub fn identity(space: &GradedSpace) -> Self {
        let n = space.dim();
        Self { out: space.clone(), inp: space.clone(), data: CMat::identity(n, n), parity: Some(Parity::Even) }
    }

    pub fn scalar(space: &GradedSpace, s: C64) -> Self {
        Self::identity(space).scale(s)
    }

    /// Matrix unit `E_ij` (1-based) on `space`.
    pub fn unit(space: &GradedSpace, i: usize, j: usize) -> Self {
        let n = space.dim();
        let mut data = CMat::zeros(n, n);
        data[(i - 1, j - 1)] = ONE;
        let parity = space.parity(i - 1) + space.parity(j - 1);
        Self { out: space.clone(), inp: space.clone(), data, parity: Some(parity) }
    }

    pub fn diag(space: &GradedSpace, d: &[C64]) -> Result<Self> {
        if d.len() != space.dim() {
            return Err(Error::DimensionMismatch(format!("{} diagonal entries for dimension {}", d.len(), space.dim())));
        }
        let data = CMat::from_diagonal(&nalgebra::DVector::from_column_slice(d));
        Ok(Self { out: space.clone(), inp: space.clone(), data, parity: Some(Parity::Even) })
    }

    pub fn with_parity(mut self, parity: Parity) -> Result<Self> {
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                if self.data[(i, j)] != ZERO && self.out.parity(i) + self.inp.parity(j) != parity {
                    return Err(Error::NotHomogeneous(parity.to_string()));
                }
            }
        }
        self.parity = Some(parity);
        Ok(self)
    }

    /// Declares the parity without checking entries (caller guarantees it).
    pub(crate) fn tagged(mut self, parity: Option<Parity>) -> Self {
        self.parity = parity;
        self
    }

    pub fn detect_parity(&self, tol: f64) -> Option<Parity> {
        let mut seen = BTreeSet::new();
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                if self.data[(i, j)].norm() > tol {
                    seen.insert(self.out.parity(i) + self.inp.parity(j));
                }
            }
        }
        match seen.len() {
            0 => Some(Parity::Even),
            1 => seen.into_iter().next(),
            _ => None,
        }
    }

    pub fn parity(&self) -> Option<Parity> {
        self.parity
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn space_out(&self) -> &GradedSpace {
        &self.out
    }

    pub fn space_in(&self) -> &GradedSpace {
        &self.inp
    }

    pub fn data(&self) -> &CMat {
        &self.data
    }

    pub fn into_data(self) -> CMat {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[(i, j)]
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { out: self.out.clone(), inp: self.inp.clone(), data: &self.data * s, parity: self.parity }
    }

    pub fn map_data(&self, f: impl Fn(&CMat) -> CMat) -> Self {
        Self { out: self.out.clone(), inp: self.inp.clone(), data: f(&self.data), parity: None }
    }

    pub fn try_mul(&self, rhs: &SuperMatrix) -> Result<SuperMatrix> {
        if self.inp != rhs.out {
            return Err(Error::DimensionMismatch("product of supermatrices on different spaces".into()));
        }
        let parity = match (self.parity, rhs.parity) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        Ok(Self { out: self.out.clone(), inp: rhs.inp.clone(), data: &self.data * &rhs.data, parity })
    }

    pub fn try_add(&self, rhs: &SuperMatrix) -> Result<SuperMatrix> {
        if self.out != rhs.out || self.inp != rhs.inp {
            return Err(Error::DimensionMismatch("sum of supermatrices on different spaces".into()));
        }
        let parity = if self.parity == rhs.parity { self.parity } else { None };
        Ok(Self { out: self.out.clone(), inp: self.inp.clone(), data: &self.data + &rhs.data, parity })
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let x = nalgebra::DVector::from_column_slice(v);
        (&self.data * x).iter().copied().collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &SuperMatrix) -> f64 {
        assert_eq!(self.data.shape(), other.data.shape(), "shape mismatch in max_abs_diff");
        self.data.iter().zip(other.data.iter()).fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn inverse(&self) -> Result<SuperMatrix> {
        let inv = self.data.clone().try_inverse().ok_or_else(|| Error::Singular("matrix is not invertible".into()))?;
        Ok(Self { out: self.inp.clone(), inp: self.out.clone(), data: inv, parity: self.parity })
    }
}

impl Mul for &SuperMatrix {
    type Output = SuperMatrix;
    fn mul(self, rhs: &SuperMatrix) -> SuperMatrix {
        self.try_mul(rhs).expect("supermatrix product")
    }
}

impl Mul for SuperMatrix {
    type Output = SuperMatrix;
    fn mul(self, rhs: SuperMatrix) -> SuperMatrix {
        &self * &rhs
    }
}

impl Add for &SuperMatrix {
    type Output = SuperMatrix;
    fn add(self, rhs: &SuperMatrix) -> SuperMatrix {
        self.try_add(rhs).expect("supermatrix sum")
    }
}

impl Sub for &SuperMatrix {
    type Output = SuperMatrix;
    fn sub(self, rhs: &SuperMatrix) -> SuperMatrix {
        self.try_add(&-rhs).expect("supermatrix difference")
    }
}

impl Neg for &SuperMatrix {
    type Output = SuperMatrix;
    fn neg(self) -> SuperMatrix {
        self.scale(-ONE)
    }
}

impl Mul<&SuperMatrix> for C64 {
    type Output = SuperMatrix;
    fn mul(self, rhs: &SuperMatrix) -> SuperMatrix {
        rhs.scale(self)
    }
}

/// Graded Kronecker product on `A.out⊗B.out <- A.in⊗B.in`.
pub fn graded_kron(a: &SuperMatrix, b: &SuperMatrix) -> SuperMatrix {
    let (n, m) = (a.rows(), b.rows());
    let (nc, mc) = (a.cols(), b.cols());
    let mut data = CMat::zeros(n * m, nc * mc);
    for i in 0..n {
        for j in 0..nc {
            let aij = a.data[(i, j)];
            if aij == ZERO {
                continue;
            }
            let pj = a.inp.parity(j);
            for k in 0..m {
                for l in 0..mc {
                    let bkl = b.data[(k, l)];
                    if bkl == ZERO {
                        continue;
                    }
                    let pb = b.out.parity(k) + b.inp.parity(l);
                    data[(i * m + k, j * mc + l)] = aij * bkl * pb.koszul(pj);
                }
            }
        }
    }
    let parity = match (a.parity, b.parity) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    };
    SuperMatrix { out: a.out.tensor(&b.out), inp: a.inp.tensor(&b.inp), data, parity }
}

/// Graded flip `V⊗W -> W⊗V`, `v⊗w ↦ (-1)^{p(v)p(w)} w⊗v`.
pub fn graded_perm(v: &GradedSpace, w: &GradedSpace) -> SuperMatrix {
    let (n, m) = (v.dim(), w.dim());
    let mut data = CMat::zeros(n * m, n * m);
    for i in 0..n {
        for k in 0..m {
            data[(k * n + i, i * m + k)] = re(v.parity(i).koszul(w.parity(k)));
        }
    }
    SuperMatrix { out: w.tensor(v), inp: v.tensor(w), data, parity: Some(Parity::Even) }
}

/// `[A, B] = AB - (-1)^{p(A)p(B)} BA`.
pub fn graded_comm(a: &SuperMatrix, b: &SuperMatrix) -> Result<SuperMatrix> {
    let (pa, pb) = match (a.parity, b.parity) {
        (Some(x), Some(y)) => (x, y),
        _ => return Err(Error::UndeclaredParity),
    };
    let ab = a.try_mul(b)?;
    let ba = b.try_mul(a)?;
    Ok(SuperMatrix::sub_scaled(&ab, &ba, re(pa.koszul(pb))).tagged(Some(pa + pb)))
}

impl SuperMatrix {
    fn sub_scaled(x: &SuperMatrix, y: &SuperMatrix, s: C64) -> SuperMatrix {
        SuperMatrix { out: x.out.clone(), inp: x.inp.clone(), data: &x.data - &y.data * s, parity: None }
    }
}

/// Plain commutator `AB - BA`, used where composite elements have no declared parity.
pub fn comm(a: &SuperMatrix, b: &SuperMatrix) -> SuperMatrix {
    let ab = a * b;
    let ba = b * a;
    SuperMatrix::sub_scaled(&ab, &ba, ONE).tagged(None)
}

#[derive(Serialize, Deserialize)]
struct SuperMatrixJson {
    rows: usize,
    cols: usize,
    parity_out: Vec<u8>,
    parity_in: Vec<u8>,
    entries: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    parity: Option<u8>,
}

impl Serialize for SuperMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut entries = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                let z = self.data[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        SuperMatrixJson {
            rows: self.rows(),
            cols: self.cols(),
            parity_out: self.out.bits(),
            parity_in: self.inp.bits(),
            entries,
            parity: self.parity.map(|p| p.bit()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SuperMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = SuperMatrixJson::deserialize(d)?;
        if j.entries.len() != j.rows * j.cols {
            return Err(D::Error::custom("entry count does not match rows*cols"));
        }
        let out = GradedSpace::from_bits(&j.parity_out).map_err(D::Error::custom)?;
        let inp = GradedSpace::from_bits(&j.parity_in).map_err(D::Error::custom)?;
        let data = CMat::from_row_iterator(j.rows, j.cols, j.entries.iter().map(|e| C64::new(e[0], e[1])));
        let m = SuperMatrix::new(out, inp, data).map_err(D::Error::custom)?;
        match j.parity {
            Some(b) => m.with_parity(Parity::from_bit(b)).map_err(D::Error::custom),
            None => Ok(m),
        }
    }
}

/// `E_ij` on C^{1|1}, 1-based.
pub fn e2(i: usize, j: usize) -> SuperMatrix {
    SuperMatrix::unit(&GradedSpace::atypical(), i, j)
}

pub fn id2() -> SuperMatrix {
    SuperMatrix::identity(&GradedSpace::atypical())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v2(a: C64, b: C64) -> Vec<C64> {
        vec![a, b]
    }

    fn kron_vec(x: &[C64], y: &[C64]) -> Vec<C64> {
        x.iter().flat_map(|a| y.iter().map(move |b| a * b)).collect()
    }

    #[test]
    fn identity_kron_identity() {
        let k = graded_kron(&id2(), &id2());
        assert_eq!(k.data(), &CMat::identity(4, 4));
        assert_eq!(k.space_out().bits(), vec![0, 1, 1, 0]);
    }

    #[test]
    fn odd_units_product_sign() {
        let a = graded_kron(&e2(1, 2), &e2(2, 1));
        let b = graded_kron(&e2(2, 1), &e2(1, 2));
        let expect = -&graded_kron(&e2(1, 1), &e2(2, 2));
        assert_eq!((&a * &b).data(), expect.data());
    }

    #[test]
    fn diagonal_units_carry_no_sign() {
        let k = graded_kron(&e2(1, 1), &e2(2, 2));
        let mut want = CMat::zeros(4, 4);
        want[(1, 1)] = ONE;
        assert_eq!(k.data(), &want);
    }

    #[test]
    fn perm_examples() {
        let s = GradedSpace::atypical();
        let p = graded_perm(&s, &s);
        assert_eq!((&p * &p).data(), &CMat::identity(4, 4));
        // w1⊗w0 -> w0⊗w1
        let x = kron_vec(&v2(ONE, ZERO), &v2(ZERO, ONE));
        assert_eq!(p.apply(&x), kron_vec(&v2(ZERO, ONE), &v2(ONE, ZERO)));
        // w0⊗w0 -> -w0⊗w0
        let y = kron_vec(&v2(ZERO, ONE), &v2(ZERO, ONE));
        assert_eq!(p.apply(&y), y.iter().map(|z| -z).collect::<Vec<_>>());
    }

    #[test]
    fn perm_matches_unit_sum() {
        let s = GradedSpace::atypical();
        let mut sum = SuperMatrix::zeros(&s.tensor(&s));
        for i in 1..=2 {
            for j in 1..=2 {
                let sign = if j == 1 { ONE } else { -ONE };
                sum = &sum + &graded_kron(&e2(i, j), &e2(j, i)).scale(sign);
            }
        }
        assert_eq!(sum.data(), graded_perm(&s, &s).data());
    }

    #[test]
    fn comm_examples() {
        let a = graded_comm(&e2(1, 2), &e2(2, 1)).unwrap();
        assert_eq!(a.data(), id2().data());
        let z = graded_comm(&id2(), &e2(1, 2)).unwrap();
        assert_eq!(z.max_abs(), 0.0);
        let b = graded_comm(&e2(1, 1), &e2(1, 2)).unwrap();
        assert_eq!(b.data(), e2(1, 2).data());
        assert_eq!(b.parity(), Some(Parity::Odd));
    }

    #[test]
    fn comm_requires_parity() {
        let s = GradedSpace::atypical();
        let m = SuperMatrix::square(&s, CMat::from_element(2, 2, ONE)).unwrap();
        assert_eq!(graded_comm(&m, &id2()), Err(Error::UndeclaredParity));
    }

    #[test]
    fn homogeneity_enforced() {
        let s = GradedSpace::atypical();
        let m = SuperMatrix::square(&s, CMat::from_element(2, 2, ONE)).unwrap();
        assert!(m.clone().with_parity(Parity::Even).is_err());
        assert_eq!(m.detect_parity(0.0), None);
        assert!(GradedSpace::new(vec![]).is_err());
    }

    #[test]
    fn json_round_trip_is_exact() {
        let s = GradedSpace::typical();
        let data = CMat::from_fn(4, 4, |i, j| c((i as f64 + 0.1).sqrt() / 3.0, -(j as f64).exp() / 7.0));
        let m = SuperMatrix::square(&s, data).unwrap();
        let txt = serde_json::to_string(&m).unwrap();
        let back: SuperMatrix = serde_json::from_str(&txt).unwrap();
        assert_eq!(back, m);
        let v: serde_json::Value = serde_json::from_str(&txt).unwrap();
        assert_eq!(v["rows"], 4);
        assert_eq!(v["parity_out"], serde_json::json!([0, 1, 1, 0]));
    }
}
