//! The undeformed algebra U(𝔞): atypical and typical modules, relations, coproduct,
//! fusion data, the singlet and the automorphism twists.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{c, comm, graded_comm, GradedSpace, Parity, SuperMatrix, C64, CMat, ONE, ZERO};
use crate::linalg::{eigen_residual, vec_max_abs};
use crate::report::ResidualReport;
use crate::terms::{eval_terms, eval_word, Term};

pub const GENERATORS: [&str; 11] = ["e1", "e2", "f1", "f2", "h0", "h1", "h2", "k1", "k2", "u+", "u-"];

/// Odd iff the name starts with a raising or lowering letter.
pub fn generator_parity(name: &str) -> Parity {
    match name.chars().next() {
        Some('e' | 'f' | 'E' | 'F') => Parity::Odd,
        _ => Parity::Even,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepLabels {
    pub gamma: C64,
    pub nu: C64,
    pub alpha1: C64,
    pub alpha2: C64,
}

impl RepLabels {
    pub fn new(gamma: C64, nu: C64, alpha1: C64, alpha2: C64) -> Result<Self> {
        for (name, v) in [("gamma", gamma), ("nu", nu), ("alpha1", alpha1), ("alpha2", alpha2)] {
            if v == ZERO || !v.is_finite() {
                return Err(Error::Invalid(format!("{name} must be finite and nonzero")));
            }
        }
        Ok(Self { gamma, nu, alpha1, alpha2 })
    }

    /// `α₁ = -α₂ = -h/2`.
    pub fn with_coupling(gamma: C64, nu: C64, h: C64) -> Result<Self> {
        Self::new(gamma, nu, -h / 2.0, h / 2.0)
    }

    pub fn nu_gap(&self) -> C64 {
        self.nu.powi(2) - self.nu.powi(-2)
    }

    pub fn mu1(&self) -> C64 {
        self.alpha1 * self.nu_gap()
    }

    pub fn mu2(&self) -> C64 {
        self.alpha2 * self.nu_gap()
    }

    pub fn lambda1(&self) -> C64 {
        self.gamma * self.gamma * self.mu2()
    }

    pub fn lambda2(&self) -> C64 {
        self.mu1() / (self.gamma * self.gamma)
    }

    pub fn alpha(&self) -> [C64; 2] {
        [self.alpha1, self.alpha2]
    }

    pub fn shortening_residual(&self) -> f64 {
        (self.lambda1() * self.lambda2() - self.mu1() * self.mu2()).norm()
    }

    /// `ν⁴ = 1`: central charges vanish and the lowering images are zero.
    pub fn is_degenerate(&self) -> bool {
        self.nu_gap().norm() < 1e-14 * (1.0 + self.nu.norm_sqr())
    }
}

/// Images of named generators on one graded space.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorImage {
    space: GradedSpace,
    images: BTreeMap<String, SuperMatrix>,
    alpha: Option<[C64; 2]>,
    q: Option<C64>,
}

impl GeneratorImage {
    pub fn new(space: GradedSpace, alpha: Option<[C64; 2]>, q: Option<C64>) -> Self {
        Self { space, images: BTreeMap::new(), alpha, q }
    }

    /// Inserts an image; the entries are checked against the parity implied by the name.
    pub fn insert(&mut self, name: &str, m: SuperMatrix) -> Result<()> {
        if m.space_out() != &self.space || m.space_in() != &self.space {
            return Err(Error::DimensionMismatch(format!("image of {name} lives on a different space")));
        }
        let m = m.with_parity(generator_parity(name))?;
        self.images.insert(name.to_string(), m);
        Ok(())
    }

    pub(crate) fn set(&mut self, name: &str, m: SuperMatrix) {
        let p = generator_parity(name);
        self.images.insert(name.to_string(), m.tagged(Some(p)));
    }

    pub fn get(&self, name: &str) -> Result<&SuperMatrix> {
        self.images.get(name).ok_or_else(|| Error::MissingGenerator(name.to_string()))
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.images.keys().map(|s| s.as_str())
    }

    pub fn images(&self) -> &BTreeMap<String, SuperMatrix> {
        &self.images
    }

    pub fn alpha(&self) -> Option<[C64; 2]> {
        self.alpha
    }

    pub fn q(&self) -> Option<C64> {
        self.q
    }

    pub fn with_alpha(mut self, alpha: Option<[C64; 2]>) -> Self {
        self.alpha = alpha;
        self
    }

    /// Applies `f` to every image.
    pub fn map(&self, f: impl Fn(&str, &SuperMatrix) -> SuperMatrix) -> Self {
        let mut out = Self::new(self.space.clone(), self.alpha, self.q);
        for (k, v) in &self.images {
            out.set(k, f(k, v));
        }
        out
    }

    pub fn max_abs_diff(&self, other: &GeneratorImage) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (k, v) in &self.images {
            worst = worst.max(v.max_abs_diff(other.get(k)?));
        }
        Ok(worst)
    }
}

#[derive(Serialize, Deserialize)]
struct GeneratorImageJson {
    space: Vec<u8>,
    generators: BTreeMap<String, SuperMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<[C64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    q: Option<C64>,
}

impl Serialize for GeneratorImage {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GeneratorImageJson { space: self.space.bits(), generators: self.images.clone(), alpha: self.alpha, q: self.q }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GeneratorImage {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = GeneratorImageJson::deserialize(d)?;
        let space = GradedSpace::from_bits(&j.space).map_err(D::Error::custom)?;
        let mut out = GeneratorImage::new(space, j.alpha, j.q);
        for (k, v) in j.generators {
            out.insert(&k, v).map_err(D::Error::custom)?;
        }
        Ok(out)
    }
}

fn unit(space: &GradedSpace, i: usize, j: usize) -> SuperMatrix {
    SuperMatrix::unit(space, i, j)
}

/// The two-dimensional module on `(w₁, w₀)`.
pub fn atypical_rep(labels: &RepLabels) -> GeneratorImage {
    let s = GradedSpace::atypical();
    let g = labels.gamma;
    let (mu1, mu2) = (labels.mu1(), labels.mu2());
    let e21 = unit(&s, 2, 1);
    let e12 = unit(&s, 1, 2);
    let id = SuperMatrix::identity(&s);
    let mut rep = GeneratorImage::new(s.clone(), Some(labels.alpha()), None);
    rep.set("e1", e21.scale(g));
    rep.set("e2", e21.scale(ONE / g));
    rep.set("f1", e12.scale(g * mu2));
    rep.set("f2", e12.scale(mu1 / g));
    rep.set("h1", id.scale(labels.lambda1()));
    rep.set("h2", id.scale(labels.lambda2()));
    rep.set("k1", id.scale(mu1));
    rep.set("k2", id.scale(mu2));
    rep.set("h0", SuperMatrix::diag(&s, &[c(-2.0, 0.0), c(-1.0, 0.0)]).expect("2x2"));
    rep.set("u+", id.scale(labels.nu));
    rep.set("u-", id.scale(ONE / labels.nu));
    rep
}

/// Conjugation by `E₁₂ + E₂₁`, giving the module with the opposite grading in positional order.
pub fn barred(rep: &GeneratorImage) -> Result<GeneratorImage> {
    if rep.dim() != 2 {
        return Err(Error::DimensionMismatch("barred modules are two-dimensional".into()));
    }
    let x = &unit(rep.space(), 1, 2) + &unit(rep.space(), 2, 1);
    Ok(rep.map(|_, m| &(&x * m) * &x))
}

/// Kac module on `(v₀, v₁, v₂, v₂₁)`.
pub fn typical_rep(lambda1: C64, lambda2: C64, nu: C64, alpha: [C64; 2]) -> Result<GeneratorImage> {
    if nu == ZERO || alpha.contains(&ZERO) {
        return Err(Error::Invalid("nu and alpha must be nonzero".into()));
    }
    let s = GradedSpace::typical();
    let gap = nu.powi(2) - nu.powi(-2);
    let (mu1, mu2) = (alpha[0] * gap, alpha[1] * gap);
    let mat = |entries: &[(usize, usize, C64)]| {
        let mut m = CMat::zeros(4, 4);
        for &(i, j, v) in entries {
            m[(i, j)] = v;
        }
        SuperMatrix::square(&s, m).expect("4x4")
    };
    let id = SuperMatrix::identity(&s);
    let mut rep = GeneratorImage::new(s.clone(), Some(alpha), None);
    rep.set("f1", mat(&[(1, 0, ONE), (3, 2, -ONE)]));
    rep.set("f2", mat(&[(2, 0, ONE), (3, 1, ONE)]));
    rep.set("e1", mat(&[(0, 1, lambda1), (0, 2, mu1), (1, 3, mu1), (2, 3, -lambda1)]));
    rep.set("e2", mat(&[(0, 1, mu2), (0, 2, lambda2), (1, 3, lambda2), (2, 3, -mu2)]));
    rep.set("h0", SuperMatrix::diag(&s, &[ZERO, -ONE, -ONE, c(-2.0, 0.0)])?);
    rep.set("h1", id.scale(lambda1));
    rep.set("h2", id.scale(lambda2));
    rep.set("k1", id.scale(mu1));
    rep.set("k2", id.scale(mu2));
    rep.set("u+", id.scale(nu));
    rep.set("u-", id.scale(ONE / nu));
    Ok(rep)
}

fn bracket(rep: &GeneratorImage, a: &str, b: &str) -> Result<SuperMatrix> {
    graded_comm(rep.get(a)?, rep.get(b)?)
}

/// Residuals of the defining relations and, when the image carries `α`, of `k_i = α_i(u²-u⁻²)`.
pub fn check_relations(rep: &GeneratorImage) -> Result<ResidualReport> {
    let mut r = ResidualReport::new("relations", 1e-12);
    for name in GENERATORS {
        rep.get(name)?;
    }
    for (i, e) in ["e1", "e2"].iter().enumerate() {
        for (j, f) in ["f1", "f2"].iter().enumerate() {
            let rhs = if i == j { format!("h{}", i + 1) } else { format!("k{}", i + 1) };
            let d = &bracket(rep, e, f)? - rep.get(&rhs)?;
            r.push(format!("[{e},{f}]={rhs}"), d.max_abs());
        }
    }
    for x in ["e1", "e2"] {
        r.push(format!("[h0,{x}]={x}"), (&bracket(rep, "h0", x)? - rep.get(x)?).max_abs());
    }
    for x in ["f1", "f2"] {
        r.push(format!("[h0,{x}]=-{x}"), (&bracket(rep, "h0", x)? + rep.get(x)?).max_abs());
    }
    for (a, b) in [("e1", "e1"), ("e1", "e2"), ("e2", "e2"), ("f1", "f1"), ("f1", "f2"), ("f2", "f2")] {
        r.push(format!("[{a},{b}]=0"), bracket(rep, a, b)?.max_abs());
    }
    for z in ["h1", "h2", "k1", "k2", "u+", "u-"] {
        let mut worst: f64 = 0.0;
        for g in GENERATORS {
            worst = worst.max(bracket(rep, z, g)?.max_abs());
        }
        r.push(format!("central {z}"), worst);
    }
    let id = SuperMatrix::identity(rep.space());
    r.push("u+u-=1", (&(rep.get("u+")? * rep.get("u-")?) - &id).max_abs());
    if let Some(alpha) = rep.alpha() {
        let up = rep.get("u+")?;
        let um = rep.get("u-")?;
        let gap = &(up * up) - &(um * um);
        for (i, a) in alpha.iter().enumerate() {
            let k = rep.get(&format!("k{}", i + 1))?;
            r.push(format!("I0 k{}", i + 1), (k - &gap.scale(*a)).max_abs());
        }
    }
    Ok(r)
}

/// `u^{n}` as a word.
pub(crate) fn u_word(n: i32) -> Vec<&'static str> {
    let letter = if n >= 0 { "u+" } else { "u-" };
    vec![letter; n.unsigned_abs() as usize]
}

/// Coproduct of a generator as a list of terms; `s = +1` for index 1 and `-1` for index 2.
pub fn coproduct_terms(g: &str) -> Result<Vec<Term<&'static str>>> {
    let name: &'static str = GENERATORS.iter().find(|n| **n == g).copied().ok_or_else(|| Error::UnknownGenerator(g.into()))?;
    let s = if name.ends_with('1') { 1 } else { -1 };
    let t = match name.chars().next() {
        Some('e') => vec![Term::unit(vec![name], u_word(-s)), Term::unit(u_word(s), vec![name])],
        Some('f') => vec![Term::unit(vec![name], u_word(s)), Term::unit(u_word(-s), vec![name])],
        Some('k') => vec![Term::unit(vec![name], u_word(-2 * s)), Term::unit(u_word(2 * s), vec![name])],
        Some('h') => vec![Term::unit(vec![name], vec![]), Term::unit(vec![], vec![name])],
        _ => vec![Term::unit(vec![name], vec![name])],
    };
    Ok(t)
}

fn lookup(rep: &GeneratorImage) -> impl Fn(&&'static str) -> Result<SuperMatrix> + '_ {
    move |n: &&'static str| rep.get(n).cloned()
}

/// Matrix of `Δ(g)` (or `Δ^op(g)`) on `A⊗B`.
pub fn coproduct_image(g: &str, rep_a: &GeneratorImage, rep_b: &GeneratorImage, opposite: bool) -> Result<SuperMatrix> {
    let terms = coproduct_terms(g)?;
    eval_terms(&terms, rep_a.space(), rep_b.space(), lookup(rep_a), lookup(rep_b), opposite)
}

/// The tensor product module `A⊗B` as a generator image.
pub fn tensor_rep(rep_a: &GeneratorImage, rep_b: &GeneratorImage) -> Result<GeneratorImage> {
    let mut out = GeneratorImage::new(rep_a.space().tensor(rep_b.space()), rep_a.alpha(), None);
    for g in GENERATORS {
        out.set(g, coproduct_image(g, rep_a, rep_b, false)?);
    }
    Ok(out)
}

fn word_coproduct(word: &[&'static str], a: &GeneratorImage, b: &GeneratorImage) -> Result<SuperMatrix> {
    let space = a.space().tensor(b.space());
    eval_word(word, &space, &|n: &&'static str| coproduct_image(n, a, b, false))
}

/// `max |(Δ⊗id)Δ(g) - (id⊗Δ)Δ(g)|` on `A⊗B⊗C`.
pub fn coassoc_residual(g: &str, a: &GeneratorImage, b: &GeneratorImage, cc: &GeneratorImage) -> Result<f64> {
    let terms = coproduct_terms(g)?;
    let ab = a.space().tensor(b.space());
    let bc = b.space().tensor(cc.space());
    let left = eval_terms(&terms, &ab, cc.space(), |n| word_coproduct(std::slice::from_ref(n), a, b), lookup(cc), false)?;
    let right = eval_terms(&terms, a.space(), &bc, lookup(a), |n| word_coproduct(std::slice::from_ref(n), b, cc), false)?;
    Ok(left.max_abs_diff(&right))
}

/// `S(a) = -a` on 𝔞, `S(u±) = u∓`, extended as a graded antihomomorphism.
fn antipode_word(word: &[&'static str], rep: &GeneratorImage) -> Result<SuperMatrix> {
    let mut m = SuperMatrix::identity(rep.space());
    let mut sign = 1.0;
    let mut odd_seen = 0u32;
    for n in word {
        let img = match *n {
            "u+" => rep.get("u-")?.clone(),
            "u-" => rep.get("u+")?.clone(),
            other => rep.get(other)?.scale(-ONE),
        };
        if generator_parity(n) == Parity::Odd {
            if odd_seen % 2 == 1 {
                sign = -sign;
            }
            odd_seen += 1;
        }
        m = &img * &m;
    }
    Ok(m.scale(c(sign, 0.0)))
}

fn counit(g: &str) -> C64 {
    if g.starts_with('u') || g.starts_with('U') {
        ONE
    } else {
        ZERO
    }
}

/// `max` over `m∘(S⊗id)∘Δ(g)` and `m∘(id⊗S)∘Δ(g)` of the distance to `ε(g)·1`.
pub fn antipode_residual(g: &str, rep: &GeneratorImage) -> Result<f64> {
    let terms = coproduct_terms(g)?;
    let target = SuperMatrix::scalar(rep.space(), counit(g));
    let mut left = SuperMatrix::zeros(rep.space());
    let mut right = SuperMatrix::zeros(rep.space());
    let ev = lookup(rep);
    for t in &terms {
        let l = antipode_word(&t.left, rep)? * eval_word(&t.right, rep.space(), &ev)?;
        let r = &eval_word(&t.left, rep.space(), &ev)? * &antipode_word(&t.right, rep)?;
        left = &left + &l.scale(t.coeff);
        right = &right + &r.scale(t.coeff);
    }
    Ok(left.max_abs_diff(&target).max(right.max_abs_diff(&target)))
}

/// Fused weights and the change of basis of `A⊗B ≅ K(λ̃₁, λ̃₂, ν̃)`.
#[derive(Clone, Debug)]
pub struct FuseResult {
    pub report: ResidualReport,
    pub lambda1: C64,
    pub lambda2: C64,
    pub nu: C64,
    pub basis: CMat,
    pub determinant: C64,
}

fn same_alpha(a: [C64; 2], b: [C64; 2]) -> Result<()> {
    let d = (a[0] - b[0]).norm().max((a[1] - b[1]).norm());
    if d > 1e-12 * (1.0 + a[0].norm() + a[1].norm()) {
        return Err(Error::Precondition("both factors must share alpha1, alpha2".into()));
    }
    Ok(())
}

/// Builds `ṽ₀ = w₀⊗w₀′`, `ṽᵢ = Δ(fᵢ)ṽ₀`, `ṽ₂₁ = Δ(f₂f₁)ṽ₀` and compares with the Kac module.
pub fn fuse_check(labels_a: &RepLabels, labels_b: &RepLabels) -> Result<FuseResult> {
    same_alpha(labels_a.alpha(), labels_b.alpha())?;
    let (ra, rb) = (atypical_rep(labels_a), atypical_rep(labels_b));
    let l1 = labels_a.lambda1() + labels_b.lambda1();
    let l2 = labels_a.lambda2() + labels_b.lambda2();
    let nu = labels_a.nu * labels_b.nu;
    let typ = typical_rep(l1, l2, nu, labels_a.alpha())?;
    let (m1, m2) = (typ.get("k1")?.get(0, 0), typ.get("k2")?.get(0, 0));
    if (l1 * l2 - m1 * m2).norm() < 1e-10 * (1.0 + (l1 * l2).norm() + (m1 * m2).norm()) {
        return Err(Error::Degenerate("fused weights lie on the atypical locus".into()));
    }
    let tensor = tensor_rep(&ra, &rb)?;
    let v0 = vec![ZERO, ZERO, ZERO, ONE];
    let f1 = tensor.get("f1")?;
    let f2 = tensor.get("f2")?;
    let v1 = f1.apply(&v0);
    let v2 = f2.apply(&v0);
    let v21 = f2.apply(&v1);
    let basis = CMat::from_columns(&[v0.clone(), v1.clone(), v2.clone(), v21.clone()].map(nalgebra::DVector::from_vec));
    let det = basis.determinant();
    let inv = basis.clone().try_inverse().ok_or_else(|| Error::Degenerate("fusion basis is singular".into()))?;
    let mut r = ResidualReport::new("fuse", 1e-10);
    for (name, want) in [("h1", l1), ("h2", l2), ("k1", m1), ("k2", m2)] {
        let got = tensor.get(name)?.apply(&v0);
        let res = got.iter().zip(&v0).fold(0.0_f64, |acc, (x, y)| acc.max((x - want * y).norm()));
        r.push(format!("weight {name}"), res);
    }
    let want = [(l1, m1), (m2, l2)];
    for (i, e) in ["e1", "e2"].iter().enumerate() {
        let got = tensor.get(e)?.apply(&v21);
        let (x, y) = if i == 0 { (want[0].1, -want[0].0) } else { (want[1].1, -want[1].0) };
        let expect: Vec<C64> = v1.iter().zip(&v2).map(|(a, b)| x * a + y * b).collect();
        let res = got.iter().zip(&expect).fold(0.0_f64, |acc, (p, q)| acc.max((p - q).norm()));
        r.push(format!("{e}.v21"), res);
    }
    let shift = SuperMatrix::scalar(&GradedSpace::typical(), c(-2.0, 0.0));
    for g in GENERATORS {
        let m = &inv * tensor.get(g)?.data() * &basis;
        let mut target = typ.get(g)?.clone();
        if g == "h0" {
            target = &target + &shift;
        }
        r.push(format!("basis {g}"), crate::linalg::max_abs_diff(&m, target.data()));
    }
    Ok(FuseResult { report: r, lambda1: l1, lambda2: l2, nu, basis, determinant: det })
}

/// Deviation of the pair from singlet compatibility: `λ̃ᵢ`, `μ̃ᵢ`, `νν′ - 1`.
pub fn singlet_defects(labels_a: &RepLabels, labels_b: &RepLabels) -> [(&'static str, C64); 5] {
    [
        ("lambda1~", labels_a.lambda1() + labels_b.lambda1()),
        ("lambda2~", labels_a.lambda2() + labels_b.lambda2()),
        ("mu1~", labels_a.mu1() + labels_b.mu1()),
        ("mu2~", labels_a.mu2() + labels_b.mu2()),
        ("nu nu' - 1", labels_a.nu * labels_b.nu - ONE),
    ]
}

pub(crate) fn itemize(defects: &[(&str, C64)], tol: f64) -> Result<()> {
    let bad: Vec<String> =
        defects.iter().filter(|(_, v)| v.norm() > tol).map(|(n, v)| format!("{n} = {:.3e}", v.norm())).collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("not singlet compatible: {}", bad.join(", "))))
    }
}

/// `𝟙 = γ w₁⊗w₀′ + γ′νν′ w₀⊗w₁′`.
pub fn singlet_vector(labels_a: &RepLabels, labels_b: &RepLabels) -> Result<Vec<C64>> {
    itemize(&singlet_defects(labels_a, labels_b), 1e-9)?;
    let t = labels_b.gamma * labels_a.nu * labels_b.nu;
    Ok(vec![ZERO, labels_a.gamma, t, ZERO])
}

pub fn singlet_check(labels_a: &RepLabels, labels_b: &RepLabels) -> Result<ResidualReport> {
    let v = singlet_vector(labels_a, labels_b)?;
    let tensor = tensor_rep(&atypical_rep(labels_a), &atypical_rep(labels_b))?;
    let mut r = ResidualReport::new("singlet", 1e-11);
    for g in ["e1", "e2", "f1", "f2"] {
        r.push(format!("{g}.1=0"), vec_max_abs(&tensor.get(g)?.apply(&v)));
    }
    for g in ["u+", "u-"] {
        let w = tensor.get(g)?.apply(&v);
        r.push(format!("{g}.1=1"), w.iter().zip(&v).fold(0.0, |acc, (x, y)| acc.max((x - y).norm())));
    }
    let (_, res) = eigen_residual(&tensor.get("h0")?.apply(&v), &v);
    r.push("h0.1 in C1", res);
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KleinTwist {
    Row1,
    Row2,
    Row3,
}

impl FromStr for KleinTwist {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" | "row1" => Ok(KleinTwist::Row1),
            "2" | "row2" => Ok(KleinTwist::Row2),
            "3" | "row3" => Ok(KleinTwist::Row3),
            _ => Err(Error::UnknownOption(s.into())),
        }
    }
}

impl fmt::Display for KleinTwist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            KleinTwist::Row1 => "row1",
            KleinTwist::Row2 => "row2",
            KleinTwist::Row3 => "row3",
        };
        f.write_str(s)
    }
}

/// Pulls the module back along the automorphism: the image of `x` becomes `π(φ(x))`.
pub fn klein_twist(twist: KleinTwist, rep: &GeneratorImage) -> Result<GeneratorImage> {
    let swap = |n: &str| if n.ends_with('1') { n.replace('1', "2") } else { n.replace('2', "1") };
    let flip_u = |n: &str| if n == "u+" { "u-".to_string() } else { "u+".to_string() };
    let mut out = GeneratorImage::new(rep.space().clone(), None, None);
    for g in GENERATORS {
        let (src, sign) = match (twist, g) {
            (_, "h0") => ("h0".to_string(), if twist == KleinTwist::Row3 { ONE } else { -ONE }),
            (KleinTwist::Row2, "u+" | "u-") => (g.to_string(), ONE),
            (_, "u+" | "u-") => (flip_u(g), ONE),
            (KleinTwist::Row1, _) => {
                let s = match &g[..1] {
                    "e" => g.replacen('e', "f", 1),
                    "f" => g.replacen('f', "e", 1),
                    "k" => swap(g),
                    _ => g.to_string(),
                };
                (s, ONE)
            }
            (KleinTwist::Row2, _) => {
                let s = match &g[..1] {
                    "e" => swap(&g.replacen('e', "f", 1)),
                    "f" => swap(&g.replacen('f', "e", 1)),
                    "h" => swap(g),
                    _ => g.to_string(),
                };
                (s, ONE)
            }
            (KleinTwist::Row3, _) => (swap(g), ONE),
        };
        out.set(g, rep.get(&src)?.scale(sign));
    }
    let alpha = rep.alpha().map(|[a1, a2]| match twist {
        KleinTwist::Row2 => [a1, a2],
        _ => [-a2, -a1],
    });
    Ok(out.with_alpha(alpha))
}

/// `(e₁,e₂) ↦ A(e₁,e₂)`, `(f₁,f₂) ↦ B(f₁,f₂)`, `[[h₁,k₁],[k₂,h₂]] ↦ A·M·Bᵗ`, `h₀`, `u±` fixed.
pub fn gl2_twist(a: &Matrix2<C64>, b: &Matrix2<C64>, rep: &GeneratorImage) -> Result<GeneratorImage> {
    for (name, m) in [("A", a), ("B", b)] {
        let scale = m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()));
        if m.determinant().norm() <= 1e-14 * scale * scale {
            return Err(Error::Singular(format!("{name} is not invertible")));
        }
    }
    let mut out = GeneratorImage::new(rep.space().clone(), None, None);
    let combine = |m: &Matrix2<C64>, i: usize, x: &SuperMatrix, y: &SuperMatrix| &x.scale(m[(i, 0)]) + &y.scale(m[(i, 1)]);
    let (e1, e2, f1, f2) = (rep.get("e1")?, rep.get("e2")?, rep.get("f1")?, rep.get("f2")?);
    out.set("e1", combine(a, 0, e1, e2));
    out.set("e2", combine(a, 1, e1, e2));
    out.set("f1", combine(b, 0, f1, f2));
    out.set("f2", combine(b, 1, f1, f2));
    let m = [[rep.get("h1")?, rep.get("k1")?], [rep.get("k2")?, rep.get("h2")?]];
    let mut new = [[SuperMatrix::zeros(rep.space()), SuperMatrix::zeros(rep.space())], [
        SuperMatrix::zeros(rep.space()),
        SuperMatrix::zeros(rep.space()),
    ]];
    for (i, row) in new.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            for (k, mrow) in m.iter().enumerate() {
                for (l, x) in mrow.iter().enumerate() {
                    *slot = &*slot + &x.scale(a[(i, k)] * b[(j, l)]);
                }
            }
        }
    }
    out.set("h1", new[0][0].clone());
    out.set("k1", new[0][1].clone());
    out.set("k2", new[1][0].clone());
    out.set("h2", new[1][1].clone());
    for g in ["h0", "u+", "u-"] {
        out.set(g, rep.get(g)?.clone());
    }
    Ok(out)
}

/// Restriction of the Kac module at `λ₁λ₂ = μ₁μ₂` to `span{γ⁻¹v₂₁, λ₂v₁ - μ₂v₂}`.
pub fn atypical_locus_check(labels: &RepLabels) -> Result<ResidualReport> {
    let (l1, l2, m2) = (labels.lambda1(), labels.lambda2(), labels.mu2());
    let typ = typical_rep(l1, l2, labels.nu, labels.alpha())?;
    let at = atypical_rep(labels);
    let t = CMat::from_row_slice(4, 2, &[ZERO, ZERO, ZERO, l2, ZERO, -m2, ONE / labels.gamma, ZERO]);
    let mut r = ResidualReport::new("atypical locus", 1e-12);
    for g in GENERATORS {
        let lhs = typ.get(g)?.data() * &t;
        let rhs = &t * at.get(g)?.data();
        r.push(format!("restrict {g}"), crate::linalg::max_abs_diff(&lhs, &rhs));
    }
    let v21 = [ZERO, ZERO, ZERO, ONE];
    let w = typ.get("e1")?.apply(&typ.get("e2")?.apply(&v21));
    r.push("e1e2.v21=0", vec_max_abs(&w));
    Ok(r)
}

/// Plain commutator helper re-exported for composite checks.
pub fn commutator(a: &SuperMatrix, b: &SuperMatrix) -> SuperMatrix {
    comm(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels() -> RepLabels {
        RepLabels::new(c(0.8, 0.3), C64::from_polar(1.0, 0.7), c(-0.4, 0.1), c(0.6, -0.2)).unwrap()
    }

    #[test]
    fn atypical_satisfies_relations() {
        let r = check_relations(&atypical_rep(&labels())).unwrap();
        assert!(r.passed, "{:?}", r.worst());
    }

    #[test]
    fn typical_satisfies_relations() {
        let rep = typical_rep(c(0.3, 1.1), c(-0.7, 0.2), C64::from_polar(1.2, 0.4), [c(0.5, 0.0), c(-0.3, 0.4)]).unwrap();
        let r = check_relations(&rep).unwrap();
        assert!(r.passed, "{:?}", r.worst());
    }

    #[test]
    fn degenerate_nu_kills_lowering() {
        let l = RepLabels::new(ONE, C64::from_polar(1.0, std::f64::consts::FRAC_PI_2), c(0.3, 0.0), c(0.2, 0.0)).unwrap();
        assert!(l.is_degenerate());
        let rep = atypical_rep(&l);
        assert!(rep.get("f1").unwrap().max_abs() < 1e-15);
        assert_eq!(rep.get("e1").unwrap().data(), SuperMatrix::unit(&GradedSpace::atypical(), 2, 1).data());
    }

    #[test]
    fn imaginary_gamma_flips_lambda1() {
        let base = labels();
        let l = RepLabels { gamma: c(0.0, 1.5), ..base };
        assert!((l.lambda1() + 2.25 * l.mu2()).norm() < 1e-14);
    }

    #[test]
    fn zeroed_k1_residual_is_mu1() {
        let l = labels();
        let mut rep = atypical_rep(&l);
        rep.set("k1", SuperMatrix::zeros(rep.space()));
        let r = check_relations(&rep).unwrap();
        let res = r.residual("[e1,f2]=k1").unwrap();
        assert!((res - l.mu1().norm()).abs() < 1e-14);
    }

    #[test]
    fn h1_coproduct_is_sum_of_weights() {
        let (a, b) = (labels(), RepLabels { gamma: c(1.3, -0.4), nu: C64::from_polar(1.0, 2.1), ..labels() });
        let m = coproduct_image("h1", &atypical_rep(&a), &atypical_rep(&b), false).unwrap();
        let want = SuperMatrix::scalar(&GradedSpace::atypical().tensor(&GradedSpace::atypical()), a.lambda1() + b.lambda1());
        assert!(m.max_abs_diff(&want) < 1e-14);
        let up = coproduct_image("u+", &atypical_rep(&a), &atypical_rep(&b), false).unwrap();
        assert!((up.get(2, 2) - a.nu * b.nu).norm() < 1e-15);
    }

    #[test]
    fn k_is_cocommutative() {
        let (a, b) = (labels(), RepLabels { gamma: c(1.3, -0.4), nu: C64::from_polar(1.0, 2.1), ..labels() });
        for k in ["k1", "k2"] {
            let d = coproduct_image(k, &atypical_rep(&a), &atypical_rep(&b), false).unwrap();
            let o = coproduct_image(k, &atypical_rep(&a), &atypical_rep(&b), true).unwrap();
            assert!(d.max_abs_diff(&o) < 1e-14);
        }
    }

    #[test]
    fn unknown_names_rejected() {
        let rep = atypical_rep(&labels());
        assert!(matches!(coproduct_image("x7", &rep, &rep, false), Err(Error::UnknownGenerator(_))));
        assert!("row9".parse::<KleinTwist>().is_err());
    }

    #[test]
    fn klein_rows() {
        let rep = atypical_rep(&labels());
        for t in [KleinTwist::Row1, KleinTwist::Row2, KleinTwist::Row3] {
            let tw = klein_twist(t, &rep).unwrap();
            assert!(check_relations(&tw).unwrap().passed, "{t}");
            let back = klein_twist(t, &tw).unwrap();
            assert!(back.max_abs_diff(&rep).unwrap() == 0.0);
            assert_eq!(back.alpha(), rep.alpha());
        }
        let c12 = klein_twist(KleinTwist::Row1, &klein_twist(KleinTwist::Row2, &rep).unwrap()).unwrap();
        let r3 = klein_twist(KleinTwist::Row3, &rep).unwrap();
        assert_eq!(c12.max_abs_diff(&r3).unwrap(), 0.0);
        assert_eq!(c12.alpha(), r3.alpha());
    }

    #[test]
    fn gl2_identity_and_singular() {
        let rep = atypical_rep(&labels());
        let id = Matrix2::identity();
        assert_eq!(gl2_twist(&id, &id, &rep).unwrap().max_abs_diff(&rep).unwrap(), 0.0);
        let sing = Matrix2::new(ONE, ONE, ONE, ONE);
        assert!(matches!(gl2_twist(&sing, &id, &rep), Err(Error::Singular(_))));
    }

    #[test]
    fn singlet_precondition_itemized() {
        let a = labels();
        let b = RepLabels { nu: a.nu * 1.1, ..a };
        match singlet_vector(&a, &b) {
            Err(Error::Precondition(msg)) => assert!(msg.contains("nu nu' - 1")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn generator_image_json_round_trip() {
        let rep = atypical_rep(&labels());
        let s = serde_json::to_string(&rep).unwrap();
        let back: GeneratorImage = serde_json::from_str(&s).unwrap();
        assert_eq!(back, rep);
    }
}
