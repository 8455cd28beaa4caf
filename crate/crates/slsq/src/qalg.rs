//! The q-deformed algebra U_q(𝔞).
//!
//! Weights are carried as q-powers: `kp_i = q^{λ_i/2}`, `q^{μ₁} = kp₁kp₂ν²`,
//! `q^{μ₂} = kp₁kp₂ν⁻²`. `[x]_q` is evaluated on powers, `[λ]_q = (q^λ - q^{-λ})/(q - q⁻¹)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{graded_comm, GradedSpace, Parity, SuperMatrix, C64, CMat, ONE, ZERO};
use crate::halg::{generator_parity, itemize, GeneratorImage, KleinTwist};
use crate::linalg::{eigen_residual, max_abs_diff, vec_max_abs};
use crate::report::ResidualReport;
use crate::terms::{eval_terms, eval_word, Term};

pub const Q_GENERATORS: [&str; 16] =
    ["E1", "E2", "F1", "F2", "K0+", "K0-", "K1+", "K1-", "K2+", "K2-", "L1+", "L1-", "L2+", "L2-", "U+", "U-"];

const ROOT_ORDER: i32 = 48;

/// Rejects `q = 0`, non-finite `q` and roots of unity of order up to 48.
pub fn check_q(q: C64) -> Result<()> {
    if q == ZERO || !q.is_finite() {
        return Err(Error::RootOfUnity(format!("{q}")));
    }
    let mut p = ONE;
    for _ in 1..=ROOT_ORDER {
        p *= q;
        if (p - ONE).norm() < 1e-9 {
            return Err(Error::RootOfUnity(format!("{q}")));
        }
    }
    Ok(())
}

fn qdiff(q: C64) -> Result<C64> {
    let d = q - ONE / q;
    if d.norm() < 1e-14 {
        return Err(Error::RootOfUnity(format!("{q}")));
    }
    Ok(d)
}

/// `[x]_q` from the power `p = q^x`.
pub fn qbracket_pow(p: C64, q: C64) -> Result<C64> {
    Ok((p - ONE / p) / qdiff(q)?)
}

/// `[x]_q = (q^x - q^{-x})/(q - q⁻¹)` with the principal logarithm of `q`.
pub fn qbracket(x: C64, q: C64) -> Result<C64> {
    qbracket_pow((x * q.ln()).exp(), q)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QBranch {
    /// Both roots `y = q^{λ₂}` of the shortening quadratic.
    pub roots: Vec<C64>,
    pub root: usize,
    pub kp2_sign: i8,
    pub gamma_sign: i8,
    pub collision: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QRepLabels {
    pub gamma: C64,
    pub nu: C64,
    pub q: C64,
    /// `q^{λ₁/2}`
    pub kp1: C64,
    /// `q^{λ₂/2}`
    pub kp2: C64,
    pub alpha1: C64,
    pub alpha2: C64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<QBranch>,
}

impl QRepLabels {
    pub fn new(gamma: C64, nu: C64, q: C64, kp1: C64, kp2: C64, alpha: [C64; 2]) -> Result<Self> {
        check_q(q)?;
        for (name, v) in [("gamma", gamma), ("nu", nu), ("kp1", kp1), ("kp2", kp2), ("alpha1", alpha[0]), ("alpha2", alpha[1])]
        {
            if v == ZERO || !v.is_finite() {
                return Err(Error::Invalid(format!("{name} must be finite and nonzero")));
            }
        }
        Ok(Self { gamma, nu, q, kp1, kp2, alpha1: alpha[0], alpha2: alpha[1], branch: None })
    }

    pub fn alpha(&self) -> [C64; 2] {
        [self.alpha1, self.alpha2]
    }

    pub fn qdiff(&self) -> C64 {
        self.q - ONE / self.q
    }

    /// `q^{μ₁}`, `q^{μ₂}`
    pub fn qmu(&self) -> [C64; 2] {
        let k = self.kp1 * self.kp2;
        [k * self.nu * self.nu, k / (self.nu * self.nu)]
    }

    /// `q^{λ₁}`, `q^{λ₂}`
    pub fn qlambda(&self) -> [C64; 2] {
        [self.kp1 * self.kp1, self.kp2 * self.kp2]
    }

    fn br(&self, p: C64) -> C64 {
        (p - ONE / p) / self.qdiff()
    }

    pub fn bracket_lambda(&self) -> [C64; 2] {
        let l = self.qlambda();
        [self.br(l[0]), self.br(l[1])]
    }

    pub fn bracket_mu(&self) -> [C64; 2] {
        let m = self.qmu();
        [self.br(m[0]), self.br(m[1])]
    }

    /// `λᵢ = 2 ln(kpᵢ)/ln q` on principal branches.
    pub fn lambda_exponents(&self) -> [C64; 2] {
        let lq = self.q.ln();
        [2.0 * self.kp1.ln() / lq, 2.0 * self.kp2.ln() / lq]
    }

    pub fn shortening_residual(&self) -> f64 {
        let [l1, l2] = self.bracket_lambda();
        let [m1, m2] = self.bracket_mu();
        (l1 * l2 - self.alpha1 * self.alpha2 * m1 * m2).norm()
    }

    /// Residuals of `γ² = α₁[μ₁]/[λ₂]` and `γ² = [λ₁]/(α₂[μ₂])`.
    pub fn gaga_residual(&self) -> [f64; 2] {
        let [l1, l2] = self.bracket_lambda();
        let [m1, m2] = self.bracket_mu();
        let g2 = self.gamma * self.gamma;
        [(g2 - self.alpha1 * m1 / l2).norm(), (g2 - l1 / (self.alpha2 * m2)).norm()]
    }
}

/// Solves `[λ₁]_q[λ₂]_q = α₁α₂[μ₁]_q[μ₂]_q` for `y = q^{λ₂}` given `q^{λ₁/2}`.
pub fn shortening_roots(kp1: C64, nu: C64, alpha: [C64; 2]) -> Result<(Vec<C64>, bool)> {
    let a = kp1 * kp1;
    let aa = alpha[0] * alpha[1];
    let qa = (a - ONE / a) - aa * a;
    let qb = aa * (nu.powi(4) + nu.powi(-4));
    let qc = -(a - ONE / a) - aa / a;
    let scale = qa.norm().max(qb.norm()).max(qc.norm());
    if qa.norm() <= 1e-14 * scale {
        if qb.norm() <= 1e-14 * scale {
            return Err(Error::Degenerate("shortening constraint has no finite root".into()));
        }
        return Ok((vec![-qc / qb], false));
    }
    let disc = (qb * qb - 4.0 * qa * qc).sqrt();
    // stable pairing avoids cancellation
    let s = if (qb.conj() * disc).re >= 0.0 { ONE } else { -ONE };
    let t = -(qb + s * disc) / 2.0;
    let (y0, y1) = if t.norm() == 0.0 { (ZERO, ZERO) } else { (t / qa, qc / t) };
    let collision = disc.norm() <= 1e-10 * scale.sqrt() * (1.0 + qb.norm()).sqrt();
    let roots = vec![y0, y1];
    if roots.iter().any(|y| *y == ZERO || !y.is_finite()) {
        return Err(Error::Degenerate("shortening constraint has no finite root".into()));
    }
    Ok((roots, collision))
}

/// Labels on the q-shortening locus. `root` picks `q^{λ₂}`; the signs pick `q^{λ₂/2}` and `γ`.
pub fn q_labels(lambda1: C64, nu: C64, q: C64, alpha: [C64; 2], root: usize, kp2_sign: i8, gamma_sign: i8) -> Result<QRepLabels> {
    check_q(q)?;
    let kp1 = (lambda1 / 2.0 * q.ln()).exp();
    q_labels_from_kp1(kp1, nu, q, alpha, root, kp2_sign, gamma_sign)
}

pub fn q_labels_from_kp1(kp1: C64, nu: C64, q: C64, alpha: [C64; 2], root: usize, kp2_sign: i8, gamma_sign: i8) -> Result<QRepLabels> {
    let (roots, collision) = shortening_roots(kp1, nu, alpha)?;
    let y = *roots.get(root).ok_or_else(|| Error::Invalid(format!("root index {root} out of range")))?;
    let kp2 = y.sqrt() * f64::from(kp2_sign.signum());
    let mut l = QRepLabels::new(ONE, nu, q, kp1, kp2, alpha)?;
    let [bl1, _] = l.bracket_lambda();
    let [_, bm2] = l.bracket_mu();
    if bm2 == ZERO {
        return Err(Error::Degenerate("[mu2]_q vanishes".into()));
    }
    l.gamma = (bl1 / (alpha[1] * bm2)).sqrt() * f64::from(gamma_sign.signum());
    if l.gamma == ZERO || !l.gamma.is_finite() {
        return Err(Error::Degenerate("gamma vanishes".into()));
    }
    l.branch = Some(QBranch { roots, root, kp2_sign: kp2_sign.signum(), gamma_sign: gamma_sign.signum(), collision });
    Ok(l)
}

/// Deformed labels tending to `labels` as `q → 1`.
///
/// Uses `α^q = ((q - q⁻¹)α₁, -(q - q⁻¹)α₂)` and `q^{λ₁/2}` from the undeformed `λ₁`;
/// the root and both signs are the ones nearest the undeformed values.
pub fn deform_labels(labels: &crate::halg::RepLabels, q: C64) -> Result<QRepLabels> {
    check_q(q)?;
    let qd = qdiff(q)?;
    let alpha = [qd * labels.alpha1, -qd * labels.alpha2];
    let lq = q.ln();
    let kp1 = (labels.lambda1() / 2.0 * lq).exp();
    let target = (labels.lambda2() * lq).exp();
    let (roots, _) = shortening_roots(kp1, labels.nu, alpha)?;
    let root = if roots.len() > 1 && (roots[1] - target).norm() < (roots[0] - target).norm() { 1 } else { 0 };
    let half = (labels.lambda2() / 2.0 * lq).exp();
    let kp2 = roots[root].sqrt();
    let kp2_sign = if (kp2 - half).norm() <= (kp2 + half).norm() { 1 } else { -1 };
    let l = q_labels_from_kp1(kp1, labels.nu, q, alpha, root, kp2_sign, 1)?;
    if (l.gamma - labels.gamma).norm() > (l.gamma + labels.gamma).norm() {
        return q_labels_from_kp1(kp1, labels.nu, q, alpha, root, kp2_sign, -1);
    }
    Ok(l)
}

fn unit(space: &GradedSpace, i: usize, j: usize) -> SuperMatrix {
    SuperMatrix::unit(space, i, j)
}

fn set_central(rep: &mut GeneratorImage, l: &QRepLabels) {
    let id = SuperMatrix::identity(rep.space());
    let [m1, m2] = l.qmu();
    for (n, v) in [("K1", l.kp1), ("K2", l.kp2), ("L1", m1), ("L2", m2), ("U", l.nu)] {
        rep.set(&format!("{n}+"), id.scale(v));
        rep.set(&format!("{n}-"), id.scale(ONE / v));
    }
}

/// Two-dimensional module on `(w₁, w₀)`.
pub fn q_atypical_rep(l: &QRepLabels) -> GeneratorImage {
    let s = GradedSpace::atypical();
    let [m1, m2] = l.bracket_mu();
    let (e21, e12) = (unit(&s, 2, 1), unit(&s, 1, 2));
    let q = l.q;
    let mut rep = GeneratorImage::new(s.clone(), Some(l.alpha()), Some(q));
    rep.set("E1", e21.scale(l.gamma));
    rep.set("E2", e21.scale(ONE / l.gamma));
    rep.set("F1", e12.scale(l.alpha2 * l.gamma * m2));
    rep.set("F2", e12.scale(l.alpha1 / l.gamma * m1));
    rep.set("K0+", SuperMatrix::diag(&s, &[q.powi(-2), q.powi(-1)]).expect("2x2"));
    rep.set("K0-", SuperMatrix::diag(&s, &[q.powi(2), q]).expect("2x2"));
    set_central(&mut rep, l);
    rep
}

/// Kac module from q-powers `kpᵢ = q^{λᵢ/2}`.
pub fn q_typical_rep_pow(kp1: C64, kp2: C64, nu: C64, q: C64, alpha: [C64; 2]) -> Result<GeneratorImage> {
    let l = QRepLabels::new(ONE, nu, q, kp1, kp2, alpha)?;
    let s = GradedSpace::typical();
    let [bl1, bl2] = l.bracket_lambda();
    let [bm1, bm2] = l.bracket_mu();
    let (am1, am2) = (alpha[0] * bm1, alpha[1] * bm2);
    let mat = |entries: &[(usize, usize, C64)]| {
        let mut m = CMat::zeros(4, 4);
        for &(i, j, v) in entries {
            m[(i, j)] = v;
        }
        SuperMatrix::square(&s, m).expect("4x4")
    };
    let mut rep = GeneratorImage::new(s.clone(), Some(alpha), Some(q));
    rep.set("F1", mat(&[(1, 0, ONE), (3, 2, -ONE)]));
    rep.set("F2", mat(&[(2, 0, ONE), (3, 1, ONE)]));
    rep.set("E1", mat(&[(0, 1, bl1), (0, 2, am1), (1, 3, am1), (2, 3, -bl1)]));
    rep.set("E2", mat(&[(0, 1, am2), (0, 2, bl2), (1, 3, bl2), (2, 3, -am2)]));
    let qi = ONE / q;
    rep.set("K0+", SuperMatrix::diag(&s, &[ONE, qi, qi, qi * qi])?);
    rep.set("K0-", SuperMatrix::diag(&s, &[ONE, q, q, q * q])?);
    set_central(&mut rep, &l);
    Ok(rep)
}

/// Kac module from exponents `λᵢ` (principal logarithm of `q`).
pub fn q_typical_rep(lambda1: C64, lambda2: C64, nu: C64, q: C64, alpha: [C64; 2]) -> Result<GeneratorImage> {
    check_q(q)?;
    let lq = q.ln();
    q_typical_rep_pow((lambda1 / 2.0 * lq).exp(), (lambda2 / 2.0 * lq).exp(), nu, q, alpha)
}

fn inv_name(n: &str) -> String {
    match n.strip_suffix('+') {
        Some(base) => format!("{base}-"),
        None => format!("{}+", n.trim_end_matches('-')),
    }
}

fn qbracket_of(rep: &GeneratorImage, a: &str, b: &str) -> Result<SuperMatrix> {
    graded_comm(rep.get(a)?, rep.get(b)?)
}

fn prod(rep: &GeneratorImage, word: &[&str]) -> Result<SuperMatrix> {
    let mut m = SuperMatrix::identity(rep.space());
    for w in word {
        m = &m * rep.get(w)?;
    }
    Ok(m)
}

/// Inverses, `K₀` conjugations, both bracket lines, trivial brackets, centrality and the ideal relations.
pub fn q_check_relations(rep: &GeneratorImage) -> Result<ResidualReport> {
    let q = rep.q().ok_or_else(|| Error::Precondition("image carries no q".into()))?;
    let alpha = rep.alpha().ok_or_else(|| Error::Precondition("image carries no alpha".into()))?;
    let qd = qdiff(q)?;
    for g in Q_GENERATORS {
        rep.get(g)?;
    }
    let mut r = ResidualReport::new("q relations", 1e-12);
    let id = SuperMatrix::identity(rep.space());
    for n in ["K0", "K1", "K2", "L1", "L2", "U"] {
        let p = rep.get(&format!("{n}+"))? * rep.get(&format!("{n}-"))?;
        r.push(format!("{n}+{n}-=1"), (&p - &id).max_abs());
    }
    for i in 1..=2 {
        let e = rep.get(&format!("E{i}"))?;
        let f = rep.get(&format!("F{i}"))?;
        let ce = &(rep.get("K0+")? * e) * rep.get("K0-")?;
        r.push(format!("K0+E{i}K0-=qE{i}"), (&ce - &e.scale(q)).max_abs());
        let cf = &(rep.get("K0-")? * f) * rep.get("K0+")?;
        r.push(format!("K0-F{i}K0+=qF{i}"), (&cf - &f.scale(q)).max_abs());
    }
    for i in 1..=2 {
        for j in 1..=2 {
            let lhs = qbracket_of(rep, &format!("E{i}"), &format!("F{j}"))?;
            let rhs = if i == j {
                let kp = rep.get(&format!("K{i}+"))?;
                let km = rep.get(&format!("K{i}-"))?;
                (&(kp * kp) - &(km * km)).scale(ONE / qd)
            } else {
                (rep.get(&format!("L{i}+"))? - rep.get(&format!("L{i}-"))?).scale(alpha[i - 1] / qd)
            };
            r.push(format!("[E{i},F{j}]"), (&lhs - &rhs).max_abs());
        }
    }
    for (a, b) in [("E1", "E1"), ("E1", "E2"), ("E2", "E2"), ("F1", "F1"), ("F1", "F2"), ("F2", "F2")] {
        r.push(format!("[{a},{b}]=0"), qbracket_of(rep, a, b)?.max_abs());
    }
    for z in ["K1+", "K1-", "K2+", "K2-", "L1+", "L1-", "L2+", "L2-", "U+", "U-"] {
        let mut worst: f64 = 0.0;
        for g in Q_GENERATORS {
            worst = worst.max(qbracket_of(rep, z, g)?.max_abs());
        }
        r.push(format!("central {z}"), worst);
    }
    let ideal = [
        ("L1+", ["K1+", "K2+", "U+", "U+"]),
        ("L1-", ["K1-", "K2-", "U-", "U-"]),
        ("L2+", ["K1+", "K2+", "U-", "U-"]),
        ("L2-", ["K1-", "K2-", "U+", "U+"]),
    ];
    for (l, word) in ideal {
        r.push(format!("I0q {l}"), (rep.get(l)? - &prod(rep, &word)?).max_abs());
    }
    Ok(r)
}

/// Terms of the deformed coproduct; group-likes give `C⊗C`.
pub fn q_coproduct_terms(g: &str) -> Result<Vec<Term<&'static str>>> {
    let name: &'static str = Q_GENERATORS.iter().find(|n| **n == g).copied().ok_or_else(|| Error::UnknownGenerator(g.into()))?;
    let t = match name {
        "E1" => vec![Term::unit(vec!["E1"], vec!["U-", "K1-"]), Term::unit(vec!["U+", "K1+"], vec!["E1"])],
        "E2" => vec![Term::unit(vec!["E2"], vec!["U+", "K2-"]), Term::unit(vec!["U-", "K2+"], vec!["E2"])],
        "F1" => vec![Term::unit(vec!["F1"], vec!["U+", "K1-"]), Term::unit(vec!["U-", "K1+"], vec!["F1"])],
        "F2" => vec![Term::unit(vec!["F2"], vec!["U-", "K2-"]), Term::unit(vec!["U+", "K2+"], vec!["F2"])],
        c => vec![Term::unit(vec![c], vec![c])],
    };
    Ok(t)
}

fn lookup(rep: &GeneratorImage) -> impl Fn(&&'static str) -> Result<SuperMatrix> + '_ {
    move |n: &&'static str| rep.get(n).cloned()
}

pub fn q_coproduct_image(g: &str, rep_a: &GeneratorImage, rep_b: &GeneratorImage, opposite: bool) -> Result<SuperMatrix> {
    let terms = q_coproduct_terms(g)?;
    eval_terms(&terms, rep_a.space(), rep_b.space(), lookup(rep_a), lookup(rep_b), opposite)
}

pub fn q_tensor_rep(rep_a: &GeneratorImage, rep_b: &GeneratorImage) -> Result<GeneratorImage> {
    let mut out = GeneratorImage::new(rep_a.space().tensor(rep_b.space()), rep_a.alpha(), rep_a.q());
    for g in Q_GENERATORS {
        out.set(g, q_coproduct_image(g, rep_a, rep_b, false)?);
    }
    Ok(out)
}

pub fn q_coassoc_residual(g: &str, a: &GeneratorImage, b: &GeneratorImage, c: &GeneratorImage) -> Result<f64> {
    let terms = q_coproduct_terms(g)?;
    let ab = a.space().tensor(b.space());
    let bc = b.space().tensor(c.space());
    let left = eval_terms(&terms, &ab, c.space(), |n| q_coproduct_image(n, a, b, false), lookup(c), false)?;
    let right = eval_terms(&terms, a.space(), &bc, lookup(a), |n| q_coproduct_image(n, b, c, false), false)?;
    Ok(left.max_abs_diff(&right))
}

fn q_antipode_word(word: &[&'static str], rep: &GeneratorImage) -> Result<SuperMatrix> {
    let mut m = SuperMatrix::identity(rep.space());
    let mut odd_seen = 0u32;
    let mut sign = ONE;
    for n in word {
        let img = if generator_parity(n) == Parity::Odd {
            if odd_seen % 2 == 1 {
                sign = -sign;
            }
            odd_seen += 1;
            rep.get(n)?.scale(-ONE)
        } else {
            rep.get(&inv_name(n))?.clone()
        };
        m = &img * &m;
    }
    Ok(m.scale(sign))
}

/// `m∘(S⊗id)∘Δ(g)` and `m∘(id⊗S)∘Δ(g)` against `ε(g)·1`.
pub fn q_antipode_residual(g: &str, rep: &GeneratorImage) -> Result<f64> {
    let terms = q_coproduct_terms(g)?;
    let eps = if generator_parity(g) == Parity::Odd { ZERO } else { ONE };
    let target = SuperMatrix::scalar(rep.space(), eps);
    let ev = lookup(rep);
    let mut left = SuperMatrix::zeros(rep.space());
    let mut right = SuperMatrix::zeros(rep.space());
    for t in &terms {
        let l = &q_antipode_word(&t.left, rep)? * &eval_word(&t.right, rep.space(), &ev)?;
        let r = &eval_word(&t.left, rep.space(), &ev)? * &q_antipode_word(&t.right, rep)?;
        left = &left + &l.scale(t.coeff);
        right = &right + &r.scale(t.coeff);
    }
    Ok(left.max_abs_diff(&target).max(right.max_abs_diff(&target)))
}

#[derive(Clone, Debug)]
pub struct QFuseResult {
    pub report: ResidualReport,
    /// `q^{λ̃ᵢ/2}`
    pub kp1: C64,
    pub kp2: C64,
    pub nu: C64,
    pub basis: CMat,
    pub determinant: C64,
}

/// `A_q⊗A_q′ ≅ K_q(λ̃₁, λ̃₂, ν̃)` with `q^{λ̃ᵢ/2} = kpᵢkpᵢ′` and `ν̃ = νν′`.
pub fn q_fuse_check(la: &QRepLabels, lb: &QRepLabels) -> Result<QFuseResult> {
    if (la.q - lb.q).norm() > 1e-14 * la.q.norm() {
        return Err(Error::Precondition("both factors must share q".into()));
    }
    let (kp1, kp2, nu) = (la.kp1 * lb.kp1, la.kp2 * lb.kp2, la.nu * lb.nu);
    let typ = q_typical_rep_pow(kp1, kp2, nu, la.q, la.alpha())?;
    let fused = QRepLabels::new(ONE, nu, la.q, kp1, kp2, la.alpha())?;
    if fused.shortening_residual() < 1e-10 * (1.0 + fused.bracket_lambda()[0].norm() * fused.bracket_lambda()[1].norm()) {
        return Err(Error::Degenerate("fused weights lie on the q-atypical locus".into()));
    }
    let tensor = q_tensor_rep(&q_atypical_rep(la), &q_atypical_rep(lb))?;
    let v0 = vec![ZERO, ZERO, ZERO, ONE];
    let v1 = tensor.get("F1")?.apply(&v0);
    let v2 = tensor.get("F2")?.apply(&v0);
    let v21 = tensor.get("F2")?.apply(&v1);
    let basis = CMat::from_columns(&[v0.clone(), v1, v2, v21.clone()].map(nalgebra::DVector::from_vec));
    let det = basis.determinant();
    let inv = basis.clone().try_inverse().ok_or_else(|| Error::Degenerate("fusion basis is singular".into()))?;
    let mut r = ResidualReport::new("q fuse", 1e-10);
    for (name, want) in [("K1+", kp1), ("K2+", kp2), ("L1+", fused.qmu()[0]), ("L2+", fused.qmu()[1])] {
        let got = tensor.get(name)?.apply(&v0);
        let res = got.iter().zip(&v0).fold(0.0_f64, |acc, (x, y)| acc.max((x - want * y).norm()));
        r.push(format!("weight {name}"), res);
    }
    let [bl1, bl2] = fused.bracket_lambda();
    let [bm1, bm2] = fused.bracket_mu();
    let coeff = |e: &str| -> Result<Vec<C64>> {
        let w = tensor.get(e)?.apply(&v21);
        Ok((&inv * nalgebra::DVector::from_vec(w)).iter().copied().collect())
    };
    let c1 = coeff("E1")?;
    let c2 = coeff("E2")?;
    r.push("E1.v21 coefficient of v1", (c1[1] - la.alpha1 * bm1).norm());
    r.push("E1.v21 coefficient of v2", (c1[2] + bl1).norm());
    r.push("E2.v21 coefficient of v1", (c2[1] - bl2).norm());
    r.push("E2.v21 coefficient of v2", (c2[2] + la.alpha2 * bm2).norm());
    let q = la.q;
    for g in Q_GENERATORS {
        let m = &inv * tensor.get(g)?.data() * &basis;
        let target = match g {
            "K0+" => typ.get(g)?.scale(q.powi(-2)),
            "K0-" => typ.get(g)?.scale(q.powi(2)),
            _ => typ.get(g)?.clone(),
        };
        r.push(format!("basis {g}"), max_abs_diff(&m, target.data()));
    }
    Ok(QFuseResult { report: r, kp1, kp2, nu, basis, determinant: det })
}

/// `q^{λ̃ᵢ} - 1`, `q^{μ̃ᵢ} - 1`, `ν̃ - 1`.
pub fn q_singlet_defects(la: &QRepLabels, lb: &QRepLabels) -> [(&'static str, C64); 5] {
    let (ma, mb) = (la.qmu(), lb.qmu());
    [
        ("q^lambda1~ - 1", (la.kp1 * lb.kp1).powi(2) - ONE),
        ("q^lambda2~ - 1", (la.kp2 * lb.kp2).powi(2) - ONE),
        ("q^mu1~ - 1", ma[0] * mb[0] - ONE),
        ("q^mu2~ - 1", ma[1] * mb[1] - ONE),
        ("nu nu' - 1", la.nu * lb.nu - ONE),
    ]
}

/// `𝟙_q = γ w₁⊗w₀′ + q^{-λ̃₂/2} γ′νν′ w₀⊗w₁′`.
pub fn q_singlet_vector(la: &QRepLabels, lb: &QRepLabels) -> Result<Vec<C64>> {
    itemize(&q_singlet_defects(la, lb), 1e-9)?;
    let t = lb.gamma * la.nu * lb.nu / (la.kp2 * lb.kp2);
    Ok(vec![ZERO, la.gamma, t, ZERO])
}

pub fn q_singlet_check(la: &QRepLabels, lb: &QRepLabels) -> Result<ResidualReport> {
    let v = q_singlet_vector(la, lb)?;
    let tensor = q_tensor_rep(&q_atypical_rep(la), &q_atypical_rep(lb))?;
    let mut r = ResidualReport::new("q singlet", 1e-11);
    for g in ["E1", "E2", "F1", "F2"] {
        r.push(format!("{g}.1=0"), vec_max_abs(&tensor.get(g)?.apply(&v)));
    }
    for g in ["U+", "U-"] {
        let w = tensor.get(g)?.apply(&v);
        r.push(format!("{g}.1=1"), w.iter().zip(&v).fold(0.0_f64, |acc, (x, y)| acc.max((x - y).norm())));
    }
    let (_, res) = eigen_residual(&tensor.get("K0+")?.apply(&v), &v);
    r.push("K0+.1 in C1", res);
    Ok(r)
}

/// Klein-four twists of U_q(𝔞), with the `α` swaps of each row.
pub fn q_klein_twist(twist: KleinTwist, rep: &GeneratorImage) -> Result<GeneratorImage> {
    let swap = |n: &str| if n.contains('1') { n.replace('1', "2") } else { n.replace('2', "1") };
    let mut out = GeneratorImage::new(rep.space().clone(), None, rep.q());
    for g in Q_GENERATORS {
        let head = &g[..1];
        let src = match (twist, head) {
            (KleinTwist::Row1, "E") => g.replacen('E', "F", 1),
            (KleinTwist::Row1, "F") => g.replacen('F', "E", 1),
            (KleinTwist::Row1, "L") => swap(g),
            (KleinTwist::Row2, "E") => swap(&g.replacen('E', "F", 1)),
            (KleinTwist::Row2, "F") => swap(&g.replacen('F', "E", 1)),
            (KleinTwist::Row2, "K") if g.starts_with("K0") => g.to_string(),
            (KleinTwist::Row2, "K") => swap(g),
            (KleinTwist::Row3, "E" | "F" | "L") => swap(g),
            (KleinTwist::Row3, "K") if !g.starts_with("K0") => swap(g),
            _ => g.to_string(),
        };
        let src = match (twist, head) {
            (KleinTwist::Row1 | KleinTwist::Row2, "K") if g.starts_with("K0") => inv_name(&src),
            (KleinTwist::Row1 | KleinTwist::Row3, "U") => inv_name(&src),
            _ => src,
        };
        out.set(g, rep.get(&src)?.clone());
    }
    let alpha = rep.alpha().map(|[a1, a2]| match twist {
        KleinTwist::Row2 => [a1, a2],
        _ => [a2, a1],
    });
    Ok(out.with_alpha(alpha))
}
