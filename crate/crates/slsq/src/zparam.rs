//! Zhukovski parametrizations of atypical modules and the magnon dispersion.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::graded::{CMat, SuperMatrix, C64, I, ONE, ZERO};
use crate::halg::{atypical_rep, barred, GeneratorImage, RepLabels};
use crate::qalg::{check_q, q_atypical_rep, QRepLabels};
use crate::report::ResidualReport;

const PACK_TOL: f64 = 1e-10;

/// Root of the mass-shell quadratic to return.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZBranch {
    /// `|x⁺| ≥ 1`, ties broken by the larger real part.
    #[default]
    Outer,
    Inner,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZhukovskiPoint {
    pub xplus: C64,
    pub xminus: C64,
    pub p: C64,
    #[serde(rename = "M")]
    pub m: C64,
    pub h: C64,
}

impl ZhukovskiPoint {
    /// Residuals of `x⁺/x⁻ = e^{ip}` and `x⁺ + 1/x⁺ - x⁻ - 1/x⁻ = iM/h`.
    pub fn mass_shell_residual(&self) -> [f64; 2] {
        let (xp, xm) = (self.xplus, self.xminus);
        [(xp / xm - (I * self.p).exp()).norm(), (xp + ONE / xp - xm - ONE / xm - I * self.m / self.h).norm()]
    }
}

/// Solves the mass-shell conditions with `x⁻ = x⁺e^{-ip}`.
pub fn zhukovski_solve(p: C64, m: C64, h: C64, branch: ZBranch) -> Result<ZhukovskiPoint> {
    if h.norm() == 0.0 {
        return Err(Error::Precondition("h must be nonzero".into()));
    }
    let e = (I * p).exp();
    let a = ONE - ONE / e;
    if a.norm() < 1e-14 {
        return Err(Error::Degenerate("e^{ip} = 1 makes the mass-shell quadratic degenerate".into()));
    }
    let b = -I * m / h;
    let cc = ONE - e;
    let disc = (b * b - 4.0 * a * cc).sqrt();
    let r1 = if (-b + disc).norm() >= (-b - disc).norm() { (-b + disc) / (2.0 * a) } else { (-b - disc) / (2.0 * a) };
    let r2 = cc / (a * r1);
    let tol = 1e-12 * (1.0 + r1.norm());
    let key = |x: C64| (x.norm(), x.re);
    let (k1, k2) = (key(r1), key(r2));
    let outer_first = if (k1.0 - k2.0).abs() > tol {
        k1.0 > k2.0
    } else if (k1.1 - k2.1).abs() > tol {
        k1.1 > k2.1
    } else {
        return Err(Error::Tie(format!("roots {r1} and {r2} have equal modulus and real part")));
    };
    let (outer, inner) = if outer_first { (r1, r2) } else { (r2, r1) };
    let xplus = match branch {
        ZBranch::Outer => outer,
        ZBranch::Inner => inner,
    };
    Ok(ZhukovskiPoint { xplus, xminus: xplus / e, p, m, h })
}

/// Root of the real slice with `Im x⁺ > 0`, where `η` is real and `a* = b`, `c* = d`.
pub fn unitary_point(p: f64, m: f64, h: f64) -> Result<ZhukovskiPoint> {
    let re = |x: f64| C64::new(x, 0.0);
    let zp = zhukovski_solve(re(p), re(m), re(h), ZBranch::Outer)?;
    if zp.xplus.im > 0.0 {
        Ok(zp)
    } else {
        zhukovski_solve(re(p), re(m), re(h), ZBranch::Inner)
    }
}

/// Square-root choices: signs of `η` and `γ`, and `ν (σ)` as principal fourth root times `iᵏ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SqrtBranches {
    pub eta: i8,
    pub nu: u8,
    pub sigma: u8,
    pub gamma: i8,
}

impl Default for SqrtBranches {
    fn default() -> Self {
        Self { eta: 1, nu: 0, sigma: 0, gamma: 1 }
    }
}

impl SqrtBranches {
    fn sign(s: i8) -> f64 {
        if s < 0 {
            -1.0
        } else {
            1.0
        }
    }

    fn fourth_root(x: C64, k: u8) -> C64 {
        x.powf(0.25) * I.powi(k as i32 % 4)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientPack {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Moving {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MagnonLabels {
    pub moving: Moving,
    pub labels: RepLabels,
    pub pack: CoefficientPack,
}

fn eta_nu(zp: &ZhukovskiPoint, br: SqrtBranches) -> Result<(C64, C64)> {
    if (zp.xplus - zp.xminus).norm() < 1e-14 * zp.xplus.norm() {
        return Err(Error::Degenerate("x+ = x- gives eta = 0".into()));
    }
    let eta = (I * (zp.xminus - zp.xplus)).sqrt() * SqrtBranches::sign(br.eta);
    Ok((eta, SqrtBranches::fourth_root(zp.xplus / zp.xminus, br.nu)))
}

/// `a = √h ην`, `b = √h η/ν`, `c = -√-h ην/x⁺`, `d = √-h η/(x⁻ν)` with `√-h = i√h`.
fn pack_of(zp: &ZhukovskiPoint, eta: C64, nu: C64) -> CoefficientPack {
    let sh = zp.h.sqrt();
    let smh = I * sh;
    CoefficientPack { a: sh * eta * nu, b: sh * eta / nu, c: -smh * eta * nu / zp.xplus, d: smh * eta / (zp.xminus * nu) }
}

/// Left-moving labels: `α₁ = -α₂ = -h`, `ν⁴ = x⁺/x⁻`, `γ² = a/d`.
pub fn left_labels(zp: &ZhukovskiPoint, br: SqrtBranches) -> Result<MagnonLabels> {
    let (eta, nu) = eta_nu(zp, br)?;
    let pack = pack_of(zp, eta, nu);
    let gamma = (pack.a / pack.d).sqrt() * SqrtBranches::sign(br.gamma);
    let labels = RepLabels::new(gamma, nu, -zp.h, zp.h)?;
    Ok(MagnonLabels { moving: Moving::Left, labels, pack })
}

/// Right-moving labels: the same pack with `γ̄² = c̄/b̄`.
pub fn right_labels(zp: &ZhukovskiPoint, br: SqrtBranches) -> Result<MagnonLabels> {
    let (eta, nu) = eta_nu(zp, br)?;
    let pack = pack_of(zp, eta, nu);
    let gamma = (pack.c / pack.b).sqrt() * SqrtBranches::sign(br.gamma);
    let labels = RepLabels::new(gamma, nu, -zp.h, zp.h)?;
    Ok(MagnonLabels { moving: Moving::Right, labels, pack })
}

/// Product identities of the pack against the labels and the closed `x±` forms.
pub fn parametrization_report(zp: &ZhukovskiPoint, ml: &MagnonLabels) -> ResidualReport {
    let CoefficientPack { a, b, c, d } = ml.pack;
    let l = &ml.labels;
    let (xp, xm, h) = (zp.xplus, zp.xminus, zp.h);
    let nu2 = l.nu * l.nu;
    let g2 = l.gamma * l.gamma;
    let mut r = ResidualReport::new("parametrization", PACK_TOL);
    let [m1, m2] = zp.mass_shell_residual();
    r.push("x+/x-=e^ip", m1);
    r.push("mass shell", m2);
    r.push("ac=mu1", (a * c - l.mu1()).norm());
    r.push("bd=mu2", (b * d - l.mu2()).norm());
    r.push("mu1=h nu^2(x-/x+ - 1)", (l.mu1() - h * nu2 * (xm / xp - ONE)).norm());
    r.push("mu2=h nu^-2(x+/x- - 1)", (l.mu2() - h / nu2 * (xp / xm - ONE)).norm());
    match ml.moving {
        Moving::Left => {
            r.push("ab=lambda1", (a * b - l.lambda1()).norm());
            r.push("cd=lambda2", (c * d - l.lambda2()).norm());
            r.push("gamma^2=a/d", (g2 - a / d).norm());
            r.push("gamma^2=-i nu^2 x-", (g2 + I * nu2 * xm).norm());
            r.push("lambda1=ih(x- - x+)", (l.lambda1() - I * h * (xm - xp)).norm());
            r.push("lambda2=ih(1/x+ - 1/x-)", (l.lambda2() - I * h * (ONE / xp - ONE / xm)).norm());
        }
        Moving::Right => {
            r.push("cd=lambda1", (c * d - l.lambda1()).norm());
            r.push("ab=lambda2", (a * b - l.lambda2()).norm());
            r.push("gamma^2=c/b", (g2 - c / b).norm());
            r.push("gamma^2=-i nu^2/x+", (g2 + I * nu2 / xp).norm());
            r.push("lambda1=ih(1/x+ - 1/x-)", (l.lambda1() - I * h * (ONE / xp - ONE / xm)).norm());
            r.push("lambda2=ih(x- - x+)", (l.lambda2() - I * h * (xm - xp)).norm());
        }
    }
    r.push("shortening", l.shortening_residual());
    r
}

fn lower(v: C64) -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, ZERO, v, ZERO])
}

fn upper(v: C64) -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, v, ZERO, ZERO])
}

fn action_residual(rep: &GeneratorImage, t: CMat, expected: [(&str, CMat); 4]) -> Result<f64> {
    let tinv = t.clone().try_inverse().ok_or_else(|| Error::Singular("magnon basis".into()))?;
    let mut worst: f64 = 0.0;
    for (g, m) in expected {
        let x: &SuperMatrix = rep.get(g)?;
        worst = worst.max((&tinv * x.data() * &t - m).camax());
    }
    Ok(worst)
}

/// Action on the magnon basis `(φ, ψ)` (left) or `(φ̄, ψ̄)` (right, on the barred module).
pub fn magnon_action_residual(ml: &MagnonLabels) -> Result<f64> {
    let CoefficientPack { a, b, c, d } = ml.pack;
    let g = ml.labels.gamma;
    let rep = atypical_rep(&ml.labels);
    match ml.moving {
        Moving::Left => action_residual(
            &rep,
            CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![g * d, ONE])),
            [("e1", lower(a)), ("f1", upper(b)), ("f2", upper(c)), ("e2", lower(d))],
        ),
        Moving::Right => action_residual(
            &barred(&rep)?,
            CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![ONE, g * b])),
            [("e1", upper(c)), ("e2", upper(b)), ("f1", lower(d)), ("f2", lower(a))],
        ),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QZhukovskiPoint {
    pub xplus: C64,
    pub xminus: C64,
    pub xi: C64,
    pub delta: C64,
    pub q: C64,
    pub h: C64,
}

impl QZhukovskiPoint {
    pub fn zeta(&self, x: C64) -> C64 {
        let xi = self.xi;
        -(x + ONE / x + xi + ONE / xi) / (xi - ONE / xi)
    }

    fn qdelta(&self) -> C64 {
        (self.delta * self.q.ln()).exp()
    }

    /// Residuals of `q^{-δ}ζ(x⁺) = q^{δ}ζ(x⁻)` and `h² = ξ²/(ξ² - 1)`.
    pub fn residuals(&self) -> [f64; 2] {
        let qd = self.qdelta();
        let x2 = self.xi * self.xi;
        [(self.zeta(self.xplus) / qd - qd * self.zeta(self.xminus)).norm(), (self.h * self.h - x2 / (x2 - ONE)).norm()]
    }
}

/// Fixes `x⁻` from `x⁺` through the ζ condition.
///
/// `x⁻ + 1/x⁻` is determined in closed form; the root nearest `hint` (default `x⁺`) is taken.
/// `h_sign` picks the sign of `h` relative to the principal square root.
pub fn q_zhukovski(xplus: C64, xi: C64, delta: C64, q: C64, h_sign: i8, hint: Option<C64>) -> Result<QZhukovskiPoint> {
    check_q(q)?;
    let x2 = xi * xi;
    if xplus.norm() == 0.0 || (x2 - ONE).norm() < 1e-14 || xi.norm() == 0.0 {
        return Err(Error::Precondition("need x+ != 0 and xi^2 != 0, 1".into()));
    }
    let h = (x2 / (x2 - ONE)).sqrt() * SqrtBranches::sign(h_sign);
    let mut pt = QZhukovskiPoint { xplus, xminus: ONE, xi, delta, q, h };
    let qd = pt.qdelta();
    let z = pt.zeta(xplus) / (qd * qd);
    let s = -z * (xi - ONE / xi) - xi - ONE / xi;
    let disc = (s * s - 4.0).sqrt();
    let roots = [(s + disc) / 2.0, (s - disc) / 2.0];
    let target = hint.unwrap_or(xplus);
    pt.xminus = if (roots[0] - target).norm() <= (roots[1] - target).norm() { roots[0] } else { roots[1] };
    // one Newton step on x + 1/x = s to clean up the small root
    let x = pt.xminus;
    pt.xminus = x - (x + ONE / x - s) / (ONE - ONE / (x * x));
    Ok(pt)
}

/// Deformed point on the path tending to `zp` as `q → 1`.
///
/// The deformed coupling is `h_q = -(q - q⁻¹)h`, `ξ` is the root of `ξ² = h_q²/(h_q² - 1)` nearest `ih_q`,
/// and `x⁻` is the ζ root nearest the undeformed `x⁻`.
pub fn q_point_near(zp: &ZhukovskiPoint, q: C64, delta: C64) -> Result<QZhukovskiPoint> {
    check_q(q)?;
    let hq = -(q - ONE / q) * zp.h;
    let mut xi = (hq * hq / (hq * hq - ONE)).sqrt();
    if (xi - I * hq).norm() > (xi + I * hq).norm() {
        xi = -xi;
    }
    let x2 = xi * xi;
    let principal = (x2 / (x2 - ONE)).sqrt();
    let h_sign = if (principal - hq).norm() <= (principal + hq).norm() { 1 } else { -1 };
    q_zhukovski(zp.xplus, xi, delta, q, h_sign, Some(zp.xminus))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QMagnonLabels {
    pub labels: QRepLabels,
    pub pack: CoefficientPack,
    pub sigma: C64,
}

/// Labels of the left-moving deformed module, `α₁ = α₂ = h`.
pub fn q_labels_from_x(pt: &QZhukovskiPoint, br: SqrtBranches) -> Result<QMagnonLabels> {
    check_q(pt.q)?;
    let [zr, hr] = pt.residuals();
    let scale = 1.0 + pt.zeta(pt.xplus).norm();
    if zr > 1e-9 * scale || hr > 1e-9 * (1.0 + pt.h.norm_sqr()) {
        return Err(Error::Precondition(format!("zeta residual {zr:.2e}, h residual {hr:.2e}")));
    }
    let (xp, xm, xi, q, h) = (pt.xplus, pt.xminus, pt.xi, pt.q, pt.h);
    if (xp - xm).norm() < 1e-14 * xp.norm() {
        return Err(Error::Degenerate("x+ = x- gives eta = 0".into()));
    }
    let lq = q.ln();
    let qd = (pt.delta * lq).exp();
    let nu4 = [qd * xp / xm * (xi * xm + ONE) / (xi * xp + ONE), (xp + xi) / ((xm + xi) * qd)];
    let s4 = [qd * xp / xm * (xm + xi) / (xp + xi), (xi * xp + ONE) / ((xi * xm + ONE) * qd)];
    for (name, v) in [("nu^4", nu4), ("sigma^4", s4)] {
        let gap = (v[0] - v[1]).norm();
        if gap > 1e-10 * (1.0 + v[0].norm()) {
            return Err(Error::BranchInconsistency(format!("the two expressions for {name} differ by {gap:.3e}")));
        }
    }
    let nu = SqrtBranches::fourth_root(nu4[0], br.nu);
    let sigma = SqrtBranches::fourth_root(s4[0], br.sigma);
    let eta = (I * (xm - xp)).sqrt() * SqrtBranches::sign(br.eta);
    let sh = h.sqrt();
    let qq = q - ONE / q;
    let qh = (pt.delta / 2.0 * lq).exp();
    let pack = CoefficientPack {
        a: sh * eta * nu * sigma,
        b: I * sh * qh * xi * eta * sigma / (h * nu * qq * (xi * xp + ONE)),
        c: I * sh * eta * nu * sigma / (qq * xp),
        d: sh * xi * eta * sigma / (qh * h * nu * (xm + xi)),
    };
    let gamma = (pack.a / pack.d).sqrt() * SqrtBranches::sign(br.gamma);
    let q4 = (pt.delta / 4.0 * lq).exp();
    let labels = QRepLabels::new(gamma, nu, q, sigma * q4, sigma / q4, [h, h])?;
    Ok(QMagnonLabels { labels, pack, sigma })
}

/// Four products of the pack, the shortening identity and the `x±` consistency lines.
pub fn q_parametrization_report(pt: &QZhukovskiPoint, ml: &QMagnonLabels) -> ResidualReport {
    let CoefficientPack { a, b, c, d } = ml.pack;
    let l = &ml.labels;
    let (q, h, s, nu) = (pt.q, pt.h, ml.sigma, l.nu);
    let qq = q - ONE / q;
    let lq = q.ln();
    let qh = (pt.delta / 2.0 * lq).exp();
    let (s2, n2) = (s * s, nu * nu);
    let mut r = ResidualReport::new("q parametrization", PACK_TOL);
    let [zr, hr] = pt.residuals();
    r.push("zeta", zr);
    r.push("h^2=xi^2/(xi^2-1)", hr);
    let cons = [
        ("ab", a * b, (qh * s2 - ONE / (qh * s2)) / qq, l.bracket_lambda()[0]),
        ("ac", a * c, h * (n2 * s2 - ONE / (n2 * s2)) / qq, l.alpha1 * l.bracket_mu()[0]),
        ("cd", c * d, (s2 / qh - qh / s2) / qq, l.bracket_lambda()[1]),
        ("bd", b * d, h * (s2 / n2 - n2 / s2) / qq, l.alpha2 * l.bracket_mu()[1]),
    ];
    for (name, prod, closed, label) in cons {
        r.push_with(format!("{name} closed form"), (prod - closed).norm(), json!({ "value": [prod.re, prod.im] }));
        r.push(format!("{name} labels"), (prod - label).norm());
    }
    let qdel = qh * qh;
    let short = h * h * (n2 * s2 - ONE / (n2 * s2)) * (s2 / n2 - n2 / s2) - (s2 - ONE / (qdel * s2)) * (s2 - qdel / s2);
    r.push("shortening", short.norm());
    r.push("label shortening", l.shortening_residual());
    r.push("gamma^2=a/d", (l.gamma * l.gamma - a / d).norm());
    r
}

/// Action of `E₁, F₁, F₂, E₂` on `(φ, ψ)`.
pub fn q_magnon_action_residual(ml: &QMagnonLabels) -> Result<f64> {
    let CoefficientPack { a, b, c, d } = ml.pack;
    let t = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![ml.labels.gamma * d, ONE]));
    action_residual(&q_atypical_rep(&ml.labels), t, [("E1", lower(a)), ("F1", upper(b)), ("F2", upper(c)), ("E2", lower(d))])
}

/// `cos(πx)` with exact zeros at half-integers.
fn cos_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    if r.abs() == 0.5 {
        0.0
    } else {
        (PI * r).cos()
    }
}

fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    if r == 0.0 || r.abs() == 1.0 {
        0.0
    } else {
        (PI * r).sin()
    }
}

/// `H = -4h sin(2Λ) sin(2θ)` and `M = 4ih cos(2Λ) sin(2θ)`.
pub fn dispersion(theta: f64, lambda: f64, h: f64) -> (f64, C64) {
    let s2t = sin_pi(2.0 * theta / PI);
    let energy = -4.0 * h * sin_pi(2.0 * lambda / PI) * s2t;
    let m = C64::new(0.0, 4.0 * h * cos_pi(2.0 * lambda / PI) * s2t);
    (energy, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::c;
    use crate::halg::check_relations;
    use crate::qalg::q_check_relations;

    #[test]
    fn massless_point() {
        let zp = zhukovski_solve(c(1.0, 0.0), ZERO, ONE, ZBranch::Outer).unwrap();
        assert!((zp.xplus - c(0.0, 0.5).exp()).norm() < 1e-14);
        assert!((zp.xminus - c(0.0, -0.5).exp()).norm() < 1e-14);
        assert!(matches!(zhukovski_solve(c(PI, 0.0), ZERO, ONE, ZBranch::Outer), Err(Error::Tie(_))));
        assert!(matches!(zhukovski_solve(ZERO, ONE, ONE, ZBranch::Outer), Err(Error::Degenerate(_))));
    }

    #[test]
    fn branches_and_reality() {
        let zp = unitary_point(1.0, 0.7, 1.3).unwrap();
        let inner = zhukovski_solve(c(1.0, 0.0), c(0.7, 0.0), c(1.3, 0.0), ZBranch::Inner).unwrap();
        assert!(zp.xplus.norm() >= 1.0 && inner.xplus.norm() <= 1.0);
        for pt in [zp, inner] {
            assert!(pt.mass_shell_residual().iter().all(|r| *r < 1e-12));
        }
        assert!((zp.xplus.conj() - zp.xminus).norm() < 1e-12);
        let ml = left_labels(&zp, SqrtBranches::default()).unwrap();
        let CoefficientPack { a, b, c: cc, d } = ml.pack;
        assert!((a.conj() - b).norm() < 1e-12 && (cc.conj() - d).norm() < 1e-12);
        assert!((ml.labels.nu.conj() - ONE / ml.labels.nu).norm() < 1e-12);
    }

    #[test]
    fn left_and_right_packs() {
        let zp = zhukovski_solve(c(0.8, 0.1), c(0.4, -0.2), c(0.9, 0.3), ZBranch::Outer).unwrap();
        for br in [SqrtBranches::default(), SqrtBranches { eta: -1, nu: 3, sigma: 0, gamma: -1 }] {
            for ml in [left_labels(&zp, br).unwrap(), right_labels(&zp, br).unwrap()] {
                let r = parametrization_report(&zp, &ml);
                assert!(r.passed, "{:?} {:?}", ml.moving, r.worst());
                assert!(magnon_action_residual(&ml).unwrap() < 1e-12);
                assert!(check_relations(&atypical_rep(&ml.labels)).unwrap().passed);
            }
        }
    }

    fn q_point() -> QZhukovskiPoint {
        q_zhukovski(c(1.7, 0.4), c(0.6, 0.1), c(0.3, 0.0), c(1.1, 0.05), 1, None).unwrap()
    }

    #[test]
    fn deformed_pack() {
        let pt = q_point();
        assert!(pt.residuals().iter().all(|r| *r < 1e-12));
        let ml = q_labels_from_x(&pt, SqrtBranches::default()).unwrap();
        let r = q_parametrization_report(&pt, &ml);
        assert!(r.passed, "{:?}", r.worst());
        assert!(q_magnon_action_residual(&ml).unwrap() < 1e-12);
        let rel = q_check_relations(&q_atypical_rep(&ml.labels)).unwrap().with_tolerance(1e-10);
        assert!(rel.passed, "{:?}", rel.worst());
    }

    #[test]
    fn inconsistent_point_rejected() {
        let mut pt = q_point();
        pt.xminus *= 1.01;
        assert!(q_labels_from_x(&pt, SqrtBranches::default()).is_err());
    }

    #[test]
    fn deformed_labels_approach_left_labels() {
        let zp = zhukovski_solve(c(0.9, 0.0), c(0.6, 0.0), c(0.8, 0.0), ZBranch::Outer).unwrap();
        let left = left_labels(&zp, SqrtBranches::default()).unwrap().labels;
        let delta = left.lambda1() - left.lambda2();
        for eps in [1e-3, 1e-4, 1e-5] {
            let q = c(1.0 + eps, 0.0);
            let pt = q_point_near(&zp, q, delta).unwrap();
            let l = q_labels_from_x(&pt, SqrtBranches::default()).unwrap().labels;
            let [l1, l2] = l.lambda_exponents();
            let qq = q - ONE / q;
            let gaps = [
                (pt.xminus - zp.xminus).norm(),
                (l.gamma - left.gamma).norm(),
                (l.nu - left.nu).norm(),
                (l1 - left.lambda1()).norm(),
                (l2 - left.lambda2()).norm(),
                (l.alpha1 / qq - left.alpha1).norm(),
                (-l.alpha2 / qq - left.alpha2).norm(),
            ];
            for g in gaps {
                assert!(g < 50.0 * eps, "eps {eps}: {gaps:?}");
            }
        }
    }

    #[test]
    fn dispersion_values() {
        let (_, m) = dispersion(0.3, PI / 4.0, 1.2);
        assert_eq!(m, ZERO);
        let (_, m) = dispersion(0.3, 3.0 * PI / 4.0, 1.2);
        assert_eq!(m, ZERO);
        assert_eq!(dispersion(0.0, 0.4, 1.0), (0.0, ZERO));
        for (t, l, h) in [(0.3, 0.2, 1.1), (1.2, -0.7, 0.4)] {
            let (e, m) = dispersion(t, l, h);
            let direct = -16.0 * h * h * (2.0 * t).sin().powi(2) * (4.0 * l).cos();
            assert!((e * e - m.norm_sqr() - direct).abs() < 1e-12);
        }
    }
}
