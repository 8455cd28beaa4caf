//! Quantum affine extension U_q(𝔞̂) in evaluation modules.
//!
//! Node exponents: `(1) = (3) = +1`, `(2) = (4) = -1`. Nodes 1, 2 are dressed with `U`,
//! nodes 3, 4 with `V`.

use std::fmt;
use std::str::FromStr;

use serde_json::json;

use crate::error::{Error, Result};
use crate::graded::{graded_comm, comm, GradedSpace, SuperMatrix, C64, ONE};
use crate::halg::GeneratorImage;
use crate::qalg::{check_q, q_atypical_rep, q_check_relations, QRepLabels};
use crate::report::ResidualReport;
use crate::rmatrix::rq_closed;
use crate::terms::{eval_terms, Term};

pub const AFFINE_GENERATORS: [&str; 22] = [
    "E1", "E2", "E3", "E4", "F1", "F2", "F3", "F4", "K0+", "K0-", "K1+", "K1-", "K2+", "K2-", "K3+", "K3-", "K4+", "K4-", "U+",
    "U-", "V+", "V-",
];

/// `(i)`: `+1` for nodes 1, 3 and `-1` for nodes 2, 4.
pub fn node_sign(i: usize) -> i32 {
    if i % 2 == 1 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AffineVariant {
    Standard,
    /// `E_{i+2} ∝ E_j`, `K±_{i+2} ↦ K∓_j`, `V± ↦ U∓`
    Swapped,
    /// `V± ↦ βU±` with `β² = 1`
    Beta(f64),
}

impl fmt::Display for AffineVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AffineVariant::Standard => f.write_str("standard"),
            AffineVariant::Swapped => f.write_str("swapped"),
            AffineVariant::Beta(b) => write!(f, "beta={b}"),
        }
    }
}

impl FromStr for AffineVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(AffineVariant::Standard),
            "swapped" => Ok(AffineVariant::Swapped),
            "beta" | "beta-sign" => Ok(AffineVariant::Beta(-1.0)),
            _ => Err(Error::UnknownOption(format!("affine variant {s}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct AffineRep {
    images: GeneratorImage,
    alpha: [C64; 4],
    rho: C64,
    q: C64,
    variant: AffineVariant,
}

impl AffineRep {
    pub fn images(&self) -> &GeneratorImage {
        &self.images
    }

    pub fn get(&self, g: &str) -> Result<&SuperMatrix> {
        self.images.get(g)
    }

    pub fn alpha(&self) -> [C64; 4] {
        self.alpha
    }

    /// Scalar action of `ρ = U²K₁⁺K₂⁻ - U⁻²K₁⁻K₂⁺` (times `β` in the sign variant).
    pub fn rho(&self) -> C64 {
        self.rho
    }

    pub fn q(&self) -> C64 {
        self.q
    }

    pub fn variant(&self) -> AffineVariant {
        self.variant
    }

    pub fn space(&self) -> &GradedSpace {
        self.images.space()
    }

    fn pow(&self, name: &str, n: i32) -> Result<SuperMatrix> {
        let base = if n >= 0 { format!("{name}+") } else { format!("{name}-") };
        let m = self.get(&base)?;
        let mut out = SuperMatrix::identity(self.space());
        for _ in 0..n.unsigned_abs() {
            out = &out * m;
        }
        Ok(out)
    }

    /// `L±ᵢ = U^{±2(i)}K±₁K±₂` for `i ≤ 2` and `V^{±2(i)}K±₃K±₄` for `i ≥ 3`.
    pub fn l(&self, i: usize, plus: bool) -> Result<SuperMatrix> {
        let (w, a, b) = if i <= 2 { ("U", 1, 2) } else { ("V", 3, 4) };
        let sgn = if plus { 1 } else { -1 };
        let pm = if plus { '+' } else { '-' };
        let k = self.get(&format!("K{a}{pm}"))? * self.get(&format!("K{b}{pm}"))?;
        Ok(&self.pow(w, 2 * node_sign(i) * sgn)? * &k)
    }

    /// `K± = K±₁K±₂K±₃K±₄`
    pub fn k_total(&self, plus: bool) -> Result<SuperMatrix> {
        let pm = if plus { '+' } else { '-' };
        let mut m = SuperMatrix::identity(self.space());
        for i in 1..=4 {
            m = &m * self.get(&format!("K{i}{pm}"))?;
        }
        Ok(m)
    }
}

/// `ρ = ν²kp₁/kp₂ - ν⁻²kp₂/kp₁`
pub fn rho_q(l: &QRepLabels) -> C64 {
    let n2 = l.nu * l.nu;
    n2 * l.kp1 / l.kp2 - l.kp2 / (l.kp1 * n2)
}

pub fn affine_eval_rep(l: &QRepLabels) -> Result<AffineRep> {
    alt_affinization(l, AffineVariant::Standard)
}

/// Evaluation images of the four-node algebra from the two-node module.
pub fn alt_affinization(l: &QRepLabels, variant: AffineVariant) -> Result<AffineRep> {
    check_q(l.q)?;
    let beta = match variant {
        AffineVariant::Beta(b) if (b * b - 1.0).abs() > 1e-15 => return Err(Error::Invalid(format!("beta^2 must be 1, got beta = {b}"))),
        AffineVariant::Beta(b) => b,
        _ => 1.0,
    };
    let base = q_atypical_rep(l);
    let mut rho = rho_q(l);
    if rho.norm() < 1e-14 {
        return Err(Error::Singular("rho vanishes".into()));
    }
    let qmu = l.qmu();
    let ld = [qmu[0] - ONE / qmu[0], qmu[1] - ONE / qmu[1]];
    let mut img = base.clone().with_alpha(Some(l.alpha()));
    let get = |n: &str| base.get(n).cloned();
    let alpha = match variant {
        AffineVariant::Swapped => {
            for (i, j) in [(1usize, 2usize), (2, 1)] {
                img.set(&format!("E{}", i + 2), get(&format!("E{j}"))?.scale(-ld[i - 1] / rho));
                img.set(&format!("F{}", i + 2), get(&format!("F{j}"))?.scale(rho / ld[i - 1]));
                img.set(&format!("K{}+", i + 2), get(&format!("K{j}-"))?);
                img.set(&format!("K{}-", i + 2), get(&format!("K{j}+"))?);
            }
            img.set("V+", get("U-")?);
            img.set("V-", get("U+")?);
            [l.alpha1, l.alpha2, l.alpha2, l.alpha1]
        }
        _ => {
            rho *= beta;
            for (i, j) in [(1usize, 2usize), (2, 1)] {
                img.set(&format!("E{}", i + 2), get(&format!("E{i}"))?.scale(-ld[j - 1] / rho));
                img.set(&format!("F{}", i + 2), get(&format!("F{i}"))?.scale(rho / ld[j - 1]));
                img.set(&format!("K{}+", i + 2), get(&format!("K{i}-"))?);
                img.set(&format!("K{}-", i + 2), get(&format!("K{i}+"))?);
            }
            img.set("V+", get("U+")?.scale(C64::new(beta, 0.0)));
            img.set("V-", get("U-")?.scale(C64::new(beta, 0.0)));
            [l.alpha1, l.alpha2, l.alpha1, l.alpha2]
        }
    };
    Ok(AffineRep { images: img, alpha, rho, q: l.q, variant })
}

fn anti(a: &SuperMatrix, b: &SuperMatrix) -> SuperMatrix {
    &(a * b) + &(b * a)
}

/// Relation lines of U_q(𝔞̂) for the variant the module was built with.
pub fn affine_relations_residual(rep: &AffineRep) -> Result<ResidualReport> {
    for g in AFFINE_GENERATORS {
        rep.get(g)?;
    }
    let q = rep.q;
    let qd = q - ONE / q;
    let id = SuperMatrix::identity(rep.space());
    let g = |n: String| rep.get(&n).cloned();
    let mut r = ResidualReport::new("affine relations", 1e-11);
    for n in ["K0", "K1", "K2", "K3", "K4", "U", "V"] {
        let p = g(format!("{n}+"))? * g(format!("{n}-"))?;
        r.push(format!("{n}+{n}-=1"), (&p - &id).max_abs());
    }
    for i in 1..=4 {
        let e = g(format!("E{i}"))?;
        let f = g(format!("F{i}"))?;
        let ce = &(rep.get("K0+")? * &e) * rep.get("K0-")?;
        r.push(format!("K0+E{i}K0-=qE{i}"), (&ce - &e.scale(q)).max_abs());
        let cf = &(rep.get("K0-")? * &f) * rep.get("K0+")?;
        r.push(format!("K0-F{i}K0+=qF{i}"), (&cf - &f.scale(q)).max_abs());
    }
    for block in [[1usize, 2usize], [3, 4]] {
        for i in block {
            for j in block {
                let lhs = graded_comm(&g(format!("E{i}"))?, &g(format!("F{j}"))?)?;
                let rhs = if i == j {
                    let kp = g(format!("K{i}+"))?;
                    let km = g(format!("K{i}-"))?;
                    (&(&kp * &kp) - &(&km * &km)).scale(ONE / qd)
                } else {
                    (&rep.l(i, true)? - &rep.l(i, false)?).scale(rep.alpha[i - 1] / qd)
                };
                r.push(format!("[E{i},F{j}]"), (&lhs - &rhs).max_abs());
            }
        }
        for (a, b) in [("E", "E"), ("F", "F")] {
            let mut worst: f64 = 0.0;
            for i in block {
                for j in block {
                    worst = worst.max(graded_comm(&g(format!("{a}{i}"))?, &g(format!("{b}{j}"))?)?.max_abs());
                }
            }
            r.push(format!("[{a},{b}]=0 nodes {}{}", block[0], block[1]), worst);
        }
    }
    let (kp, km) = (rep.k_total(true)?, rep.k_total(false)?);
    r.push("K+=1", (&kp - &id).max_abs());
    r.push("K-=1", (&km - &id).max_abs());
    let kdiff = (&kp - &km).scale(ONE / qd);
    let e = |i: usize| g(format!("E{i}"));
    let f = |i: usize| g(format!("F{i}"));
    let swapped = rep.variant == AffineVariant::Swapped;
    let serre_k = if swapped { comm(&anti(&e(3)?, &f(1)?), &anti(&e(4)?, &f(2)?)) } else { comm(&anti(&e(3)?, &f(2)?), &anti(&e(4)?, &f(1)?)) };
    r.push("Serre K", (&serre_k - &kdiff).max_abs());
    let (up, um, vp, vm) = (g("U+".into())?, g("U-".into())?, g("V+".into())?, g("V-".into())?);
    for (i, j) in [(1usize, 2usize), (2, 1)] {
        let (lhs, partner) = if swapped {
            (comm(&anti(&e(i)?, &f(j + 2)?), &anti(&e(i + 2)?, &f(i)?)), i + 2)
        } else {
            (comm(&anti(&e(i)?, &f(i + 2)?), &anti(&e(j + 2)?, &f(j)?)), j + 2)
        };
        let rhs = (&(&rep.l(i, true)? * &rep.l(partner, true)?) - &(&rep.l(i, false)? * &rep.l(partner, false)?)).scale(ONE / qd);
        r.push(format!("Serre L{i}"), (&lhs - &rhs).max_abs());
        let s = node_sign(i);
        let kk = |pm: char| -> Result<SuperMatrix> {
            let m = g(format!("K{i}{pm}"))? * g(format!("K{partner}{pm}"))?;
            if s > 0 {
                Ok(m)
            } else {
                m.inverse()
            }
        };
        let (lhs, rhs) = if swapped {
            let lhs = anti(&e(i)?, &f(i + 2)?);
            let rhs = &(&(&up * &vm) * &kk('+')?) - &(&(&um * &vp) * &kk('-')?);
            (lhs, rhs)
        } else {
            let lhs = anti(&e(i)?, &f(j + 2)?);
            let rhs = &(&(&up * &vp) * &kk('+')?) - &(&(&um * &vm) * &kk('-')?);
            (lhs, rhs)
        };
        r.push(format!("compatibility {i}"), (&lhs - &rhs.scale(rep.alpha[i - 1] / qd)).max_abs());
    }
    for i in 1..=2 {
        for pm in ['+', '-'] {
            let name = format!("L{i}{pm}");
            if let Ok(m) = rep.get(&name) {
                r.push(format!("KL {name}"), (m - &rep.l(i, pm == '+')?).max_abs());
            }
        }
    }
    if !swapped {
        let a1 = rep.alpha[0];
        let lhs = graded_comm(&e(1)?, &f(4)?)?;
        r.push("[E1,F4]=a1 rho/qd", (&lhs - &SuperMatrix::scalar(rep.space(), a1 * rep.rho / qd)).max_abs());
        let lhs = graded_comm(&e(3)?, &f(4)?)?;
        let rhs = (&rep.l(2, false)? - &rep.l(2, true)?).scale(a1 / qd);
        r.push("[E3,F4]=a1(L2- - L2+)/qd", (&lhs - &rhs).max_abs());
    }
    Ok(r)
}

/// Terms of the affine coproduct.
pub fn affine_coproduct_terms(g: &str) -> Result<Vec<Term<String>>> {
    let name = AFFINE_GENERATORS.iter().find(|n| **n == g).ok_or_else(|| Error::UnknownGenerator(g.into()))?;
    let head = &name[..1];
    if (head == "E" || head == "F") && name.len() == 2 {
        let i: usize = name[1..].parse().expect("node index");
        let s = node_sign(i);
        let w = if i <= 2 { "U" } else { "V" };
        let p = |t: i32| format!("{w}{}", if t > 0 { '+' } else { '-' });
        let (kp, km) = (format!("K{i}+"), format!("K{i}-"));
        let g = name.to_string();
        return Ok(if head == "E" {
            vec![Term::unit(vec![g.clone()], vec![p(-s), km]), Term::unit(vec![p(s), kp], vec![g])]
        } else {
            vec![Term::unit(vec![g.clone()], vec![p(s), km]), Term::unit(vec![p(-s), kp], vec![g])]
        });
    }
    Ok(vec![Term::unit(vec![name.to_string()], vec![name.to_string()])])
}

pub fn affine_coproduct_image(g: &str, a: &AffineRep, b: &AffineRep, opposite: bool) -> Result<SuperMatrix> {
    let terms = affine_coproduct_terms(g)?;
    eval_terms(&terms, a.space(), b.space(), |n| a.get(n).cloned(), |n| b.get(n).cloned(), opposite)
}

/// Tensor product images `Δ(g)` on `A⊗B`, for coassociativity and homomorphism checks.
pub fn affine_tensor(a: &AffineRep, b: &AffineRep) -> Result<AffineRep> {
    let mut img = GeneratorImage::new(a.space().tensor(b.space()), a.images.alpha(), Some(a.q));
    for g in AFFINE_GENERATORS {
        img.set(g, affine_coproduct_image(g, a, b, false)?);
    }
    let rho = a.rho * b.rho;
    Ok(AffineRep { images: img, alpha: a.alpha, rho, q: a.q, variant: a.variant })
}

pub fn affine_coassoc_residual(g: &str, a: &AffineRep, b: &AffineRep, c: &AffineRep) -> Result<f64> {
    let terms = affine_coproduct_terms(g)?;
    let ab = affine_tensor(a, b)?;
    let bc = affine_tensor(b, c)?;
    let left = eval_terms(&terms, ab.space(), c.space(), |n| ab.get(n).cloned(), |n| c.get(n).cloned(), false)?;
    let right = eval_terms(&terms, a.space(), bc.space(), |n| a.get(n).cloned(), |n| bc.get(n).cloned(), false)?;
    Ok(left.max_abs_diff(&right))
}

/// `Δ^op(g)·R_q = R_q·Δ(g)` for every affine generator.
pub fn affine_intertwine(la: &QRepLabels, lb: &QRepLabels, variant: AffineVariant) -> Result<ResidualReport> {
    let (a, b) = (alt_affinization(la, variant)?, alt_affinization(lb, variant)?);
    let r = rq_closed(la, lb)?.entries;
    let mut out = ResidualReport::new("affine intertwining", 1e-9);
    for g in AFFINE_GENERATORS {
        let dop = affine_coproduct_image(g, &a, &b, true)?;
        let d = affine_coproduct_image(g, &a, &b, false)?;
        out.push_with(format!("Dop({g})R=RD({g})"), (&(&dop * &r) - &(&r * &d)).max_abs(), json!({ "variant": variant.to_string() }));
    }
    Ok(out)
}

/// Nodes 3, 4 with `V±` as a copy of U_q(𝔞): relations of the two-node algebra.
pub fn upper_nodes_check(rep: &AffineRep) -> Result<ResidualReport> {
    let mut img = GeneratorImage::new(rep.space().clone(), Some([rep.alpha[2], rep.alpha[3]]), Some(rep.q));
    for (to, from) in [("E1", "E3"), ("E2", "E4"), ("F1", "F3"), ("F2", "F4"), ("K1+", "K3+"), ("K1-", "K3-"), ("K2+", "K4+"), ("K2-", "K4-")] {
        img.set(to, rep.get(from)?.clone());
    }
    for n in ["K0+", "K0-"] {
        img.set(n, rep.get(n)?.clone());
    }
    img.set("U+", rep.get("V+")?.clone());
    img.set("U-", rep.get("V-")?.clone());
    for (i, node) in [(1, 3), (2, 4)] {
        img.set(&format!("L{i}+"), rep.l(node, true)?);
        img.set(&format!("L{i}-"), rep.l(node, false)?);
    }
    Ok(ResidualReport { suite: "affine upper nodes".into(), ..q_check_relations(&img)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::c;
    use crate::qalg::{q_coproduct_image, q_labels};

    fn pair() -> (QRepLabels, QRepLabels) {
        let alpha = [c(0.5, 0.1), c(-0.3, 0.6)];
        let q = c(1.1, 0.2);
        (
            q_labels(c(0.4, 0.3), C64::from_polar(1.0, 0.9), q, alpha, 0, 1, 1).unwrap(),
            q_labels(c(-0.2, 0.5), C64::from_polar(0.9, -0.4), q, alpha, 1, 1, -1).unwrap(),
        )
    }

    const VARIANTS: [AffineVariant; 3] = [AffineVariant::Standard, AffineVariant::Swapped, AffineVariant::Beta(-1.0)];

    #[test]
    fn sign_table() {
        assert_eq!([1, 2, 3, 4].map(node_sign), [1, -1, 1, -1]);
    }

    #[test]
    fn images_follow_evaluation_map() {
        let (a, _) = pair();
        let rep = affine_eval_rep(&a).unwrap();
        let base = q_atypical_rep(&a);
        assert_eq!(rep.get("K3+").unwrap(), base.get("K1-").unwrap());
        let sw = alt_affinization(&a, AffineVariant::Swapped).unwrap();
        assert_eq!(sw.get("K3+").unwrap(), base.get("K2-").unwrap());
        assert!(alt_affinization(&a, AffineVariant::Beta(0.5)).is_err());
    }

    #[test]
    fn relations_all_variants() {
        let (a, _) = pair();
        for v in VARIANTS {
            let r = affine_relations_residual(&alt_affinization(&a, v).unwrap()).unwrap();
            assert!(r.passed, "{v}: {:?}", r.worst());
            let u = upper_nodes_check(&alt_affinization(&a, v).unwrap()).unwrap().with_tolerance(1e-11);
            assert!(u.passed, "{v}: {:?}", u.worst());
        }
    }

    #[test]
    fn node_one_coproduct_matches_q() {
        let (a, b) = pair();
        let (ra, rb) = (affine_eval_rep(&a).unwrap(), affine_eval_rep(&b).unwrap());
        for g in ["E1", "F1", "K1+"] {
            let x = affine_coproduct_image(g, &ra, &rb, false).unwrap();
            let y = q_coproduct_image(g, &q_atypical_rep(&a), &q_atypical_rep(&b), false).unwrap();
            assert!(x.max_abs_diff(&y) < 1e-15);
        }
    }

    #[test]
    fn intertwines_and_coassociative() {
        let (a, b) = pair();
        for v in VARIANTS {
            let r = affine_intertwine(&a, &b, v).unwrap();
            assert!(r.passed, "{v}: {:?}", r.worst());
        }
        let (ra, rb) = (affine_eval_rep(&a).unwrap(), affine_eval_rep(&b).unwrap());
        for g in AFFINE_GENERATORS {
            assert!(affine_coassoc_residual(g, &ra, &rb, &ra).unwrap() < 1e-10, "{g}");
        }
    }

    #[test]
    fn tensor_keeps_compatibility() {
        let (a, b) = pair();
        let t = affine_tensor(&affine_eval_rep(&a).unwrap(), &affine_eval_rep(&b).unwrap()).unwrap();
        let r = affine_relations_residual(&t).unwrap();
        for id in ["compatibility 1", "compatibility 2", "[E1,F2]", "[E3,F4]"] {
            assert!(r.residual(id).unwrap() < 1e-10, "{id}");
        }
    }
}
