//! R-matrices on `V⊗V′` for two-dimensional modules.
//!
//! Coefficients are listed in the order
//! `E₁₁⊗E₁₁, E₁₁⊗E₂₂, E₁₂⊗E₂₁, E₂₁⊗E₁₂, E₂₂⊗E₁₁, E₂₂⊗E₂₂`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{e2, graded_kron, graded_perm, id2, CMat, GradedSpace, SuperMatrix, C64, ONE, ZERO};
use crate::halg::{self, GeneratorImage, RepLabels, GENERATORS};
use crate::linalg::{nullspace, NULL_THRESHOLD};
use crate::qalg::{self, QRepLabels, Q_GENERATORS};
use crate::report::ResidualReport;

/// Matrix positions of the six coefficients, with the sign relating entry and coefficient.
const PATTERN: [(usize, usize, f64); 6] = [(0, 0, 1.0), (1, 1, 1.0), (1, 2, -1.0), (2, 1, 1.0), (2, 2, 1.0), (3, 3, 1.0)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RForm {
    Closed,
    Trig,
    Solved,
    Conjugated,
    QClosed,
}

/// Which factors carry the barred module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Grading {
    #[serde(rename = "V-V")]
    VV,
    #[serde(rename = "V-Vbar")]
    VVbar,
    #[serde(rename = "Vbar-V")]
    VbarV,
    #[serde(rename = "Vbar-Vbar")]
    VbarVbar,
}

impl Grading {
    pub const ALL: [Grading; 4] = [Grading::VV, Grading::VVbar, Grading::VbarV, Grading::VbarVbar];

    pub fn from_flags(left_bar: bool, right_bar: bool) -> Self {
        match (left_bar, right_bar) {
            (false, false) => Grading::VV,
            (false, true) => Grading::VVbar,
            (true, false) => Grading::VbarV,
            (true, true) => Grading::VbarVbar,
        }
    }

    pub fn flags(self) -> (bool, bool) {
        match self {
            Grading::VV => (false, false),
            Grading::VVbar => (false, true),
            Grading::VbarV => (true, false),
            Grading::VbarVbar => (true, true),
        }
    }
}

impl fmt::Display for Grading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Grading::VV => "V-V",
            Grading::VVbar => "V-Vbar",
            Grading::VbarV => "Vbar-V",
            Grading::VbarVbar => "Vbar-Vbar",
        })
    }
}

impl FromStr for Grading {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "v-v" | "vv" => Ok(Grading::VV),
            "v-vbar" | "vvbar" => Ok(Grading::VVbar),
            "vbar-v" | "vbarv" => Ok(Grading::VbarV),
            "vbar-vbar" | "vbarvbar" => Ok(Grading::VbarVbar),
            _ => Err(Error::UnknownOption(format!("grading {s}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RLabels {
    Undeformed { a: RepLabels, b: RepLabels },
    Deformed { a: QRepLabels, b: QRepLabels },
    Angles { theta1: f64, theta2: f64, lambda: f64 },
    Modules,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RMatrix {
    pub form: RForm,
    pub grading: Grading,
    pub labels: RLabels,
    pub entries: SuperMatrix,
    /// The E₁₁⊗E₁₁ coefficient fixed at construction.
    pub normalization: C64,
}

fn vv_space() -> GradedSpace {
    GradedSpace::atypical().tensor(&GradedSpace::atypical())
}

/// `Σ cᵢ·Xᵢ⊗Yᵢ` over the six positions.
pub fn from_coefficients(c: [C64; 6]) -> SuperMatrix {
    let units = [(1, 1, 1, 1), (1, 1, 2, 2), (1, 2, 2, 1), (2, 1, 1, 2), (2, 2, 1, 1), (2, 2, 2, 2)];
    let mut m = SuperMatrix::zeros(&vv_space());
    for (k, (i, j, a, b)) in units.into_iter().enumerate() {
        m = &m + &graded_kron(&e2(i, j), &e2(a, b)).scale(c[k]);
    }
    m
}

impl RMatrix {
    pub fn matrix(&self) -> &SuperMatrix {
        &self.entries
    }

    pub fn coefficients(&self) -> [C64; 6] {
        PATTERN.map(|(i, j, s)| self.entries.get(i, j) * s)
    }

    /// Largest entry outside the six coefficient positions.
    pub fn sparsity_residual(&self) -> f64 {
        let d = self.entries.data();
        let mut worst: f64 = 0.0;
        for i in 0..d.nrows() {
            for j in 0..d.ncols() {
                if !PATTERN.iter().any(|&(a, b, _)| a == i && b == j) {
                    worst = worst.max(d[(i, j)].norm());
                }
            }
        }
        worst
    }

    /// Rescales so that the E₁₁⊗E₁₁ coefficient equals `r11`.
    pub fn renormalized(&self, r11: C64) -> Result<RMatrix> {
        let cur = self.coefficients()[0];
        if cur.norm() == 0.0 {
            return Err(Error::Degenerate("E11⊗E11 coefficient vanishes".into()));
        }
        Ok(RMatrix { entries: self.entries.scale(r11 / cur), normalization: r11, ..self.clone() })
    }

    /// Scalar `c` minimizing `‖self - c·other‖` and the entrywise residual.
    pub fn proportionality(&self, other: &RMatrix) -> (C64, f64) {
        crate::linalg::fit_scalar(self.entries.data(), other.entries.data())
    }
}

fn degenerate_check(c: &[C64; 6]) -> Result<()> {
    if c.iter().all(|x| x.norm() < 1e-300) {
        return Err(Error::Degenerate("all six coefficients vanish".into()));
    }
    Ok(())
}

pub fn r_closed_coefficients(a: &RepLabels, b: &RepLabels) -> [C64; 6] {
    let (g, nu, gp, nup) = (a.gamma, a.nu, b.gamma, b.nu);
    [
        gp * nu * nup / g - g / (gp * nu * nup),
        gp * nup / (g * nu) - g * nu / (gp * nup),
        -(nu * nu - ONE / (nu * nu)),
        nup * nup - ONE / (nup * nup),
        gp * nu / (g * nup) - g * nup / (gp * nu),
        gp / (g * nu * nup) - g * nu * nup / gp,
    ]
}

/// Closed-form R intertwining `atypical_rep(a)⊗atypical_rep(b)`.
pub fn r_closed(a: &RepLabels, b: &RepLabels) -> Result<RMatrix> {
    let c = r_closed_coefficients(a, b);
    degenerate_check(&c)?;
    Ok(RMatrix {
        form: RForm::Closed,
        grading: Grading::VV,
        labels: RLabels::Undeformed { a: *a, b: *b },
        entries: from_coefficients(c),
        normalization: c[0],
    })
}

pub fn r_trig_coefficients(t1: f64, t2: f64, l: f64) -> [f64; 6] {
    [
        (t1 + t2 - l).sin(),
        -(t1 - t2 + l).sin(),
        -(2.0 * t1).sin(),
        (2.0 * t2).sin(),
        (t1 - t2 - l).sin(),
        -(t1 + t2 + l).sin(),
    ]
}

/// Trigonometric form; equals `r_closed/(2i)` at `ν = e^{iθ₁}`, `ν′ = e^{iθ₂}`, `γ = e^{iΛ}γ′`.
pub fn r_trig(theta1: f64, theta2: f64, lambda: f64) -> RMatrix {
    let c = r_trig_coefficients(theta1, theta2, lambda).map(|x| C64::new(x, 0.0));
    RMatrix {
        form: RForm::Trig,
        grading: Grading::VV,
        labels: RLabels::Angles { theta1, theta2, lambda },
        entries: from_coefficients(c),
        normalization: c[0],
    }
}

pub fn rq_closed_coefficients(a: &QRepLabels, b: &QRepLabels) -> [C64; 6] {
    let (g, nu, k1, k2) = (a.gamma, a.nu, a.kp1, a.kp2);
    let (gp, nup, k1p, k2p) = (b.gamma, b.nu, b.kp1, b.kp2);
    [
        k1 / k2p * gp * nu * nup / g - k2 / k1p * g / (gp * nu * nup),
        ONE / (k1 * k2p) * gp * nup / (g * nu) - ONE / (k1p * k2) * g * nu / (gp * nup),
        -(k1 / k2 * nu * nu - k2 / k1 / (nu * nu)),
        k1p / k2p * nup * nup - k2p / k1p / (nup * nup),
        k1 * k2p * gp * nu / (g * nup) - k1p * k2 * g * nup / (gp * nu),
        k2p / k1 * gp / (g * nu * nup) - k1p / k2 * g * nu * nup / gp,
    ]
}

/// Closed-form deformed R intertwining `q_atypical_rep(a)⊗q_atypical_rep(b)`.
pub fn rq_closed(a: &QRepLabels, b: &QRepLabels) -> Result<RMatrix> {
    qalg::check_q(a.q)?;
    if (a.q - b.q).norm() > 1e-14 * a.q.norm() {
        return Err(Error::Precondition("both factors must share q".into()));
    }
    let c = rq_closed_coefficients(a, b);
    degenerate_check(&c)?;
    Ok(RMatrix {
        form: RForm::QClosed,
        grading: Grading::VV,
        labels: RLabels::Deformed { a: a.clone(), b: b.clone() },
        entries: from_coefficients(c),
        normalization: c[0],
    })
}

fn coproduct_pair(g: &str, a: &GeneratorImage, b: &GeneratorImage) -> Result<(SuperMatrix, SuperMatrix)> {
    if a.q().is_some() {
        Ok((qalg::q_coproduct_image(g, a, b, true)?, qalg::q_coproduct_image(g, a, b, false)?))
    } else {
        Ok((halg::coproduct_image(g, a, b, true)?, halg::coproduct_image(g, a, b, false)?))
    }
}

fn generators_of(a: &GeneratorImage) -> &'static [&'static str] {
    if a.q().is_some() {
        &Q_GENERATORS
    } else {
        &GENERATORS
    }
}

/// Coefficient matrix of `R ↦ Δ^op(g)R - RΔ(g)` over all generators, acting on row-major `vec(R)`.
pub fn intertwining_system(a: &GeneratorImage, b: &GeneratorImage) -> Result<CMat> {
    let n = a.dim() * b.dim();
    let gens = generators_of(a);
    let mut sys = CMat::zeros(gens.len() * n * n, n * n);
    let id = CMat::identity(n, n);
    for (k, g) in gens.iter().enumerate() {
        let (dop, d) = coproduct_pair(g, a, b)?;
        let block = dop.data().kronecker(&id) - id.kronecker(&d.data().transpose());
        sys.view_mut((k * n * n, 0), (n * n, n * n)).copy_from(&block);
    }
    Ok(sys)
}

/// Nullspace solution of the intertwining system, scaled so the first nonvanishing
/// coefficient (normally E₁₁⊗E₁₁) is 1.
pub fn r_solve(a: &GeneratorImage, b: &GeneratorImage) -> Result<RMatrix> {
    if a.dim() != 2 || b.dim() != 2 {
        return Err(Error::Precondition("r_solve expects two-dimensional modules".into()));
    }
    if a.q() != b.q() {
        return Err(Error::Precondition("both modules must share q".into()));
    }
    let sys = intertwining_system(a, b)?;
    let ns = nullspace(&sys, NULL_THRESHOLD);
    if ns.basis.len() != 1 {
        return Err(Error::Nullspace { dim: ns.basis.len() });
    }
    let v: &DVector<C64> = &ns.basis[0];
    let mut m = CMat::from_row_slice(4, 4, v.as_slice());
    // first coefficient in listed order that does not vanish
    let big = v.camax();
    let (pi, pj, ps) =
        PATTERN.into_iter().find(|&(i, j, _)| m[(i, j)].norm() > 1e-8 * big).ok_or_else(|| Error::Degenerate("solution vanishes".into()))?;
    let pivot = m[(pi, pj)] * ps;
    m /= pivot;
    let scale = m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()));
    for i in 0..4 {
        for j in 0..4 {
            if !PATTERN.iter().any(|&(x, y, _)| x == i && y == j) && m[(i, j)].norm() < 1e-13 * scale {
                m[(i, j)] = ZERO;
            }
        }
    }
    let entries = SuperMatrix::square(&vv_space(), m)?.tagged(Some(crate::graded::Parity::Even));
    let normalization = entries.get(0, 0);
    Ok(RMatrix { form: RForm::Solved, grading: Grading::VV, labels: RLabels::Modules, entries, normalization })
}

/// `Δ^op(g)·R - R·Δ(g)` for every generator.
pub fn intertwining_report(r: &SuperMatrix, a: &GeneratorImage, b: &GeneratorImage) -> Result<ResidualReport> {
    let mut rep = ResidualReport::new("intertwining", 1e-11);
    for g in generators_of(a) {
        let (dop, d) = coproduct_pair(g, a, b)?;
        let res = (&(&dop * r) - &(r * &d)).max_abs();
        rep.push(format!("Dop({g})R=RD({g})"), res);
    }
    Ok(rep)
}

/// `R₁₂R₁₃R₂₃ - R₂₃R₁₃R₁₂` with `R₁₃ = (I⊗P)(R⊗I)(I⊗P)`.
pub fn ybe_matrices(r12: &SuperMatrix, r13: &SuperMatrix, r23: &SuperMatrix) -> f64 {
    let i2 = id2();
    let p = graded_perm(&GradedSpace::atypical(), &GradedSpace::atypical());
    let a = graded_kron(r12, &i2);
    let c = graded_kron(&i2, r23);
    let ip = graded_kron(&i2, &p);
    let b = &(&ip * &graded_kron(r13, &i2)) * &ip;
    let lhs = &(&a * &b) * &c;
    let rhs = &(&c * &b) * &a;
    lhs.max_abs_diff(&rhs)
}

pub fn ybe_residual(l: [&RepLabels; 3]) -> Result<f64> {
    Ok(ybe_matrices(&r_closed(l[0], l[1])?.entries, &r_closed(l[0], l[2])?.entries, &r_closed(l[1], l[2])?.entries))
}

pub fn ybe_residual_q(l: [&QRepLabels; 3]) -> Result<f64> {
    Ok(ybe_matrices(&rq_closed(l[0], l[1])?.entries, &rq_closed(l[0], l[2])?.entries, &rq_closed(l[1], l[2])?.entries))
}

/// Residual of `R(θ₁,θ₂,Λ)·P·R(θ₂,θ₁,-Λ)·P = s·I` and `s = ½(cos2Λ - cos(2θ₁+2θ₂))`.
pub fn unitarity_check(theta1: f64, theta2: f64, lambda: f64) -> (f64, f64) {
    let p = graded_perm(&GradedSpace::atypical(), &GradedSpace::atypical());
    let a = r_trig(theta1, theta2, lambda).entries;
    let b = r_trig(theta2, theta1, -lambda).entries;
    let prod = &(&(&a * &p) * &b) * &p;
    let s = 0.5 * ((2.0 * lambda).cos() - (2.0 * theta1 + 2.0 * theta2).cos());
    let res = prod.max_abs_diff(&SuperMatrix::scalar(prod.space_out(), C64::new(s, 0.0)));
    (res, s)
}

/// Conjugating matrix `G` for a grading.
pub fn conjugator(target: Grading) -> SuperMatrix {
    let x = &e2(1, 2) + &e2(2, 1);
    let y = &e2(1, 2) - &e2(2, 1);
    match target {
        Grading::VV => SuperMatrix::identity(&vv_space()),
        Grading::VVbar => &graded_kron(&e2(1, 1), &x) - &graded_kron(&e2(2, 2), &y),
        Grading::VbarV => &graded_kron(&x, &e2(1, 1)) - &graded_kron(&y, &e2(2, 2)),
        Grading::VbarVbar => &graded_kron(&e2(1, 2), &x) + &graded_kron(&e2(2, 1), &x),
    }
}

/// `G⁻¹·R·G`, intertwining the modules barred according to `target`.
pub fn conjugate_r(r: &RMatrix, target: Grading) -> Result<RMatrix> {
    if r.grading != Grading::VV {
        return Err(Error::Precondition(format!("conjugation starts from V-V, got {}", r.grading)));
    }
    let g = conjugator(target);
    let entries = &(&g.inverse()? * &r.entries) * &g;
    let normalization = r.normalization;
    Ok(RMatrix { form: RForm::Conjugated, grading: target, labels: r.labels.clone(), entries, normalization })
}

/// Modules on which an R of the given grading intertwines.
pub fn graded_modules(a: &GeneratorImage, b: &GeneratorImage, grading: Grading) -> Result<(GeneratorImage, GeneratorImage)> {
    let (ba, bb) = grading.flags();
    let a = if ba { halg::barred(a)? } else { a.clone() };
    let b = if bb { halg::barred(b)? } else { b.clone() };
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::c;
    use crate::qalg::q_labels;
    use std::f64::consts::FRAC_PI_4;

    fn labels(g: C64, t: f64) -> RepLabels {
        RepLabels::new(g, C64::from_polar(1.0, t), c(0.3, 0.2), c(-0.4, 0.1)).unwrap()
    }

    #[test]
    fn closed_e12_e21_coefficient() {
        let (a, b) = (labels(c(0.7, 0.2), 0.4), labels(c(1.1, -0.3), 1.3));
        let r = r_closed(&a, &b).unwrap();
        let nu = a.nu;
        assert!((r.coefficients()[2] + (nu * nu - ONE / (nu * nu))).norm() < 1e-15);
        assert_eq!(r.sparsity_residual(), 0.0);
    }

    #[test]
    fn equal_labels_kill_e11_e22() {
        let a = labels(c(0.7, 0.2), 0.4);
        assert!(r_closed(&a, &a).unwrap().coefficients()[1].norm() < 1e-15);
    }

    #[test]
    fn trig_at_quarter_pi_is_perm() {
        let r = r_trig(FRAC_PI_4, FRAC_PI_4, 0.0);
        let p = graded_perm(&GradedSpace::atypical(), &GradedSpace::atypical());
        assert!(r.entries.max_abs_diff(&p) < 1e-15);
    }

    #[test]
    fn trig_matches_closed() {
        let (t1, t2, l) = (0.3, -1.1, 0.7);
        let gp = c(0.4, 0.9);
        let a = RepLabels::new(C64::from_polar(1.0, l) * gp, C64::from_polar(1.0, t1), ONE, ONE).unwrap();
        let b = RepLabels::new(gp, C64::from_polar(1.0, t2), ONE, ONE).unwrap();
        let closed = r_closed(&a, &b).unwrap().entries;
        let trig = r_trig(t1, t2, l).entries.scale(c(0.0, 2.0));
        assert!(closed.max_abs_diff(&trig) < 1e-12);
    }

    #[test]
    fn closed_intertwines_and_solver_agrees() {
        let (a, b) = (labels(c(0.7, 0.2), 0.4), labels(c(1.1, -0.3), 1.3));
        let (ra, rb) = (halg::atypical_rep(&a), halg::atypical_rep(&b));
        let r = r_closed(&a, &b).unwrap();
        assert!(intertwining_report(&r.entries, &ra, &rb).unwrap().passed);
        let s = r_solve(&ra, &rb).unwrap().renormalized(r.normalization).unwrap();
        assert!(s.entries.max_abs_diff(&r.entries) < 1e-10);
    }

    #[test]
    fn singlet_point_keeps_one_dimensional_commutant() {
        let a = labels(c(0.7, 0.2), 0.4);
        let b = RepLabels::new(a.gamma, ONE / a.nu, a.alpha1, a.alpha2).unwrap();
        let s = r_solve(&halg::atypical_rep(&a), &halg::atypical_rep(&b)).unwrap();
        assert!(s.normalization.norm() < 1e-12);
        let r = r_closed(&a, &b).unwrap();
        assert!(r.coefficients()[0].norm() < 1e-15);
        assert!(s.proportionality(&r).1 < 1e-12);
    }

    #[test]
    fn unitarity_points() {
        let (res, s) = unitarity_check(FRAC_PI_4, FRAC_PI_4, 0.0);
        assert!(res < 1e-14 && (s - 1.0).abs() < 1e-15);
        let (res, _) = unitarity_check(0.3, 1.2, 2.1);
        assert!(res < 1e-12);
    }

    #[test]
    fn ybe_undeformed() {
        let l = [labels(c(0.7, 0.2), 0.4), labels(c(1.1, -0.3), 1.3), labels(c(-0.5, 0.8), 2.9)];
        assert!(ybe_residual([&l[0], &l[1], &l[2]]).unwrap() < 1e-10);
    }

    #[test]
    fn conjugated_forms() {
        let l = [labels(c(0.7, 0.2), 0.4), labels(c(1.1, -0.3), 1.3), labels(c(-0.5, 0.8), 2.9)];
        let g = conjugator(Grading::VbarVbar);
        assert!((&g * &g).max_abs_diff(&SuperMatrix::scalar(g.space_out(), -ONE)) < 1e-15);
        for grading in Grading::ALL {
            let r = conjugate_r(&r_closed(&l[0], &l[1]).unwrap(), grading).unwrap();
            let (ma, mb) = graded_modules(&halg::atypical_rep(&l[0]), &halg::atypical_rep(&l[1]), grading).unwrap();
            let rep = intertwining_report(&r.entries, &ma, &mb).unwrap();
            assert!(rep.passed, "{grading}: {:?}", rep.worst());
            let back = &(&conjugator(grading) * &r.entries) * &conjugator(grading).inverse().unwrap();
            assert!(back.max_abs_diff(&r_closed(&l[0], &l[1]).unwrap().entries) < 1e-14);
        }
        for flags in 0..8u8 {
            let gr = |x: u8, y: u8| Grading::from_flags(flags >> x & 1 == 1, flags >> y & 1 == 1);
            let rr = |i: usize, j: usize, x: u8, y: u8| conjugate_r(&r_closed(&l[i], &l[j]).unwrap(), gr(x, y)).unwrap().entries;
            let res = ybe_matrices(&rr(0, 1, 2, 1), &rr(0, 2, 2, 0), &rr(1, 2, 1, 0));
            assert!(res < 1e-10, "{flags}: {res}");
        }
    }

    #[test]
    fn deformed_intertwines_and_solver_agrees() {
        let alpha = [c(0.5, 0.1), c(-0.3, 0.6)];
        let q = c(1.1, 0.2);
        let a = q_labels(c(0.4, 0.3), C64::from_polar(1.0, 0.9), q, alpha, 0, 1, 1).unwrap();
        let b = q_labels(c(-0.2, 0.5), C64::from_polar(0.9, -0.4), q, alpha, 1, 1, -1).unwrap();
        let (ra, rb) = (qalg::q_atypical_rep(&a), qalg::q_atypical_rep(&b));
        let r = rq_closed(&a, &b).unwrap();
        let rep = intertwining_report(&r.entries, &ra, &rb).unwrap();
        assert!(rep.passed, "{:?}", rep.worst());
        let s = r_solve(&ra, &rb).unwrap();
        assert!(r.proportionality(&s).1 < 1e-10);
    }

    #[test]
    fn deformed_tends_to_undeformed() {
        let (a, b) = (labels(c(0.7, 0.2), 0.4), labels(c(1.1, -0.3), 1.3));
        let r = r_closed(&a, &b).unwrap();
        for eps in [1e-3, 1e-4, 1e-5] {
            let q = c(1.0 + eps, 0.0);
            let rq = rq_closed(&qalg::deform_labels(&a, q).unwrap(), &qalg::deform_labels(&b, q).unwrap()).unwrap();
            let d = rq.entries.max_abs_diff(&r.entries);
            assert!(d <= 1e3 * eps, "{eps}: {d}");
        }
    }
}
