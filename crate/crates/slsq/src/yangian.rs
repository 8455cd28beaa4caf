//! The u-deformed Yangian 𝒴(𝔞) in evaluation modules.
//!
//! `ev_ρ(a_{i,r}) = ρ^r·π(a_i)` with `ρ = (ν²λ₁ - ν⁻²λ₂)/(ν² - ν⁻²)`.
//! Currents are stored as [`TruncatedCurrent`]s whose coefficient `r` multiplies `z^{-r}`.

use std::collections::{BTreeMap, HashMap};

use serde_json::json;

use crate::error::{Error, Result};
use crate::graded::{graded_comm, GradedSpace, Parity, SuperMatrix, C64, ONE, ZERO};
use crate::halg::{atypical_rep, generator_parity, GeneratorImage, RepLabels};
use crate::report::ResidualReport;
use crate::rmatrix::r_closed;
use crate::series::TruncatedCurrent;
use crate::terms::{eval_terms, Term};

/// Level generator families of 𝒴(𝔞).
pub const FAMILIES: [&str; 9] = ["e1", "e2", "f1", "f2", "h1", "h2", "k1", "k2", "h0"];

pub const DEFAULT_ORDER: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum YLetter {
    /// `a_{r}` for a family name
    Gen(&'static str, u32),
    /// `u^{±1}`
    U(bool),
}

fn family(name: &str) -> Result<&'static str> {
    FAMILIES.iter().find(|n| **n == name).copied().ok_or_else(|| Error::UnknownFamily(name.into()))
}

fn fam(head: char, i: usize) -> &'static str {
    let idx = match head {
        'e' => 0,
        'f' => 2,
        'h' => 4,
        'k' => 6,
        _ => unreachable!("family head"),
    };
    FAMILIES[idx + i - 1]
}

fn uw(n: i32) -> Vec<YLetter> {
    vec![YLetter::U(n > 0); n.unsigned_abs() as usize]
}

fn cat(mut a: Vec<YLetter>, b: Vec<YLetter>) -> Vec<YLetter> {
    a.extend(b);
    a
}

/// Terms of `Δ_ε(g_r)`; `ε = (1, 1)` gives `Δ`.
pub fn yangian_coproduct_terms(g: &str, r: u32, eps: [C64; 2]) -> Result<Vec<Term<YLetter>>> {
    let name = family(g)?;
    let g0 = |n: &'static str, l: u32| vec![YLetter::Gen(n, l)];
    let mut t = Vec::new();
    if name == "h0" {
        t.push(Term::unit(g0(name, r), vec![]));
        t.push(Term::unit(vec![], g0(name, r)));
        for l in 1..=r {
            t.push(Term::new(-eps[0], cat(uw(1), g0("f1", r - l)), cat(uw(1), g0("e1", l - 1))));
            t.push(Term::new(-eps[1], cat(uw(-1), g0("f2", r - l)), cat(uw(-1), g0("e2", l - 1))));
        }
        return Ok(t);
    }
    let head = name.chars().next().expect("nonempty");
    let i: usize = if name.ends_with('1') { 1 } else { 2 };
    let j = 3 - i;
    let s: i32 = if i == 1 { 1 } else { -1 };
    let (ei, ej) = (eps[i - 1], eps[j - 1]);
    match head {
        'e' => {
            t.push(Term::unit(g0(name, r), uw(-s)));
            t.push(Term::unit(uw(s), g0(name, r)));
            for l in 1..=r {
                t.push(Term::new(ei, cat(uw(s), g0(fam('h', i), r - l)), g0(name, l - 1)));
                t.push(Term::new(ej, cat(uw(-s), g0(fam('k', i), r - l)), cat(uw(-2 * s), g0(fam('e', j), l - 1))));
            }
        }
        'f' => {
            t.push(Term::unit(g0(name, r), uw(s)));
            t.push(Term::unit(uw(-s), g0(name, r)));
            for l in 1..=r {
                t.push(Term::new(ei, g0(name, r - l), cat(uw(s), g0(fam('h', i), l - 1))));
                t.push(Term::new(ej, cat(uw(-2 * s), g0(fam('f', j), r - l)), cat(uw(-s), g0(fam('k', j), l - 1))));
            }
        }
        'h' => {
            t.push(Term::unit(g0(name, r), vec![]));
            t.push(Term::unit(vec![], g0(name, r)));
            for l in 1..=r {
                t.push(Term::new(ei, g0(name, r - l), g0(name, l - 1)));
                t.push(Term::new(ej, cat(uw(-2 * s), g0(fam('k', i), r - l)), cat(uw(-2 * s), g0(fam('k', j), l - 1))));
            }
        }
        _ => {
            t.push(Term::unit(g0(name, r), uw(-2 * s)));
            t.push(Term::unit(uw(2 * s), g0(name, r)));
            for l in 1..=r {
                t.push(Term::new(ej, g0(name, r - l), cat(uw(-2 * s), g0(fam('h', j), l - 1))));
                t.push(Term::new(ei, cat(uw(2 * s), g0(fam('h', i), r - l)), g0(fam('k', i), l - 1)));
            }
        }
    }
    Ok(t)
}

/// Atypical module with the evaluation parameter `ρ`.
#[derive(Clone, Debug)]
pub struct EvalRep {
    base: GeneratorImage,
    labels: RepLabels,
    rho: C64,
}

pub fn rho_of(labels: &RepLabels) -> Result<C64> {
    let gap = labels.nu_gap();
    if gap.norm() < 1e-12 {
        return Err(Error::Singular("rho: nu^2 - nu^-2 vanishes".into()));
    }
    let n2 = labels.nu * labels.nu;
    Ok((n2 * labels.lambda1() - labels.lambda2() / n2) / gap)
}

pub fn eval_rep(labels: &RepLabels) -> Result<EvalRep> {
    let rho = rho_of(labels)?;
    Ok(EvalRep { base: atypical_rep(labels), labels: *labels, rho })
}

impl EvalRep {
    pub fn base(&self) -> &GeneratorImage {
        &self.base
    }

    pub fn labels(&self) -> &RepLabels {
        &self.labels
    }

    pub fn rho(&self) -> C64 {
        self.rho
    }

    pub fn space(&self) -> &GradedSpace {
        self.base.space()
    }

    /// `ρ^r·π(g)`
    pub fn level_image(&self, g: &str, r: u32) -> Result<SuperMatrix> {
        let name = family(g)?;
        Ok(self.base.get(name)?.scale(self.rho.powu(r)))
    }

    fn letter(&self, l: &YLetter) -> Result<SuperMatrix> {
        match *l {
            YLetter::Gen(n, r) => self.level_image(n, r),
            YLetter::U(true) => self.base.get("u+").cloned(),
            YLetter::U(false) => self.base.get("u-").cloned(),
        }
    }
}

/// Matrix of `Δ_ε(g_r)` (or its opposite) on `A⊗B`.
pub fn yangian_coproduct(g: &str, r: u32, a: &EvalRep, b: &EvalRep, eps: [C64; 2], opposite: bool) -> Result<SuperMatrix> {
    let terms = yangian_coproduct_terms(g, r, eps)?;
    eval_terms(&terms, a.space(), b.space(), |l| a.letter(l), |l| b.letter(l), opposite)
}

/// Level images `(g, r) ↦ matrix` for `r ≤ max_level`.
#[derive(Clone, Debug)]
pub struct LevelTable {
    space: GradedSpace,
    max_level: u32,
    images: HashMap<(&'static str, u32), SuperMatrix>,
}

impl LevelTable {
    pub fn build(space: &GradedSpace, max_level: u32, f: impl Fn(&'static str, u32) -> Result<SuperMatrix>) -> Result<Self> {
        let mut images = HashMap::new();
        for g in FAMILIES {
            for r in 0..=max_level {
                images.insert((g, r), f(g, r)?);
            }
        }
        Ok(Self { space: space.clone(), max_level, images })
    }

    pub fn of_eval(rep: &EvalRep, max_level: u32) -> Result<Self> {
        Self::build(rep.space(), max_level, |g, r| rep.level_image(g, r))
    }

    /// `Δ_ε` images on `A⊗B`.
    pub fn of_coproduct(a: &EvalRep, b: &EvalRep, eps: [C64; 2], max_level: u32) -> Result<Self> {
        Self::build(&a.space().tensor(b.space()), max_level, |g, r| yangian_coproduct(g, r, a, b, eps, false))
    }

    pub fn get(&self, g: &str, r: u32) -> Result<&SuperMatrix> {
        let name = family(g)?;
        self.images.get(&(name, r)).ok_or_else(|| Error::Precondition(format!("level {r} beyond table ({})", self.max_level)))
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    /// Images under `ω`: `f_i ↦ εᵢf_i`, `h_i ↦ εᵢh_i`, `k_i ↦ ε_j k_i`.
    pub fn omega(&self, eps: [C64; 2]) -> Self {
        let images = self.images.iter().map(|(&(g, r), m)| ((g, r), m.scale(omega_scale(g, eps)))).collect();
        Self { space: self.space.clone(), max_level: self.max_level, images }
    }
}

/// Scale of a letter under `ω`.
pub fn omega_scale(g: &str, eps: [C64; 2]) -> C64 {
    let i = if g.ends_with('1') { 0 } else { 1 };
    match g.chars().next() {
        Some('f') | Some('h') if g != "h0" => eps[i],
        Some('k') => eps[1 - i],
        _ => ONE,
    }
}

/// Relations of 𝒴(𝔞) for all level pairs with `r + s ≤ max_sum`.
pub fn level_relations_residual(t: &LevelTable, max_sum: u32) -> Result<ResidualReport> {
    if max_sum > t.max_level() {
        return Err(Error::Precondition(format!("level sum {max_sum} exceeds table level {}", t.max_level())));
    }
    let mut worst: BTreeMap<String, f64> = BTreeMap::new();
    let mut note = |id: String, v: f64| {
        let e = worst.entry(id).or_insert(0.0);
        *e = e.max(v);
    };
    for r in 0..=max_sum {
        for s in 0..=(max_sum - r) {
            for i in 1..=2 {
                for j in 1..=2 {
                    let lhs = graded_comm(t.get(fam('e', i), r)?, t.get(fam('f', j), s)?)?;
                    let rhs = t.get(if i == j { fam('h', i) } else { fam('k', i) }, r + s)?;
                    note(format!("[e{i},f{j}]"), (&lhs - rhs).max_abs());
                    for (a, b) in [('e', 'e'), ('f', 'f')] {
                        let z = graded_comm(t.get(fam(a, i), r)?, t.get(fam(b, j), s)?)?;
                        note(format!("[{a}{i},{b}{j}]=0"), z.max_abs());
                    }
                }
                let e = graded_comm(t.get("h0", r)?, t.get(fam('e', i), s)?)?;
                note(format!("[h0,e{i}]"), (&e - t.get(fam('e', i), r + s)?).max_abs());
                let f = graded_comm(t.get("h0", r)?, t.get(fam('f', i), s)?)?;
                note(format!("[h0,f{i}]"), (&f + t.get(fam('f', i), r + s)?).max_abs());
            }
            note("[h0,h0]=0".into(), graded_comm(t.get("h0", r)?, t.get("h0", s)?)?.max_abs());
            for z in ["h1", "h2", "k1", "k2"] {
                let mut m: f64 = 0.0;
                for g in FAMILIES {
                    m = m.max(graded_comm(t.get(z, r)?, t.get(g, s)?)?.max_abs());
                }
                note(format!("central {z}"), m);
            }
        }
    }
    let mut rep = ResidualReport::new("yangian relations", 1e-11);
    for (id, v) in worst {
        rep.push_with(id, v, json!({ "max_level_sum": max_sum }));
    }
    Ok(rep)
}

/// `k_{i,r+1} = αᵢ(ν²h_{1,r} - ν⁻²h_{2,r})` for `r < r_max`.
pub fn kir_residual(rep: &EvalRep, r_max: u32) -> Result<f64> {
    let n2 = rep.labels.nu * rep.labels.nu;
    let mut worst: f64 = 0.0;
    for (i, a) in rep.labels.alpha().into_iter().enumerate() {
        for r in 0..r_max {
            let lhs = rep.level_image(fam('k', i + 1), r + 1)?;
            let rhs = (&rep.level_image("h1", r)?.scale(n2) - &rep.level_image("h2", r)?.scale(ONE / n2)).scale(a);
            worst = worst.max(lhs.max_abs_diff(&rhs));
        }
    }
    Ok(worst)
}

/// `Δ(k_{i,r}) = Δ^op(k_{i,r})` and the same for `h_{i,r}`, `r ≤ r_max`.
pub fn cocommutativity_residual(a: &EvalRep, b: &EvalRep, r_max: u32) -> Result<ResidualReport> {
    let mut rep = ResidualReport::new("cocommutativity", 1e-10);
    let one = [ONE, ONE];
    for g in ["k1", "k2", "h1", "h2"] {
        let mut worst: f64 = 0.0;
        for r in 0..=r_max {
            let d = yangian_coproduct(g, r, a, b, one, false)?;
            let o = yangian_coproduct(g, r, a, b, one, true)?;
            worst = worst.max(d.max_abs_diff(&o));
        }
        rep.push(format!("D({g})=Dop({g})"), worst);
    }
    Ok(rep)
}

/// `Δ(g) = (ω⁻¹⊗ω⁻¹)(Δ_ε∘ω)(g)` for every family and `r ≤ r_max`.
pub fn omega_twist_equivalence(a: &EvalRep, b: &EvalRep, eps: [C64; 2], r_max: u32) -> Result<ResidualReport> {
    if eps.iter().any(|e| e.norm() == 0.0) {
        return Err(Error::Invalid("omega twist needs nonzero epsilon".into()));
    }
    let mut rep = ResidualReport::new("omega twist", 1e-10);
    for g in FAMILIES {
        let mut worst: f64 = 0.0;
        for r in 0..=r_max {
            let terms: Vec<Term<YLetter>> = yangian_coproduct_terms(g, r, eps)?
                .into_iter()
                .map(|t| {
                    let mut c = t.coeff * omega_scale(g, eps);
                    for l in t.left.iter().chain(&t.right) {
                        if let YLetter::Gen(n, _) = l {
                            c /= omega_scale(n, eps);
                        }
                    }
                    Term::new(c, t.left, t.right)
                })
                .collect();
            let twisted = eval_terms(&terms, a.space(), b.space(), |l| a.letter(l), |l| b.letter(l), false)?;
            let plain = yangian_coproduct(g, r, a, b, [ONE, ONE], false)?;
            worst = worst.max(twisted.max_abs_diff(&plain));
        }
        rep.push(format!("omega {g}"), worst);
    }
    Ok(rep)
}

/// Truncated currents of order `n`: `e_i(z) = Σ ρ^r π(e_i) z^{-r-1}`, `h(z)` with constant term 1.
pub fn currents(rep: &EvalRep, n: usize) -> Result<BTreeMap<&'static str, TruncatedCurrent>> {
    if n < 1 {
        return Err(Error::Invalid("current order must be at least 1".into()));
    }
    let mut out = BTreeMap::new();
    for g in FAMILIES {
        let mut coeffs = vec![if g.starts_with('h') { SuperMatrix::identity(rep.space()) } else { SuperMatrix::zeros(rep.space()) }];
        for r in 0..n {
            coeffs.push(rep.level_image(g, r as u32)?);
        }
        out.insert(g, TruncatedCurrent::new(coeffs)?);
    }
    Ok(out)
}

/// Coefficients of `z^{-a}w^{-b}` in the current relations for `a + b ≤ n + 2`.
pub fn fields_residual(t: &LevelTable, n: u32) -> Result<ResidualReport> {
    if n + 1 > t.max_level() {
        return Err(Error::Precondition(format!("order {n} needs levels up to {}", n + 1)));
    }
    let mut worst: BTreeMap<String, f64> = BTreeMap::new();
    let zero = SuperMatrix::zeros(t.space());
    for a in 0..=(n + 2) {
        for b in 0..=(n + 2 - a) {
            // (w - z)Σ X_{r,s} z^{-r-1} w^{-s-1} at z^{-a} w^{-b}
            let lhs = |x: &dyn Fn(u32, u32) -> Result<SuperMatrix>| -> Result<SuperMatrix> {
                let p = if a >= 1 { x(a - 1, b)? } else { zero.clone() };
                let m = if b >= 1 { x(a, b - 1)? } else { zero.clone() };
                Ok(&p - &m)
            };
            // F(z) - F(w) at z^{-a} w^{-b}
            let diff = |g: &str| -> Result<SuperMatrix> {
                Ok(match (a, b) {
                    (a, 0) if a >= 1 => t.get(g, a - 1)?.clone(),
                    (0, b) if b >= 1 => t.get(g, b - 1)?.scale(-ONE),
                    _ => zero.clone(),
                })
            };
            let lvl = |x: u32, y: u32| x + y <= n + 1;
            for i in 1..=2 {
                for j in 1..=2 {
                    let x = |r: u32, s: u32| -> Result<SuperMatrix> {
                        if !lvl(r, s) {
                            return Ok(zero.clone());
                        }
                        graded_comm(t.get(fam('e', i), r)?, t.get(fam('f', j), s)?)
                    };
                    let rhs = diff(if i == j { fam('h', i) } else { fam('k', i) })?;
                    let e = worst.entry(format!("(w-z)[e{i}(z),f{j}(w)]")).or_insert(0.0);
                    *e = e.max((&lhs(&x)? - &rhs).max_abs());
                }
                let xe = |r: u32, s: u32| -> Result<SuperMatrix> {
                    if !lvl(r, s) {
                        return Ok(zero.clone());
                    }
                    graded_comm(t.get("h0", r)?, t.get(fam('e', i), s)?)
                };
                let xf = |r: u32, s: u32| -> Result<SuperMatrix> {
                    if !lvl(r, s) {
                        return Ok(zero.clone());
                    }
                    graded_comm(t.get("h0", r)?, t.get(fam('f', i), s)?)
                };
                let re = diff(fam('e', i))?;
                let rf = -&diff(fam('f', i))?;
                let e = worst.entry(format!("(w-z)[h0(z),e{i}(w)]")).or_insert(0.0);
                *e = e.max((&lhs(&xe)? - &re).max_abs());
                let e = worst.entry(format!("(w-z)[h0(z),f{i}(w)]")).or_insert(0.0);
                *e = e.max((&lhs(&xf)? - &rf).max_abs());
            }
        }
    }
    let mut rep = ResidualReport::new("currents", 1e-11);
    for (id, v) in worst {
        rep.push(id, v);
    }
    Ok(rep)
}

/// Current relations and `kᵢ(z) = αᵢ(u²h₁(z) - u⁻²h₂(z))z⁻¹`, truncated at order `n`.
pub fn current_relations_residual(rep: &EvalRep, n: usize) -> Result<ResidualReport> {
    if n < 2 {
        return Err(Error::Invalid("current relations need order at least 2".into()));
    }
    let table = LevelTable::of_eval(rep, n as u32 + 1)?;
    let mut out = fields_residual(&table, n as u32)?;
    let cur = currents(rep, n)?;
    let u2 = rep.base.get("u+")? * rep.base.get("u+")?;
    let um2 = rep.base.get("u-")? * rep.base.get("u-")?;
    for (i, a) in rep.labels.alpha().into_iter().enumerate() {
        let k = &cur[fam('k', i + 1)];
        let rhs = (&cur["h1"].left_mul(&u2) - &cur["h2"].left_mul(&um2)).scale(a).shift();
        out.push(format!("k{}(z)", i + 1), k.max_abs_diff(&rhs));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum CLetter {
    Cur(&'static str),
    /// `h₀(z) - 1`
    Hat0,
    U(i32),
}

struct CurrentAlgebra {
    cur: BTreeMap<&'static str, TruncatedCurrent>,
    hat0: TruncatedCurrent,
    up: SuperMatrix,
    um: SuperMatrix,
    one: TruncatedCurrent,
    anti: BTreeMap<&'static str, TruncatedCurrent>,
    anti_hat0: TruncatedCurrent,
    hinv: TruncatedCurrent,
}

impl CurrentAlgebra {
    fn new(rep: &EvalRep, n: usize) -> Result<Self> {
        let cur = currents(rep, n)?;
        let one = TruncatedCurrent::one(rep.space(), n);
        let hat0 = &cur["h0"] - &one;
        let h = &(&cur["h1"] * &cur["h2"]) - &(&cur["k1"] * &cur["k2"]);
        let hinv = h.inverse()?;
        let mut anti = BTreeMap::new();
        for i in 1..=2 {
            let j = 3 - i;
            let c = |h: char, k: usize| &cur[fam(h, k)];
            let se = -&(&(&(c('e', i) * c('h', j)) - &(c('e', j) * c('k', i))) * &hinv);
            let sf = -&(&(&(c('f', i) * c('h', j)) - &(c('f', j) * c('k', j))) * &hinv);
            anti.insert(fam('e', i), se);
            anti.insert(fam('f', i), sf);
            anti.insert(fam('h', i), c('h', j) * &hinv);
            anti.insert(fam('k', i), -&(c('k', i) * &hinv));
        }
        let sh0 = &(&(&one - &hat0) + &(&anti["f1"] * &cur["e1"])) + &(&anti["f2"] * &cur["e2"]);
        let anti_hat0 = &sh0 - &one;
        anti.insert("h0", sh0);
        let up = rep.base.get("u+")?.clone();
        let um = rep.base.get("u-")?.clone();
        Ok(Self { cur, hat0, up, um, one, anti, anti_hat0, hinv })
    }

    fn upow(&self, p: i32) -> TruncatedCurrent {
        let m = if p >= 0 { &self.up } else { &self.um };
        let mut s = self.one.clone();
        for _ in 0..p.unsigned_abs() {
            s = s.right_mul(m);
        }
        s
    }

    fn letter(&self, l: CLetter, anti: bool) -> TruncatedCurrent {
        match (l, anti) {
            (CLetter::Cur(n), false) => self.cur[n].clone(),
            (CLetter::Cur(n), true) => self.anti[n].clone(),
            (CLetter::Hat0, false) => self.hat0.clone(),
            (CLetter::Hat0, true) => self.anti_hat0.clone(),
            (CLetter::U(p), false) => self.upow(p),
            (CLetter::U(p), true) => self.upow(-p),
        }
    }

    fn word(&self, w: &[CLetter]) -> TruncatedCurrent {
        w.iter().fold(self.one.clone(), |acc, l| &acc * &self.letter(*l, false))
    }

    /// `S(x₁⋯xₙ) = ±S(xₙ)⋯S(x₁)`
    fn anti_word(&self, w: &[CLetter]) -> TruncatedCurrent {
        let odd = w.iter().filter(|l| matches!(l, CLetter::Cur(n) if generator_parity(n) == Parity::Odd)).count();
        let sign = if (odd * odd.saturating_sub(1) / 2) % 2 == 1 { -ONE } else { ONE };
        w.iter().rev().fold(self.one.clone(), |acc, l| &acc * &self.letter(*l, true)).scale(sign)
    }
}

/// Current coproduct terms of the Hopf structure, with `h₀(z)` split as `1 + (h₀(z) - 1)`.
fn current_coproduct(g: &'static str) -> Vec<Term<CLetter>> {
    use CLetter::{Cur, Hat0, U};
    if g == "h0" {
        return vec![
            Term::unit(vec![], vec![]),
            Term::unit(vec![Hat0], vec![]),
            Term::unit(vec![], vec![Hat0]),
            Term::new(-ONE, vec![U(1), Cur("f1")], vec![U(1), Cur("e1")]),
            Term::new(-ONE, vec![U(-1), Cur("f2")], vec![U(-1), Cur("e2")]),
        ];
    }
    let head = g.chars().next().expect("nonempty");
    let i = if g.ends_with('1') { 1 } else { 2 };
    let j = 3 - i;
    let s: i32 = if i == 1 { 1 } else { -1 };
    match head {
        'e' => vec![
            Term::unit(vec![Cur(g)], vec![U(-s)]),
            Term::unit(vec![U(s), Cur(fam('h', i))], vec![Cur(g)]),
            Term::unit(vec![U(-s), Cur(fam('k', i))], vec![U(-2 * s), Cur(fam('e', j))]),
        ],
        'f' => vec![
            Term::unit(vec![U(-s)], vec![Cur(g)]),
            Term::unit(vec![Cur(g)], vec![U(s), Cur(fam('h', i))]),
            Term::unit(vec![U(-2 * s), Cur(fam('f', j))], vec![U(-s), Cur(fam('k', j))]),
        ],
        'h' => vec![
            Term::unit(vec![Cur(g)], vec![Cur(g)]),
            Term::unit(vec![U(-2 * s), Cur(fam('k', i))], vec![U(-2 * s), Cur(fam('k', j))]),
        ],
        _ => vec![
            Term::unit(vec![Cur(g)], vec![U(-2 * s), Cur(fam('h', j))]),
            Term::unit(vec![U(2 * s), Cur(fam('h', i))], vec![Cur(g)]),
        ],
    }
}

/// Antipode axioms on all currents, truncated at order `n`, in one evaluation module.
pub fn antipode_check(rep: &EvalRep, n: usize) -> Result<ResidualReport> {
    if n < 2 {
        return Err(Error::Invalid("antipode check needs order at least 2".into()));
    }
    let alg = CurrentAlgebra::new(rep, n)?;
    let mut out = ResidualReport::new("yangian antipode", 1e-10);
    let zero = TruncatedCurrent::zero(rep.space(), n);
    for g in FAMILIES {
        let target = if g.starts_with('h') { alg.one.clone() } else { zero.clone() };
        let mut left = zero.clone();
        let mut right = zero.clone();
        for t in current_coproduct(g) {
            left = &left + &(&alg.anti_word(&t.left) * &alg.word(&t.right)).scale(t.coeff);
            right = &right + &(&alg.word(&t.left) * &alg.anti_word(&t.right)).scale(t.coeff);
        }
        out.push(format!("m(S⊗id)D({g}(z))"), left.max_abs_diff(&target));
        out.push(format!("m(id⊗S)D({g}(z))"), right.max_abs_diff(&target));
    }
    let c = &alg.cur;
    for (i, j) in [(1, 2), (2, 1)] {
        let lhs = &(&(&c[fam('h', j)] * &c[fam('h', i)]) - &(&c[fam('k', i)] * &c[fam('k', j)])) * &alg.hinv;
        out.push(format!("(h{j}h{i}-k{i}k{j})H^-1=1"), lhs.max_abs_diff(&alg.one));
    }
    let h0 = &(&(&alg.anti["h0"] + &alg.hat0) - &(&alg.anti["f1"] * &c["e1"])) - &(&alg.anti["f2"] * &c["e2"]);
    out.push("S(h0)+h0-S(f1)e1-S(f2)e2=1", h0.max_abs_diff(&alg.one));
    // H⁻¹ = Σ (k₁k₂)^l (h₁⁻¹h₂⁻¹)^{l+1}
    let kk = &c["k1"] * &c["k2"];
    let hh = &c["h1"].inverse()? * &c["h2"].inverse()?;
    let mut series = zero.clone();
    let mut kl = alg.one.clone();
    let mut hl = hh.clone();
    for _ in 0..=n / 2 {
        series = &series + &(&kl * &hl);
        kl = &kl * &kk;
        hl = &hl * &hh;
    }
    out.push("H^-1 geometric", series.max_abs_diff(&alg.hinv));
    Ok(out)
}

/// `Δ^op(g_r)·R = R·Δ(g_r)` with `R = r_closed`, every family, `r ≤ r_max`.
pub fn yangian_intertwine(la: &RepLabels, lb: &RepLabels, r_max: u32) -> Result<ResidualReport> {
    let (a, b) = (eval_rep(la)?, eval_rep(lb)?);
    let r = r_closed(la, lb)?.entries;
    let mut out = ResidualReport::new("yangian intertwining", 1e-9);
    for g in FAMILIES {
        for lvl in 0..=r_max {
            let dop = yangian_coproduct(g, lvl, &a, &b, [ONE, ONE], true)?;
            let d = yangian_coproduct(g, lvl, &a, &b, [ONE, ONE], false)?;
            let res = (&(&dop * &r) - &(&r * &d)).max_abs();
            out.push_with(format!("{g},{lvl}"), res, json!({ "family": g, "level": lvl }));
        }
    }
    Ok(out)
}

/// Counit on currents: `ε(h(z)) = 1`, zero otherwise.
pub fn current_counit(g: &str) -> Result<C64> {
    let name = family(g)?;
    Ok(if name.starts_with('h') { ONE } else { ZERO })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::c;
    use crate::halg::coproduct_image;

    fn labels(g: C64, t: f64) -> RepLabels {
        let l = RepLabels::new(g, C64::from_polar(1.0, t), c(0.3, 0.2), c(-0.4, 0.1)).unwrap();
        let s = rho_of(&l).unwrap().norm().max(1.0);
        RepLabels::new(g, l.nu, l.alpha1 / s, l.alpha2 / s).unwrap()
    }

    fn pair() -> (EvalRep, EvalRep) {
        let a = labels(c(0.7, 0.2), 0.4);
        let b0 = labels(c(1.1, -0.3), 1.3);
        let b = RepLabels::new(b0.gamma, b0.nu, a.alpha1, a.alpha2).unwrap();
        (eval_rep(&a).unwrap(), eval_rep(&b).unwrap())
    }

    #[test]
    fn level_zero_is_base() {
        let (a, b) = pair();
        for g in FAMILIES {
            assert_eq!(a.level_image(g, 0).unwrap(), *a.base().get(g).unwrap());
            let d = yangian_coproduct(g, 0, &a, &b, [ONE, ONE], false).unwrap();
            let h = coproduct_image(g, a.base(), b.base(), false).unwrap();
            assert!(d.max_abs_diff(&h) < 1e-15, "{g}");
        }
    }

    #[test]
    fn singular_rho() {
        let l = RepLabels::new(ONE, C64::from_polar(1.0, std::f64::consts::FRAC_PI_2), ONE, ONE);
        if let Ok(l) = l {
            assert!(matches!(eval_rep(&l), Err(Error::Singular(_))));
        }
    }

    #[test]
    fn eval_relations_and_kir() {
        let (a, _) = pair();
        let r = level_relations_residual(&LevelTable::of_eval(&a, 8).unwrap(), 8).unwrap();
        assert!(r.passed, "{:?}", r.worst());
        assert!(kir_residual(&a, 6).unwrap() < 1e-12);
    }

    #[test]
    fn coproduct_is_homomorphism() {
        let (a, b) = pair();
        let t = LevelTable::of_coproduct(&a, &b, [ONE, ONE], 4).unwrap();
        let r = level_relations_residual(&t, 4).unwrap().with_tolerance(1e-10);
        assert!(r.passed, "{:?}", r.worst());
        assert!(cocommutativity_residual(&a, &b, 4).unwrap().passed);
    }

    #[test]
    fn omega_twist() {
        let (a, b) = pair();
        let r = omega_twist_equivalence(&a, &b, [c(0.7, -1.2), c(1.9, 0.4)], 3).unwrap();
        assert!(r.passed, "{:?}", r.worst());
        assert_eq!(omega_twist_equivalence(&a, &b, [ONE, ONE], 3).unwrap().max_residual, 0.0);
        let tw = LevelTable::of_eval(&a, 4).unwrap().omega([c(0.7, -1.2), c(1.9, 0.4)]);
        assert!(level_relations_residual(&tw, 4).unwrap().passed);
        assert!(omega_twist_equivalence(&a, &b, [ZERO, ONE], 1).is_err());
    }

    #[test]
    fn currents_layout() {
        let (a, _) = pair();
        let cur = currents(&a, 5).unwrap();
        assert_eq!(cur["e1"].coeff(1), a.base().get("e1").unwrap());
        assert!(cur["e1"].coeff(3).max_abs_diff(&a.base().get("e1").unwrap().scale(a.rho() * a.rho())) < 1e-15);
        assert_eq!(cur["h1"].coeff(0), &SuperMatrix::identity(a.space()));
        let r = current_relations_residual(&a, 5).unwrap();
        assert!(r.passed, "{:?}", r.worst());
    }

    #[test]
    fn antipode_on_currents() {
        let (a, _) = pair();
        let r = antipode_check(&a, 4).unwrap();
        assert!(r.passed, "{:?}", r.worst());
    }

    #[test]
    fn intertwines_r() {
        let (a, b) = pair();
        let r = yangian_intertwine(a.labels(), b.labels(), 4).unwrap();
        assert!(r.passed, "{:?}", r.worst());
    }
}
