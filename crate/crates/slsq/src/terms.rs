//! Coproduct terms `c · (x₁⋯xₙ) ⊗ (y₁⋯yₘ)` and their evaluation on tensor products.

use crate::error::{Error, Result};
use crate::graded::{graded_kron, re, GradedSpace, SuperMatrix, C64, ONE};

#[derive(Clone, Debug, PartialEq)]
pub struct Term<S> {
    pub coeff: C64,
    pub left: Vec<S>,
    pub right: Vec<S>,
}

impl<S> Term<S> {
    pub fn new(coeff: C64, left: Vec<S>, right: Vec<S>) -> Self {
        Self { coeff, left, right }
    }

    pub fn unit(left: Vec<S>, right: Vec<S>) -> Self {
        Self { coeff: ONE, left, right }
    }
}

/// Product of the letter images, identity for the empty word.
pub fn eval_word<S>(word: &[S], space: &GradedSpace, ev: &impl Fn(&S) -> Result<SuperMatrix>) -> Result<SuperMatrix> {
    let mut m = SuperMatrix::identity(space);
    for s in word {
        m = m.try_mul(&ev(s)?)?;
    }
    Ok(m)
}

/// Matrix of `Σ c·L⊗R` on `A⊗B`, or of its graded flip `Σ (-1)^{p(L)p(R)} c·R⊗L` when `opposite`.
pub fn eval_terms<S>(
    terms: &[Term<S>],
    space_a: &GradedSpace,
    space_b: &GradedSpace,
    ev_a: impl Fn(&S) -> Result<SuperMatrix>,
    ev_b: impl Fn(&S) -> Result<SuperMatrix>,
    opposite: bool,
) -> Result<SuperMatrix> {
    let mut out = SuperMatrix::zeros(&space_a.tensor(space_b));
    let mut parity = None;
    for t in terms {
        let m = if opposite {
            let x = eval_word(&t.right, space_a, &ev_a)?;
            let y = eval_word(&t.left, space_b, &ev_b)?;
            let (px, py) = match (x.parity(), y.parity()) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(Error::UndeclaredParity),
            };
            graded_kron(&x, &y).scale(t.coeff * re(px.koszul(py)))
        } else {
            let x = eval_word(&t.left, space_a, &ev_a)?;
            let y = eval_word(&t.right, space_b, &ev_b)?;
            graded_kron(&x, &y).scale(t.coeff)
        };
        parity = parity.or(m.parity());
        out = out.try_add(&m)?;
    }
    Ok(out.tagged(parity))
}
