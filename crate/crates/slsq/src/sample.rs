//! Seeded label draws for the verification suites.
//!
//! Every case gets its own ChaCha8 stream from `(seed, stream, index)` through splitmix64,
//! so results do not depend on thread scheduling.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graded::{C64, ONE};
use crate::halg::RepLabels;
use crate::qalg::{q_labels, QRepLabels};
use crate::yangian::rho_of;

const MAX_TRIES: usize = 64;

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// FNV-1a of a stream name.
pub fn stream_id(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

pub fn sub_seed(seed: u64, stream: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed ^ stream).wrapping_add(index))
}

pub struct Sampler {
    rng: ChaCha8Rng,
    offshell: bool,
}

impl Sampler {
    pub fn new(seed: u64, offshell: bool) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), offshell }
    }

    pub fn for_case(seed: u64, stream: &str, index: u64, offshell: bool) -> Self {
        Self::new(sub_seed(seed, stream_id(stream), index), offshell)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.random_bool(0.5)
    }

    pub fn phase(&mut self) -> C64 {
        C64::from_polar(1.0, self.uniform(-PI, PI))
    }

    /// Log-uniform modulus in `[lo, hi]`, uniform phase.
    pub fn annulus(&mut self, lo: f64, hi: f64) -> C64 {
        let r = self.uniform(lo.ln(), hi.ln()).exp();
        C64::from_polar(r, self.uniform(-PI, PI))
    }

    /// `e^{iθ}`, or modulus off the unit circle when off-shell; kept away from `ν⁴ = 1`.
    pub fn nu(&mut self) -> C64 {
        loop {
            let nu = if self.offshell {
                let r = if self.coin() { self.uniform(0.7, 0.95) } else { self.uniform(1.05, 1.4) };
                C64::from_polar(r, self.uniform(-PI, PI))
            } else {
                self.phase()
            };
            if (nu.powi(4) - ONE).norm() > 0.2 {
                return nu;
            }
        }
    }

    /// `q = 1 + re^{iφ}` with `0.05 ≤ r ≤ 0.3`.
    pub fn q(&mut self) -> C64 {
        ONE + C64::from_polar(self.uniform(0.05, 0.3), self.uniform(-PI, PI))
    }

    pub fn alpha(&mut self) -> [C64; 2] {
        [self.annulus(0.5, 2.0), self.annulus(0.5, 2.0)]
    }

    pub fn labels(&mut self, alpha: [C64; 2]) -> RepLabels {
        RepLabels::new(self.annulus(0.5, 2.0), self.nu(), alpha[0], alpha[1]).expect("annulus draws are nonzero")
    }

    /// Labels sharing `α` whose `R`-matrices are generic: nonvanishing coefficients and no coincident `ν`.
    pub fn labels_set<const N: usize>(&mut self) -> [RepLabels; N] {
        let alpha = self.alpha();
        loop {
            let out: [RepLabels; N] = std::array::from_fn(|_| self.labels(alpha));
            if separated(&out.map(|l| l.nu.powi(2))) {
                return out;
            }
        }
    }

    /// Pair with `α` scaled so `|ρ| ≤ 1` on both factors.
    pub fn yangian_pair(&mut self) -> (RepLabels, RepLabels) {
        let [a, b] = self.labels_set::<2>();
        let s = [&a, &b].iter().filter_map(|l| rho_of(l).ok()).fold(1.0_f64, |m, r| m.max(r.norm()));
        let scale = |l: &RepLabels| RepLabels::new(l.gamma, l.nu, l.alpha1 / s, l.alpha2 / s).expect("nonzero");
        (scale(&a), scale(&b))
    }

    /// `(γ, ν)` and `(±γ, ν⁻¹)` with shared `α`.
    pub fn singlet_pair(&mut self) -> (RepLabels, RepLabels) {
        let alpha = self.alpha();
        let a = self.labels(alpha);
        let g = if self.coin() { a.gamma } else { -a.gamma };
        (a, RepLabels::new(g, ONE / a.nu, a.alpha1, a.alpha2).expect("nonzero"))
    }

    /// Deformed labels from `q^{λ₁/2}` on a drawn root of the shortening condition.
    pub fn q_labels(&mut self, q: C64, alpha: [C64; 2]) -> Option<QRepLabels> {
        for _ in 0..MAX_TRIES {
            let lambda1 = self.annulus(0.2, 1.5);
            let nu = self.nu();
            let root = usize::from(self.coin());
            let s = |b: bool| if b { 1 } else { -1 };
            let (ks, gs) = (s(self.coin()), s(self.coin()));
            if let Ok(l) = q_labels(lambda1, nu, q, alpha, root, ks, gs) {
                let g = l.gamma.norm();
                if (0.2..5.0).contains(&g) && l.kp2.norm() < 10.0 && l.kp2.norm() > 0.1 {
                    return Some(l);
                }
            }
        }
        None
    }

    /// Deformed labels sharing `q` and `α`.
    pub fn q_labels_set<const N: usize>(&mut self) -> Option<[QRepLabels; N]> {
        for _ in 0..MAX_TRIES {
            let q = self.q();
            let alpha = self.alpha();
            let mut v = Vec::with_capacity(N);
            for _ in 0..N {
                v.push(self.q_labels(q, alpha)?);
            }
            let arr: [QRepLabels; N] = v.try_into().ok()?;
            if separated(&arr.each_ref().map(|l| l.nu * l.nu * l.kp1 * l.kp2)) {
                return Some(arr);
            }
        }
        None
    }

    /// `(labels, labels′)` with `q^{λ̃ᵢ} = 1`, `ν̃ = 1`.
    pub fn q_singlet_pair(&mut self) -> Option<(QRepLabels, QRepLabels)> {
        let q = self.q();
        let alpha = self.alpha();
        let a = self.q_labels(q, alpha)?;
        let g = if self.coin() { a.gamma } else { -a.gamma };
        let b = QRepLabels::new(g, ONE / a.nu, q, ONE / a.kp1, ONE / a.kp2, alpha).ok()?;
        Some((a, b))
    }
}

fn separated(v: &[C64]) -> bool {
    v.iter().enumerate().all(|(i, a)| v[i + 1..].iter().all(|b| (a - b).norm() > 0.05))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let mut a = Sampler::for_case(7, "ybe", 3, false);
        let mut b = Sampler::for_case(7, "ybe", 3, false);
        let mut c = Sampler::for_case(7, "ybe", 4, false);
        let (x, y, z) = (a.annulus(0.5, 2.0), b.annulus(0.5, 2.0), c.annulus(0.5, 2.0));
        assert_eq!(x, y);
        assert_ne!(x, z);
        assert_ne!(stream_id("ybe"), stream_id("hopf"));
    }

    #[test]
    fn draws_respect_ranges() {
        let mut s = Sampler::new(11, false);
        for _ in 0..200 {
            let z = s.annulus(0.5, 2.0);
            assert!((0.5..=2.0).contains(&z.norm()));
            assert!(((s.nu().norm()) - 1.0).abs() < 1e-12);
            assert!((s.q() - ONE).norm() <= 0.3);
        }
        let mut off = Sampler::new(11, true);
        assert!((off.nu().norm() - 1.0).abs() > 0.04);
    }

    #[test]
    fn compatible_pairs() {
        let mut s = Sampler::new(5, false);
        let (a, b) = s.singlet_pair();
        assert!((a.lambda1() + b.lambda1()).norm() < 1e-12);
        let (a, b) = s.yangian_pair();
        assert!(rho_of(&a).unwrap().norm() <= 1.0 + 1e-12 && rho_of(&b).unwrap().norm() <= 1.0 + 1e-12);
        let (qa, qb) = s.q_singlet_pair().unwrap();
        assert!((qa.kp1 * qb.kp1 - ONE).norm() < 1e-12);
        assert!(s.q_labels_set::<3>().is_some());
    }
}
