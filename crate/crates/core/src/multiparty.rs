//! Three-party XOR game with a majority-vote utility.
//!
//! Inputs `x = (x₁, x₂, x₃)` are packed into an index with `x_i` at bit
//! `i − 1`. The game is the 8-vector `M_x = P(x)·Σ_o (−1)^o u(o|x)`, where
//! `o` is the parity of the three actions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::error::{invalid, Error, Result};
use crate::numeric::optimize::nelder_mead_max;

pub fn bit(x: usize, party: usize) -> usize {
    (x >> party) & 1
}

pub fn weight(x: usize) -> usize {
    (x & 7).count_ones() as usize
}

pub fn majority(x: usize) -> usize {
    usize::from(weight(x) >= 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultiInputDistribution {
    pub p: [f64; 8],
}

impl MultiInputDistribution {
    pub fn new(p: [f64; 8]) -> Result<Self> {
        if p.iter().any(|&v| !(v >= 0.0)) {
            return Err(invalid("input probabilities must be non-negative"));
        }
        let s: f64 = p.iter().sum();
        if (s - 1.0).abs() > 1e-12 {
            return Err(invalid(format!("input distribution sums to {s}")));
        }
        Ok(Self { p })
    }

    pub fn uniform() -> Self {
        Self { p: [0.125; 8] }
    }

    /// Independent Bernoulli(`p`) inputs: `P(x) = p^wt (1−p)^(3−wt)`.
    pub fn bernoulli(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(invalid(format!("bernoulli parameter {p} outside [0,1]")));
        }
        let mut q = [0.0; 8];
        for (x, v) in q.iter_mut().enumerate() {
            let w = weight(x) as i32;
            *v = p.powi(w) * (1.0 - p).powi(3 - w);
        }
        Self::new(q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreePartyGame {
    pub m: [f64; 8],
    pub beta: f64,
}

impl ThreePartyGame {
    pub fn from_weights(m: [f64; 8]) -> Result<Self> {
        if m.iter().any(|v| !v.is_finite()) {
            return Err(invalid("game weights must be finite"));
        }
        Ok(Self { m, beta: 0.0 })
    }
}

/// Utility `u(o|x)`: the majority parity wins; on mixed inputs a fraction
/// `β` of the utility leaks to the other parity.
pub fn majority_utility(beta: f64) -> [[f64; 2]; 8] {
    let mut u = [[0.0; 2]; 8];
    for (x, ux) in u.iter_mut().enumerate() {
        let soft = if weight(x).is_multiple_of(3) { 0.0 } else { beta };
        ux[majority(x)] = 1.0 - soft;
        ux[1 - majority(x)] = soft;
    }
    u
}

pub fn build_three_party(p: &MultiInputDistribution, beta: f64) -> Result<ThreePartyGame> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(invalid(format!("beta = {beta} outside [0,1]")));
    }
    let u = majority_utility(beta);
    let mut m = [0.0; 8];
    for x in 0..8 {
        m[x] = p.p[x] * (u[x][0] - u[x][1]);
    }
    Ok(ThreePartyGame { m, beta })
}

/// Deterministic local responses: party `i` answers `a[i][x_i]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResponseTable {
    pub a: [[u8; 2]; 3],
}

impl ResponseTable {
    pub fn parity(&self, x: usize) -> usize {
        (0..3).map(|i| self.a[i][bit(x, i)] as usize).fold(0, |acc, v| acc ^ v)
    }
}

/// Best deterministic strategy over all 64 response tables.
pub fn classical_value_three(g: &ThreePartyGame) -> (f64, ResponseTable) {
    let scale = g.m.iter().map(|v| v.abs()).sum::<f64>().max(f64::MIN_POSITIVE);
    let mut best = f64::NEG_INFINITY;
    let mut arg = ResponseTable { a: [[0; 2]; 3] };
    for k in 0u32..64 {
        let t = ResponseTable {
            a: [
                [(k >> 5 & 1) as u8, (k >> 4 & 1) as u8],
                [(k >> 3 & 1) as u8, (k >> 2 & 1) as u8],
                [(k >> 1 & 1) as u8, (k & 1) as u8],
            ],
        };
        let v: f64 = (0..8).map(|x| if t.parity(x) == 0 { g.m[x] } else { -g.m[x] }).sum();
        if v > best + 1e-14 * scale {
            best = v;
            arg = t;
        }
    }
    (best, arg)
}

/// Equatorial GHZ measurement angles: party `i` measures at
/// `φ₀/3 + φ_i·x_i`, giving correlator `cos(φ₀ + Σ φ_i x_i)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GhzAngles {
    pub phi: [f64; 4],
}

impl GhzAngles {
    pub fn phase(&self, x: usize) -> f64 {
        self.phi[0] + (0..3).map(|i| self.phi[i + 1] * bit(x, i) as f64).sum::<f64>()
    }
}

/// `Σ_x M_x·cos(φ₀ + Σ φ_i x_i)`.
pub fn ghz_strategy_value(g: &ThreePartyGame, a: &GhzAngles) -> f64 {
    (0..8).map(|x| g.m[x] * a.phase(x).cos()).sum()
}

fn phasor(g: &ThreePartyGame, phi: &[f64; 3]) -> Complex64 {
    let z = phi.map(|p| Complex64::from_polar(1.0, p));
    let z01 = z[0] * z[1];
    let terms = [Complex64::new(1.0, 0.0), z[0], z[1], z01, z[2], z[0] * z[2], z[1] * z[2], z01 * z[2]];
    terms.iter().zip(&g.m).map(|(t, m)| t * m).sum()
}

fn wrap(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    if (TAU - w).abs() < 1e-12 { 0.0 } else { w }
}

/// GHZ quantum value `Q₃` and optimal angles.
///
/// For fixed `φ₁..φ₃` the best `φ₀` aligns the phasor `Σ M_x e^{iΣφ_i x_i}`
/// with the real axis, so `Q₃` is the maximum of its modulus. That 3-D
/// search runs from a 4×4×4 lattice of starts with Nelder–Mead polish; ties
/// go to the lexicographically smallest angles in `[0, 2π)`.
pub fn quantum_value_three(g: &ThreePartyGame) -> (f64, GhzAngles) {
    let scale: f64 = g.m.iter().map(|v| v.abs()).sum();
    if scale == 0.0 {
        return (0.0, GhzAngles { phi: [0.0; 4] });
    }
    let mut best: Option<(f64, [f64; 3])> = None;
    for k in 0..64 {
        let start = [(k >> 4 & 3) as f64 * PI / 2.0, (k >> 2 & 3) as f64 * PI / 2.0, (k & 3) as f64 * PI / 2.0];
        let (x, _) = nelder_mead_max(|p| phasor(g, p).norm(), start, 0.4, 1e-15 * scale, 1e-10, 4000);
        let x = [wrap(x[0]), wrap(x[1]), wrap(x[2])];
        let v = phasor(g, &x).norm();
        best = match best {
            None => Some((v, x)),
            Some((bv, bx)) => {
                if v > bv + 1e-12 * scale || ((v - bv).abs() <= 1e-12 * scale && x < bx) {
                    Some((v, x))
                } else {
                    Some((bv, bx))
                }
            }
        };
    }
    let (_, x) = best.unwrap();
    let z = phasor(g, &x);
    let phi0 = if z.norm() == 0.0 { 0.0 } else { -z.arg() };
    let angles = GhzAngles { phi: [phi0, x[0], x[1], x[2]] };
    (ghz_strategy_value(g, &angles), angles)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GhzNoise {
    pub eps_ghz: f64,
    pub eps_meas: f64,
}

impl GhzNoise {
    pub fn new(eps_ghz: f64, eps_meas: f64) -> Result<Self> {
        if !(0.0..=7.0 / 8.0).contains(&eps_ghz) {
            return Err(invalid(format!("eps_ghz = {eps_ghz} outside [0, 7/8]")));
        }
        if !(0.0..=0.5).contains(&eps_meas) {
            return Err(invalid(format!("eps_meas = {eps_meas} outside [0, 1/2]")));
        }
        Ok(Self { eps_ghz, eps_meas })
    }
}

/// `ε′ = 1 − (1 − 8ε_GHZ/7)(1 − 2ε_meas)³`.
pub fn ghz_combined_infidelity(n: &GhzNoise) -> f64 {
    1.0 - (1.0 - 8.0 * n.eps_ghz / 7.0) * (1.0 - 2.0 * n.eps_meas).powi(3)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GhzThreshold {
    pub advantage: bool,
    /// `Δω(ε′) = Δω(0) − ε′·(ω_Q(0) − ½)`.
    pub margin: f64,
    /// Largest tolerable `ε′`.
    pub threshold: f64,
    pub omega_c: f64,
    pub omega_q: f64,
}

pub fn ghz_threshold(g: &ThreePartyGame, eps_prime: f64) -> Result<GhzThreshold> {
    let (c, _) = classical_value_three(g);
    let (q, _) = quantum_value_three(g);
    if q <= 0.0 {
        return Err(Error::DegenerateGame);
    }
    let gap0 = (q - c) / 2.0;
    let slope = q / 2.0;
    let margin = gap0 - eps_prime * slope;
    Ok(GhzThreshold {
        advantage: margin > 0.0,
        margin,
        threshold: (gap0 / slope).max(0.0),
        omega_c: (1.0 + c) / 2.0,
        omega_q: (1.0 + (1.0 - eps_prime) * q) / 2.0,
    })
}

/// Conditional distribution of the three actions, indexed `p[x][a]` with
/// `a` packed like `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreePartyBehavior {
    pub p: [[f64; 8]; 8],
}

impl ThreePartyBehavior {
    /// Marginal of the parties in `mask` (bit i = party i) for input `x`.
    pub fn marginal(&self, x: usize, mask: usize, outcome: usize) -> f64 {
        (0..8).filter(|a| a & mask == outcome & mask).map(|a| self.p[x][a]).sum()
    }
}

/// Noisy GHZ behavior: the parity follows `(1 + (−1)^o(1−ε′)cos φ_x)/2` and
/// the four triples of each parity are equally likely.
pub fn behavior_three(eps_prime: f64, a: &GhzAngles) -> ThreePartyBehavior {
    let mut p = [[0.0; 8]; 8];
    for (x, px) in p.iter_mut().enumerate() {
        let e = (1.0 - eps_prime) * a.phase(x).cos();
        for (out, v) in px.iter_mut().enumerate() {
            let sign = if weight(out).is_multiple_of(2) { 1.0 } else { -1.0 };
            *v = (1.0 + sign * e) / 8.0;
        }
    }
    ThreePartyBehavior { p }
}

/// `Σ_x P(x) Σ_a P(a|x)·u(parity(a)|x)`.
pub fn expected_utility_three(p: &MultiInputDistribution, beta: f64, b: &ThreePartyBehavior) -> f64 {
    let u = majority_utility(beta);
    (0..8)
        .map(|x| p.p[x] * (0..8).map(|a| b.p[x][a] * u[x][weight(a) % 2]).sum::<f64>())
        .sum()
}
