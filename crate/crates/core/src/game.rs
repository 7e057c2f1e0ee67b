//! Two-party binary XOR games.
//!
//! A game is reduced to its 2×2 matrix `M[x][y] = P(x,y)·(u(0|x,y) − u(1|x,y))`,
//! where `o = a ⊕ b` is the parity of the two actions. Larger `Σ M·E` is
//! better, and quantum correlators enter as `E = −(1−ε)·â_x·b̂_y`.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::numeric::optimize::golden_max;

const NORM_TOL: f64 = 1e-12;
const THETA_GRID: usize = 2048;

/// Joint input distribution `P(x, y)`, indexed `p[x][y]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InputDistribution {
    pub p: [[f64; 2]; 2],
}

impl InputDistribution {
    pub fn new(p00: f64, p01: f64, p10: f64, p11: f64) -> Result<Self> {
        let d = Self { p: [[p00, p01], [p10, p11]] };
        d.validate()?;
        Ok(d)
    }

    pub fn uniform() -> Self {
        Self { p: [[0.25; 2]; 2] }
    }

    /// Independent Bernoulli(`p`) inputs for both parties.
    pub fn bernoulli(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(invalid(format!("bernoulli parameter {p} outside [0,1]")));
        }
        let q = 1.0 - p;
        Self::new(q * q, q * p, p * q, p * p)
    }

    /// Correlated family `P(1,1) = 2P(0,1) = 2P(1,0) = p11`, `P(0,0) = 1 − 2·p11`.
    pub fn correlated(p11: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&p11) {
            return Err(invalid(format!("p11 = {p11} outside [0, 1/2]")));
        }
        Self::new(1.0 - 2.0 * p11, p11 / 2.0, p11 / 2.0, p11)
    }

    pub fn validate(&self) -> Result<()> {
        let mut s = 0.0;
        for row in &self.p {
            for &v in row {
                if !(0.0..=1.0).contains(&v) {
                    return Err(invalid(format!("input probability {v} outside [0,1]")));
                }
                s += v;
            }
        }
        if (s - 1.0).abs() > NORM_TOL {
            return Err(invalid(format!("input distribution sums to {s}")));
        }
        Ok(())
    }
}

/// Mismatch penalties `β₁, β₂` of the load-balancing utility.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UtilityWeights {
    pub beta1: f64,
    pub beta2: f64,
}

impl UtilityWeights {
    pub fn new(beta1: f64, beta2: f64) -> Result<Self> {
        for b in [beta1, beta2] {
            if !(0.0..=1.0).contains(&b) {
                return Err(invalid(format!("beta = {b} outside [0,1]")));
            }
        }
        Ok(Self { beta1, beta2 })
    }

    pub fn symmetric(beta: f64) -> Result<Self> {
        Self::new(beta, beta)
    }
}

/// Utility `u(o | x, y)` of parity outcome `o = a ⊕ b`, indexed `u[x][y][o]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UtilityTable {
    pub u: [[[f64; 2]; 2]; 2],
}

impl UtilityTable {
    /// Win iff `a ⊕ b = x·y`.
    pub fn chsh() -> Self {
        let mut u = [[[0.0; 2]; 2]; 2];
        for x in 0..2 {
            for y in 0..2 {
                u[x][y][x & y] = 1.0;
            }
        }
        Self { u }
    }

    /// Target parity `x·y`; the off-diagonal inputs `(0,1)` and `(1,0)` leak
    /// `β₁` and `β₂` of the utility to the other parity.
    pub fn load_balancing(w: UtilityWeights) -> Self {
        let mut u = Self::chsh().u;
        for (x, y, beta) in [(0usize, 1usize, w.beta1), (1, 0, w.beta2)] {
            u[x][y][0] = 1.0 - beta;
            u[x][y][1] = beta;
        }
        Self { u }
    }

    pub fn constant(c: f64) -> Self {
        Self { u: [[[c; 2]; 2]; 2] }
    }

    pub fn min(&self) -> f64 {
        self.u.iter().flatten().flatten().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.u.iter().flatten().flatten().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// True when every entry is exactly 0 or 1.
    pub fn is_predicate(&self) -> bool {
        self.u.iter().flatten().flatten().all(|&v| v == 0.0 || v == 1.0)
    }
}

/// XOR game matrix `M[x][y]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameMatrix {
    pub m: [[f64; 2]; 2],
}

impl GameMatrix {
    pub fn new(m: [[f64; 2]; 2]) -> Result<Self> {
        if m.iter().flatten().any(|v| !v.is_finite()) {
            return Err(invalid("game matrix entries must be finite"));
        }
        Ok(Self { m })
    }

    pub fn chsh() -> Self {
        Self { m: [[0.25, 0.25], [0.25, -0.25]] }
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut m = self.m;
        m.iter_mut().flatten().for_each(|v| *v *= c);
        Self { m }
    }
}

/// Builds `M` for the load-balancing utility with penalties `w`.
pub fn build_game_matrix(p: &InputDistribution, w: &UtilityWeights) -> GameMatrix {
    build_game_matrix_general(p, &UtilityTable::load_balancing(*w))
}

/// Builds `M[x][y] = P(x,y)·(u(0|x,y) − u(1|x,y))` from an arbitrary utility table.
pub fn build_game_matrix_general(p: &InputDistribution, u: &UtilityTable) -> GameMatrix {
    let mut m = [[0.0; 2]; 2];
    for x in 0..2 {
        for y in 0..2 {
            m[x][y] = p.p[x][y] * (u.u[x][y][0] - u.u[x][y][1]);
        }
    }
    GameMatrix { m }
}

/// Planar measurement directions: Alice uses angles `0` and `theta`, Bob
/// uses `phi0` and `phi1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementAngles {
    pub theta: f64,
    pub phi0: f64,
    pub phi1: f64,
}

impl MeasurementAngles {
    pub fn alice(&self, x: usize) -> [f64; 2] {
        let t = if x == 0 { 0.0 } else { self.theta };
        [t.cos(), t.sin()]
    }

    pub fn bob(&self, y: usize) -> [f64; 2] {
        let t = if y == 0 { self.phi0 } else { self.phi1 };
        [t.cos(), t.sin()]
    }

    /// Correlator `E[x][y] = −(1−ε)·â_x·b̂_y`.
    pub fn correlators(&self, eps: f64) -> [[f64; 2]; 2] {
        let mut e = [[0.0; 2]; 2];
        for x in 0..2 {
            for y in 0..2 {
                let a = self.alice(x);
                let b = self.bob(y);
                e[x][y] = -(1.0 - eps) * (a[0] * b[0] + a[1] * b[1]);
            }
        }
        e
    }
}

/// Werner-state infidelity `ε_s` and measurement flip probability `ε_meas`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub eps_s: f64,
    pub eps_meas: f64,
}

impl NoiseModel {
    pub fn new(eps_s: f64, eps_meas: f64) -> Result<Self> {
        if !(0.0..=0.75).contains(&eps_s) {
            return Err(invalid(format!("eps_s = {eps_s} outside [0, 3/4]")));
        }
        if !(0.0..=0.5).contains(&eps_meas) {
            return Err(invalid(format!("eps_meas = {eps_meas} outside [0, 1/2]")));
        }
        Ok(Self { eps_s, eps_meas })
    }

    pub fn ideal() -> Self {
        Self { eps_s: 0.0, eps_meas: 0.0 }
    }

    pub fn combined(&self) -> f64 {
        combined_infidelity(self)
    }
}

/// `ε = 1 − (1 − 4ε_s/3)(1 − 2ε_meas)²`.
pub fn combined_infidelity(n: &NoiseModel) -> f64 {
    let f = 1.0 - 2.0 * n.eps_meas;
    1.0 - (1.0 - 4.0 * n.eps_s / 3.0) * f * f
}

/// Deterministic strategy `a_x = (1 − n_a[x])/2`, `b_y = (1 − n_b[y])/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignAssignment {
    pub n_a: [i8; 2],
    pub n_b: [i8; 2],
}

impl SignAssignment {
    pub fn action_a(&self, x: usize) -> usize {
        usize::from(self.n_a[x] < 0)
    }

    pub fn action_b(&self, y: usize) -> usize {
        usize::from(self.n_b[y] < 0)
    }
}

/// Classical value `C(M)` and the lexicographically smallest maximizer.
pub fn classical_value(g: &GameMatrix) -> (f64, SignAssignment) {
    let scale = g.m.iter().flatten().map(|v| v.abs()).sum::<f64>().max(f64::MIN_POSITIVE);
    let mut best = f64::NEG_INFINITY;
    let mut arg = SignAssignment { n_a: [-1; 2], n_b: [-1; 2] };
    // Bit 3 is n_a0, bit 0 is n_b1; counting up visits sign vectors in
    // lexicographic order with −1 < +1.
    for k in 0u8..16 {
        let s = |bit: u8| if k >> bit & 1 == 1 { 1i8 } else { -1i8 };
        let cand = SignAssignment { n_a: [s(3), s(2)], n_b: [s(1), s(0)] };
        let mut v = 0.0;
        for x in 0..2 {
            for y in 0..2 {
                v += g.m[x][y] * f64::from(cand.n_a[x]) * f64::from(cand.n_b[y]);
            }
        }
        if v > best + 1e-14 * scale {
            best = v;
            arg = cand;
        }
    }
    (best, arg)
}

fn q_theta(g: &GameMatrix, theta: f64) -> f64 {
    let c = theta.cos();
    (0..2)
        .map(|y| {
            let (a, b) = (g.m[0][y], g.m[1][y]);
            (a * a + b * b + 2.0 * a * b * c).max(0.0).sqrt()
        })
        .sum()
}

fn bob_angles(g: &GameMatrix, theta: f64) -> (f64, f64) {
    let phi = |y: usize| {
        let vx = g.m[0][y] + g.m[1][y] * theta.cos();
        let vy = g.m[1][y] * theta.sin();
        if vx == 0.0 && vy == 0.0 {
            0.0
        } else {
            (-vy).atan2(-vx)
        }
    };
    (phi(0), phi(1))
}

/// Value `Σ(−M)·â·b̂` of a planar strategy.
pub fn strategy_value(g: &GameMatrix, a: &MeasurementAngles) -> f64 {
    let e = a.correlators(0.0);
    (0..2).flat_map(|x| (0..2).map(move |y| (x, y))).map(|(x, y)| g.m[x][y] * e[x][y]).sum()
}

/// Quantum value `Q(M)` and an optimal planar strategy.
///
/// Bob's axes are chosen in closed form (antiparallel to `Σ_x M[x][y]·â_x`),
/// leaving a 1-D search over Alice's second axis: a dense grid followed by
/// golden-section refinement around the best grid point.
pub fn quantum_value(g: &GameMatrix) -> (f64, MeasurementAngles) {
    let scale = g.m.iter().flatten().map(|v| v.abs()).sum::<f64>();
    if scale == 0.0 {
        return (0.0, MeasurementAngles { theta: 0.0, phi0: 0.0, phi1: 0.0 });
    }
    let step = 2.0 * PI / THETA_GRID as f64;
    let mut best_k = 0;
    let mut best = f64::NEG_INFINITY;
    for k in 0..THETA_GRID {
        let v = q_theta(g, k as f64 * step);
        if v > best + 1e-13 * scale {
            best = v;
            best_k = k;
        }
    }
    let t0 = best_k as f64 * step;
    let (t_ref, v_ref) = golden_max(|t| q_theta(g, t), t0 - step, t0 + step, 1e-12, 0.0);
    let theta = if v_ref > best { t_ref.rem_euclid(2.0 * PI) } else { t0 };
    let (phi0, phi1) = bob_angles(g, theta);
    let angles = MeasurementAngles { theta, phi0, phi1 };
    (strategy_value(g, &angles), angles)
}

/// Classical and quantum values of one game, computed once.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameValues {
    pub c: f64,
    pub q: f64,
    pub signs: SignAssignment,
    pub angles: MeasurementAngles,
}

impl GameValues {
    pub fn of(g: &GameMatrix) -> Self {
        let (c, signs) = classical_value(g);
        let (q, angles) = quantum_value(g);
        Self { c, q, signs, angles }
    }

    pub fn omega_c(&self) -> f64 {
        (1.0 + self.c) / 2.0
    }

    pub fn omega_q(&self, eps: f64) -> f64 {
        (1.0 + (1.0 - eps) * self.q) / 2.0
    }

    pub fn gap(&self, eps: f64) -> f64 {
        ((1.0 - eps) * self.q - self.c) / 2.0
    }

    pub fn eps_threshold(&self) -> Result<f64> {
        if self.q <= 0.0 {
            return Err(Error::DegenerateGame);
        }
        Ok((1.0 - self.c / self.q).max(0.0))
    }
}

pub fn omega_classical(g: &GameMatrix) -> f64 {
    (1.0 + classical_value(g).0) / 2.0
}

pub fn omega_quantum(eps: f64, g: &GameMatrix) -> f64 {
    (1.0 + (1.0 - eps) * quantum_value(g).0) / 2.0
}

pub fn gap(eps: f64, g: &GameMatrix) -> f64 {
    GameValues::of(g).gap(eps)
}

/// `ε^th = 1 − C/Q`, clamped at 0.
pub fn epsilon_threshold(g: &GameMatrix) -> Result<f64> {
    GameValues::of(g).eps_threshold()
}
