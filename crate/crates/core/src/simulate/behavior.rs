use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::game::{classical_value, combined_infidelity, GameMatrix, InputDistribution, MeasurementAngles, NoiseModel, UtilityTable};

/// Conditional distribution `P(a, b | x, y)`, indexed `p[x][y][a][b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Behavior {
    pub p: [[[[f64; 2]; 2]; 2]; 2],
}

impl Behavior {
    /// Checks normalization and no-signaling to within `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        for x in 0..2 {
            for y in 0..2 {
                let s: f64 = self.p[x][y].iter().flatten().sum();
                if (s - 1.0).abs() > tol || self.p[x][y].iter().flatten().any(|&v| v < -tol) {
                    return Err(invalid(format!("P(·|{x},{y}) not a distribution (sum {s})")));
                }
            }
        }
        for a in 0..2 {
            for x in 0..2 {
                let m = |y: usize| self.p[x][y][a][0] + self.p[x][y][a][1];
                if (m(0) - m(1)).abs() > tol {
                    return Err(invalid("Alice's marginal depends on Bob's input"));
                }
            }
        }
        for b in 0..2 {
            for y in 0..2 {
                let m = |x: usize| self.p[x][y][0][b] + self.p[x][y][1][b];
                if (m(0) - m(1)).abs() > tol {
                    return Err(invalid("Bob's marginal depends on Alice's input"));
                }
            }
        }
        Ok(())
    }

    /// Correlator `E[x][y] = Σ (−1)^{a⊕b} P(a,b|x,y)`.
    pub fn correlators(&self) -> [[f64; 2]; 2] {
        let mut e = [[0.0; 2]; 2];
        for x in 0..2 {
            for y in 0..2 {
                let q = &self.p[x][y];
                e[x][y] = q[0][0] + q[1][1] - q[0][1] - q[1][0];
            }
        }
        e
    }
}

/// `P(a,b|x,y) = (1 + (−1)^{a⊕b}·E[x][y])/4`.
pub fn behavior_from_correlators(e: &[[f64; 2]; 2]) -> Behavior {
    let mut p = [[[[0.0; 2]; 2]; 2]; 2];
    for x in 0..2 {
        for y in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    let sign = if a == b { 1.0 } else { -1.0 };
                    p[x][y][a][b] = 0.25 * (1.0 + sign * e[x][y]);
                }
            }
        }
    }
    Behavior { p }
}

/// Behavior of a Werner state measured along planar axes with flip noise.
pub fn behavior_from_strategy(n: &NoiseModel, a: &MeasurementAngles) -> Behavior {
    behavior_from_correlators(&a.correlators(combined_infidelity(n)))
}

/// Deterministic behavior of the classical optimum of `m`.
pub fn best_classical_behavior(m: &GameMatrix) -> Behavior {
    let (_, s) = classical_value(m);
    let mut p = [[[[0.0; 2]; 2]; 2]; 2];
    for x in 0..2 {
        for y in 0..2 {
            p[x][y][s.action_a(x)][s.action_b(y)] = 1.0;
        }
    }
    Behavior { p }
}

/// `Σ P(x,y)·P(a,b|x,y)·u(a⊕b|x,y)`.
pub fn expected_utility(inputs: &InputDistribution, u: &UtilityTable, b: &Behavior) -> f64 {
    let mut s = 0.0;
    for x in 0..2 {
        for y in 0..2 {
            for a in 0..2 {
                for bb in 0..2 {
                    s += inputs.p[x][y] * b.p[x][y][a][bb] * u.u[x][y][a ^ bb];
                }
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{build_game_matrix, quantum_value, UtilityWeights};
    use proptest::prelude::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn chsh_angles() -> MeasurementAngles {
        quantum_value(&GameMatrix::chsh()).1
    }

    #[test]
    fn noiseless_chsh_behavior() {
        let b = behavior_from_strategy(&NoiseModel::ideal(), &chsh_angles());
        let e = b.correlators();
        for x in 0..2 {
            for y in 0..2 {
                let want = if x & y == 1 { -FRAC_1_SQRT_2 } else { FRAC_1_SQRT_2 };
                assert!((e[x][y] - want).abs() < 1e-9);
            }
        }
        let w = expected_utility(&InputDistribution::uniform(), &UtilityTable::chsh(), &b);
        assert!((w - (1.0 + FRAC_1_SQRT_2) / 2.0).abs() < 1e-9);
    }

    #[test]
    fn fully_mixed_behavior_is_uniform() {
        let b = behavior_from_strategy(&NoiseModel::new(0.75, 0.0).unwrap(), &chsh_angles());
        assert!(b.p.iter().flatten().flatten().flatten().all(|&v| (v - 0.25).abs() < 1e-15));
    }

    #[test]
    fn partial_noise_scales_value() {
        // ε = 0.1 from ε_s = 0.075 and no flips.
        let b = behavior_from_strategy(&NoiseModel::new(0.075, 0.0).unwrap(), &chsh_angles());
        let w = expected_utility(&InputDistribution::uniform(), &UtilityTable::chsh(), &b);
        assert!((w - (1.0 + 0.9 * FRAC_1_SQRT_2) / 2.0).abs() < 1e-9);
    }

    #[test]
    fn classical_behavior_reaches_classical_value() {
        let b = best_classical_behavior(&GameMatrix::chsh());
        b.validate(0.0).unwrap();
        assert_eq!(expected_utility(&InputDistribution::uniform(), &UtilityTable::chsh(), &b), 0.75);
        let p = InputDistribution::uniform();
        let w = UtilityWeights::new(0.3, 0.1).unwrap();
        let m = build_game_matrix(&p, &w);
        let (c, _) = classical_value(&m);
        let b = best_classical_behavior(&m);
        let got = expected_utility(&p, &UtilityTable::load_balancing(w), &b);
        assert!((got - (1.0 + c) / 2.0).abs() < 1e-15);
        let z = best_classical_behavior(&GameMatrix::new([[0.0; 2]; 2]).unwrap());
        assert_eq!(expected_utility(&p, &UtilityTable::constant(0.4), &z), 0.4);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn strategies_never_signal(eps_s in 0.0f64..0.75, eps_m in 0.0f64..0.5, t in -7.0f64..7.0, p0 in -7.0f64..7.0, p1 in -7.0f64..7.0) {
            let b = behavior_from_strategy(&NoiseModel::new(eps_s, eps_m).unwrap(), &MeasurementAngles { theta: t, phi0: p0, phi1: p1 });
            prop_assert!(b.validate(1e-12).is_ok());
        }
    }
}
