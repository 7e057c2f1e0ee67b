use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{stream_rng, Behavior};
use crate::certify::binomial_pvalue;
use crate::error::{invalid, Result};
use crate::game::{build_game_matrix_general, classical_value, InputDistribution, UtilityTable};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialLog {
    pub rounds: u64,
    pub total_score: f64,
    pub wins: u64,
    pub empirical_omega: f64,
    /// Classical benchmark the p-value is computed against.
    pub omega_c: f64,
    /// `P(K ≥ wins)` for `K ~ Binomial(rounds, ω_C)`.
    pub pvalue: f64,
    pub seed: u64,
}

const STREAM_INPUTS: u64 = 0;
const STREAM_OUTPUTS: u64 = 1;
const STREAM_REFEREE: u64 = 2;

fn pick(cdf: &[f64], r: f64) -> usize {
    cdf.iter().position(|&c| r < c).unwrap_or(cdf.len() - 1)
}

/// Plays `rounds` rounds: inputs from `inputs`, actions from `b`, utility
/// from `u`. A round counts as a win with probability `u(a⊕b|x,y)`.
pub fn simulate_rounds(inputs: &InputDistribution, u: &UtilityTable, b: &Behavior, rounds: u64, seed: u64) -> Result<TrialLog> {
    if rounds == 0 {
        return Err(invalid("need at least one round"));
    }
    inputs.validate()?;
    b.validate(1e-9)?;
    if u.min() < 0.0 || u.max() > 1.0 {
        return Err(invalid("utilities must lie in [0,1] to define a win"));
    }
    let mut input_cdf = [0.0; 4];
    let mut acc = 0.0;
    for (k, c) in input_cdf.iter_mut().enumerate() {
        acc += inputs.p[k >> 1][k & 1];
        *c = acc;
    }
    let mut out_cdf = [[[0.0; 4]; 2]; 2];
    for x in 0..2 {
        for y in 0..2 {
            let mut acc = 0.0;
            for k in 0..4 {
                acc += b.p[x][y][k >> 1][k & 1];
                out_cdf[x][y][k] = acc;
            }
        }
    }
    let mut rng_in = stream_rng(seed, STREAM_INPUTS);
    let mut rng_out = stream_rng(seed, STREAM_OUTPUTS);
    let mut rng_ref = stream_rng(seed, STREAM_REFEREE);
    let mut total = 0.0;
    let mut wins = 0u64;
    for _ in 0..rounds {
        let xy = pick(&input_cdf, rng_in.random::<f64>() * acc_last(&input_cdf));
        let (x, y) = (xy >> 1, xy & 1);
        let ab = pick(&out_cdf[x][y], rng_out.random::<f64>() * out_cdf[x][y][3]);
        let o = (ab >> 1) ^ (ab & 1);
        let util = u.u[x][y][o];
        total += util;
        let win = if util >= 1.0 {
            true
        } else if util <= 0.0 {
            false
        } else {
            rng_ref.random::<f64>() < util
        };
        wins += u64::from(win);
    }
    let m = build_game_matrix_general(inputs, u);
    let base: f64 = (0..4).map(|k| inputs.p[k >> 1][k & 1] * (u.u[k >> 1][k & 1][0] + u.u[k >> 1][k & 1][1]) / 2.0).sum();
    let omega_c = (base + classical_value(&m).0 / 2.0).clamp(0.0, 1.0);
    Ok(TrialLog {
        rounds,
        total_score: total,
        wins,
        empirical_omega: total / rounds as f64,
        omega_c,
        pvalue: binomial_pvalue(wins, rounds, omega_c)?,
        seed,
    })
}

fn acc_last(cdf: &[f64]) -> f64 {
    cdf[cdf.len() - 1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{quantum_value, GameMatrix, NoiseModel};
    use crate::simulate::{behavior_from_strategy, best_classical_behavior};

    #[test]
    fn deterministic_predicate_counts_exactly() {
        let b = best_classical_behavior(&GameMatrix::chsh());
        let log = simulate_rounds(&InputDistribution::uniform(), &UtilityTable::chsh(), &b, 10_000, 7).unwrap();
        assert_eq!(log.wins as f64, log.total_score);
        // The classical optimum loses exactly on one input pair.
        assert!((log.empirical_omega - 0.75).abs() < 0.02);
        assert_eq!(log.omega_c, 0.75);
    }

    #[test]
    fn quantum_rounds_track_quantum_value() {
        let b = behavior_from_strategy(&NoiseModel::ideal(), &quantum_value(&GameMatrix::chsh()).1);
        let n = 1_000_000u64;
        let log = simulate_rounds(&InputDistribution::uniform(), &UtilityTable::chsh(), &b, n, 11).unwrap();
        let w = (1.0 + std::f64::consts::FRAC_1_SQRT_2) / 2.0;
        let sd = (w * (1.0 - w) / n as f64).sqrt();
        assert!((log.empirical_omega - w).abs() < 5.0 * sd);
        assert!(log.pvalue < 1e-100);
    }

    #[test]
    fn same_seed_same_log() {
        let b = behavior_from_strategy(&NoiseModel::new(0.04, 0.002).unwrap(), &quantum_value(&GameMatrix::chsh()).1);
        let f = |s| simulate_rounds(&InputDistribution::uniform(), &UtilityTable::chsh(), &b, 5000, s).unwrap();
        assert_eq!(f(3), f(3));
        assert_ne!(f(3), f(4));
    }

    #[test]
    fn soft_utilities_use_referee_draws() {
        let w = crate::game::UtilityWeights::new(0.3, 0.3).unwrap();
        let u = UtilityTable::load_balancing(w);
        let m = crate::game::build_game_matrix(&InputDistribution::uniform(), &w);
        let b = best_classical_behavior(&m);
        let log = simulate_rounds(&InputDistribution::uniform(), &u, &b, 200_000, 5).unwrap();
        assert!(log.wins as f64 != log.total_score);
        let sd = (0.25 / 200_000f64).sqrt();
        assert!((log.wins as f64 / 2e5 - log.empirical_omega).abs() < 6.0 * sd);
    }
}
