//! Sampled CHSH rounds with a noisy optimal strategy, and the p-value
//! against the classical benchmark.

use lctc::game::{GameMatrix, GameValues, InputDistribution, NoiseModel, UtilityTable};
use lctc::simulate::{behavior_from_strategy, best_classical_behavior, simulate_rounds};

fn main() -> lctc::Result<()> {
    let v = GameValues::of(&GameMatrix::chsh());
    let (inputs, u) = (InputDistribution::uniform(), UtilityTable::chsh());
    for eps_s in [0.0, 0.04, 0.2] {
        let noise = NoiseModel::new(eps_s, 0.002)?;
        let b = behavior_from_strategy(&noise, &v.angles);
        let log = simulate_rounds(&inputs, &u, &b, 100_000, 42)?;
        println!(
            "eps = {:.4}: omega = {:.5} (expected {:.5}), p = {:.2e}",
            noise.combined(),
            log.empirical_omega,
            v.omega_q(noise.combined()),
            log.pvalue
        );
    }
    let log = simulate_rounds(&inputs, &u, &best_classical_behavior(&GameMatrix::chsh()), 100_000, 42)?;
    println!("classical: omega = {:.5}", log.empirical_omega);
    Ok(())
}
