//! Classical and quantum values of CHSH and a load-balancing game, and how
//! the quantum advantage shrinks with noise.

use lctc::game::{
    build_game_matrix, combined_infidelity, GameMatrix, GameValues, InputDistribution, NoiseModel, UtilityWeights,
};

fn main() -> lctc::Result<()> {
    let chsh = GameValues::of(&GameMatrix::chsh());
    println!("CHSH  C = {:.6}  Q = {:.6}", chsh.c, chsh.q);
    println!("      omega_C = {:.6}  omega_Q = {:.6}", chsh.omega_c(), chsh.omega_q(0.0));
    println!("      eps_th = {:.6}", chsh.eps_threshold()?);

    let noise = NoiseModel::new(0.04, 0.002)?;
    let eps = combined_infidelity(&noise);
    println!("eps_s = 0.04, eps_meas = 0.002  ->  eps = {eps:.6}, gap = {:.6}", chsh.gap(eps));

    println!("\nload balancing, correlated inputs P(1,1) = 0.4");
    for (b1, b2) in [(0.0, 0.0), (0.2, 0.1), (0.4, 0.2), (0.5, 0.5)] {
        let m = build_game_matrix(&InputDistribution::correlated(0.4)?, &UtilityWeights::new(b1, b2)?);
        let v = GameValues::of(&m);
        let th = v.eps_threshold().map(|t| format!("{t:.4}")).unwrap_or_else(|_| "-".into());
        let a = v.angles;
        println!(
            "  beta = ({b1}, {b2})  gap = {:.5}  eps_th = {th}  theta = {:.4}  phi = ({:.4}, {:.4})",
            v.gap(0.0),
            a.theta,
            a.phi0,
            a.phi1
        );
    }
    Ok(())
}
