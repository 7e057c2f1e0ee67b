//! Rounds needed to certify a quantum advantage at significance alpha, and
//! the rate that implies for a given stationary window.

use lctc::certify::{binomial_pvalue, n_required, n_required_general, rate_required, CertificationQuery, ScoreBounds};
use lctc::game::{GameMatrix, GameValues};

fn main() -> lctc::Result<()> {
    let v = GameValues::of(&GameMatrix::chsh());
    let wc = v.omega_c();
    for eps in [0.0, 0.05, 0.1, 0.2, 0.28] {
        let wq = v.omega_q(eps);
        let n = n_required(wc, wq, 0.05)?;
        let general = n_required_general(wc, wq, 0.05, &ScoreBounds::unit())?;
        let r = rate_required(&CertificationQuery { omega_c: wc, omega_q: wq, alpha: 0.05, t_env: 0.1 })?;
        println!("eps = {eps:<5} n_req = {n:>9}  score bound = {general:>9}  R_req(100 ms) = {r:.4e} /s");
    }
    let m = 1000;
    let wins = 800;
    println!("\np-value of {wins}/{m} wins against omega_C = 0.75: {:.3e}", binomial_pvalue(wins, m, 0.75)?);
    Ok(())
}
