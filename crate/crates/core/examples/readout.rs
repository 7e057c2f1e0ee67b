//! Fluorescence readout: optimal photon threshold and the shortest
//! measurement time reaching a target error, across cooperativities.

use lctc::cqed::{min_readout_time, optimal_threshold, CavityParams, ReadoutParams};

fn main() -> lctc::Result<()> {
    let p = ReadoutParams::reference();
    println!("C_in = 20: r_bright = {:.4e} /s, r_dark = {:.4e} /s", p.r_bright, p.r_dark);
    for tau in [1e-6, 3e-6, 1e-5] {
        let (n, e) = optimal_threshold(tau, &p);
        println!("  tau = {:.1} us: n_th = {n}, error = {e:.3e}", tau * 1e6);
    }
    for c_in in [2.0, 5.0, 20.0, 100.0] {
        let p = ReadoutParams::from_cavity(&CavityParams::readout_node(c_in)?, 0.9, 100.0, 1.6e-3)?;
        match min_readout_time(0.002, &p) {
            Ok(r) => println!("C_in = {c_in:>5}: tau_meas = {:.3} us (n_th = {})", r.tau * 1e6, r.n_th),
            Err(e) => println!("C_in = {c_in:>5}: {e}"),
        }
    }
    Ok(())
}
