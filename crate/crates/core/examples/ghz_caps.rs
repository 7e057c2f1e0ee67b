//! Three-node GHZ generation by photon reflection: fidelity, success
//! probability and attempt rate against cooperativity and pulse width.

use lctc::cqed::{ghz_attempt_rate, ghz_generation, CavityParams, GhzNetworkSpec, PhotonSpectrum};

fn main() -> lctc::Result<()> {
    for sg in [0.12, 0.34] {
        println!("sigma_t * gamma = {sg}");
        for c_in in [1.0, 3.0, 10.0, 30.0, 100.0] {
            let node = CavityParams::telecom_node(c_in)?;
            let sigma_t = sg / node.gamma;
            let o = ghz_generation(&GhzNetworkSpec::equal(node, PhotonSpectrum::new(sigma_t)?))?;
            let rate = ghz_attempt_rate(o.p_success, sigma_t, 10.0, 1.0)?;
            println!(
                "  C_in = {c_in:>5}: 1 - F = {:.4}, p = {:.3}, R0 = {:.3e} /s",
                o.infidelity(),
                o.p_success,
                rate
            );
        }
    }
    Ok(())
}
