//! Three-party majority game: classical and GHZ values, optimal angles,
//! the tolerable GHZ infidelity, and where an advantage exists.

use lctc::multiparty::{
    build_three_party, classical_value_three, ghz_combined_infidelity, ghz_threshold, quantum_value_three, GhzNoise,
    MultiInputDistribution,
};

fn main() -> lctc::Result<()> {
    let g = build_three_party(&MultiInputDistribution::uniform(), 0.0)?;
    let (c, _) = classical_value_three(&g);
    let (q, a) = quantum_value_three(&g);
    println!("omega_C = {:.6}  omega_Q = {:.6}  angles = {:?}", (1.0 + c) / 2.0, (1.0 + q) / 2.0, a.phi);
    let eps = ghz_combined_infidelity(&GhzNoise::new(0.1, 0.01)?);
    let t = ghz_threshold(&g, eps)?;
    println!("eps' = {eps:.4}: threshold {:.6}, margin {:.5}, advantage {}", t.threshold, t.margin, t.advantage);

    println!("\ngap (x1e3) over beta (rows) and Bernoulli p (columns)");
    for b in [0.0, 0.2, 0.4, 0.5, 0.7] {
        let row: Vec<String> = [0.1, 0.3, 0.5, 0.7, 0.9]
            .iter()
            .map(|&p| {
                let g = build_three_party(&MultiInputDistribution::bernoulli(p).unwrap(), b).unwrap();
                format!("{:6.2}", 500.0 * (quantum_value_three(&g).0 - classical_value_three(&g).0))
            })
            .collect();
        println!("  beta {b:.1}: {}", row.join(" "));
    }
    Ok(())
}
