//! Derived performance of the 50 km deployment checked against the
//! reference values, plus the operational criteria.

use lctc::game::{GameMatrix, NoiseModel};
use lctc::hardware::{table2_report, Deadlines, LinkBudget, NodeTimings};

fn main() -> lctc::Result<()> {
    let r = table2_report(
        &NodeTimings::table2(),
        &LinkBudget::table2(),
        &NoiseModel::new(0.04, 0.002)?,
        &GameMatrix::chsh(),
        &Deadlines::new(10e-6, 0.1, 0.05),
    )?;
    for row in &r.rows {
        println!(
            "{:<11} {:>12.4e} {:<4} ref {:>10.3e}  {}",
            row.name,
            row.computed,
            row.unit,
            row.reference,
            if row.pass { "ok" } else { "FAIL" }
        );
    }
    println!("\nwith exact fiber loss: transmission {:.4}, p_ent {:.3e}, R_HEG {:.0} /s",
        r.fiber_transmission, r.p_ent_fiber, r.r_heg_fiber);
    let v = &r.verdict;
    println!("fidelity {} rate {} decision {} memory {}", v.fidelity.ok, v.rate.ok, v.decision.ok, v.memory.ok);
    for n in &r.notes {
        println!("note: {n}");
    }
    Ok(())
}
