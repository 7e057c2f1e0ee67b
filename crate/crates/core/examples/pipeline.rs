//! Discrete-event run of the multiplexed entanglement pipeline compared
//! with the analytic heralded rate.

use lctc::game::NoiseModel;
use lctc::hardware::{performance, LinkBudget, NodeTimings};
use lctc::simulate::{simulate_pipeline, PipelineConfig, Trigger};

fn main() -> lctc::Result<()> {
    let (timings, link) = (NodeTimings::table2(), LinkBudget::table2());
    let analytic = performance(&timings, &link, &NoiseModel::ideal())?.r_heg;
    for trigger in [Trigger::Unlimited, Trigger::Fixed { rate: 5e3 }, Trigger::Poisson { rate: 5e3 }] {
        let s = simulate_pipeline(&PipelineConfig { timings, link, trigger, duration: 2.0, seed: 7, p_ent: None })?;
        println!(
            "{trigger:?}: {:.0} ± {:.0} pairs/s (analytic {analytic:.0}), consumed {:.0}/s, mean buffer {:.2}",
            s.achieved_pair_rate, s.rate_std_error, s.consumed_rate, s.mean_buffer
        );
    }
    Ok(())
}
