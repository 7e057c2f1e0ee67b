use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use rand::Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use super::stream_rng;
use crate::error::{invalid, Error, Result};
use crate::hardware::{decision_latency, ent_success_prob, link_latency, trial_period, LinkBudget, NodeTimings};

/// When decisions consume buffered pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Trigger {
    /// Every pair is consumed the moment it is heralded.
    Unlimited,
    /// Decisions at a fixed rate (1/s).
    Fixed { rate: f64 },
    /// Decisions as a Poisson process (1/s).
    Poisson { rate: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub timings: NodeTimings,
    pub link: LinkBudget,
    pub trigger: Trigger,
    /// Simulated time in s.
    pub duration: f64,
    pub seed: u64,
    /// Replaces the link-budget success probability when set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_ent: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineStats {
    pub attempts: u64,
    pub heralds: u64,
    pub successes: u64,
    pub consumed: u64,
    /// Heralds still in flight when the run ends.
    pub in_flight: u64,
    pub triggers: u64,
    /// Successful heralds per simulated second.
    pub achieved_pair_rate: f64,
    /// Poisson standard error of the pair rate.
    pub rate_std_error: f64,
    pub consumed_rate: f64,
    pub mean_buffer: f64,
    pub max_buffer: u64,
    /// Launch slots skipped because every memory was busy.
    pub channel_idle_fraction: f64,
    /// Triggers that found the buffer empty.
    pub stall_fraction: f64,
    pub p_ent: f64,
    pub duration: f64,
    pub seed: u64,
}

const PS: f64 = 1e12;

// Event kinds in tie-break order.
const HERALD: u8 = 0;
const TRIGGER: u8 = 1;
const RELEASE: u8 = 2;
const LAUNCH: u8 = 3;

const STREAM_HERALD: u64 = 0;
const STREAM_TRIGGER: u64 = 1;

fn to_ps(s: f64) -> u64 {
    (s * PS).round() as u64
}

/// Event-driven run of the time-multiplexed pipeline.
///
/// Time is kept in integer picoseconds. Each channel fires a launch every
/// `τ_e` on its lowest-index free memory; the herald returns `τ_e + τ_link`
/// later. Failed heralds free the memory after `τ_res`; consumed pairs hold
/// it for `τ_dec + τ_res`. Simultaneous events resolve as herald, trigger,
/// release, launch, then by channel and memory index.
pub fn simulate_pipeline(c: &PipelineConfig) -> Result<PipelineStats> {
    c.timings.validate()?;
    c.link.validate()?;
    if !(c.duration > 0.0) {
        return Err(Error::Config("duration must be positive".into()));
    }
    let p_ent = c.p_ent.unwrap_or_else(|| ent_success_prob(&c.timings, &c.link));
    if !(0.0..=1.0).contains(&p_ent) {
        return Err(invalid(format!("p_ent = {p_ent} outside [0,1]")));
    }
    let trigger_gap = match c.trigger {
        Trigger::Unlimited => None,
        Trigger::Fixed { rate } | Trigger::Poisson { rate } => {
            if !(rate > 0.0) {
                return Err(Error::Config("trigger rate must be positive".into()));
            }
            Some(rate)
        }
    };

    let tau_e = to_ps(trial_period(&c.timings));
    let herald_delay = tau_e + to_ps(link_latency(&c.link));
    let fail_hold = to_ps(c.timings.tau_res);
    let use_hold = to_ps(decision_latency(&c.timings) + c.timings.tau_res);
    let end = to_ps(c.duration);
    let n_ch = c.link.n_ch as usize;
    let n_a = c.timings.n_a as u32;

    let mut rng_herald = stream_rng(c.seed, STREAM_HERALD);
    let mut rng_trigger = stream_rng(c.seed, STREAM_TRIGGER);
    let exp = match c.trigger {
        Trigger::Poisson { rate } => Some(Exp::new(rate).map_err(|e| invalid(e.to_string()))?),
        _ => None,
    };
    let next_trigger_gap = |rng: &mut rand_chacha::ChaCha8Rng| -> u64 {
        match (c.trigger, exp.as_ref()) {
            (Trigger::Poisson { .. }, Some(d)) => to_ps(d.sample(rng)).max(1),
            _ => to_ps(1.0 / trigger_gap.unwrap_or(1.0)).max(1),
        }
    };

    let mut free: Vec<BinaryHeap<Reverse<u32>>> = (0..n_ch).map(|_| (0..n_a).map(Reverse).collect()).collect();
    let mut next_launch = vec![0u64; n_ch];
    let mut events: BinaryHeap<Reverse<(u64, u8, u32, u32)>> = BinaryHeap::new();
    if trigger_gap.is_some() {
        let first = next_trigger_gap(&mut rng_trigger);
        events.push(Reverse((first, TRIGGER, 0, 0)));
    }
    let mut buffer: VecDeque<(u32, u32)> = VecDeque::new();

    let (mut attempts, mut heralds, mut successes, mut consumed) = (0u64, 0u64, 0u64, 0u64);
    let (mut triggers, mut stalls, mut idle_slots, mut slots) = (0u64, 0u64, 0u64, 0u64);
    let mut max_buffer = 0u64;
    let mut buffer_area = 0.0f64;
    let mut last_t = 0u64;

    loop {
        let (lc, lt) = next_launch.iter().enumerate().map(|(ch, &t)| (ch, t)).min_by_key(|&(ch, t)| (t, ch)).unwrap();
        let launch_key = (lt, LAUNCH, lc as u32, 0u32);
        let from_heap = matches!(events.peek(), Some(Reverse(k)) if *k < launch_key);
        let key = if from_heap { events.peek().unwrap().0 } else { launch_key };
        let (t, kind, ch, mem) = key;
        if t > end {
            break;
        }
        if from_heap {
            events.pop();
        }
        buffer_area += buffer.len() as f64 * (t - last_t) as f64;
        last_t = t;
        match kind {
            LAUNCH => {
                slots += 1;
                match free[ch as usize].pop() {
                    Some(Reverse(m)) => {
                        attempts += 1;
                        events.push(Reverse((t + herald_delay, HERALD, ch, m)));
                    }
                    None => idle_slots += 1,
                }
                next_launch[ch as usize] = t + tau_e;
            }
            HERALD => {
                heralds += 1;
                if rng_herald.random::<f64>() < p_ent {
                    successes += 1;
                    if trigger_gap.is_none() {
                        consumed += 1;
                        events.push(Reverse((t + use_hold, RELEASE, ch, mem)));
                    } else {
                        buffer.push_back((ch, mem));
                        max_buffer = max_buffer.max(buffer.len() as u64);
                    }
                } else {
                    events.push(Reverse((t + fail_hold, RELEASE, ch, mem)));
                }
            }
            TRIGGER => {
                triggers += 1;
                match buffer.pop_front() {
                    Some((bch, bmem)) => {
                        consumed += 1;
                        events.push(Reverse((t + use_hold, RELEASE, bch, bmem)));
                    }
                    None => stalls += 1,
                }
                let gap = next_trigger_gap(&mut rng_trigger);
                events.push(Reverse((t + gap, TRIGGER, 0, 0)));
            }
            RELEASE => free[ch as usize].push(Reverse(mem)),
            _ => unreachable!(),
        }
    }
    buffer_area += buffer.len() as f64 * (end - last_t) as f64;
    let in_flight = events.iter().filter(|Reverse(k)| k.1 == HERALD).count() as u64;
    let duration = end as f64 / PS;
    Ok(PipelineStats {
        attempts,
        heralds,
        successes,
        consumed,
        in_flight,
        triggers,
        achieved_pair_rate: successes as f64 / duration,
        rate_std_error: (successes as f64).sqrt() / duration,
        consumed_rate: consumed as f64 / duration,
        mean_buffer: buffer_area / end as f64,
        max_buffer,
        channel_idle_fraction: if slots == 0 { 0.0 } else { idle_slots as f64 / slots as f64 },
        stall_fraction: if triggers == 0 { 0.0 } else { stalls as f64 / triggers as f64 },
        p_ent,
        duration,
        seed: c.seed,
    })
}
