//! Stochastic validation: Monte Carlo game rounds and a discrete-event model
//! of the time-multiplexed entanglement pipeline.
//!
//! Every run is single-threaded and a pure function of its seed. Each
//! stochastic component draws from its own ChaCha8 stream of that seed.

mod behavior;
mod pipeline;
mod rounds;

pub use behavior::{behavior_from_correlators, behavior_from_strategy, best_classical_behavior, expected_utility, Behavior};
pub use pipeline::{simulate_pipeline, PipelineConfig, PipelineStats, Trigger};
pub use rounds::{simulate_rounds, TrialLog};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent generator for component `stream` of `seed`.
pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
