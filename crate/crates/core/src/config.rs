//! TOML run configuration.
//!
//! A file names a `preset` (default `table2`) and overrides any of its
//! keys. Unknown keys are rejected and every dimensioned value carries a
//! unit suffix. Cavity rates are written as `*_over_2pi` frequencies and
//! converted to rad/s on use.

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::path::Path;

use crate::certify::ScoreBounds;
use crate::cqed::{CavityParams, ReadoutParams};
use crate::error::{Error, Result};
use crate::game::{build_game_matrix_general, GameMatrix, InputDistribution, NoiseModel, UtilityTable, UtilityWeights};
use crate::hardware::{Deadlines, LinkBudget, NodeTimings};
use crate::multiparty::{build_three_party, GhzNoise, MultiInputDistribution, ThreePartyGame};
use crate::simulate::{PipelineConfig, Trigger};
use crate::units::{Attenuation, Frequency, Length, Time, Velocity};

pub const PRESETS: [&str; 5] = ["chsh", "table2", "hft", "grid", "loadbalance"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub preset: String,
    pub game: GameSection,
    pub noise: NoiseSection,
    pub hardware: HardwareSection,
    pub certification: CertificationSection,
    pub simulation: SimulationSection,
    pub sweep: SweepSection,
    pub multiparty: MultipartySection,
    pub cqed: CqedSection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UtilityKind {
    Chsh,
    LoadBalancing,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputKind {
    Uniform,
    Bernoulli,
    Correlated,
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameSection {
    pub utility: UtilityKind,
    pub beta1: f64,
    pub beta2: f64,
    pub inputs: InputKind,
    /// Bernoulli parameter, or `P(1,1)` for correlated inputs.
    pub p: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probabilities: Option<[[f64; 2]; 2]>,
    /// `table[x][y][o]` for `utility = "table"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<[[[f64; 2]; 2]; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSection {
    pub eps_s: f64,
    pub eps_meas: f64,
    /// Two-photon interference trace purity; replaces `eps_s` by `(1−V)/2`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tpi_purity: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HardwareSection {
    pub tau_p: Time,
    pub tau_swap: Time,
    pub tau_rot: Time,
    pub tau_meas: Time,
    pub tau_res: Time,
    pub tau_mem: Time,
    pub n_a: u64,
    pub p_e: f64,
    pub length: Length,
    pub attenuation: Attenuation,
    pub group_velocity: Velocity,
    pub eta_det: f64,
    pub eta_misc: f64,
    pub dark_rate: Frequency,
    pub n_ch: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub link_transmission: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificationSection {
    pub alpha: f64,
    pub t_env: Time,
    pub t_loc: Time,
    pub t_comm: Time,
    /// Score range for non-predicate utilities; defaults to the table's range.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub score_bounds: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimMode {
    Rounds,
    Pipeline,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TriggerKind {
    Unlimited,
    Fixed,
    Poisson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSection {
    pub mode: SimMode,
    pub seed: u64,
    pub rounds: u64,
    pub duration: Time,
    pub trigger: TriggerKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trigger_rate: Option<Frequency>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_ent: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    /// Combined infidelity ε: required rate against the link's rate.
    Eps,
    /// Link length in km.
    LengthKm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub parameter: SweepParameter,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub spacing: Spacing,
    pub t_env: Vec<Time>,
    pub alpha: Vec<f64>,
    /// Points per axis of the `β × p` gap landscape.
    pub grid: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultipartySection {
    pub beta: f64,
    pub inputs: InputKind,
    pub p: f64,
    pub eps_ghz: f64,
    pub eps_meas: f64,
    pub grid: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KappaExRule {
    /// `κ_ex = g + 2κ_in`
    GPlus2KappaIn,
    /// `κ_ex = (g + 2κ_in)/3`
    Third,
}

impl KappaExRule {
    fn apply(self, g: f64, kin: f64) -> f64 {
        match self {
            KappaExRule::GPlus2KappaIn => g + 2.0 * kin,
            KappaExRule::Third => (g + 2.0 * kin) / 3.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CooperativitySweep {
    pub c_in_min: f64,
    pub c_in_max: f64,
    pub c_in_steps: usize,
}

impl CooperativitySweep {
    pub fn values(&self) -> Result<Vec<f64>> {
        spaced(self.c_in_min, self.c_in_max, self.c_in_steps, Spacing::Log)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GhzSection {
    pub g_over_2pi: Frequency,
    pub gamma_over_2pi: Frequency,
    pub kappa_ex: KappaExRule,
    pub sigma_gamma: Vec<f64>,
    pub k_window: f64,
    pub p_e_src: f64,
    #[serde(flatten)]
    pub sweep: CooperativitySweep,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReadoutSection {
    pub g_over_2pi: Frequency,
    pub gamma_over_2pi: Frequency,
    pub kappa_ex: KappaExRule,
    pub c_in: f64,
    pub eta_det: f64,
    pub detuning_over_gamma: f64,
    pub t_life: Time,
    pub targets: Vec<f64>,
    #[serde(flatten)]
    pub sweep: CooperativitySweep,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CqedSection {
    pub ghz: GhzSection,
    pub readout: ReadoutSection,
}

/// `steps` points from `start` to `stop` inclusive.
pub fn spaced(start: f64, stop: f64, steps: usize, spacing: Spacing) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::Config(format!("sweep needs at least 2 steps, got {steps}")));
    }
    if !(start.is_finite() && stop.is_finite()) {
        return Err(Error::Config("sweep bounds must be finite".into()));
    }
    let n = (steps - 1) as f64;
    Ok(match spacing {
        Spacing::Linear => (0..steps).map(|i| start + (stop - start) * i as f64 / n).collect(),
        Spacing::Log => {
            if !(start > 0.0 && stop > 0.0) {
                return Err(Error::Config("log sweeps need positive bounds".into()));
            }
            let (a, b) = (start.ln(), stop.ln());
            (0..steps)
                .map(|i| if i == 0 { start } else if i == steps - 1 { stop } else { (a + (b - a) * i as f64 / n).exp() })
                .collect()
        }
    })
}

fn t(v: f64) -> Time {
    Time::new(v)
}

impl RunConfig {
    /// Baseline shared by every preset: the 50 km deployment, CHSH and
    /// a 100 ms stationary window.
    fn table2() -> Self {
        let nt = NodeTimings::table2();
        let lb = LinkBudget::table2();
        RunConfig {
            preset: "table2".into(),
            game: GameSection {
                utility: UtilityKind::Chsh,
                beta1: 0.0,
                beta2: 0.0,
                inputs: InputKind::Uniform,
                p: 0.5,
                probabilities: None,
                table: None,
            },
            noise: NoiseSection { eps_s: 0.04, eps_meas: 0.002, tpi_purity: None },
            hardware: HardwareSection {
                tau_p: t(nt.tau_p),
                tau_swap: t(nt.tau_swap),
                tau_rot: t(nt.tau_rot),
                tau_meas: t(nt.tau_meas),
                tau_res: t(nt.tau_res),
                tau_mem: t(nt.tau_mem),
                n_a: nt.n_a,
                p_e: nt.p_e,
                length: Length::new(lb.length_km * 1e3),
                attenuation: Attenuation::new(lb.alpha_att),
                group_velocity: Velocity::new(lb.v_g),
                eta_det: lb.eta_det,
                eta_misc: lb.eta_misc,
                dark_rate: Frequency::new(lb.dark_rate),
                n_ch: lb.n_ch,
                link_transmission: lb.link_transmission,
            },
            certification: CertificationSection {
                alpha: 0.05,
                t_env: t(0.1),
                t_loc: t(10e-6),
                t_comm: t(250e-6),
                score_bounds: None,
            },
            simulation: SimulationSection {
                mode: SimMode::Both,
                seed: 1,
                rounds: 1_000_000,
                duration: t(1.0),
                trigger: TriggerKind::Unlimited,
                trigger_rate: None,
                p_ent: None,
            },
            sweep: SweepSection {
                parameter: SweepParameter::Eps,
                start: 0.0,
                stop: 0.29,
                steps: 59,
                spacing: Spacing::Linear,
                t_env: vec![t(0.01), t(0.1), t(1.0), t(10.0)],
                alpha: vec![5e-2, 1e-3],
                grid: 50,
            },
            multiparty: MultipartySection { beta: 0.0, inputs: InputKind::Uniform, p: 0.5, eps_ghz: 0.0, eps_meas: 0.0, grid: 50 },
            cqed: CqedSection {
                ghz: GhzSection {
                    g_over_2pi: Frequency::new(3e6),
                    gamma_over_2pi: Frequency::new(0.24e6),
                    kappa_ex: KappaExRule::GPlus2KappaIn,
                    sigma_gamma: vec![0.12, 0.34],
                    k_window: 10.0,
                    p_e_src: 1.0,
                    sweep: CooperativitySweep { c_in_min: 1.0, c_in_max: 100.0, c_in_steps: 21 },
                },
                readout: ReadoutSection {
                    g_over_2pi: Frequency::new(3e6),
                    gamma_over_2pi: Frequency::new(91e3),
                    kappa_ex: KappaExRule::Third,
                    c_in: 20.0,
                    eta_det: 0.9,
                    detuning_over_gamma: 100.0,
                    t_life: t(1.6e-3),
                    targets: vec![0.002, 0.01],
                    sweep: CooperativitySweep { c_in_min: 1.0, c_in_max: 100.0, c_in_steps: 21 },
                },
            },
        }
    }

    pub fn preset(name: &str) -> Result<Self> {
        let mut c = Self::table2();
        c.preset = name.into();
        let lb = |c: &mut Self, b1: f64, b2: f64| {
            c.game.utility = UtilityKind::LoadBalancing;
            c.game.beta1 = b1;
            c.game.beta2 = b2;
        };
        match name {
            "table2" => {}
            "chsh" => {
                c.noise = NoiseSection { eps_s: 0.0, eps_meas: 0.0, tpi_purity: None };
            }
            // Decision window 1–10 µs, communication > 100 µs, stationarity 1–10 s.
            "hft" => {
                lb(&mut c, 0.1, 0.1);
                c.certification.t_loc = t(3.16e-6);
                c.certification.t_comm = t(100e-6);
                c.certification.t_env = t(3.16);
            }
            // 1–10 ms, 100 ms – 1 s, > 1 min.
            "grid" => {
                lb(&mut c, 0.1, 0.1);
                c.certification.t_loc = t(3.16e-3);
                c.certification.t_comm = t(0.316);
                c.certification.t_env = t(60.0);
            }
            // 1–10 µs, 10 µs – 10 ms, 10 ms – 10 s; asymmetric load.
            "loadbalance" => {
                lb(&mut c, 0.2, 0.1);
                c.certification.t_loc = t(3.16e-6);
                c.certification.t_comm = t(316e-6);
                c.certification.t_env = t(0.316);
            }
            other => {
                return Err(Error::Config(format!("unknown preset `{other}` (expected one of {})", PRESETS.join(", "))))
            }
        }
        Ok(c)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let user: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        let name = match user.get("preset") {
            None => "table2".to_string(),
            Some(toml::Value::String(s)) => s.clone(),
            Some(_) => return Err(Error::Config("`preset` must be a string".into())),
        };
        let base = toml::Table::try_from(Self::preset(&name)?).map_err(|e| Error::Config(e.to_string()))?;
        let merged = merge(base, user);
        let cfg: Self = merged.try_into().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Builds every derived object once so that bad values surface as
    /// configuration errors rather than mid-run.
    pub fn validate(&self) -> Result<()> {
        let as_cfg = |e: Error| match e {
            Error::Config(_) => e,
            other => Error::Config(other.to_string()),
        };
        self.game_matrix().map_err(as_cfg)?;
        self.noise().map_err(as_cfg)?;
        self.timings().validate().map_err(as_cfg)?;
        self.link().validate().map_err(as_cfg)?;
        let d = self.deadlines();
        if !(d.alpha > 0.0 && d.alpha < 1.0) || !(d.t_env > 0.0) || !(d.t_loc > 0.0) {
            return Err(Error::Config("certification needs 0 < alpha < 1 and positive t_env, t_loc".into()));
        }
        self.score_bounds().map_err(as_cfg)?;
        self.pipeline().map_err(as_cfg)?;
        let s = &self.sweep;
        spaced(s.start, s.stop, s.steps, s.spacing)?;
        if s.grid < 2 || self.multiparty.grid < 2 {
            return Err(Error::Config("grids need at least 2 points per axis".into()));
        }
        if s.alpha.iter().any(|a| !(*a > 0.0 && *a < 1.0)) || s.t_env.iter().any(|t| !(t.get() > 0.0)) {
            return Err(Error::Config("sweep alphas must lie in (0,1) and windows be positive".into()));
        }
        self.three_party().map_err(as_cfg)?;
        self.ghz_noise().map_err(as_cfg)?;
        let g = &self.cqed.ghz;
        g.sweep.values()?;
        crate::cqed::calibration(&self.ghz_node(g.sweep.c_in_min).map_err(as_cfg)?).map_err(as_cfg)?;
        if g.sigma_gamma.iter().any(|v| !(*v > 0.0)) || !(g.k_window > 0.0) || !(0.0..=1.0).contains(&g.p_e_src) {
            return Err(Error::Config("ghz needs positive sigma_gamma and k_window and p_e_src in [0,1]".into()));
        }
        let r = &self.cqed.readout;
        r.sweep.values()?;
        self.readout(r.c_in).map_err(as_cfg)?;
        if r.targets.iter().any(|v| !(*v > 0.0 && *v < 1.0)) {
            return Err(Error::Config("readout targets must lie in (0,1)".into()));
        }
        Ok(())
    }

    pub fn inputs(&self) -> Result<InputDistribution> {
        let g = &self.game;
        match g.inputs {
            InputKind::Uniform => Ok(InputDistribution::uniform()),
            InputKind::Bernoulli => InputDistribution::bernoulli(g.p),
            InputKind::Correlated => InputDistribution::correlated(g.p),
            InputKind::Explicit => {
                let p = g.probabilities.ok_or_else(|| Error::Config("inputs = \"explicit\" needs `probabilities`".into()))?;
                InputDistribution::new(p[0][0], p[0][1], p[1][0], p[1][1])
            }
        }
    }

    pub fn utility(&self) -> Result<UtilityTable> {
        let g = &self.game;
        match g.utility {
            UtilityKind::Chsh => Ok(UtilityTable::chsh()),
            UtilityKind::LoadBalancing => Ok(UtilityTable::load_balancing(UtilityWeights::new(g.beta1, g.beta2)?)),
            UtilityKind::Table => {
                let u = g.table.ok_or_else(|| Error::Config("utility = \"table\" needs `table`".into()))?;
                if u.iter().flatten().flatten().any(|v| !v.is_finite()) {
                    return Err(Error::Config("utility table entries must be finite".into()));
                }
                Ok(UtilityTable { u })
            }
        }
    }

    pub fn game_matrix(&self) -> Result<GameMatrix> {
        Ok(build_game_matrix_general(&self.inputs()?, &self.utility()?))
    }

    pub fn noise(&self) -> Result<NoiseModel> {
        let n = &self.noise;
        let eps_s = match n.tpi_purity {
            Some(v) => crate::cqed::tpi_infidelity(v)?,
            None => n.eps_s,
        };
        NoiseModel::new(eps_s, n.eps_meas)
    }

    pub fn timings(&self) -> NodeTimings {
        let h = &self.hardware;
        NodeTimings {
            tau_p: h.tau_p.get(),
            tau_swap: h.tau_swap.get(),
            tau_rot: h.tau_rot.get(),
            tau_meas: h.tau_meas.get(),
            tau_res: h.tau_res.get(),
            tau_mem: h.tau_mem.get(),
            n_a: h.n_a,
            p_e: h.p_e,
        }
    }

    pub fn link(&self) -> LinkBudget {
        let h = &self.hardware;
        LinkBudget {
            length_km: h.length.get() / 1e3,
            alpha_att: h.attenuation.get(),
            v_g: h.group_velocity.get(),
            eta_det: h.eta_det,
            eta_misc: h.eta_misc,
            dark_rate: h.dark_rate.get(),
            n_ch: h.n_ch,
            link_transmission: h.link_transmission,
        }
    }

    /// Score bounds are attached when the utility is not a win/lose
    /// predicate or when given explicitly.
    pub fn deadlines(&self) -> Deadlines {
        let c = &self.certification;
        let mut d = Deadlines::new(c.t_loc.get(), c.t_env.get(), c.alpha);
        let predicate = self.utility().map(|u| u.is_predicate()).unwrap_or(true);
        if c.score_bounds.is_some() || !predicate {
            d.score_bounds = self.score_bounds().ok();
        }
        d
    }

    pub fn score_bounds(&self) -> Result<ScoreBounds> {
        match self.certification.score_bounds {
            Some([a, b]) => ScoreBounds::new(a, b),
            None => {
                let u = self.utility()?;
                ScoreBounds::new(u.min().min(0.0), u.max().max(1.0))
            }
        }
    }

    pub fn trigger(&self) -> Result<Trigger> {
        let s = &self.simulation;
        let rate = || {
            s.trigger_rate
                .map(|r| r.get())
                .ok_or_else(|| Error::Config("this trigger needs `trigger_rate`".into()))
        };
        Ok(match s.trigger {
            TriggerKind::Unlimited => Trigger::Unlimited,
            TriggerKind::Fixed => Trigger::Fixed { rate: rate()? },
            TriggerKind::Poisson => Trigger::Poisson { rate: rate()? },
        })
    }

    pub fn pipeline(&self) -> Result<PipelineConfig> {
        let s = &self.simulation;
        if !(s.duration.get() > 0.0) {
            return Err(Error::Config("simulation duration must be positive".into()));
        }
        if s.rounds == 0 {
            return Err(Error::Config("simulation needs at least one round".into()));
        }
        Ok(PipelineConfig {
            timings: self.timings(),
            link: self.link(),
            trigger: self.trigger()?,
            duration: s.duration.get(),
            seed: s.seed,
            p_ent: s.p_ent,
        })
    }

    pub fn multi_inputs(&self, p: f64) -> Result<MultiInputDistribution> {
        match self.multiparty.inputs {
            InputKind::Uniform => Ok(MultiInputDistribution::uniform()),
            InputKind::Bernoulli => MultiInputDistribution::bernoulli(p),
            other => Err(Error::Config(format!("multiparty inputs must be uniform or bernoulli, not {other:?}"))),
        }
    }

    pub fn three_party(&self) -> Result<ThreePartyGame> {
        build_three_party(&self.multi_inputs(self.multiparty.p)?, self.multiparty.beta)
    }

    pub fn ghz_noise(&self) -> Result<GhzNoise> {
        GhzNoise::new(self.multiparty.eps_ghz, self.multiparty.eps_meas)
    }

    /// GHZ network node at internal cooperativity `c_in`.
    pub fn ghz_node(&self, c_in: f64) -> Result<CavityParams> {
        let s = &self.cqed.ghz;
        cavity(s.g_over_2pi, s.gamma_over_2pi, s.kappa_ex, c_in)
    }

    pub fn readout(&self, c_in: f64) -> Result<ReadoutParams> {
        let s = &self.cqed.readout;
        let c = cavity(s.g_over_2pi, s.gamma_over_2pi, s.kappa_ex, c_in)?;
        ReadoutParams::from_cavity(&c, s.eta_det, s.detuning_over_gamma, s.t_life.get())
    }
}

fn cavity(g2pi: Frequency, gamma2pi: Frequency, rule: KappaExRule, c_in: f64) -> Result<CavityParams> {
    if !(c_in > 0.0) {
        return Err(Error::Parameter(format!("C_in = {c_in} must be positive")));
    }
    let g = TAU * g2pi.get();
    let gamma = TAU * gamma2pi.get();
    let kin = g * g / (2.0 * gamma * c_in);
    CavityParams::new(g, kin, rule.apply(g, kin), gamma)
}

fn merge(mut base: toml::Table, user: toml::Table) -> toml::Table {
    for (k, v) in user {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(u)) => {
                let merged = merge(std::mem::take(b), u);
                *b = merged;
            }
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
    base
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate_and_round_trip() {
        for name in PRESETS {
            let c = RunConfig::preset(name).unwrap();
            c.validate().unwrap();
            let text = c.to_toml_string().unwrap();
            assert_eq!(RunConfig::from_toml_str(&text).unwrap(), c, "{name}");
            let json = serde_json::to_string(&c).unwrap();
            assert_eq!(serde_json::from_str::<RunConfig>(&json).unwrap(), c);
        }
    }

    #[test]
    fn empty_file_is_table2() {
        let c = RunConfig::from_toml_str("").unwrap();
        assert_eq!(c.timings(), NodeTimings::table2());
        assert_eq!(c.link(), LinkBudget::table2());
        assert_eq!(c.game_matrix().unwrap(), GameMatrix::chsh());
    }

    #[test]
    fn overrides_merge_into_preset() {
        let c = RunConfig::from_toml_str(
            "preset = \"hft\"\n[hardware]\ntau_p = \"0.58 us\"\nlength = \"25 km\"\n[game]\nbeta1 = 0.3\n",
        )
        .unwrap();
        assert_eq!(c.hardware.tau_p.get(), 5.8e-7);
        assert_eq!(c.link().length_km, 25.0);
        assert_eq!(c.game.beta1, 0.3);
        assert_eq!(c.game.beta2, 0.1);
        assert_eq!(c.certification.t_env.get(), 3.16);
    }

    #[test]
    fn unit_spellings_agree() {
        let a = RunConfig::from_toml_str("[hardware]\ntau_p = \"580 ns\"").unwrap();
        let b = RunConfig::from_toml_str("[hardware]\ntau_p = \"0.58 us\"").unwrap();
        let c = RunConfig::from_toml_str("[hardware]\ntau_p = \"5.8e-7 s\"").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn config_errors() {
        for text in [
            "[hardware]\ntau_pp = \"1 ns\"",
            "bogus = 1",
            "[hardware]\ntau_p = 240e-9",
            "[hardware]\ntau_p = \"240 km\"",
            "preset = \"mars\"",
            "[game]\nbeta1 = 1.5\nutility = \"load_balancing\"",
            "[game]\ninputs = \"explicit\"",
            "[sweep]\nsteps = 1",
            "[sweep]\nspacing = \"log\"\nstart = 0.0",
            "[simulation]\ntrigger = \"fixed\"",
            "[certification]\nalpha = 1.0",
            "[cqed.readout]\nc_in = -1.0",
            "[cqed.ghz]\nkappa_ex = \"third\"\nc_in_min = 1e-4",
            "not toml ===",
        ] {
            assert!(matches!(RunConfig::from_toml_str(text), Err(Error::Config(_))), "{text}");
        }
    }

    #[test]
    fn tpi_purity_sets_source_error() {
        let c = RunConfig::from_toml_str("[noise]\ntpi_purity = 0.98").unwrap();
        assert!((c.noise().unwrap().eps_s - 0.01).abs() < 1e-15);
    }

    #[test]
    fn cqed_presets_match_library_nodes() {
        let c = RunConfig::preset("table2").unwrap();
        let a = c.ghz_node(20.0).unwrap();
        let b = CavityParams::telecom_node(20.0).unwrap();
        assert!((a.kappa_ex - b.kappa_ex).abs() < 1e-6 * b.kappa_ex);
        let r = c.readout(20.0).unwrap();
        assert!((r.r_bright - ReadoutParams::reference().r_bright).abs() < 1e-9 * r.r_bright);
    }

    #[test]
    fn spacing() {
        assert_eq!(spaced(0.0, 1.0, 3, Spacing::Linear).unwrap(), vec![0.0, 0.5, 1.0]);
        let l = spaced(1.0, 100.0, 3, Spacing::Log).unwrap();
        assert_eq!(l[0], 1.0);
        assert!((l[1] - 10.0).abs() < 1e-12);
        assert_eq!(l[2], 100.0);
    }
}
