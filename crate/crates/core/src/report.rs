//! Command drivers behind the `lctc` binary.
//!
//! Each `cmd_*` returns a [`Report`]: a JSON document that echoes the
//! configuration, a CSV table with a fixed column order, and an outcome
//! that maps onto the process exit code. Floats are written with 12
//! significant digits.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::certify::{n_required, n_required_general, ScoreBounds};
use crate::config::{spaced, RunConfig, SimMode, SweepParameter};
use crate::cqed::{ghz_attempt_rate, ghz_generation, min_readout_time, GhzNetworkSpec, PhotonSpectrum};
use crate::error::{Error, Result};
use crate::game::{GameValues, InputDistribution, UtilityTable, UtilityWeights};
use crate::hardware::{evaluate_criteria, performance, table2_report, Tolerance};
use crate::multiparty::{
    build_three_party, classical_value_three, ghz_combined_infidelity, ghz_threshold, quantum_value_three,
    MultiInputDistribution,
};
use crate::simulate::{behavior_from_strategy, simulate_pipeline, simulate_rounds};

/// Gaps below this are reported as empty cells in landscape grids.
pub const GAP_MASK: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    CriteriaFail,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    U(u64),
    S(String),
    B(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::U(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::B(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::S(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::S(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r
                .iter()
                .map(|c| match c {
                    Cell::F(v) => fmt_float(*v),
                    Cell::U(v) => v.to_string(),
                    Cell::S(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
                    Cell::S(s) => s.clone(),
                    Cell::B(b) => b.to_string(),
                    Cell::Empty => String::new(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub json: Value,
    pub table: Table,
    pub outcome: Outcome,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&round_value(&self.json)).expect("JSON values always serialize");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        self.table.to_csv()
    }
}

/// Round to 12 significant digits.
pub fn round12(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{v:.11e}").parse().unwrap_or(v)
}

fn fmt_float(v: f64) -> String {
    if !v.is_finite() {
        return if v.is_nan() { "nan".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round12(v);
    let a = r.abs();
    if r != 0.0 && !(1e-4..1e12).contains(&a) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

fn round_value(v: &Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let f = n.as_f64().unwrap_or(f64::NAN);
            serde_json::Number::from_f64(round12(f)).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.iter().map(round_value).collect()),
        Value::Object(o) => Value::Object(o.iter().map(|(k, v)| (k.clone(), round_value(v))).collect()),
        other => other.clone(),
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn with_config(mut body: Value, cfg: &RunConfig, command: &str) -> Value {
    if let Value::Object(m) = &mut body {
        m.insert("command".into(), json!(command));
        m.insert("config".into(), to_json(cfg));
    }
    body
}

/// Gap at `ε = 0` for symmetric weights `β` and Bernoulli(`p`) inputs.
pub fn gap_landscape_point(beta: f64, p: f64) -> Result<(f64, f64)> {
    let g = crate::game::build_game_matrix_general(
        &InputDistribution::bernoulli(p)?,
        &UtilityTable::load_balancing(UtilityWeights::symmetric(beta)?),
    );
    let v = GameValues::of(&g);
    Ok((v.c, v.q))
}

pub fn cmd_gap(cfg: &RunConfig) -> Result<Report> {
    let m = cfg.game_matrix()?;
    let v = GameValues::of(&m);
    let eps = cfg.noise()?.combined();
    let gap = v.gap(eps);
    let body = json!({
        "game_matrix": m.m,
        "classical_value": v.c,
        "quantum_value": v.q,
        "omega_c": v.omega_c(),
        "omega_q_ideal": v.omega_q(0.0),
        "eps": eps,
        "omega_q": v.omega_q(eps),
        "gap_ideal": v.gap(0.0),
        "gap": gap,
        "eps_threshold": v.eps_threshold().ok(),
        "advantage": gap > 1e-12,
        "classical_strategy": v.signs,
        "quantum_strategy": v.angles,
    });

    let n = cfg.sweep.grid;
    let axis = spaced(0.0, 1.0, n, crate::config::Spacing::Linear)?;
    let points: Vec<(f64, f64)> = axis.iter().flat_map(|&b| axis.iter().map(move |&p| (b, p))).collect();
    let values: Vec<Result<(f64, f64)>> = points.par_iter().map(|&(b, p)| gap_landscape_point(b, p)).collect();
    let mut table = Table::new(&["beta", "p", "classical_value", "quantum_value", "gap", "gap_masked", "eps_threshold"]);
    for (&(b, p), r) in points.iter().zip(values) {
        let (c, q) = r?;
        let d = (q - c) / 2.0;
        table.push(vec![
            b.into(),
            p.into(),
            c.into(),
            q.into(),
            d.into(),
            (d > GAP_MASK).then_some(d).into(),
            (q > 0.0 && d > GAP_MASK).then(|| 1.0 - c / q).into(),
        ]);
    }
    Ok(Report { json: with_config(body, cfg, "gap"), table, outcome: Outcome::Ok })
}

pub fn cmd_criteria(cfg: &RunConfig) -> Result<Report> {
    let (m, n, t, l, d) = (cfg.game_matrix()?, cfg.noise()?, cfg.timings(), cfg.link(), cfg.deadlines());
    let perf = performance(&t, &l, &n)?;
    let v = evaluate_criteria(&m, &n, &t, &l, &d)?;
    let lc = d.t_loc < cfg.certification.t_comm.get();
    let body = json!({
        "all_pass": v.all_pass(),
        "latency_constrained": lc,
        "verdict": to_json(&v),
        "performance": to_json(&perf),
        "deadlines": to_json(&d),
    });
    let mut table = Table::new(&["criterion", "ok", "margin", "status"]);
    for (name, c) in [("fidelity", v.fidelity), ("rate", v.rate), ("decision", v.decision), ("memory", v.memory)] {
        table.push(vec![name.into(), c.ok.into(), c.margin.into(), format!("{:?}", c.status).to_lowercase().into()]);
    }
    let outcome = if v.all_pass() { Outcome::Ok } else { Outcome::CriteriaFail };
    Ok(Report { json: with_config(body, cfg, "criteria"), table, outcome })
}

fn rounds_needed(omega_c: f64, omega_q: f64, alpha: f64, b: Option<&ScoreBounds>) -> Result<Option<u64>> {
    if omega_q <= omega_c {
        return Ok(None);
    }
    let r = match b {
        Some(b) => n_required_general(omega_c, omega_q, alpha, b),
        None => n_required(omega_c, omega_q, alpha),
    };
    match r {
        Ok(n) => Ok(Some(n)),
        Err(Error::Uncertifiable { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn cmd_nreq(cfg: &RunConfig) -> Result<Report> {
    let v = GameValues::of(&cfg.game_matrix()?);
    let eps = cfg.noise()?.combined();
    let d = cfg.deadlines();
    let (wc, wq) = (v.omega_c(), v.omega_q(eps));
    let n = rounds_needed(wc, wq, d.alpha, d.score_bounds.as_ref())?;
    let r = n.map(|n| n as f64 / d.t_env);
    let body = json!({
        "certifiable": n.is_some(),
        "omega_c": wc,
        "omega_q": wq,
        "eps": eps,
        "alpha": d.alpha,
        "t_env": d.t_env,
        "score_bounds": d.score_bounds,
        "n_req": n,
        "r_req": r,
    });
    let mut table = Table::new(&["eps", "alpha", "t_env", "omega_c", "omega_q", "n_req", "r_req"]);
    table.push(vec![eps.into(), d.alpha.into(), d.t_env.into(), wc.into(), wq.into(), n.into(), r.into()]);
    let outcome = if n.is_some() { Outcome::Ok } else { Outcome::CriteriaFail };
    Ok(Report { json: with_config(body, cfg, "nreq"), table, outcome })
}

/// Largest `ε` whose required rate `n_req(ε)/T_env` stays at or below
/// `rate`, located by bisection to `tol`. `None` when even `ε = 0` fails.
pub fn max_tolerable_eps(
    v: &GameValues,
    alpha: f64,
    t_env: f64,
    rate: f64,
    bounds: Option<&ScoreBounds>,
    tol: f64,
) -> Result<Option<f64>> {
    let Ok(th) = v.eps_threshold() else { return Ok(None) };
    let ok = |e: f64| -> Result<bool> {
        Ok(rounds_needed(v.omega_c(), v.omega_q(e), alpha, bounds)?.is_some_and(|n| n as f64 / t_env <= rate))
    };
    if th <= 0.0 || !ok(0.0)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0.0, th);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if ok(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(lo))
}

pub fn cmd_sweep(cfg: &RunConfig) -> Result<Report> {
    let s = &cfg.sweep;
    let xs = spaced(s.start, s.stop, s.steps, s.spacing)?;
    let v = GameValues::of(&cfg.game_matrix()?);
    let d = cfg.deadlines();
    let bounds = d.score_bounds;
    match s.parameter {
        SweepParameter::Eps => {
            let r_heg = performance(&cfg.timings(), &cfg.link(), &cfg.noise()?)?.r_heg;
            let cases: Vec<(f64, f64)> =
                s.t_env.iter().flat_map(|t| s.alpha.iter().map(move |&a| (t.get(), a))).collect();
            let points: Vec<(f64, f64, f64)> =
                cases.iter().flat_map(|&(t, a)| xs.iter().map(move |&e| (t, a, e))).collect();
            let rows: Vec<Result<Option<u64>>> = points
                .par_iter()
                .map(|&(_, a, e)| rounds_needed(v.omega_c(), v.omega_q(e), a, bounds.as_ref()))
                .collect();
            let mut table =
                Table::new(&["t_env", "alpha", "eps", "omega_q", "n_req", "r_req", "r_heg", "rate_ok"]);
            for (&(t, a, e), n) in points.iter().zip(rows) {
                let n = n?;
                let r = n.map(|n| n as f64 / t);
                table.push(vec![
                    t.into(),
                    a.into(),
                    e.into(),
                    v.omega_q(e).into(),
                    n.into(),
                    r.into(),
                    r_heg.into(),
                    r.is_some_and(|r| r <= r_heg).into(),
                ]);
            }
            let crossings: Vec<Result<Value>> = cases
                .par_iter()
                .map(|&(t, a)| {
                    let e = max_tolerable_eps(&v, a, t, r_heg, bounds.as_ref(), 1e-5)?;
                    Ok(json!({"t_env": t, "alpha": a, "max_eps": e}))
                })
                .collect();
            let body = json!({
                "parameter": "eps",
                "r_heg": r_heg,
                "eps_threshold": v.eps_threshold().ok(),
                "crossings": crossings.into_iter().collect::<Result<Vec<_>>>()?,
            });
            Ok(Report { json: with_config(body, cfg, "sweep"), table, outcome: Outcome::Ok })
        }
        SweepParameter::LengthKm => {
            let n = cfg.noise()?;
            let rows: Vec<Result<Vec<Cell>>> = xs
                .par_iter()
                .map(|&km| {
                    let mut l = cfg.link();
                    l.length_km = km;
                    // A tabulated transmission belongs to one length only.
                    l.link_transmission = None;
                    let t = cfg.timings();
                    let p = performance(&t, &l, &n)?;
                    let c = evaluate_criteria(&cfg.game_matrix()?, &n, &t, &l, &d)?;
                    Ok(vec![
                        km.into(),
                        p.p_ent.into(),
                        p.tau_occ.into(),
                        p.r_heg.into(),
                        p.eps_budget.into(),
                        c.n_req.into(),
                        c.r_req.into(),
                        c.rate_ok().into(),
                        c.all_pass().into(),
                    ])
                })
                .collect();
            let mut table = Table::new(&[
                "length_km",
                "p_ent",
                "tau_occ",
                "r_heg",
                "eps_budget",
                "n_req",
                "r_req",
                "rate_ok",
                "all_pass",
            ]);
            for r in rows {
                table.push(r?);
            }
            let body = json!({"parameter": "length_km", "points": table.rows.len()});
            Ok(Report { json: with_config(body, cfg, "sweep"), table, outcome: Outcome::Ok })
        }
    }
}

pub fn cmd_table2(cfg: &RunConfig) -> Result<Report> {
    let r = table2_report(&cfg.timings(), &cfg.link(), &cfg.noise()?, &cfg.game_matrix()?, &cfg.deadlines())?;
    let pass = r.rows_pass() && r.verdict.all_pass();
    let mut table = Table::new(&["quantity", "unit", "computed", "reference", "tolerance", "pass"]);
    for row in &r.rows {
        let tol = match row.tolerance {
            Tolerance::Relative(x) => format!("rel {x}"),
            Tolerance::Absolute(x) => format!("abs {x}"),
            Tolerance::AtMost => "at most".into(),
        };
        table.push(vec![
            row.name.as_str().into(),
            row.unit.as_str().into(),
            row.computed.into(),
            row.reference.into(),
            tol.into(),
            row.pass.into(),
        ]);
    }
    let body = json!({"all_pass": pass, "report": to_json(&r)});
    let outcome = if pass { Outcome::Ok } else { Outcome::CriteriaFail };
    Ok(Report { json: with_config(body, cfg, "table2"), table, outcome })
}

pub fn cmd_simulate(cfg: &RunConfig) -> Result<Report> {
    let s = &cfg.simulation;
    let mut body = serde_json::Map::new();
    let mut table = Table::new(&["section", "quantity", "value"]);
    let row = |t: &mut Table, sec: &str, k: &str, v: Cell| t.push(vec![sec.into(), k.into(), v]);
    if matches!(s.mode, SimMode::Rounds | SimMode::Both) {
        let (inputs, u, noise) = (cfg.inputs()?, cfg.utility()?, cfg.noise()?);
        let v = GameValues::of(&cfg.game_matrix()?);
        let eps = noise.combined();
        let b = behavior_from_strategy(&noise, &v.angles);
        let log = simulate_rounds(&inputs, &u, &b, s.rounds, s.seed)?;
        let expected = v.omega_q(eps);
        let sigma = (expected * (1.0 - expected) / s.rounds as f64).sqrt();
        let z = if sigma > 0.0 { (log.empirical_omega - expected) / sigma } else { 0.0 };
        row(&mut table, "rounds", "rounds", log.rounds.into());
        row(&mut table, "rounds", "wins", log.wins.into());
        row(&mut table, "rounds", "empirical_omega", log.empirical_omega.into());
        row(&mut table, "rounds", "omega_q", expected.into());
        row(&mut table, "rounds", "omega_c", log.omega_c.into());
        row(&mut table, "rounds", "z_score", z.into());
        row(&mut table, "rounds", "pvalue", log.pvalue.into());
        body.insert("rounds".into(), json!({"log": to_json(&log), "omega_q": expected, "eps": eps, "z_score": z}));
    }
    if matches!(s.mode, SimMode::Pipeline | SimMode::Both) {
        let pc = cfg.pipeline()?;
        let st = simulate_pipeline(&pc)?;
        let analytic = performance(&pc.timings, &pc.link, &cfg.noise()?)?.r_heg;
        for (k, v) in [
            ("attempts", Cell::U(st.attempts)),
            ("heralds", Cell::U(st.heralds)),
            ("successes", Cell::U(st.successes)),
            ("consumed", Cell::U(st.consumed)),
            ("achieved_pair_rate", st.achieved_pair_rate.into()),
            ("rate_std_error", st.rate_std_error.into()),
            ("analytic_r_heg", analytic.into()),
            ("mean_buffer", st.mean_buffer.into()),
            ("max_buffer", Cell::U(st.max_buffer)),
            ("channel_idle_fraction", st.channel_idle_fraction.into()),
            ("stall_fraction", st.stall_fraction.into()),
        ] {
            row(&mut table, "pipeline", k, v);
        }
        body.insert("pipeline".into(), json!({"stats": to_json(&st), "analytic_r_heg": analytic}));
    }
    body.insert("seed".into(), json!(s.seed));
    Ok(Report { json: with_config(Value::Object(body), cfg, "simulate"), table, outcome: Outcome::Ok })
}

pub fn cmd_multiparty(cfg: &RunConfig) -> Result<Report> {
    let g = cfg.three_party()?;
    let noise = cfg.ghz_noise()?;
    let eps = ghz_combined_infidelity(&noise);
    let (c, strategy) = classical_value_three(&g);
    let (q, angles) = quantum_value_three(&g);
    let th = ghz_threshold(&g, eps).ok();
    let body = json!({
        "game_weights": g.m,
        "classical_value": c,
        "quantum_value": q,
        "omega_c": (1.0 + c) / 2.0,
        "omega_q_ideal": (1.0 + q) / 2.0,
        "eps_prime": eps,
        "threshold": th,
        "classical_strategy": strategy,
        "angles": angles,
    });
    let n = cfg.multiparty.grid;
    let axis = spaced(0.0, 1.0, n, crate::config::Spacing::Linear)?;
    let points: Vec<(f64, f64)> = axis.iter().flat_map(|&b| axis.iter().map(move |&p| (b, p))).collect();
    let vals: Vec<Result<(f64, f64)>> = points
        .par_iter()
        .map(|&(b, p)| {
            let g = build_three_party(&MultiInputDistribution::bernoulli(p)?, b)?;
            Ok((classical_value_three(&g).0, quantum_value_three(&g).0))
        })
        .collect();
    let mut table = Table::new(&["beta", "p", "classical_value", "quantum_value", "gap", "gap_masked"]);
    for (&(b, p), r) in points.iter().zip(vals) {
        let (c, q) = r?;
        let d = (q - c) / 2.0;
        table.push(vec![b.into(), p.into(), c.into(), q.into(), d.into(), (d > GAP_MASK).then_some(d).into()]);
    }
    Ok(Report { json: with_config(body, cfg, "multiparty"), table, outcome: Outcome::Ok })
}

pub fn cmd_cqed(cfg: &RunConfig) -> Result<Report> {
    let gs = &cfg.cqed.ghz;
    let rs = &cfg.cqed.readout;
    let mut table = Table::new(&[
        "curve",
        "c_in",
        "sigma_gamma",
        "infidelity",
        "p_success",
        "attempt_rate",
        "target",
        "tau_meas",
        "n_th",
    ]);

    let cs = gs.sweep.values()?;
    let ghz_points: Vec<(f64, f64)> =
        gs.sigma_gamma.iter().flat_map(|&sg| cs.iter().map(move |&c| (sg, c))).collect();
    let ghz_rows: Vec<Result<(f64, f64, f64)>> = ghz_points
        .par_iter()
        .map(|&(sg, c)| {
            let node = cfg.ghz_node(c)?;
            let sigma_t = sg / node.gamma;
            let o = ghz_generation(&GhzNetworkSpec::equal(node, PhotonSpectrum::new(sigma_t)?))?;
            let rate = ghz_attempt_rate(o.p_success, sigma_t, gs.k_window, gs.p_e_src)?;
            Ok((o.infidelity(), o.p_success, rate))
        })
        .collect();
    let mut ghz_json = Vec::new();
    for (&(sg, c), r) in ghz_points.iter().zip(ghz_rows) {
        let (inf, ps, rate) = r?;
        table.push(vec![
            "ghz".into(),
            c.into(),
            sg.into(),
            inf.into(),
            ps.into(),
            rate.into(),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
        ]);
        ghz_json.push(json!({"c_in": c, "sigma_gamma": sg, "infidelity": inf, "p_success": ps, "attempt_rate": rate}));
    }

    let rc = rs.sweep.values()?;
    let ro_points: Vec<(f64, f64)> = rs.targets.iter().flat_map(|&t| rc.iter().map(move |&c| (t, c))).collect();
    let ro_rows: Vec<Result<Option<(f64, u64)>>> = ro_points
        .par_iter()
        .map(|&(target, c)| match min_readout_time(target, &cfg.readout(c)?) {
            Ok(r) => Ok(Some((r.tau, r.n_th))),
            Err(Error::Infeasible(_)) => Ok(None),
            Err(e) => Err(e),
        })
        .collect();
    let mut ro_json = Vec::new();
    for (&(target, c), r) in ro_points.iter().zip(ro_rows) {
        let r = r?;
        table.push(vec![
            "readout".into(),
            c.into(),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            target.into(),
            r.map(|x| x.0).into(),
            r.map(|x| x.1).into(),
        ]);
        ro_json.push(json!({"c_in": c, "target": target, "tau_meas": r.map(|x| x.0), "n_th": r.map(|x| x.1)}));
    }

    let p = cfg.readout(rs.c_in)?;
    let at_c: Vec<Value> = rs
        .targets
        .iter()
        .map(|&t| match min_readout_time(t, &p) {
            Ok(r) => Ok(json!({"target": t, "tau_meas": r.tau, "n_th": r.n_th, "error": r.error})),
            Err(Error::Infeasible(msg)) => Ok(json!({"target": t, "tau_meas": null, "infeasible": msg})),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;
    let body = json!({
        "attempt_rate_model": "p_e_src * p_success / (k_window * sigma_t)",
        "ghz": ghz_json,
        "readout": {
            "c_in": rs.c_in,
            "params": to_json(&p),
            "results": at_c,
            "curves": ro_json,
        },
    });
    Ok(Report { json: with_config(body, cfg, "cqed"), table, outcome: Outcome::Ok })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Gap,
    Criteria,
    Nreq,
    Sweep,
    Table2,
    Simulate,
    Multiparty,
    Cqed,
}

pub fn run(cmd: Command, cfg: &RunConfig) -> Result<Report> {
    match cmd {
        Command::Gap => cmd_gap(cfg),
        Command::Criteria => cmd_criteria(cfg),
        Command::Nreq => cmd_nreq(cfg),
        Command::Sweep => cmd_sweep(cfg),
        Command::Table2 => cmd_table2(cfg),
        Command::Simulate => cmd_simulate(cfg),
        Command::Multiparty => cmd_multiparty(cfg),
        Command::Cqed => cmd_cqed(cfg),
    }
}
