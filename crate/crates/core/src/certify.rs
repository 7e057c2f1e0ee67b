//! Finite-statistics certification with exact binomial tails.
//!
//! Tails are evaluated in log space: the pmf at the tail boundary comes from
//! the saddle-point form (Stirling remainders plus the deviance `bd0`), and
//! the remaining terms are summed through their ratios. This keeps full
//! relative precision for tails far below `1e-300` and for `m` up to `1e9`.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};

/// Default cap on the round count searched by [`n_required`].
pub const DEFAULT_CAP: u64 = 1_000_000_000;

// Exhaustive exact scan below this round count.
const EXACT_SCAN: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificationQuery {
    pub omega_c: f64,
    pub omega_q: f64,
    pub alpha: f64,
    /// Stationary window in seconds.
    pub t_env: f64,
}

impl CertificationQuery {
    pub fn validate(&self) -> Result<()> {
        check_omegas(self.omega_c, self.omega_q, self.alpha)?;
        if !(self.t_env > 0.0) {
            return Err(invalid(format!("t_env = {} must be positive", self.t_env)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreBounds {
    pub u_min: f64,
    pub u_max: f64,
}

impl ScoreBounds {
    pub fn new(u_min: f64, u_max: f64) -> Result<Self> {
        if !(u_min < u_max) || !u_min.is_finite() || !u_max.is_finite() {
            return Err(invalid(format!("score bounds [{u_min}, {u_max}] must satisfy u_min < u_max")));
        }
        Ok(Self { u_min, u_max })
    }

    pub fn unit() -> Self {
        Self { u_min: 0.0, u_max: 1.0 }
    }
}

fn check_omegas(omega_c: f64, omega_q: f64, alpha: f64) -> Result<()> {
    if !(omega_c > 0.0 && omega_c < omega_q && omega_q <= 1.0) {
        return Err(invalid(format!("need 0 < ω_C < ω_Q ≤ 1, got ω_C = {omega_c}, ω_Q = {omega_q}")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid(format!("alpha = {alpha} outside (0,1)")));
    }
    Ok(())
}

const STIRLERR: [f64; 16] = [
    0.0,
    0.081_061_466_795_327_258,
    0.041_340_695_955_409_294,
    0.027_677_925_684_998_339,
    0.020_790_672_103_765_093,
    0.016_644_691_189_821_192,
    0.013_876_128_823_070_748,
    0.011_896_709_945_891_770,
    0.010_411_265_261_972_096,
    0.009_255_462_182_712_733,
    0.008_330_563_433_362_871,
    0.007_573_675_487_951_841,
    0.006_942_840_107_209_530,
    0.006_408_994_188_004_207,
    0.005_951_370_112_758_848,
    0.005_554_733_551_962_801,
];

// ln(n!) − [(n+½)ln n − n + ½ln 2π]
fn stirlerr(n: u64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if n < 16 {
        return STIRLERR[n as usize];
    }
    let nf = n as f64;
    let nn = nf * nf;
    if n > 500 {
        (S0 - S1 / nn) / nf
    } else if n > 80 {
        (S0 - (S1 - S2 / nn) / nn) / nf
    } else if n > 35 {
        (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / nf
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / nf
    }
}

// Deviance term x·ln(x/np) + np − x, accurate when x ≈ np.
fn bd0(x: f64, np: f64) -> f64 {
    if (x - np).abs() < 0.1 * (x + np) {
        let v = (x - np) / (x + np);
        let mut s = (x - np) * v;
        let mut ej = 2.0 * x * v;
        let v2 = v * v;
        for j in 1..1000 {
            ej *= v2;
            let s1 = s + ej / (2 * j + 1) as f64;
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        s
    } else {
        x * (x / np).ln() + np - x
    }
}

/// `ln P(K = k)` for `K ~ Binomial(m, p)`.
pub fn ln_binomial_pmf(k: u64, m: u64, p: f64) -> f64 {
    if k > m {
        return f64::NEG_INFINITY;
    }
    let q = 1.0 - p;
    if p == 0.0 {
        return if k == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if q == 0.0 {
        return if k == m { 0.0 } else { f64::NEG_INFINITY };
    }
    let mf = m as f64;
    if k == 0 {
        return mf * (-p).ln_1p();
    }
    if k == m {
        return mf * p.ln();
    }
    let kf = k as f64;
    let lc = stirlerr(m) - stirlerr(k) - stirlerr(m - k) - bd0(kf, mf * p) - bd0(mf - kf, mf * q);
    let lf = (2.0 * PI).ln() + kf.ln() + (-kf / mf).ln_1p();
    lc - 0.5 * lf
}

/// `ln P(K ≥ v)` for `K ~ Binomial(m, ω)`.
pub fn ln_binomial_pvalue(v: u64, m: u64, omega: f64) -> Result<f64> {
    if v > m {
        return Err(invalid(format!("win count {v} exceeds round count {m}")));
    }
    if !(0.0..=1.0).contains(&omega) {
        return Err(invalid(format!("omega = {omega} outside [0,1]")));
    }
    Ok(ln_upper_tail(v, m, omega))
}

fn ln_upper_tail(v: u64, m: u64, p: f64) -> f64 {
    if v == 0 || p == 1.0 {
        return 0.0;
    }
    if p == 0.0 {
        return f64::NEG_INFINITY;
    }
    let q = 1.0 - p;
    let odds = p / q;
    if v as f64 > m as f64 * p {
        // Terms decrease from k = v upward.
        let lead = ln_binomial_pmf(v, m, p);
        let mut ratio = 1.0;
        let mut sum = 1.0;
        let mut k = v;
        while k < m {
            ratio *= (m - k) as f64 / (k + 1) as f64 * odds;
            sum += ratio;
            if ratio < 1e-17 * sum {
                break;
            }
            k += 1;
        }
        lead + sum.ln()
    } else {
        // Tail holds most of the mass; subtract the lower tail, whose terms
        // decrease from k = v − 1 downward.
        let top = v - 1;
        let lead = ln_binomial_pmf(top, m, p);
        let mut ratio = 1.0;
        let mut sum = 1.0;
        let mut k = top;
        while k > 0 {
            ratio *= k as f64 / (m - k + 1) as f64 / odds;
            sum += ratio;
            if ratio < 1e-17 * sum {
                break;
            }
            k -= 1;
        }
        let lower = (lead + sum.ln()).exp();
        (-lower.min(1.0)).ln_1p()
    }
}

/// Upper binomial tail `P(K ≥ v)`, `K ~ Binomial(m, ω_C)`: the chance of
/// `v` or more wins among `m` classical rounds.
pub fn binomial_pvalue(v: u64, m: u64, omega_c: f64) -> Result<f64> {
    Ok(ln_binomial_pvalue(v, m, omega_c)?.exp())
}

// Log tail at a real threshold, log-linearly interpolated between integers.
fn ln_tail_interp(t: f64, m: u64, p: f64) -> f64 {
    let t = t.clamp(0.0, m as f64);
    let t0 = t.floor();
    let frac = t - t0;
    let lo = ln_upper_tail(t0 as u64, m, p);
    if frac == 0.0 {
        return lo;
    }
    let hi = ln_upper_tail(t0 as u64 + 1, m, p);
    (1.0 - frac) * lo + frac * hi
}

/// Bound on `P(score ≥ c)` after `m` rounds with per-round scores in
/// `[u_min, u_max]` and classical mean at most `ω_C`.
pub fn score_pvalue_bound(c: f64, m: u64, omega_c: f64, b: &ScoreBounds) -> Result<f64> {
    Ok(ln_score_pvalue_bound(c, m, omega_c, b)?.exp())
}

pub fn ln_score_pvalue_bound(c: f64, m: u64, omega_c: f64, b: &ScoreBounds) -> Result<f64> {
    if m == 0 {
        return Err(invalid("round count must be at least 1"));
    }
    let span = b.u_max - b.u_min;
    let xi = (omega_c - b.u_min) / span;
    if !(xi > 0.0 && xi < 1.0) {
        return Err(invalid(format!("ξ = {xi} outside (0,1)")));
    }
    let mf = m as f64;
    let per_round = c / mf;
    if per_round < b.u_min - 1e-12 * span || per_round > b.u_max + 1e-12 * span {
        return Err(invalid(format!("score {c} outside [m·u_min, m·u_max]")));
    }
    let mu = ((c - mf * b.u_min) / span).clamp(0.0, mf);
    Ok((1.0 + ln_tail_interp(mu, m, xi)).min(0.0))
}

/// Smallest `m ≥ 1` with `P(K_m ≥ ⌈m·ω_Q⌉) < α` for `K_m ~ Binomial(m, ω_C)`.
pub fn n_required(omega_c: f64, omega_q: f64, alpha: f64) -> Result<u64> {
    n_required_with_cap(omega_c, omega_q, alpha, DEFAULT_CAP)
}

pub fn n_required_with_cap(omega_c: f64, omega_q: f64, alpha: f64, cap: u64) -> Result<u64> {
    check_omegas(omega_c, omega_q, alpha)?;
    let ln_alpha = alpha.ln();
    let wins = |m: u64| ((m as f64 * omega_q).ceil() as u64).min(m);
    let exact = |m: u64| ln_upper_tail(wins(m), m, omega_c);
    let upper = |m: u64| ln_tail_interp(m as f64 * omega_q, m, omega_c);
    let lower = |m: u64| ln_tail_interp(m as f64 * omega_q + 1.0, m, omega_c);
    search(cap, ln_alpha, alpha, &exact, &upper, &lower, |lo, hi| walk_binomial(lo, hi, omega_c, omega_q, ln_alpha))
}

/// As [`n_required`] but certifying through [`score_pvalue_bound`] with
/// total score `c = ⌈m·ω_Q⌉`.
pub fn n_required_general(omega_c: f64, omega_q: f64, alpha: f64, b: &ScoreBounds) -> Result<u64> {
    n_required_general_with_cap(omega_c, omega_q, alpha, b, DEFAULT_CAP)
}

pub fn n_required_general_with_cap(omega_c: f64, omega_q: f64, alpha: f64, b: &ScoreBounds, cap: u64) -> Result<u64> {
    if !(omega_c < omega_q && omega_q <= b.u_max && omega_c > b.u_min) {
        return Err(invalid(format!("need u_min < ω_C < ω_Q ≤ u_max, got ω_C = {omega_c}, ω_Q = {omega_q}")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid(format!("alpha = {alpha} outside (0,1)")));
    }
    let span = b.u_max - b.u_min;
    let xi = (omega_c - b.u_min) / span;
    let ln_alpha = alpha.ln();
    let score = |m: u64| (m as f64 * omega_q).ceil().min(m as f64 * b.u_max);
    let mu = |c: f64, m: u64| (c - m as f64 * b.u_min) / span;
    let exact = |m: u64| (1.0 + ln_tail_interp(mu(score(m), m), m, xi)).min(0.0);
    let upper = |m: u64| (1.0 + ln_tail_interp(mu(m as f64 * omega_q, m), m, xi)).min(0.0);
    let lower = |m: u64| (1.0 + ln_tail_interp(mu(m as f64 * omega_q + 1.0, m), m, xi)).min(0.0);
    search(cap, ln_alpha, alpha, &exact, &upper, &lower, |lo, hi| {
        (lo..=hi).find(|&m| exact(m) < ln_alpha)
    })
}

// Minimum search shared by both certification routes.
//
// `exact(m)` is the log p-value actually certified at `m`; `upper` and
// `lower` are smooth envelopes with `lower ≤ exact ≤ upper`. Every m below
// EXACT_SCAN is tested exactly. Beyond it, `upper < ln α` certifies a round
// count and bounds the answer from above, `lower ≥ ln α` rules round counts
// out, and `walk(lo, hi)` returns the first passing m in the window between.
fn search(
    cap: u64,
    ln_alpha: f64,
    alpha: f64,
    exact: &dyn Fn(u64) -> f64,
    upper: &dyn Fn(u64) -> f64,
    lower: &dyn Fn(u64) -> f64,
    walk: impl Fn(u64, u64) -> Option<u64>,
) -> Result<u64> {
    let scan_end = EXACT_SCAN.min(cap);
    if let Some(m) = (1..=scan_end).find(|&m| exact(m) < ln_alpha) {
        return Ok(m);
    }
    if cap <= EXACT_SCAN {
        return Err(Error::Uncertifiable { cap });
    }

    // Exponential bracket on the upper envelope, then bisection inside it.
    let prev;
    let mut hi = EXACT_SCAN;
    loop {
        let next = hi.saturating_mul(2).min(cap);
        if upper(next) < ln_alpha {
            prev = hi;
            hi = next;
            break;
        }
        if next == cap {
            prev = cap;
            hi = cap;
            break;
        }
        hi = next;
    }
    let hi = if prev < hi {
        let (mut a, mut b) = (prev, hi);
        while b - a > 1 {
            let mid = a + (b - a) / 2;
            if upper(mid) < ln_alpha {
                b = mid;
            } else {
                a = mid;
            }
        }
        b
    } else {
        hi
    };

    // Largest m ruled out by the lower envelope. The envelope can rise for
    // m below 1/gap, but there it stays above ~0.45; for larger α walk the
    // whole range.
    let lo = if alpha >= 0.4 || lower(EXACT_SCAN + 1) < ln_alpha {
        EXACT_SCAN
    } else {
        let (mut a, mut b) = (EXACT_SCAN + 1, hi);
        while b - a > 1 {
            let mid = a + (b - a) / 2;
            if lower(mid) >= ln_alpha {
                a = mid;
            } else {
                b = mid;
            }
        }
        a
    };
    walk(lo + 1, hi).ok_or(Error::Uncertifiable { cap })
}

// First m in [lo, hi] passing the exact binomial condition. Walks m upward
// keeping the tail P(K_m ≥ v) and the pmf at v − 1, v through Pascal's rule;
// values close to the threshold are recomputed from scratch.
fn walk_binomial(lo: u64, hi: u64, p: f64, omega_q: f64, ln_alpha: f64) -> Option<u64> {
    let wins = |m: u64| ((m as f64 * omega_q).ceil() as u64).min(m);
    let q = 1.0 - p;
    let alpha = ln_alpha.exp();
    let restart = |m: u64| {
        let v = wins(m);
        let tail = ln_upper_tail(v, m, p).exp();
        let f_v = ln_binomial_pmf(v, m, p).exp();
        let f_vm1 = ln_binomial_pmf(v - 1, m, p).exp();
        (v, tail, f_vm1, f_v)
    };
    let mut m = lo;
    let (mut v, mut tail, mut f_vm1, mut f_v) = restart(m);
    let mut since_restart = 0u32;
    loop {
        let decide_exact = (tail / alpha - 1.0).abs() < 1e-8 || since_restart >= 100_000;
        if decide_exact {
            let t = ln_upper_tail(v, m, p);
            if t < ln_alpha {
                return Some(m);
            }
            let r = restart(m);
            (v, tail, f_vm1, f_v) = r;
            since_restart = 0;
        } else if tail < alpha {
            return Some(m);
        }
        if m == hi {
            return None;
        }
        // m → m+1 at fixed v.
        let f_vm2 = if v >= 2 { f_vm1 * (v - 1) as f64 / (m - v + 2) as f64 * q / p } else { 0.0 };
        tail += p * f_vm1;
        let new_f_v = q * f_v + p * f_vm1;
        let new_f_vm1 = q * f_vm1 + p * f_vm2;
        m += 1;
        f_v = new_f_v;
        f_vm1 = new_f_vm1;
        // v → v' one win at a time.
        let target = wins(m);
        while v < target {
            tail -= f_v;
            f_vm1 = f_v;
            f_v *= (m - v) as f64 / (v + 1) as f64 * p / q;
            v += 1;
        }
        since_restart += 1;
    }
}

/// `R_req = n_req / T_env`.
pub fn rate_required(q: &CertificationQuery) -> Result<f64> {
    q.validate()?;
    Ok(n_required(q.omega_c, q.omega_q, q.alpha)? as f64 / q.t_env)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Oracle: direct term summation with f64 binomial coefficients built by
    // products, valid for m up to a few thousand.
    fn tail_direct(v: u64, m: u64, p: f64) -> f64 {
        let lp = p.ln();
        let lq = (1.0 - p).ln();
        let mut lnc = 0.0f64; // ln C(m, 0)
        let mut s = 0.0;
        for k in 0..=m {
            if k > 0 {
                lnc += ((m - k + 1) as f64).ln() - (k as f64).ln();
            }
            if k >= v {
                s += (lnc + k as f64 * lp + (m - k) as f64 * lq).exp();
            }
        }
        s
    }

    fn tail_beta(v: u64, m: u64, p: f64) -> f64 {
        if v == 0 {
            1.0
        } else {
            statrs::function::beta::beta_reg(v as f64, (m - v + 1) as f64, p)
        }
    }

    fn n_req_scan(oc: f64, oq: f64, alpha: f64, limit: u64) -> Option<u64> {
        (1..=limit).find(|&m| {
            let v = ((m as f64 * oq).ceil() as u64).min(m);
            ln_upper_tail(v, m, oc) < alpha.ln()
        })
    }

    #[test]
    fn trivial_tails() {
        assert_eq!(binomial_pvalue(0, 37, 0.3).unwrap(), 1.0);
        let all = binomial_pvalue(20, 20, 0.75).unwrap();
        assert!((all / 0.75f64.powi(20) - 1.0).abs() < 1e-14);
        assert!(binomial_pvalue(5, 4, 0.5).is_err());
    }

    #[test]
    fn small_tail_by_hand() {
        // 16 terms k = 85..=100 summed with exact integer binomials.
        let mut s = 0.0;
        for k in 85u32..=100 {
            let mut c = 1.0f64;
            for j in 0..k {
                c = c * (100 - j) as f64 / (j + 1) as f64;
            }
            s += c * 0.75f64.powi(k as i32) * 0.25f64.powi(100 - k as i32);
        }
        let got = binomial_pvalue(85, 100, 0.75).unwrap();
        assert!((got / s - 1.0).abs() < 1e-12, "{got} vs {s}");
    }

    #[test]
    fn log_tails_match_direct_summation() {
        for &p in &[0.6, 0.75, 0.9] {
            for m in (1..=2000u64).step_by(37).chain([1999, 2000]) {
                for v in (0..=m).step_by(((m / 25) as usize).max(1)) {
                    let a = binomial_pvalue(v, m, p).unwrap();
                    let b = tail_direct(v, m, p);
                    if b > 1e-280 {
                        assert!((a / b - 1.0).abs() < 1e-10, "v={v} m={m} p={p}: {a} vs {b}");
                    }
                }
            }
        }
    }

    // Reference values: 40-digit mpmath sums of the exact terms.
    const LARGE_M: [(u64, f64, u64, f64); 12] = [
        (1_000_000, 0.75, 749_134, 0.977_277_875_120_430_94),
        (1_000_000, 0.75, 750_000, 0.500_537_435_069_928_25),
        (1_000_000, 0.75, 750_433, 0.158_942_022_188_008_54),
        (1_000_000, 0.75, 751_299, 0.001_348_569_697_388_664),
        (50_000_000, 0.6, 29_993_072, 0.977_252_935_152_750_96),
        (50_000_000, 0.6, 30_000_000, 0.500_061_421_181_612_52),
        (50_000_000, 0.6, 30_003_464, 0.158_697_281_733_637_2),
        (50_000_000, 0.6, 30_010_392, 0.001_350_586_574_505_822_2),
        (1_000_000_000, 0.9, 899_981_026, 0.977_252_338_071_001_43),
        (1_000_000_000, 0.9, 900_000_000, 0.500_026_633_066_409_94),
        (1_000_000_000, 0.9, 900_009_487, 0.158_663_747_233_529_98),
        (1_000_000_000, 0.9, 900_028_460, 0.001_349_866_367_664_255_8),
    ];

    #[test]
    fn large_m_matches_reference_tails() {
        for (m, p, v, want) in LARGE_M {
            let got = binomial_pvalue(v, m, p).unwrap();
            assert!((got / want - 1.0).abs() < 1e-11, "m={m} v={v}: {got} vs {want}");
        }
    }

    #[test]
    fn moderate_m_agrees_with_incomplete_beta() {
        for &(m, p) in &[(5_000u64, 0.75), (20_000, 0.6)] {
            for v in (0..=m).step_by(97) {
                let a = binomial_pvalue(v, m, p).unwrap();
                let b = tail_beta(v, m, p);
                if b > 1e-250 {
                    assert!((a / b - 1.0).abs() < 1e-8, "m={m} v={v}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn deep_tail_stays_finite_in_log_space() {
        let l = ln_binomial_pvalue(90_000_000, 100_000_000, 0.75).unwrap();
        assert!(l.is_finite() && l < -1e6);
    }

    #[test]
    fn n_required_examples() {
        assert_eq!(n_required(0.5, 1.0, 0.05).unwrap(), 5);
        let chsh = n_required(0.75, (1.0 + std::f64::consts::FRAC_1_SQRT_2) / 2.0, 0.05).unwrap();
        assert_eq!(Some(chsh), n_req_scan(0.75, (1.0 + std::f64::consts::FRAC_1_SQRT_2) / 2.0, 0.05, 1000));
        assert_eq!(chsh, 34);
        let slow = n_required(0.75, 0.76, 0.05).unwrap();
        let fast = n_required(0.75, 0.80, 0.05).unwrap();
        assert!(slow > fast);
    }

    #[test]
    fn n_required_is_minimal_against_exhaustive_scan() {
        let cases = [
            (0.75, 0.76, 0.05),
            (0.75, 0.7551, 0.05),
            (0.75, 0.78, 1e-3),
            (0.6, 0.61, 0.05),
            (0.9, 0.905, 0.01),
            (0.75, 0.8536, 1e-6),
            (0.75, 0.753, 0.05),
        ];
        for (oc, oq, a) in cases {
            let n = n_required(oc, oq, a).unwrap();
            assert!(n <= 100_000, "{n}");
            assert_eq!(Some(n), n_req_scan(oc, oq, a, 100_000), "ω_C={oc} ω_Q={oq} α={a}");
        }
    }

    #[test]
    fn vanishing_gap_is_uncertifiable() {
        assert_eq!(n_required_with_cap(0.75, 0.7500001, 0.05, 1_000_000), Err(Error::Uncertifiable { cap: 1_000_000 }));
    }

    #[test]
    fn near_threshold_search_terminates_quickly() {
        let n = n_required(0.75, 0.75005, 0.05).unwrap();
        let v = ((n as f64 * 0.75005).ceil()) as u64;
        assert!(ln_upper_tail(v, n, 0.75) < 0.05f64.ln());
        assert!(n > 100_000_000 && n < DEFAULT_CAP);
    }

    #[test]
    fn score_bound_unit_scores_is_e_times_pvalue() {
        let b = ScoreBounds::unit();
        for (c, m) in [(80u64, 100u64), (0, 10), (750, 1000), (34, 34)] {
            let bound = score_pvalue_bound(c as f64, m, 0.75, &b).unwrap();
            let p = binomial_pvalue(c, m, 0.75).unwrap();
            assert!((bound - (std::f64::consts::E * p).min(1.0)).abs() <= 1e-10 * bound, "c={c}");
        }
        assert_eq!(score_pvalue_bound(0.0, 10, 0.75, &b).unwrap(), 1.0);
    }

    #[test]
    fn score_bound_interpolates_geometrically() {
        let b = ScoreBounds::unit();
        let got = score_pvalue_bound(80.5, 100, 0.75, &b).unwrap();
        let want = std::f64::consts::E * (tail_direct(80, 100, 0.75) * tail_direct(81, 100, 0.75)).sqrt();
        assert!((got / want - 1.0).abs() < 1e-10);
        assert!(score_pvalue_bound(50.0, 100, 1.5, &b).is_err());
    }

    #[test]
    fn general_route_is_weaker_and_handles_wider_scores() {
        let oq = (1.0 + std::f64::consts::FRAC_1_SQRT_2) / 2.0;
        let g = n_required_general(0.75, oq, 0.05, &ScoreBounds::unit()).unwrap();
        assert!(g >= n_required(0.75, oq, 0.05).unwrap());
        let b = ScoreBounds::new(0.0, 2.0).unwrap();
        let n = n_required_general(1.5, 1.7, 0.05, &b).unwrap();
        // Independent scan with the bound itself.
        let scan = (1..=n).find(|&m| {
            let c = (m as f64 * 1.7).ceil().min(2.0 * m as f64);
            score_pvalue_bound(c, m, 1.5, &b).unwrap() < 0.05
        });
        assert_eq!(scan, Some(n));
        assert!(matches!(
            n_required_general_with_cap(0.75, 0.7500001, 0.05, &ScoreBounds::unit(), 100_000),
            Err(Error::Uncertifiable { .. })
        ));
    }

    #[test]
    fn rate_scales_with_window() {
        let q = CertificationQuery { omega_c: 0.75, omega_q: 0.85, alpha: 0.05, t_env: 1.0 };
        let r1 = rate_required(&q).unwrap();
        let r2 = rate_required(&CertificationQuery { t_env: 2.0, ..q }).unwrap();
        assert_eq!(r1, 2.0 * r2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn tail_decreasing_in_wins(m in 1u64..3000, p in 0.05f64..0.95) {
            let mut prev = 1.0;
            for v in 0..=m.min(400) {
                let t = binomial_pvalue(v, m, p).unwrap();
                prop_assert!(t <= prev * (1.0 + 1e-13));
                prop_assert!((0.0..=1.0).contains(&t));
                prev = t;
            }
        }

        #[test]
        fn n_required_monotone(oc in 0.55f64..0.85, d1 in 0.01f64..0.1, d2 in 0.01f64..0.1, a in 0.001f64..0.2) {
            let (lo, hi) = if d1 < d2 { (d1, d2) } else { (d2, d1) };
            let oq_lo = (oc + lo).min(1.0);
            let oq_hi = (oc + hi).min(1.0);
            prop_assert!(n_required(oc, oq_hi, a).unwrap() <= n_required(oc, oq_lo, a).unwrap());
            prop_assert!(n_required(oc - 0.01, oq_lo, a).unwrap() <= n_required(oc, oq_lo, a).unwrap());
            prop_assert!(n_required(oc, oq_lo, a * 1.5).unwrap() <= n_required(oc, oq_lo, a).unwrap());
        }
    }
}
