//! Atom-cavity device models: reflection amplitudes, three-node GHZ
//! generation by photon reflection, and Poisson fluorescence readout.
//!
//! All rates are angular (rad/s) unless the name says otherwise.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use crate::error::{invalid, Error, Result};
use crate::numeric::poisson_sf;
use crate::numeric::quadrature::{gauss_hermite, gauss_legendre};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityParams {
    pub g: f64,
    pub kappa_in: f64,
    pub kappa_ex: f64,
    pub gamma: f64,
}

impl CavityParams {
    pub fn new(g: f64, kappa_in: f64, kappa_ex: f64, gamma: f64) -> Result<Self> {
        let c = Self { g, kappa_in, kappa_ex, gamma };
        c.validate()?;
        Ok(c)
    }

    /// `κ_in = 0` is accepted and means an infinite internal cooperativity.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("g", self.g), ("kappa_ex", self.kappa_ex), ("gamma", self.gamma)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Parameter(format!("{name} = {v} must be positive")));
            }
        }
        if !(self.kappa_in >= 0.0 && self.kappa_in.is_finite()) {
            return Err(Error::Parameter(format!("kappa_in = {} must be non-negative", self.kappa_in)));
        }
        Ok(())
    }

    /// `C_in = g²/(2κ_in γ)`.
    pub fn c_in(&self) -> f64 {
        self.g * self.g / (2.0 * self.kappa_in * self.gamma)
    }

    pub fn kappa(&self) -> f64 {
        self.kappa_in + self.kappa_ex
    }

    /// Network node with `g/2π = 3 MHz`, `γ/2π = 0.24 MHz` and
    /// `κ_ex = g + 2κ_in`.
    pub fn telecom_node(c_in: f64) -> Result<Self> {
        let g = TAU * 3e6;
        let gamma = TAU * 0.24e6;
        let kin = kappa_in_for(g, gamma, c_in)?;
        Self::new(g, kin, g + 2.0 * kin, gamma)
    }

    /// Readout node with `g/2π = 3 MHz`, `γ/2π = 91 kHz` and
    /// `κ_ex = (g + 2κ_in)/3`.
    pub fn readout_node(c_in: f64) -> Result<Self> {
        let g = TAU * 3e6;
        let gamma = TAU * 91e3;
        let kin = kappa_in_for(g, gamma, c_in)?;
        Self::new(g, kin, (g + 2.0 * kin) / 3.0, gamma)
    }
}

fn kappa_in_for(g: f64, gamma: f64, c_in: f64) -> Result<f64> {
    if !(c_in > 0.0) {
        return Err(Error::Parameter(format!("C_in = {c_in} must be positive")));
    }
    Ok(g * g / (2.0 * gamma * c_in))
}

/// Reflection amplitudes `(r₀, r₁)` for the uncoupled and coupled atomic state.
pub fn reflection_coefficients(c: &CavityParams, delta: f64) -> (Complex64, Complex64) {
    let i = Complex64::i();
    let num = Complex64::new(c.kappa_in - c.kappa_ex, 0.0) - i * delta;
    let den = Complex64::new(c.kappa_in + c.kappa_ex, 0.0) - i * delta;
    let atom = Complex64::new(c.gamma, 0.0) - i * delta;
    let g2 = c.g * c.g;
    (num / den, (num * atom + g2) / (den * atom + g2))
}

/// Attenuation `r_opt` and delay `τ` of the reference arm that balance a node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub r_opt: f64,
    pub tau_delay: f64,
}

pub fn calibration(c: &CavityParams) -> Result<Calibration> {
    c.validate()?;
    if c.kappa_ex <= c.kappa_in {
        return Err(Error::Parameter(format!(
            "delay needs an overcoupled cavity (kappa_ex = {} <= kappa_in = {})",
            c.kappa_ex, c.kappa_in
        )));
    }
    let r_opt = if c.kappa_in == 0.0 { 1.0 } else { 1.0 - 2.0 / (1.0 + (1.0 + 2.0 * c.c_in()).sqrt()) };
    let tau_delay = 2.0 * c.kappa_ex / (c.kappa_ex * c.kappa_ex - c.kappa_in * c.kappa_in);
    Ok(Calibration { r_opt, tau_delay })
}

/// Gaussian single-photon pulse. The spectral intensity `|f(Δ)|²` is normal
/// with mean `center` and standard deviation `1/(2σ_t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonSpectrum {
    pub sigma_t: f64,
    #[serde(default)]
    pub center: f64,
}

impl PhotonSpectrum {
    pub fn new(sigma_t: f64) -> Result<Self> {
        let s = Self { sigma_t, center: 0.0 };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_t > 0.0 && self.sigma_t.is_finite()) {
            return Err(Error::Parameter(format!("sigma_t = {} must be positive", self.sigma_t)));
        }
        if !self.center.is_finite() {
            return Err(Error::Parameter("spectrum center must be finite".into()));
        }
        Ok(())
    }

    pub fn spectral_std(&self) -> f64 {
        0.5 / self.sigma_t
    }

    pub fn intensity(&self, delta: f64) -> f64 {
        let s = self.spectral_std();
        let z = (delta - self.center) / s;
        (-0.5 * z * z).exp() / (s * (2.0 * PI).sqrt())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GhzNetworkSpec {
    pub nodes: Vec<CavityParams>,
    pub spectrum: PhotonSpectrum,
}

impl GhzNetworkSpec {
    pub fn equal(node: CavityParams, spectrum: PhotonSpectrum) -> Self {
        Self { nodes: vec![node; 3], spectrum }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes.len() != 3 {
            return Err(Error::Parameter(format!("expected 3 nodes, got {}", self.nodes.len())));
        }
        for n in &self.nodes {
            calibration(n)?;
        }
        self.spectrum.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GhzOutcome {
    pub fidelity: f64,
    pub p_success: f64,
    pub p_plus: f64,
    pub p_minus: f64,
}

impl GhzOutcome {
    pub fn infidelity(&self) -> f64 {
        1.0 - self.fidelity
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Acc {
    p: [f64; 2],
    f: [f64; 2],
}

impl Acc {
    fn add(&mut self, o: &Acc, w: f64) {
        for k in 0..2 {
            self.p[k] += w * o.p[k];
            self.f[k] += w * o.f[k];
        }
    }

    fn outcome(&self) -> GhzOutcome {
        let ps = self.p[0] + self.p[1];
        GhzOutcome {
            fidelity: if ps > 0.0 { (self.f[0] + self.f[1]) / ps } else { 0.0 },
            p_success: ps,
            p_plus: self.p[0],
            p_minus: self.p[1],
        }
    }
}

struct Kernel {
    nodes: Vec<CavityParams>,
    r_bar: f64,
    tau_bar: f64,
}

impl Kernel {
    fn new(spec: &GhzNetworkSpec) -> Result<Self> {
        spec.validate()?;
        let mut r_bar = 1.0;
        let mut tau_bar = 0.0;
        for n in &spec.nodes {
            let c = calibration(n)?;
            r_bar *= c.r_opt;
            tau_bar += c.tau_delay;
        }
        Ok(Self { nodes: spec.nodes.clone(), r_bar, tau_bar })
    }

    /// Heralded branch probabilities and target overlaps at detuning `Δ`,
    /// before weighting by `|f(Δ)|²/2`. Detection `+` projects onto the
    /// GHZ⁻ target and `−` onto GHZ⁺, both in the `|±±±⟩` basis.
    fn eval(&self, delta: f64) -> Acc {
        let refl: Vec<_> = self.nodes.iter().map(|n| reflection_coefficients(n, delta)).collect();
        let h = Complex64::from_polar(self.r_bar, self.tau_bar * delta);
        let amp = |i: usize| -> Complex64 {
            (0..3)
                .map(|j| if (i >> j) & 1 == 1 { refl[j].1 } else { refl[j].0 } * FRAC_1_SQRT_2)
                .product()
        };
        let inv8 = 1.0 / 8f64.sqrt();
        let mut v = [Complex64::new(0.0, 0.0); 8];
        for (i, vi) in v.iter_mut().enumerate() {
            *vi = amp(i);
        }
        // Components of v along |+++⟩ and |−−−⟩.
        let along_plus: Complex64 = v.iter().sum::<Complex64>() * inv8;
        let along_minus: Complex64 =
            v.iter().enumerate().map(|(i, &a)| if i.count_ones() % 2 == 0 { a } else { -a }).sum::<Complex64>() * inv8;
        let vnorm: f64 = v.iter().map(|a| a.norm_sqr()).sum();
        let mut out = Acc::default();
        for (k, s) in [1.0, -1.0].into_iter().enumerate() {
            // u = (h|+++⟩ + s·v)/√2
            let norm = 0.5 * (h.norm_sqr() + vnorm + 2.0 * s * (h.conj() * along_plus).re);
            let up = h + s * along_plus;
            let um = s * along_minus;
            // Target GHZ∓ = (|+++⟩ ∓ |−−−⟩)/√2 for detection ±.
            let t = if k == 0 { -1.0 } else { 1.0 };
            let overlap = (up + t * um) * (0.5);
            out.p[k] = 0.5 * norm;
            out.f[k] = 0.5 * overlap.norm_sqr();
        }
        out
    }
}

/// Fidelity and success probability of the three-node GHZ protocol.
///
/// The spectral integral uses composite 16-point Gauss–Legendre panels over
/// ±12 spectral standard deviations, doubling the panel count until both
/// outputs change by less than 1e-9 relative.
pub fn ghz_generation(spec: &GhzNetworkSpec) -> Result<GhzOutcome> {
    let k = Kernel::new(spec)?;
    let mut prev = integrate_panels(&k, &spec.spectrum, 8);
    let mut panels = 16;
    let mut change = f64::INFINITY;
    while panels <= 8192 {
        let cur = integrate_panels(&k, &spec.spectrum, panels);
        change = rel_change(&prev, &cur);
        prev = cur;
        if change < 1e-9 {
            return Ok(prev);
        }
        panels *= 2;
    }
    if change < 1e-6 {
        Ok(prev)
    } else {
        Err(Error::NonConvergence(format!("GHZ spectral integral: relative change {change:.2e}")))
    }
}

/// The same integral with a fixed number of 16-point panels.
pub fn ghz_generation_panels(spec: &GhzNetworkSpec, panels: usize) -> Result<GhzOutcome> {
    if panels == 0 {
        return Err(invalid("need at least one panel"));
    }
    Ok(integrate_panels(&Kernel::new(spec)?, &spec.spectrum, panels))
}

fn integrate_panels(k: &Kernel, spectrum: &PhotonSpectrum, panels: usize) -> GhzOutcome {
    let s = spectrum.spectral_std();
    let (lo, hi) = (spectrum.center - 12.0 * s, spectrum.center + 12.0 * s);
    let (gx, gw) = gauss_legendre(16);
    let h = (hi - lo) / panels as f64;
    let mut acc = Acc::default();
    for p in 0..panels {
        let a = lo + h * p as f64;
        for (x, w) in gx.iter().zip(&gw) {
            let d = a + 0.5 * h * (x + 1.0);
            acc.add(&k.eval(d), 0.5 * h * w * spectrum.intensity(d));
        }
    }
    acc.outcome()
}

fn rel_change(a: &GhzOutcome, b: &GhzOutcome) -> f64 {
    let r = |x: f64, y: f64| (x - y).abs() / y.abs().max(1e-300);
    r(a.fidelity, b.fidelity).max(r(a.p_success, b.p_success))
}

/// Same integral with an `n`-node Gauss–Hermite rule against the Gaussian.
pub fn ghz_generation_hermite(spec: &GhzNetworkSpec, n: usize) -> Result<GhzOutcome> {
    let k = Kernel::new(spec)?;
    let s = spec.spectrum.spectral_std();
    let (x, w) = gauss_hermite(n);
    let mut acc = Acc::default();
    for (xi, wi) in x.iter().zip(&w) {
        acc.add(&k.eval(spec.spectrum.center + 2f64.sqrt() * s * xi), wi / PI.sqrt());
    }
    Ok(acc.outcome())
}

/// Attempt rate `p_e·p_success/(k_window·σ_t)`: one attempt per
/// `k_window` pulse widths, with source efficiency `p_e`.
pub fn ghz_attempt_rate(p_success: f64, sigma_t: f64, k_window: f64, p_e_src: f64) -> Result<f64> {
    if !(sigma_t > 0.0 && k_window > 0.0) {
        return Err(invalid("sigma_t and k_window must be positive"));
    }
    if !(0.0..=1.0).contains(&p_e_src) {
        return Err(invalid(format!("source efficiency {p_e_src} outside [0,1]")));
    }
    Ok(p_e_src * p_success / (k_window * sigma_t))
}

/// Infidelity to `Ψ⁻` of the detection-averaged two-photon interference
/// state with trace purity `V`: `(1 − V)/2`.
pub fn tpi_infidelity(purity: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&purity) {
        return Err(invalid(format!("trace purity {purity} outside [0,1]")));
    }
    Ok((1.0 - purity) / 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReadoutParams {
    pub r_bright: f64,
    pub r_dark: f64,
    pub t_life: f64,
    pub eta_det: f64,
    pub detuning: f64,
}

impl ReadoutParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_bright >= 0.0 && self.r_dark >= 0.0 && self.r_dark <= self.r_bright) {
            return Err(Error::Parameter(format!(
                "need 0 <= r_dark ({}) <= r_bright ({})",
                self.r_dark, self.r_bright
            )));
        }
        if !(self.t_life > 0.0) {
            return Err(Error::Parameter(format!("t_life = {} must be positive", self.t_life)));
        }
        if !(0.0..=1.0).contains(&self.eta_det) {
            return Err(Error::Parameter(format!("eta_det = {} outside [0,1]", self.eta_det)));
        }
        Ok(())
    }

    /// Rates derived from a cavity with dark-state detuning `Δ = ratio·γ`.
    pub fn from_cavity(c: &CavityParams, eta_det: f64, detuning_over_gamma: f64, t_life: f64) -> Result<Self> {
        c.validate()?;
        let r_bright = bright_rate(c, eta_det);
        let detuning = detuning_over_gamma * c.gamma;
        let p = Self { r_bright, r_dark: dark_rate(r_bright, c.gamma, detuning)?, t_life, eta_det, detuning };
        p.validate()?;
        Ok(p)
    }

    /// `C_in = 20`, `η = 0.9`, `Δ/γ = 100`, `T_life = 1.6 ms`.
    pub fn reference() -> Self {
        Self::from_cavity(&CavityParams::readout_node(20.0).unwrap(), 0.9, 100.0, 1.6e-3).unwrap()
    }
}

/// `η·κ_ex·g²/(4κ²)`.
pub fn bright_rate(c: &CavityParams, eta_det: f64) -> f64 {
    let k = c.kappa();
    eta_det * c.kappa_ex * c.g * c.g / (4.0 * k * k)
}

/// `r_bright·(γ/Δ)²`.
pub fn dark_rate(r_bright: f64, gamma: f64, detuning: f64) -> Result<f64> {
    if detuning == 0.0 {
        return Err(Error::Parameter("dark-state detuning must be non-zero".into()));
    }
    Ok(r_bright * (gamma / detuning).powi(2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReadoutError {
    /// Dark state read as bright.
    pub p_plus: f64,
    /// Bright state read as dark.
    pub p_minus: f64,
}

impl ReadoutError {
    pub fn total(&self) -> f64 {
        self.p_plus + self.p_minus
    }
}

/// Threshold readout: "bright" when more than `n_th` photons arrive in `τ`.
///
/// The depumping integral is summed in closed form: with `a = 1/T_life`,
/// `∫₀^τ a e^{−at} Q̄(n, rt) dt = Σ_{m≤n} a r^m/(r+a)^{m+1}·P(N_{(r+a)τ} > m)`.
pub fn readout_error(tau: f64, n_th: u64, p: &ReadoutParams) -> ReadoutError {
    let a = 1.0 / p.t_life;
    let r = p.r_bright;
    let lam = (r + a) * tau;
    let ratio = r / (r + a);
    let mut depump = 0.0;
    let mut coef = a / (r + a);
    for m in 0..=n_th {
        depump += coef * poisson_sf(m, lam);
        coef *= ratio;
    }
    let survive = (-tau * a).exp() * q_bar(n_th, r * tau);
    ReadoutError { p_plus: poisson_sf(n_th, p.r_dark * tau), p_minus: depump + survive }
}

/// Same quantity with the depumping integral done by adaptive quadrature.
pub fn readout_error_quadrature(tau: f64, n_th: u64, p: &ReadoutParams) -> ReadoutError {
    use crate::numeric::quadrature::integrate_adaptive;
    let a = 1.0 / p.t_life;
    let (depump, _) = integrate_adaptive(|t| a * (-a * t).exp() * q_bar(n_th, p.r_bright * t), 0.0, tau, 1e-12);
    let survive = (-tau * a).exp() * q_bar(n_th, p.r_bright * tau);
    ReadoutError { p_plus: poisson_sf(n_th, p.r_dark * tau), p_minus: depump + survive }
}

fn q_bar(n: u64, lambda: f64) -> f64 {
    crate::numeric::poisson_cdf(n, lambda)
}

/// Threshold minimizing `P⁺ + P⁻` at fixed `τ`; the smallest on ties.
pub fn optimal_threshold(tau: f64, p: &ReadoutParams) -> (u64, f64) {
    let mut best = (0, readout_error(tau, 0, p).total());
    let mut n = 1;
    loop {
        if q_bar(n - 1, p.r_bright * tau) > 1.0 - 1e-12 {
            break;
        }
        let e = readout_error(tau, n, p).total();
        if e < best.1 {
            best = (n, e);
        } else if e > best.1 {
            break;
        }
        n += 1;
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReadoutTime {
    pub tau: f64,
    pub n_th: u64,
    pub error: f64,
}

/// Shortest `τ` at which the optimally thresholded error reaches `target`.
///
/// A logarithmic scan from `10⁻³/r_bright` up to `10·T_life` finds the first
/// grid point below the target; bisection then pins the crossing.
pub fn min_readout_time(target: f64, p: &ReadoutParams) -> Result<ReadoutTime> {
    p.validate()?;
    if !(target > 0.0 && target < 1.0) {
        return Err(invalid(format!("target error {target} outside (0,1)")));
    }
    if p.r_bright <= 0.0 {
        return Err(Error::Infeasible("no bright-state photons".into()));
    }
    let err = |t: f64| optimal_threshold(t, p).1;
    let t_hi_cap = 10.0 * p.t_life;
    let mut lo = 1e-3 / p.r_bright;
    if lo >= t_hi_cap {
        return Err(Error::Infeasible("depumping faster than photon collection".into()));
    }
    let step = 10f64.powf(1.0 / 40.0);
    let mut floor = f64::INFINITY;
    let mut hi = None;
    let mut t = lo;
    while t <= t_hi_cap {
        let e = err(t);
        floor = floor.min(e);
        if e <= target {
            hi = Some(t);
            break;
        }
        lo = t;
        t *= step;
    }
    let Some(mut hi) = hi else {
        return Err(Error::Infeasible(format!("error floor {floor:.3e} above target {target:.3e}")));
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let e = err(mid);
        if e <= target {
            hi = mid;
        } else {
            lo = mid;
        }
        if (e - target).abs() < 1e-6 * target && (hi - lo) < 1e-9 * hi {
            break;
        }
        if (hi - lo) <= f64::EPSILON * hi {
            break;
        }
    }
    let (n_th, error) = optimal_threshold(hi, p);
    if (error - target).abs() > 1e-5 * target {
        return Err(Error::NonConvergence(format!(
            "readout time bisection ended at error {error:.6e} for target {target:.6e}"
        )));
    }
    Ok(ReadoutTime { tau: hi, n_th, error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn reflection_limits() {
        let c = CavityParams::new(1.0, 0.0, 2.0, 0.5).unwrap();
        let (r0, _) = reflection_coefficients(&c, 0.0);
        assert_eq!(r0, Complex64::new(-1.0, 0.0));
        let strong = CavityParams::new(1e4, 0.0, 1.0, 1.0).unwrap();
        let (_, r1) = reflection_coefficients(&strong, 0.0);
        assert!((r1 - Complex64::new(1.0, 0.0)).norm() < 1e-7);
    }

    #[test]
    fn calibration_values() {
        let c = |cin: f64| CavityParams::new(1.0, 1.0 / (2.0 * cin), 3.0, 1.0).unwrap();
        assert!((calibration(&c(4.0)).unwrap().r_opt - 0.5).abs() < 1e-15);
        let want = 1.0 - 2.0 / (1.0 + 41f64.sqrt());
        assert!((calibration(&c(20.0)).unwrap().r_opt - want).abs() < 1e-15);
        assert!(calibration(&c(1e12)).unwrap().r_opt > 1.0 - 1e-5);
        let cal = calibration(&CavityParams::new(1.0, 1.0, 3.0, 1.0).unwrap()).unwrap();
        assert!((cal.tau_delay - 6.0 / 8.0).abs() < 1e-15);
        let under = CavityParams::new(1.0, 2.0, 2.0, 1.0).unwrap();
        assert!(matches!(calibration(&under), Err(Error::Parameter(_))));
        assert!(CavityParams::new(0.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn spectrum_is_normalized() {
        let s = PhotonSpectrum { sigma_t: 2e-7, center: 1e5 };
        let sd = s.spectral_std();
        let (v, _) =
            crate::numeric::quadrature::integrate_adaptive(|d| s.intensity(d), s.center - 40.0 * sd, s.center + 40.0 * sd, 1e-13);
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ideal_limit_is_perfect() {
        let node = CavityParams::new(TAU * 1e9, 0.0, TAU * 1e6, TAU * 1e3).unwrap();
        let spec = GhzNetworkSpec::equal(node, PhotonSpectrum::new(1e-2).unwrap());
        let o = ghz_generation(&spec).unwrap();
        assert!((o.fidelity - 1.0).abs() < 1e-6, "{o:?}");
        assert!((o.p_success - 1.0).abs() < 1e-6);
        assert!((o.p_plus - 0.5).abs() < 1e-6);
    }

    // Oracle: explicit 8-dimensional state vectors in the computational basis.
    fn brute_eval(spec: &GhzNetworkSpec, d: f64) -> [f64; 4] {
        let cal: Vec<_> = spec.nodes.iter().map(|n| calibration(n).unwrap()).collect();
        let rbar: f64 = cal.iter().map(|c| c.r_opt).product();
        let tbar: f64 = cal.iter().map(|c| c.tau_delay).sum();
        let plus = [Complex64::new(1.0 / 8f64.sqrt(), 0.0); 8];
        let minus: Vec<Complex64> =
            (0..8usize).map(|i| plus[i] * if i.count_ones() % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let mut v = [Complex64::new(1.0, 0.0); 8];
        for (i, vi) in v.iter_mut().enumerate() {
            for (j, n) in spec.nodes.iter().enumerate() {
                let (r0, r1) = reflection_coefficients(n, d);
                *vi *= if (i >> j) & 1 == 1 { r1 } else { r0 } / 2f64.sqrt();
            }
        }
        let h = Complex64::from_polar(rbar, tbar * d);
        let mut out = [0.0; 4];
        for (k, s) in [1.0, -1.0].into_iter().enumerate() {
            let u: Vec<Complex64> = (0..8).map(|i| (h * plus[i] + s * v[i]) / 2f64.sqrt()).collect();
            let t = -s;
            let tgt: Vec<Complex64> = (0..8).map(|i| (plus[i] + t * minus[i]) / 2f64.sqrt()).collect();
            out[k] = 0.5 * u.iter().map(|a| a.norm_sqr()).sum::<f64>();
            out[2 + k] = 0.5 * tgt.iter().zip(&u).map(|(a, b)| a.conj() * b).sum::<Complex64>().norm_sqr();
        }
        out
    }

    #[test]
    fn kernel_matches_state_vector_oracle() {
        let nodes = vec![
            CavityParams::telecom_node(5.0).unwrap(),
            CavityParams::telecom_node(20.0).unwrap(),
            CavityParams::new(TAU * 2e6, TAU * 0.3e6, TAU * 4e6, TAU * 0.5e6).unwrap(),
        ];
        let spec = GhzNetworkSpec { nodes, spectrum: PhotonSpectrum::new(1e-7).unwrap() };
        let k = Kernel::new(&spec).unwrap();
        for d in [-3e7, -1e6, 0.0, 2.5e5, 4e6] {
            let a = k.eval(d);
            let b = brute_eval(&spec, d);
            let got = [a.p[0], a.p[1], a.f[0], a.f[1]];
            for i in 0..4 {
                assert!((got[i] - b[i]).abs() < 1e-14, "d={d} i={i}: {} vs {}", got[i], b[i]);
            }
        }
    }

    fn telecom(c_in: f64, sg: f64) -> GhzNetworkSpec {
        let node = CavityParams::telecom_node(c_in).unwrap();
        GhzNetworkSpec::equal(node, PhotonSpectrum::new(sg / node.gamma).unwrap())
    }

    #[test]
    fn hermite_agrees_on_smooth_integrands() {
        let spec = telecom(100.0, 0.34);
        let a = ghz_generation(&spec).unwrap();
        let h = ghz_generation_hermite(&spec, 128).unwrap();
        let h2 = ghz_generation_hermite(&spec, 256).unwrap();
        assert!((h.fidelity - h2.fidelity).abs() < 1e-6);
        assert!((a.fidelity - h2.fidelity).abs() < 1e-6);
        assert!((a.p_success - h2.p_success).abs() < 1e-6);
    }

    #[test]
    fn fidelity_monotone_in_cooperativity_and_width() {
        let cs: Vec<f64> = (0..=16).map(|k| 10f64.powf(k as f64 / 8.0)).collect();
        for sg in [0.12, 0.34] {
            let f: Vec<f64> = cs.iter().map(|&c| ghz_generation(&telecom(c, sg)).unwrap().fidelity).collect();
            assert!(f.windows(2).all(|w| w[1] >= w[0]), "sg={sg}: {f:?}");
        }
        for c in [2.0, 5.0, 10.0, 100.0] {
            let f: Vec<f64> = [0.12, 0.2, 0.34, 1.0, 3.0]
                .iter()
                .map(|&sg| ghz_generation(&telecom(c, sg)).unwrap().fidelity)
                .collect();
            assert!(f.windows(2).all(|w| w[1] >= w[0]), "C={c}: {f:?}");
        }
    }

    #[test]
    fn broadband_pulses_lose_the_atomic_signature() {
        // Far off resonance both reflections tend to 1 and the heralded
        // state approaches |+++⟩, whose overlap with either target is 1/2.
        let f = |sg: f64| ghz_generation(&telecom(1.0, sg)).unwrap().fidelity;
        assert!((f(1e-3) - 0.5).abs() < 0.01);
        assert!(f(0.12) > f(0.34));
    }

    #[test]
    fn success_probability_bounded() {
        for c in [0.5, 2.0, 50.0] {
            for sg in [0.05, 0.5, 5.0] {
                let o = ghz_generation(&telecom(c, sg)).unwrap();
                assert!(o.p_success <= 1.0 + 1e-12 && o.p_success > 0.0);
                assert!((0.0..=1.0 + 1e-12).contains(&o.fidelity));
            }
        }
    }

    #[test]
    fn attempt_rate_and_tpi() {
        assert!((ghz_attempt_rate(0.5, 1e-6, 10.0, 1.0).unwrap() - 5e4).abs() < 1e-9);
        assert!((ghz_attempt_rate(0.5, 1e-6, 10.0, 0.5).unwrap() - 2.5e4).abs() < 1e-9);
        assert!(ghz_attempt_rate(0.5, 0.0, 10.0, 1.0).is_err());
        assert!((tpi_infidelity(0.98).unwrap() - 0.01).abs() < 1e-15);
        assert!(tpi_infidelity(1.2).is_err());
    }

    fn ideal_readout(r: f64) -> ReadoutParams {
        ReadoutParams { r_bright: r, r_dark: 0.0, t_life: f64::INFINITY, eta_det: 1.0, detuning: 1.0 }
    }

    #[test]
    fn readout_trivial_limits() {
        let p = ideal_readout(2e6);
        for tau in [1e-7, 1e-6, 3e-6] {
            let e = readout_error(tau, 0, &p);
            assert!((e.total() - (-2e6 * tau).exp()).abs() < 1e-12);
            assert_eq!(optimal_threshold(tau, &p).0, 0);
        }
        let q = ReadoutParams { r_dark: 1e4, t_life: 1e-3, ..p };
        let e = readout_error(1e-6, 0, &q);
        assert!((e.p_plus - (1.0 - (-1e-2f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn indistinguishable_states_cannot_be_read() {
        let p = ReadoutParams { r_bright: 1e6, r_dark: 1e6, t_life: 1.0, eta_det: 1.0, detuning: 1.0 };
        for tau in [1e-7, 1e-6, 1e-5] {
            for n in 0..20 {
                assert!(readout_error(tau, n, &p).total() >= 0.5);
            }
        }
    }

    #[test]
    fn reference_rates() {
        let c = CavityParams::readout_node(20.0).unwrap();
        assert!((c.c_in() - 20.0).abs() < 1e-12);
        let p = ReadoutParams::reference();
        assert!(close(p.r_dark, 1e-4 * p.r_bright, 1e-14));
        let k = c.kappa();
        assert!(close(p.r_bright, 0.9 * c.kappa_ex * c.g * c.g / (4.0 * k * k), 1e-15));
        let free = CavityParams::new(2.0, 0.0, 3.0, 1.0).unwrap();
        assert!(close(bright_rate(&free, 0.5), 0.5 * 4.0 / 12.0, 1e-15));
    }

    #[test]
    fn closed_form_matches_quadrature() {
        let p = ReadoutParams::reference();
        for tau in [2e-7, 1e-6, 5e-6, 4e-5, 3e-3] {
            for n in [0, 1, 3, 7, 15] {
                let a = readout_error(tau, n, &p);
                let b = readout_error_quadrature(tau, n, &p);
                assert!((a.p_minus - b.p_minus).abs() < 1e-9, "tau={tau} n={n}");
                assert_eq!(a.p_plus, b.p_plus);
            }
        }
    }

    #[test]
    fn optimal_threshold_is_exhaustive_minimum() {
        let p = ReadoutParams::reference();
        for tau in [1e-6, 5e-6, 2e-5] {
            let (n, e) = optimal_threshold(tau, &p);
            let all: Vec<f64> = (0..200).map(|k| readout_error(tau, k, &p).total()).collect();
            let best = all.iter().cloned().fold(f64::INFINITY, f64::min);
            assert_eq!(e, best);
            assert_eq!(all.iter().position(|&v| v == best).unwrap() as u64, n);
        }
    }

    #[test]
    fn readout_time_behaviour() {
        let p = ReadoutParams::reference();
        let a = min_readout_time(0.002, &p).unwrap();
        let b = min_readout_time(0.01, &p).unwrap();
        assert!(b.tau < a.tau);
        assert!((a.error - 0.002).abs() <= 1e-5 * 0.002);
        let unreachable = ReadoutParams { t_life: 1e-6, ..p };
        assert!(matches!(min_readout_time(0.002, &unreachable), Err(Error::Infeasible(_))));
    }

    #[test]
    fn readout_time_scales_with_rate() {
        let p = ReadoutParams { r_bright: 1e6, r_dark: 0.0, t_life: 1.0, eta_det: 1.0, detuning: 1.0 };
        let q = ReadoutParams { r_bright: 2e6, ..p };
        let a = min_readout_time(1e-3, &p).unwrap().tau;
        let b = min_readout_time(1e-3, &q).unwrap().tau;
        assert!((a / b - 2.0).abs() < 1e-3, "{}", a / b);
    }

    proptest! {
        #[test]
        fn reflections_are_passive(
            g in 1e-2f64..1e2, kin in 0.0f64..1e2, kex in 1e-2f64..1e2, gam in 1e-2f64..1e2,
            deltas in proptest::collection::vec(-1e3f64..1e3, 50),
        ) {
            let c = CavityParams::new(g, kin, kex, gam).unwrap();
            for d in deltas {
                let (r0, r1) = reflection_coefficients(&c, d);
                prop_assert!(r0.norm() <= 1.0 + 1e-12);
                prop_assert!(r1.norm() <= 1.0 + 1e-12);
            }
        }

        #[test]
        fn error_components_monotone_in_time(t1 in 1e-7f64..1e-4, f in 1.01f64..3.0, n in 0u64..12) {
            let p = ReadoutParams { t_life: 1e3, ..ReadoutParams::reference() };
            let (a, b) = (readout_error(t1, n, &p), readout_error(t1 * f, n, &p));
            prop_assert!(b.p_plus >= a.p_plus);
            prop_assert!(b.p_minus <= a.p_minus + 1e-15);
        }
    }
}
