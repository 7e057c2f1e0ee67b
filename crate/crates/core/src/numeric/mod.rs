//! Small numerical toolkit shared by the physics modules: 1-D and simplex
//! optimizers, quadrature rules and Poisson tails.

pub mod optimize;
pub mod quadrature;

use statrs::function::gamma::ln_gamma;

/// Poisson cumulative probability `e^{-λ} Σ_{m=0}^{n} λ^m / m!`.
pub fn poisson_cdf(n: u64, lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if (n as f64) + 1.0 > lambda {
        // Sum of the lower terms dominates; complement is small and summed exactly.
        1.0 - poisson_sf(n, lambda)
    } else {
        sum_down(n, lambda)
    }
}

/// Poisson survival probability `P(N > n)`.
pub fn poisson_sf(n: u64, lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 0.0;
    }
    if (n as f64) + 1.0 > lambda {
        // Terms decrease from m = n+1 onward.
        let m0 = n + 1;
        let mut term = ln_pmf(m0, lambda).exp();
        let mut sum = 0.0;
        let mut m = m0 as f64;
        while term > 0.0 {
            sum += term;
            if term < sum * 1e-17 {
                break;
            }
            m += 1.0;
            term *= lambda / m;
        }
        sum
    } else {
        1.0 - sum_down(n, lambda)
    }
}

fn ln_pmf(m: u64, lambda: f64) -> f64 {
    -lambda + (m as f64) * lambda.ln() - ln_gamma(m as f64 + 1.0)
}

// Σ_{m=0}^{n} pmf(m) for n below the mode: terms shrink going down from n.
fn sum_down(n: u64, lambda: f64) -> f64 {
    let mut term = ln_pmf(n, lambda).exp();
    let mut sum = 0.0;
    let mut m = n;
    loop {
        sum += term;
        if m == 0 || term < sum * 1e-17 {
            break;
        }
        term *= m as f64 / lambda;
        m -= 1;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_cdf(n: u64, lambda: f64) -> f64 {
        let mut term = (-lambda).exp();
        let mut s = term;
        for m in 1..=n {
            term *= lambda / m as f64;
            s += term;
        }
        s
    }

    #[test]
    fn poisson_matches_direct_sum() {
        for &lambda in &[1e-6, 0.3, 1.0, 4.5, 17.0, 60.0] {
            for n in 0..80 {
                let a = poisson_cdf(n, lambda);
                let b = brute_cdf(n, lambda);
                assert!((a - b).abs() < 1e-13, "n={n} λ={lambda}: {a} vs {b}");
                assert!((poisson_sf(n, lambda) - (1.0 - b)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn poisson_zero_threshold_is_exponential() {
        for lambda in [1e-3f64, 0.7, 5.0] {
            let e = (-lambda).exp();
            assert!((poisson_cdf(0, lambda) - e).abs() <= 1e-15 * e.max(1e-300) + 1e-300);
            assert!(((poisson_sf(0, lambda)) - (-(-lambda).exp_m1())).abs() < 1e-16);
        }
    }

    #[test]
    fn poisson_small_tail_keeps_relative_precision() {
        let lambda: f64 = 1e-5;
        let exact = -(-lambda).exp_m1();
        assert!((poisson_sf(0, lambda) / exact - 1.0).abs() < 1e-12);
    }
}
