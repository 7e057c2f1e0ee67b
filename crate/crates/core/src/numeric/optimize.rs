//! Derivative-free maximizers.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section maximization of a unimodal `f` on `[a, b]`.
///
/// Stops when the bracket is narrower than `xtol` or the function spread
/// inside the bracket is below `ftol`. Returns `(x, f(x))`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, xtol: f64, ftol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..500 {
        if (b - a).abs() < xtol || (fc - fd).abs() < ftol && (b - a).abs() < 1e-6 {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Nelder–Mead maximization in `N` dimensions from `x0` with initial step `step`.
///
/// Terminates when the spread of simplex values falls below `ftol` and the
/// simplex diameter below `xtol`, or after `max_iter` iterations.
pub fn nelder_mead_max<const N: usize, F: Fn(&[f64; N]) -> f64>(
    f: F,
    x0: [f64; N],
    step: f64,
    ftol: f64,
    xtol: f64,
    max_iter: usize,
) -> ([f64; N], f64) {
    // Work with g = -f and minimize.
    let g = |x: &[f64; N]| -f(x);
    let mut simplex: Vec<([f64; N], f64)> = Vec::with_capacity(N + 1);
    simplex.push((x0, g(&x0)));
    for i in 0..N {
        let mut x = x0;
        x[i] += step;
        simplex.push((x, g(&x)));
    }
    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[N].1;
        let diam = simplex[1..]
            .iter()
            .map(|(x, _)| x.iter().zip(simplex[0].0.iter()).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if (worst - best).abs() <= ftol && diam <= xtol {
            break;
        }
        let mut centroid = [0.0; N];
        for (x, _) in &simplex[..N] {
            for k in 0..N {
                centroid[k] += x[k] / N as f64;
            }
        }
        let along = |t: f64| {
            let mut p = [0.0; N];
            for k in 0..N {
                p[k] = centroid[k] + t * (simplex[N].0[k] - centroid[k]);
            }
            p
        };
        let xr = along(-1.0);
        let fr = g(&xr);
        if fr < simplex[0].1 {
            let xe = along(-2.0);
            let fe = g(&xe);
            simplex[N] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[N - 1].1 {
            simplex[N] = (xr, fr);
        } else {
            let (xc, fc) = if fr < simplex[N].1 {
                let xc = along(-0.5);
                (xc, g(&xc))
            } else {
                let xc = along(0.5);
                (xc, g(&xc))
            };
            if fc < simplex[N].1.min(fr) {
                simplex[N] = (xc, fc);
            } else {
                let x_best = simplex[0].0;
                for (x, fx) in simplex.iter_mut().skip(1) {
                    for k in 0..N {
                        x[k] = x_best[k] + 0.5 * (x[k] - x_best[k]);
                    }
                    *fx = g(x);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    (simplex[0].0, -simplex[0].1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_cosine_peak() {
        let (x, fx) = golden_max(|t: f64| (t - 1.0).cos(), 0.0, 2.5, 1e-12, 0.0);
        assert!((x - 1.0).abs() < 1e-7);
        assert!((fx - 1.0).abs() < 1e-14);
    }

    #[test]
    fn nelder_mead_finds_quadratic_peak() {
        let f = |x: &[f64; 3]| -((x[0] - 1.0).powi(2) + 2.0 * (x[1] + 0.5).powi(2) + 0.5 * (x[2] - 3.0).powi(2));
        let (x, fx) = nelder_mead_max(f, [0.0, 0.0, 0.0], 0.5, 1e-16, 1e-10, 10_000);
        assert!(fx > -1e-14);
        assert!((x[0] - 1.0).abs() < 1e-6 && (x[1] + 0.5).abs() < 1e-6 && (x[2] - 3.0).abs() < 1e-6);
    }
}
