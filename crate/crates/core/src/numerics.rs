//! Small numeric toolbox: binary entropy, adaptive Simpson quadrature,
//! scalar root finding and minimization, Gauss–Hermite nodes.

use once_cell::sync::Lazy;

/// Binary entropy in bits.
pub fn h2(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

/// Derivative of the binary entropy in bits, `log2((1-p)/p)`.
pub fn h2_prime(p: f64) -> f64 {
    ((1.0 - p) / p).log2()
}

/// Inverse of `h2` on `[0, 1/2]` by bisection.
pub fn h2_inv(y: f64) -> f64 {
    assert!((0.0..=1.0).contains(&y), "h2_inv argument outside [0,1]");
    let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h2(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Adaptive Simpson integration of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, 60)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// Bisection root solve for a continuous `f` with `f(a)` and `f(b)` of
/// opposite sign; refines until the bracket is narrower than `xtol`.
pub fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, xtol: f64) -> f64 {
    let mut fa = f(a);
    let fb = f(b);
    assert!(
        fa == 0.0 || fb == 0.0 || (fa < 0.0) != (fb < 0.0),
        "bisect: no sign change over [{a}, {b}] (f(a)={fa}, f(b)={fb})"
    );
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    while (b - a).abs() > xtol {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Minimize a unimodal-enough `f` on `[a, b]`: coarse grid bracketing followed
/// by golden-section refinement. Returns `(argmin, min)`.
pub fn minimize_grid_golden<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    grid: usize,
    xtol: f64,
) -> (f64, f64) {
    assert!(grid >= 3 && b > a);
    let step = (b - a) / (grid - 1) as f64;
    let mut best_i = 0;
    let mut best = f64::INFINITY;
    for i in 0..grid {
        let x = a + step * i as f64;
        let v = f(x);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let lo = if best_i == 0 { a } else { a + step * (best_i - 1) as f64 };
    let hi = if best_i == grid - 1 { b } else { a + step * (best_i + 1) as f64 };
    golden_section(f, lo, hi, xtol)
}

/// Golden-section minimization on `[a, b]`.
pub fn golden_section<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, xtol: f64) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > xtol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Number of Gauss–Hermite nodes used for Gaussian expectations.
pub const GH_POINTS: usize = 64;

/// Gauss–Hermite nodes and weights for weight function `exp(-x^2)`,
/// computed once by Newton iteration on the orthonormal Hermite recurrence.
pub static GAUSS_HERMITE: Lazy<(Vec<f64>, Vec<f64>)> = Lazy::new(|| gauss_hermite(GH_POINTS));

fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let pim4 = std::f64::consts::PI.powf(-0.25);
    let mut x = 0.0_f64;
    let m = (n + 1) / 2;
    for i in 0..m {
        // Stroud & Secrest initial guesses.
        x = match i {
            0 => (2.0 * n as f64 + 1.0).sqrt() - 1.85575 * (2.0 * n as f64 + 1.0).powf(-1.0 / 6.0),
            1 => x - 1.14 * (n as f64).powf(0.426) / x,
            2 => 1.86 * x - 0.86 * nodes[0],
            3 => 1.91 * x - 0.91 * nodes[1],
            _ => 2.0 * x - nodes[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..200 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                p1 = x * (2.0 / j as f64).sqrt() * p2 - ((j as f64 - 1.0) / j as f64).sqrt() * p3;
            }
            pp = (2.0 * n as f64).sqrt() * p2;
            let dx = p1 / pp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = x;
        nodes[n - 1 - i] = -x;
        weights[i] = 2.0 / (pp * pp);
        weights[n - 1 - i] = weights[i];
    }
    // Nodes in increasing order.
    nodes.reverse();
    (nodes, weights)
}

/// 128-point rule for sharper integrands (posterior variances at high snr).
pub static GAUSS_HERMITE_128: Lazy<(Vec<f64>, Vec<f64>)> = Lazy::new(|| gauss_hermite(128));

/// Expectation of `f(W)` for a standard Gaussian `W` via Gauss–Hermite.
pub fn gaussian_expectation<F: Fn(f64) -> f64>(f: F) -> f64 {
    gaussian_expectation_with(&GAUSS_HERMITE, f)
}

/// Expectation with the 128-point rule.
pub fn gaussian_expectation_128<F: Fn(f64) -> f64>(f: F) -> f64 {
    gaussian_expectation_with(&GAUSS_HERMITE_128, f)
}

fn gaussian_expectation_with<F: Fn(f64) -> f64>(rule: &(Vec<f64>, Vec<f64>), f: F) -> f64 {
    let (nodes, weights) = rule;
    let inv_sqrt_pi = 1.0 / std::f64::consts::PI.sqrt();
    let sqrt2 = std::f64::consts::SQRT_2;
    nodes
        .iter()
        .zip(weights)
        .map(|(&x, &w)| w * f(sqrt2 * x))
        .sum::<f64>()
        * inv_sqrt_pi
}

/// Central finite difference with one Richardson step (steps `d` and `d/2`).
pub fn richardson_diff<F: Fn(f64) -> f64>(f: &F, x: f64, d: f64) -> f64 {
    let d1 = (f(x + d) - f(x - d)) / (2.0 * d);
    let d2 = (f(x + 0.5 * d) - f(x - 0.5 * d)) / d;
    (4.0 * d2 - d1) / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_entropy_endpoints_and_inverse() {
        assert_eq!(h2(0.0), 0.0);
        assert_eq!(h2(1.0), 0.0);
        assert!((h2(0.5) - 1.0).abs() < 1e-15);
        assert!((h2(0.11) - 0.499915958164528).abs() < 1e-12);
        for &y in &[0.0, 0.1, 0.3, 0.5, 0.9, 1.0] {
            let p = h2_inv(y);
            assert!((h2(p) - y).abs() < 1e-12, "h2_inv round trip at {y}");
        }
    }

    #[test]
    fn simpson_known_integrals() {
        let v = integrate(&|x: f64| x * x, 0.0, 1.0, 1e-12);
        assert!((v - 1.0 / 3.0).abs() < 1e-11);
        let v = integrate(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12);
        assert!((v - 2.0).abs() < 1e-10);
        // Integrable endpoint behavior, f ~ 5x near 0 after a 0*inf limit.
        let v = integrate(&|x: f64| if x == 0.0 { 0.0 } else { x * x.ln() }, 0.0, 1.0, 1e-12);
        assert!((v + 0.25).abs() < 1e-9);
    }

    #[test]
    fn bisect_and_golden() {
        let r = bisect(&|x| x * x - 2.0, 0.0, 2.0, 1e-13);
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-12);
        // A quadratic minimum is locatable to about sqrt(machine eps).
        let (x, v) = minimize_grid_golden(&|x: f64| (x - 0.3).powi(2) + 1.0, 0.0, 1.0, 33, 1e-12);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gauss_hermite_128_moments() {
        let (nodes, weights) = &*GAUSS_HERMITE_128;
        let sqrt_pi = std::f64::consts::PI.sqrt();
        let s0: f64 = weights.iter().sum();
        assert!((s0 - sqrt_pi).abs() < 1e-12);
        let s2: f64 = nodes.iter().zip(weights).map(|(x, w)| w * x * x).sum();
        assert!((s2 - 0.5 * sqrt_pi).abs() < 1e-12);
        let e4 = gaussian_expectation_128(|w| w.powi(4));
        assert!((e4 - 3.0).abs() < 1e-10);
    }

    #[test]
    fn gauss_hermite_moments() {
        let (nodes, weights) = &*GAUSS_HERMITE;
        assert_eq!(nodes.len(), GH_POINTS);
        let sqrt_pi = std::f64::consts::PI.sqrt();
        let s0: f64 = weights.iter().sum();
        assert!((s0 - sqrt_pi).abs() < 1e-12, "zeroth moment {s0}");
        let s2: f64 = nodes.iter().zip(weights).map(|(x, w)| w * x * x).sum();
        assert!((s2 - 0.5 * sqrt_pi).abs() < 1e-12, "second moment {s2}");
        // int exp(-x^2) cos(x) dx = sqrt(pi) exp(-1/4)
        let sc: f64 = nodes.iter().zip(weights).map(|(x, w)| w * x.cos()).sum();
        assert!((sc - sqrt_pi * (-0.25_f64).exp()).abs() < 1e-12);
        // E[W^4] = 3 for standard Gaussian
        let e4 = gaussian_expectation(|w| w.powi(4));
        assert!((e4 - 3.0).abs() < 1e-10);
    }

    #[test]
    fn richardson_matches_analytic_derivative() {
        let d = richardson_diff(&|x: f64| x.exp(), 1.0, 1e-3);
        assert!((d - 1.0_f64.exp()).abs() < 1e-11);
    }
}
