//! EXIT and GEXIT analysis: the parametric erasure-channel curve and its
//! areas, ML-threshold estimation by area balance, GEXIT kernels in four
//! domains, GEXIT functionals of LLR densities, and the density-evolution
//! upper bound on the ML threshold.
//!
//! Every curve value, kernel and functional is in bits; kernels take
//! natural-log LLR arguments.

use crate::channel::ChannelModel;
use crate::degree::{design_rate, DegreePolynomial};
use crate::density::{
    bec_fixed_point, bec_it_threshold, de_bms, extrinsic_from_edge, DeParams, LlrDensity,
};
use crate::error::Error;
use crate::numerics::{bisect, gaussian_expectation, h2, h2_inv, integrate, richardson_diff};
use crate::Result;

const LN2: f64 = std::f64::consts::LN_2;

/// Stability classification of a point on the parametric erasure curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Stable,
    Unstable,
}

/// One row of a sampled EXIT/GEXIT curve.
#[derive(Debug, Clone, Copy)]
pub struct CurvePoint {
    /// Curve parameter: `x` for parametric erasure curves, the native noise
    /// parameter for channel-family sweeps.
    pub x: f64,
    /// Noise level as channel entropy in bits.
    pub w: f64,
    pub exit: f64,
    pub gexit: f64,
    pub branch: Branch,
    pub converged: bool,
}

/// A sampled curve, rows sorted by the parameter.
#[derive(Debug, Clone, Default)]
pub struct CurveTable {
    pub points: Vec<CurvePoint>,
}

/// The parametric erasure-channel EXIT curve of an ensemble.
#[derive(Debug, Clone)]
pub struct ExitCurve {
    lambda: DegreePolynomial,
    rho: DegreePolynomial,
    lambda_nodes: DegreePolynomial,
    x_it: f64,
    eps_it: f64,
}

impl ExitCurve {
    pub fn new(lambda: DegreePolynomial, rho: DegreePolynomial) -> Result<Self> {
        let (eps_it, x_it) = bec_it_threshold(&lambda, &rho)?;
        let lambda_nodes = lambda.node_perspective();
        Ok(ExitCurve {
            lambda,
            rho,
            lambda_nodes,
            x_it,
            eps_it,
        })
    }

    pub fn x_it(&self) -> f64 {
        self.x_it
    }

    pub fn eps_it(&self) -> f64 {
        self.eps_it
    }

    /// `eps(x) = x / lambda(1 - rho(1 - x))`.
    pub fn eps_of_x(&self, x: f64) -> f64 {
        x / self.lambda.eval_unchecked(1.0 - self.rho.eval_unchecked(1.0 - x))
    }

    /// EXIT value `Lambda(1 - rho(1 - x))`.
    pub fn exit_of_x(&self, x: f64) -> f64 {
        self.lambda_nodes
            .eval_unchecked(1.0 - self.rho.eval_unchecked(1.0 - x))
    }

    /// Analytic derivative of `eps(x)`.
    pub fn eps_prime(&self, x: f64) -> f64 {
        let y = 1.0 - self.rho.eval_unchecked(1.0 - x);
        let ly = self.lambda.eval_unchecked(y);
        let num = ly - x * self.lambda.derivative(y) * self.rho.derivative(1.0 - x);
        num / (ly * ly)
    }

    /// Signed area element integrand `EXIT(x) * eps'(x)`; zero at `x = 0`.
    fn area_integrand(&self, x: f64) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        self.exit_of_x(x) * self.eps_prime(x)
    }

    /// Signed area under the parametric curve between `x0` and `x1`.
    pub fn signed_area(&self, x0: f64, x1: f64, tol: f64) -> f64 {
        integrate(&|x| self.area_integrand(x), x0, x1, tol)
    }
}

/// The parametric point `(eps(x), Lambda(1 - rho(1 - x)))` with its branch.
/// Errors outside `(0, 1]` where the parametrization is singular.
pub fn exit_parametric(
    lambda: &DegreePolynomial,
    rho: &DegreePolynomial,
    x: f64,
) -> Result<(f64, f64, Branch)> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::domain(format!(
            "parametric curve defined for x in (0, 1], got {x}"
        )));
    }
    let curve = ExitCurve::new(lambda.clone(), rho.clone())?;
    let branch = if x >= curve.x_it() {
        Branch::Stable
    } else {
        Branch::Unstable
    };
    Ok((curve.eps_of_x(x), curve.exit_of_x(x), branch))
}

/// Tabulates the full parametric erasure curve on an `x` grid.
pub fn bec_exit_curve(
    lambda: &DegreePolynomial,
    rho: &DegreePolynomial,
    x_grid: &[f64],
) -> Result<CurveTable> {
    let curve = ExitCurve::new(lambda.clone(), rho.clone())?;
    let mut points: Vec<CurvePoint> = x_grid
        .iter()
        .filter(|&&x| x > 0.0 && x <= 1.0)
        .map(|&x| {
            let v = curve.exit_of_x(x);
            CurvePoint {
                x,
                w: curve.eps_of_x(x),
                exit: v,
                gexit: v,
                branch: if x >= curve.x_it() {
                    Branch::Stable
                } else {
                    Branch::Unstable
                },
                converged: true,
            }
        })
        .collect();
    points.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap());
    Ok(CurveTable { points })
}

/// ML threshold of an erasure-channel ensemble with both routes and the
/// area accounting.
#[derive(Debug, Clone, Copy)]
pub struct MlThreshold {
    pub eps_ml: f64,
    pub x_ml: f64,
    pub eps_it: f64,
    pub x_it: f64,
    pub rate: f64,
    /// Stable-branch area from `eps_it` to `eps_ml` (guesses per bit).
    pub guess_area: f64,
    /// Full unstable-branch area (resolutions per bit at the threshold).
    pub unstable_area: f64,
    /// Threshold recomputed by balancing the two areas; agrees with
    /// `eps_ml` up to quadrature error.
    pub eps_ml_balance: f64,
}

/// Determines the ML threshold over the BEC.
///
/// Primary route: solve `int_{eps_ml}^{1} EXIT(eps) d eps = R` along the
/// stable branch by parametric substitution and bisection. Cross route:
/// balance the stable-branch area against the full unstable-branch area.
/// Requires a single-jump ensemble with variable degrees >= 3.
pub fn ml_threshold_bec(
    lambda: &DegreePolynomial,
    rho: &DegreePolynomial,
    tol: f64,
) -> Result<MlThreshold> {
    if lambda.coeffs().len() < 3 || lambda.coeffs()[1] != 0.0 {
        return Err(Error::domain(
            "ML threshold construction requires variable degrees >= 3",
        ));
    }
    let rate = design_rate(lambda, rho)?;
    let curve = ExitCurve::new(lambda.clone(), rho.clone())?;

    // Single-jump check: eps'(x) changes sign exactly once on (0, 1).
    let mut sign_changes = 0;
    let mut last_sign = 0i8;
    for i in 1..2000 {
        let x = i as f64 / 2000.0;
        let d = curve.eps_prime(x);
        let s = if d > 1e-12 {
            1
        } else if d < -1e-12 {
            -1
        } else {
            0
        };
        if s != 0 {
            if last_sign != 0 && s != last_sign {
                sign_changes += 1;
            }
            last_sign = s;
        }
    }
    if sign_changes > 1 {
        return Err(Error::MultiJump);
    }

    let qtol = 1e-9_f64.min(tol);
    // Rate-integral route.
    let stable_from = |xa: f64| curve.signed_area(xa, 1.0, qtol);
    let x_ml = bisect(&|xa| stable_from(xa) - rate, curve.x_it(), 1.0, 1e-10);
    let eps_ml = curve.eps_of_x(x_ml);
    let guess_area = curve.signed_area(curve.x_it(), x_ml, qtol);

    // Balance route: stable-branch area grows to meet the unstable area.
    let unstable_area = -curve.signed_area(0.0, curve.x_it(), qtol);
    let x_balance = bisect(
        &|xb| curve.signed_area(curve.x_it(), xb, qtol) - unstable_area,
        curve.x_it(),
        1.0,
        1e-10,
    );
    let eps_ml_balance = curve.eps_of_x(x_balance);

    Ok(MlThreshold {
        eps_ml,
        x_ml,
        eps_it: curve.eps_it(),
        x_it: curve.x_it(),
        rate,
        guess_area,
        unstable_area,
        eps_ml_balance,
    })
}

/// Predicted per-bit guess and resolution totals of the list decoder.
#[derive(Debug, Clone, Copy)]
pub struct AreaPredictions {
    /// Stable-branch area from `eps_it` to `eps`.
    pub guess_area: f64,
    /// Resolved-guess area: saturates at the full unstable-branch area.
    pub resolution_area: f64,
    /// Predicted final entropy per bit, `guess_area - resolution_area`.
    pub h_final: f64,
}

/// Area-level predictions for a decoder run at erasure probability `eps`.
pub fn maxwell_area_predictions(
    lambda: &DegreePolynomial,
    rho: &DegreePolynomial,
    eps: f64,
) -> Result<AreaPredictions> {
    let curve = ExitCurve::new(lambda.clone(), rho.clone())?;
    if eps < curve.eps_it() - 1e-12 {
        return Err(Error::domain(format!(
            "area predictions defined for eps >= eps_it = {}",
            curve.eps_it()
        )));
    }
    let x_eps = bec_fixed_point(lambda, rho, eps.min(1.0), 1e-14).max(curve.x_it());
    let guess_area = curve.signed_area(curve.x_it(), x_eps, 1e-10).max(0.0);
    let unstable_area = -curve.signed_area(0.0, curve.x_it(), 1e-10);
    let resolution_area = guess_area.min(unstable_area);
    Ok(AreaPredictions {
        guess_area,
        resolution_area,
        h_final: guess_area - resolution_area,
    })
}

// ---------------------------------------------------------------------------
// GEXIT kernels
// ---------------------------------------------------------------------------

/// `log2(1 + exp(-l))`, the channel-independent EXIT kernel.
pub fn exit_kernel_l(l: f64) -> f64 {
    if l == f64::INFINITY {
        return 0.0;
    }
    if l == f64::NEG_INFINITY {
        return f64::INFINITY;
    }
    ln_1p_exp(-l) / LN2
}

fn ln_1p_exp(e: f64) -> f64 {
    if e > 35.0 {
        e
    } else if e < -700.0 {
        0.0
    } else {
        e.exp().ln_1p()
    }
}

/// GEXIT kernel in the LLR domain for the given channel, in bits.
///
/// The kernel is normalized so that `d H / d w` comes out in bits per bit of
/// channel entropy `w`; for the erasure channel it coincides with the EXIT
/// kernel.
pub fn gexit_kernel_l(ch: ChannelModel, l: f64) -> f64 {
    match ch {
        ChannelModel::Bec { .. } => exit_kernel_l(l),
        ChannelModel::Bsc { p } => bsc_kernel_l(p, l),
        ChannelModel::BiAwgn { snr } => biawgn_kernel_l(snr, l),
    }
}

fn bsc_kernel_l(p: f64, l: f64) -> f64 {
    if l == f64::INFINITY {
        return 0.0;
    }
    let ln_alpha = if p > 0.0 {
        ((1.0 - p) / p).ln()
    } else {
        f64::INFINITY
    };
    if l == f64::NEG_INFINITY {
        return 2.0;
    }
    if ln_alpha == f64::INFINITY {
        return 1.0;
    }
    if ln_alpha < 1e-7 {
        // p -> 1/2 limit.
        return 2.0 / (1.0 + l.exp());
    }
    (ln_1p_exp(ln_alpha - l) - ln_1p_exp(-ln_alpha - l)) / ln_alpha
}

fn biawgn_kernel_l(snr: f64, l: f64) -> f64 {
    if l == f64::INFINITY {
        return 0.0;
    }
    if l == f64::NEG_INFINITY {
        return f64::INFINITY;
    }
    let s = snr.sqrt();
    let dsnr_dw = 1.0
        / richardson_diff(
            &|t: f64| 1.0 - crate::channel::biawgn_capacity(t.max(0.0)),
            snr,
            (snr * 1e-4).max(1e-7),
        );
    let inner = gaussian_expectation(|wv| {
        wv / (2.0 * s) * (ln_1p_exp(-2.0 * snr - 2.0 * s * wv - l) / LN2)
    });
    dsnr_dw * inner
}

/// Kernel representation domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelDomain {
    /// LLR domain, argument `l`.
    L,
    /// Difference domain, argument `z = tanh(l/2)`.
    D,
    /// Folded LLR half line, argument `l >= 0`.
    AbsL,
    /// Folded difference domain, argument `z in [0, 1)`.
    AbsD,
}

/// A GEXIT kernel bound to a channel and an evaluation domain.
#[derive(Debug, Clone, Copy)]
pub struct GexitKernel {
    pub channel: ChannelModel,
    pub domain: KernelDomain,
}

impl GexitKernel {
    /// The LLR-domain kernel of a channel.
    pub fn new(channel: ChannelModel) -> Self {
        GexitKernel {
            channel,
            domain: KernelDomain::L,
        }
    }

    /// Re-expresses an L-domain kernel in another domain.
    pub fn transform(&self, domain: KernelDomain) -> Result<GexitKernel> {
        if self.domain != KernelDomain::L {
            return Err(Error::domain(
                "kernel transforms are defined from the L domain",
            ));
        }
        Ok(GexitKernel {
            channel: self.channel,
            domain,
        })
    }

    /// Evaluates the kernel; the argument is `l` for `L`/`AbsL` and
    /// `z` for `D`/`AbsD`.
    ///
    /// The folded kernels pair `l` with `-l` using the symmetry weight
    /// `exp(-l)`, so that integrating a symmetric density over the half line
    /// reproduces the full-line functional. At the fold point (`l = 0`,
    /// `z = 0`) the kernel counts the atom once.
    pub fn eval(&self, arg: f64) -> f64 {
        let k = |l: f64| gexit_kernel_l(self.channel, l);
        match self.domain {
            KernelDomain::L => k(arg),
            KernelDomain::D => {
                let z = arg.clamp(-1.0, 1.0);
                k(2.0 * atanh(z))
            }
            KernelDomain::AbsL => {
                if arg == 0.0 {
                    k(0.0)
                } else {
                    k(arg) + (-arg).exp() * k(-arg)
                }
            }
            KernelDomain::AbsD => {
                let z = arg.clamp(0.0, 1.0);
                if z == 0.0 {
                    k(0.0)
                } else {
                    let l = 2.0 * atanh(z);
                    k(l) + (1.0 - z) / (1.0 + z) * k(-l)
                }
            }
        }
    }
}

fn atanh(z: f64) -> f64 {
    if z >= 1.0 {
        f64::INFINITY
    } else if z <= -1.0 {
        f64::NEG_INFINITY
    } else {
        0.5 * ((1.0 + z) / (1.0 - z)).ln()
    }
}

// ---------------------------------------------------------------------------
// Functionals of densities
// ---------------------------------------------------------------------------

/// `int a(l) k_L(l) dl` for the channel's GEXIT kernel, in bits.
pub fn gexit_functional(a: &LlrDensity, ch: ChannelModel) -> f64 {
    functional(a, |l| gexit_kernel_l(ch, l))
}

/// `int a(l) k~(l) dl` with the EXIT kernel, in bits.
pub fn exit_functional(a: &LlrDensity) -> f64 {
    functional(a, exit_kernel_l)
}

fn functional(a: &LlrDensity, kernel: impl Fn(f64) -> f64) -> f64 {
    let grid = a.grid();
    let mut acc = 0.0;
    for (k, &m) in a.mass().iter().enumerate() {
        if m != 0.0 {
            acc += m * kernel(grid.center(k));
        }
    }
    if a.pinf != 0.0 {
        acc += a.pinf * kernel(f64::INFINITY);
    }
    if a.minf != 0.0 {
        acc += a.minf * kernel(f64::NEG_INFINITY);
    }
    acc
}

/// Half-line evaluation of the GEXIT functional using the folded `|L|`
/// kernel; equals [`gexit_functional`] for symmetric densities.
pub fn gexit_functional_folded(a: &LlrDensity, ch: ChannelModel) -> f64 {
    let kernel = GexitKernel::new(ch).transform(KernelDomain::AbsL).unwrap();
    let grid = a.grid();
    let c = grid.center_index();
    let mut acc = a.mass()[c] * kernel.eval(0.0);
    for k in 1..=c {
        let m = a.mass()[c + k];
        if m != 0.0 {
            acc += m * kernel.eval(grid.center(c + k));
        }
    }
    // +inf kernel value is zero; -inf carries no mass for symmetric inputs.
    acc
}

// ---------------------------------------------------------------------------
// Density-evolution bound on the ML threshold
// ---------------------------------------------------------------------------

/// One evaluated grid point of the bound computation.
#[derive(Debug, Clone, Copy)]
pub struct PmlRow {
    pub p: f64,
    pub w: f64,
    pub gexit: f64,
    pub exit: f64,
    pub iterations: usize,
}

/// Result of the GEXIT-area bound over the BSC family.
#[derive(Debug, Clone)]
pub struct PmlBound {
    pub p_ml_de: f64,
    pub w_cross: f64,
    pub rate: f64,
    /// Rows actually evaluated, in decreasing `w` order.
    pub rows: Vec<PmlRow>,
}

/// Upper bound on the BSC ML threshold: accumulate
/// `int GEXIT(a_DE*) dw` from `w = 1` downward until it reaches the design
/// rate; the crossing point is `p_ML,DE`.
///
/// `p_grid` lists flip probabilities to evaluate (any order); points below
/// the crossing are not run. The exact anchor `GEXIT = 1` at `w = 1` seeds
/// the accumulation.
pub fn pml_de_bound(
    lambda: &DegreePolynomial,
    rho: &DegreePolynomial,
    p_grid: &[f64],
    de: &DeParams,
) -> Result<PmlBound> {
    let rate = design_rate(lambda, rho)?;
    let mut ps: Vec<f64> = p_grid
        .iter()
        .copied()
        .filter(|&p| p > 0.0 && p <= 0.5)
        .collect();
    if ps.is_empty() {
        return Err(Error::domain("empty flip-probability grid"));
    }
    ps.sort_by(|a, b| b.partial_cmp(a).unwrap());
    ps.dedup();

    let mut rows: Vec<PmlRow> = Vec::new();
    let mut acc = 0.0;
    // Analytic anchor: at w = 1 the extrinsic density is an atom at zero and
    // the kernel value there is exactly one bit.
    let mut prev_w = 1.0;
    let mut prev_g = 1.0;
    let mut crossing: Option<f64> = None;
    for &p in &ps {
        let fp = de_bms(lambda, rho, ChannelModel::Bsc { p }, de)?;
        let g = gexit_functional(&fp.extrinsic_density, ChannelModel::Bsc { p });
        let e = exit_functional(&fp.extrinsic_density);
        let w = h2(p);
        rows.push(PmlRow {
            p,
            w,
            gexit: g,
            exit: e,
            iterations: fp.iterations,
        });
        let seg = 0.5 * (g + prev_g) * (prev_w - w);
        if acc + seg >= rate {
            let frac = (rate - acc) / seg;
            crossing = Some(prev_w - frac * (prev_w - w));
            break;
        }
        acc += seg;
        prev_w = w;
        prev_g = g;
    }
    let w_cross = crossing.ok_or_else(|| {
        Error::domain(format!(
            "grid exhausted before the accumulated area {acc:.6} reached the rate {rate:.6}"
        ))
    })?;
    Ok(PmlBound {
        p_ml_de: h2_inv(w_cross),
        w_cross,
        rate,
        rows,
    })
}

/// The same bound construction over the erasure-channel family, using the
/// scalar recursion; reproduces the Maxwell-construction threshold.
pub fn pml_de_bound_bec(
    lambda: &DegreePolynomial,
    rho: &DegreePolynomial,
    eps_grid: &[f64],
) -> Result<f64> {
    let rate = design_rate(lambda, rho)?;
    let nodes = lambda.node_perspective();
    let mut eps: Vec<f64> = eps_grid
        .iter()
        .copied()
        .filter(|&e| e > 0.0 && e <= 1.0)
        .collect();
    if eps.is_empty() {
        return Err(Error::domain("empty erasure-probability grid"));
    }
    eps.sort_by(|a, b| b.partial_cmp(a).unwrap());
    eps.dedup();
    let mut prev_w = 1.0;
    let mut prev_g = 1.0;
    let mut acc = 0.0;
    for &e in &eps {
        let x = bec_fixed_point(lambda, rho, e, 1e-14);
        let g = nodes.eval_unchecked(1.0 - rho.eval_unchecked(1.0 - x));
        let seg = 0.5 * (g + prev_g) * (prev_w - e);
        if acc + seg >= rate {
            let frac = (rate - acc) / seg;
            return Ok(prev_w - frac * (prev_w - e));
        }
        acc += seg;
        prev_w = e;
        prev_g = g;
    }
    Err(Error::domain(format!(
        "grid exhausted before the accumulated area {acc:.6} reached the rate {rate:.6}"
    )))
}

/// Channel family for EXIT/GEXIT sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepFamily {
    Bec,
    Bsc,
}

/// Tabulates EXIT and GEXIT functionals of the density-evolution fixed point
/// across a channel family. Non-converged points are flagged and evaluated
/// on the last iterate; the sweep continues.
pub fn gexit_exit_sweep(
    lambda: &DegreePolynomial,
    rho: &DegreePolynomial,
    family: SweepFamily,
    native_grid: &[f64],
    de: &DeParams,
) -> Result<CurveTable> {
    let mut points = Vec::with_capacity(native_grid.len());
    let nodes = lambda.node_perspective();
    for &param in native_grid {
        match family {
            SweepFamily::Bec => {
                if !(0.0..=1.0).contains(&param) {
                    return Err(Error::domain(format!("erasure probability {param}")));
                }
                let x = bec_fixed_point(lambda, rho, param, 1e-14);
                let v = nodes.eval_unchecked(1.0 - rho.eval_unchecked(1.0 - x));
                points.push(CurvePoint {
                    x: param,
                    w: param,
                    exit: v,
                    gexit: v,
                    branch: Branch::Stable,
                    converged: true,
                });
            }
            SweepFamily::Bsc => {
                let ch = ChannelModel::Bsc { p: param };
                ch.validate()?;
                let (ext, converged) = match de_bms(lambda, rho, ch, de) {
                    Ok(fp) => (fp.extrinsic_density, true),
                    Err(Error::NotConverged { last, .. }) => {
                        (extrinsic_from_edge(lambda, rho, &last)?, false)
                    }
                    Err(e) => return Err(e),
                };
                points.push(CurvePoint {
                    x: param,
                    w: h2(param),
                    exit: exit_functional(&ext),
                    gexit: gexit_functional(&ext, ch),
                    branch: Branch::Stable,
                    converged,
                });
            }
        }
    }
    points.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap());
    Ok(CurveTable { points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{channel_density, DensityGrid};

    fn poly(s: &str) -> DegreePolynomial {
        DegreePolynomial::parse(s).unwrap()
    }

    #[test]
    fn parametric_endpoints_and_branches() {
        let (eps, v, branch) = exit_parametric(&poly("x^2"), &poly("x^5"), 1.0).unwrap();
        assert!((eps - 1.0).abs() < 1e-12);
        assert!((v - 1.0).abs() < 1e-12);
        assert_eq!(branch, Branch::Stable);
        // Threshold point.
        let (eps, _, _) = exit_parametric(&poly("x^2"), &poly("x^5"), 0.26057107160430765).unwrap();
        assert!((eps - 0.42943981441949175).abs() < 1e-9);
        for x in [0.05, 0.1, 0.15, 0.2, 0.25] {
            let (_, _, branch) = exit_parametric(&poly("x^2"), &poly("x^5"), x).unwrap();
            assert_eq!(branch, Branch::Unstable);
        }
        assert!(exit_parametric(&poly("x^2"), &poly("x^5"), 0.0).is_err());
        assert!(exit_parametric(&poly("x^2"), &poly("x^5"), 1.5).is_err());
    }

    #[test]
    fn unstable_branch_eps_exceeds_x() {
        // Every fixed point obeys x = eps * lambda(...) <= eps; on the
        // unstable branch the inequality is strict and the gap is large.
        let curve = ExitCurve::new(poly("x^2"), poly("x^5")).unwrap();
        for i in 1..100 {
            let x = curve.x_it() * i as f64 / 100.0;
            let eps = curve.eps_of_x(x);
            assert!(eps > x, "x = {x}, eps = {eps}");
            assert!(eps >= curve.eps_it() - 1e-12);
        }
    }

    #[test]
    fn ml_threshold_values_and_balance() {
        let t = ml_threshold_bec(&poly("x^2"), &poly("x^5"), 1e-9).unwrap();
        // Frozen from the independent quadrature + bisection oracle.
        assert!((t.eps_it - 0.42943981441949175).abs() < 5e-9);
        assert!((t.eps_ml - 0.48815088419156616).abs() < 1e-7, "eps_ml = {}", t.eps_ml);
        assert!((t.x_ml - 0.43226263905932033).abs() < 1e-6);
        assert!((t.guess_area - 0.042508853624986506).abs() < 1e-8);
        assert!((t.unstable_area - 0.042508853624986506).abs() < 1e-8);
        assert!((t.eps_ml_balance - t.eps_ml).abs() < 1e-7);
        assert!((t.rate - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ml_threshold_other_regulars() {
        let t = ml_threshold_bec(&poly("x^2"), &poly("x^3"), 1e-9).unwrap();
        assert!((t.eps_ml - 0.7460097024723318).abs() < 1e-6);
        let t = ml_threshold_bec(&poly("x^3"), &poly("x^7"), 1e-9).unwrap();
        assert!((t.eps_ml - 0.497740862925542).abs() < 1e-6);
    }

    #[test]
    fn ml_threshold_rejects_low_left_degree() {
        assert!(ml_threshold_bec(&poly("x"), &poly("x^3"), 1e-9).is_err());
        assert!(ml_threshold_bec(&poly("0.5x + 0.5x^2"), &poly("x^3"), 1e-9).is_err());
    }

    #[test]
    fn area_theorem_reintegration() {
        // Independent re-integration of the ML EXIT curve in eps space:
        // invert x(eps) pointwise on the stable branch and integrate.
        for (lam, rh, rate) in [
            ("x^2", "x^5", 0.5),
            ("x^2", "x^3", 0.25),
            ("x^3", "x^7", 0.5),
        ] {
            let lambda = poly(lam);
            let rho = poly(rh);
            let t = ml_threshold_bec(&lambda, &rho, 1e-9).unwrap();
            let curve = ExitCurve::new(lambda.clone(), rho.clone()).unwrap();
            let integrand = |eps: f64| {
                if eps <= t.eps_ml {
                    return 0.0;
                }
                let x = bisect(
                    &|x| curve.eps_of_x(x) - eps,
                    t.x_it,
                    1.0,
                    1e-13,
                );
                curve.exit_of_x(x)
            };
            let integral = integrate(&integrand, t.eps_ml, 1.0, 1e-9);
            assert!(
                (integral - rate).abs() < 1e-6,
                "({lam},{rh}): got {integral}, want {rate}"
            );
        }
    }

    #[test]
    fn area_predictions_examples() {
        let lambda = poly("x^2");
        let rho = poly("x^5");
        let t = ml_threshold_bec(&lambda, &rho, 1e-9).unwrap();
        // At the iterative threshold nothing is guessed.
        let a = maxwell_area_predictions(&lambda, &rho, t.eps_it).unwrap();
        assert!(a.guess_area.abs() < 1e-6);
        // At the ML threshold guesses balance resolutions.
        let a = maxwell_area_predictions(&lambda, &rho, t.eps_ml).unwrap();
        assert!((a.guess_area - a.resolution_area).abs() < 1e-6);
        assert!(a.h_final < 1e-6);
        // Frozen value at eps = 0.47.
        let a = maxwell_area_predictions(&lambda, &rho, 0.47).unwrap();
        assert!((a.guess_area - 0.027812139284191458).abs() < 1e-8);
        assert_eq!(a.h_final, 0.0);
        // Above the ML threshold entropy accumulates.
        let a = maxwell_area_predictions(&lambda, &rho, 0.52).unwrap();
        assert!((a.h_final - 0.02755059399197945).abs() < 1e-7);
        assert!(maxwell_area_predictions(&lambda, &rho, 0.3).is_err());
    }

    #[test]
    fn kernel_values_and_shapes() {
        // BEC kernel equals the EXIT kernel everywhere.
        for l in [-20.0, -3.0, -0.5, 0.0, 0.5, 3.0, 20.0] {
            assert_eq!(gexit_kernel_l(ChannelModel::Bec { eps: 0.3 }, l), exit_kernel_l(l));
        }
        assert!((exit_kernel_l(0.0) - 1.0).abs() < 1e-15);
        assert_eq!(exit_kernel_l(f64::INFINITY), 0.0);
        // BSC kernel: value 1 at l = 0 for every p (single-symbol identity).
        for p in [0.05, 0.1, 0.3, 0.49, 0.4999999] {
            assert!((bsc_kernel_l(p, 0.0) - 1.0).abs() < 1e-9, "p = {p}");
        }
        // Kernels decrease in l and stay nonnegative.
        for ch in [
            ChannelModel::Bec { eps: 0.4 },
            ChannelModel::Bsc { p: 0.1 },
            ChannelModel::Bsc { p: 0.3 },
            ChannelModel::BiAwgn { snr: 1.0 },
        ] {
            let mut prev = f64::INFINITY;
            for i in -40..=40 {
                let l = i as f64 / 4.0;
                let k = gexit_kernel_l(ch, l);
                assert!(k >= 0.0, "negative kernel at {l}");
                assert!(k <= prev + 1e-12, "kernel not decreasing at {l}");
                prev = k;
            }
        }
    }

    #[test]
    fn kernel_domain_transforms() {
        let k = GexitKernel::new(ChannelModel::Bsc { p: 0.1 });
        let kd = k.transform(KernelDomain::D).unwrap();
        for l in [-2.0, -0.5, 0.0, 0.5, 2.0] {
            let z = (l / 2.0_f64).tanh();
            assert!((kd.eval(z) - k.eval(l)).abs() < 1e-12);
        }
        // z -> 1 is certainty: kernel vanishes.
        assert!(kd.eval(1.0 - 1e-14) < 1e-9);
        for ch in [ChannelModel::Bec { eps: 0.5 }, ChannelModel::Bsc { p: 0.2 }] {
            let kd = GexitKernel::new(ch).transform(KernelDomain::AbsD).unwrap();
            assert!(kd.eval(0.9999999999) < 1e-6);
        }
        // Transforms only from L.
        assert!(kd.transform(KernelDomain::AbsL).is_err());
    }

    #[test]
    fn folded_functional_matches_full() {
        // Symmetric density: masses m(-l) = exp(-l) m(l).
        let grid = DensityGrid::new(20.0, 801).unwrap();
        let c = grid.center_index();
        let mut mass = vec![0.0; grid.bins()];
        let mut state = 12345u64;
        let mut rnd = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for k in 1..=c {
            let l = grid.center(c + k);
            let m = rnd() * (-0.3 * l).exp();
            mass[c + k] = m;
            mass[c - k] = (-l).exp() * m;
        }
        mass[c] = 0.2;
        let mut a = LlrDensity::from_parts(grid, mass, 0.0, 0.1).unwrap();
        a.normalize();
        for ch in [ChannelModel::Bec { eps: 0.4 }, ChannelModel::Bsc { p: 0.12 }] {
            let full = gexit_functional(&a, ch);
            let half = gexit_functional_folded(&a, ch);
            assert!(
                (full - half).abs() < 1e-12,
                "fold identity broken: {full} vs {half}"
            );
        }
    }

    #[test]
    fn functional_examples() {
        let grid = DensityGrid::new(20.0, 801).unwrap();
        let mut d = LlrDensity::zero(grid);
        d.pinf = 1.0;
        assert_eq!(gexit_functional(&d, ChannelModel::Bsc { p: 0.2 }), 0.0);
        let zero_atom = LlrDensity::atom(grid, 0.0, 1.0);
        assert!((gexit_functional(&zero_atom, ChannelModel::Bec { eps: 0.4 }) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bec_gexit_matches_parametric_exit() {
        // GEXIT functional of the scalar fixed-point extrinsic density equals
        // the parametric EXIT value.
        let lambda = poly("x^2");
        let rho = poly("x^5");
        let grid = DensityGrid::new(25.0, 501).unwrap();
        for eps in [0.47, 0.6, 0.8] {
            let x = bec_fixed_point(&lambda, &rho, eps, 1e-14);
            let expect = lambda
                .node_perspective()
                .eval_unchecked(1.0 - rho.eval_unchecked(1.0 - x));
            // Build the fixed-point extrinsic density through quantized DE.
            let params = DeParams {
                grid,
                tol: 1e-10,
                max_iter: 5000,
            };
            let fp = de_bms(&lambda, &rho, ChannelModel::Bec { eps }, &params).unwrap();
            let g = gexit_functional(&fp.extrinsic_density, ChannelModel::Bec { eps });
            assert!(
                (g - expect).abs() < 1e-7,
                "eps {eps}: functional {g} vs parametric {expect}"
            );
        }
    }

    #[test]
    fn bec_pml_bound_reproduces_ml_threshold() {
        let lambda = poly("x^2");
        let rho = poly("x^5");
        let grid: Vec<f64> = (0..=2000).map(|i| 0.40 + 0.60 * i as f64 / 2000.0).collect();
        let eps = pml_de_bound_bec(&lambda, &rho, &grid).unwrap();
        assert!(
            (eps - 0.48815088419156616).abs() < 1e-4,
            "BEC bound {eps} vs ML threshold"
        );
    }

    #[test]
    fn bsc_gexit_exit_ordering_structure() {
        // For variable degree >= 3 the fixed-point GEXIT stays below EXIT
        // wherever the gap is resolvable. For variable degree 2 the order
        // flips: GEXIT exceeds EXIT near the decoding onset (strong
        // extrinsic LLRs weigh the GEXIT kernel more, by the factor
        // ln2 (a - 1/a)/ln a at large l) and drops below it at higher flip
        // probability. Confirmed against the finite-difference oracle on
        // small codes; see the oracle module tests.
        let de = DeParams {
            grid: DensityGrid::new(25.0, 1201).unwrap(),
            tol: 1e-8,
            max_iter: 2000,
        };
        let sweep = |lam: &str, rho: &str, ps: &[f64]| {
            gexit_exit_sweep(&poly(lam), &poly(rho), SweepFamily::Bsc, ps, &de).unwrap()
        };
        let t36 = sweep("x^2", "x^5", &[0.12, 0.3]);
        for p in &t36.points {
            assert!(p.gexit < p.exit, "(3,6) keeps GEXIT below EXIT");
        }
        let t26 = sweep("x", "x^5", &[0.03, 0.2]);
        assert!(
            t26.points[0].gexit - t26.points[0].exit > 1e-3,
            "(2,6) near onset: GEXIT above EXIT, got {:+.2e}",
            t26.points[0].gexit - t26.points[0].exit
        );
        assert!(
            t26.points[1].gexit - t26.points[1].exit < -1e-3,
            "(2,6) at higher noise: GEXIT below EXIT"
        );
    }

    #[test]
    fn gexit_of_de_iterates_is_nonincreasing() {
        // Belief-propagation chain: the GEXIT functional of the extrinsic
        // density never grows with the iteration count; its limit feeds the
        // threshold bound.
        use crate::density::{channel_density, check_node_output, extrinsic_node_density,
                             var_node_update};
        let grid = DensityGrid::new(25.0, 501).unwrap();
        let lambda = poly("x^2");
        let rho = poly("x^5");
        for p in [0.06, 0.09, 0.12] {
            let ch = ChannelModel::Bsc { p };
            let a_ch = channel_density(ch, grid).unwrap();
            let mut a = a_ch.clone();
            let mut prev = f64::INFINITY;
            for _ in 0..40 {
                let b = check_node_output(&a, &rho).unwrap();
                let mut ext = extrinsic_node_density(&b, &lambda).unwrap();
                ext.normalize();
                let g = gexit_functional(&ext, ch);
                assert!(g <= prev + 1e-9, "GEXIT grew with iterations: {prev} -> {g}");
                prev = g;
                a = var_node_update(&a_ch, &b, &lambda).unwrap();
                a.normalize();
            }
        }
    }

    #[test]
    fn low_rate_bound_crosses_near_half() {
        // As the design rate shrinks, the bound's crossing moves toward the
        // useless-channel end (w = 1, p = 1/2).
        let lambda = poly("x^8");
        let rho = poly("x^9"); // rate 0.1
        let de = DeParams {
            grid: DensityGrid::new(25.0, 801).unwrap(),
            tol: 1e-7,
            max_iter: 400,
        };
        let grid: Vec<f64> = (0..40).map(|i| 0.2 + 0.3 * i as f64 / 39.0).collect();
        let bound = pml_de_bound(&lambda, &rho, &grid, &de).unwrap();
        assert!((bound.rate - 0.1).abs() < 1e-12);
        assert!(
            bound.p_ml_de > 0.25,
            "low-rate crossing at {} should sit near 1/2",
            bound.p_ml_de
        );
    }

    #[test]
    fn degradation_monotonicity_spot_check() {
        let grid = DensityGrid::new(25.0, 501).unwrap();
        let a = channel_density(ChannelModel::Bsc { p: 0.08 }, grid).unwrap();
        let mut prev = gexit_functional(&a, ChannelModel::Bsc { p: 0.1 });
        for q in [0.01, 0.05, 0.1, 0.2] {
            let b = a.degrade_bsc(q);
            let g = gexit_functional(&b, ChannelModel::Bsc { p: 0.1 });
            assert!(g >= prev - 1e-9, "degradation decreased GEXIT: {prev} -> {g}");
            prev = g;
        }
    }
}
