//! Scalar and quantized-LLR density evolution.
//!
//! The scalar recursion `x <- eps * lambda(1 - rho(1 - x))` covers the BEC;
//! general BMS channels use quantized densities of log-likelihood ratios on a
//! uniform grid with separate point masses at plus and minus infinity. LLR
//! values are natural-log ratios throughout; entropy-valued functionals over
//! these densities live in [`crate::exit`] and are in bits.
//!
//! Check-node combination uses a precomputed quarter table over magnitude
//! bins (signs multiply, magnitudes combine through `2 atanh(tanh tanh)`),
//! with each output mass split between the two adjacent bins so the mean is
//! preserved. Variable-node combination is an FFT convolution with
//! saturation at the grid boundary.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::channel::ChannelModel;
use crate::degree::DegreePolynomial;
use crate::error::Error;
use crate::numerics::minimize_grid_golden;
use crate::Result;

/// Uniform symmetric grid of LLR bin centers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityGrid {
    l_max: f64,
    bins: usize,
}

impl DensityGrid {
    /// Grid over `[-l_max, l_max]` with an odd number of bins so that zero
    /// and the endpoints are exact centers.
    pub fn new(l_max: f64, bins: usize) -> Result<Self> {
        if !(l_max.is_finite() && l_max > 0.0) {
            return Err(Error::domain(format!("l_max {l_max} must be positive")));
        }
        if bins < 3 || bins % 2 == 0 || bins > (1 << 22) + 1 {
            return Err(Error::domain(format!(
                "bins {bins} must be odd, >= 3 and of sane size"
            )));
        }
        Ok(DensityGrid { l_max, bins })
    }

    pub fn l_max(&self) -> f64 {
        self.l_max
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn delta(&self) -> f64 {
        2.0 * self.l_max / (self.bins - 1) as f64
    }

    pub fn center_index(&self) -> usize {
        (self.bins - 1) / 2
    }

    pub fn center(&self, k: usize) -> f64 {
        -self.l_max + self.delta() * k as f64
    }
}

impl Default for DensityGrid {
    /// `l_max = 30` natural-log units, 4001 bins.
    fn default() -> Self {
        DensityGrid {
            l_max: 30.0,
            bins: 4001,
        }
    }
}

/// Quantized symmetric LLR density with point masses at the infinities.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrDensity {
    grid: DensityGrid,
    mass: Vec<f64>,
    /// Atom at `-inf` (certainty of the wrong bit).
    pub minf: f64,
    /// Atom at `+inf` (certainty of the right bit).
    pub pinf: f64,
}

impl LlrDensity {
    pub fn zero(grid: DensityGrid) -> Self {
        LlrDensity {
            grid,
            mass: vec![0.0; grid.bins()],
            minf: 0.0,
            pinf: 0.0,
        }
    }

    pub fn from_parts(grid: DensityGrid, mass: Vec<f64>, minf: f64, pinf: f64) -> Result<Self> {
        if mass.len() != grid.bins() {
            return Err(Error::GridMismatch(format!(
                "{} masses for a {}-bin grid",
                mass.len(),
                grid.bins()
            )));
        }
        if mass.iter().any(|m| !m.is_finite() || *m < 0.0) || minf < 0.0 || pinf < 0.0 {
            return Err(Error::domain("masses must be finite and nonnegative"));
        }
        Ok(LlrDensity {
            grid,
            mass,
            minf,
            pinf,
        })
    }

    /// Point mass at a finite LLR (split over the two adjacent bins) or at
    /// an infinity.
    pub fn atom(grid: DensityGrid, l: f64, mass: f64) -> Self {
        let mut d = LlrDensity::zero(grid);
        d.deposit(l, mass);
        d
    }

    pub fn grid(&self) -> DensityGrid {
        self.grid
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    /// Adds `mass` at LLR `l`, splitting between adjacent bins so the mean is
    /// preserved; infinities go to the atoms, overflow saturates at the edge.
    pub fn deposit(&mut self, l: f64, mass: f64) {
        if mass == 0.0 {
            return;
        }
        if l == f64::INFINITY {
            self.pinf += mass;
            return;
        }
        if l == f64::NEG_INFINITY {
            self.minf += mass;
            return;
        }
        let delta = self.grid.delta();
        let pos = (l.clamp(-self.grid.l_max, self.grid.l_max) + self.grid.l_max) / delta;
        let lo = (pos.floor() as usize).min(self.grid.bins - 2);
        let frac = (pos - lo as f64).clamp(0.0, 1.0);
        self.mass[lo] += mass * (1.0 - frac);
        self.mass[lo + 1] += mass * frac;
    }

    pub fn total_mass(&self) -> f64 {
        self.mass.iter().sum::<f64>() + self.minf + self.pinf
    }

    pub fn normalize(&mut self) {
        let t = self.total_mass();
        if t > 0.0 {
            for m in self.mass.iter_mut() {
                *m /= t;
            }
            self.minf /= t;
            self.pinf /= t;
        }
    }

    /// Hard-decision error probability: mass on negative LLRs plus half the
    /// mass at zero.
    pub fn error_probability(&self) -> f64 {
        let c = self.grid.center_index();
        let neg: f64 = self.mass[..c].iter().sum();
        self.minf + neg + 0.5 * self.mass[c]
    }

    pub fn mean(&self) -> f64 {
        (0..self.grid.bins)
            .map(|k| self.mass[k] * self.grid.center(k))
            .sum()
    }

    pub fn l1_distance(&self, other: &LlrDensity) -> f64 {
        debug_assert_eq!(self.grid, other.grid);
        let finite: f64 = self
            .mass
            .iter()
            .zip(&other.mass)
            .map(|(a, b)| (a - b).abs())
            .sum();
        finite + (self.minf - other.minf).abs() + (self.pinf - other.pinf).abs()
    }

    /// Discrete defect of the symmetry condition `a(-l) = exp(-l) a(l)`:
    /// total absolute mismatch over the negative half line plus any mass at
    /// `-inf` (whose symmetric partner weight vanishes).
    pub fn symmetry_defect(&self) -> f64 {
        let c = self.grid.center_index();
        let mut defect = self.minf;
        for k in 1..=c {
            let l = self.grid.center(c + k);
            defect += (self.mass[c - k] - (-l).exp() * self.mass[c + k]).abs();
        }
        defect
    }

    /// Mirrors the density: `l -> -l`, atoms swapped.
    pub fn reflect(&self) -> LlrDensity {
        let mut mass = self.mass.clone();
        mass.reverse();
        LlrDensity {
            grid: self.grid,
            mass,
            minf: self.pinf,
            pinf: self.minf,
        }
    }

    fn nonzero_bins(&self) -> usize {
        self.mass.iter().filter(|&&m| m != 0.0).count()
    }

    /// Physically degrades the density by cascading a `BSC(q)` onto the
    /// observation: the channel symmetry involution is applied with
    /// probability `q`, and both outcomes are re-expressed as composite LLRs
    /// `l -> ln((1-q) e^l + q) - ln(q e^l + 1 - q)`.
    pub fn degrade_bsc(&self, q: f64) -> LlrDensity {
        assert!((0.0..=0.5).contains(&q));
        if q == 0.0 {
            return self.clone();
        }
        let mut out = LlrDensity::zero(self.grid);
        let cap = ((1.0 - q) / q).ln();
        for k in 0..self.grid.bins {
            let m = self.mass[k];
            if m == 0.0 {
                continue;
            }
            let l2 = degrade_map(self.grid.center(k), q);
            out.deposit(l2, (1.0 - q) * m);
            out.deposit(-l2, q * m);
        }
        out.deposit(cap, (1.0 - q) * self.pinf + q * self.minf);
        out.deposit(-cap, q * self.pinf + (1.0 - q) * self.minf);
        out
    }

    /// Serializes as `l_max (f64 LE), bins (u64 LE), masses, minf, pinf`.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(&self.grid.l_max.to_le_bytes())?;
        w.write_all(&(self.grid.bins as u64).to_le_bytes())?;
        for m in &self.mass {
            w.write_all(&m.to_le_bytes())?;
        }
        w.write_all(&self.minf.to_le_bytes())?;
        w.write_all(&self.pinf.to_le_bytes())?;
        Ok(())
    }

    /// Reads the binary grid format, validating every field.
    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut f8 = [0u8; 8];
        r.read_exact(&mut f8)?;
        let l_max = f64::from_le_bytes(f8);
        r.read_exact(&mut f8)?;
        let bins = u64::from_le_bytes(f8);
        if bins > (1 << 22) + 1 {
            return Err(Error::parse(1, format!("bin count {bins} too large")));
        }
        let grid = DensityGrid::new(l_max, bins as usize)
            .map_err(|e| Error::parse(1, e.to_string()))?;
        let mut mass = Vec::with_capacity(bins as usize);
        for _ in 0..bins {
            r.read_exact(&mut f8)?;
            mass.push(f64::from_le_bytes(f8));
        }
        r.read_exact(&mut f8)?;
        let minf = f64::from_le_bytes(f8);
        r.read_exact(&mut f8)?;
        let pinf = f64::from_le_bytes(f8);
        LlrDensity::from_parts(grid, mass, minf, pinf).map_err(|e| Error::parse(1, e.to_string()))
    }
}

fn degrade_map(l: f64, q: f64) -> f64 {
    // ln((1-q) e^l + q) - ln(q e^l + (1-q)), stable for large |l|.
    if l >= 0.0 {
        let e = (-l).exp();
        (((1.0 - q) + q * e) / (q + (1.0 - q) * e)).ln()
    } else {
        -degrade_map(-l, q)
    }
}

/// Channel LLR density under all-zero transmission.
pub fn channel_density(ch: ChannelModel, grid: DensityGrid) -> Result<LlrDensity> {
    ch.validate()?;
    match ch {
        ChannelModel::Bec { eps } => {
            let mut d = LlrDensity::zero(grid);
            d.pinf = 1.0 - eps;
            d.deposit(0.0, eps);
            Ok(d)
        }
        ChannelModel::Bsc { p } => {
            let mut d = LlrDensity::zero(grid);
            if p == 0.0 {
                d.pinf = 1.0;
            } else {
                let l = ((1.0 - p) / p).ln();
                d.deposit(l, 1.0 - p);
                d.deposit(-l, p);
            }
            Ok(d)
        }
        ChannelModel::BiAwgn { .. } => Err(Error::domain(
            "coded density evolution supports BEC and BSC channels",
        )),
    }
}

// ---------------------------------------------------------------------------
// Check-node combination table
// ---------------------------------------------------------------------------

struct BoxplusTable {
    half: usize,
    lo: Vec<u32>,
    frac: Vec<f64>,
}

impl BoxplusTable {
    fn build(grid: DensityGrid) -> Self {
        let half = grid.center_index();
        let delta = grid.delta();
        let tanh_half: Vec<f64> = (0..=half).map(|i| (0.5 * delta * i as f64).tanh()).collect();
        let mut lo = vec![0u32; (half + 1) * (half + 1)];
        let mut frac = vec![0f64; (half + 1) * (half + 1)];
        for i in 0..=half {
            let ti = tanh_half[i];
            let row = i * (half + 1);
            for j in 0..=half {
                let t = ti * tanh_half[j];
                // 2 atanh(t), nonnegative, strictly below min(i, j) * delta.
                let m = if t >= 1.0 {
                    grid.l_max()
                } else {
                    (2.0 * t / (1.0 - t)).ln_1p()
                };
                let pos = (m / delta).min(half as f64);
                let lo_k = (pos.floor() as usize).min(half - 1);
                lo[row + j] = lo_k as u32;
                frac[row + j] = (pos - lo_k as f64).clamp(0.0, 1.0);
            }
        }
        BoxplusTable { half, lo, frac }
    }
}

static BOXPLUS_TABLES: Lazy<Mutex<HashMap<(u64, usize), Arc<BoxplusTable>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn boxplus_table(grid: DensityGrid) -> Arc<BoxplusTable> {
    let key = (grid.l_max().to_bits(), grid.bins());
    let mut map = BOXPLUS_TABLES.lock().unwrap();
    map.entry(key)
        .or_insert_with(|| Arc::new(BoxplusTable::build(grid)))
        .clone()
}

/// Check-node combination of two densities:
/// the density of `2 atanh(tanh(l1/2) tanh(l2/2))`.
pub fn check_boxplus(a: &LlrDensity, b: &LlrDensity) -> Result<LlrDensity> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch(
            "check_boxplus operands on different grids".into(),
        ));
    }
    let grid = a.grid;
    let mut out = LlrDensity::zero(grid);

    // +inf acts as identity, -inf negates the other operand.
    if a.pinf != 0.0 {
        out.pinf += a.pinf * b.pinf;
        out.minf += a.pinf * b.minf;
        for k in 0..grid.bins() {
            out.mass[k] += a.pinf * b.mass[k];
        }
    }
    if a.minf != 0.0 {
        out.minf += a.minf * b.pinf;
        out.pinf += a.minf * b.minf;
        for k in 0..grid.bins() {
            out.mass[grid.bins() - 1 - k] += a.minf * b.mass[k];
        }
    }
    if b.pinf != 0.0 {
        for k in 0..grid.bins() {
            out.mass[k] += b.pinf * a.mass[k];
        }
    }
    if b.minf != 0.0 {
        for k in 0..grid.bins() {
            out.mass[grid.bins() - 1 - k] += b.minf * a.mass[k];
        }
    }

    let table = boxplus_table(grid);
    let half = table.half;
    let c = grid.center_index();
    for i in 0..=half {
        let api = a.mass[c + i];
        let ami = if i == 0 { 0.0 } else { a.mass[c - i] };
        if api == 0.0 && ami == 0.0 {
            continue;
        }
        let row = i * (half + 1);
        for j in 0..=half {
            let bpj = b.mass[c + j];
            let bmj = if j == 0 { 0.0 } else { b.mass[c - j] };
            let same = api * bpj + ami * bmj;
            let opp = api * bmj + ami * bpj;
            if same == 0.0 && opp == 0.0 {
                continue;
            }
            let lo = table.lo[row + j] as usize;
            let w = table.frac[row + j] as f64;
            out.mass[c + lo] += same * (1.0 - w);
            out.mass[c + lo + 1] += same * w;
            out.mass[c - lo] += opp * (1.0 - w);
            out.mass[c - lo - 1] += opp * w;
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Variable-node convolution
// ---------------------------------------------------------------------------

thread_local! {
    static FFT_CACHE: std::cell::RefCell<(FftPlanner<f64>, HashMap<(usize, bool), Arc<dyn Fft<f64>>>)> =
        std::cell::RefCell::new((FftPlanner::new(), HashMap::new()));
}

fn fft_of_size(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    FFT_CACHE.with(|cell| {
        let (planner, cache) = &mut *cell.borrow_mut();
        cache
            .entry((len, inverse))
            .or_insert_with(|| {
                if inverse {
                    planner.plan_fft_inverse(len)
                } else {
                    planner.plan_fft_forward(len)
                }
            })
            .clone()
    })
}

fn convolve_dense(a: &[f64], b: &[f64]) -> Vec<f64> {
    let out_len = a.len() + b.len() - 1;
    let size = out_len.next_power_of_two();
    let fwd = fft_of_size(size, false);
    let inv = fft_of_size(size, true);
    let mut fa: Vec<Complex<f64>> = a
        .iter()
        .map(|&x| Complex::new(x, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(size)
        .collect();
    let mut fb: Vec<Complex<f64>> = b
        .iter()
        .map(|&x| Complex::new(x, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(size)
        .collect();
    fwd.process(&mut fa);
    fwd.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    inv.process(&mut fa);
    let scale = 1.0 / size as f64;
    fa.truncate(out_len);
    fa.iter().map(|z| (z.re * scale).max(0.0)).collect()
}

/// Variable-node combination of two densities: the density of `l1 + l2`,
/// saturating at the grid boundary.
pub fn var_convolve(a: &LlrDensity, b: &LlrDensity) -> Result<LlrDensity> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch(
            "var_convolve operands on different grids".into(),
        ));
    }
    let grid = a.grid;
    let bins = grid.bins();
    let mut out = LlrDensity::zero(grid);

    let a_fin: f64 = a.mass.iter().sum();
    let b_fin: f64 = b.mass.iter().sum();
    // Infinite atoms absorb: +inf + anything = +inf, except the undefined
    // +inf + -inf cross terms, which are placed at zero by convention.
    out.pinf += a.pinf * (b_fin + b.pinf) + b.pinf * a_fin;
    out.minf += a.minf * (b_fin + b.minf) + b.minf * a_fin;
    let cross = a.pinf * b.minf + a.minf * b.pinf;
    if cross != 0.0 {
        out.mass[grid.center_index()] += cross;
    }

    if a_fin != 0.0 && b_fin != 0.0 {
        if a.nonzero_bins().saturating_mul(b.nonzero_bins()) <= 4096 {
            // Sparse exact path (keeps two-atom erasure densities exact).
            for (i, &ma) in a.mass.iter().enumerate() {
                if ma == 0.0 {
                    continue;
                }
                for (j, &mb) in b.mass.iter().enumerate() {
                    if mb == 0.0 {
                        continue;
                    }
                    let k = (i + j) as isize - grid.center_index() as isize;
                    out.mass[k.clamp(0, bins as isize - 1) as usize] += ma * mb;
                }
            }
        } else {
            let full = convolve_dense(&a.mass, &b.mass);
            let c = grid.center_index() as isize;
            for (s, &m) in full.iter().enumerate() {
                if m == 0.0 {
                    continue;
                }
                let k = s as isize - c;
                out.mass[k.clamp(0, bins as isize - 1) as usize] += m;
            }
        }
    }
    Ok(out)
}

/// `k`-fold check-node combination by square and multiply.
fn boxplus_power(a: &LlrDensity, k: usize) -> Result<LlrDensity> {
    assert!(k >= 1);
    let mut result: Option<LlrDensity> = None;
    let mut base = a.clone();
    let mut k = k;
    loop {
        if k & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => check_boxplus(&r, &base)?,
            });
        }
        k >>= 1;
        if k == 0 {
            break;
        }
        base = check_boxplus(&base, &base)?;
    }
    Ok(result.unwrap())
}

/// Edge-perspective check-node output density: `sum_k rho_k a^(boxplus k)`.
pub fn check_node_output(a: &LlrDensity, rho: &DegreePolynomial) -> Result<LlrDensity> {
    let coeffs = rho.coeffs();
    let nonzero: Vec<(usize, f64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0.0)
        .map(|(k, &c)| (k, c))
        .collect();
    if nonzero.len() == 1 {
        return boxplus_power(a, nonzero[0].0);
    }
    let mut out = LlrDensity::zero(a.grid);
    let mut pow = a.clone();
    for k in 1..coeffs.len() {
        if k > 1 {
            pow = check_boxplus(&pow, a)?;
        }
        let c = coeffs[k];
        if c > 0.0 {
            out.minf += c * pow.minf;
            out.pinf += c * pow.pinf;
            for (o, m) in out.mass.iter_mut().zip(&pow.mass) {
                *o += c * m;
            }
        }
    }
    Ok(out)
}

/// Edge-perspective variable-node output: `sum_k lambda_k ch (*) b^((*) k)`.
pub fn var_node_update(
    ch: &LlrDensity,
    b: &LlrDensity,
    lambda: &DegreePolynomial,
) -> Result<LlrDensity> {
    let coeffs = lambda.coeffs();
    let mut out = LlrDensity::zero(ch.grid);
    let mut acc = ch.clone();
    for k in 1..coeffs.len() {
        acc = var_convolve(&acc, b)?;
        let c = coeffs[k];
        if c > 0.0 {
            out.minf += c * acc.minf;
            out.pinf += c * acc.pinf;
            for (o, m) in out.mass.iter_mut().zip(&acc.mass) {
                *o += c * m;
            }
        }
    }
    Ok(out)
}

/// Node-perspective extrinsic density: all check messages combined at a
/// variable, channel observation excluded: `sum_d Lambda_d b^((*) d)`.
pub fn extrinsic_node_density(
    b: &LlrDensity,
    lambda: &DegreePolynomial,
) -> Result<LlrDensity> {
    let nodes = lambda.node_perspective();
    let coeffs = nodes.coeffs();
    let mut out = LlrDensity::zero(b.grid);
    let mut acc: Option<LlrDensity> = None;
    for d in 1..coeffs.len() {
        acc = Some(match acc {
            None => b.clone(),
            Some(prev) => var_convolve(&prev, b)?,
        });
        let c = coeffs[d];
        if c > 0.0 {
            let a = acc.as_ref().unwrap();
            out.minf += c * a.minf;
            out.pinf += c * a.pinf;
            for (o, m) in out.mass.iter_mut().zip(&a.mass) {
                *o += c * m;
            }
        }
    }
    Ok(out)
}

/// Density-evolution parameters.
#[derive(Debug, Clone, Copy)]
pub struct DeParams {
    pub grid: DensityGrid,
    /// L1 convergence tolerance on successive edge densities.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for DeParams {
    fn default() -> Self {
        DeParams {
            grid: DensityGrid::default(),
            tol: 1e-8,
            max_iter: 2000,
        }
    }
}

/// A converged density-evolution state.
#[derive(Debug, Clone)]
pub struct DeFixedPoint {
    /// Fixed point of the variable-to-check edge density.
    pub edge_density: LlrDensity,
    /// Node-perspective extrinsic density fed to the GEXIT functional.
    pub extrinsic_density: LlrDensity,
    pub iterations: usize,
    pub residual: f64,
}

/// Runs quantized density evolution to its fixed point.
pub fn de_bms(
    lambda: &DegreePolynomial,
    rho: &DegreePolynomial,
    ch: ChannelModel,
    params: &DeParams,
) -> Result<DeFixedPoint> {
    let a_ch = channel_density(ch, params.grid)?;
    let mut a = a_ch.clone();
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    for it in 1..=params.max_iter {
        let b = check_node_output(&a, rho)?;
        let mut a_new = var_node_update(&a_ch, &b, lambda)?;
        debug_assert!((a_new.total_mass() - 1.0).abs() < 1e-9);
        // Rounding excess compounds multiplicatively across iterations;
        // renormalize each step.
        a_new.normalize();
        residual = a_new.l1_distance(&a);
        a = a_new;
        iterations = it;
        if residual < params.tol {
            break;
        }
    }
    if residual >= params.tol {
        return Err(Error::NotConverged {
            residual,
            iterations,
            last: Box::new(a),
        });
    }
    let b = check_node_output(&a, rho)?;
    let mut extrinsic = extrinsic_node_density(&b, lambda)?;
    extrinsic.normalize();
    Ok(DeFixedPoint {
        edge_density: a,
        extrinsic_density: extrinsic,
        iterations,
        residual,
    })
}

/// Recovers the extrinsic density from an edge density (used to evaluate
/// functionals on non-converged states carried by errors).
pub fn extrinsic_from_edge(
    lambda: &DegreePolynomial,
    rho: &DegreePolynomial,
    edge: &LlrDensity,
) -> Result<LlrDensity> {
    let b = check_node_output(edge, rho)?;
    extrinsic_node_density(&b, lambda)
}

// ---------------------------------------------------------------------------
// Scalar BEC recursion
// ---------------------------------------------------------------------------

/// Largest stable fixed point of `x = eps * lambda(1 - rho(1 - x))`,
/// reached by iterating from `x0 = eps`.
pub fn bec_fixed_point(
    lambda: &DegreePolynomial,
    rho: &DegreePolynomial,
    eps: f64,
    tol: f64,
) -> f64 {
    assert!((0.0..=1.0).contains(&eps));
    let mut x = eps;
    for _ in 0..1_000_000 {
        let next = eps * lambda.eval_unchecked(1.0 - rho.eval_unchecked(1.0 - x));
        let delta = (next - x).abs();
        x = next;
        if delta < tol {
            break;
        }
    }
    x
}

/// The parametric erasure probability `eps(x) = x / lambda(1 - rho(1 - x))`.
pub fn bec_eps_of_x(lambda: &DegreePolynomial, rho: &DegreePolynomial, x: f64) -> f64 {
    x / lambda.eval_unchecked(1.0 - rho.eval_unchecked(1.0 - x))
}

/// Iterative decoding threshold: the global minimum of `eps(x)` on `(0, 1]`.
/// Returns `(eps_it, x_it)`.
pub fn bec_it_threshold(
    lambda: &DegreePolynomial,
    rho: &DegreePolynomial,
) -> Result<(f64, f64)> {
    if rho.degree() < 2 {
        return Err(Error::domain(
            "rho must have degree at least 2 (check nodes of degree >= 3)",
        ));
    }
    let f = |x: f64| bec_eps_of_x(lambda, rho, x);
    let x_lo = 1e-9;
    let (x_it, eps_it) = minimize_grid_golden(&f, x_lo, 1.0, 4097, 1e-12);
    Ok((eps_it, x_it))
}

/// Whether quantized DE at `BSC(p)` drives the error probability below
/// `pe_tol` within the iteration budget.
pub fn bsc_de_decodes(
    lambda: &DegreePolynomial,
    rho: &DegreePolynomial,
    p: f64,
    params: &DeParams,
    pe_tol: f64,
) -> Result<bool> {
    let a_ch = channel_density(ChannelModel::Bsc { p }, params.grid)?;
    let mut a = a_ch.clone();
    for _ in 0..params.max_iter {
        let b = check_node_output(&a, rho)?;
        let mut a_new = var_node_update(&a_ch, &b, lambda)?;
        a_new.normalize();
        let residual = a_new.l1_distance(&a);
        a = a_new;
        if a.error_probability() < pe_tol {
            return Ok(true);
        }
        if residual < params.tol {
            return Ok(false);
        }
    }
    Ok(false)
}

/// Belief-propagation threshold over the BSC by bisection on the DE outcome.
pub fn bsc_bp_threshold(
    lambda: &DegreePolynomial,
    rho: &DegreePolynomial,
    params: &DeParams,
    steps: usize,
) -> Result<f64> {
    let mut lo = 0.0;
    let mut hi = 0.5;
    for _ in 0..steps {
        let mid = 0.5 * (lo + hi);
        if bsc_de_decodes(lambda, rho, mid, params, 1e-7)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
