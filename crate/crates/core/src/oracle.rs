//! Exact ground truth on small codes and single symbols: conditional
//! entropies by enumeration, extrinsic distributions, per-bit GEXIT values
//! through three independent routes (the general formula, the kernel form,
//! and finite differences of the entropy), the entropy chain-rule
//! decomposition, and the Gaussian derivative/MMSE relation.

use crate::channel::{biawgn_snr_for_entropy, gaussian_pdf, ChannelModel, Symbol};
use crate::degree::EnsembleSpec;
use crate::error::Error;
use crate::exit::gexit_kernel_l;
use crate::numerics::{gaussian_expectation_128, h2_inv};
use crate::tanner::{ParityCheckMatrix, TannerGraph};
use crate::Result;

/// A code small enough for exact enumeration (codebook and output space).
#[derive(Debug, Clone)]
pub struct SmallCode {
    h: ParityCheckMatrix,
    n: usize,
    /// Codewords packed into `u32` bit masks.
    codebook: Vec<u32>,
    /// `counts[mask]` = number of codewords with support inside `mask`;
    /// always a power of two.
    counts: Vec<u32>,
}

const MAX_EXACT_N: usize = 18;
const MAX_EXACT_N_BSC: usize = 13;

impl SmallCode {
    pub fn new(h: ParityCheckMatrix) -> Result<Self> {
        let n = h.n_cols();
        if n > MAX_EXACT_N {
            return Err(Error::SizeExceeded(format!(
                "exact oracle supports n <= {MAX_EXACT_N}, got {n}"
            )));
        }
        let words = h.enumerate_codewords(1 << 20)?;
        let codebook: Vec<u32> = words
            .iter()
            .map(|w| {
                w.iter_ones()
                    .fold(0u32, |acc, i| acc | (1u32 << i))
            })
            .collect();
        // Subset-sum transform: counts[mask] = #codewords with supp <= mask.
        let mut counts = vec![0u32; 1 << n];
        for &c in &codebook {
            counts[c as usize] += 1;
        }
        for b in 0..n {
            for mask in 0..(1usize << n) {
                if mask & (1 << b) != 0 {
                    counts[mask] += counts[mask ^ (1 << b)];
                }
            }
        }
        Ok(SmallCode { h, n, codebook, counts })
    }

    pub fn from_graph(graph: &TannerGraph) -> Result<Self> {
        Self::new(graph.to_parity_check())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> &ParityCheckMatrix {
        &self.h
    }

    pub fn codebook_size(&self) -> usize {
        self.codebook.len()
    }

    /// `log2` of the number of codewords supported inside `mask`.
    fn dim_within(&self, mask: usize) -> u32 {
        debug_assert!(self.counts[mask].is_power_of_two());
        self.counts[mask].trailing_zeros()
    }

    /// Whether bit `i` is undetermined when every position in `erased` is
    /// unknown (then exactly half the compatible codewords carry a one).
    fn bit_free(&self, erased: usize, i: usize) -> bool {
        self.dim_within(erased | (1 << i)) > self.dim_within(erased)
    }
}

/// How to evaluate an entropy: exact enumeration or Monte Carlo sampling.
#[derive(Debug, Clone, Copy)]
pub enum EntropyMode {
    Exact,
    MonteCarlo { trials: usize, seed: u64 },
}

fn check_same_kind(channels: &[ChannelModel]) -> Result<()> {
    let same = channels.windows(2).all(|w| {
        std::mem::discriminant(&w[0]) == std::mem::discriminant(&w[1])
    });
    if !same {
        return Err(Error::domain("per-position channels must share one model"));
    }
    Ok(())
}

/// `H(X | Y)` in bits for a uniform prior over the codebook and independent
/// per-position channels.
pub fn exact_conditional_entropy(
    code: &SmallCode,
    channels: &[ChannelModel],
    mode: EntropyMode,
) -> Result<f64> {
    if channels.len() != code.n {
        return Err(Error::domain("one channel per position required"));
    }
    check_same_kind(channels)?;
    for ch in channels {
        ch.validate()?;
    }
    match mode {
        EntropyMode::Exact => match channels[0] {
            ChannelModel::Bec { .. } => Ok(bec_conditional_entropy(code, channels)),
            ChannelModel::Bsc { .. } => {
                if code.n > MAX_EXACT_N_BSC {
                    return Err(Error::SizeExceeded(format!(
                        "exact BSC enumeration supports n <= {MAX_EXACT_N_BSC}"
                    )));
                }
                Ok(bsc_conditional_entropy(code, channels))
            }
            ChannelModel::BiAwgn { .. } => Err(Error::SizeExceeded(
                "exact mode covers BEC and BSC; use Monte Carlo for BiAWGN".into(),
            )),
        },
        EntropyMode::MonteCarlo { trials, seed } => {
            Ok(monte_carlo_conditional_entropy(code, channels, trials, seed))
        }
    }
}

fn bec_conditional_entropy(code: &SmallCode, channels: &[ChannelModel]) -> f64 {
    let eps: Vec<f64> = channels
        .iter()
        .map(|c| match c {
            ChannelModel::Bec { eps } => *eps,
            _ => unreachable!(),
        })
        .collect();
    let mut total = 0.0;
    for mask in 0..(1usize << code.n) {
        let k = code.dim_within(mask);
        if k == 0 {
            continue;
        }
        let mut prob = 1.0;
        for (i, &e) in eps.iter().enumerate() {
            prob *= if mask & (1 << i) != 0 { e } else { 1.0 - e };
        }
        total += prob * k as f64;
    }
    total
}

/// `weights[mask]` = probability that the flip pattern equals `mask`.
fn bsc_flip_weights(n: usize, channels: &[ChannelModel]) -> Vec<f64> {
    let p: Vec<f64> = channels
        .iter()
        .map(|c| match c {
            ChannelModel::Bsc { p } => *p,
            _ => unreachable!(),
        })
        .collect();
    let mut w = vec![0.0; 1 << n];
    w[0] = p.iter().map(|&pi| 1.0 - pi).product();
    for mask in 1..(1usize << n) {
        let b = mask.trailing_zeros() as usize;
        let ratio = if p[b] >= 1.0 {
            0.0
        } else {
            p[b] / (1.0 - p[b])
        };
        w[mask] = w[mask ^ (1 << b)] * ratio;
    }
    w
}

fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

fn bsc_conditional_entropy(code: &SmallCode, channels: &[ChannelModel]) -> f64 {
    let wt = bsc_flip_weights(code.n, channels);
    let inv_size = 1.0 / code.codebook.len() as f64;
    let mut total = 0.0;
    for y in 0..(1u32 << code.n) {
        let mut s = 0.0;
        let mut t = 0.0;
        for &c in &code.codebook {
            let w = wt[(c ^ y) as usize];
            s += w;
            t += xlog2x(w);
        }
        if s > 0.0 {
            total += inv_size * (xlog2x(s) - t);
        }
    }
    total
}

fn monte_carlo_conditional_entropy(
    code: &SmallCode,
    channels: &[ChannelModel],
    trials: usize,
    seed: u64,
) -> f64 {
    use rand::Rng;
    let mut acc = 0.0;
    for t in 0..trials {
        let mut rng = crate::trial_rng(seed, t as u64);
        let cw = code.codebook[rng.gen_range(0..code.codebook.len())];
        let bits: Vec<u8> = (0..code.n).map(|i| ((cw >> i) & 1) as u8).collect();
        let symbols: Vec<Symbol> = bits
            .iter()
            .zip(channels)
            .map(|(&b, ch)| ch.transmit(&[b], &mut rng).symbols[0])
            .collect();
        // -log2 P(x | y) for the transmitted word.
        let mut num = 0.0;
        let mut den = 0.0;
        for &c in &code.codebook {
            let mut w = 1.0;
            for (i, (sym, ch)) in symbols.iter().zip(channels).enumerate() {
                w *= ch.transition_prob(*sym, ((c >> i) & 1) as u8);
            }
            den += w;
            if c == cw {
                num = w;
            }
        }
        acc += -(num / den).log2();
    }
    acc / trials as f64
}

/// Exact distribution of the extrinsic LLR at position `i` under all-zero
/// transmission.
#[derive(Debug, Clone)]
pub struct ExtrinsicDistribution {
    /// LLR values, ascending; `+inf` allowed.
    pub support: Vec<f64>,
    pub mass: Vec<f64>,
}

impl ExtrinsicDistribution {
    fn from_atoms(mut atoms: Vec<(f64, f64)>) -> Self {
        atoms.retain(|&(_, m)| m > 0.0);
        atoms.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut support = Vec::new();
        let mut mass = Vec::new();
        for (l, m) in atoms {
            match support.last() {
                Some(&prev) if (l - prev) < 1e-12 || (l == f64::INFINITY && prev == f64::INFINITY) => {
                    *mass.last_mut().unwrap() += m;
                }
                _ => {
                    support.push(l);
                    mass.push(m);
                }
            }
        }
        ExtrinsicDistribution { support, mass }
    }

    pub fn total_mass(&self) -> f64 {
        self.mass.iter().sum()
    }
}

/// Exact extrinsic-LLR distribution of bit `i` (all-zero transmission).
pub fn extrinsic_distribution(
    code: &SmallCode,
    channels: &[ChannelModel],
    i: usize,
) -> Result<ExtrinsicDistribution> {
    if channels.len() != code.n || i >= code.n {
        return Err(Error::domain("bad channel vector or position"));
    }
    check_same_kind(channels)?;
    match channels[0] {
        ChannelModel::Bec { .. } => {
            let eps: Vec<f64> = channels
                .iter()
                .map(|c| match c {
                    ChannelModel::Bec { eps } => *eps,
                    _ => unreachable!(),
                })
                .collect();
            let mut p_free = 0.0;
            let mut p_forced = 0.0;
            for mask in 0..(1usize << code.n) {
                if mask & (1 << i) != 0 {
                    continue;
                }
                let mut prob = 1.0;
                for (j, &e) in eps.iter().enumerate() {
                    if j == i {
                        continue;
                    }
                    prob *= if mask & (1 << j) != 0 { e } else { 1.0 - e };
                }
                if code.bit_free(mask, i) {
                    p_free += prob;
                } else {
                    p_forced += prob;
                }
            }
            Ok(ExtrinsicDistribution::from_atoms(vec![
                (0.0, p_free),
                (f64::INFINITY, p_forced),
            ]))
        }
        ChannelModel::Bsc { .. } => {
            if code.n > MAX_EXACT_N_BSC {
                return Err(Error::SizeExceeded(format!(
                    "exact BSC enumeration supports n <= {MAX_EXACT_N_BSC}"
                )));
            }
            let tables = BscExtrinsicTables::build(code, channels, i);
            let mut atoms = Vec::with_capacity(tables.z_count());
            for z in 0..tables.z_count() {
                let (w0, w1) = tables.w01(z);
                let l = if w1 == 0.0 {
                    f64::INFINITY
                } else {
                    (w0 / w1).ln()
                };
                // Mass under all-zero: weight of the pattern z itself.
                atoms.push((l, tables.rwt[z]));
            }
            Ok(ExtrinsicDistribution::from_atoms(atoms))
        }
        ChannelModel::BiAwgn { .. } => Err(Error::SizeExceeded(
            "extrinsic enumeration covers BEC and BSC".into(),
        )),
    }
}

/// Shared BSC enumeration tables for position `i`: reduced flip weights over
/// the other `n-1` positions and per-`z` codeword-half weights.
struct BscExtrinsicTables {
    rwt: Vec<f64>,
    reduced: Vec<(u32, u8)>, // (codeword restricted off i, bit at i)
    n1: usize,
    count: [usize; 2],
}

impl BscExtrinsicTables {
    fn build(code: &SmallCode, channels: &[ChannelModel], i: usize) -> Self {
        let reduced_channels: Vec<ChannelModel> = channels
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &c)| c)
            .collect();
        let n1 = code.n - 1;
        let rwt = bsc_flip_weights(n1, &reduced_channels);
        let compress = |c: u32| -> u32 {
            let low = c & ((1u32 << i) - 1);
            let high = (c >> (i + 1)) << i;
            low | high
        };
        let mut count = [0usize; 2];
        let reduced: Vec<(u32, u8)> = code
            .codebook
            .iter()
            .map(|&c| {
                let bit = ((c >> i) & 1) as u8;
                count[bit as usize] += 1;
                (compress(c), bit)
            })
            .collect();
        BscExtrinsicTables {
            rwt,
            reduced,
            n1,
            count,
        }
    }

    fn z_count(&self) -> usize {
        1 << self.n1
    }

    /// Total codeword-conditional weights `(W0, W1)` of observing `z`.
    fn w01(&self, z: usize) -> (f64, f64) {
        let mut w = [0.0f64; 2];
        for &(rc, bit) in &self.reduced {
            w[bit as usize] += self.rwt[(rc as usize) ^ z];
        }
        (w[0], w[1])
    }
}

/// Per-bit GEXIT value by the general sum over `(x, z, y)` with the
/// transition-probability derivative; no symmetry assumption.
pub fn gexit_i_formula(
    code: &SmallCode,
    channels: &[ChannelModel],
    i: usize,
) -> Result<f64> {
    if channels.len() != code.n || i >= code.n {
        return Err(Error::domain("bad channel vector or position"));
    }
    check_same_kind(channels)?;
    let chi = channels[i];
    let alphabet = chi
        .output_alphabet()
        .ok_or_else(|| Error::SizeExceeded("formula route covers finite alphabets".into()))?;
    match chi {
        ChannelModel::Bec { .. } => {
            let eps: Vec<f64> = channels
                .iter()
                .map(|c| match c {
                    ChannelModel::Bec { eps } => *eps,
                    _ => unreachable!(),
                })
                .collect();
            let pi = |x: u8| -> f64 {
                let matching = code
                    .codebook
                    .iter()
                    .filter(|&&c| (c >> i) & 1 == x as u32)
                    .count();
                matching as f64 / code.codebook.len() as f64
            };
            let mut total = 0.0;
            for x in [0u8, 1u8] {
                let px = pi(x);
                if px == 0.0 {
                    continue;
                }
                for mask in 0..(1usize << code.n) {
                    if mask & (1 << i) != 0 {
                        continue;
                    }
                    let mut prob = 1.0;
                    for (j, &e) in eps.iter().enumerate() {
                        if j == i {
                            continue;
                        }
                        prob *= if mask & (1 << j) != 0 { e } else { 1.0 - e };
                    }
                    if prob == 0.0 {
                        continue;
                    }
                    // Posterior of x given the extrinsic observation.
                    let (post_x, post_other) = if code.bit_free(mask, i) {
                        (0.5, 0.5)
                    } else {
                        (1.0, 0.0)
                    };
                    for &y in &alphabet {
                        let qd = chi.transition_derivative(y, x)?;
                        if qd == 0.0 {
                            continue;
                        }
                        let qx = chi.transition_prob(y, x);
                        if qx == 0.0 || post_x == 0.0 {
                            continue;
                        }
                        let q_other = chi.transition_prob(y, x ^ 1);
                        let ratio = (post_x * qx + post_other * q_other) / (post_x * qx);
                        total += px * prob * qd * ratio.log2();
                    }
                }
            }
            Ok(total)
        }
        ChannelModel::Bsc { .. } => {
            if code.n > MAX_EXACT_N_BSC {
                return Err(Error::SizeExceeded(format!(
                    "exact BSC enumeration supports n <= {MAX_EXACT_N_BSC}"
                )));
            }
            let tables = BscExtrinsicTables::build(code, channels, i);
            let inv_size = 1.0 / code.codebook.len() as f64;
            let mut total = 0.0;
            for z in 0..tables.z_count() {
                let (w0, w1) = tables.w01(z);
                let w = [w0, w1];
                for x in [0u8, 1u8] {
                    if tables.count[x as usize] == 0 || w[x as usize] == 0.0 {
                        continue;
                    }
                    for &y in &alphabet {
                        let qd = chi.transition_derivative(y, x)?;
                        if qd == 0.0 {
                            continue;
                        }
                        let qx = chi.transition_prob(y, x);
                        let num = w0 * chi.transition_prob(y, 0) + w1 * chi.transition_prob(y, 1);
                        let ratio = num / (w[x as usize] * qx);
                        total += inv_size * w[x as usize] * qd * ratio.log2();
                    }
                }
            }
            Ok(total)
        }
        ChannelModel::BiAwgn { .. } => unreachable!("no finite alphabet"),
    }
}

/// Per-bit GEXIT through the kernel form: the all-zero extrinsic
/// distribution integrated against the channel's GEXIT kernel.
pub fn gexit_i_kernel(
    code: &SmallCode,
    channels: &[ChannelModel],
    i: usize,
) -> Result<f64> {
    let dist = extrinsic_distribution(code, channels, i)?;
    Ok(dist
        .support
        .iter()
        .zip(&dist.mass)
        .map(|(&l, &m)| m * gexit_kernel_l(channels[i], l))
        .sum())
}

/// Per-bit EXIT value `H(X_i | Y_[i])` for the erasure channel.
pub fn exit_i_bec(code: &SmallCode, channels: &[ChannelModel], i: usize) -> Result<f64> {
    let dist = extrinsic_distribution(code, channels, i)?;
    // Erased extrinsic (LLR zero) contributes one bit, known contributes none.
    Ok(dist
        .support
        .iter()
        .zip(&dist.mass)
        .filter(|(&l, _)| l == 0.0)
        .map(|(_, &m)| m)
        .sum())
}

/// Per-bit GEXIT by central finite differences of the conditional entropy in
/// the entropy parameter `w_i`, with one Richardson step.
pub fn gexit_i_fd(
    code: &SmallCode,
    channels: &[ChannelModel],
    i: usize,
    delta: f64,
) -> Result<f64> {
    if channels.len() != code.n || i >= code.n {
        return Err(Error::domain("bad channel vector or position"));
    }
    let w0 = channels[i].entropy_param();
    if w0 - delta < 0.0 || w0 + delta > 1.0 {
        return Err(Error::domain(format!(
            "finite-difference stencil leaves [0,1] at w = {w0}, delta = {delta}"
        )));
    }
    let eval = |w: f64| -> Result<f64> {
        let mut chs = channels.to_vec();
        chs[i] = with_entropy(channels[i], w)?;
        exact_conditional_entropy(code, &chs, EntropyMode::Exact)
    };
    let h_p = eval(w0 + delta)?;
    let h_m = eval(w0 - delta)?;
    let h_p2 = eval(w0 + 0.5 * delta)?;
    let h_m2 = eval(w0 - 0.5 * delta)?;
    let h_0 = eval(w0)?;
    let fwd = (h_p - h_0) / delta;
    let bwd = (h_0 - h_m) / delta;
    if delta < 1e-7 && (fwd - bwd).abs() > 0.05 * (fwd.abs() + bwd.abs() + 1e-9) {
        return Err(Error::Cancellation((fwd - bwd).abs()));
    }
    let d1 = (h_p - h_m) / (2.0 * delta);
    let d2 = (h_p2 - h_m2) / delta;
    Ok((4.0 * d2 - d1) / 3.0)
}

/// Builds a channel of the same family with entropy parameter `w`.
pub fn with_entropy(template: ChannelModel, w: f64) -> Result<ChannelModel> {
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::domain(format!("entropy parameter {w} outside [0,1]")));
    }
    Ok(match template {
        ChannelModel::Bec { .. } => ChannelModel::Bec { eps: w },
        ChannelModel::Bsc { .. } => ChannelModel::Bsc { p: h2_inv(w) },
        ChannelModel::BiAwgn { .. } => ChannelModel::BiAwgn {
            snr: biawgn_snr_for_entropy(w),
        },
    })
}

/// Defect of the chain-rule decomposition
/// `H(X|Y) = H(X_i | Z_i, Y_i) + H(X_[i] | X_i, Y_[i])`, both sides by
/// independent enumeration.
pub fn entropy_decomposition_check(
    code: &SmallCode,
    channels: &[ChannelModel],
    i: usize,
) -> Result<f64> {
    if channels.len() != code.n || i >= code.n {
        return Err(Error::domain("bad channel vector or position"));
    }
    check_same_kind(channels)?;
    let lhs = exact_conditional_entropy(code, channels, EntropyMode::Exact)?;
    let chi = channels[i];
    let (term1, term2) = match chi {
        ChannelModel::Bec { .. } => {
            let eps: Vec<f64> = channels
                .iter()
                .map(|c| match c {
                    ChannelModel::Bec { eps } => *eps,
                    _ => unreachable!(),
                })
                .collect();
            let mut t1 = 0.0;
            let mut t2 = 0.0;
            for mask in 0..(1usize << code.n) {
                if mask & (1 << i) != 0 {
                    continue;
                }
                let mut prob = 1.0;
                for (j, &e) in eps.iter().enumerate() {
                    if j == i {
                        continue;
                    }
                    prob *= if mask & (1 << j) != 0 { e } else { 1.0 - e };
                }
                // H(X_i | z, Y_i): one bit only when bit i is free given the
                // extrinsic pattern and its own observation is erased.
                if code.bit_free(mask, i) {
                    t1 += prob * eps[i];
                }
                // H(X_[i] | X_i, z) = dimension of codewords inside the
                // erased set (bit i excluded on both sides).
                t2 += prob * code.dim_within(mask) as f64;
            }
            (t1, t2)
        }
        ChannelModel::Bsc { .. } => {
            if code.n > MAX_EXACT_N_BSC {
                return Err(Error::SizeExceeded(format!(
                    "exact BSC enumeration supports n <= {MAX_EXACT_N_BSC}"
                )));
            }
            let tables = BscExtrinsicTables::build(code, channels, i);
            let inv_size = 1.0 / code.codebook.len() as f64;
            let alphabet = chi.output_alphabet().unwrap();
            let mut t1 = 0.0;
            for z in 0..tables.z_count() {
                let (w0, w1) = tables.w01(z);
                for &y in &alphabet {
                    let j0 = w0 * chi.transition_prob(y, 0);
                    let j1 = w1 * chi.transition_prob(y, 1);
                    let s = j0 + j1;
                    if s > 0.0 {
                        t1 += inv_size * (xlog2x(s) - xlog2x(j0) - xlog2x(j1));
                    }
                }
            }
            let mut t2 = 0.0;
            for z in 0..tables.z_count() {
                let mut s = [0.0f64; 2];
                let mut t = [0.0f64; 2];
                for &(rc, bit) in &tables.reduced {
                    let w = tables.rwt[(rc as usize) ^ z];
                    s[bit as usize] += w;
                    t[bit as usize] += xlog2x(w);
                }
                for x in [0usize, 1usize] {
                    if tables.count[x] > 0 && s[x] > 0.0 {
                        // pi_x * P(z|x) * H(posterior) accumulated via the
                        // unnormalized-weight entropy identity.
                        t2 += inv_size * (xlog2x(s[x]) - t[x]);
                    }
                }
            }
            (t1, t2)
        }
        ChannelModel::BiAwgn { .. } => {
            return Err(Error::SizeExceeded(
                "decomposition check covers BEC and BSC".into(),
            ))
        }
    };
    Ok((lhs - term1 - term2).abs())
}

// ---------------------------------------------------------------------------
// Gaussian single-symbol relations
// ---------------------------------------------------------------------------

/// Derivative of the single-symbol conditional entropy and the MMSE, both at
/// signal-to-noise ratio `snr` for a binary input `+1/-1` with
/// `P(+1) = prior_plus`. The derivative (`gexit`) is in nats per unit `snr`;
/// the caller checks `gexit = -mmse/2`.
#[derive(Debug, Clone, Copy)]
pub struct GaussianSingleSymbol {
    pub gexit: f64,
    pub mmse: f64,
}

fn gaussian_conditional_entropy_nats(snr: f64, prior_plus: f64) -> f64 {
    // H(X|Y) = E[-ln P(x|y)] under the mixture.
    let s = snr.sqrt();
    let priors = [(1.0, prior_plus), (-1.0, 1.0 - prior_plus)];
    let mut h = 0.0;
    for &(x, px) in &priors {
        if px == 0.0 {
            continue;
        }
        h += px * gaussian_expectation_128(|wv| {
            let y = s * x + wv;
            let q_plus = gaussian_pdf(y - s);
            let q_minus = gaussian_pdf(y + s);
            let qx = if x > 0.0 { q_plus } else { q_minus };
            let denom = prior_plus * q_plus + (1.0 - prior_plus) * q_minus;
            -(px * qx / denom).ln()
        });
    }
    h
}

fn gaussian_posterior_mean(y: f64, snr: f64, prior_plus: f64) -> f64 {
    let s = snr.sqrt();
    let q_plus = prior_plus * gaussian_pdf(y - s);
    let q_minus = (1.0 - prior_plus) * gaussian_pdf(y + s);
    (q_plus - q_minus) / (q_plus + q_minus)
}

/// Computes both sides of the Gaussian derivative/MMSE relation.
pub fn gaussian_single_symbol(snr: f64, prior_plus: f64) -> Result<GaussianSingleSymbol> {
    if snr < 0.0 || !(0.0..=1.0).contains(&prior_plus) {
        return Err(Error::domain("snr >= 0 and prior in [0,1] required"));
    }
    let h = |s: f64| gaussian_conditional_entropy_nats(s.max(0.0), prior_plus);
    let gexit = if snr > 1e-3 {
        crate::numerics::richardson_diff(&h, snr, 1e-3 * snr.max(1.0))
    } else {
        // One-sided difference with Richardson at the boundary.
        let d = 1e-5;
        let d1 = (h(snr + d) - h(snr)) / d;
        let d2 = (h(snr + 0.5 * d) - h(snr)) / (0.5 * d);
        2.0 * d2 - d1
    };
    // MMSE = 1 - E[E[x|y]^2] since x^2 = 1.
    let s = snr.sqrt();
    let priors = [(1.0, prior_plus), (-1.0, 1.0 - prior_plus)];
    let mut second = 0.0;
    for &(x, px) in &priors {
        if px == 0.0 {
            continue;
        }
        second += px
            * gaussian_expectation_128(|wv| {
                let m = gaussian_posterior_mean(s * x + wv, snr, prior_plus);
                m * m
            });
    }
    Ok(GaussianSingleSymbol {
        gexit,
        mmse: 1.0 - second,
    })
}

/// Max pointwise defect of the identity
/// `dQ/dsnr (y|x) = -(x / (2 sqrt(snr))) dQ/dy (y|x)` on a `y` grid,
/// both sides by independent finite differences of the transition density.
pub fn gaussian_two_derivatives_defect(snr: f64, y_grid: &[f64]) -> f64 {
    assert!(snr > 0.0);
    let mut worst: f64 = 0.0;
    for &x in &[1.0f64, -1.0] {
        for &y in y_grid {
            let q_of_snr = |s: f64| gaussian_pdf(y - s.sqrt() * x);
            let lhs = crate::numerics::richardson_diff(&q_of_snr, snr, 1e-5 * snr.max(1.0));
            let q_of_y = |yy: f64| gaussian_pdf(yy - snr.sqrt() * x);
            let dq_dy = crate::numerics::richardson_diff(&q_of_y, y, 1e-5);
            let rhs = -(x / (2.0 * snr.sqrt())) * dq_dy;
            worst = worst.max((lhs - rhs).abs());
        }
    }
    worst
}

/// Max pointwise defect of the identity
/// `(1/sqrt(snr)) d/dy E[x|y] = E[x^2|y] - E[x|y]^2` on a `y` grid.
pub fn gaussian_fdt_defect(snr: f64, prior_plus: f64, y_grid: &[f64]) -> f64 {
    assert!(snr > 0.0);
    let mut worst: f64 = 0.0;
    for &y in y_grid {
        let m = |yy: f64| gaussian_posterior_mean(yy, snr, prior_plus);
        let lhs = crate::numerics::richardson_diff(&m, y, 1e-5) / snr.sqrt();
        let mean = m(y);
        let rhs = 1.0 - mean * mean;
        worst = worst.max((lhs - rhs).abs());
    }
    worst
}

// ---------------------------------------------------------------------------
// Small-code corpus
// ---------------------------------------------------------------------------

/// Reproducible oracle corpus: structured codes plus seeded random matrices
/// with `n` between 4 and 12.
pub fn standard_corpus() -> Vec<(String, ParityCheckMatrix)> {
    let mut out = Vec::new();
    for n in 2..=4 {
        let rows: Vec<Vec<usize>> = (0..n - 1).map(|r| vec![r, r + 1]).collect();
        out.push((
            format!("repetition-{n}"),
            ParityCheckMatrix::new(n, rows).unwrap(),
        ));
    }
    for n in 3..=6 {
        out.push((
            format!("spc-{n}"),
            ParityCheckMatrix::new(n, vec![(0..n).collect()]).unwrap(),
        ));
    }
    out.push((
        "hamming-7-4".to_string(),
        ParityCheckMatrix::new(
            7,
            vec![vec![0, 2, 4, 6], vec![1, 2, 5, 6], vec![3, 4, 5, 6]],
        )
        .unwrap(),
    ));
    use rand::Rng;
    let mut made = 0usize;
    let mut seed = 0u64;
    while made < 50 {
        let mut rng = crate::trial_rng(0xC0DE, seed);
        seed += 1;
        let n = rng.gen_range(4..=12usize);
        let m = (n / 2).max(2);
        let mut rows = Vec::with_capacity(m);
        for _ in 0..m {
            loop {
                let row: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.45)).collect();
                if !row.is_empty() {
                    rows.push(row);
                    break;
                }
            }
        }
        let h = ParityCheckMatrix::new(n, rows).unwrap();
        // Keep the codebook within enumeration budgets.
        if (n - h.rank()) <= 8 {
            out.push((format!("random-{made}-n{n}"), h));
            made += 1;
        }
    }
    out
}

/// BEC/BSC channels exercised by the identity suite.
pub fn suite_channels() -> Vec<ChannelModel> {
    vec![
        ChannelModel::Bec { eps: 0.3 },
        ChannelModel::Bec { eps: 0.6 },
        ChannelModel::Bsc { p: 0.08 },
        ChannelModel::Bsc { p: 0.25 },
    ]
}

/// One line of the identity-suite report.
#[derive(Debug, Clone)]
pub struct SuiteRow {
    pub name: String,
    pub worst: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Runs the full oracle identity suite over the standard corpus.
///
/// Checks, for every (code, channel, position): the chain-rule decomposition
/// defect, agreement of the GEXIT formula with finite differences and with
/// the kernel form, and the per-bit GEXIT = EXIT identity on the BEC.
/// Also verifies the Gaussian relations.
pub fn run_identity_suite() -> Result<Vec<SuiteRow>> {
    let corpus = standard_corpus();
    let channels = suite_channels();
    let mut worst_decomp: f64 = 0.0;
    let mut worst_fd: f64 = 0.0;
    let mut worst_kernel: f64 = 0.0;
    let mut worst_bec_exit: f64 = 0.0;
    for (_, h) in &corpus {
        let code = SmallCode::new(h.clone())?;
        for &ch in &channels {
            let chs = vec![ch; code.n()];
            for i in 0..code.n() {
                let defect = entropy_decomposition_check(&code, &chs, i)?;
                worst_decomp = worst_decomp.max(defect);
                let formula = gexit_i_formula(&code, &chs, i)?;
                let fd = gexit_i_fd(&code, &chs, i, 1e-4)?;
                worst_fd = worst_fd.max((formula - fd).abs());
                let kernel = gexit_i_kernel(&code, &chs, i)?;
                worst_kernel = worst_kernel.max((formula - kernel).abs());
                if matches!(ch, ChannelModel::Bec { .. }) {
                    let exit = exit_i_bec(&code, &chs, i)?;
                    worst_bec_exit = worst_bec_exit.max((formula - exit).abs());
                }
            }
        }
    }
    let mut rows = vec![
        SuiteRow {
            name: "chain-rule decomposition defect".into(),
            worst: worst_decomp,
            tolerance: 1e-10,
            pass: worst_decomp <= 1e-10,
        },
        SuiteRow {
            name: "GEXIT formula vs finite difference".into(),
            worst: worst_fd,
            tolerance: 1e-6,
            pass: worst_fd <= 1e-6,
        },
        SuiteRow {
            name: "GEXIT formula vs kernel form".into(),
            worst: worst_kernel,
            tolerance: 1e-9,
            pass: worst_kernel <= 1e-9,
        },
        SuiteRow {
            name: "BEC per-bit GEXIT = EXIT".into(),
            worst: worst_bec_exit,
            tolerance: 1e-12,
            pass: worst_bec_exit <= 1e-12,
        },
    ];
    let mut worst_mmse: f64 = 0.0;
    for &snr in &[0.1, 0.5, 1.0, 2.0, 5.0] {
        let g = gaussian_single_symbol(snr, 0.5)?;
        worst_mmse = worst_mmse.max((g.gexit + 0.5 * g.mmse).abs());
    }
    rows.push(SuiteRow {
        name: "Gaussian gexit = -mmse/2".into(),
        worst: worst_mmse,
        tolerance: 1e-6,
        pass: worst_mmse <= 1e-6,
    });
    let y_grid: Vec<f64> = (-20..=20).map(|k| k as f64 * 0.25).collect();
    let td = gaussian_two_derivatives_defect(1.3, &y_grid);
    rows.push(SuiteRow {
        name: "Gaussian dQ/dsnr vs dQ/dy identity".into(),
        worst: td,
        tolerance: 1e-6,
        pass: td <= 1e-6,
    });
    let fdt = gaussian_fdt_defect(1.3, 0.5, &y_grid);
    rows.push(SuiteRow {
        name: "Gaussian posterior-variance identity".into(),
        worst: fdt,
        tolerance: 1e-6,
        pass: fdt <= 1e-6,
    });
    Ok(rows)
}

/// Average per-bit GEXIT of sampled graphs (exact oracle), used to bridge
/// finite-length values to the ensemble functional.
pub fn ensemble_gexit_average(
    spec: &EnsembleSpec,
    ch: ChannelModel,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    use rand::Rng;
    let mut acc = 0.0;
    let mut count = 0usize;
    for t in 0..samples {
        let mut rng = crate::trial_rng(seed, t as u64);
        let graph = TannerGraph::sample(spec, rng.gen())?;
        let code = SmallCode::from_graph(&graph)?;
        let chs = vec![ch; code.n()];
        for i in 0..code.n() {
            acc += gexit_i_formula(&code, &chs, i)?;
            count += 1;
        }
    }
    Ok(acc / count as f64)
}
