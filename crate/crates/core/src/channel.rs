//! Memoryless binary-input channel models.
//!
//! Three symmetric channels are supported: the binary erasure channel, the
//! binary symmetric channel and the binary-input AWGN channel. Every model
//! exposes the unified noise parameter `w` (channel entropy in bits, one
//! minus capacity) and the derivative of its transition probabilities with
//! respect to `w`, which the GEXIT machinery consumes.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Error;
use crate::numerics::{gaussian_expectation, h2, h2_prime, richardson_diff};
use crate::Result;

/// One received symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Symbol {
    /// A hard bit (BEC and BSC outputs).
    Bit(u8),
    /// The erasure mark.
    Erasure,
    /// A real-valued sample (BiAWGN output).
    Real(f64),
}

/// A received word.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelOutput {
    pub symbols: Vec<Symbol>,
}

impl ChannelOutput {
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// A memoryless binary-input symmetric channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelModel {
    /// Erasure probability `eps`.
    Bec { eps: f64 },
    /// Flip probability `p`.
    Bsc { p: f64 },
    /// `Y = sqrt(snr) * X + W` with standard Gaussian `W` and inputs
    /// mapped `0 -> +1`, `1 -> -1`.
    BiAwgn { snr: f64 },
}

impl ChannelModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ChannelModel::Bec { eps } => {
                if !(0.0..=1.0).contains(&eps) {
                    return Err(Error::domain(format!("erasure probability {eps}")));
                }
            }
            ChannelModel::Bsc { p } => {
                if !(0.0..=0.5).contains(&p) {
                    return Err(Error::domain(format!("flip probability {p} outside [0, 1/2]")));
                }
            }
            ChannelModel::BiAwgn { snr } => {
                if !(snr >= 0.0 && snr.is_finite()) {
                    return Err(Error::domain(format!("snr {snr} must be nonnegative")));
                }
            }
        }
        Ok(())
    }

    /// Transmits a codeword, corrupting each bit independently.
    pub fn transmit<R: Rng>(&self, bits: &[u8], rng: &mut R) -> ChannelOutput {
        let symbols = bits
            .iter()
            .map(|&b| match *self {
                ChannelModel::Bec { eps } => {
                    if rng.gen::<f64>() < eps {
                        Symbol::Erasure
                    } else {
                        Symbol::Bit(b)
                    }
                }
                ChannelModel::Bsc { p } => {
                    if rng.gen::<f64>() < p {
                        Symbol::Bit(b ^ 1)
                    } else {
                        Symbol::Bit(b)
                    }
                }
                ChannelModel::BiAwgn { snr } => {
                    let x = if b == 0 { 1.0 } else { -1.0 };
                    let w: f64 = StandardNormal.sample(rng);
                    Symbol::Real(snr.sqrt() * x + w)
                }
            })
            .collect();
        ChannelOutput { symbols }
    }

    /// Transmits with a dedicated seeded stream.
    pub fn transmit_seeded(&self, bits: &[u8], seed: u64) -> ChannelOutput {
        let mut rng = crate::trial_rng(seed, 0);
        self.transmit(bits, &mut rng)
    }

    /// Log-likelihood ratio `ln Q(y|0)/Q(y|1)` of a received symbol.
    pub fn llr(&self, y: Symbol) -> f64 {
        match (*self, y) {
            (ChannelModel::Bec { .. }, Symbol::Bit(0)) => f64::INFINITY,
            (ChannelModel::Bec { .. }, Symbol::Bit(_)) => f64::NEG_INFINITY,
            (ChannelModel::Bec { .. }, Symbol::Erasure) => 0.0,
            (ChannelModel::Bsc { p }, Symbol::Bit(b)) => {
                let mag = ((1.0 - p) / p).ln();
                if b == 0 {
                    mag
                } else {
                    -mag
                }
            }
            (ChannelModel::BiAwgn { snr }, Symbol::Real(y)) => 2.0 * snr.sqrt() * y,
            _ => panic!("symbol does not belong to this channel's alphabet"),
        }
    }

    /// The unified noise parameter `w`: channel entropy in bits.
    pub fn entropy_param(&self) -> f64 {
        match *self {
            ChannelModel::Bec { eps } => eps,
            ChannelModel::Bsc { p } => h2(p),
            ChannelModel::BiAwgn { snr } => 1.0 - biawgn_capacity(snr),
        }
    }

    /// Transition probability `Q(y|x)` (a density for the BiAWGN).
    pub fn transition_prob(&self, y: Symbol, x: u8) -> f64 {
        match (*self, y) {
            (ChannelModel::Bec { eps }, Symbol::Bit(b)) => {
                if b == x {
                    1.0 - eps
                } else {
                    0.0
                }
            }
            (ChannelModel::Bec { eps }, Symbol::Erasure) => eps,
            (ChannelModel::Bsc { p }, Symbol::Bit(b)) => {
                if b == x {
                    1.0 - p
                } else {
                    p
                }
            }
            (ChannelModel::BiAwgn { snr }, Symbol::Real(y)) => {
                let center = snr.sqrt() * if x == 0 { 1.0 } else { -1.0 };
                gaussian_pdf(y - center)
            }
            _ => panic!("symbol does not belong to this channel's alphabet"),
        }
    }

    /// Derivative `dQ(y|x)/dw` of the transition probability with respect to
    /// the entropy parameter.
    pub fn transition_derivative(&self, y: Symbol, x: u8) -> Result<f64> {
        match (*self, y) {
            (ChannelModel::Bec { .. }, Symbol::Bit(b)) => Ok(if b == x { -1.0 } else { 0.0 }),
            (ChannelModel::Bec { .. }, Symbol::Erasure) => Ok(1.0),
            (ChannelModel::Bsc { p }, Symbol::Bit(b)) => {
                if p == 0.5 {
                    return Err(Error::Singular(
                        "dw/dp vanishes at p = 1/2".to_string(),
                    ));
                }
                // dp/dw with w = h2(p) in bits.
                let dp_dw = if p == 0.0 { 0.0 } else { 1.0 / h2_prime(p) };
                Ok(if b == x { -dp_dw } else { dp_dw })
            }
            (ChannelModel::BiAwgn { snr }, Symbol::Real(yv)) => {
                if snr <= 0.0 {
                    return Err(Error::Singular(
                        "BiAWGN transition derivative undefined at snr = 0".to_string(),
                    ));
                }
                let xt = if x == 0 { 1.0 } else { -1.0 };
                let q = gaussian_pdf(yv - snr.sqrt() * xt);
                let dq_dsnr = q * (yv - snr.sqrt() * xt) * xt / (2.0 * snr.sqrt());
                // dw/dsnr < 0; numeric inverse of the capacity derivative.
                let dw_dsnr = richardson_diff(&|s: f64| 1.0 - biawgn_capacity(s.max(0.0)), snr, (snr * 1e-4).max(1e-7));
                Ok(dq_dsnr / dw_dsnr)
            }
            _ => panic!("symbol does not belong to this channel's alphabet"),
        }
    }

    /// Discrete output alphabet (BEC and BSC only).
    pub fn output_alphabet(&self) -> Option<Vec<Symbol>> {
        match *self {
            ChannelModel::Bec { .. } => {
                Some(vec![Symbol::Bit(0), Symbol::Bit(1), Symbol::Erasure])
            }
            ChannelModel::Bsc { .. } => Some(vec![Symbol::Bit(0), Symbol::Bit(1)]),
            ChannelModel::BiAwgn { .. } => None,
        }
    }

    /// Parses channel spec strings: `bec:0.47`, `bsc:0.1`, `biawgn:snr=1.2`,
    /// `biawgn:w=0.5`.
    pub fn parse(input: &str) -> Result<Self> {
        let t = input.trim();
        let (kind, rest) = t
            .split_once(':')
            .ok_or_else(|| Error::parse(1, "channel spec must be `kind:param`"))?;
        let model = match kind.trim() {
            "bec" => ChannelModel::Bec {
                eps: parse_float(rest)?,
            },
            "bsc" => ChannelModel::Bsc {
                p: parse_float(rest)?,
            },
            "biawgn" => {
                let (key, value) = rest
                    .split_once('=')
                    .ok_or_else(|| Error::parse(1, "biawgn takes `snr=<v>` or `w=<v>`"))?;
                let v = parse_float(value)?;
                match key.trim() {
                    "snr" => ChannelModel::BiAwgn { snr: v },
                    "w" => {
                        if !(0.0..=1.0).contains(&v) {
                            return Err(Error::parse(1, "biawgn entropy must be in [0,1]"));
                        }
                        ChannelModel::BiAwgn {
                            snr: biawgn_snr_for_entropy(v),
                        }
                    }
                    other => {
                        return Err(Error::parse(1, format!("unknown biawgn parameter `{other}`")))
                    }
                }
            }
            other => return Err(Error::parse(1, format!("unknown channel kind `{other}`"))),
        };
        model.validate().map_err(|e| Error::parse(1, e.to_string()))?;
        Ok(model)
    }
}

fn parse_float(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::parse(1, format!("bad number `{s}`")))
}

#[inline]
pub(crate) fn gaussian_pdf(t: f64) -> f64 {
    (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Capacity of the binary-input AWGN channel in bits, by Gauss-Hermite
/// quadrature of `1 - E log2(1 + exp(-2 snr - 2 sqrt(snr) W))`.
pub fn biawgn_capacity(snr: f64) -> f64 {
    if snr == 0.0 {
        return 0.0;
    }
    let s = snr.sqrt();
    1.0 - gaussian_expectation(|w| {
        let e = -2.0 * snr - 2.0 * s * w;
        log2_1p_exp(e)
    })
}

/// `log2(1 + exp(e))` without overflow.
fn log2_1p_exp(e: f64) -> f64 {
    if e > 35.0 {
        e / std::f64::consts::LN_2
    } else {
        e.exp().ln_1p() / std::f64::consts::LN_2
    }
}

/// Inverts `snr -> 1 - C(snr)` by bisection.
pub fn biawgn_snr_for_entropy(w: f64) -> f64 {
    if w >= 1.0 {
        return 0.0;
    }
    let mut hi = 1.0;
    while 1.0 - biawgn_capacity(hi) > w {
        hi *= 2.0;
        if hi > 1e9 {
            break;
        }
    }
    crate::numerics::bisect(&|s: f64| 1.0 - biawgn_capacity(s) - w, 0.0, hi, 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn transmit_extremes() {
        let bits = vec![0, 1, 1, 0, 1];
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(1);
        let out = ChannelModel::Bec { eps: 0.0 }.transmit(&bits, &mut rng);
        let expect: Vec<Symbol> = bits.iter().map(|&b| Symbol::Bit(b)).collect();
        assert_eq!(out.symbols, expect);
        let out = ChannelModel::Bec { eps: 1.0 }.transmit(&bits, &mut rng);
        assert!(out.symbols.iter().all(|&s| s == Symbol::Erasure));
    }

    #[test]
    fn bsc_half_is_useless() {
        // At p = 1/2 the output is independent of the input.
        let n = 100_000;
        let zeros = vec![0u8; n];
        let ones = vec![1u8; n];
        let ch = ChannelModel::Bsc { p: 0.5 };
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(2);
        let count_ones = |out: &ChannelOutput| {
            out.symbols
                .iter()
                .filter(|&&s| s == Symbol::Bit(1))
                .count() as f64
        };
        let a = count_ones(&ch.transmit(&zeros, &mut rng)) / n as f64;
        let b = count_ones(&ch.transmit(&ones, &mut rng)) / n as f64;
        // Both should be 1/2 within ~4 sigma = 4 * 0.5/sqrt(n).
        let sigma = 0.5 / (n as f64).sqrt();
        assert!((a - 0.5).abs() < 4.0 * sigma);
        assert!((b - 0.5).abs() < 4.0 * sigma);
    }

    #[test]
    fn llr_examples() {
        let ch = ChannelModel::Bsc { p: 0.1 };
        assert!((ch.llr(Symbol::Bit(0)) - 9.0_f64.ln()).abs() < 1e-12);
        assert!((ch.llr(Symbol::Bit(1)) + 9.0_f64.ln()).abs() < 1e-12);
        assert_eq!(ChannelModel::Bec { eps: 0.3 }.llr(Symbol::Erasure), 0.0);
        assert_eq!(
            ChannelModel::Bec { eps: 0.3 }.llr(Symbol::Bit(0)),
            f64::INFINITY
        );
        let ch = ChannelModel::BiAwgn { snr: 1.0 };
        assert!((ch.llr(Symbol::Real(0.5)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_param_examples() {
        assert_eq!(ChannelModel::Bec { eps: 0.3 }.entropy_param(), 0.3);
        assert!((ChannelModel::Bsc { p: 0.5 }.entropy_param() - 1.0).abs() < 1e-14);
        assert!(ChannelModel::BiAwgn { snr: 1e4 }.entropy_param() < 1e-6);
        assert!((ChannelModel::BiAwgn { snr: 0.0 }.entropy_param() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn entropy_param_monotone_in_native_noise() {
        let mut prev = -1.0;
        for i in 0..=20 {
            let eps = i as f64 / 20.0;
            let w = ChannelModel::Bec { eps }.entropy_param();
            assert!(w > prev);
            prev = w;
        }
        let mut prev = -1.0;
        for i in 0..=20 {
            let p = i as f64 / 40.0;
            let w = ChannelModel::Bsc { p }.entropy_param();
            assert!(w > prev);
            prev = w;
        }
        // For the BiAWGN the natural noise measure is 1/snr: w decreases in snr.
        let mut prev = 2.0;
        for snr in [0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 20.0] {
            let w = ChannelModel::BiAwgn { snr }.entropy_param();
            assert!(w < prev);
            prev = w;
        }
    }

    #[test]
    fn transition_derivative_examples() {
        let bec = ChannelModel::Bec { eps: 0.4 };
        assert_eq!(bec.transition_derivative(Symbol::Erasure, 0).unwrap(), 1.0);
        assert_eq!(bec.transition_derivative(Symbol::Bit(1), 0).unwrap(), 0.0);
        assert_eq!(bec.transition_derivative(Symbol::Bit(0), 0).unwrap(), -1.0);

        let bsc = ChannelModel::Bsc { p: 0.1 };
        let s: f64 = bsc
            .output_alphabet()
            .unwrap()
            .iter()
            .map(|&y| bsc.transition_derivative(y, 0).unwrap())
            .sum();
        assert!(s.abs() < 1e-14, "derivative of normalization must vanish");
        assert!(matches!(
            ChannelModel::Bsc { p: 0.5 }.transition_derivative(Symbol::Bit(0), 0),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn transition_derivative_sums_to_zero_all_channels() {
        for ch in [ChannelModel::Bec { eps: 0.25 }, ChannelModel::Bsc { p: 0.2 }] {
            for x in [0, 1] {
                let s: f64 = ch
                    .output_alphabet()
                    .unwrap()
                    .iter()
                    .map(|&y| ch.transition_derivative(y, x).unwrap())
                    .sum();
                assert!(s.abs() < 1e-12);
                let q: f64 = ch
                    .output_alphabet()
                    .unwrap()
                    .iter()
                    .map(|&y| ch.transition_prob(y, x))
                    .sum();
                assert!((q - 1.0).abs() < 1e-14);
            }
        }
        // BiAWGN: integrate dQ/dw over y by quadrature around both centers.
        let ch = ChannelModel::BiAwgn { snr: 0.7 };
        for x in [0, 1] {
            let s = crate::numerics::integrate(
                &|y| ch.transition_derivative(Symbol::Real(y), x).unwrap(),
                -12.0,
                12.0,
                1e-10,
            );
            assert!(s.abs() < 1e-8, "integral of dQ/dw = {s}");
        }
    }

    #[test]
    fn channel_symmetry() {
        let bsc = ChannelModel::Bsc { p: 0.2 };
        assert_eq!(
            bsc.transition_prob(Symbol::Bit(0), 0),
            bsc.transition_prob(Symbol::Bit(1), 1)
        );
        let bec = ChannelModel::Bec { eps: 0.3 };
        assert_eq!(
            bec.transition_prob(Symbol::Erasure, 0),
            bec.transition_prob(Symbol::Erasure, 1)
        );
        let awgn = ChannelModel::BiAwgn { snr: 1.3 };
        for y in [-2.0, -0.5, 0.0, 0.7, 3.1] {
            let a = awgn.transition_prob(Symbol::Real(y), 0);
            let b = awgn.transition_prob(Symbol::Real(-y), 1);
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn capacity_quadrature() {
        assert_eq!(biawgn_capacity(0.0), 0.0);
        assert!(biawgn_capacity(100.0) > 0.999999);
        // Monotone increasing in snr.
        let mut prev = -1.0;
        for snr in [0.0, 0.2, 0.5, 1.0, 2.0, 4.0] {
            let c = biawgn_capacity(snr);
            assert!(c > prev);
            prev = c;
        }
        // Inversion round trip.
        for w in [0.1, 0.3, 0.5, 0.9] {
            let snr = biawgn_snr_for_entropy(w);
            assert!((1.0 - biawgn_capacity(snr) - w).abs() < 1e-9);
        }
    }

    #[test]
    fn parse_channel_specs() {
        assert_eq!(
            ChannelModel::parse("bec:0.47").unwrap(),
            ChannelModel::Bec { eps: 0.47 }
        );
        assert_eq!(
            ChannelModel::parse("bsc:0.1").unwrap(),
            ChannelModel::Bsc { p: 0.1 }
        );
        assert_eq!(
            ChannelModel::parse("biawgn:snr=1.2").unwrap(),
            ChannelModel::BiAwgn { snr: 1.2 }
        );
        let ch = ChannelModel::parse("biawgn:w=0.5").unwrap();
        assert!((ch.entropy_param() - 0.5).abs() < 1e-9);
        assert!(ChannelModel::parse("bec:1.5").is_err());
        assert!(ChannelModel::parse("foo:0.1").is_err());
        assert!(ChannelModel::parse("bec").is_err());
        assert!(ChannelModel::parse("biawgn:sigma=1").is_err());
    }
}
