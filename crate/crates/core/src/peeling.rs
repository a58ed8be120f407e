//! Peeling decoder for the binary erasure channel.
//!
//! Repeatedly resolves variables attached to checks with exactly one unknown
//! neighbor until none remain; stalls on a stopping set. This is both the
//! baseline iterative decoder and the inner loop of the list decoder.

use std::collections::VecDeque;

use rand::Rng;

use crate::channel::{ChannelModel, ChannelOutput, Symbol};
use crate::degree::EnsembleSpec;
use crate::error::Error;
use crate::tanner::TannerGraph;
use crate::Result;

/// Outcome of a peeling run.
#[derive(Debug, Clone)]
pub struct PeelingResult {
    /// Per-variable assignment; `None` for unresolved positions.
    pub assignment: Vec<Option<u8>>,
    /// True when unresolved variables remain.
    pub stuck: bool,
    /// The unresolved variables (every check sees 0 or >= 2 of them).
    pub stopping_set: Vec<usize>,
}

/// Processing order for the degree-one worklist. Peeling is confluent, so
/// this only affects the trace, never the result.
#[derive(Debug, Clone, Copy)]
pub enum WorklistOrder {
    Fifo,
    Lifo,
    Shuffled(u64),
}

/// Runs the peeling decoder on BEC output.
pub fn peel(graph: &TannerGraph, out: &ChannelOutput) -> Result<PeelingResult> {
    peel_ordered(graph, out, WorklistOrder::Fifo)
}

/// Peeling with an explicit worklist discipline (used to exercise confluence).
pub fn peel_ordered(
    graph: &TannerGraph,
    out: &ChannelOutput,
    order: WorklistOrder,
) -> Result<PeelingResult> {
    if out.symbols.len() != graph.n_var() {
        return Err(Error::domain(format!(
            "output length {} does not match {} variables",
            out.symbols.len(),
            graph.n_var()
        )));
    }
    let mut assignment: Vec<Option<u8>> = Vec::with_capacity(graph.n_var());
    for s in &out.symbols {
        match *s {
            Symbol::Bit(b) => assignment.push(Some(b & 1)),
            Symbol::Erasure => assignment.push(None),
            Symbol::Real(_) => {
                return Err(Error::domain(
                    "peeling expects erasure-channel output (bits or erasures)",
                ))
            }
        }
    }

    let n_chk = graph.n_chk();
    let mut residual_deg = vec![0usize; n_chk];
    let mut parity = vec![0u8; n_chk];
    for c in 0..n_chk {
        for &e in graph.chk_edges(c) {
            let v = graph.edge(e).0;
            match assignment[v] {
                Some(b) => parity[c] ^= b,
                None => residual_deg[c] += 1,
            }
        }
    }

    let mut worklist: VecDeque<usize> = VecDeque::new();
    for c in 0..n_chk {
        if residual_deg[c] == 1 {
            worklist.push_back(c);
        } else if residual_deg[c] == 0 && parity[c] == 1 {
            return Err(Error::InconsistentInput(format!(
                "check {c} violated by the received word"
            )));
        }
    }
    let mut rng = match order {
        WorklistOrder::Shuffled(seed) => Some(crate::trial_rng(seed, 0)),
        _ => None,
    };

    while let Some(c) = pop(&mut worklist, order, rng.as_mut()) {
        if residual_deg[c] != 1 {
            continue;
        }
        let v = graph
            .chk_edges(c)
            .iter()
            .map(|&e| graph.edge(e).0)
            .find(|&v| assignment[v].is_none())
            .expect("residual degree 1 check has an unknown neighbor");
        let value = parity[c];
        assignment[v] = Some(value);
        for &e in graph.var_edges(v) {
            let c2 = graph.edge(e).1;
            residual_deg[c2] -= 1;
            parity[c2] ^= value;
            match residual_deg[c2] {
                1 => worklist.push_back(c2),
                0 => {
                    if parity[c2] == 1 {
                        return Err(Error::InconsistentInput(format!(
                            "check {c2} became violated during peeling"
                        )));
                    }
                }
                _ => {}
            }
        }
    }

    let stopping_set: Vec<usize> = (0..graph.n_var())
        .filter(|&v| assignment[v].is_none())
        .collect();
    Ok(PeelingResult {
        stuck: !stopping_set.is_empty(),
        assignment,
        stopping_set,
    })
}

fn pop(
    worklist: &mut VecDeque<usize>,
    order: WorklistOrder,
    rng: Option<&mut rand_chacha::ChaCha12Rng>,
) -> Option<usize> {
    match order {
        WorklistOrder::Fifo => worklist.pop_front(),
        WorklistOrder::Lifo => worklist.pop_back(),
        WorklistOrder::Shuffled(_) => {
            if worklist.is_empty() {
                None
            } else {
                let i = rng.unwrap().gen_range(0..worklist.len());
                worklist.swap(0, i);
                worklist.pop_front()
            }
        }
    }
}

/// Monte-Carlo residual bit erasure rate of peeling at erasure probability
/// `eps`: fraction of bits still unknown after the decoder stalls, averaged
/// over `trials` independent graph and noise realizations.
pub fn bec_bit_erasure_rate(
    spec: &EnsembleSpec,
    eps: f64,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    if trials == 0 {
        return Err(Error::domain("trials must be >= 1"));
    }
    let ch = ChannelModel::Bec { eps };
    ch.validate()?;
    let zeros = vec![0u8; spec.n];
    let mut total = 0.0;
    for t in 0..trials {
        let mut rng = crate::trial_rng(seed, t as u64);
        let graph = TannerGraph::sample(spec, rng.gen())?;
        let out = ch.transmit(&zeros, &mut rng);
        let res = peel(&graph, &out)?;
        total += res.stopping_set.len() as f64 / spec.n as f64;
    }
    Ok(total / trials as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree::DegreePolynomial;
    use crate::density;

    fn out_of(bits: &[i8]) -> ChannelOutput {
        ChannelOutput {
            symbols: bits
                .iter()
                .map(|&b| {
                    if b < 0 {
                        Symbol::Erasure
                    } else {
                        Symbol::Bit(b as u8)
                    }
                })
                .collect(),
        }
    }

    fn spec36(n: usize) -> EnsembleSpec {
        EnsembleSpec::new(
            DegreePolynomial::regular(3),
            DegreePolynomial::regular(6),
            n,
        )
        .unwrap()
    }

    #[test]
    fn no_erasures_passes_through() {
        let g = TannerGraph::from_edges(2, 1, vec![(0, 0), (1, 0)]).unwrap();
        let res = peel(&g, &out_of(&[1, 1])).unwrap();
        assert!(!res.stuck);
        assert_eq!(res.assignment, vec![Some(1), Some(1)]);
    }

    #[test]
    fn repetition_code_recovers_erased_bit() {
        let g = TannerGraph::from_edges(2, 1, vec![(0, 0), (1, 0)]).unwrap();
        let res = peel(&g, &out_of(&[0, -1])).unwrap();
        assert!(!res.stuck);
        assert_eq!(res.assignment, vec![Some(0), Some(0)]);
        let res = peel(&g, &out_of(&[-1, 1])).unwrap();
        assert_eq!(res.assignment, vec![Some(1), Some(1)]);
    }

    #[test]
    fn inconsistent_input_detected() {
        let g = TannerGraph::from_edges(2, 1, vec![(0, 0), (1, 0)]).unwrap();
        assert!(matches!(
            peel(&g, &out_of(&[0, 1])),
            Err(Error::InconsistentInput(_))
        ));
    }

    #[test]
    fn fully_erased_word_stalls_on_rank_deficient_code() {
        let g = TannerGraph::sample(&spec36(12), 3).unwrap();
        let h = g.to_parity_check();
        assert!(h.rank() < 12);
        let res = peel(&g, &out_of(&[-1; 12])).unwrap();
        assert!(res.stuck);
        assert!(!res.stopping_set.is_empty());
    }

    #[test]
    fn peeling_is_confluent() {
        // The final assignment must not depend on worklist order.
        for seed in 0..20u64 {
            let mut rng = crate::trial_rng(seed, 0);
            let g = TannerGraph::sample(&spec36(30), seed).unwrap();
            let ch = ChannelModel::Bec { eps: 0.45 };
            let out = ch.transmit(&vec![0u8; 30], &mut rng);
            let a = peel_ordered(&g, &out, WorklistOrder::Fifo).unwrap();
            let b = peel_ordered(&g, &out, WorklistOrder::Lifo).unwrap();
            let c = peel_ordered(&g, &out, WorklistOrder::Shuffled(seed + 99)).unwrap();
            assert_eq!(a.assignment, b.assignment);
            assert_eq!(a.assignment, c.assignment);
        }
    }

    #[test]
    fn all_zero_symmetry_on_small_code() {
        // Stuck-set size statistics match between all-zero transmission and a
        // random codeword of the same graph.
        let spec = spec36(24);
        let eps = 0.5;
        let trials = 400;
        let mut zero_sizes = 0usize;
        let mut word_sizes = 0usize;
        for t in 0..trials {
            let mut rng = crate::trial_rng(77, t);
            let g = TannerGraph::sample(&spec, rng.gen()).unwrap();
            let h = g.to_parity_check();
            let words = h.enumerate_codewords(1 << 14).unwrap_or_default();
            let ch = ChannelModel::Bec { eps };
            let zero = vec![0u8; 24];
            let out = ch.transmit(&zero, &mut rng);
            zero_sizes += peel(&g, &out).unwrap().stopping_set.len();
            if !words.is_empty() {
                let w = &words[rng.gen_range(0..words.len())];
                let out = ch.transmit(&w.to_bits(), &mut rng);
                word_sizes += peel(&g, &out).unwrap().stopping_set.len();
            }
        }
        let a = zero_sizes as f64 / trials as f64;
        let b = word_sizes as f64 / trials as f64;
        // Identical distributions; allow generous Monte-Carlo slack.
        assert!((a - b).abs() < 0.8, "all-zero {a} vs random codeword {b}");
    }

    #[test]
    fn erasure_rate_extremes_and_fixed_point() {
        let spec = spec36(1000);
        assert_eq!(bec_bit_erasure_rate(&spec, 0.0, 3, 1).unwrap(), 0.0);
        assert!(bec_bit_erasure_rate(&spec, 0.0, 0, 1).is_err());
        // Above threshold the residual fraction approaches
        // Lambda(1 - rho(1 - x*)) node-wise.
        let spec = spec36(20_000);
        let rate = bec_bit_erasure_rate(&spec, 0.47, 3, 7).unwrap();
        let x = density::bec_fixed_point(&spec.lambda, &spec.rho, 0.47, 1e-13);
        let predicted = 0.47
            * spec
                .lambda
                .node_perspective()
                .eval(1.0 - spec.rho.eval(1.0 - x).unwrap())
                .unwrap();
        assert!(
            (rate - predicted).abs() < 0.02,
            "measured {rate}, predicted {predicted}"
        );
    }

    #[test]
    fn erasure_rate_below_threshold_vanishes() {
        let spec = spec36(10_000);
        let rate = bec_bit_erasure_rate(&spec, 0.40, 5, 11).unwrap();
        assert!(rate < 1e-2, "residual rate {rate} at eps = 0.40");
    }
}
