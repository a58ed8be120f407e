//! Complete list decoding over the erasure channel with exact entropy
//! accounting.
//!
//! When peeling stalls, the decoder guesses a uniformly random unknown bit.
//! Conceptually every running copy of the decoder forks in two; here the fork
//! is represented symbolically: each bit value is a GF(2) affine expression
//! over the guess variables, so `2^h` simultaneous copies cost polynomial
//! space. Whenever a variable acquires a second determination (a check of
//! residual degree zero with nonzero affine parity), the resulting affine
//! constraint is reduced against a running row-echelon basis: an independent
//! constraint halves the surviving copies, a dependent one is discarded, and
//! a constraint reducing to `1 = 0` is impossible for genuine erasure-channel
//! output. The alive-copy entropy is `h = guesses - rank` at every step.

use std::collections::VecDeque;

use rand::Rng;

use crate::channel::{ChannelModel, ChannelOutput, Symbol};
use crate::degree::EnsembleSpec;
use crate::error::Error;
use crate::gf2::BitVec;
use crate::tanner::TannerGraph;
use crate::Result;

/// A GF(2) affine form `c ^ g_{j1} ^ g_{j2} ^ ...` over guess variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineExpr {
    constant: bool,
    mask: Vec<u64>,
}

impl AffineExpr {
    pub fn constant(value: bool) -> Self {
        AffineExpr {
            constant: value,
            mask: Vec::new(),
        }
    }

    pub fn guess(j: usize) -> Self {
        let mut e = AffineExpr::constant(false);
        e.flip_guess(j);
        e
    }

    pub fn constant_value(&self) -> bool {
        self.constant
    }

    pub fn is_constant(&self) -> bool {
        self.mask.iter().all(|&w| w == 0)
    }

    pub fn flip_guess(&mut self, j: usize) {
        let word = j / 64;
        if word >= self.mask.len() {
            self.mask.resize(word + 1, 0);
        }
        self.mask[word] ^= 1u64 << (j % 64);
    }

    pub fn contains(&self, j: usize) -> bool {
        self.mask
            .get(j / 64)
            .map_or(false, |w| (w >> (j % 64)) & 1 == 1)
    }

    pub fn xor_assign(&mut self, other: &AffineExpr) {
        if other.mask.len() > self.mask.len() {
            self.mask.resize(other.mask.len(), 0);
        }
        for (a, b) in self.mask.iter_mut().zip(&other.mask) {
            *a ^= b;
        }
        self.constant ^= other.constant;
    }

    /// Lowest guess index in the support.
    pub fn leading_guess(&self) -> Option<usize> {
        for (wi, &w) in self.mask.iter().enumerate() {
            if w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &w) in self.mask.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                out.push(wi * 64 + bits.trailing_zeros() as usize);
                bits &= bits - 1;
            }
        }
        out
    }

    /// Evaluates the expression under a full guess assignment.
    pub fn eval(&self, guesses: &[bool]) -> bool {
        let mut acc = self.constant;
        for (wi, &w) in self.mask.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                let j = wi * 64 + bits.trailing_zeros() as usize;
                acc ^= guesses[j];
                bits &= bits - 1;
            }
        }
        acc
    }
}

/// Outcome of inserting a constraint into the basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InsertOutcome {
    /// New independent constraint; the surviving-copy count halves.
    Independent,
    /// Implied by earlier constraints; discarded.
    Dependent,
    /// Reduces to `1 = 0`: the input was not a consistent channel output.
    Contradiction,
}

/// Reduced row-echelon set of affine constraints over guess variables.
#[derive(Debug, Clone, Default)]
pub struct ConstraintBasis {
    /// Rows sorted by pivot (leading guess index); each pivot appears in
    /// exactly one row.
    rows: Vec<AffineExpr>,
}

impl ConstraintBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[AffineExpr] {
        &self.rows
    }

    /// Reduces `expr` against the basis in pivot order.
    pub fn reduce(&self, expr: &mut AffineExpr) {
        for row in &self.rows {
            let pivot = row.leading_guess().expect("basis rows are nonzero");
            if expr.contains(pivot) {
                expr.xor_assign(row);
            }
        }
    }

    /// Reduces and inserts a constraint `expr = 0`.
    pub fn insert(&mut self, mut expr: AffineExpr) -> InsertOutcome {
        self.reduce(&mut expr);
        match expr.leading_guess() {
            None => {
                if expr.constant_value() {
                    InsertOutcome::Contradiction
                } else {
                    InsertOutcome::Dependent
                }
            }
            Some(pivot) => {
                for row in self.rows.iter_mut() {
                    if row.contains(pivot) {
                        row.xor_assign(&expr);
                    }
                }
                let pos = self
                    .rows
                    .binary_search_by_key(&pivot, |r| r.leading_guess().unwrap())
                    .unwrap_err();
                self.rows.insert(pos, expr);
                InsertOutcome::Independent
            }
        }
    }

    /// Guess indices that are not pivots of any row, among `n_guesses` total.
    pub fn free_guesses(&self, n_guesses: usize) -> Vec<usize> {
        let pivots: Vec<usize> = self
            .rows
            .iter()
            .map(|r| r.leading_guess().unwrap())
            .collect();
        (0..n_guesses).filter(|j| !pivots.contains(j)).collect()
    }
}

/// One point of the entropy trace: recorded after every determined bit and
/// after every guess.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    /// Number of bits determined so far (channel-known bits excluded).
    pub ell: usize,
    /// Alive-copy entropy `h = guesses - rank`.
    pub h: usize,
    pub guesses: usize,
    pub resolutions: usize,
}

/// Entropy trace of one decoding run.
#[derive(Debug, Clone, Default)]
pub struct MaxwellTrace {
    pub points: Vec<TracePoint>,
}

impl MaxwellTrace {
    pub fn peak_h(&self) -> usize {
        self.points.iter().map(|p| p.h).max().unwrap_or(0)
    }
}

/// The affine description of all codewords compatible with the received word.
#[derive(Debug, Clone)]
pub struct AffineSolution {
    /// Per-variable determination over the guess variables.
    pub determinations: Vec<AffineExpr>,
    /// Constraint rows (each must evaluate to zero).
    pub basis: ConstraintBasis,
    pub n_guesses: usize,
}

impl AffineSolution {
    /// `log2` of the compatible-list size.
    pub fn h_final(&self) -> usize {
        self.n_guesses - self.basis.rank()
    }

    /// Enumerates the explicit codeword list, free guess variables iterated
    /// through the affine determinations.
    pub fn enumerate(&self, cap: u128) -> Result<Vec<BitVec>> {
        let h = self.h_final();
        if h >= 128 || (1u128 << h) > cap {
            return Err(Error::CapExceeded {
                needed_log2: h as u32,
                cap,
            });
        }
        let free = self.basis.free_guesses(self.n_guesses);
        let mut out = Vec::with_capacity(1 << h);
        let mut guesses = vec![false; self.n_guesses];
        for assign in 0..(1u128 << h) {
            for g in guesses.iter_mut() {
                *g = false;
            }
            for (bit, &j) in free.iter().enumerate() {
                guesses[j] = (assign >> bit) & 1 == 1;
            }
            // Pivot guesses from their rows: pivot = constant ^ free part.
            for row in self.basis.rows() {
                let pivot = row.leading_guess().unwrap();
                let mut v = row.constant_value();
                for j in row.support() {
                    if j != pivot && guesses[j] {
                        v = !v;
                    }
                }
                guesses[pivot] = v;
            }
            let mut word = BitVec::zeros(self.determinations.len());
            for (i, det) in self.determinations.iter().enumerate() {
                word.set(i, det.eval(&guesses));
            }
            out.push(word);
        }
        Ok(out)
    }
}

/// Result of one list-decoding run.
#[derive(Debug, Clone)]
pub struct MaxwellResult {
    pub solution: AffineSolution,
    /// Explicit list, present iff `2^h_final <= list_cap`.
    pub list: Option<Vec<BitVec>>,
    pub trace: MaxwellTrace,
    pub total_guesses: usize,
    pub total_resolutions: usize,
}

impl MaxwellResult {
    pub fn h_final(&self) -> usize {
        self.solution.h_final()
    }
}

/// Uniform choice among the currently unknown variables.
pub fn guess_policy<R: Rng>(unknown: &[usize], rng: &mut R) -> usize {
    debug_assert!(!unknown.is_empty());
    unknown[rng.gen_range(0..unknown.len())]
}

struct DecoderState<'g> {
    graph: &'g TannerGraph,
    det: Vec<Option<AffineExpr>>,
    residual_deg: Vec<usize>,
    parity: Vec<AffineExpr>,
    worklist: VecDeque<usize>,
    unknown: Vec<usize>,
    unknown_pos: Vec<usize>,
    basis: ConstraintBasis,
    guesses: usize,
    ell: usize,
    trace: MaxwellTrace,
    record_trace: bool,
}

impl<'g> DecoderState<'g> {
    fn new(graph: &'g TannerGraph, out: &ChannelOutput, record_trace: bool) -> Result<Self> {
        if out.symbols.len() != graph.n_var() {
            return Err(Error::domain(format!(
                "output length {} does not match {} variables",
                out.symbols.len(),
                graph.n_var()
            )));
        }
        let n = graph.n_var();
        let mut det: Vec<Option<AffineExpr>> = Vec::with_capacity(n);
        let mut unknown = Vec::new();
        let mut unknown_pos = vec![usize::MAX; n];
        for (v, s) in out.symbols.iter().enumerate() {
            match *s {
                Symbol::Bit(b) => det.push(Some(AffineExpr::constant(b & 1 == 1))),
                Symbol::Erasure => {
                    unknown_pos[v] = unknown.len();
                    unknown.push(v);
                    det.push(None);
                }
                Symbol::Real(_) => {
                    return Err(Error::domain(
                        "list decoding expects erasure-channel output",
                    ))
                }
            }
        }
        let mut state = DecoderState {
            graph,
            det,
            residual_deg: vec![0; graph.n_chk()],
            parity: vec![AffineExpr::constant(false); graph.n_chk()],
            worklist: VecDeque::new(),
            unknown,
            unknown_pos,
            basis: ConstraintBasis::new(),
            guesses: 0,
            ell: 0,
            trace: MaxwellTrace::default(),
            record_trace,
        };
        for c in 0..graph.n_chk() {
            for &e in graph.chk_edges(c) {
                let v = graph.edge(e).0;
                match &state.det[v] {
                    Some(expr) => {
                        let expr = expr.clone();
                        state.parity[c].xor_assign(&expr);
                    }
                    None => state.residual_deg[c] += 1,
                }
            }
            match state.residual_deg[c] {
                1 => state.worklist.push_back(c),
                0 => {
                    if state.parity[c].constant_value() {
                        return Err(Error::InconsistentInput(format!(
                            "check {c} violated by the received word"
                        )));
                    }
                }
                _ => {}
            }
        }
        state.record();
        Ok(state)
    }

    fn record(&mut self) {
        if self.record_trace {
            self.trace.points.push(TracePoint {
                ell: self.ell,
                h: self.guesses - self.basis.rank(),
                guesses: self.guesses,
                resolutions: self.basis.rank(),
            });
        }
    }

    fn mark_known(&mut self, v: usize) {
        let pos = self.unknown_pos[v];
        let last = *self.unknown.last().unwrap();
        self.unknown.swap_remove(pos);
        if pos < self.unknown.len() {
            self.unknown_pos[last] = pos;
        }
        self.unknown_pos[v] = usize::MAX;
    }

    /// Assigns `expr` to variable `v` and propagates through its checks.
    fn determine(&mut self, v: usize, expr: AffineExpr) -> Result<()> {
        self.mark_known(v);
        self.det[v] = Some(expr);
        let expr = self.det[v].as_ref().unwrap().clone();
        for &e in self.graph.var_edges(v) {
            let c = self.graph.edge(e).1;
            self.residual_deg[c] -= 1;
            self.parity[c].xor_assign(&expr);
            match self.residual_deg[c] {
                1 => self.worklist.push_back(c),
                0 => {
                    let constraint = std::mem::replace(&mut self.parity[c], AffineExpr::constant(false));
                    match self.basis.insert(constraint) {
                        InsertOutcome::Contradiction => {
                            return Err(Error::InconsistentInput(format!(
                                "check {c} contradicts the received word"
                            )));
                        }
                        InsertOutcome::Independent | InsertOutcome::Dependent => {}
                    }
                }
                _ => {}
            }
        }
        self.ell += 1;
        self.record();
        Ok(())
    }

    /// Resolves degree-one checks until none remain.
    fn peel_to_exhaustion(&mut self) -> Result<()> {
        while let Some(c) = self.worklist.pop_front() {
            if self.residual_deg[c] != 1 {
                continue;
            }
            let v = self
                .graph
                .chk_edges(c)
                .iter()
                .map(|&e| self.graph.edge(e).0)
                .find(|&v| self.det[v].is_none())
                .expect("residual degree 1 check has an unknown neighbor");
            let expr = self.parity[c].clone();
            self.determine(v, expr)?;
        }
        Ok(())
    }
}

/// Options for [`maxwell_decode`].
#[derive(Debug, Clone, Copy)]
pub struct MaxwellOptions {
    /// Enumerate the explicit list iff its size does not exceed this cap.
    pub list_cap: u128,
    /// Record the full `(ell, h)` trace.
    pub record_trace: bool,
}

impl Default for MaxwellOptions {
    fn default() -> Self {
        MaxwellOptions {
            list_cap: 1 << 16,
            record_trace: false,
        }
    }
}

/// Runs the complete list decoder on erasure-channel output.
///
/// Alternates peeling to exhaustion with single uniformly random guesses
/// until every variable is affinely determined. The result carries the
/// affine solution space; the explicit list is enumerated only when
/// `2^h_final` fits under `opts.list_cap` (otherwise `list` is `None` and the
/// basis stands in for it).
pub fn maxwell_decode(
    graph: &TannerGraph,
    out: &ChannelOutput,
    seed: u64,
    opts: MaxwellOptions,
) -> Result<MaxwellResult> {
    let mut rng = crate::trial_rng(seed, 0);
    let mut state = DecoderState::new(graph, out, opts.record_trace)?;
    state.peel_to_exhaustion()?;
    while !state.unknown.is_empty() {
        let v = guess_policy(&state.unknown, &mut rng);
        let j = state.guesses;
        state.guesses += 1;
        state.determine(v, AffineExpr::guess(j))?;
        state.peel_to_exhaustion()?;
    }
    debug_assert!(state.residual_deg.iter().all(|&d| d == 0));
    let solution = AffineSolution {
        determinations: state.det.into_iter().map(Option::unwrap).collect(),
        basis: state.basis,
        n_guesses: state.guesses,
    };
    let list = solution.enumerate(opts.list_cap).ok();
    Ok(MaxwellResult {
        total_guesses: state.guesses,
        total_resolutions: solution.basis.rank(),
        list,
        trace: state.trace,
        solution,
    })
}

/// Monte-Carlo averages of guesses, resolutions and final entropy per bit.
#[derive(Debug, Clone, Copy)]
pub struct BalanceStats {
    pub trials: usize,
    pub mean_guesses: f64,
    pub mean_resolutions: f64,
    pub mean_h_final: f64,
    pub se_guesses: f64,
    pub se_resolutions: f64,
    pub se_h_final: f64,
}

/// Runs `trials` independent decodes of all-zero transmissions at erasure
/// probability `eps` and reports per-bit statistics.
pub fn balance_statistics(
    spec: &EnsembleSpec,
    eps: f64,
    trials: usize,
    seed: u64,
) -> Result<BalanceStats> {
    if trials == 0 {
        return Err(Error::domain("trials must be >= 1"));
    }
    let ch = ChannelModel::Bec { eps };
    ch.validate()?;
    let zeros = vec![0u8; spec.n];
    let mut g = Vec::with_capacity(trials);
    let mut r = Vec::with_capacity(trials);
    let mut h = Vec::with_capacity(trials);
    for t in 0..trials {
        let mut rng = crate::trial_rng(seed, t as u64);
        let graph = TannerGraph::sample(spec, rng.gen())?;
        let out = ch.transmit(&zeros, &mut rng);
        let res = maxwell_decode(
            &graph,
            &out,
            rng.gen(),
            MaxwellOptions {
                list_cap: 1,
                record_trace: false,
            },
        )?;
        let n = spec.n as f64;
        g.push(res.total_guesses as f64 / n);
        r.push(res.total_resolutions as f64 / n);
        h.push(res.h_final() as f64 / n);
    }
    let stats = |xs: &[f64]| {
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>()
            / (xs.len().saturating_sub(1).max(1)) as f64;
        (mean, (var / xs.len() as f64).sqrt())
    };
    let (mg, sg) = stats(&g);
    let (mr, sr) = stats(&r);
    let (mh, sh) = stats(&h);
    Ok(BalanceStats {
        trials,
        mean_guesses: mg,
        mean_resolutions: mr,
        mean_h_final: mh,
        se_guesses: sg,
        se_resolutions: sr,
        se_h_final: sh,
    })
}
