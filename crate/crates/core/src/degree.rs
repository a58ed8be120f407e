//! Degree-distribution polynomials for LDPC ensembles.
//!
//! A [`DegreePolynomial`] stores edge- or node-perspective probability masses
//! as dense coefficients indexed by the exponent: the edge-perspective pair
//! `(lambda, rho)` of a (3,6)-regular ensemble is `(x^2, x^5)`, and the
//! node-perspective variable distribution is `Lambda(x) = x^3`.

use crate::error::Error;
use crate::Result;

/// Maximum supported polynomial degree.
pub const MAX_DEGREE: usize = 64;

const NORMALIZATION_TOL: f64 = 1e-12;

/// A probability-mass polynomial `p(x) = sum_k c_k x^k` with `c_0 = 0`,
/// `c_k in [0,1]` and `sum_k c_k = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreePolynomial {
    coeffs: Vec<f64>,
}

impl DegreePolynomial {
    /// Builds a polynomial from dense coefficients indexed by exponent.
    pub fn from_coeffs(mut coeffs: Vec<f64>) -> Result<Self> {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::domain("polynomial must have degree at least 1"));
        }
        if coeffs.len() > MAX_DEGREE + 1 {
            return Err(Error::domain(format!(
                "polynomial degree {} exceeds maximum {}",
                coeffs.len() - 1,
                MAX_DEGREE
            )));
        }
        if coeffs[0] != 0.0 {
            return Err(Error::domain("constant coefficient must be zero"));
        }
        let mut total = 0.0;
        for (k, &c) in coeffs.iter().enumerate() {
            if !(0.0..=1.0).contains(&c) || !c.is_finite() {
                return Err(Error::domain(format!(
                    "coefficient of x^{k} is {c}, outside [0,1]"
                )));
            }
            total += c;
        }
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::domain(format!(
                "coefficients sum to {total}, expected 1"
            )));
        }
        Ok(DegreePolynomial { coeffs })
    }

    /// The monomial `x^k`.
    pub fn monomial(k: usize) -> Self {
        assert!(k >= 1 && k <= MAX_DEGREE);
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = 1.0;
        DegreePolynomial { coeffs }
    }

    /// Edge-perspective polynomial of an `(l, r)`-regular ensemble side with
    /// node degree `d`: `x^(d-1)`.
    pub fn regular(node_degree: usize) -> Self {
        assert!(node_degree >= 2);
        Self::monomial(node_degree - 1)
    }

    /// Dense coefficients indexed by exponent.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Largest exponent carrying mass.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Evaluates the polynomial at `x in [0,1]`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::domain(format!("eval argument {x} outside [0,1]")));
        }
        Ok(self.eval_unchecked(x))
    }

    /// Horner evaluation without the domain check; used by inner loops that
    /// already guarantee `x in [0,1]`.
    pub fn eval_unchecked(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Derivative value `p'(x)`.
    pub fn derivative(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for k in (1..self.coeffs.len()).rev() {
            acc = acc * x + k as f64 * self.coeffs[k];
        }
        acc
    }

    /// `int_0^1 p(x) dx = sum_k c_k / (k+1)`.
    pub fn integral(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| c / (k + 1) as f64)
            .sum()
    }

    /// Average node degree implied by an edge-perspective polynomial,
    /// `1 / int_0^1 p`.
    pub fn average_degree(&self) -> f64 {
        1.0 / self.integral()
    }

    /// Converts an edge-perspective polynomial to node perspective:
    /// the degree-`d` node mass is `(c_{d-1} / d) / int_0^1 p`.
    pub fn node_perspective(&self) -> DegreePolynomial {
        let norm = self.integral();
        let mut coeffs = vec![0.0; self.coeffs.len() + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            let d = k + 1;
            coeffs[d] = c / d as f64 / norm;
        }
        DegreePolynomial::from_coeffs(coeffs).expect("node perspective preserves validity")
    }

    /// Converts a node-perspective polynomial back to edge perspective:
    /// the mass on `x^(d-1)` is `d * C_d / p'(1)`.
    pub fn edge_perspective(&self) -> DegreePolynomial {
        let norm = self.derivative(1.0);
        let mut coeffs = vec![0.0; self.coeffs.len() - 1];
        for (d, &c) in self.coeffs.iter().enumerate().skip(1) {
            coeffs[d - 1] = d as f64 * c / norm;
        }
        DegreePolynomial::from_coeffs(coeffs).expect("edge perspective preserves validity")
    }

    /// Parses strings such as `"x^2"`, `"0.5 x^2 + 0.5 x^4"`, `"0.5x + 0.5x^3"`.
    pub fn parse(input: &str) -> Result<Self> {
        let trimmed = input.trim();
        if trimmed.is_empty() {
            return Err(Error::parse(1, "empty polynomial"));
        }
        let mut coeffs: Vec<f64> = Vec::new();
        for term in trimmed.split('+') {
            let (coeff, exp) = parse_term(term)?;
            if exp > MAX_DEGREE {
                return Err(Error::parse(1, format!("exponent {exp} exceeds {MAX_DEGREE}")));
            }
            if coeffs.len() <= exp {
                coeffs.resize(exp + 1, 0.0);
            }
            coeffs[exp] += coeff;
        }
        DegreePolynomial::from_coeffs(coeffs)
    }
}

/// Parses one `+`-separated term: `0.5 x^2`, `x^5`, `0.25x`, `x`.
fn parse_term(term: &str) -> Result<(f64, usize)> {
    let t: String = term.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(Error::parse(1, "empty term in polynomial"));
    }
    let (coeff_str, rest) = match t.find('x') {
        Some(pos) => (&t[..pos], &t[pos + 1..]),
        None => (&t[..], ""),
    };
    let coeff_str = coeff_str.strip_suffix('*').unwrap_or(coeff_str);
    let coeff = if coeff_str.is_empty() {
        if t.contains('x') {
            1.0
        } else {
            return Err(Error::parse(1, format!("term `{term}` has no coefficient")));
        }
    } else {
        coeff_str
            .parse::<f64>()
            .map_err(|_| Error::parse(1, format!("bad coefficient `{coeff_str}`")))?
    };
    let exp = if !t.contains('x') {
        0
    } else if rest.is_empty() {
        1
    } else {
        let e = rest
            .strip_prefix('^')
            .ok_or_else(|| Error::parse(1, format!("expected `^` in term `{term}`")))?;
        e.parse::<usize>()
            .map_err(|_| Error::parse(1, format!("bad exponent `{e}`")))?
    };
    Ok((coeff, exp))
}

impl std::fmt::Display for DegreePolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c != 1.0 {
                write!(f, "{c}")?;
                write!(f, " ")?;
            }
            match k {
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

/// Design rate `R = 1 - int(rho) / int(lambda)`.
pub fn design_rate(lambda: &DegreePolynomial, rho: &DegreePolynomial) -> Result<f64> {
    let rate = 1.0 - rho.integral() / lambda.integral();
    if rate <= 0.0 {
        return Err(Error::domain(format!("design rate {rate} is not positive")));
    }
    Ok(rate)
}

/// An `LDPC(n, lambda, rho)` ensemble description.
#[derive(Debug, Clone)]
pub struct EnsembleSpec {
    pub lambda: DegreePolynomial,
    pub rho: DegreePolynomial,
    pub n: usize,
}

impl EnsembleSpec {
    pub fn new(lambda: DegreePolynomial, rho: DegreePolynomial, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("block length must be positive"));
        }
        design_rate(&lambda, &rho)?;
        let spec = EnsembleSpec { lambda, rho, n };
        spec.degree_sequences()?;
        Ok(spec)
    }

    /// Parses an ensemble pair string such as `"(x^2,x^5)"` or
    /// `"(0.5x+0.5x^3, x^5)"`.
    pub fn parse_pair(input: &str) -> Result<(DegreePolynomial, DegreePolynomial)> {
        let t = input.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::parse(1, "ensemble must be written as (lambda,rho)"))?;
        let mut parts = inner.splitn(2, ',');
        let lam = parts
            .next()
            .ok_or_else(|| Error::parse(1, "missing lambda"))?;
        let rho = parts.next().ok_or_else(|| Error::parse(1, "missing rho"))?;
        Ok((DegreePolynomial::parse(lam)?, DegreePolynomial::parse(rho)?))
    }

    /// Integer node-degree sequences for both sides.
    ///
    /// Variable counts come from largest-remainder rounding of `n * Lambda_d`,
    /// which fixes a tentative socket total; check counts are rounded the same
    /// way. When the two socket totals cannot be reconciled exactly, whole
    /// nodes are moved between support degrees (smallest perturbation first,
    /// node totals preserved on both sides). Errors if no reconciliation
    /// within the supports exists.
    pub fn degree_sequences(&self) -> Result<DegreeSequences> {
        let var_targets: Vec<(usize, f64)> = self
            .lambda
            .node_perspective()
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0.0)
            .map(|(d, &c)| (d, c * self.n as f64))
            .collect();
        let var_counts0 = largest_remainder(&var_targets, self.n);
        let edges0: usize = var_counts0.iter().map(|&(d, c)| d * c).sum();
        let max_shift = (self.lambda.degree() + self.rho.degree() + 2) as isize;

        for delta in interleaved_deltas(max_shift) {
            let target = edges0 as isize + delta;
            if target <= 0 {
                continue;
            }
            let target = target as usize;
            let mut var_counts = var_counts0.clone();
            if repair_edge_total(&mut var_counts, target).is_err() {
                continue;
            }
            let chk_targets: Vec<(usize, f64)> = self
                .rho
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0.0)
                .map(|(k, &c)| (k + 1, c * target as f64 / (k + 1) as f64))
                .collect();
            let m_target: f64 = chk_targets.iter().map(|&(_, t)| t).sum();
            let m0 = m_target.round().max(1.0) as usize;
            for m in [m0, m0.saturating_sub(1).max(1), m0 + 1] {
                let mut chk_counts = largest_remainder(&chk_targets, m);
                if repair_edge_total(&mut chk_counts, target).is_ok() {
                    return Ok(DegreeSequences {
                        var_counts,
                        chk_counts,
                        edges: target,
                    });
                }
            }
        }
        Err(Error::EdgeCountMismatch {
            var_edges: edges0,
            chk_edges: 0,
        })
    }

    pub fn design_rate(&self) -> f64 {
        design_rate(&self.lambda, &self.rho).expect("validated at construction")
    }
}

/// Node-degree multiplicities realizing an ensemble at finite length.
#[derive(Debug, Clone)]
pub struct DegreeSequences {
    /// `(degree, node count)` for variables.
    pub var_counts: Vec<(usize, usize)>,
    /// `(degree, node count)` for checks.
    pub chk_counts: Vec<(usize, usize)>,
    /// Total number of edges (sockets on each side).
    pub edges: usize,
}

/// Largest-remainder apportionment of `total` units to the given targets.
fn largest_remainder(targets: &[(usize, f64)], total: usize) -> Vec<(usize, usize)> {
    let mut counts: Vec<(usize, usize)> = targets
        .iter()
        .map(|&(d, t)| (d, t.floor() as usize))
        .collect();
    let assigned: usize = counts.iter().map(|&(_, c)| c).sum();
    let mut order: Vec<usize> = (0..targets.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = targets[a].1.fract();
        let fb = targets[b].1.fract();
        fb.partial_cmp(&fa).unwrap()
    });
    let mut remaining = total.saturating_sub(assigned);
    for idx in order {
        if remaining == 0 {
            break;
        }
        counts[idx].1 += 1;
        remaining -= 1;
    }
    counts.retain(|&(_, c)| c > 0);
    counts
}

/// Iterates `0, -1, 1, -2, 2, ...` out to `+-max`.
fn interleaved_deltas(max: isize) -> impl Iterator<Item = isize> {
    std::iter::once(0).chain((1..=max).flat_map(|k| [-k, k]))
}

/// Moves whole nodes between support degrees until the socket total hits
/// `edges`, keeping the node total fixed. Greedy largest-useful-gap moves.
fn repair_edge_total(counts: &mut Vec<(usize, usize)>, edges: usize) -> Result<()> {
    let mut diff = edges as isize - counts.iter().map(|&(d, c)| (d * c) as isize).sum::<isize>();
    while diff != 0 {
        let mut best: Option<(usize, usize, isize)> = None;
        for i in 0..counts.len() {
            if counts[i].1 == 0 {
                continue;
            }
            for j in 0..counts.len() {
                let gap = counts[j].0 as isize - counts[i].0 as isize;
                if gap == 0 || gap.signum() != diff.signum() || gap.abs() > diff.abs() {
                    continue;
                }
                if best.map_or(true, |(_, _, g)| gap.abs() > g.abs()) {
                    best = Some((i, j, gap));
                }
            }
        }
        match best {
            Some((i, j, gap)) => {
                counts[i].1 -= 1;
                counts[j].1 += 1;
                diff -= gap;
            }
            None => {
                return Err(Error::EdgeCountMismatch {
                    var_edges: edges,
                    chk_edges: (edges as isize - diff) as usize,
                });
            }
        }
    }
    counts.retain(|&(_, c)| c > 0);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(s: &str) -> DegreePolynomial {
        DegreePolynomial::parse(s).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(poly("x^2").eval(0.5).unwrap(), 0.25);
        assert!((poly("x^5").eval(0.8).unwrap() - 0.32768).abs() < 1e-15);
        for p in [poly("x^2"), poly("0.5x + 0.5x^3"), poly("x^5")] {
            assert!((p.eval(1.0).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!(poly("x^2").eval(1.5).is_err());
        assert!(poly("x^2").eval(-0.1).is_err());
    }

    #[test]
    fn node_perspective_examples() {
        assert_eq!(poly("x^2").node_perspective(), poly("x^3"));
        assert_eq!(poly("x").node_perspective(), poly("x^2"));
        let lam = poly("0.5x + 0.5x^3");
        let nodes = lam.node_perspective();
        assert!((nodes.coeffs()[2] - 2.0 / 3.0).abs() < 1e-12);
        assert!((nodes.coeffs()[4] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn node_edge_round_trip() {
        for s in ["x^2", "0.5x + 0.5x^3", "0.25x + 0.25x^2 + 0.5x^7"] {
            let lam = poly(s);
            let back = lam.node_perspective().edge_perspective();
            for (a, b) in lam.coeffs().iter().zip(back.coeffs()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn design_rate_examples() {
        assert!((design_rate(&poly("x^2"), &poly("x^5")).unwrap() - 0.5).abs() < 1e-15);
        assert!((design_rate(&poly("x^2"), &poly("x^3")).unwrap() - 0.25).abs() < 1e-15);
        assert!((design_rate(&poly("x^3"), &poly("x^7")).unwrap() - 0.5).abs() < 1e-15);
        // Regular pairs give exactly 1 - l/r.
        for (l, r) in [(3, 6), (3, 4), (4, 8), (2, 4), (2, 6), (5, 10)] {
            let lam = DegreePolynomial::regular(l);
            let rho = DegreePolynomial::regular(r);
            let rate = design_rate(&lam, &rho).unwrap();
            assert!((rate - (1.0 - l as f64 / r as f64)).abs() < 1e-15);
        }
        assert!(design_rate(&poly("x^5"), &poly("x^2")).is_err());
    }

    #[test]
    fn parser_accepts_spec_forms() {
        assert_eq!(poly("0.5 x^2 + 0.5 x^4").coeffs(), &[0.0, 0.0, 0.5, 0.0, 0.5]);
        assert_eq!(poly(" x ").coeffs(), &[0.0, 1.0]);
        assert_eq!(poly("1.0*x^3").coeffs(), &[0.0, 0.0, 0.0, 1.0]);
        assert!(DegreePolynomial::parse("").is_err());
        assert!(DegreePolynomial::parse("0.7x^2").is_err()); // not normalized
        assert!(DegreePolynomial::parse("1.0").is_err()); // constant term
        assert!(DegreePolynomial::parse("x^200").is_err()); // beyond max degree
        let (l, r) = EnsembleSpec::parse_pair("(x^2,x^5)").unwrap();
        assert_eq!(l, poly("x^2"));
        assert_eq!(r, poly("x^5"));
        assert!(EnsembleSpec::parse_pair("x^2,x^5").is_err());
    }

    #[test]
    fn eval_is_monotone() {
        let p = poly("0.3x + 0.2x^2 + 0.5x^9");
        let mut prev = 0.0;
        for i in 0..=100 {
            let v = p.eval(i as f64 / 100.0).unwrap();
            assert!(v >= prev - 1e-15);
            prev = v;
        }
    }

    #[test]
    fn degree_sequences_regular() {
        let spec = EnsembleSpec::new(poly("x^2"), poly("x^5"), 6).unwrap();
        let seq = spec.degree_sequences().unwrap();
        assert_eq!(seq.var_counts, vec![(3, 6)]);
        assert_eq!(seq.chk_counts, vec![(6, 3)]);
        assert_eq!(seq.edges, 18);

        let spec = EnsembleSpec::new(poly("x^2"), poly("x^5"), 10_000).unwrap();
        let seq = spec.degree_sequences().unwrap();
        assert_eq!(seq.var_counts, vec![(3, 10_000)]);
        assert_eq!(seq.chk_counts, vec![(6, 5_000)]);
        assert_eq!(seq.edges, 30_000);
    }

    #[test]
    fn degree_sequences_irregular_rounding() {
        let lam = poly("0.5x + 0.5x^3");
        let rho = poly("x^5");
        // 101 nodes cannot split evenly between the degree classes.
        let spec = EnsembleSpec::new(lam, rho, 102).unwrap();
        let seq = spec.degree_sequences().unwrap();
        let n: usize = seq.var_counts.iter().map(|&(_, c)| c).sum();
        assert_eq!(n, 102);
        let var_edges: usize = seq.var_counts.iter().map(|&(d, c)| d * c).sum();
        let chk_edges: usize = seq.chk_counts.iter().map(|&(d, c)| d * c).sum();
        assert_eq!(var_edges, chk_edges);
    }
}

#[cfg(test)]
mod prop_tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_polynomial() -> impl Strategy<Value = DegreePolynomial> {
        proptest::collection::vec(0.0f64..1.0, 1..10).prop_map(|raw| {
            let mut coeffs = vec![0.0];
            coeffs.extend(raw.iter().map(|c| c + 1e-3));
            let total: f64 = coeffs.iter().sum();
            for c in coeffs.iter_mut() {
                *c /= total;
            }
            // Compensate rounding on the largest coefficient.
            let total: f64 = coeffs.iter().sum();
            let imax = (1..coeffs.len())
                .max_by(|&a, &b| coeffs[a].partial_cmp(&coeffs[b]).unwrap())
                .unwrap();
            coeffs[imax] += 1.0 - total;
            DegreePolynomial::from_coeffs(coeffs).unwrap()
        })
    }

    proptest! {
        #[test]
        fn perspective_round_trip(p in arb_polynomial()) {
            let back = p.node_perspective().edge_perspective();
            for (a, b) in p.coeffs().iter().zip(back.coeffs()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }

        #[test]
        fn eval_monotone_and_bounded(p in arb_polynomial(), x in 0.0f64..1.0, y in 0.0f64..1.0) {
            let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
            let a = p.eval(lo).unwrap();
            let b = p.eval(hi).unwrap();
            prop_assert!(a <= b + 1e-15);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&a));
        }

        #[test]
        fn display_parse_round_trip(p in arb_polynomial()) {
            let shown = p.to_string();
            let back = DegreePolynomial::parse(&shown).unwrap();
            prop_assert_eq!(p.coeffs(), back.coeffs());
        }
    }
}
