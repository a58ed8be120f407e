//! Tanner graphs sampled from the configuration model, their GF(2)
//! parity-check matrices, alist and edge-list I/O, and exact codeword
//! enumeration for small codes.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::degree::EnsembleSpec;
use crate::error::Error;

/// Upper bound on matrix/graph dimensions accepted by the text readers.
const MAX_IO_DIM: usize = 4_000_000;
use crate::gf2::{BitMatrix, BitVec};
use crate::Result;

/// A bipartite variable/check graph. Parallel edges are kept.
#[derive(Debug, Clone)]
pub struct TannerGraph {
    n_var: usize,
    n_chk: usize,
    /// Edge list as `(variable, check)` pairs, one entry per socket pairing.
    edges: Vec<(usize, usize)>,
    /// Edge indices incident to each variable.
    var_adj: Vec<Vec<usize>>,
    /// Edge indices incident to each check.
    chk_adj: Vec<Vec<usize>>,
}

impl TannerGraph {
    /// Builds a graph from an explicit edge list.
    pub fn from_edges(n_var: usize, n_chk: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut var_adj = vec![Vec::new(); n_var];
        let mut chk_adj = vec![Vec::new(); n_chk];
        for (i, &(v, c)) in edges.iter().enumerate() {
            if v >= n_var || c >= n_chk {
                return Err(Error::domain(format!(
                    "edge ({v}, {c}) outside graph with {n_var} variables, {n_chk} checks"
                )));
            }
            var_adj[v].push(i);
            chk_adj[c].push(i);
        }
        Ok(TannerGraph {
            n_var,
            n_chk,
            edges,
            var_adj,
            chk_adj,
        })
    }

    /// Samples a uniform configuration-model graph for the ensemble:
    /// variable sockets are matched to a random permutation of check sockets.
    /// Deterministic for a given seed.
    pub fn sample(spec: &EnsembleSpec, seed: u64) -> Result<Self> {
        let seq = spec.degree_sequences()?;
        let n_var: usize = seq.var_counts.iter().map(|&(_, c)| c).sum();
        let n_chk: usize = seq.chk_counts.iter().map(|&(_, c)| c).sum();

        let mut var_sockets = Vec::with_capacity(seq.edges);
        let mut v = 0;
        for &(d, count) in &seq.var_counts {
            for _ in 0..count {
                var_sockets.extend(std::iter::repeat(v).take(d));
                v += 1;
            }
        }
        let mut chk_sockets = Vec::with_capacity(seq.edges);
        let mut c = 0;
        for &(d, count) in &seq.chk_counts {
            for _ in 0..count {
                chk_sockets.extend(std::iter::repeat(c).take(d));
                c += 1;
            }
        }
        if var_sockets.len() != chk_sockets.len() {
            return Err(Error::EdgeCountMismatch {
                var_edges: var_sockets.len(),
                chk_edges: chk_sockets.len(),
            });
        }
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        chk_sockets.shuffle(&mut rng);
        let edges = var_sockets.into_iter().zip(chk_sockets).collect();
        TannerGraph::from_edges(n_var, n_chk, edges)
    }

    pub fn n_var(&self) -> usize {
        self.n_var
    }

    pub fn n_chk(&self) -> usize {
        self.n_chk
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edge indices at a variable node (with multiplicity).
    pub fn var_edges(&self, v: usize) -> &[usize] {
        &self.var_adj[v]
    }

    /// Edge indices at a check node (with multiplicity).
    pub fn chk_edges(&self, c: usize) -> &[usize] {
        &self.chk_adj[c]
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn var_degree(&self, v: usize) -> usize {
        self.var_adj[v].len()
    }

    pub fn chk_degree(&self, c: usize) -> usize {
        self.chk_adj[c].len()
    }

    /// GF(2) parity-check matrix: parallel edges cancel pairwise.
    pub fn to_parity_check(&self) -> ParityCheckMatrix {
        let mut rows: Vec<Vec<usize>> = Vec::with_capacity(self.n_chk);
        for c in 0..self.n_chk {
            let mut cols: Vec<usize> = self.chk_adj[c].iter().map(|&e| self.edges[e].0).collect();
            cols.sort_unstable();
            let mut kept = Vec::with_capacity(cols.len());
            let mut i = 0;
            while i < cols.len() {
                let mut j = i;
                while j < cols.len() && cols[j] == cols[i] {
                    j += 1;
                }
                if (j - i) % 2 == 1 {
                    kept.push(cols[i]);
                }
                i = j;
            }
            rows.push(kept);
        }
        ParityCheckMatrix { n: self.n_var, rows }
    }

    /// Writes the graph as `v c` lines, one per edge.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{} {} {}", self.n_var, self.n_chk, self.edges.len())?;
        for &(v, c) in &self.edges {
            writeln!(w, "{v} {c}")?;
        }
        Ok(())
    }

    /// Parses the edge-list format written by [`TannerGraph::write_edge_list`].
    pub fn read_edge_list<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty edge list"))?;
        let header = header?;
        let head: Vec<usize> = parse_usize_row(&header, 1)?;
        if head.len() != 3 {
            return Err(Error::parse(1, "header must be `n_var n_chk n_edges`"));
        }
        let (n_var, n_chk, n_edges) = (head[0], head[1], head[2]);
        if n_var > MAX_IO_DIM || n_chk > MAX_IO_DIM || n_edges > 16 * MAX_IO_DIM {
            return Err(Error::parse(1, "graph dimensions implausibly large"));
        }
        let mut edges = Vec::with_capacity(n_edges.min(1 << 20));
        for (idx, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let row = parse_usize_row(&line, idx + 1)?;
            if row.len() != 2 {
                return Err(Error::parse(idx + 1, "edge line must be `v c`"));
            }
            edges.push((row[0], row[1]));
        }
        if edges.len() != n_edges {
            return Err(Error::parse(
                1,
                format!("header promises {n_edges} edges, found {}", edges.len()),
            ));
        }
        TannerGraph::from_edges(n_var, n_chk, edges)
    }
}

/// Sparse GF(2) parity-check matrix: rows hold sorted column indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    n: usize,
    rows: Vec<Vec<usize>>,
}

impl ParityCheckMatrix {
    pub fn new(n: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        let mut rows = rows;
        for row in rows.iter_mut() {
            row.sort_unstable();
            if row.iter().any(|&c| c >= n) {
                return Err(Error::domain("column index out of range"));
            }
            if row.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::domain("duplicate column index in row"));
            }
        }
        Ok(ParityCheckMatrix { n, rows })
    }

    pub fn n_cols(&self) -> usize {
        self.n
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn to_bitmatrix(&self) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.rows.len(), self.n);
        for (r, row) in self.rows.iter().enumerate() {
            for &c in row {
                m.set(r, c, true);
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        self.to_bitmatrix().rank()
    }

    /// Checks whether `word` satisfies every parity check.
    pub fn is_codeword(&self, word: &BitVec) -> bool {
        self.rows.iter().all(|row| {
            row.iter().filter(|&&c| word.get(c)).count() % 2 == 0
        })
    }

    /// Enumerates the full codebook via Gaussian elimination and
    /// free-variable enumeration. Errors if the codebook exceeds `cap` words.
    pub fn enumerate_codewords(&self, cap: u128) -> Result<Vec<BitVec>> {
        self.to_bitmatrix().nullspace(cap)
    }

    /// Writes the matrix in alist format (padded adjacency lists).
    pub fn write_alist<W: Write>(&self, mut w: W) -> Result<()> {
        let n = self.n;
        let m = self.rows.len();
        let mut col_lists: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (r, row) in self.rows.iter().enumerate() {
            for &c in row {
                col_lists[c].push(r);
            }
        }
        let max_col = col_lists.iter().map(Vec::len).max().unwrap_or(0);
        let max_row = self.rows.iter().map(Vec::len).max().unwrap_or(0);
        writeln!(w, "{n} {m}")?;
        writeln!(w, "{max_col} {max_row}")?;
        writeln!(w, "{}", join_counts(col_lists.iter().map(Vec::len)))?;
        writeln!(w, "{}", join_counts(self.rows.iter().map(Vec::len)))?;
        // Pad with at least one zero so degree-0 nodes still produce a line.
        for list in &col_lists {
            writeln!(w, "{}", join_padded(list, max_col.max(1)))?;
        }
        for row in &self.rows {
            writeln!(w, "{}", join_padded(row, max_row.max(1)))?;
        }
        Ok(())
    }

    /// Parses the alist format (padding zeros optional).
    pub fn read_alist<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = Vec::new();
        for (idx, line) in r.lines().enumerate() {
            let line = line?;
            if !line.trim().is_empty() {
                lines.push((idx + 1, line));
            }
        }
        let mut it = lines.into_iter();
        let (ln, header) = it.next().ok_or_else(|| Error::parse(1, "empty alist"))?;
        let head = parse_usize_row(&header, ln)?;
        if head.len() != 2 {
            return Err(Error::parse(ln, "header must be `n m`"));
        }
        let (n, m) = (head[0], head[1]);
        if n == 0 || m == 0 {
            return Err(Error::parse(ln, "alist dimensions must be positive"));
        }
        if n > MAX_IO_DIM || m > MAX_IO_DIM {
            return Err(Error::parse(ln, "alist dimensions implausibly large"));
        }
        let (ln, line) = it.next().ok_or_else(|| Error::parse(ln, "missing max degrees"))?;
        let maxes = parse_usize_row(&line, ln)?;
        if maxes.len() != 2 {
            return Err(Error::parse(ln, "expected `max_col_degree max_row_degree`"));
        }
        let (ln, line) = it
            .next()
            .ok_or_else(|| Error::parse(ln, "missing column degrees"))?;
        let col_deg = parse_usize_row(&line, ln)?;
        if col_deg.len() != n {
            return Err(Error::parse(ln, format!("expected {n} column degrees")));
        }
        if col_deg.iter().any(|&d| d > m) {
            return Err(Error::parse(ln, "column degree exceeds row count"));
        }
        let (ln, line) = it.next().ok_or_else(|| Error::parse(ln, "missing row degrees"))?;
        let row_deg = parse_usize_row(&line, ln)?;
        if row_deg.len() != m {
            return Err(Error::parse(ln, format!("expected {m} row degrees")));
        }
        if row_deg.iter().any(|&d| d > n) {
            return Err(Error::parse(ln, "row degree exceeds column count"));
        }
        let total_col: usize = col_deg.iter().sum();
        let total_row: usize = row_deg.iter().sum();
        if total_col != total_row {
            return Err(Error::parse(
                ln,
                format!("column degrees sum to {total_col} but row degrees to {total_row}"),
            ));
        }
        let mut cols: Vec<Vec<usize>> = Vec::with_capacity(n);
        for (i, &deg) in col_deg.iter().enumerate() {
            let (ln, line) = it
                .next()
                .ok_or_else(|| Error::parse(0, format!("missing adjacency for column {}", i + 1)))?;
            cols.push(parse_adjacency(&line, ln, deg, m)?);
        }
        let mut rows: Vec<Vec<usize>> = Vec::with_capacity(m);
        for (i, &deg) in row_deg.iter().enumerate() {
            let (ln, line) = it
                .next()
                .ok_or_else(|| Error::parse(0, format!("missing adjacency for row {}", i + 1)))?;
            rows.push(parse_adjacency(&line, ln, deg, n)?);
        }
        // Cross-check the two adjacency encodings agree.
        let mut from_cols: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (c, list) in cols.iter().enumerate() {
            for &r in list {
                from_cols[r].push(c);
            }
        }
        for (r, row) in rows.iter().enumerate() {
            let mut sorted = row.clone();
            sorted.sort_unstable();
            from_cols[r].sort_unstable();
            if sorted != from_cols[r] {
                return Err(Error::parse(
                    0,
                    format!("row {} adjacency disagrees with column lists", r + 1),
                ));
            }
        }
        ParityCheckMatrix::new(n, rows)
    }

    pub fn write_alist_file(&self, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.write_alist(std::io::BufWriter::new(f))
    }

    pub fn read_alist_file(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Self::read_alist(std::io::BufReader::new(f))
    }
}

fn join_counts(counts: impl Iterator<Item = usize>) -> String {
    counts
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn join_padded(list: &[usize], width: usize) -> String {
    let mut parts: Vec<String> = list.iter().map(|&i| (i + 1).to_string()).collect();
    parts.resize(width.max(parts.len()), "0".to_string());
    parts.join(" ")
}

fn parse_usize_row(line: &str, line_no: usize) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| Error::parse(line_no, format!("expected integer, found `{tok}`")))
        })
        .collect()
}

/// Parses a 1-based adjacency line with optional 0 padding.
fn parse_adjacency(line: &str, line_no: usize, degree: usize, bound: usize) -> Result<Vec<usize>> {
    let raw = parse_usize_row(line, line_no)?;
    let mut out = Vec::with_capacity(degree);
    for (i, &idx) in raw.iter().enumerate() {
        if idx == 0 {
            if i < degree {
                return Err(Error::parse(line_no, "padding zero before listed degree"));
            }
            continue;
        }
        if i >= degree {
            return Err(Error::parse(line_no, "more entries than declared degree"));
        }
        if idx > bound {
            return Err(Error::parse(line_no, format!("index {idx} out of range" )));
        }
        out.push(idx - 1);
    }
    if out.len() != degree {
        return Err(Error::parse(
            line_no,
            format!("expected {degree} entries, found {}", out.len()),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree::DegreePolynomial;

    fn spec36(n: usize) -> EnsembleSpec {
        EnsembleSpec::new(
            DegreePolynomial::regular(3),
            DegreePolynomial::regular(6),
            n,
        )
        .unwrap()
    }

    #[test]
    fn sample_counts_and_determinism() {
        let g = TannerGraph::sample(&spec36(6), 7).unwrap();
        assert_eq!(g.n_var(), 6);
        assert_eq!(g.n_chk(), 3);
        assert_eq!(g.n_edges(), 18);
        for v in 0..6 {
            assert_eq!(g.var_degree(v), 3);
        }
        for c in 0..3 {
            assert_eq!(g.chk_degree(c), 6);
        }
        let g2 = TannerGraph::sample(&spec36(6), 7).unwrap();
        assert_eq!(g.edges(), g2.edges());
        let g3 = TannerGraph::sample(&spec36(6), 8).unwrap();
        assert_ne!(g.edges(), g3.edges());
    }

    #[test]
    fn sample_large_counts() {
        let g = TannerGraph::sample(&spec36(10_000), 1).unwrap();
        assert_eq!(g.n_var(), 10_000);
        assert_eq!(g.n_chk(), 5_000);
        assert_eq!(g.n_edges(), 30_000);
    }

    #[test]
    fn degree_histogram_is_exact() {
        let lam = DegreePolynomial::parse("0.5x + 0.5x^3").unwrap();
        let rho = DegreePolynomial::regular(6);
        // n = 117: Lambda = 2/3 x^2 + 1/3 x^4 gives 78 + 39 nodes and
        // 312 edges, exactly 52 degree-6 checks.
        let spec = EnsembleSpec::new(lam, rho, 117).unwrap();
        let g = TannerGraph::sample(&spec, 3).unwrap();
        let mut hist = std::collections::HashMap::new();
        for v in 0..g.n_var() {
            *hist.entry(g.var_degree(v)).or_insert(0usize) += 1;
        }
        assert_eq!(hist[&2], 78);
        assert_eq!(hist[&4], 39);
        assert_eq!(g.n_chk(), 52);
        for c in 0..g.n_chk() {
            assert_eq!(g.chk_degree(c), 6);
        }
    }

    #[test]
    fn parity_check_cancellation() {
        // Single edge.
        let g = TannerGraph::from_edges(1, 1, vec![(0, 0)]).unwrap();
        let h = g.to_parity_check();
        assert_eq!(h.rows(), &[vec![0]]);
        // Double edge cancels.
        let g = TannerGraph::from_edges(1, 1, vec![(0, 0), (0, 0)]).unwrap();
        let h = g.to_parity_check();
        assert_eq!(h.rows(), &[Vec::<usize>::new()]);
        // Three variables on one check.
        let g = TannerGraph::from_edges(3, 1, vec![(0, 0), (1, 0), (2, 0)]).unwrap();
        let h = g.to_parity_check();
        assert_eq!(h.rows(), &[vec![0, 1, 2]]);
    }

    #[test]
    fn enumerate_codewords_examples() {
        let h = ParityCheckMatrix::new(2, vec![vec![0, 1]]).unwrap();
        let words = h.enumerate_codewords(16).unwrap();
        assert_eq!(words.len(), 2);

        let h = ParityCheckMatrix::new(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let words = h.enumerate_codewords(16).unwrap();
        let bits: Vec<Vec<u8>> = words.iter().map(|w| w.to_bits()).collect();
        assert!(bits.contains(&vec![0, 0, 0]));
        assert!(bits.contains(&vec![1, 1, 1]));
        assert_eq!(bits.len(), 2);

        let h = ParityCheckMatrix::new(2, vec![vec![0], vec![1]]).unwrap();
        assert_eq!(h.enumerate_codewords(16).unwrap().len(), 1);
    }

    #[test]
    fn alist_round_trip() {
        let h = ParityCheckMatrix::new(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let mut buf = Vec::new();
        h.write_alist(&mut buf).unwrap();
        let h2 = ParityCheckMatrix::read_alist(&buf[..]).unwrap();
        assert_eq!(h, h2);
        // Written form is canonical: write(read(file)) == file.
        let mut buf2 = Vec::new();
        h2.write_alist(&mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn alist_hand_written() {
        // 3 columns, 2 rows: row 1 = {1,2}, row 2 = {2,3} in 1-based indices.
        let text = "3 2\n1 2\n1 2 1\n2 2\n1\n1 2\n2\n1 2\n2 3\n";
        let h = ParityCheckMatrix::read_alist(text.as_bytes()).unwrap();
        assert_eq!(h.n_cols(), 3);
        assert_eq!(h.rows(), &[vec![0, 1], vec![1, 2]]);
    }

    #[test]
    fn alist_malformed() {
        assert!(matches!(
            ParityCheckMatrix::read_alist("3\n".as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(ParityCheckMatrix::read_alist("".as_bytes()).is_err());
        assert!(ParityCheckMatrix::read_alist("a b\n".as_bytes()).is_err());
        // Degree list shorter than promised.
        assert!(ParityCheckMatrix::read_alist("3 2\n1 2\n1 2\n2 2\n".as_bytes()).is_err());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = TannerGraph::sample(&spec36(12), 5).unwrap();
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        let g2 = TannerGraph::read_edge_list(&buf[..]).unwrap();
        assert_eq!(g.edges(), g2.edges());
    }
}
