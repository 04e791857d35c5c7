//! Labelled weighted simple graphs stored as upper-triangular symbol strings.
//!
//! A graph on `n` vertices is the sequence of `n(n-1)/2` symbols over
//! `{0, ..., k}` for the pairs `(0,1), (0,2), ..., (0,n-1), (1,2), ...` in
//! that order. Symbol `0` means "no edge". Every serialization and every
//! hash in the crate uses this pair order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permutation::Permutation;

/// Number of unordered vertex pairs, `C(n, 2)`.
#[inline]
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of the unordered pair `{i, j}` in the edge string.
#[inline]
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i != j && i < n && j < n);
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Lookup table from ordered vertex pairs to edge-string positions.
///
/// The diagonal holds `usize::MAX`. Used by the permutation loops, which
/// evaluate `n!` relabelings and cannot afford the arithmetic in
/// [`pair_index`] on every access.
#[derive(Clone, Debug)]
pub struct PairTable {
    n: usize,
    index: Vec<usize>,
    pairs: Vec<(usize, usize)>,
}

impl PairTable {
    pub fn new(n: usize) -> Self {
        let mut index = vec![usize::MAX; n * n];
        let mut pairs = Vec::with_capacity(pair_count(n));
        for i in 0..n {
            for j in (i + 1)..n {
                let idx = pairs.len();
                index[i * n + j] = idx;
                index[j * n + i] = idx;
                pairs.push((i, j));
            }
        }
        PairTable { n, index, pairs }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        self.index[i * self.n + j]
    }

    /// Pairs `(i, j)`, `i < j`, in edge-string order.
    #[inline]
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct LabelledGraph {
    n: usize,
    k: u8,
    edges: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    n: usize,
    k: u8,
    edges: Vec<u8>,
}

impl TryFrom<RawGraph> for LabelledGraph {
    type Error = Error;
    fn try_from(raw: RawGraph) -> Result<Self> {
        LabelledGraph::new(raw.n, raw.k, raw.edges)
    }
}

impl From<LabelledGraph> for RawGraph {
    fn from(g: LabelledGraph) -> Self {
        RawGraph {
            n: g.n,
            k: g.k,
            edges: g.edges,
        }
    }
}

impl LabelledGraph {
    pub fn new(n: usize, k: u8, edges: Vec<u8>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("vertex count must be at least 1".into()));
        }
        if k == 0 {
            return Err(Error::InvalidGraph("maximum edge weight must be at least 1".into()));
        }
        if edges.len() != pair_count(n) {
            return Err(Error::InvalidGraph(format!(
                "expected {} symbols for n = {}, got {}",
                pair_count(n),
                n,
                edges.len()
            )));
        }
        if let Some(&s) = edges.iter().find(|&&s| s > k) {
            return Err(Error::InvalidGraph(format!("symbol {s} exceeds k = {k}")));
        }
        Ok(LabelledGraph { n, k, edges })
    }

    /// Graph without edges.
    pub fn empty(n: usize, k: u8) -> Result<Self> {
        Self::new(n, k, vec![0; pair_count(n)])
    }

    /// Unweighted complete graph.
    pub fn complete(n: usize) -> Result<Self> {
        Self::new(n, 1, vec![1; pair_count(n)])
    }

    /// Builds a graph from 0-based weighted edges `(i, j, w)`.
    pub fn from_weighted_edges(n: usize, k: u8, edges: &[(usize, usize, u8)]) -> Result<Self> {
        let mut g = Self::empty(n, k)?;
        for &(i, j, w) in edges {
            g.set(i, j, w)?;
        }
        Ok(g)
    }

    /// Builds an unweighted graph from 0-based edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let weighted: Vec<_> = edges.iter().map(|&(i, j)| (i, j, 1)).collect();
        Self::from_weighted_edges(n, 1, &weighted)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> u8 {
        self.k
    }

    #[inline]
    pub fn edges(&self) -> &[u8] {
        &self.edges
    }

    #[inline]
    pub fn pair_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_unweighted(&self) -> bool {
        self.k == 1
    }

    /// Symbol on the pair `{i, j}`; `0` on the diagonal.
    pub fn get(&self, i: usize, j: usize) -> u8 {
        if i == j {
            0
        } else {
            self.edges[pair_index(self.n, i, j)]
        }
    }

    pub fn set(&mut self, i: usize, j: usize, w: u8) -> Result<()> {
        if i == j || i >= self.n || j >= self.n {
            return Err(Error::InvalidGraph(format!(
                "pair ({i}, {j}) is not a valid vertex pair for n = {}",
                self.n
            )));
        }
        if w > self.k {
            return Err(Error::InvalidGraph(format!("symbol {w} exceeds k = {}", self.k)));
        }
        self.edges[pair_index(self.n, i, j)] = w;
        Ok(())
    }

    /// Number of pairs carrying a nonzero symbol, `|E(g)|`.
    pub fn edge_count(&self) -> usize {
        self.edges.iter().filter(|&&s| s != 0).count()
    }

    /// Relabels the vertices: vertex `v` becomes `p(v)`, so the result has
    /// `a'[i][j] = a[p^-1(i)][p^-1(j)]`.
    pub fn permuted(&self, p: &Permutation) -> Result<Self> {
        apply_permutation(self, p)
    }

    pub(crate) fn with_edges(&self, edges: Vec<u8>) -> Self {
        debug_assert_eq!(edges.len(), self.edges.len());
        LabelledGraph {
            n: self.n,
            k: self.k,
            edges,
        }
    }
}

pub fn apply_permutation(g: &LabelledGraph, p: &Permutation) -> Result<LabelledGraph> {
    if p.len() != g.n() {
        return Err(Error::SizeMismatch(format!(
            "permutation on {} points applied to graph on {} vertices",
            p.len(),
            g.n()
        )));
    }
    let n = g.n();
    let map = p.as_slice();
    let mut out = vec![0u8; g.pair_count()];
    let mut idx = 0;
    for u in 0..n {
        for v in (u + 1)..n {
            out[pair_index(n, map[u], map[v])] = g.edges[idx];
            idx += 1;
        }
    }
    Ok(g.with_edges(out))
}

/// Text form: header `n k`, then the symbols space-separated in pair order.
impl fmt::Display for LabelledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.k)?;
        let mut first = true;
        for s in &self.edges {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for LabelledGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut tokens = s.split_whitespace();
        let mut next_num = |what: &str| -> Result<u64> {
            let tok = tokens.next().ok_or_else(|| Error::Parse(format!("missing {what}")))?;
            tok.parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad {what}: {tok:?}")))
        };
        let n = next_num("vertex count")? as usize;
        let k = next_num("maximum weight")?;
        let k = u8::try_from(k).map_err(|_| Error::Parse(format!("maximum weight {k} too large")))?;
        let mut edges = Vec::with_capacity(pair_count(n));
        for _ in 0..pair_count(n) {
            let s = next_num("edge symbol")?;
            edges.push(u8::try_from(s).map_err(|_| Error::Parse(format!("symbol {s} too large")))?);
        }
        if tokens.next().is_some() {
            return Err(Error::Parse("trailing tokens after edge symbols".into()));
        }
        LabelledGraph::new(n, k, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_order_is_row_major() {
        let t = PairTable::new(4);
        assert_eq!(t.pairs(), &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        for (idx, &(i, j)) in t.pairs().iter().enumerate() {
            assert_eq!(pair_index(4, i, j), idx);
            assert_eq!(pair_index(4, j, i), idx);
            assert_eq!(t.index(j, i), idx);
        }
    }

    #[test]
    fn rejects_bad_lengths_and_symbols() {
        assert!(LabelledGraph::new(3, 1, vec![0, 1]).is_err());
        assert!(LabelledGraph::new(3, 1, vec![0, 1, 2]).is_err());
        assert!(LabelledGraph::new(0, 1, vec![]).is_err());
        assert!(LabelledGraph::new(1, 1, vec![]).is_ok());
    }

    #[test]
    fn identity_leaves_graph_unchanged() {
        let g = LabelledGraph::from_weighted_edges(4, 2, &[(0, 1, 2), (2, 3, 1)]).unwrap();
        assert_eq!(g.permuted(&Permutation::identity(4)).unwrap(), g);
    }

    #[test]
    fn path_is_mirror_symmetric() {
        // 1-2, 2-3 with 1 <-> 3
        let path = LabelledGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let swap = Permutation::from_one_based(&[3, 2, 1]).unwrap();
        assert_eq!(path.permuted(&swap).unwrap(), path);
    }

    #[test]
    fn single_edge_under_three_cycle() {
        // edge 1-2, pi = 1->2->3->1, expect edge 2-3
        let g = LabelledGraph::from_edges(3, &[(0, 1)]).unwrap();
        let cycle = Permutation::from_one_based(&[2, 3, 1]).unwrap();
        let expected = LabelledGraph::from_edges(3, &[(1, 2)]).unwrap();
        assert_eq!(g.permuted(&cycle).unwrap(), expected);

        // oracle: brute-force relabeling through the adjacency matrix
        let pinv = cycle.inverse();
        let mut brute = LabelledGraph::empty(3, 1).unwrap();
        for i in 0..3 {
            for j in (i + 1)..3 {
                brute.set(i, j, g.get(pinv.apply(i), pinv.apply(j))).unwrap();
            }
        }
        assert_eq!(brute, expected);
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let g = LabelledGraph::empty(3, 1).unwrap();
        assert!(matches!(
            g.permuted(&Permutation::identity(4)),
            Err(Error::SizeMismatch(_))
        ));
    }

    #[test]
    fn text_round_trip() {
        let g = LabelledGraph::from_weighted_edges(4, 2, &[(0, 3, 2), (1, 2, 1)]).unwrap();
        let text = g.to_string();
        assert_eq!(text, "4 2\n0 0 2 1 0 0");
        assert_eq!(text.parse::<LabelledGraph>().unwrap(), g);
        assert!("3 1\n0 1".parse::<LabelledGraph>().is_err());
        assert!("3 1\n0 1 1 1".parse::<LabelledGraph>().is_err());
    }

    #[test]
    fn json_validates() {
        let ok: LabelledGraph = serde_json::from_str(r#"{"n":3,"k":1,"edges":[1,0,1]}"#).unwrap();
        assert_eq!(ok.edge_count(), 2);
        assert!(serde_json::from_str::<LabelledGraph>(r#"{"n":3,"k":1,"edges":[1,0]}"#).is_err());
    }
}
