//! Unlabelled graphs (isomorphism classes), automorphisms and the exhaustive
//! enumeration oracles.
//!
//! Canonical forms are the lexicographically smallest edge string over all
//! `n!` relabelings, found by brute force. Anything that enumerates
//! permutations or graphs is guarded by [`Limits`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{pair_count, LabelledGraph, PairTable};
use crate::permutation::{factorial, for_each_permutation, Permutation, Permutations};

/// Enumeration budgets. Exceeding one yields [`Error::Capability`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest `n` for which `n!` permutations may be enumerated.
    pub max_permutation_n: usize,
    /// Largest number of labelled graphs `(k+1)^C(n,2)` that may be enumerated.
    pub max_graphs: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_permutation_n: 10,
            max_graphs: 1 << 24,
        }
    }
}

impl Limits {
    pub fn check_permutations(&self, n: usize) -> Result<()> {
        if n > self.max_permutation_n {
            return Err(Error::Capability {
                what: "permutation enumeration (vertex count)",
                requested: n as u64,
                limit: self.max_permutation_n as u64,
            });
        }
        Ok(())
    }

    /// Returns the number of labelled graphs on `(n, k)` if it is within budget.
    pub fn check_graphs(&self, n: usize, k: u8) -> Result<u64> {
        let count = graph_count(n, k);
        match count {
            Some(c) if c <= self.max_graphs => Ok(c),
            _ => Err(Error::Capability {
                what: "graph enumeration (labelled graphs)",
                requested: count.unwrap_or(u64::MAX),
                limit: self.max_graphs,
            }),
        }
    }
}

/// `(k+1)^C(n,2)`, or `None` on overflow.
pub fn graph_count(n: usize, k: u8) -> Option<u64> {
    let m = u32::try_from(pair_count(n)).ok()?;
    (k as u64 + 1).checked_pow(m)
}

/// Canonical representative of an isomorphism class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StructureKey {
    canonical: LabelledGraph,
}

impl StructureKey {
    pub fn n(&self) -> usize {
        self.canonical.n()
    }

    pub fn k(&self) -> u8 {
        self.canonical.k()
    }

    /// The canonical labelling itself; any labelling of the structure works
    /// wherever a representative is needed.
    pub fn graph(&self) -> &LabelledGraph {
        &self.canonical
    }

    pub fn canonical_edges(&self) -> &[u8] {
        self.canonical.edges()
    }

    pub fn edge_count(&self) -> usize {
        self.canonical.edge_count()
    }

    pub fn into_graph(self) -> LabelledGraph {
        self.canonical
    }
}

impl fmt::Display for StructureKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.canonical.fmt(f)
    }
}

impl FromStr for StructureKey {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        canonicalize(&s.parse::<LabelledGraph>()?)
    }
}

impl Serialize for StructureKey {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.canonical.serialize(s)
    }
}

impl<'de> Deserialize<'de> for StructureKey {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let g = LabelledGraph::deserialize(d)?;
        canonicalize(&g).map_err(serde::de::Error::custom)
    }
}

/// Compares `g` relabelled by `sigma` (i.e. `a'[i][j] = a[sigma(i)][sigma(j)]`)
/// against `best`, stopping at the first differing pair.
fn compare_relabelled(g: &[u8], table: &PairTable, sigma: &[usize], best: &[u8]) -> Ordering {
    for (pos, &(i, j)) in table.pairs().iter().enumerate() {
        let s = g[table.index(sigma[i], sigma[j])];
        match s.cmp(&best[pos]) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

pub fn canonicalize(g: &LabelledGraph) -> Result<StructureKey> {
    canonicalize_with(g, &Limits::default())
}

pub fn canonicalize_with(g: &LabelledGraph, limits: &Limits) -> Result<StructureKey> {
    Ok(canonical_form_with(g, limits)?.0)
}

/// Canonical key together with a relabeling `p` such that
/// `g.permuted(p) == key.graph()`.
pub fn canonical_form(g: &LabelledGraph) -> Result<(StructureKey, Permutation)> {
    canonical_form_with(g, &Limits::default())
}

pub fn canonical_form_with(g: &LabelledGraph, limits: &Limits) -> Result<(StructureKey, Permutation)> {
    let n = g.n();
    limits.check_permutations(n)?;
    let table = PairTable::new(n);
    let edges = g.edges();
    let mut best = edges.to_vec();
    let mut best_sigma: Vec<usize> = (0..n).collect();
    for_each_permutation(n, |sigma| {
        if compare_relabelled(edges, &table, sigma, &best) == Ordering::Less {
            for (pos, &(i, j)) in table.pairs().iter().enumerate() {
                best[pos] = edges[table.index(sigma[i], sigma[j])];
            }
            best_sigma.copy_from_slice(sigma);
        }
    });
    let relabel = Permutation::from_vec(best_sigma)?.inverse();
    Ok((
        StructureKey {
            canonical: g.with_edges(best),
        },
        relabel,
    ))
}

/// True iff no relabeling of `g` is lexicographically smaller.
pub fn is_canonical(g: &LabelledGraph) -> Result<bool> {
    let n = g.n();
    Limits::default().check_permutations(n)?;
    let table = PairTable::new(n);
    let edges = g.edges();
    let mut canonical = true;
    for_each_permutation(n, |sigma| {
        if canonical && compare_relabelled(edges, &table, sigma, edges) == Ordering::Less {
            canonical = false;
        }
    });
    Ok(canonical)
}

/// `|Aut(g)|`: the number of relabelings that leave `g` unchanged.
pub fn automorphism_count(g: &LabelledGraph) -> Result<u64> {
    automorphism_count_with(g, &Limits::default())
}

pub fn automorphism_count_with(g: &LabelledGraph, limits: &Limits) -> Result<u64> {
    let n = g.n();
    limits.check_permutations(n)?;
    let table = PairTable::new(n);
    let edges = g.edges();
    let mut count = 0u64;
    for_each_permutation(n, |sigma| {
        if compare_relabelled(edges, &table, sigma, edges) == Ordering::Equal {
            count += 1;
        }
    });
    Ok(count)
}

/// `n! / |Aut(g)|`, the number of distinct labelled graphs with the
/// structure of `g`.
pub fn distinct_labelings(g: &LabelledGraph) -> Result<u64> {
    let aut = automorphism_count(g)?;
    Ok(factorial(g.n()) / aut)
}

/// All permutations of `n` points in lexicographic order.
pub fn enumerate_permutations(n: usize) -> Result<Permutations> {
    enumerate_permutations_with(n, &Limits::default())
}

pub fn enumerate_permutations_with(n: usize, limits: &Limits) -> Result<Permutations> {
    limits.check_permutations(n)?;
    Ok(Permutations::new(n))
}

/// All labelled graphs on `(n, k)`, in lexicographic order of edge strings.
pub fn enumerate_graphs(n: usize, k: u8) -> Result<GraphIter> {
    enumerate_graphs_with(n, k, &Limits::default())
}

pub fn enumerate_graphs_with(n: usize, k: u8, limits: &Limits) -> Result<GraphIter> {
    limits.check_graphs(n, k)?;
    let first = LabelledGraph::empty(n, k)?;
    Ok(GraphIter { next: Some(first) })
}

/// All structures on `(n, k)`, each once, ordered by canonical edge string.
pub fn enumerate_structures(n: usize, k: u8) -> Result<impl Iterator<Item = StructureKey>> {
    enumerate_structures_with(n, k, &Limits::default())
}

pub fn enumerate_structures_with(n: usize, k: u8, limits: &Limits) -> Result<impl Iterator<Item = StructureKey>> {
    limits.check_permutations(n)?;
    let graphs = enumerate_graphs_with(n, k, limits)?;
    Ok(graphs.filter_map(|g| match is_canonical(&g) {
        Ok(true) => Some(StructureKey { canonical: g }),
        _ => None,
    }))
}

#[derive(Clone, Debug)]
pub struct GraphIter {
    next: Option<LabelledGraph>,
}

impl Iterator for GraphIter {
    type Item = LabelledGraph;

    fn next(&mut self) -> Option<LabelledGraph> {
        let cur = self.next.take()?;
        let k = cur.k();
        let mut edges = cur.edges().to_vec();
        // odometer, last pair least significant
        let mut pos = edges.len();
        let advanced = loop {
            if pos == 0 {
                break false;
            }
            pos -= 1;
            if edges[pos] < k {
                edges[pos] += 1;
                break true;
            }
            edges[pos] = 0;
        };
        if advanced {
            self.next = Some(cur.with_edges(edges));
        }
        Some(cur)
    }
}
