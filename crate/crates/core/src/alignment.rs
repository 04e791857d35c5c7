//! Unweighted graph alignment: the statistic `Σ_{i<j} a_ij b_π(i)π(j)`, its
//! exact optimization over `S_n`, and the MAP deanonymizer built on it.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{pair_count, LabelledGraph, PairTable};
use crate::model::{BinaryEntries, JointEdgeDistribution};
use crate::permutation::{for_each_permutation_with_first, Permutation};
use crate::structure::{Limits, StructureKey};

/// Witness lists are truncated to this many permutations; `count` stays exact.
pub const WITNESS_CAP: usize = 64;

/// Below this `n` the search runs on the calling thread.
const PARALLEL_FROM_N: usize = 7;

/// Relative tolerance under which `p11 p00` and `p10 p01` count as equal.
const DEGENERACY_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Max,
    Min,
}

impl Sense {
    fn improves(self, candidate: u64, incumbent: u64) -> bool {
        match self {
            Sense::Max => candidate > incumbent,
            Sense::Min => candidate < incumbent,
        }
    }
}

impl std::str::FromStr for Sense {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max" => Ok(Sense::Max),
            "min" => Ok(Sense::Min),
            _ => Err(Error::Parse(format!("sense must be max or min, got {s:?}"))),
        }
    }
}

/// Exact optimum of the alignment statistic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlignmentResult {
    pub value: u64,
    /// Number of permutations attaining `value`.
    pub count: u64,
    /// The first [`WITNESS_CAP`] optimal permutations in lexicographic order.
    pub witnesses: Vec<Permutation>,
}

impl AlignmentResult {
    /// Lexicographically smallest optimal permutation.
    pub fn witness(&self) -> &Permutation {
        &self.witnesses[0]
    }

    pub fn is_complete(&self) -> bool {
        self.witnesses.len() as u64 == self.count
    }
}

fn require_unweighted(g: &LabelledGraph) -> Result<()> {
    if g.k() != 1 {
        return Err(Error::WeightedInput(g.k()));
    }
    Ok(())
}

fn require_pair(ga: &LabelledGraph, gb: &LabelledGraph) -> Result<()> {
    require_unweighted(ga)?;
    require_unweighted(gb)?;
    if ga.n() != gb.n() {
        return Err(Error::SizeMismatch(format!(
            "graphs on {} and {} vertices",
            ga.n(),
            gb.n()
        )));
    }
    Ok(())
}

fn require_len(g: &LabelledGraph, p: &Permutation) -> Result<()> {
    if p.len() != g.n() {
        return Err(Error::SizeMismatch(format!(
            "permutation on {} points for a graph on {} vertices",
            p.len(),
            g.n()
        )));
    }
    Ok(())
}

/// `Σ_{i<j} a_ij · b_π(i)π(j)`.
pub fn alignment_statistic(ga: &LabelledGraph, gb: &LabelledGraph, p: &Permutation) -> Result<u64> {
    require_pair(ga, gb)?;
    require_len(ga, p)?;
    let table = PairTable::new(ga.n());
    Ok(table
        .pairs()
        .iter()
        .zip(ga.edges())
        .filter(|(_, &a)| a == 1)
        .map(|(&(i, j), _)| gb.edges()[table.index(p.apply(i), p.apply(j))] as u64)
        .sum())
}

/// Pairs with an edge in exactly one of `ga` and the relabelled `gb`.
pub fn matching_error(ga: &LabelledGraph, gb: &LabelledGraph, p: &Permutation) -> Result<u64> {
    require_pair(ga, gb)?;
    require_len(ga, p)?;
    let table = PairTable::new(ga.n());
    Ok(table
        .pairs()
        .iter()
        .zip(ga.edges())
        .filter(|(&(i, j), &a)| a != gb.edges()[table.index(p.apply(i), p.apply(j))])
        .count() as u64)
}

/// Partial result over one block of permutations.
struct Block {
    value: u64,
    count: u64,
    witnesses: Vec<Permutation>,
    /// Smallest relabelled `gb` edge string among optimal permutations.
    best_labelling: Option<Vec<u8>>,
}

impl Block {
    fn merge(mut self, other: Block, sense: Sense) -> Block {
        if other.count == 0 {
            return self;
        }
        if self.count == 0 || sense.improves(other.value, self.value) {
            return other;
        }
        if other.value == self.value {
            self.count += other.count;
            let room = WITNESS_CAP - self.witnesses.len();
            self.witnesses.extend(other.witnesses.into_iter().take(room));
            self.best_labelling = match (self.best_labelling, other.best_labelling) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            };
        }
        self
    }
}

/// Scans permutations whose first image is `first`.
fn search_block(
    ga_edges: &[(usize, usize)],
    gb: &LabelledGraph,
    table: &PairTable,
    sense: Sense,
    first: usize,
    track_labelling: bool,
) -> Block {
    let n = gb.n();
    let b = gb.edges();
    let mut block = Block {
        value: 0,
        count: 0,
        witnesses: Vec::new(),
        best_labelling: None,
    };
    let mut labelling = vec![0u8; table.pairs().len()];
    for_each_permutation_with_first(n, first, |pi| {
        let v: u64 = ga_edges.iter().map(|&(i, j)| b[table.index(pi[i], pi[j])] as u64).sum();
        let fresh = block.count == 0 || sense.improves(v, block.value);
        if fresh {
            block.value = v;
            block.count = 0;
            block.witnesses.clear();
            block.best_labelling = None;
        }
        if fresh || v == block.value {
            block.count += 1;
            if block.witnesses.len() < WITNESS_CAP {
                block
                    .witnesses
                    .push(Permutation::from_vec(pi.to_vec()).expect("enumerated"));
            }
            if track_labelling {
                for (slot, &(i, j)) in labelling.iter_mut().zip(table.pairs()) {
                    *slot = b[table.index(pi[i], pi[j])];
                }
                if block.best_labelling.as_deref().is_none_or(|cur| labelling[..] < *cur) {
                    block.best_labelling = Some(labelling.clone());
                }
            }
        }
    });
    block
}

fn search(
    ga: &LabelledGraph,
    gb: &LabelledGraph,
    sense: Sense,
    limits: &Limits,
    track_labelling: bool,
) -> Result<Block> {
    require_pair(ga, gb)?;
    let n = ga.n();
    limits.check_permutations(n)?;
    let table = PairTable::new(n);
    let ga_edges: Vec<(usize, usize)> = table
        .pairs()
        .iter()
        .zip(ga.edges())
        .filter(|(_, &a)| a == 1)
        .map(|(&p, _)| p)
        .collect();
    let run = |first| search_block(&ga_edges, gb, &table, sense, first, track_labelling);
    let blocks: Vec<Block> = if n >= PARALLEL_FROM_N {
        (0..n).into_par_iter().map(run).collect()
    } else {
        (0..n).map(run).collect()
    };
    Ok(blocks.into_iter().reduce(|acc, b| acc.merge(b, sense)).expect("n >= 1"))
}

/// Exact optimum of the alignment statistic over all of `S_n`.
pub fn optimize_alignment(ga: &LabelledGraph, gb: &LabelledGraph, sense: Sense) -> Result<AlignmentResult> {
    optimize_alignment_with(ga, gb, sense, &Limits::default())
}

pub fn optimize_alignment_with(
    ga: &LabelledGraph,
    gb: &LabelledGraph,
    sense: Sense,
    limits: &Limits,
) -> Result<AlignmentResult> {
    let block = search(ga, gb, sense, limits, false)?;
    Ok(AlignmentResult {
        value: block.value,
        count: block.count,
        witnesses: block.witnesses,
    })
}

/// Which optimum the MAP labelling uses: `max` when `p11 p00 > p10 p01`,
/// `min` when it is smaller.
pub fn map_sense(dist: &JointEdgeDistribution) -> Result<Sense> {
    let e = dist.binary_entries()?;
    if !e.all_positive() {
        return Err(Error::ZeroEntry(format!(
            "p00={}, p01={}, p10={}, p11={}",
            e.p00, e.p01, e.p10, e.p11
        )));
    }
    let (diag, off) = (e.p11 * e.p00, e.p10 * e.p01);
    if (diag - off).abs() <= DEGENERACY_TOLERANCE * diag.max(off) {
        return Err(Error::DegenerateModel);
    }
    Ok(if diag > off { Sense::Max } else { Sense::Min })
}

/// The MAP labelling of `sb` given `ga`: among labellings attaining the
/// optimal statistic, the one with the smallest edge string.
pub fn map_deanonymize(ga: &LabelledGraph, sb: &StructureKey, dist: &JointEdgeDistribution) -> Result<LabelledGraph> {
    let sense = map_sense(dist)?;
    let block = search(ga, sb.graph(), sense, &Limits::default(), true)?;
    let edges = block.best_labelling.expect("at least one permutation");
    LabelledGraph::new(ga.n(), 1, edges)
}

/// Every distinct labelling of `sb` attaining the optimal statistic.
pub fn map_argmax_labellings(
    ga: &LabelledGraph,
    sb: &StructureKey,
    dist: &JointEdgeDistribution,
) -> Result<BTreeSet<LabelledGraph>> {
    let sense = map_sense(dist)?;
    let c = sb.graph();
    require_pair(ga, c)?;
    let n = ga.n();
    Limits::default().check_permutations(n)?;
    let table = PairTable::new(n);
    let best = search(ga, c, sense, &Limits::default(), false)?.value;
    let mut out = BTreeSet::new();
    let mut err = None;
    for first in 0..n {
        for_each_permutation_with_first(n, first, |pi| {
            let p = Permutation::from_vec(pi.to_vec()).expect("enumerated");
            match alignment_statistic(ga, c, &p) {
                Ok(v) if v == best => {
                    let edges = table
                        .pairs()
                        .iter()
                        .map(|&(i, j)| c.edges()[table.index(pi[i], pi[j])])
                        .collect();
                    out.insert(c.with_edges(edges));
                }
                Ok(_) => {}
                Err(e) => err = Some(e),
            }
        });
    }
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Cycle type summary of a permutation: `k` fixed points and `t`
/// transpositions. `preserved_pairs = C(k,2) + t` counts pairs `{i,j}`
/// mapped onto themselves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationShape {
    pub fixed_points: usize,
    pub transpositions: usize,
    pub preserved_pairs: usize,
}

impl PermutationShape {
    pub fn new(n: usize, fixed_points: usize, transpositions: usize) -> Result<Self> {
        if fixed_points + 2 * transpositions > n {
            return Err(Error::InvalidArgument(format!(
                "{fixed_points} fixed points and {transpositions} transpositions do not fit in {n} vertices"
            )));
        }
        Ok(PermutationShape {
            fixed_points,
            transpositions,
            preserved_pairs: pair_count(fixed_points) + transpositions,
        })
    }

    pub fn of(p: &Permutation) -> Self {
        let s = p.as_slice();
        let fixed_points = (0..s.len()).filter(|&i| s[i] == i).count();
        let transpositions = (0..s.len()).filter(|&i| s[i] > i && s[s[i]] == i).count();
        PermutationShape::new(s.len(), fixed_points, transpositions).expect("cycle counts fit")
    }
}

/// `E[Σ a_ij b_π(i)π(j)] = l p11 + (C(n,2) - l)(p10 + p11)(p01 + p11)`.
pub fn expected_statistic(shape: &PermutationShape, dist: &JointEdgeDistribution, n: usize) -> Result<f64> {
    let e = dist.binary_entries()?;
    let m = pair_count(n);
    if shape.preserved_pairs > m {
        return Err(Error::InvalidArgument(format!(
            "{} preserved pairs exceed C({n},2) = {m}",
            shape.preserved_pairs
        )));
    }
    let l = shape.preserved_pairs as f64;
    Ok(l * e.p11 + (m as f64 - l) * (e.p10 + e.p11) * (e.p01 + e.p11))
}

/// Tail bounds for the statistic. `delta` is per pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationBounds {
    /// `exp(-C(n,2) δ²/2)`: deviation by `C(n,2) δ` at one fixed permutation.
    pub single_permutation: f64,
    /// `exp(-(C(n,2) δ²/2 - n ln n))`: union over all permutations.
    pub union_over_permutations: f64,
    /// `2^-((n-2)(√(p00 p11) - √(p01 p10))² - log2 n)`: MAP labelling failure.
    /// `None` for weighted models.
    pub map_failure: Option<f64>,
}

fn clamp_unit(x: f64) -> f64 {
    if x.is_nan() {
        1.0
    } else {
        x.clamp(0.0, 1.0)
    }
}

pub fn concentration_bounds(n: usize, delta: f64, dist: &JointEdgeDistribution) -> ConcentrationBounds {
    let m = pair_count(n) as f64;
    let exponent = m * delta * delta / 2.0;
    let nf = n as f64;
    let map_failure = dist.binary_entries().ok().map(|e: BinaryEntries| {
        let gap = (e.p00 * e.p11).sqrt() - (e.p01 * e.p10).sqrt();
        clamp_unit((-((nf - 2.0) * gap * gap - nf.log2())).exp2())
    });
    ConcentrationBounds {
        single_permutation: clamp_unit((-exponent).exp()),
        union_over_permutations: clamp_unit((-(exponent - nf * nf.ln())).exp()),
        map_failure,
    }
}
