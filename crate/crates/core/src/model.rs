//! The correlated Erdős–Rényi (CER) model.
//!
//! Vertex pairs carry i.i.d. symbol pairs `(a, b)` drawn from a joint
//! distribution over `{0..ka} x {0..kb}`. All log-probabilities are base 2.
//!
//! Joint log-probabilities are evaluated from the histogram of symbol pairs
//! rather than pair by pair. Two relabelings that produce the same histogram
//! therefore produce bit-identical values, which is what makes exact
//! comparisons across permutations meaningful.

use rand::distributions::WeightedIndex;
use rand::prelude::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{pair_count, LabelledGraph, PairTable};
use crate::logprob::{LogProb, LogSumExp2};
use crate::permutation::{factorial, for_each_permutation, Permutation};
use crate::structure::{automorphism_count, Limits, StructureKey};

const SUM_TOLERANCE: f64 = 1e-12;

/// Largest `n` accepted by the two-sided `(π_a, π_b)` search, which costs `(n!)^2`.
pub const MAX_TWO_SIDED_N: usize = 6;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(into = "MatrixSpec")]
pub struct JointEdgeDistribution {
    ka: u8,
    kb: u8,
    /// Row-major `(ka+1) x (kb+1)`.
    p: Vec<f64>,
    log_p: Vec<LogProb>,
    marginal_a: Vec<f64>,
    marginal_b: Vec<f64>,
    log_marginal_b: Vec<LogProb>,
    log_marginal_a: Vec<LogProb>,
    min_support_prob: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixSpec {
    pub ka: u8,
    pub kb: u8,
    pub p: Vec<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelName {
    Subsampling,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubsamplingSpec {
    pub model: ModelName,
    pub p: f64,
    pub gamma: f64,
}

/// JSON form of a distribution: either the explicit matrix
/// `{"ka":1,"kb":1,"p":[[..],[..]]}` or `{"model":"subsampling","p":..,"gamma":..}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DistributionSpec {
    Subsampling(SubsamplingSpec),
    Matrix(MatrixSpec),
}

impl DistributionSpec {
    pub fn subsampling(p: f64, gamma: f64) -> Self {
        DistributionSpec::Subsampling(SubsamplingSpec {
            model: ModelName::Subsampling,
            p,
            gamma,
        })
    }

    pub fn build(&self) -> Result<JointEdgeDistribution> {
        match self {
            DistributionSpec::Subsampling(s) => subsampling_model(s.p, s.gamma),
            DistributionSpec::Matrix(m) => {
                if m.p.len() != m.ka as usize + 1 {
                    return Err(Error::InvalidDistribution(format!(
                        "ka = {} needs {} rows, got {}",
                        m.ka,
                        m.ka as usize + 1,
                        m.p.len()
                    )));
                }
                if m.p.iter().any(|row| row.len() != m.kb as usize + 1) {
                    return Err(Error::InvalidDistribution(format!(
                        "kb = {} needs {} columns in every row",
                        m.kb,
                        m.kb as usize + 1
                    )));
                }
                JointEdgeDistribution::new(m.p.clone())
            }
        }
    }
}

impl From<JointEdgeDistribution> for MatrixSpec {
    fn from(d: JointEdgeDistribution) -> Self {
        MatrixSpec {
            ka: d.ka,
            kb: d.kb,
            p: d.matrix(),
        }
    }
}

impl<'de> Deserialize<'de> for JointEdgeDistribution {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        DistributionSpec::deserialize(d)?
            .build()
            .map_err(serde::de::Error::custom)
    }
}

fn log_table(values: &[f64]) -> Vec<LogProb> {
    values.iter().map(|&p| LogProb::from_prob(p)).collect()
}

impl JointEdgeDistribution {
    /// Builds from a rectangular matrix `p[a][b]`, `a ∈ 0..=ka`, `b ∈ 0..=kb`.
    pub fn new(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let rows = matrix.len();
        if rows < 2 {
            return Err(Error::InvalidDistribution("need at least two rows (ka >= 1)".into()));
        }
        let cols = matrix[0].len();
        if cols < 2 {
            return Err(Error::InvalidDistribution("need at least two columns (kb >= 1)".into()));
        }
        if rows > 256 || cols > 256 {
            return Err(Error::InvalidDistribution(
                "alphabets are limited to 256 symbols".into(),
            ));
        }
        if matrix.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidDistribution("matrix is not rectangular".into()));
        }
        let p: Vec<f64> = matrix.into_iter().flatten().collect();
        if let Some(bad) = p.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::InvalidDistribution(format!("entry {bad} is not a probability")));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "entries sum to {total}, expected 1"
            )));
        }
        let mut marginal_a = vec![0.0; rows];
        let mut marginal_b = vec![0.0; cols];
        for a in 0..rows {
            for b in 0..cols {
                marginal_a[a] += p[a * cols + b];
                marginal_b[b] += p[a * cols + b];
            }
        }
        let min_support_prob = p.iter().copied().filter(|&x| x > 0.0).fold(f64::INFINITY, f64::min);
        Ok(JointEdgeDistribution {
            ka: (rows - 1) as u8,
            kb: (cols - 1) as u8,
            log_p: log_table(&p),
            log_marginal_a: log_table(&marginal_a),
            log_marginal_b: log_table(&marginal_b),
            p,
            marginal_a,
            marginal_b,
            min_support_prob,
        })
    }

    /// Product distribution with the given marginals.
    pub fn independent(pa: &[f64], pb: &[f64]) -> Result<Self> {
        let matrix = pa.iter().map(|&x| pb.iter().map(|&y| x * y).collect()).collect();
        Self::new(matrix)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let spec: DistributionSpec = serde_json::from_str(s)?;
        spec.build()
    }

    pub fn ka(&self) -> u8 {
        self.ka
    }

    pub fn kb(&self) -> u8 {
        self.kb
    }

    #[inline]
    fn cols(&self) -> usize {
        self.kb as usize + 1
    }

    #[inline]
    pub fn cell_count(&self) -> usize {
        self.p.len()
    }

    /// Position of the symbol pair `(a, b)` in row-major cell order.
    #[inline]
    pub fn cell_index(&self, a: u8, b: u8) -> usize {
        a as usize * self.cols() + b as usize
    }

    #[inline]
    pub fn prob(&self, a: u8, b: u8) -> f64 {
        self.p[a as usize * self.cols() + b as usize]
    }

    pub fn matrix(&self) -> Vec<Vec<f64>> {
        self.p.chunks(self.cols()).map(|r| r.to_vec()).collect()
    }

    pub fn marginal_a(&self) -> &[f64] {
        &self.marginal_a
    }

    pub fn marginal_b(&self) -> &[f64] {
        &self.marginal_b
    }

    /// Smallest nonzero entry.
    pub fn min_support_prob(&self) -> f64 {
        self.min_support_prob
    }

    pub fn support(&self) -> Vec<(u8, u8)> {
        let mut out = Vec::new();
        for a in 0..=self.ka {
            for b in 0..=self.kb {
                if self.prob(a, b) > 0.0 {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn is_unweighted(&self) -> bool {
        self.ka == 1 && self.kb == 1
    }

    /// `(p00, p01, p10, p11)` for binary alphabets.
    pub fn binary_entries(&self) -> Result<BinaryEntries> {
        if !self.is_unweighted() {
            return Err(Error::WeightedInput(self.ka.max(self.kb)));
        }
        Ok(BinaryEntries {
            p00: self.prob(0, 0),
            p01: self.prob(0, 1),
            p10: self.prob(1, 0),
            p11: self.prob(1, 1),
        })
    }

    /// Mirror image: the distribution of `(b, a)`.
    pub fn swapped(&self) -> Self {
        let m = self.matrix();
        let t = (0..=self.kb as usize)
            .map(|b| (0..=self.ka as usize).map(|a| m[a][b]).collect())
            .collect();
        Self::new(t).expect("transpose of a valid distribution")
    }

    /// `Σ_cells count · log2 p` in fixed cell order.
    pub fn log_prob_of_counts(&self, counts: &[u32]) -> LogProb {
        let mut bits = 0.0;
        for (cell, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            match self.log_p[cell] {
                LogProb::Bits(l) => bits += c as f64 * l,
                LogProb::Impossible => return LogProb::Impossible,
            }
        }
        LogProb::Bits(bits)
    }

    fn log_marginal_of(&self, table: &[LogProb], symbols: &[u8]) -> LogProb {
        let mut counts = vec![0u32; table.len()];
        for &s in symbols {
            counts[s as usize] += 1;
        }
        let mut bits = 0.0;
        for (s, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            match table[s] {
                LogProb::Bits(l) => bits += c as f64 * l,
                LogProb::Impossible => return LogProb::Impossible,
            }
        }
        LogProb::Bits(bits)
    }

    fn check_pair(&self, ga: &LabelledGraph, gb: &LabelledGraph) -> Result<()> {
        if ga.n() != gb.n() {
            return Err(Error::SizeMismatch(format!(
                "graphs on {} and {} vertices",
                ga.n(),
                gb.n()
            )));
        }
        self.check_side(ga, Side::A)?;
        self.check_side(gb, Side::B)
    }

    fn check_side(&self, g: &LabelledGraph, side: Side) -> Result<()> {
        let bound = match side {
            Side::A => self.ka,
            Side::B => self.kb,
        };
        if g.k() > bound {
            return Err(Error::SizeMismatch(format!(
                "graph alphabet k = {} exceeds the model's {:?} alphabet {}",
                g.k(),
                side,
                bound
            )));
        }
        Ok(())
    }
}

/// The four entries of a binary joint distribution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BinaryEntries {
    pub p00: f64,
    pub p01: f64,
    pub p10: f64,
    pub p11: f64,
}

impl BinaryEntries {
    /// `p11 p00 / (p10 p01)`; infinite when the denominator vanishes.
    pub fn alignment_ratio(&self) -> f64 {
        (self.p11 * self.p00) / (self.p10 * self.p01)
    }

    pub fn all_positive(&self) -> bool {
        self.p00 > 0.0 && self.p01 > 0.0 && self.p10 > 0.0 && self.p11 > 0.0
    }
}

/// Which marginal of the joint distribution a graph is drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

/// Subsampling instance: `G` is ER(p), and `Ga`, `Gb` keep each edge of `G`
/// independently with probability `gamma`.
pub fn subsampling_model(p: f64, gamma: f64) -> Result<JointEdgeDistribution> {
    for (name, v) in [("p", p), ("gamma", gamma)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidArgument(format!("{name} = {v} is outside [0, 1]")));
        }
    }
    let keep = p * gamma * (1.0 - gamma);
    JointEdgeDistribution::new(vec![
        vec![(1.0 - p) + p * (1.0 - gamma).powi(2), keep],
        vec![keep, p * gamma * gamma],
    ])
}

/// Draws `(Ga, Gb)` with i.i.d. symbol pairs.
pub fn sample_pair<R: Rng + ?Sized>(
    dist: &JointEdgeDistribution,
    n: usize,
    rng: &mut R,
) -> Result<(LabelledGraph, LabelledGraph)> {
    let m = pair_count(n);
    let picker = WeightedIndex::new(&dist.p).map_err(|e| Error::InvalidDistribution(format!("cannot sample: {e}")))?;
    let cols = dist.cols();
    let mut a = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    for _ in 0..m {
        let cell = picker.sample(rng);
        a.push((cell / cols) as u8);
        b.push((cell % cols) as u8);
    }
    Ok((LabelledGraph::new(n, dist.ka, a)?, LabelledGraph::new(n, dist.kb, b)?))
}

/// `log2 P(ga, gb) = Σ_{i<j} log2 p[a_ij][b_ij]`.
pub fn log_joint_graph_prob(ga: &LabelledGraph, gb: &LabelledGraph, dist: &JointEdgeDistribution) -> Result<LogProb> {
    dist.check_pair(ga, gb)?;
    let cols = dist.cols();
    let mut counts = vec![0u32; dist.cell_count()];
    for (&a, &b) in ga.edges().iter().zip(gb.edges()) {
        counts[a as usize * cols + b as usize] += 1;
    }
    Ok(dist.log_prob_of_counts(&counts))
}

/// `log2 P(g)` under one marginal of the model.
pub fn log_marginal_graph_prob(g: &LabelledGraph, dist: &JointEdgeDistribution, side: Side) -> Result<LogProb> {
    dist.check_side(g, side)?;
    let table = match side {
        Side::A => &dist.log_marginal_a,
        Side::B => &dist.log_marginal_b,
    };
    Ok(dist.log_marginal_of(table, g.edges()))
}

/// Which graph the permutation loop relabels.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Relabel {
    A,
    B,
}

/// Visits every `σ ∈ S_n` with the cell histogram of the pairing
/// `(a_ij, b_σ(i)σ(j))` (or `(a_σ(i)σ(j), b_ij)` when relabelling A).
/// The pairing equals `(ga, gb.permuted(σ⁻¹))`.
fn for_each_relabel_counts<F: FnMut(&[usize], &[u32])>(
    ga: &LabelledGraph,
    gb: &LabelledGraph,
    dist: &JointEdgeDistribution,
    which: Relabel,
    mut f: F,
) {
    let n = ga.n();
    let table = PairTable::new(n);
    let cols = dist.cols();
    let (ea, eb) = (ga.edges(), gb.edges());
    let mut counts = vec![0u32; dist.cell_count()];
    for_each_permutation(n, |sigma| {
        counts.iter_mut().for_each(|c| *c = 0);
        for (pos, &(i, j)) in table.pairs().iter().enumerate() {
            let moved = table.index(sigma[i], sigma[j]);
            let (a, b) = match which {
                Relabel::B => (ea[pos], eb[moved]),
                Relabel::A => (ea[moved], eb[pos]),
            };
            counts[a as usize * cols + b as usize] += 1;
        }
        f(sigma, &counts);
    });
}

fn inverse_of(sigma: &[usize]) -> Permutation {
    Permutation::from_vec(sigma.to_vec())
        .expect("enumerated permutation")
        .inverse()
}

/// `max_π log2 P(ga, π(gb))` with the lexicographically first maximizing
/// `σ = π⁻¹` turned into the witness `π`.
pub fn max_perm_log_joint(
    ga: &LabelledGraph,
    gb: &LabelledGraph,
    dist: &JointEdgeDistribution,
) -> Result<(LogProb, Permutation)> {
    dist.check_pair(ga, gb)?;
    Limits::default().check_permutations(ga.n())?;
    let mut best = LogProb::Impossible;
    let mut best_sigma: Vec<usize> = (0..ga.n()).collect();
    for_each_relabel_counts(ga, gb, dist, Relabel::B, |sigma, counts| {
        let lp = dist.log_prob_of_counts(counts);
        if let LogProb::Bits(x) = lp {
            let better = match best {
                LogProb::Impossible => true,
                LogProb::Bits(b) => x > b,
            };
            if better {
                best = lp;
                best_sigma.copy_from_slice(sigma);
            }
        }
    });
    Ok((best, inverse_of(&best_sigma)))
}

/// `max_{π_a, π_b} log2 P(π_a(ga), π_b(gb))` by direct search over both
/// relabelings. Exists to check that it equals the one-sided maximum.
pub fn max_two_sided_log_joint(
    ga: &LabelledGraph,
    gb: &LabelledGraph,
    dist: &JointEdgeDistribution,
) -> Result<(LogProb, Permutation, Permutation)> {
    dist.check_pair(ga, gb)?;
    let n = ga.n();
    if n > MAX_TWO_SIDED_N {
        return Err(Error::Capability {
            what: "two-sided permutation search (vertex count)",
            requested: n as u64,
            limit: MAX_TWO_SIDED_N as u64,
        });
    }
    let perms: Vec<Permutation> = crate::structure::enumerate_permutations(n)?.collect();
    let relabelled_b: Vec<LabelledGraph> = perms.iter().map(|p| gb.permuted(p)).collect::<Result<_>>()?;
    let mut best = (LogProb::Impossible, Permutation::identity(n), Permutation::identity(n));
    for pa in &perms {
        let a = ga.permuted(pa)?;
        for (pb, b) in perms.iter().zip(&relabelled_b) {
            let lp = log_joint_graph_prob(&a, b, dist)?;
            if lp.bits().is_some() && (best.0.is_impossible() || lp > best.0) {
                best = (lp, pa.clone(), pb.clone());
            }
        }
    }
    Ok(best)
}

/// `log2 Σ_π P(ga, π(gb))`.
pub fn log_perm_sum(ga: &LabelledGraph, gb: &LabelledGraph, dist: &JointEdgeDistribution) -> Result<LogProb> {
    log_perm_sum_relabelling(ga, gb, dist, Relabel::B)
}

/// `log2 Σ_π P(π(ga), gb)`.
pub fn log_perm_sum_over_source(
    ga: &LabelledGraph,
    gb: &LabelledGraph,
    dist: &JointEdgeDistribution,
) -> Result<LogProb> {
    log_perm_sum_relabelling(ga, gb, dist, Relabel::A)
}

fn log_perm_sum_relabelling(
    ga: &LabelledGraph,
    gb: &LabelledGraph,
    dist: &JointEdgeDistribution,
    which: Relabel,
) -> Result<LogProb> {
    dist.check_pair(ga, gb)?;
    Limits::default().check_permutations(ga.n())?;
    let mut acc = LogSumExp2::new();
    for_each_relabel_counts(ga, gb, dist, which, |_, counts| {
        acc.push(dist.log_prob_of_counts(counts));
    });
    Ok(acc.finish())
}

/// Everything one pass over `π ∈ S_n` yields for the pairing `(ga, π(gb))`.
#[derive(Clone, Debug, PartialEq)]
pub struct PermutationScan {
    /// `log2 Σ_π P(ga, π(gb))`.
    pub log_sum: LogProb,
    /// `max_π log2 P(ga, π(gb))`.
    pub log_max: LogProb,
    /// Per cell (see [`JointEdgeDistribution::cell_index`]), the largest and
    /// smallest number of pairs carrying that symbol pair over all `π`.
    pub cell_max: Vec<u32>,
    pub cell_min: Vec<u32>,
}

pub fn scan_relabelings(
    ga: &LabelledGraph,
    gb: &LabelledGraph,
    dist: &JointEdgeDistribution,
) -> Result<PermutationScan> {
    dist.check_pair(ga, gb)?;
    Limits::default().check_permutations(ga.n())?;
    let cells = dist.cell_count();
    let mut acc = LogSumExp2::new();
    let mut log_max = LogProb::Impossible;
    let mut cell_max = vec![0u32; cells];
    let mut cell_min = vec![u32::MAX; cells];
    for_each_relabel_counts(ga, gb, dist, Relabel::B, |_, counts| {
        let lp = dist.log_prob_of_counts(counts);
        acc.push(lp);
        log_max = log_max.max(lp);
        for c in 0..cells {
            cell_max[c] = cell_max[c].max(counts[c]);
            cell_min[c] = cell_min[c].min(counts[c]);
        }
    });
    Ok(PermutationScan {
        log_sum: acc.finish(),
        log_max,
        cell_max,
        cell_min,
    })
}

/// `log2 P_S(s) = log2(n!/|Aut(s)|) + log2 P_G(g)` for any labelling `g` of `s`.
pub fn log_structure_prob(s: &StructureKey, dist: &JointEdgeDistribution, side: Side) -> Result<LogProb> {
    let g = s.graph();
    let labelings = factorial(g.n()) / automorphism_count(g)?;
    Ok(log_marginal_graph_prob(g, dist, side)? + (labelings as f64).log2())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectKind {
    Graph,
    Structure,
}

impl ObjectKind {
    pub fn name(self) -> &'static str {
        match self {
            ObjectKind::Graph => "labelled graph",
            ObjectKind::Structure => "structure",
        }
    }
}

/// What is compressed (`U_a`) and what the decoder holds (`U_b`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceVariant {
    GraphGivenGraph,
    GraphGivenStructure,
    StructureGivenGraph,
    StructureGivenStructure,
}

impl SourceVariant {
    pub const ALL: [SourceVariant; 4] = [
        SourceVariant::GraphGivenGraph,
        SourceVariant::GraphGivenStructure,
        SourceVariant::StructureGivenGraph,
        SourceVariant::StructureGivenStructure,
    ];

    pub fn source_kind(self) -> ObjectKind {
        match self {
            SourceVariant::GraphGivenGraph | SourceVariant::GraphGivenStructure => ObjectKind::Graph,
            _ => ObjectKind::Structure,
        }
    }

    pub fn side_kind(self) -> ObjectKind {
        match self {
            SourceVariant::GraphGivenGraph | SourceVariant::StructureGivenGraph => ObjectKind::Graph,
            _ => ObjectKind::Structure,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SourceVariant::GraphGivenGraph => "graph-given-graph",
            SourceVariant::GraphGivenStructure => "graph-given-structure",
            SourceVariant::StructureGivenGraph => "structure-given-graph",
            SourceVariant::StructureGivenStructure => "structure-given-structure",
        }
    }
}

impl std::fmt::Display for SourceVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SourceVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SourceVariant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown variant {s:?}")))
    }
}

/// A realization of `U_a` or `U_b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Observation {
    Graph(LabelledGraph),
    Structure(StructureKey),
}

impl Observation {
    pub fn kind(&self) -> ObjectKind {
        match self {
            Observation::Graph(_) => ObjectKind::Graph,
            Observation::Structure(_) => ObjectKind::Structure,
        }
    }

    /// The graph itself, or the canonical labelling of the structure.
    pub fn representative(&self) -> &LabelledGraph {
        match self {
            Observation::Graph(g) => g,
            Observation::Structure(s) => s.graph(),
        }
    }

    /// Projects a sampled graph onto the requested kind.
    pub fn of_kind(g: &LabelledGraph, kind: ObjectKind) -> Result<Observation> {
        Ok(match kind {
            ObjectKind::Graph => Observation::Graph(g.clone()),
            ObjectKind::Structure => Observation::Structure(crate::structure::canonicalize(g)?),
        })
    }

    pub fn expect_kind(&self, kind: ObjectKind) -> Result<()> {
        if self.kind() != kind {
            return Err(Error::KindMismatch {
                expected: kind.name(),
                actual: self.kind().name(),
            });
        }
        Ok(())
    }
}

/// `log2 P(U_a = ua | U_b = ub)` by permutation sums.
///
/// * graph | graph: `log P(ga, gb) - log P_B(gb)`
/// * graph | structure: `log Σ_π P(ga, π(gb)) - log(n! P_B(gb))`
/// * structure | graph: `log Σ_π P(π(ga), gb) - log|Aut(ga)| - log P_B(gb)`
/// * structure | structure: `log(n! Σ_π P(ga, π(gb))) - log|Aut(ga)| - log(n! P_B(gb))`,
///   where the double sum over `(π_a, π_b)` is `n!` times the single sum.
pub fn log_conditional(
    ua: &Observation,
    ub: &Observation,
    variant: SourceVariant,
    dist: &JointEdgeDistribution,
) -> Result<LogProb> {
    ua.expect_kind(variant.source_kind())?;
    ub.expect_kind(variant.side_kind())?;
    let ga = ua.representative();
    let gb = ub.representative();
    dist.check_pair(ga, gb)?;
    let log_n_fact = (factorial(ga.n()) as f64).log2();
    let side = log_marginal_graph_prob(gb, dist, Side::B)?;
    Ok(match variant {
        SourceVariant::GraphGivenGraph => log_joint_graph_prob(ga, gb, dist)?.given(side),
        SourceVariant::GraphGivenStructure => log_perm_sum(ga, gb, dist)?.given(side + log_n_fact),
        SourceVariant::StructureGivenGraph => {
            let aut = automorphism_count(ga)? as f64;
            (log_perm_sum_over_source(ga, gb, dist)? - aut.log2()).given(side)
        }
        SourceVariant::StructureGivenStructure => {
            let aut = automorphism_count(ga)? as f64;
            let double_sum = log_perm_sum(ga, gb, dist)? + log_n_fact;
            (double_sum - aut.log2()).given(side + log_n_fact)
        }
    })
}

/// Per-pair entropies in bits.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub h_a: f64,
    pub h_b: f64,
    pub h_ab: f64,
    pub h_a_given_b: f64,
    pub h_b_given_a: f64,
}

/// Shannon entropy in bits, `0 log 0 = 0`.
pub fn entropy_bits(probs: &[f64]) -> f64 {
    probs.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum()
}

/// Binary entropy `h2(x)`.
pub fn h2(x: f64) -> f64 {
    entropy_bits(&[x, 1.0 - x])
}

pub fn entropy_report(dist: &JointEdgeDistribution) -> EntropyReport {
    let h_a = entropy_bits(dist.marginal_a());
    let h_b = entropy_bits(dist.marginal_b());
    let h_ab = entropy_bits(&dist.p);
    EntropyReport {
        h_a,
        h_b,
        h_ab,
        h_a_given_b: h_ab - h_b,
        h_b_given_a: h_ab - h_a,
    }
}

/// Closed form of `H(A|B)` for the subsampling model:
/// `pγ h2(γ) + (1 - pγ) h2(pγ(1-γ)/(1-pγ))`.
pub fn subsampling_conditional_entropy(p: f64, gamma: f64) -> f64 {
    let pg = p * gamma;
    let tail = if pg < 1.0 {
        (1.0 - pg) * h2(pg * (1.0 - gamma) / (1.0 - pg))
    } else {
        0.0
    };
    pg * h2(gamma) + tail
}

/// `H(U_a | U_b)` in bits for the whole graph (not per pair), by exhaustive
/// enumeration of the joint law of `(U_a, U_b)`.
pub fn exact_conditional_entropy(n: usize, dist: &JointEdgeDistribution, variant: SourceVariant) -> Result<f64> {
    let exact = crate::exact::ExactJoint::new(n, dist)?;
    Ok(exact.conditional_entropy(variant.source_kind(), variant.side_kind()))
}
