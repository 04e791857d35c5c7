//! Seeded experiment drivers. Each takes an [`ExperimentSpec`] and returns
//! typed rows that serialize to CSV; identical specs give identical bytes.

use std::io::Write;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use statrs::statistics::{Data, OrderStatistics};

use crate::alignment::{
    alignment_statistic, concentration_bounds, expected_statistic, map_sense, PermutationShape, Sense,
};
use crate::codec::{
    error_bound, normalized_spectrum, simulate_error_rate, CodecConfig, SimulationReport, SimulationRow,
};
use crate::error::{Error, Result};
use crate::exact::{structural_entropy, ExactJoint};
use crate::graph::pair_count;
use crate::model::{
    entropy_bits, entropy_report, h2, log_marginal_graph_prob, sample_pair, scan_relabelings,
    subsampling_conditional_entropy, DistributionSpec, JointEdgeDistribution, ObjectKind, Observation, Side,
    SourceVariant,
};
use crate::permutation::{factorial, Permutation};
use crate::rng::{derive_seed, run_trials, DEFAULT_SEED};

/// Sandwich inequalities may be violated by at most this much (rounding).
pub const SANDWICH_TOLERANCE: f64 = 1e-9;

/// Monte Carlo means further than this many standard errors from their
/// expectation are reported as failures.
pub const Z_LIMIT: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExperimentKind {
    ConvergenceSweep,
    SandwichCheck,
    RateSweep,
    BoundComparison,
    StructuralEntropyCheck,
    AlignmentConcentration,
}

fn default_model() -> DistributionSpec {
    DistributionSpec::subsampling(0.5, 0.5)
}
fn default_trials() -> u64 {
    1000
}
fn default_seed() -> u64 {
    DEFAULT_SEED
}
fn default_variant() -> SourceVariant {
    SourceVariant::GraphGivenStructure
}
fn default_delta() -> f64 {
    0.5
}
fn default_rates() -> Vec<f64> {
    (1..=10).map(|i| 0.15 * i as f64).collect()
}
fn default_codebooks() -> u64 {
    20
}
fn default_tail_deltas() -> Vec<f64> {
    vec![0.5, 1.0]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    #[serde(default = "default_model")]
    pub model: DistributionSpec,
    #[serde(default)]
    pub n_list: Vec<usize>,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Where the CLI writes the CSV; stdout when absent.
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Source/side pair for convergence and rate sweeps.
    #[serde(default = "default_variant")]
    pub variant: SourceVariant,
    /// Typicality slack, and the spectrum tail threshold.
    #[serde(default = "default_delta")]
    pub delta: f64,
    /// Rate grid of a rate sweep, bits per pair.
    #[serde(default = "default_rates")]
    pub rates: Vec<f64>,
    /// Codebooks per rate-sweep cell.
    #[serde(default = "default_codebooks")]
    pub codebooks: u64,
    /// Per-pair deviations for alignment tail frequencies.
    #[serde(default = "default_tail_deltas")]
    pub tail_deltas: Vec<f64>,
    /// Single point for a bound comparison; a fixed grid when absent.
    #[serde(default)]
    pub bound: Option<PriorBoundInputs>,
}

impl ExperimentSpec {
    pub fn new(kind: ExperimentKind, n_list: Vec<usize>, trials: u64) -> Self {
        ExperimentSpec {
            kind,
            model: default_model(),
            n_list,
            trials,
            seed: default_seed(),
            output: None,
            variant: default_variant(),
            delta: default_delta(),
            rates: default_rates(),
            codebooks: default_codebooks(),
            tail_deltas: default_tail_deltas(),
            bound: None,
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let spec: ExperimentSpec = serde_json::from_str(s)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if self.kind != ExperimentKind::BoundComparison && self.n_list.is_empty() {
            return Err(Error::InvalidArgument("n_list is empty".into()));
        }
        if self.n_list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(format!(
                "n_list {:?} is not strictly increasing",
                self.n_list
            )));
        }
        if self.n_list.first().is_some_and(|&n| n < 2) {
            return Err(Error::InvalidArgument("every n must be at least 2".into()));
        }
        if !self.delta.is_finite() || self.delta <= 0.0 {
            return Err(Error::InvalidArgument(format!("delta {} must be > 0", self.delta)));
        }
        if self.codebooks == 0 {
            return Err(Error::InvalidArgument("codebooks must be at least 1".into()));
        }
        self.model.build()?;
        Ok(())
    }

    pub fn distribution(&self) -> Result<JointEdgeDistribution> {
        self.model.build()
    }

    fn seed_for(&self, n: usize) -> u64 {
        derive_seed(self.seed, n as u64)
    }
}

/// Parameters of the earlier achievable rate `h2(pγ) - δ` for the
/// subsampling model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PriorBoundInputs {
    pub p: f64,
    pub gamma: f64,
    /// In `(0, 1 - p)`.
    pub epsilon: f64,
}

impl PriorBoundInputs {
    pub fn new(p: f64, gamma: f64, epsilon: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidArgument(format!("p = {p} is outside (0, 1)")));
        }
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidArgument(format!("gamma = {gamma} is outside [0, 1]")));
        }
        if !(epsilon > 0.0 && epsilon < 1.0 - p) {
            return Err(Error::InvalidArgument(format!(
                "epsilon = {epsilon} is outside (0, 1 - p)"
            )));
        }
        Ok(PriorBoundInputs { p, gamma, epsilon })
    }

    /// `(pγ)²(1 - (pγ)²)`.
    pub fn sigma2(&self) -> f64 {
        let q = (self.p * self.gamma).powi(2);
        q * (1.0 - q)
    }

    /// `min{1, (1-ε-p) / ((1-ε+p)(1-(pγ)²))}`.
    pub fn s(&self) -> f64 {
        let q = (self.p * self.gamma).powi(2);
        let ratio = (1.0 - self.epsilon - self.p) / ((1.0 - self.epsilon + self.p) * (1.0 - q));
        ratio.min(1.0)
    }

    /// `2 s² σ² / (s + 2)²`.
    pub fn delta_prior(&self) -> f64 {
        let s = self.s();
        2.0 * s * s * self.sigma2() / (s + 2.0).powi(2)
    }

    /// `h2(pγ) - δ_prior`.
    pub fn prior_bound(&self) -> f64 {
        h2(self.p * self.gamma) - self.delta_prior()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundComparison {
    pub p: f64,
    pub gamma: f64,
    pub epsilon: f64,
    pub sigma2: f64,
    pub s: f64,
    pub delta_prior: f64,
    pub prior_bound: f64,
    pub h_a_given_b: f64,
    /// `prior_bound - h_a_given_b`.
    pub gap: f64,
}

pub fn run_bound_comparison(inputs: &PriorBoundInputs) -> Result<BoundComparison> {
    let inputs = PriorBoundInputs::new(inputs.p, inputs.gamma, inputs.epsilon)?;
    let h = subsampling_conditional_entropy(inputs.p, inputs.gamma);
    let prior = inputs.prior_bound();
    Ok(BoundComparison {
        p: inputs.p,
        gamma: inputs.gamma,
        epsilon: inputs.epsilon,
        sigma2: inputs.sigma2(),
        s: inputs.s(),
        delta_prior: inputs.delta_prior(),
        prior_bound: prior,
        h_a_given_b: h,
        gap: prior - h,
    })
}

/// Five densities by four sampling probabilities, `ε = (1 - p)/2`.
pub fn bound_grid() -> Vec<PriorBoundInputs> {
    let mut out = Vec::new();
    for p in [0.1, 0.3, 0.5, 0.7, 0.9] {
        for gamma in [0.25, 0.5, 0.75, 1.0] {
            out.push(PriorBoundInputs {
                p,
                gamma,
                epsilon: (1.0 - p) / 2.0,
            });
        }
    }
    out
}

/// Summary of one normalized spectrum over trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    /// `conditional`, `joint-max` or `alignment`.
    pub quantity: String,
    pub n: usize,
    pub trials: u64,
    /// Trials where the quantity was finite.
    pub finite: u64,
    pub mean: f64,
    pub std_error: f64,
    pub q05: f64,
    pub median: f64,
    pub q95: f64,
    pub reference: f64,
    pub mean_deviation: f64,
    pub median_deviation: f64,
    pub tail_threshold: f64,
    /// Fraction of trials deviating from `reference` by more than `tail_threshold`.
    pub tail_frequency: f64,
    pub tail_bound: Option<f64>,
}

fn summarize(
    quantity: &str,
    n: usize,
    trials: u64,
    values: Vec<f64>,
    reference: f64,
    threshold: f64,
    bound: Option<f64>,
) -> SpectrumRow {
    let finite = values.len() as u64;
    let k = values.len() as f64;
    let mean = values.iter().sum::<f64>() / k;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0).max(1.0);
    let tail = values.iter().filter(|v| (*v - reference).abs() > threshold).count() as f64;
    let mut data = Data::new(values);
    let median = data.median();
    SpectrumRow {
        quantity: quantity.to_string(),
        n,
        trials,
        finite,
        mean,
        std_error: (var / k).sqrt(),
        q05: data.quantile(0.05),
        median,
        q95: data.quantile(0.95),
        reference,
        mean_deviation: (mean - reference).abs(),
        median_deviation: (median - reference).abs(),
        tail_threshold: threshold,
        tail_frequency: tail / trials as f64,
        tail_bound: bound,
    }
}

/// `2^{-(C(n,2)δ - n log2 n)} + 2^{-2δ²C(n,2)/(log2 C)²}`, clamped to 1:
/// the chance that the joint max spectrum deviates from `H(A,B)` by more
/// than `2δ`. `C` is the smallest nonzero cell probability.
pub fn joint_max_tail_bound(n: usize, delta: f64, dist: &JointEdgeDistribution) -> f64 {
    let m = pair_count(n) as f64;
    let nf = n as f64;
    let union = (-(m * delta - nf * nf.log2())).exp2();
    let range = dist.min_support_prob().log2();
    let hoeffding = if range == 0.0 {
        0.0
    } else {
        (-2.0 * delta * delta * m / (range * range)).exp2()
    };
    (union + hoeffding).min(1.0)
}

struct SpectrumTrial {
    conditional: Option<f64>,
    joint_max: Option<f64>,
    alignment: Option<f64>,
}

/// Per `n`: the conditional spectrum of `spec.variant` against `H(A|B)`,
/// the joint max-over-relabelling spectrum against `H(A,B)`, and (binary
/// non-degenerate models) the optimal alignment density against `p11`.
pub fn run_convergence_sweep(spec: &ExperimentSpec) -> Result<Vec<SpectrumRow>> {
    spec.validate()?;
    let dist = spec.distribution()?;
    let report = entropy_report(&dist);
    let sense = map_sense(&dist).ok();
    let both = dist.cell_index(1, 1);
    let mut rows = Vec::new();
    for &n in &spec.n_list {
        let m = pair_count(n) as f64;
        let log_n_fact = (factorial(n) as f64).log2();
        let trials = run_trials(spec.seed_for(n), spec.trials, |_, rng| -> Result<SpectrumTrial> {
            let (ga, gb) = sample_pair(&dist, n, rng)?;
            let scan = scan_relabelings(&ga, &gb, &dist)?;
            let conditional = if spec.variant == SourceVariant::GraphGivenStructure {
                // log P(ga | sb) = log Σ_π P(ga, π(gb)) - log n! - log P_B(gb)
                let side = log_marginal_graph_prob(&gb, &dist, Side::B)?;
                scan.log_sum.given(side + log_n_fact).surprisal().map(|s| s / m)
            } else {
                let ua = Observation::of_kind(&ga, spec.variant.source_kind())?;
                let ub = Observation::of_kind(&gb, spec.variant.side_kind())?;
                normalized_spectrum(&ua, &ub, spec.variant, &dist)?
            };
            let alignment = sense.map(|s| {
                let best = match s {
                    Sense::Max => scan.cell_max[both],
                    Sense::Min => scan.cell_min[both],
                };
                best as f64 / m
            });
            Ok(SpectrumTrial {
                conditional,
                joint_max: scan.log_max.surprisal().map(|s| s / m),
                alignment,
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let collect = |f: fn(&SpectrumTrial) -> Option<f64>| -> Vec<f64> { trials.iter().filter_map(f).collect() };
        rows.push(summarize(
            "conditional",
            n,
            spec.trials,
            collect(|t| t.conditional),
            report.h_a_given_b,
            spec.delta,
            None,
        ));
        rows.push(summarize(
            "joint-max",
            n,
            spec.trials,
            collect(|t| t.joint_max),
            report.h_ab,
            2.0 * spec.delta,
            Some(joint_max_tail_bound(n, spec.delta, &dist)),
        ));
        if sense.is_some() {
            rows.push(summarize(
                "alignment",
                n,
                spec.trials,
                collect(|t| t.alignment),
                dist.prob(1, 1),
                spec.delta,
                None,
            ));
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SandwichRow {
    pub n: usize,
    pub inequality: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`; negative means violated.
    pub margin: f64,
    pub holds: bool,
}

/// Exact entropies (bits, whole graph) at one `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactEntropies {
    pub ga_given_gb: f64,
    pub ga_given_sb: f64,
    pub sa_given_gb: f64,
    pub sa_given_sb: f64,
    pub ga_given_sa: f64,
    pub gb_given_sb: f64,
}

impl ExactEntropies {
    pub fn from_exact(j: &ExactJoint) -> Self {
        use ObjectKind::{Graph, Structure};
        ExactEntropies {
            ga_given_gb: j.conditional_entropy(Graph, Graph),
            ga_given_sb: j.conditional_entropy(Graph, Structure),
            sa_given_gb: j.conditional_entropy(Structure, Graph),
            sa_given_sb: j.conditional_entropy(Structure, Structure),
            ga_given_sa: j.graph_given_structure(Side::A),
            gb_given_sb: j.graph_given_structure(Side::B),
        }
    }

    /// `(name, lhs, rhs)` for each `lhs <= rhs`.
    pub fn inequalities(&self) -> [(&'static str, f64, f64); 6] {
        let e = self;
        [
            ("H(Ga|Gb) <= H(Ga|Sb)", e.ga_given_gb, e.ga_given_sb),
            (
                "H(Ga|Sb) <= H(Ga|Gb) + H(Gb|Sb)",
                e.ga_given_sb,
                e.ga_given_gb + e.gb_given_sb,
            ),
            (
                "H(Ga|Gb) - H(Ga|Sa) <= H(Sa|Gb)",
                e.ga_given_gb - e.ga_given_sa,
                e.sa_given_gb,
            ),
            ("H(Sa|Gb) <= H(Ga|Gb)", e.sa_given_gb, e.ga_given_gb),
            ("H(Sa|Gb) <= H(Sa|Sb)", e.sa_given_gb, e.sa_given_sb),
            ("H(Sa|Sb) <= H(Ga|Sb)", e.sa_given_sb, e.ga_given_sb),
        ]
    }
}

pub fn run_sandwich_check(spec: &ExperimentSpec) -> Result<Vec<SandwichRow>> {
    spec.validate()?;
    let dist = spec.distribution()?;
    let mut rows = Vec::new();
    for &n in &spec.n_list {
        let e = ExactEntropies::from_exact(&ExactJoint::new(n, &dist)?);
        for (name, lhs, rhs) in e.inequalities() {
            rows.push(SandwichRow {
                n,
                inequality: name.to_string(),
                lhs,
                rhs,
                margin: rhs - lhs,
                holds: rhs - lhs >= -SANDWICH_TOLERANCE,
            });
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructuralEntropyRow {
    pub n: usize,
    /// Exact `H(S)` of the A-side marginal.
    pub h_structure: f64,
    /// `H(G) = C(n,2) H(A)`.
    pub h_graph: f64,
    /// `C(n,2) H(A) - n log2 n`.
    pub approximation: f64,
    /// `h_structure - approximation`.
    pub residual: f64,
    pub log2_n_factorial: f64,
    /// `H(G) - H(S)`.
    pub labelling_entropy: f64,
}

pub fn run_structural_entropy_check(spec: &ExperimentSpec) -> Result<Vec<StructuralEntropyRow>> {
    spec.validate()?;
    let dist = spec.distribution()?;
    let h_a = entropy_bits(dist.marginal_a());
    spec.n_list
        .iter()
        .map(|&n| {
            let h_s = structural_entropy(n, dist.marginal_a())?;
            let h_g = pair_count(n) as f64 * h_a;
            let approx = h_g - n as f64 * (n as f64).log2();
            Ok(StructuralEntropyRow {
                n,
                h_structure: h_s,
                h_graph: h_g,
                approximation: approx,
                residual: h_s - approx,
                log2_n_factorial: (factorial(n) as f64).log2(),
                labelling_entropy: h_g - h_s,
            })
        })
        .collect()
}

/// One row per `(n, R)`, pooled over `spec.codebooks` codebooks of
/// `spec.trials` trials each.
pub fn run_rate_sweep(spec: &ExperimentSpec) -> Result<Vec<SimulationRow>> {
    spec.validate()?;
    let dist = spec.distribution()?;
    let h = entropy_report(&dist).h_a_given_b;
    let mut rows = Vec::new();
    for &n in &spec.n_list {
        for &rate in &spec.rates {
            let mut pooled = SimulationReport {
                variant: spec.variant,
                n,
                rate,
                delta: spec.delta,
                seed: spec.seed,
                trials: 0,
                errors: 0,
                none_typical: 0,
                ambiguous: 0,
                atypical: 0,
                bound: 0.0,
            };
            let mut bin_count = 1;
            for c in 0..spec.codebooks {
                let config = CodecConfig {
                    n,
                    dist: dist.clone(),
                    variant: spec.variant,
                    rate,
                    delta: spec.delta,
                    seed: derive_seed(spec.seed_for(n), c),
                };
                bin_count = config.bin_count()?;
                let r = simulate_error_rate(&config, spec.trials)?;
                pooled.trials += r.trials;
                pooled.errors += r.errors;
                pooled.none_typical += r.none_typical;
                pooled.ambiguous += r.ambiguous;
                pooled.atypical += r.atypical;
            }
            pooled.bound = error_bound(pooled.atypical_rate(), n, h, spec.delta, bin_count);
            rows.push(pooled.row());
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationRow {
    pub n: usize,
    pub shape: String,
    pub fixed_points: usize,
    pub transpositions: usize,
    pub preserved_pairs: usize,
    pub trials: u64,
    pub mean: f64,
    pub std_error: f64,
    pub expected: f64,
    pub z_score: f64,
    pub delta: f64,
    /// Fraction of trials with `statistic - expected >= C(n,2) δ`.
    pub tail_frequency: f64,
    /// `exp(-C(n,2) δ²/2)`.
    pub tail_bound: f64,
}

/// Identity, the transposition of the first two vertices, and the full cycle.
pub fn reference_permutations(n: usize) -> Result<Vec<(&'static str, Permutation)>> {
    Ok(vec![
        ("identity", Permutation::identity(n)),
        ("transposition", Permutation::transposition(n, 0, 1)?),
        ("cycle", Permutation::cycle(n)),
    ])
}

pub fn run_alignment_concentration(spec: &ExperimentSpec) -> Result<Vec<ConcentrationRow>> {
    spec.validate()?;
    let dist = spec.distribution()?;
    dist.binary_entries()?;
    let mut rows = Vec::new();
    for &n in &spec.n_list {
        let m = pair_count(n) as f64;
        let perms = reference_permutations(n)?;
        let samples = run_trials(spec.seed_for(n), spec.trials, |_, rng| -> Result<Vec<u64>> {
            let (ga, gb) = sample_pair(&dist, n, rng)?;
            perms.iter().map(|(_, p)| alignment_statistic(&ga, &gb, p)).collect()
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        for (i, (name, p)) in perms.iter().enumerate() {
            let shape = PermutationShape::of(p);
            let expected = expected_statistic(&shape, &dist, n)?;
            let values: Vec<f64> = samples.iter().map(|s| s[i] as f64).collect();
            let k = values.len() as f64;
            let mean = values.iter().sum::<f64>() / k;
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0).max(1.0);
            let std_error = (var / k).sqrt();
            let z_score = if std_error > 0.0 {
                (mean - expected) / std_error
            } else if (mean - expected).abs() < 1e-12 {
                0.0
            } else {
                f64::INFINITY
            };
            for &delta in &spec.tail_deltas {
                let tail = values.iter().filter(|&&v| v - expected >= m * delta).count() as f64;
                rows.push(ConcentrationRow {
                    n,
                    shape: name.to_string(),
                    fixed_points: shape.fixed_points,
                    transpositions: shape.transpositions,
                    preserved_pairs: shape.preserved_pairs,
                    trials: spec.trials,
                    mean,
                    std_error,
                    expected,
                    z_score,
                    delta,
                    tail_frequency: tail / k,
                    tail_bound: concentration_bounds(n, delta, &dist).single_permutation,
                });
            }
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExperimentOutput {
    Spectrum(Vec<SpectrumRow>),
    Sandwich(Vec<SandwichRow>),
    Rates(Vec<SimulationRow>),
    Bounds(Vec<BoundComparison>),
    StructuralEntropy(Vec<StructuralEntropyRow>),
    Concentration(Vec<ConcentrationRow>),
}

fn write_rows<W: Write, T: Serialize>(rows: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

impl ExperimentOutput {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        match self {
            ExperimentOutput::Spectrum(r) => write_rows(r, out),
            ExperimentOutput::Sandwich(r) => write_rows(r, out),
            ExperimentOutput::Rates(r) => write_rows(r, out),
            ExperimentOutput::Bounds(r) => write_rows(r, out),
            ExperimentOutput::StructuralEntropy(r) => write_rows(r, out),
            ExperimentOutput::Concentration(r) => write_rows(r, out),
        }
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
    }

    /// Checks the experiment itself asserts: sandwich inequalities, and
    /// Monte Carlo means and tails of the alignment statistic.
    pub fn failures(&self) -> Vec<String> {
        match self {
            ExperimentOutput::Sandwich(rows) => rows
                .iter()
                .filter(|r| !r.holds)
                .map(|r| format!("n={}: {} violated by {}", r.n, r.inequality, -r.margin))
                .collect(),
            ExperimentOutput::Concentration(rows) => rows
                .iter()
                .flat_map(|r| {
                    let mut out = Vec::new();
                    if r.z_score.abs() > Z_LIMIT {
                        out.push(format!(
                            "n={} {}: mean {} is {} SE from {}",
                            r.n, r.shape, r.mean, r.z_score, r.expected
                        ));
                    }
                    if r.tail_frequency > r.tail_bound {
                        out.push(format!(
                            "n={} {} delta={}: tail {} exceeds bound {}",
                            r.n, r.shape, r.delta, r.tail_frequency, r.tail_bound
                        ));
                    }
                    out
                })
                .collect(),
            _ => Vec::new(),
        }
    }
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    spec.validate()?;
    Ok(match spec.kind {
        ExperimentKind::ConvergenceSweep => ExperimentOutput::Spectrum(run_convergence_sweep(spec)?),
        ExperimentKind::SandwichCheck => ExperimentOutput::Sandwich(run_sandwich_check(spec)?),
        ExperimentKind::RateSweep => ExperimentOutput::Rates(run_rate_sweep(spec)?),
        ExperimentKind::BoundComparison => {
            let points = match &spec.bound {
                Some(b) => vec![*b],
                None => bound_grid(),
            };
            ExperimentOutput::Bounds(points.iter().map(run_bound_comparison).collect::<Result<_>>()?)
        }
        ExperimentKind::StructuralEntropyCheck => {
            ExperimentOutput::StructuralEntropy(run_structural_entropy_check(spec)?)
        }
        ExperimentKind::AlignmentConcentration => ExperimentOutput::Concentration(run_alignment_concentration(spec)?),
    })
}
