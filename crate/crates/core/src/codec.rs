//! Random binning with a typicality decoder.
//!
//! The encoder sends only the bin of `U_a`. The decoder scans every candidate
//! of the compressed kind and keeps those in the received bin that are
//! typical with the side information `U_b`; it succeeds when exactly one
//! remains. Bins come from a keyed hash of the object's canonical text, so a
//! seed fixes one codebook of the random ensemble.

use std::collections::HashMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::alignment::{map_sense, optimize_alignment, Sense};
use crate::error::{Error, Result};
use crate::exact::ExactJoint;
use crate::graph::{pair_count, LabelledGraph};
use crate::logprob::LogProb;
use crate::model::{
    entropy_report, log_conditional, max_perm_log_joint, sample_pair, JointEdgeDistribution, ObjectKind, Observation,
    Side, SourceVariant,
};
use crate::rng::{derive_seed, run_trials, trial_rng, DEFAULT_SEED};
use crate::structure::{Limits, StructureKey};

/// Largest supported `log2(bin_count)`.
pub const MAX_BIN_EXPONENT: u32 = 63;

/// `m R` is rounded up, but values within this of an integer count as that
/// integer so that e.g. `10 * 0.7` gives 7 bits, not 8.
const CEIL_SLACK: f64 = 1e-9;

/// Child-seed label for the per-trial samplers of a simulation.
const SAMPLING_LABEL: u64 = 1;

fn default_seed() -> u64 {
    DEFAULT_SEED
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodecConfig {
    pub n: usize,
    pub dist: JointEdgeDistribution,
    pub variant: SourceVariant,
    /// Bits per vertex pair.
    pub rate: f64,
    pub delta: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

impl CodecConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidArgument(format!("n = {} has no vertex pairs", self.n)));
        }
        if !self.rate.is_finite() || self.rate < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "rate {} must be finite and >= 0",
                self.rate
            )));
        }
        if !self.delta.is_finite() || self.delta <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "delta {} must be finite and > 0",
                self.delta
            )));
        }
        self.bin_exponent().map(|_| ())
    }

    pub fn pair_count(&self) -> usize {
        pair_count(self.n)
    }

    /// `ceil(C(n,2) R)`.
    pub fn bin_exponent(&self) -> Result<u32> {
        let bits = (self.pair_count() as f64 * self.rate - CEIL_SLACK).ceil().max(0.0);
        if bits > MAX_BIN_EXPONENT as f64 {
            return Err(Error::InvalidArgument(format!(
                "rate {} needs 2^{bits} bins, limit is 2^{MAX_BIN_EXPONENT}",
                self.rate
            )));
        }
        Ok(bits as u32)
    }

    pub fn bin_count(&self) -> Result<u64> {
        Ok(1u64 << self.bin_exponent()?)
    }

    pub fn bins(&self) -> Result<BinAssignment> {
        BinAssignment::new(self.seed, self.bin_count()?)
    }

    /// Per-pair `H(A|B)` of the model.
    pub fn conditional_entropy(&self) -> f64 {
        entropy_report(&self.dist).h_a_given_b
    }
}

/// One codebook: a keyed hash of the canonical text reduced mod `bin_count`.
/// With power-of-two counts the bin is the low bits of one hash, so doubling
/// the count splits every bin in two.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinAssignment {
    pub seed: u64,
    pub bin_count: u64,
}

impl BinAssignment {
    pub fn new(seed: u64, bin_count: u64) -> Result<Self> {
        if bin_count == 0 {
            return Err(Error::InvalidArgument("bin_count must be at least 1".into()));
        }
        Ok(BinAssignment { seed, bin_count })
    }

    pub fn bin_of(&self, u: &Observation) -> u64 {
        let (tag, text) = match u {
            Observation::Graph(g) => (b'G', g.to_string()),
            Observation::Structure(s) => (b'S', s.to_string()),
        };
        let mut h = Sha256::new();
        h.update(self.seed.to_le_bytes());
        h.update([tag]);
        h.update(text.as_bytes());
        let digest = h.finalize();
        let mut word = [0u8; 8];
        word.copy_from_slice(&digest[..8]);
        u64::from_le_bytes(word) % self.bin_count
    }

    pub fn is_injective_on<'a, I: IntoIterator<Item = &'a Observation>>(&self, objects: I) -> bool {
        let mut seen = std::collections::HashSet::new();
        objects.into_iter().all(|u| seen.insert(self.bin_of(u)))
    }
}

/// Bin index of `ua` under the configured codebook.
pub fn encode(ua: &Observation, config: &CodecConfig) -> Result<u64> {
    ua.expect_kind(config.variant.source_kind())?;
    Ok(config.bins()?.bin_of(ua))
}

/// `(1/C(n,2)) · (-log2 P(ua | ub))`, or `None` when the conditional
/// probability is zero.
pub fn normalized_spectrum(
    ua: &Observation,
    ub: &Observation,
    variant: SourceVariant,
    dist: &JointEdgeDistribution,
) -> Result<Option<f64>> {
    let m = pair_count(ua.representative().n()) as f64;
    Ok(log_conditional(ua, ub, variant, dist)?.surprisal().map(|s| s / m))
}

fn within(spectrum: Option<f64>, h: f64, delta: f64) -> bool {
    spectrum.is_some_and(|s| (s - h).abs() <= delta)
}

/// Membership of `(ua, ub)` in the conditionally typical set.
pub fn typicality_test(ua: &Observation, ub: &Observation, config: &CodecConfig) -> Result<bool> {
    let s = normalized_spectrum(ua, ub, config.variant, &config.dist)?;
    Ok(within(s, config.conditional_entropy(), config.delta))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodeOutcome {
    Decoded(Observation),
    /// No typical candidate in the bin.
    NoneTypical,
    /// This many typical candidates share the bin.
    Ambiguous(usize),
}

impl DecodeOutcome {
    pub fn is_correct(&self, truth: &Observation) -> bool {
        matches!(self, DecodeOutcome::Decoded(u) if u == truth)
    }
}

/// Every object of `kind` on `n` vertices over `k + 1` symbols, in
/// enumeration order.
pub fn candidates(n: usize, k: u8, kind: ObjectKind, limits: &Limits) -> Result<Vec<Observation>> {
    Ok(match kind {
        ObjectKind::Graph => crate::structure::enumerate_graphs_with(n, k, limits)?
            .map(Observation::Graph)
            .collect(),
        ObjectKind::Structure => crate::structure::enumerate_structures_with(n, k, limits)?
            .map(Observation::Structure)
            .collect(),
    })
}

/// Decoder with the candidate list and its bins precomputed.
#[derive(Clone, Debug)]
pub struct Decoder {
    config: CodecConfig,
    h: f64,
    bins: BinAssignment,
    candidates: Vec<Observation>,
    candidate_bins: Vec<u64>,
}

impl Decoder {
    pub fn new(config: &CodecConfig) -> Result<Self> {
        Self::with_limits(config, &Limits::default())
    }

    pub fn with_limits(config: &CodecConfig, limits: &Limits) -> Result<Self> {
        config.validate()?;
        limits.check_permutations(config.n)?;
        let bins = config.bins()?;
        let candidates = candidates(config.n, config.dist.ka(), config.variant.source_kind(), limits)?;
        let candidate_bins = candidates.par_iter().map(|c| bins.bin_of(c)).collect();
        Ok(Decoder {
            config: config.clone(),
            h: config.conditional_entropy(),
            bins,
            candidates,
            candidate_bins,
        })
    }

    pub fn config(&self) -> &CodecConfig {
        &self.config
    }

    pub fn candidates(&self) -> &[Observation] {
        &self.candidates
    }

    pub fn encode(&self, ua: &Observation) -> Result<u64> {
        ua.expect_kind(self.config.variant.source_kind())?;
        Ok(self.bins.bin_of(ua))
    }

    pub fn is_typical(&self, ua: &Observation, ub: &Observation) -> Result<bool> {
        let s = normalized_spectrum(ua, ub, self.config.variant, &self.config.dist)?;
        Ok(within(s, self.h, self.config.delta))
    }

    pub fn decode(&self, bin: u64, ub: &Observation) -> Result<DecodeOutcome> {
        ub.expect_kind(self.config.variant.side_kind())?;
        let mut found = None;
        let mut count = 0;
        for (c, &b) in self.candidates.iter().zip(&self.candidate_bins) {
            if b == bin && self.is_typical(c, ub)? {
                count += 1;
                if found.is_none() {
                    found = Some(c);
                }
            }
        }
        Ok(match count {
            0 => DecodeOutcome::NoneTypical,
            1 => DecodeOutcome::Decoded(found.expect("one match").clone()),
            c => DecodeOutcome::Ambiguous(c),
        })
    }
}

/// One-shot decode; builds a [`Decoder`] each call.
pub fn decode(bin: u64, ub: &Observation, config: &CodecConfig) -> Result<DecodeOutcome> {
    Decoder::new(config)?.decode(bin, ub)
}

/// Error probability of one codebook split by decoder outcome.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ErrorBreakdown {
    pub total: f64,
    pub none_typical: f64,
    pub ambiguous: f64,
    /// A single typical candidate that is not the source.
    pub wrong: f64,
}

impl ErrorBreakdown {
    fn add(&mut self, other: &ErrorBreakdown) {
        self.total += other.total;
        self.none_typical += other.none_typical;
        self.ambiguous += other.ambiguous;
        self.wrong += other.wrong;
    }

    fn scale(&mut self, f: f64) {
        self.total *= f;
        self.none_typical *= f;
        self.ambiguous *= f;
        self.wrong *= f;
    }
}

#[derive(Clone, Copy, Debug)]
struct LawEntry {
    ua: u32,
    ub: u32,
    prob: f64,
    spectrum: Option<f64>,
    typical: bool,
}

/// The exact joint law of `(U_a, U_b)` with typicality of every support
/// point, for computing decoding error of a codebook without sampling.
#[derive(Clone, Debug)]
pub struct TypicalityTable {
    variant: SourceVariant,
    n: usize,
    delta: f64,
    h: f64,
    candidates: Vec<Observation>,
    entries: Vec<LawEntry>,
    /// Typical `ua` ids for each `ub` id.
    typical_by_side: Vec<Vec<u32>>,
}

impl TypicalityTable {
    pub fn new(n: usize, dist: &JointEdgeDistribution, variant: SourceVariant, delta: f64) -> Result<Self> {
        let exact = ExactJoint::new(n, dist)?;
        Self::from_exact(&exact, dist, variant, delta)
    }

    pub fn from_exact(
        exact: &ExactJoint,
        dist: &JointEdgeDistribution,
        variant: SourceVariant,
        delta: f64,
    ) -> Result<Self> {
        if !delta.is_finite() || delta <= 0.0 {
            return Err(Error::InvalidArgument(format!("delta {delta} must be finite and > 0")));
        }
        let (source, side) = (variant.source_kind(), variant.side_kind());
        let h = entropy_report(dist).h_a_given_b;
        let candidates: Vec<Observation> = (0..exact.object_count(Side::A, source) as u32)
            .map(|id| exact.object(Side::A, source, id))
            .collect();
        let sides: Vec<Observation> = (0..exact.object_count(Side::B, side) as u32)
            .map(|id| exact.object(Side::B, side, id))
            .collect();
        let entries = exact
            .law(source, side)
            .par_iter()
            .map(|&((ua, ub), prob)| {
                let spectrum = normalized_spectrum(&candidates[ua as usize], &sides[ub as usize], variant, dist)?;
                Ok(LawEntry {
                    ua,
                    ub,
                    prob,
                    spectrum,
                    typical: within(spectrum, h, delta),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut typical_by_side = vec![Vec::new(); sides.len()];
        for e in entries.iter().filter(|e| e.typical) {
            typical_by_side[e.ub as usize].push(e.ua);
        }
        Ok(TypicalityTable {
            variant,
            n: exact.n(),
            delta,
            h,
            candidates,
            entries,
            typical_by_side,
        })
    }

    pub fn variant(&self) -> SourceVariant {
        self.variant
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn candidates(&self) -> &[Observation] {
        &self.candidates
    }

    /// `P((U_a, U_b) ∉ T)`.
    pub fn p_atypical(&self) -> f64 {
        self.entries.iter().filter(|e| !e.typical).map(|e| e.prob).sum()
    }

    /// Largest `|spectrum - H(A|B)|` over the support.
    pub fn max_spectrum_deviation(&self) -> f64 {
        self.entries
            .iter()
            .filter_map(|e| e.spectrum)
            .map(|s| (s - self.h).abs())
            .fold(0.0, f64::max)
    }

    /// Largest number of typical candidates for any side value.
    pub fn max_typical_set_size(&self) -> usize {
        self.typical_by_side.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Typical `(ua, ub)` pairs as observations.
    pub fn typical_pairs(&self) -> impl Iterator<Item = (u32, u32, f64)> + '_ {
        self.entries.iter().filter(|e| e.typical).map(|e| (e.ua, e.ub, e.prob))
    }

    /// Exact decoding error of the codebook `bins`.
    pub fn error_for(&self, bins: &BinAssignment) -> ErrorBreakdown {
        let candidate_bins: Vec<u64> = self.candidates.iter().map(|c| bins.bin_of(c)).collect();
        // per side value: bin -> (typical candidates in it, first such candidate)
        let occupancy: Vec<HashMap<u64, (usize, u32)>> = self
            .typical_by_side
            .iter()
            .map(|typical| {
                let mut map: HashMap<u64, (usize, u32)> = HashMap::new();
                for &ua in typical {
                    map.entry(candidate_bins[ua as usize]).or_insert((0, ua)).0 += 1;
                }
                map
            })
            .collect();
        let mut out = ErrorBreakdown::default();
        for e in &self.entries {
            let bin = candidate_bins[e.ua as usize];
            match occupancy[e.ub as usize].get(&bin) {
                None => out.none_typical += e.prob,
                Some(&(1, only)) if only == e.ua => {}
                Some(&(1, _)) => out.wrong += e.prob,
                Some(_) => out.ambiguous += e.prob,
            }
        }
        out.total = out.none_typical + out.ambiguous + out.wrong;
        out
    }

    /// Mean of [`Self::error_for`] over `seeds` codebooks with `bin_count` bins.
    pub fn average_error(&self, seeds: &[u64], bin_count: u64) -> Result<ErrorBreakdown> {
        if seeds.is_empty() {
            return Err(Error::InvalidArgument("need at least one seed".into()));
        }
        let per_seed: Vec<ErrorBreakdown> = seeds
            .par_iter()
            .map(|&s| BinAssignment::new(s, bin_count).map(|b| self.error_for(&b)))
            .collect::<Result<_>>()?;
        let mut acc = ErrorBreakdown::default();
        for e in &per_seed {
            acc.add(e);
        }
        acc.scale(1.0 / seeds.len() as f64);
        Ok(acc)
    }
}

/// `min(1, P(Tᶜ) + 2^{C(n,2)(H(A|B)+δ)} / bin_count)`: the expected number of
/// wrong typical candidates sharing the bin is at most the typical set size
/// over the bin count. At `R = H(A|B) + 2δ` the second term is `2^{-C(n,2)δ}`.
pub fn error_bound(p_atypical: f64, n: usize, h: f64, delta: f64, bin_count: u64) -> f64 {
    let m = pair_count(n) as f64;
    (p_atypical + (m * (h + delta)).exp2() / bin_count as f64).min(1.0)
}

/// Monte Carlo outcome of encode→decode.
#[derive(Clone, Debug, PartialEq)]
pub struct SimulationReport {
    pub variant: SourceVariant,
    pub n: usize,
    pub rate: f64,
    pub delta: f64,
    pub seed: u64,
    pub trials: u64,
    pub errors: u64,
    pub none_typical: u64,
    pub ambiguous: u64,
    /// Trials whose true pair was atypical.
    pub atypical: u64,
    /// [`error_bound`] with the empirical atypical frequency.
    pub bound: f64,
}

/// CSV projection of a [`SimulationReport`].
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SimulationRow {
    pub variant: String,
    pub n: usize,
    #[serde(rename = "R")]
    pub rate: f64,
    pub delta: f64,
    pub seed: u64,
    pub trials: u64,
    pub errors: u64,
    pub none_typical: u64,
    pub ambiguous: u64,
    pub bound: f64,
}

impl SimulationReport {
    pub fn error_rate(&self) -> f64 {
        self.errors as f64 / self.trials as f64
    }

    pub fn atypical_rate(&self) -> f64 {
        self.atypical as f64 / self.trials as f64
    }

    /// Binomial standard error of the error rate.
    pub fn standard_error(&self) -> f64 {
        let p = self.error_rate();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    pub fn row(&self) -> SimulationRow {
        SimulationRow {
            variant: self.variant.name().to_string(),
            n: self.n,
            rate: self.rate,
            delta: self.delta,
            seed: self.seed,
            trials: self.trials,
            errors: self.errors,
            none_typical: self.none_typical,
            ambiguous: self.ambiguous,
            bound: self.bound,
        }
    }
}

pub fn write_simulation_csv<W: Write>(reports: &[SimulationReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in reports {
        w.serialize(r.row())?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Copy, Default)]
struct TrialTally {
    error: bool,
    none_typical: bool,
    ambiguous: bool,
    atypical: bool,
}

/// Samples `(Ga, Gb)`, projects to the variant's kinds, encodes with the
/// codebook `config.seed` and decodes. Trial `t` samples from its own stream.
pub fn simulate_error_rate(config: &CodecConfig, trials: u64) -> Result<SimulationReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let decoder = Decoder::new(config)?;
    let sampler_seed = derive_seed(config.seed, SAMPLING_LABEL);
    let tallies = run_trials(sampler_seed, trials, |_, rng| -> Result<TrialTally> {
        let (ga, gb) = sample_pair(&config.dist, config.n, rng)?;
        let ua = Observation::of_kind(&ga, config.variant.source_kind())?;
        let ub = Observation::of_kind(&gb, config.variant.side_kind())?;
        let outcome = decoder.decode(decoder.encode(&ua)?, &ub)?;
        Ok(TrialTally {
            error: !outcome.is_correct(&ua),
            none_typical: outcome == DecodeOutcome::NoneTypical,
            ambiguous: matches!(outcome, DecodeOutcome::Ambiguous(_)),
            atypical: !decoder.is_typical(&ua, &ub)?,
        })
    });
    let mut report = SimulationReport {
        variant: config.variant,
        n: config.n,
        rate: config.rate,
        delta: config.delta,
        seed: config.seed,
        trials,
        errors: 0,
        none_typical: 0,
        ambiguous: 0,
        atypical: 0,
        bound: 0.0,
    };
    for t in tallies {
        let t = t?;
        report.errors += t.error as u64;
        report.none_typical += t.none_typical as u64;
        report.ambiguous += t.ambiguous as u64;
        report.atypical += t.atypical as u64;
    }
    report.bound = error_bound(
        report.atypical_rate(),
        config.n,
        config.conditional_entropy(),
        config.delta,
        config.bin_count()?,
    );
    Ok(report)
}

/// Per-clause slacks of the unweighted typicality decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypicalSetParams {
    pub delta: f64,
    /// Edge-density window of `Ga`: `δ / |log2(p10/p00)|`.
    pub delta1: f64,
    /// Edge-density window of `Sb`: `δ / |log2(p01/p00)|`.
    pub delta2: f64,
    /// Alignment window: `δ / |log2(p11 p00 / (p10 p01))|`.
    pub delta3: f64,
    pub p00: f64,
    pub p01: f64,
    pub p10: f64,
    pub p11: f64,
    pub sense: Sense,
}

impl TypicalSetParams {
    /// Infinite windows arise when a log-ratio vanishes; that clause then
    /// always holds.
    pub fn new(delta: f64, dist: &JointEdgeDistribution) -> Result<Self> {
        if !delta.is_finite() || delta <= 0.0 {
            return Err(Error::InvalidArgument(format!("delta {delta} must be finite and > 0")));
        }
        let sense = map_sense(dist)?;
        let e = dist.binary_entries()?;
        let window = |ratio: f64| delta / ratio.log2().abs();
        Ok(TypicalSetParams {
            delta,
            delta1: window(e.p10 / e.p00),
            delta2: window(e.p01 / e.p00),
            delta3: window(e.alignment_ratio()),
            p00: e.p00,
            p01: e.p01,
            p10: e.p10,
            p11: e.p11,
            sense,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Clause {
    SourceEdgeCount,
    SideEdgeCount,
    Alignment,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecomposedTypicality {
    pub accepted: bool,
    pub source_density: f64,
    pub side_density: f64,
    /// Optimal statistic over `C(n,2)`.
    pub alignment_density: f64,
    pub failed: Vec<Clause>,
}

/// Three-window typicality test for a labelled `ga` and a structure `sb`.
pub fn unweighted_typicality_decomposed(
    ga: &LabelledGraph,
    sb: &StructureKey,
    params: &TypicalSetParams,
) -> Result<DecomposedTypicality> {
    let m = pair_count(ga.n()) as f64;
    let optimum = optimize_alignment(ga, sb.graph(), params.sense)?.value;
    let source_density = ga.edge_count() as f64 / m;
    let side_density = sb.edge_count() as f64 / m;
    let alignment_density = optimum as f64 / m;
    let mut failed = Vec::new();
    if (source_density - (params.p10 + params.p11)).abs() > params.delta1 {
        failed.push(Clause::SourceEdgeCount);
    }
    if (side_density - (params.p01 + params.p11)).abs() > params.delta2 {
        failed.push(Clause::SideEdgeCount);
    }
    if (alignment_density - params.p11).abs() > params.delta3 {
        failed.push(Clause::Alignment);
    }
    Ok(DecomposedTypicality {
        accepted: failed.is_empty(),
        source_density,
        side_density,
        alignment_density,
        failed,
    })
}

/// `(1/C(n,2)) · (-max_π log2 P(ga, π(gb)))`, or `None` if every relabelling
/// has probability zero.
pub fn joint_max_spectrum(ga: &LabelledGraph, gb: &LabelledGraph, dist: &JointEdgeDistribution) -> Result<Option<f64>> {
    let (best, _) = max_perm_log_joint(ga, gb, dist)?;
    let m = pair_count(ga.n()) as f64;
    Ok(match best {
        LogProb::Bits(b) => Some(-b / m),
        LogProb::Impossible => None,
    })
}

/// Whether the joint max-over-relabellings spectrum is within `slack` of `H(A,B)`.
pub fn joint_max_typicality(
    ga: &LabelledGraph,
    gb: &LabelledGraph,
    dist: &JointEdgeDistribution,
    slack: f64,
) -> Result<bool> {
    let s = joint_max_spectrum(ga, gb, dist)?;
    Ok(within(s, entropy_report(dist).h_ab, slack))
}

/// Convenience sampler for tests and experiments: one CER pair projected
/// onto the variant's kinds.
pub fn sample_observations(
    dist: &JointEdgeDistribution,
    n: usize,
    variant: SourceVariant,
    master: u64,
    trial: u64,
) -> Result<(Observation, Observation)> {
    let (ga, gb) = sample_pair(dist, n, &mut trial_rng(master, trial))?;
    Ok((
        Observation::of_kind(&ga, variant.source_kind())?,
        Observation::of_kind(&gb, variant.side_kind())?,
    ))
}
