//! Acceptance criteria 1-9. Runs as a plain binary (no libtest harness) so
//! every criterion prints one PASS/FAIL line in `cargo test` output.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use cergraph::alignment::{map_argmax_labellings, map_sense};
use cergraph::codec::{
    joint_max_typicality, simulate_error_rate, unweighted_typicality_decomposed, BinAssignment, CodecConfig,
    TypicalSetParams, TypicalityTable,
};
use cergraph::exact::{structural_entropy, ExactJoint};
use cergraph::experiments::{
    run_alignment_concentration, run_bound_comparison, run_convergence_sweep, ExactEntropies, ExperimentKind,
    ExperimentSpec, PriorBoundInputs, SpectrumRow,
};
use cergraph::model::{
    entropy_report, log_conditional, log_joint_graph_prob, log_marginal_graph_prob, log_structure_prob,
    max_perm_log_joint, max_two_sided_log_joint, sample_pair, subsampling_model, JointEdgeDistribution, ObjectKind,
    Observation, Side, SourceVariant,
};
use cergraph::permutation::factorial;
use cergraph::rng::{derive_seed, trial_rng, DEFAULT_SEED};
use cergraph::structure::{
    automorphism_count, canonicalize, enumerate_graphs, enumerate_permutations, enumerate_structures,
};
use cergraph::{pair_count, LabelledGraph, LogProb};

/// Probability sums and two-path agreements.
const PROB_TOL: f64 = 1e-9;
/// Closed-form vs enumerated structure probabilities.
const STRUCTURE_TOL: f64 = 1e-12;
/// Enumerated structural entropy vs its closed form.
const ENTROPY_TOL: f64 = 1e-6;
/// Sandwich inequalities may fail by rounding only.
const SANDWICH_TOL: f64 = 1e-9;
/// Monte Carlo mean vs expectation, in standard errors.
const Z_LIMIT: f64 = 3.0;
/// Float rounding allowed on the 3δ containment.
const CONTAINMENT_TOL: f64 = 1e-12;
/// Closed-form prior bound check.
const BOUND_TOL: f64 = 1e-12;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn weighted() -> JointEdgeDistribution {
    JointEdgeDistribution::new(vec![
        vec![0.30, 0.08, 0.04],
        vec![0.06, 0.20, 0.05],
        vec![0.03, 0.07, 0.17],
    ])
    .unwrap()
}

fn objects(n: usize, k: u8, kind: ObjectKind) -> Vec<Observation> {
    match kind {
        ObjectKind::Graph => enumerate_graphs(n, k).unwrap().map(Observation::Graph).collect(),
        ObjectKind::Structure => enumerate_structures(n, k)
            .unwrap()
            .map(Observation::Structure)
            .collect(),
    }
}

fn criterion_1() -> Outcome {
    let cases = [
        (3usize, subsampling_model(0.5, 0.5).unwrap()),
        (4, subsampling_model(0.5, 0.5).unwrap()),
        (3, weighted()),
    ];
    let mut checked = 0usize;
    for (n, d) in &cases {
        let n = *n;
        for (side, k) in [(Side::A, d.ka()), (Side::B, d.kb())] {
            // structure probabilities sum to one
            let total: f64 = enumerate_structures(n, k)
                .map_err(e)?
                .map(|s| log_structure_prob(&s, d, side).unwrap().prob())
                .sum();
            ensure((total - 1.0).abs() <= PROB_TOL, || {
                format!("n={n} {side:?}: structures sum to {total}")
            })?;

            // P_S(s) = (n!/|Aut|) P_G(g): class sizes are exact integers and
            // every member has the bit-identical graph probability
            let mut classes: std::collections::BTreeMap<_, Vec<LabelledGraph>> = Default::default();
            for g in enumerate_graphs(n, k).map_err(e)? {
                classes.entry(canonicalize(&g).map_err(e)?).or_default().push(g);
            }
            for (s, members) in &classes {
                let aut = automorphism_count(s.graph()).map_err(e)?;
                ensure(members.len() as u64 * aut == factorial(n), || {
                    format!("class {s} has {} members", members.len())
                })?;
                let lp = log_marginal_graph_prob(s.graph(), d, side).map_err(e)?;
                for g in members {
                    ensure(log_marginal_graph_prob(g, d, side).map_err(e)? == lp, || {
                        format!("{g} differs from {s}")
                    })?;
                }
                let direct: f64 = members
                    .iter()
                    .map(|g| log_marginal_graph_prob(g, d, side).unwrap().prob())
                    .sum();
                let formula = log_structure_prob(s, d, side).map_err(e)?.prob();
                ensure((direct - formula).abs() <= STRUCTURE_TOL, || {
                    format!("class {s}: {direct} vs {formula}")
                })?;
            }
        }

        // conditionals sum to one for every conditioning value
        for variant in SourceVariant::ALL {
            let sources = objects(n, d.ka(), variant.source_kind());
            for ub in objects(n, d.kb(), variant.side_kind()) {
                if log_marginal_graph_prob(ub.representative(), d, Side::B)
                    .map_err(e)?
                    .is_impossible()
                {
                    continue;
                }
                let total: f64 = sources
                    .iter()
                    .map(|ua| log_conditional(ua, &ub, variant, d).unwrap().prob())
                    .sum();
                ensure((total - 1.0).abs() <= PROB_TOL, || {
                    format!("n={n} {variant}: P(.|{ub:?}) sums to {total}")
                })?;
                checked += 1;
            }
        }

        // P(Ga | Sb): permutation sum vs direct sum over gb in the class
        let graphs_b: Vec<LabelledGraph> = enumerate_graphs(n, d.kb()).map_err(e)?.collect();
        let keys_b: Vec<_> = graphs_b.iter().map(|g| canonicalize(g).unwrap()).collect();
        for ga in enumerate_graphs(n, d.ka()).map_err(e)? {
            for sb in enumerate_structures(n, d.kb()).map_err(e)? {
                let mut joint = 0.0;
                let mut marginal = 0.0;
                for (gb, key) in graphs_b.iter().zip(&keys_b) {
                    if key == &sb {
                        joint += log_joint_graph_prob(&ga, gb, d).map_err(e)?.prob();
                        marginal += log_marginal_graph_prob(gb, d, Side::B).map_err(e)?.prob();
                    }
                }
                let via_sum = log_conditional(
                    &Observation::Graph(ga.clone()),
                    &Observation::Structure(sb.clone()),
                    SourceVariant::GraphGivenStructure,
                    d,
                )
                .map_err(e)?
                .prob();
                let direct = joint / marginal;
                ensure((via_sum - direct).abs() <= PROB_TOL, || {
                    format!("{ga} | {sb}: {via_sum} vs {direct}")
                })?;
            }
        }
    }
    Ok(format!(
        "{checked} conditional distributions normalized; class identities and both P(Ga|Sb) paths agree"
    ))
}

fn criterion_2() -> Outcome {
    let cases = [
        (3usize, subsampling_model(0.5, 0.5).unwrap()),
        (4, subsampling_model(0.5, 0.5).unwrap()),
        (3, weighted()),
    ];
    let mut min_margin = f64::INFINITY;
    for (n, d) in &cases {
        let joint = ExactJoint::new(*n, d).map_err(e)?;
        let ent = ExactEntropies::from_exact(&joint);
        for (name, lhs, rhs) in ent.inequalities() {
            ensure(rhs - lhs >= -SANDWICH_TOL, || {
                format!("n={n}: {name} fails, {lhs} > {rhs}")
            })?;
            min_margin = min_margin.min(rhs - lhs);
        }
        let log_fact = (factorial(*n) as f64).log2();
        for side in [Side::A, Side::B] {
            let gap = joint.graph_given_structure(side);
            ensure(gap <= log_fact + SANDWICH_TOL, || {
                format!("n={n}: H(G)-H(S) = {gap} > log2 n!")
            })?;
        }
    }
    let h = structural_entropy(3, &[0.5, 0.5]).map_err(e)?;
    // classes of sizes 1, 3, 3, 1 out of 8 equiprobable graphs
    let closed = 0.75 + 0.75 * (8.0f64 / 3.0).log2();
    ensure((h - closed).abs() <= ENTROPY_TOL, || {
        format!("H(S) = {h}, expected {closed}")
    })?;
    ensure((h - 1.8113).abs() <= 1e-4, || format!("H(S) = {h}"))?;
    Ok(format!(
        "six inequalities hold, smallest margin {min_margin:.3e}; H(S) at n=3, q=1/2 is {h:.6}"
    ))
}

fn criterion_3() -> Outcome {
    let dists = [
        subsampling_model(0.5, 0.5).unwrap(),
        subsampling_model(0.3, 0.8).unwrap(),
    ];
    for i in 0..100u64 {
        let d = &dists[(i % 2) as usize];
        let (ga, gb) = sample_pair(d, 4, &mut trial_rng(derive_seed(DEFAULT_SEED, 3), i)).map_err(e)?;
        let (one, witness) = max_perm_log_joint(&ga, &gb, d).map_err(e)?;
        let (two, _, _) = max_two_sided_log_joint(&ga, &gb, d).map_err(e)?;
        ensure(one == two, || format!("instance {i}: {one} vs {two}"))?;
        let again = log_joint_graph_prob(&ga, &gb.permuted(&witness).map_err(e)?, d).map_err(e)?;
        ensure(again == one, || format!("instance {i}: witness gives {again}"))?;
    }
    Ok("100 instances at n=4, one-sided and two-sided maxima identical".into())
}

fn criterion_4() -> Outcome {
    let mut spec = ExperimentSpec::new(ExperimentKind::AlignmentConcentration, vec![4, 6], 10_000);
    spec.tail_deltas = vec![0.5, 1.0];
    let rows = run_alignment_concentration(&spec).map_err(e)?;
    let mut worst: f64 = 0.0;
    for r in &rows {
        ensure(r.z_score.abs() <= Z_LIMIT, || {
            format!(
                "n={} {}: mean {} vs {} (z={})",
                r.n, r.shape, r.mean, r.expected, r.z_score
            )
        })?;
        ensure(r.tail_frequency <= r.tail_bound, || {
            format!(
                "n={} {} delta={}: tail {} > {}",
                r.n, r.shape, r.delta, r.tail_frequency, r.tail_bound
            )
        })?;
        worst = worst.max(r.z_score.abs());
    }
    Ok(format!("{} cells, largest |z| = {worst:.2}", rows.len()))
}

fn deviations(rows: &[SpectrumRow], quantity: &str, median: bool) -> Vec<(usize, f64, f64)> {
    rows.iter()
        .filter(|r| r.quantity == quantity)
        .map(|r| {
            (
                r.n,
                if median { r.median_deviation } else { r.mean_deviation },
                r.std_error,
            )
        })
        .collect()
}

fn strictly_decreasing(v: &[(usize, f64, f64)]) -> bool {
    v.windows(2).all(|w| w[1].1 < w[0].1)
}

fn show(v: &[(usize, f64, f64)]) -> String {
    v.iter()
        .map(|(n, d, se)| format!("{n}:{d:.4}±{se:.4}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn criterion_5() -> Outcome {
    let spec = ExperimentSpec::new(ExperimentKind::ConvergenceSweep, vec![4, 5, 6, 7, 8], 1000);
    let rows = run_convergence_sweep(&spec).map_err(e)?;
    let joint = deviations(&rows, "joint-max", false);
    let conditional = deviations(&rows, "conditional", false);
    let alignment = deviations(&rows, "alignment", true);
    let summary = format!(
        "joint [{}]; conditional [{}]; alignment median [{}]",
        show(&joint),
        show(&conditional),
        show(&alignment)
    );
    if strictly_decreasing(&joint) && strictly_decreasing(&conditional) && strictly_decreasing(&alignment) {
        Ok(summary)
    } else {
        Err(format!("deviations not strictly decreasing: {summary}"))
    }
}

fn criterion_6() -> Outcome {
    let d = subsampling_model(0.5, 0.5).unwrap();
    let h = entropy_report(&d).h_a_given_b;
    let delta = 0.5;
    let seeds: Vec<u64> = (0..200).map(|i| derive_seed(DEFAULT_SEED, 600 + i)).collect();
    let mut worst_slack = f64::INFINITY;
    for n in [3usize, 4] {
        let m = pair_count(n) as f64;
        let exact = ExactJoint::new(n, &d).map_err(e)?;
        for variant in SourceVariant::ALL {
            let table = TypicalityTable::from_exact(&exact, &d, variant, delta).map_err(e)?;
            let config = CodecConfig {
                n,
                dist: d.clone(),
                variant,
                rate: h + 2.0 * delta,
                delta,
                seed: 0,
            };
            let avg = table.average_error(&seeds, config.bin_count().map_err(e)?).map_err(e)?;
            let bound = table.p_atypical() + (-m * delta).exp2();
            ensure(avg.total <= bound, || {
                format!("n={n} {variant}: error {} > bound {bound}", avg.total)
            })?;
            worst_slack = worst_slack.min(bound - avg.total);

            // injective codebook with every support point typical
            let wide =
                TypicalityTable::from_exact(&exact, &d, variant, table.max_spectrum_deviation() + 1.0).map_err(e)?;
            ensure(wide.p_atypical() == 0.0, || {
                format!("n={n} {variant}: wide slack leaves atypical mass")
            })?;
            let seed = derive_seed(DEFAULT_SEED, 66);
            let bins = BinAssignment::new(seed, 1 << 24).map_err(e)?;
            ensure(bins.is_injective_on(wide.candidates()), || {
                format!("n={n} {variant}: 2^24 bins not injective")
            })?;
            let err = wide.error_for(&bins);
            ensure(err.total == 0.0, || {
                format!("n={n} {variant}: injective codebook error {}", err.total)
            })?;
            let config = CodecConfig {
                n,
                dist: d.clone(),
                variant,
                rate: 24.0 / m,
                delta: table.max_spectrum_deviation() + 1.0,
                seed,
            };
            let sim = simulate_error_rate(&config, 200).map_err(e)?;
            ensure(sim.errors == 0, || {
                format!("n={n} {variant}: {} simulated errors with injective bins", sim.errors)
            })?;

            // error averaged over 20 codebooks is non-increasing in R
            let grid: Vec<f64> = (1..=10).map(|i| 0.15 * i as f64).collect();
            let mut last = f64::INFINITY;
            for rate in grid {
                let c = CodecConfig {
                    n,
                    dist: d.clone(),
                    variant,
                    rate,
                    delta,
                    seed: 0,
                };
                let err = table
                    .average_error(&seeds[..20], c.bin_count().map_err(e)?)
                    .map_err(e)?
                    .total;
                ensure(err <= last, || {
                    format!("n={n} {variant}: error rises to {err} at R={rate}")
                })?;
                last = err;
            }
        }
    }
    Ok(format!("8 (n, variant) cells within bound (smallest slack {worst_slack:.3e}); injective codebooks error-free; rate sweeps monotone"))
}

fn criterion_7() -> Outcome {
    let models = [
        subsampling_model(0.5, 0.7).unwrap(),
        JointEdgeDistribution::new(vec![vec![0.2, 0.35], vec![0.35, 0.1]]).unwrap(),
    ];
    let mut min_sense = 0;
    for i in 0..100u64 {
        let d = &models[(i % 2) as usize];
        let n = 3 + (i % 3) as usize;
        let (ga, gb) = sample_pair(d, n, &mut trial_rng(derive_seed(DEFAULT_SEED, 7), i)).map_err(e)?;
        let sb = canonicalize(&gb).map_err(e)?;
        if map_sense(d).map_err(e)? == cergraph::alignment::Sense::Min {
            min_sense += 1;
        }
        let by_statistic = map_argmax_labellings(&ga, &sb, d).map_err(e)?;
        // joint-probability argmax over every labelling of sb
        let mut best = LogProb::Impossible;
        let mut by_probability = BTreeSet::new();
        for p in enumerate_permutations(n).map_err(e)? {
            let g = sb.graph().permuted(&p).map_err(e)?;
            let lp = log_joint_graph_prob(&ga, &g, d).map_err(e)?;
            if by_probability.is_empty() || lp > best {
                best = lp;
                by_probability.clear();
            }
            if lp == best {
                by_probability.insert(g);
            }
        }
        ensure(by_statistic == by_probability, || {
            format!(
                "instance {i} (n={n}): {} vs {} labellings",
                by_statistic.len(),
                by_probability.len()
            )
        })?;
    }
    Ok(format!(
        "100 instances at n=3..5 ({min_sense} anti-correlated), argmax sets identical"
    ))
}

fn criterion_8() -> Outcome {
    let d = subsampling_model(0.5, 0.5).unwrap();
    let graphs: Vec<LabelledGraph> = enumerate_graphs(4, 1).map_err(e)?.collect();
    let structures: Vec<_> = enumerate_structures(4, 1).map_err(e)?.collect();
    let mut accepted = 0;
    for delta in [0.05, 0.1, 0.2, 0.3, 0.5, 1.0] {
        let params = TypicalSetParams::new(delta, &d).map_err(e)?;
        for ga in &graphs {
            for sb in &structures {
                if unweighted_typicality_decomposed(ga, sb, &params).map_err(e)?.accepted {
                    accepted += 1;
                    let joint = joint_max_typicality(ga, sb.graph(), &d, 3.0 * delta + CONTAINMENT_TOL).map_err(e)?;
                    ensure(joint, || {
                        format!("delta={delta}: ({ga}, {sb}) accepted but not 3δ-typical")
                    })?;
                }
            }
        }
    }
    ensure(accepted > 0, || "no pair accepted; containment is vacuous".into())?;

    let delta = 0.3;
    let params = TypicalSetParams::new(delta, &d).map_err(e)?;
    let trials = 1000u64;
    let mut freqs = Vec::new();
    for n in [5usize, 6, 7] {
        let mut hits = 0u64;
        for t in 0..trials {
            let (ga, gb) =
                sample_pair(&d, n, &mut trial_rng(derive_seed(DEFAULT_SEED, 80 + n as u64), t)).map_err(e)?;
            let sb = canonicalize(&gb).map_err(e)?;
            hits += unweighted_typicality_decomposed(&ga, &sb, &params).map_err(e)?.accepted as u64;
        }
        freqs.push((n, hits as f64 / trials as f64));
    }
    let show = freqs
        .iter()
        .map(|(n, f)| format!("{n}:{f:.3}"))
        .collect::<Vec<_>>()
        .join(" ");
    ensure(freqs.windows(2).all(|w| w[1].1 > w[0].1), || {
        format!("acceptance frequencies {show}")
    })?;
    Ok(format!(
        "{accepted} accepted (ga, sb) pairs at n=4 all 3δ-typical; acceptance [{show}]"
    ))
}

fn criterion_9() -> Outcome {
    let b = run_bound_comparison(&PriorBoundInputs::new(0.5, 1.0, 0.25).map_err(e)?).map_err(e)?;
    ensure(b.h_a_given_b == 0.0, || format!("H(A|B) = {}", b.h_a_given_b))?;
    ensure(b.prior_bound > 0.0, || format!("prior bound {}", b.prior_bound))?;
    let s = b.s;
    let closed = 1.0 - 0.375 * (s / (s + 2.0)).powi(2);
    ensure((b.prior_bound - closed).abs() <= BOUND_TOL, || {
        format!("{} vs {closed}", b.prior_bound)
    })?;
    Ok(format!("H(A|B) = 0, prior bound {:.6} (s = {s:.4})", b.prior_bound))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("exact probability algebra", criterion_1),
        ("entropy sandwich", criterion_2),
        ("one-sided max equals two-sided max", criterion_3),
        ("alignment statistic expectation and tails", criterion_4),
        ("convergence trends", criterion_5),
        ("codec soundness", criterion_6),
        ("MAP deanonymizer equivalence", criterion_7),
        ("decomposed unweighted typicality", criterion_8),
        ("prior bound comparison", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} [{name}]: PASS ({secs:.1}s) {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {} [{name}]: FAIL ({secs:.1}s) {reason}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
