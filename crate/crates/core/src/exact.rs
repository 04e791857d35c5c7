//! Exhaustive joint law of `(Ga, Gb)` on small vertex sets, for exact
//! entropies of graphs and structures.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::graph::LabelledGraph;
use crate::model::{
    entropy_bits, log_joint_graph_prob, log_marginal_graph_prob, JointEdgeDistribution, ObjectKind, Observation, Side,
};
use crate::structure::{canonicalize, enumerate_graphs, Limits, StructureKey};

/// Every graph pair with positive probability, with structure ids per side.
#[derive(Clone, Debug)]
pub struct ExactJoint {
    n: usize,
    /// `(index of ga, index of gb, probability)`.
    pairs: Vec<(u32, u32, f64)>,
    side_a: SideIndex,
    side_b: SideIndex,
}

/// Graphs in enumeration order and a dense structure id for each.
#[derive(Clone, Debug)]
struct SideIndex {
    graphs: Vec<LabelledGraph>,
    structure_of: Vec<u32>,
    structures: Vec<StructureKey>,
}

impl SideIndex {
    fn new(n: usize, k: u8) -> Result<Self> {
        let graphs: Vec<LabelledGraph> = enumerate_graphs(n, k)?.collect();
        let mut ids: HashMap<StructureKey, u32> = HashMap::new();
        let mut structures = Vec::new();
        let mut structure_of = Vec::with_capacity(graphs.len());
        for g in &graphs {
            let key = canonicalize(g)?;
            let id = *ids.entry(key.clone()).or_insert_with(|| {
                structures.push(key);
                structures.len() as u32 - 1
            });
            structure_of.push(id);
        }
        Ok(SideIndex {
            graphs,
            structure_of,
            structures,
        })
    }
}

impl ExactJoint {
    pub fn new(n: usize, dist: &JointEdgeDistribution) -> Result<Self> {
        Self::new_with(n, dist, &Limits::default())
    }

    pub fn new_with(n: usize, dist: &JointEdgeDistribution, limits: &Limits) -> Result<Self> {
        limits.check_permutations(n)?;
        let count_a = limits.check_graphs(n, dist.ka())?;
        let count_b = limits.check_graphs(n, dist.kb())?;
        let requested = count_a.saturating_mul(count_b);
        if requested > limits.max_graphs {
            return Err(Error::Capability {
                what: "graph pairs in exact enumeration",
                requested,
                limit: limits.max_graphs,
            });
        }
        let side_a = SideIndex::new(n, dist.ka())?;
        let side_b = SideIndex::new(n, dist.kb())?;
        let mut pairs = Vec::new();
        for (ia, ga) in side_a.graphs.iter().enumerate() {
            if log_marginal_graph_prob(ga, dist, Side::A)?.is_impossible() {
                continue;
            }
            for (ib, gb) in side_b.graphs.iter().enumerate() {
                let p = log_joint_graph_prob(ga, gb, dist)?.prob();
                if p > 0.0 {
                    pairs.push((ia as u32, ib as u32, p));
                }
            }
        }
        Ok(ExactJoint {
            n,
            pairs,
            side_a,
            side_b,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn side(&self, side: Side) -> &SideIndex {
        match side {
            Side::A => &self.side_a,
            Side::B => &self.side_b,
        }
    }

    /// Dense id of the graph with enumeration index `graph`, as an object of `kind`.
    fn key(&self, side: Side, kind: ObjectKind, graph: u32) -> u32 {
        match kind {
            ObjectKind::Graph => graph,
            ObjectKind::Structure => self.side(side).structure_of[graph as usize],
        }
    }

    /// Number of distinct objects of `kind` on one side. Graph ids follow
    /// graph enumeration order; structure ids follow first appearance in it,
    /// which is the order of their canonical forms.
    pub fn object_count(&self, side: Side, kind: ObjectKind) -> usize {
        match kind {
            ObjectKind::Graph => self.side(side).graphs.len(),
            ObjectKind::Structure => self.side(side).structures.len(),
        }
    }

    pub fn object(&self, side: Side, kind: ObjectKind, id: u32) -> Observation {
        let s = self.side(side);
        match kind {
            ObjectKind::Graph => Observation::Graph(s.graphs[id as usize].clone()),
            ObjectKind::Structure => Observation::Structure(s.structures[id as usize].clone()),
        }
    }

    /// Joint law of `(U_a, U_b)` as `((id_a, id_b), probability)`, sorted by id,
    /// positive entries only.
    pub fn law(&self, source: ObjectKind, side: ObjectKind) -> Vec<((u32, u32), f64)> {
        let mut law: HashMap<(u32, u32), f64> = HashMap::new();
        for &(a, b, p) in &self.pairs {
            *law.entry((self.key(Side::A, source, a), self.key(Side::B, side, b)))
                .or_insert(0.0) += p;
        }
        let mut out: Vec<_> = law.into_iter().collect();
        out.sort_by_key(|&(k, _)| k);
        out
    }

    /// Summed in key order so results are bit-reproducible.
    fn entropy_of<F: Fn(u32, u32) -> (u32, u32)>(&self, project: F) -> f64 {
        let mut law: BTreeMap<(u32, u32), f64> = BTreeMap::new();
        for &(a, b, p) in &self.pairs {
            *law.entry(project(a, b)).or_insert(0.0) += p;
        }
        let probs: Vec<f64> = law.into_values().collect();
        entropy_bits(&probs)
    }

    /// `H(U_a, U_b)`.
    pub fn joint_entropy(&self, source: ObjectKind, side: ObjectKind) -> f64 {
        self.entropy_of(|a, b| (self.key(Side::A, source, a), self.key(Side::B, side, b)))
    }

    /// Entropy of one side alone.
    pub fn entropy(&self, side: Side, kind: ObjectKind) -> f64 {
        self.entropy_of(|a, b| match side {
            Side::A => (self.key(Side::A, kind, a), 0),
            Side::B => (0, self.key(Side::B, kind, b)),
        })
    }

    /// `H(U_a | U_b) = H(U_a, U_b) - H(U_b)`.
    pub fn conditional_entropy(&self, source: ObjectKind, side: ObjectKind) -> f64 {
        self.joint_entropy(source, side) - self.entropy(Side::B, side)
    }

    /// `H(G | S)` on one side; `S` is a function of `G`.
    pub fn graph_given_structure(&self, side: Side) -> f64 {
        self.entropy(side, ObjectKind::Graph) - self.entropy(side, ObjectKind::Structure)
    }
}

/// `H(S)` for a single random graph whose pair symbols are i.i.d. with law
/// `probs` over `0..probs.len()`.
pub fn structural_entropy(n: usize, probs: &[f64]) -> Result<f64> {
    if probs.len() < 2 || probs.len() > 256 {
        return Err(Error::InvalidDistribution("need between 2 and 256 symbols".into()));
    }
    let k = (probs.len() - 1) as u8;
    let mut law: BTreeMap<StructureKey, f64> = BTreeMap::new();
    for g in enumerate_graphs(n, k)? {
        let p: f64 = g.edges().iter().map(|&s| probs[s as usize]).product();
        if p > 0.0 {
            *law.entry(canonicalize(&g)?).or_insert(0.0) += p;
        }
    }
    let probs: Vec<f64> = law.into_values().collect();
    Ok(entropy_bits(&probs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::pair_count;
    use crate::model::{entropy_report, subsampling_model};

    #[test]
    fn half_density_three_vertices() {
        // four classes with probabilities 1/8, 3/8, 3/8, 1/8
        let h = structural_entropy(3, &[0.5, 0.5]).unwrap();
        let expected = 0.75 + 0.75 * (8.0f64 / 3.0).log2();
        assert!((h - expected).abs() < 1e-12);
    }

    #[test]
    fn identical_copies_have_zero_conditional_entropy() {
        let d = subsampling_model(0.5, 1.0).unwrap();
        let j = ExactJoint::new(4, &d).unwrap();
        for source in [ObjectKind::Graph, ObjectKind::Structure] {
            assert!(j.conditional_entropy(source, ObjectKind::Graph).abs() < 1e-12);
        }
        assert!(
            j.conditional_entropy(ObjectKind::Structure, ObjectKind::Structure)
                .abs()
                < 1e-12
        );
        // the labelling is lost when only the structure is known
        let gs = j.conditional_entropy(ObjectKind::Graph, ObjectKind::Structure);
        assert!((gs - j.graph_given_structure(Side::A)).abs() < 1e-9);
        assert!(gs > 0.0);
    }

    #[test]
    fn graph_side_matches_per_pair_entropy() {
        let d = subsampling_model(0.4, 0.7).unwrap();
        let j = ExactJoint::new(4, &d).unwrap();
        let r = entropy_report(&d);
        let m = pair_count(4) as f64;
        assert!((j.conditional_entropy(ObjectKind::Graph, ObjectKind::Graph) - m * r.h_a_given_b).abs() < 1e-9);
        assert!((j.entropy(Side::A, ObjectKind::Graph) - m * r.h_a).abs() < 1e-9);
    }

    #[test]
    fn law_is_normalized_and_ids_resolve() {
        let d = subsampling_model(0.5, 0.5).unwrap();
        let j = ExactJoint::new(4, &d).unwrap();
        assert_eq!(j.object_count(Side::A, ObjectKind::Structure), 11);
        let law = j.law(ObjectKind::Structure, ObjectKind::Graph);
        let total: f64 = law.iter().map(|&(_, p)| p).sum();
        assert!((total - 1.0).abs() < 1e-12);
        for id in 0..11 {
            match j.object(Side::A, ObjectKind::Structure, id) {
                Observation::Structure(s) => assert_eq!(canonicalize(s.graph()).unwrap(), s),
                other => panic!("unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn pair_budget() {
        let d = subsampling_model(0.5, 0.5).unwrap();
        let tight = Limits {
            max_graphs: 100,
            ..Limits::default()
        };
        let err = ExactJoint::new_with(4, &d, &tight).unwrap_err();
        assert!(err.is_capability());
    }
}
