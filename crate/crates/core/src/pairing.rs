//! Joining tripod bundles into paths through all three terminals, and the
//! bounds on 3-path-connectivity built from them.

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construct::{CaseId, ConstructOptions, Constructor};
use crate::error::{ConstructError, PairingError, TripodError};
use crate::graph::SubgraphView;
use crate::menger::Path;
use crate::topology::CayleyGraph;
use crate::tripod::{exact_pi, pi_upper_bound, verify_tripod, StructureTarget, TripodStructure, EXHAUSTIVE_LIMIT};
use crate::verdict::VerdictReport;

/// Most paths through `{a, b, c}` obtainable by joining one bundle path
/// with another at a shared terminal, given `x` `(a,b)`-, `y` `(a,c)`- and
/// `z` `(b,c)`-paths.
pub fn pairing_capacity(x: usize, y: usize, z: usize) -> usize {
    ((x + y + z) / 2).min(x + y).min(y + z).min(z + x)
}

/// Lexicographically smallest `(m_a, m_b, m_c)` attaining the capacity,
/// where `m_t` counts joined paths whose middle terminal is `t`.
pub fn pairing_split(x: usize, y: usize, z: usize) -> (usize, usize, usize) {
    let t = pairing_capacity(x, y, z);
    for ma in 0..=t {
        for mb in 0..=t - ma {
            let mc = t - ma - mb;
            if ma + mb <= x && ma + mc <= y && mb + mc <= z {
                return (ma, mb, mc);
            }
        }
    }
    unreachable!("capacity is always attainable")
}

/// Internally disjoint paths each visiting all three terminals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaPathSet {
    pub omega: [usize; 3],
    pub paths: Vec<Path>,
}

impl OmegaPathSet {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
}

/// Joins bundle paths at their shared terminals: middle `a` uses
/// `(a,b)` reversed then `(a,c)`, middle `b` uses `(a,b)` then `(b,c)`, and
/// middle `c` uses `(a,c)` then `(b,c)` reversed.
pub fn pair_structure(view: &SubgraphView<'_>, s: &TripodStructure) -> Result<OmegaPathSet, PairingError> {
    let [x, y, z] = s.counts();
    let verdict = verify_tripod(view, s, StructureTarget::custom(x, y, z));
    if !verdict.passed() {
        return Err(PairingError::Unverified(verdict.violations.join("; ")));
    }
    let (ma, mb, mc) = pairing_split(x, y, z);
    let mut paths = Vec::with_capacity(ma + mb + mc);
    for i in 0..ma {
        paths.push(s.ab[i].reversed().join(&s.ac[i]));
    }
    for i in 0..mb {
        paths.push(s.ab[ma + i].join(&s.bc[i]));
    }
    for i in 0..mc {
        paths.push(s.ac[ma + i].join(&s.bc[mb + i].reversed()));
    }
    Ok(OmegaPathSet { omega: s.omega, paths })
}

/// Independent check of an Ω-path family: each path is simple, follows
/// edges of `view` and visits all terminals; two paths share exactly the
/// terminals and no edge.
pub fn verify_omega_paths(view: &SubgraphView<'_>, set: &OmegaPathSet) -> VerdictReport {
    let mut report = VerdictReport::new();
    let mut shape = Vec::new();
    for (i, p) in set.paths.iter().enumerate() {
        if !p.is_simple() {
            shape.push(format!("path {i} repeats a vertex"));
        }
        for (u, w) in p.edges() {
            if !view.has_edge(u, w) {
                shape.push(format!("path {i} uses non-edge ({u}, {w})"));
            }
        }
        for t in set.omega {
            if !p.contains(t) {
                shape.push(format!("path {i} misses terminal {t}"));
            }
        }
    }
    report.record("omega paths well formed", shape);
    let terminals: HashSet<usize> = set.omega.iter().copied().collect();
    let mut owner: HashMap<usize, usize> = HashMap::new();
    let mut edge_owner: HashMap<(usize, usize), usize> = HashMap::new();
    let mut shared = Vec::new();
    for (i, p) in set.paths.iter().enumerate() {
        for &v in p.vertices() {
            if terminals.contains(&v) {
                continue;
            }
            if let Some(j) = owner.insert(v, i) {
                if j != i {
                    shared.push(format!("paths {j} and {i} share vertex {v}"));
                }
            }
        }
        for e in p.edges() {
            if let Some(j) = edge_owner.insert(e, i) {
                if j != i {
                    shared.push(format!("paths {j} and {i} share edge ({}, {})", e.0, e.1));
                }
            }
        }
    }
    report.record("omega paths internally disjoint", shared);
    report
}

/// `⌊(6n − 9)/4⌋`.
pub fn pi3_formula(n: usize) -> usize {
    (6 * n - 9) / 4
}

/// Upper bound `⌊(3k − r)/4⌋` for a `k`-regular graph whose triples have
/// at most `r` common neighbours.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pi3Upper {
    pub k: usize,
    pub r: usize,
    pub value: usize,
    /// A triple with exactly `r` common neighbours.
    pub witness: [usize; 3],
}

/// Computes the exact maximum number of common neighbours of three
/// vertices. Left translations are automorphisms, so one member can be
/// fixed at the identity; a triple with a common neighbour lies within
/// distance two of it.
pub fn pi3_upper(g: &CayleyGraph) -> Pi3Upper {
    let u = 0;
    let dist = g.full_view().bfs_distances(u);
    let mut best = (0usize, [u, 1, 2]);
    let nu: HashSet<usize> = g.neighbors(u).collect();
    for v in 0..g.vertex_count() {
        if v == u || dist[v] != 2 {
            continue;
        }
        let common: Vec<usize> = g.neighbors(v).filter(|w| nu.contains(w)).collect();
        if common.len() <= best.0 {
            continue;
        }
        let mut cands: Vec<usize> = common.iter().flat_map(|&c| g.neighbors(c)).collect();
        cands.sort_unstable();
        cands.dedup();
        for w in cands {
            if w == u || w == v {
                continue;
            }
            let r = common.iter().filter(|&&c| g.has_edge(c, w)).count();
            if r > best.0 {
                best = (r, [u, v, w]);
            }
        }
    }
    let k = g.generators().len();
    Pi3Upper {
        k,
        r: best.0,
        value: (3 * k - best.0) / 4,
        witness: best.1,
    }
}

/// Which triples a lower-bound sweep evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleSpec {
    /// Every 3-subset of the vertex set.
    Exhaustive,
    /// Seeded triples cycling through the three copy layouts: all in one
    /// copy, exactly two sharing a copy, three different copies.
    Stratified { samples: usize, seed: u64 },
}

impl SampleSpec {
    /// The triples in evaluation order.
    pub fn triples(&self, g: &CayleyGraph) -> Vec<[usize; 3]> {
        let nv = g.vertex_count();
        match *self {
            SampleSpec::Exhaustive => {
                let mut out = Vec::new();
                for a in 0..nv {
                    for b in a + 1..nv {
                        for c in b + 1..nv {
                            out.push([a, b, c]);
                        }
                    }
                }
                out
            }
            SampleSpec::Stratified { samples, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let n = g.n();
                let by_copy: Vec<Vec<usize>> = (0..=n).map(|i| if i == 0 { Vec::new() } else { g.copy_vertices(i) }).collect();
                let mut out = Vec::with_capacity(samples);
                while out.len() < samples {
                    let layout = out.len() % 3;
                    let mut cps = [0usize; 3];
                    loop {
                        for c in cps.iter_mut() {
                            *c = rng.gen_range(1..=n);
                        }
                        let distinct = {
                            let mut v = cps.to_vec();
                            v.sort_unstable();
                            v.dedup();
                            v.len()
                        };
                        match layout {
                            0 => cps = [cps[0]; 3],
                            1 if distinct == 2 => {}
                            1 => continue,
                            _ if distinct == 3 => {}
                            _ => continue,
                        }
                        break;
                    }
                    let t = cps.map(|c| by_copy[c][rng.gen_range(0..by_copy[c].len())]);
                    if t[0] != t[1] && t[0] != t[2] && t[1] != t[2] {
                        out.push(t);
                    }
                }
                out
            }
        }
    }
}

/// Three distinct vertices drawn from a seeded generator.
pub fn random_triple(vertex_count: usize, seed: u64) -> [usize; 3] {
    assert!(vertex_count >= 3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = [0usize; 3];
    let mut i = 0;
    while i < 3 {
        let v = rng.gen_range(0..vertex_count);
        if !out[..i].contains(&v) {
            out[i] = v;
            i += 1;
        }
    }
    out
}

/// Result of a lower-bound sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pi3Lower {
    /// Minimum number of Ω-paths over the evaluated triples.
    pub value: usize,
    pub evaluated: usize,
    /// Ω-paths for the first triple attaining the minimum.
    pub witness: OmegaPathSet,
    pub witness_structure: TripodStructure,
    pub witness_case: CaseId,
    pub case_counts: BTreeMap<CaseId, usize>,
}

/// Minimum over the triples of `spec` of the number of Ω-paths obtained by
/// constructing a structure and pairing it. Runs on the current rayon pool;
/// ties go to the earliest triple so the result does not depend on it.
pub fn pi3_lower(g: &CayleyGraph, spec: SampleSpec, options: ConstructOptions) -> Result<Pi3Lower, ConstructError> {
    let triples = spec.triples(g);
    let builder = Constructor::new(g, options)?;
    let view = g.full_view();
    let results: Vec<Result<(OmegaPathSet, TripodStructure, CaseId), ConstructError>> = triples
        .par_iter()
        .map(|&omega| {
            let built = builder.build(omega)?;
            let set = pair_structure(&view, &built.structure)
                .map_err(|e| ConstructError::ConstructionFailed(e.to_string()))?;
            Ok((set, built.structure, built.trace.case_id))
        })
        .collect();
    let mut case_counts = BTreeMap::new();
    let mut best: Option<(OmegaPathSet, TripodStructure, CaseId)> = None;
    for r in results {
        let (set, s, case) = r?;
        *case_counts.entry(case).or_insert(0) += 1;
        if best.as_ref().map_or(true, |b| set.len() < b.0.len()) {
            best = Some((set, s, case));
        }
    }
    let (witness, witness_structure, witness_case) = best.ok_or_else(|| ConstructError::ConstructionFailed("no triples evaluated".into()))?;
    Ok(Pi3Lower {
        value: witness.len(),
        evaluated: triples.len(),
        witness,
        witness_structure,
        witness_case,
        case_counts,
    })
}

/// Value of one triple pinned between a construction and an upper bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleValue {
    pub omega: [usize; 3],
    pub constructed: usize,
    /// Exact search result when the graph is small enough, otherwise the
    /// counting bound.
    pub upper: usize,
    pub exact: bool,
}

impl TripleValue {
    /// The value of the triple, when the two sides meet.
    pub fn settled(&self) -> Option<usize> {
        (self.constructed == self.upper).then_some(self.constructed)
    }
}

pub fn triple_value(g: &CayleyGraph, omega: [usize; 3], options: ConstructOptions) -> Result<TripleValue, ConstructError> {
    let view = g.full_view();
    let built = Constructor::new(g, options)?.build(omega)?;
    let constructed = pair_structure(&view, &built.structure)
        .map_err(|e| ConstructError::ConstructionFailed(e.to_string()))?
        .len();
    let tripod = |e: TripodError| ConstructError::ConstructionFailed(e.to_string());
    let (upper, exact) = if view.vertex_count() <= EXHAUSTIVE_LIMIT {
        (exact_pi(&view, omega).map_err(tripod)?, true)
    } else {
        (pi_upper_bound(&view, omega).map_err(tripod)?, false)
    };
    Ok(TripleValue {
        omega,
        constructed,
        upper,
        exact,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Match,
    Mismatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pi3Report {
    pub n: usize,
    pub lower: usize,
    pub lower_witness: [usize; 3],
    pub evaluated: usize,
    pub upper: usize,
    pub r: usize,
    pub r_witness: [usize; 3],
    pub formula: usize,
    pub verdict: Verdict,
}

impl Pi3Report {
    pub fn new(n: usize, lower: &Pi3Lower, upper: &Pi3Upper) -> Self {
        let formula = pi3_formula(n);
        let verdict = if lower.value == formula && upper.value == formula {
            Verdict::Match
        } else {
            Verdict::Mismatch
        };
        Pi3Report {
            n,
            lower: lower.value,
            lower_witness: lower.witness.omega,
            evaluated: lower.evaluated,
            upper: upper.value,
            r: upper.r,
            r_witness: upper.witness,
            formula,
            verdict,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Family;
    use crate::tripod::{solve_tripod, Budget};

    fn brute(x: usize, y: usize, z: usize) -> usize {
        let mut best = 0;
        for ma in 0..=x.min(y) {
            for mb in 0..=(x - ma).min(z) {
                let mc = (y - ma).min(z - mb);
                best = best.max(ma + mb + mc);
            }
        }
        best
    }

    #[test]
    fn capacity_examples() {
        assert_eq!(pairing_capacity(2, 2, 2), 3);
        assert_eq!(pairing_capacity(2, 4, 4), 5);
        assert_eq!(pairing_capacity(0, 1, 5), 1);
        assert_eq!(pairing_split(2, 4, 4), (1, 1, 3));
        assert_eq!(pairing_split(4, 6, 6), (2, 2, 4));
    }

    #[test]
    fn capacity_matches_brute_force() {
        for x in 0..=20 {
            for y in 0..=20 {
                for z in 0..=20 {
                    assert_eq!(pairing_capacity(x, y, z), brute(x, y, z), "({x},{y},{z})");
                }
            }
        }
    }

    #[test]
    fn formula_identity() {
        for n in 4..=100 {
            let t = StructureTarget::for_degree(n);
            assert_eq!(pairing_capacity(t.x, t.y, t.z), pi3_formula(n), "n = {n}");
        }
    }

    #[test]
    fn pairs_a_bs4_structure() {
        let g = CayleyGraph::build(4, Family::BubbleSortStar).unwrap();
        let view = g.full_view();
        let s = solve_tripod(&view, [0, 7, 19], StructureTarget::uniform(2), Budget::default())
            .unwrap()
            .structure;
        let set = pair_structure(&view, &s).unwrap();
        assert_eq!(set.len(), 3);
        assert!(verify_omega_paths(&view, &set).passed());
    }

    #[test]
    fn degenerate_structure() {
        let g = CayleyGraph::build(4, Family::BubbleSortStar).unwrap();
        let view = g.full_view();
        let b = g.neighbors(0).next().unwrap();
        let c = g.neighbors(b).find(|&c| c != 0).unwrap();
        let s = TripodStructure::from_bundles([0, b, c], [vec![], vec![], vec![Path(vec![b, c])]]);
        assert!(pair_structure(&view, &s).unwrap().is_empty());
        let bad = TripodStructure::from_bundles([0, b, c], [vec![Path(vec![0, c])], vec![], vec![]]);
        assert!(pair_structure(&view, &bad).is_err());
    }

    #[test]
    fn omega_verifier_rejects_sharing() {
        let g = CayleyGraph::build(4, Family::Wheel).unwrap();
        let view = g.full_view();
        let p = Path(view.shortest_path(0, 23).unwrap());
        let ends = [p.first(), p.vertices()[1], p.last()];
        let set = OmegaPathSet {
            omega: ends,
            paths: vec![p.clone(), p],
        };
        let report = verify_omega_paths(&view, &set);
        assert!(!report.passed());
    }

    #[test]
    fn stratified_layouts() {
        let g = CayleyGraph::build(5, Family::Wheel).unwrap();
        let triples = SampleSpec::Stratified { samples: 30, seed: 3 }.triples(&g);
        assert_eq!(triples.len(), 30);
        for (i, t) in triples.iter().enumerate() {
            let mut cps: Vec<usize> = t.iter().map(|&v| g.copy_of(v)).collect();
            cps.sort_unstable();
            cps.dedup();
            assert_eq!(cps.len(), i % 3 + 1);
        }
        assert_eq!(triples, SampleSpec::Stratified { samples: 30, seed: 3 }.triples(&g));
    }

    #[test]
    fn lower_bound_small_sweep() {
        let g = CayleyGraph::build(4, Family::Wheel).unwrap();
        let low = pi3_lower(&g, SampleSpec::Stratified { samples: 12, seed: 1 }, ConstructOptions::default()).unwrap();
        assert_eq!(low.evaluated, 12);
        assert_eq!(low.value, 3);
        assert!(verify_omega_paths(&g.full_view(), &low.witness).passed());
        let up = pi3_upper(&g);
        assert_eq!(Pi3Report::new(4, &low, &up).verdict, Verdict::Match);
    }

    #[test]
    fn witness_triple_is_settled() {
        let g = CayleyGraph::build(5, Family::Wheel).unwrap();
        let up = pi3_upper(&g);
        let tv = triple_value(&g, up.witness, ConstructOptions::default()).unwrap();
        assert!(!tv.exact);
        assert_eq!(tv.settled(), Some(5));
    }

    #[test]
    fn upper_bounds() {
        for (n, want) in [(4, 3), (5, 5)] {
            let g = CayleyGraph::build(n, Family::Wheel).unwrap();
            let up = pi3_upper(&g);
            assert_eq!(up.r, 3);
            assert_eq!(up.value, want);
            let cn = g.common_neighbors(&up.witness).unwrap();
            assert_eq!(cn.len(), 3);
        }
    }
}
