//! Tripod structures: `x` paths between `a` and `b`, `y` between `a` and `c`
//! and `z` between `b` and `c`, all internally disjoint as one family.
//!
//! [`solve_tripod`] is a flow-and-repair heuristic with restarts and an
//! exhaustive backstop for small views; [`exact_pi`] is the exact oracle
//! for the number of internally disjoint paths through all three terminals.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::TripodError;
use crate::flow::{NetworkSpec, Role, SplitNetwork, INF};
use crate::graph::{SimpleGraph, SubgraphView};
use crate::menger::{local_connectivity, Path};
use crate::pairing::pairing_capacity;
use crate::verdict::VerdictReport;

/// Terminal index pairs of the three bundles, in the order `ab`, `ac`, `bc`.
pub const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// Largest view the exhaustive search accepts.
pub const EXHAUSTIVE_LIMIT: usize = 40;

const EXHAUSTIVE_NODE_LIMIT: u64 = 20_000_000;

fn bundle_of(i: usize, j: usize) -> usize {
    PAIRS
        .iter()
        .position(|&(p, q)| (p, q) == (i, j) || (q, p) == (i, j))
        .expect("distinct terminal indices")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StructureTarget {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    /// Half-degree parameter (`n = 2d` or `2d + 1`); 0 for ad hoc targets.
    pub d: usize,
}

impl StructureTarget {
    /// The counts guaranteed in the wheel graph of degree `n`.
    pub fn for_degree(n: usize) -> Self {
        let d = n / 2;
        if n % 2 == 0 {
            StructureTarget {
                x: 2 * d - 2,
                y: 2 * d - 2,
                z: 2 * d - 2,
                d,
            }
        } else {
            StructureTarget {
                x: 2 * d - 2,
                y: 2 * d,
                z: 2 * d,
                d,
            }
        }
    }

    /// Counts guaranteed in the bubble-sort star graph of degree `2d`.
    pub fn uniform(d: usize) -> Self {
        StructureTarget {
            x: 2 * d - 2,
            y: 2 * d - 2,
            z: 2 * d - 2,
            d,
        }
    }

    pub fn custom(x: usize, y: usize, z: usize) -> Self {
        StructureTarget { x, y, z, d: 0 }
    }

    pub fn counts(&self) -> [usize; 3] {
        [self.x, self.y, self.z]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripodStructure {
    pub omega: [usize; 3],
    pub ab: Vec<Path>,
    pub ac: Vec<Path>,
    pub bc: Vec<Path>,
}

impl TripodStructure {
    pub fn empty(omega: [usize; 3]) -> Self {
        TripodStructure {
            omega,
            ab: Vec::new(),
            ac: Vec::new(),
            bc: Vec::new(),
        }
    }

    pub fn from_bundles(omega: [usize; 3], bundles: [Vec<Path>; 3]) -> Self {
        let [ab, ac, bc] = bundles;
        TripodStructure { omega, ab, ac, bc }
    }

    pub fn bundle(&self, k: usize) -> &[Path] {
        match k {
            0 => &self.ab,
            1 => &self.ac,
            2 => &self.bc,
            _ => panic!("bundle index {k}"),
        }
    }

    pub fn bundle_mut(&mut self, k: usize) -> &mut Vec<Path> {
        match k {
            0 => &mut self.ab,
            1 => &mut self.ac,
            2 => &mut self.bc,
            _ => panic!("bundle index {k}"),
        }
    }

    /// Ends of bundle `k` as vertices.
    pub fn endpoints(&self, k: usize) -> (usize, usize) {
        let (i, j) = PAIRS[k];
        (self.omega[i], self.omega[j])
    }

    pub fn counts(&self) -> [usize; 3] {
        [self.ab.len(), self.ac.len(), self.bc.len()]
    }

    pub fn all_paths(&self) -> impl Iterator<Item = (usize, usize, &Path)> + '_ {
        (0..3).flat_map(move |k| self.bundle(k).iter().enumerate().map(move |(i, p)| (k, i, p)))
    }

    /// The same paths with terminals reordered: the new terminal `i` is the
    /// old terminal `order[i]`. Paths are re-oriented to match.
    pub fn relabeled(&self, order: [usize; 3]) -> TripodStructure {
        let omega = [self.omega[order[0]], self.omega[order[1]], self.omega[order[2]]];
        let mut out = TripodStructure::empty(omega);
        for k in 0..3 {
            let (i, j) = PAIRS[k];
            let old = bundle_of(order[i], order[j]);
            let start = omega[i];
            *out.bundle_mut(k) = self
                .bundle(old)
                .iter()
                .map(|p| if p.first() == start { p.clone() } else { p.reversed() })
                .collect();
        }
        out
    }

    /// Keeps at most the target number of paths per bundle, shortest first.
    pub fn truncated(&self, target: StructureTarget) -> TripodStructure {
        let mut out = self.clone();
        for (k, &t) in target.counts().iter().enumerate() {
            let b = out.bundle_mut(k);
            b.sort_by(|p, q| p.len().cmp(&q.len()).then_with(|| p.cmp(q)));
            b.truncate(t);
        }
        out
    }
}

/// Checks counts against `target`, endpoints, simplicity, edges of `view`,
/// that no terminal is internal, and global internal-vertex and edge
/// disjointness.
pub fn verify_tripod(view: &SubgraphView<'_>, s: &TripodStructure, target: StructureTarget) -> VerdictReport {
    let mut report = VerdictReport::new();
    let names = ["ab", "ac", "bc"];
    let counts = s.counts();
    let want = target.counts();
    report.record(
        "bundle counts",
        (0..3)
            .filter(|&k| counts[k] < want[k])
            .map(|k| format!("bundle {} has {} paths, target {}", names[k], counts[k], want[k]))
            .collect(),
    );
    let distinct = s.omega[0] != s.omega[1] && s.omega[0] != s.omega[2] && s.omega[1] != s.omega[2];
    report.record(
        "distinct terminals",
        if distinct { vec![] } else { vec![format!("terminals {:?} are not distinct", s.omega)] },
    );

    let mut endpoint_errs = Vec::new();
    let mut simple_errs = Vec::new();
    let mut edge_errs = Vec::new();
    let mut terminal_errs = Vec::new();
    let mut vertex_owner: HashMap<usize, (usize, usize)> = HashMap::new();
    let mut vertex_errs = Vec::new();
    let mut edge_owner: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    let mut shared_edge_errs = Vec::new();
    for (k, i, p) in s.all_paths() {
        let tag = format!("{}[{}]", names[k], i);
        let (u, v) = s.endpoints(k);
        if p.vertices().len() < 2 || p.first() != u || p.last() != v {
            endpoint_errs.push(format!("{tag} does not run from {u} to {v}"));
            if p.is_empty() {
                continue;
            }
        }
        if !p.is_simple() {
            simple_errs.push(format!("{tag} repeats a vertex"));
        }
        for (x, y) in p.edges() {
            if !view.has_edge(x, y) {
                edge_errs.push(format!("{tag} uses non-edge ({x}, {y})"));
            }
            if let Some((k2, i2)) = edge_owner.insert((x, y), (k, i)) {
                shared_edge_errs.push(format!("edge ({x}, {y}) is used by {}[{}] and {tag}", names[k2], i2));
            }
        }
        for &w in p.internal() {
            if s.omega.contains(&w) {
                terminal_errs.push(format!("{tag} passes through terminal {w}"));
                continue;
            }
            if let Some((k2, i2)) = vertex_owner.insert(w, (k, i)) {
                vertex_errs.push(format!("vertex {w} is internal to {}[{}] and {tag}", names[k2], i2));
            }
        }
    }
    report.record("endpoints", endpoint_errs);
    report.record("simple paths", simple_errs);
    report.record("edges present", edge_errs);
    report.record("terminals not internal", terminal_errs);
    report.record("internal vertices disjoint", vertex_errs);
    report.record("edges disjoint", shared_edge_errs);
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Augmenting paths pushed, summed over all flows of all restarts.
    pub steps: u64,
    pub restarts: u32,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            steps: 1_000_000,
            restarts: 32,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStrategy {
    FlowRepair,
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub structure: TripodStructure,
    pub steps: u64,
    /// Index of the restart that succeeded.
    pub restart: u32,
    pub strategy: SolveStrategy,
}

fn check_terminals(view: &SubgraphView<'_>, omega: [usize; 3]) -> Result<(), TripodError> {
    let distinct = omega[0] != omega[1] && omega[0] != omega[2] && omega[1] != omega[2];
    if !distinct || omega.iter().any(|&t| !view.contains(t)) {
        return Err(TripodError::BadTerminals);
    }
    Ok(())
}

const NO_OWNER: u8 = u8::MAX;
const STEAL_PENALTY: i32 = 10_000;
const REPAIRS_PER_RESTART: usize = 96;

struct Repair<'a, 'g> {
    view: &'a SubgraphView<'g>,
    omega: [usize; 3],
    target: [usize; 3],
    owner: Vec<u8>,
    bundles: [Vec<Path>; 3],
    history: Vec<i32>,
    priority: Option<Vec<u32>>,
    steps: u64,
}

impl<'a, 'g> Repair<'a, 'g> {
    fn new(view: &'a SubgraphView<'g>, omega: [usize; 3], target: [usize; 3], priority: Option<Vec<u32>>) -> Self {
        Repair {
            view,
            omega,
            target,
            owner: vec![NO_OWNER; view.bound()],
            bundles: [Vec::new(), Vec::new(), Vec::new()],
            history: vec![0; view.bound()],
            priority,
            steps: 0,
        }
    }

    fn set_bundle(&mut self, k: usize, paths: Vec<Path>) {
        for p in &self.bundles[k] {
            for &w in p.internal() {
                self.owner[w] = NO_OWNER;
            }
        }
        for p in &paths {
            for &w in p.internal() {
                self.owner[w] = k as u8;
            }
        }
        self.bundles[k] = paths;
    }

    /// Joint single-commodity flow with terminal `mid` both absorbing and
    /// emitting; loops from `mid` back to itself are discarded.
    fn seed(&mut self, mid: usize) {
        let others: Vec<usize> = (0..3).filter(|&i| i != mid).collect();
        let (o1, o2) = (others[0], others[1]);
        let need = |i: usize, j: usize| self.target[bundle_of(i, j)] as i32;
        let omega = self.omega;
        let roles = [
            Role::Terminal {
                from_source: need(o1, mid) + need(o1, o2),
                to_sink: 0,
                enter: false,
                leave: true,
            },
            Role::Terminal {
                from_source: need(mid, o2),
                to_sink: need(o1, mid),
                enter: true,
                leave: true,
            },
            Role::Terminal {
                from_source: 0,
                to_sink: need(o1, o2) + need(mid, o2),
                enter: true,
                leave: false,
            },
        ];
        let role = |v: usize| {
            if v == omega[o1] {
                roles[0]
            } else if v == omega[mid] {
                roles[1]
            } else if v == omega[o2] {
                roles[2]
            } else {
                Role::NORMAL
            }
        };
        let cost = |_: usize| 1;
        let spec = NetworkSpec {
            vertex_cost: Some(&cost),
            priority: self.priority.as_deref(),
            ..NetworkSpec::new(&role)
        };
        let mut sn = SplitNetwork::build(self.view, &spec);
        let total = self.target.iter().sum::<usize>() as i32;
        sn.net.min_cost_flow(total);
        self.steps += sn.net.augmentations;
        let mut found: [Vec<Path>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        for walk in sn.net.decompose() {
            let (s, t) = (walk[0], *walk.last().unwrap());
            if s == t {
                continue;
            }
            let i = omega.iter().position(|&x| x == s).unwrap();
            let j = omega.iter().position(|&x| x == t).unwrap();
            let k = bundle_of(i, j);
            let mut p = Path(walk);
            if p.first() != omega[PAIRS[k].0] {
                p = p.reversed();
            }
            if found[k].len() < self.target[k] {
                found[k].push(p);
            }
        }
        for (k, paths) in found.into_iter().enumerate() {
            self.set_bundle(k, paths);
        }
    }

    /// Recomputes bundle `k` as a min-cost flow. Without `steal`, vertices of
    /// other bundles are unavailable; with it, they are expensive.
    fn route(&mut self, k: usize, steal: bool) -> Vec<Path> {
        let (i, j) = PAIRS[k];
        let (p, q, r) = (self.omega[i], self.omega[j], self.omega[2 - k]);
        let demand = self.target[k] as i32;
        let owner = &self.owner;
        let role = |v: usize| {
            if v == p {
                Role::source(demand)
            } else if v == q {
                Role::sink(demand)
            } else if v == r || (!steal && owner[v] != NO_OWNER && owner[v] as usize != k) {
                Role::Blocked
            } else {
                Role::NORMAL
            }
        };
        let history = &self.history;
        let cost = |v: usize| {
            let foreign = owner[v] != NO_OWNER && owner[v] as usize != k;
            1 + history[v] + if foreign { STEAL_PENALTY } else { 0 }
        };
        let spec = NetworkSpec {
            vertex_cost: Some(&cost),
            priority: self.priority.as_deref(),
            ..NetworkSpec::new(&role)
        };
        let mut sn = SplitNetwork::build(self.view, &spec);
        sn.net.min_cost_flow(demand);
        self.steps += sn.net.augmentations;
        sn.net.decompose().into_iter().map(Path).collect()
    }

    fn steal(&mut self, k: usize, paths: Vec<Path>) {
        let mut contested: HashSet<usize> = HashSet::new();
        for p in &paths {
            for &w in p.internal() {
                let o = self.owner[w];
                if o != NO_OWNER && o as usize != k {
                    contested.insert(w);
                }
            }
        }
        for &w in &contested {
            self.history[w] += 1;
        }
        for other in 0..3 {
            if other == k {
                continue;
            }
            let kept: Vec<Path> = self.bundles[other]
                .iter()
                .filter(|p| p.internal().iter().all(|w| !contested.contains(w)))
                .cloned()
                .collect();
            self.set_bundle(other, kept);
        }
        self.set_bundle(k, paths);
    }

    fn deficient(&self, after: usize) -> Option<usize> {
        (1..=3)
            .map(|s| (after + s) % 3)
            .find(|&k| self.bundles[k].len() < self.target[k])
    }

    fn run(&mut self, step_cap: u64) -> bool {
        let mut last = 2;
        for _ in 0..REPAIRS_PER_RESTART {
            let Some(k) = self.deficient(last) else {
                return true;
            };
            if self.steps > step_cap {
                return false;
            }
            last = k;
            let paths = self.route(k, false);
            if paths.len() >= self.target[k] {
                self.set_bundle(k, paths);
                continue;
            }
            let paths = self.route(k, true);
            self.steal(k, paths);
        }
        self.deficient(last).is_none()
    }

    fn structure(&self) -> TripodStructure {
        TripodStructure::from_bundles(self.omega, self.bundles.clone())
    }
}

/// Finds a tripod structure meeting `target` inside `view`.
///
/// Restart `r` seeds from a joint flow whose middle terminal rotates with
/// `r` and, for `r > 0`, explores vertices in a seeded random order. Deficient
/// bundles are rerouted by min-cost flow, stealing vertices from other
/// bundles only when they cannot be avoided. Views of at most
/// [`EXHAUSTIVE_LIMIT`] vertices fall back to exhaustive search, whose
/// failure proves the target infeasible.
pub fn solve_tripod(
    view: &SubgraphView<'_>,
    omega: [usize; 3],
    target: StructureTarget,
    budget: Budget,
) -> Result<Solution, TripodError> {
    check_terminals(view, omega)?;
    let want = target.counts();
    let mut steps = 0u64;
    for restart in 0..budget.restarts {
        if steps >= budget.steps {
            break;
        }
        let priority = if restart == 0 {
            None
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed ^ (u64::from(restart)).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let mut order: Vec<u32> = (0..view.bound() as u32).collect();
            order.shuffle(&mut rng);
            let mut key = vec![0u32; view.bound()];
            for (pos, &v) in order.iter().enumerate() {
                key[v as usize] = pos as u32;
            }
            Some(key)
        };
        let mid = [1, 0, 2][restart as usize % 3];
        let mut state = Repair::new(view, omega, want, priority);
        state.seed(mid);
        let ok = state.run(budget.steps - steps);
        steps += state.steps;
        if ok {
            let s = state.structure().truncated(target);
            if verify_tripod(view, &s, target).passed() {
                return Ok(Solution {
                    structure: s,
                    steps,
                    restart,
                    strategy: SolveStrategy::FlowRepair,
                });
            }
        }
    }
    if view.vertex_count() <= EXHAUSTIVE_LIMIT {
        let s = solve_tripod_exhaustive(view, omega, target)?;
        return Ok(Solution {
            structure: s,
            steps,
            restart: budget.restarts,
            strategy: SolveStrategy::Exhaustive,
        });
    }
    Err(TripodError::Budget {
        steps,
        restarts: budget.restarts,
    })
}

/// Exhaustive search for a structure meeting `target`; `Infeasible` is a proof of nonexistence.
pub fn solve_tripod_exhaustive(
    view: &SubgraphView<'_>,
    omega: [usize; 3],
    target: StructureTarget,
) -> Result<TripodStructure, TripodError> {
    check_terminals(view, omega)?;
    let mut search = Exhaustive::new(view, omega)?;
    search.solve(target.counts())
}

/// Depth-first search over induced paths, one bundle at a time, with
/// failure memoisation keyed on the set of consumed vertices.
struct Exhaustive {
    global: Vec<usize>,
    adj: Vec<u64>,
    local_graph: SimpleGraph,
    terms: [usize; 3],
    term_mask: u64,
    all: u64,
    memo: HashSet<(u64, u8, [u8; 3], u8)>,
    nodes: u64,
    chosen: [Vec<Vec<usize>>; 3],
}

fn bit(v: usize) -> u64 {
    1u64 << v
}

impl Exhaustive {
    fn new(view: &SubgraphView<'_>, omega: [usize; 3]) -> Result<Self, TripodError> {
        let global: Vec<usize> = view.vertices().collect();
        if global.len() > EXHAUSTIVE_LIMIT {
            return Err(TripodError::OracleScaleExceeded(global.len()));
        }
        let index: HashMap<usize, usize> = global.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adj = vec![0u64; global.len()];
        let mut edges = Vec::new();
        for (i, &v) in global.iter().enumerate() {
            for w in view.neighbors(v) {
                let j = index[&w];
                adj[i] |= bit(j);
                if i < j {
                    edges.push((i, j));
                }
            }
        }
        let terms = [index[&omega[0]], index[&omega[1]], index[&omega[2]]];
        let term_mask = terms.iter().fold(0, |m, &t| m | bit(t));
        let all = if global.len() == 64 { u64::MAX } else { bit(global.len()) - 1 };
        Ok(Exhaustive {
            local_graph: SimpleGraph::from_edges(global.len(), &edges),
            global,
            adj,
            terms,
            term_mask,
            all,
            memo: HashSet::new(),
            nodes: 0,
            chosen: [Vec::new(), Vec::new(), Vec::new()],
        })
    }

    fn solve(&mut self, want: [usize; 3]) -> Result<TripodStructure, TripodError> {
        let rem = [want[0] as u8, want[1] as u8, want[2] as u8];
        self.chosen = [Vec::new(), Vec::new(), Vec::new()];
        match self.rec(0, 0, rem, 0) {
            Some(true) => {
                let omega = [self.global[self.terms[0]], self.global[self.terms[1]], self.global[self.terms[2]]];
                let bundles = self.chosen.clone().map(|b| {
                    b.into_iter()
                        .map(|p| Path(p.into_iter().map(|v| self.global[v]).collect()))
                        .collect::<Vec<_>>()
                });
                Ok(TripodStructure::from_bundles(omega, bundles))
            }
            Some(false) => Err(TripodError::Infeasible),
            None => Err(TripodError::Budget {
                steps: self.nodes,
                restarts: 0,
            }),
        }
    }

    fn free(&self, used: u64) -> u64 {
        self.all & !used & !self.term_mask
    }

    fn direct_available(&self, k: usize, direct_used: u8) -> bool {
        let (i, j) = PAIRS[k];
        direct_used & (1 << k) == 0 && self.adj[self.terms[i]] & bit(self.terms[j]) != 0
    }

    fn feasible(&self, used: u64, direct_used: u8, rem: [u8; 3]) -> bool {
        let free = self.free(used);
        for t in 0..3 {
            let mut need = 0;
            let mut avail = (self.adj[self.terms[t]] & free).count_ones() as usize;
            for k in 0..3 {
                let (i, j) = PAIRS[k];
                if i == t || j == t {
                    need += rem[k] as usize;
                    if rem[k] > 0 && self.direct_available(k, direct_used) {
                        avail += 1;
                    }
                }
            }
            if avail < need {
                return false;
            }
        }
        for k in 0..3 {
            if rem[k] == 0 {
                continue;
            }
            let (i, j) = PAIRS[k];
            let (p, q) = (self.terms[i], self.terms[j]);
            let mask: Vec<bool> = (0..self.global.len())
                .map(|v| v == p || v == q || free & bit(v) != 0)
                .collect();
            let view = SubgraphView::from_mask(&self.local_graph, mask);
            let drop_direct = !self.direct_available(k, direct_used);
            let role = |v: usize| {
                if v == p {
                    Role::source(INF)
                } else if v == q {
                    Role::sink(INF)
                } else {
                    Role::NORMAL
                }
            };
            let edge_ok = |u: usize, w: usize| !(drop_direct && u == p && w == q);
            let spec = NetworkSpec {
                edge_ok: Some(&edge_ok),
                ..NetworkSpec::new(&role)
            };
            let mut sn = SplitNetwork::build(&view, &spec);
            if (sn.net.max_flow(rem[k] as i32) as u8) < rem[k] {
                return false;
            }
        }
        true
    }

    /// `None` when the node limit is hit.
    fn rec(&mut self, used: u64, direct_used: u8, rem: [u8; 3], min_second: u8) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > EXHAUSTIVE_NODE_LIMIT {
            return None;
        }
        let Some(k) = (0..3).find(|&k| rem[k] > 0) else {
            return Some(true);
        };
        let key = (used, direct_used, rem, min_second);
        if self.memo.contains(&key) {
            return Some(false);
        }
        if !self.feasible(used, direct_used, rem) {
            self.memo.insert(key);
            return Some(false);
        }
        let (i, j) = PAIRS[k];
        let (p, q) = (self.terms[i], self.terms[j]);
        let mut next_rem = rem;
        next_rem[k] -= 1;
        // Candidate second vertices in ascending order; the direct edge's second vertex is q.
        let free = self.free(used);
        let mut seconds = self.adj[p] & (free | bit(q));
        while seconds != 0 {
            let w = seconds.trailing_zeros() as usize;
            seconds &= seconds - 1;
            if (w as u8) + 1 <= min_second {
                continue;
            }
            let next_min = |rem: [u8; 3]| if rem[k] > 0 { w as u8 + 1 } else { 0 };
            if w == q {
                if !self.direct_available(k, direct_used) {
                    continue;
                }
                self.chosen[k].push(vec![p, q]);
                match self.rec(used, direct_used | (1 << k), next_rem, next_min(next_rem)) {
                    Some(false) => {}
                    other => return other,
                }
                self.chosen[k].pop();
                continue;
            }
            let mut path = vec![p, w];
            match self.extend(&mut path, bit(p) | bit(w), used, direct_used, next_rem, k, q, next_min(next_rem)) {
                Some(false) => {}
                other => return other,
            }
        }
        self.memo.insert(key);
        Some(false)
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        &mut self,
        path: &mut Vec<usize>,
        pmask: u64,
        used: u64,
        direct_used: u8,
        rem: [u8; 3],
        k: usize,
        q: usize,
        next_min: u8,
    ) -> Option<bool> {
        let u = *path.last().unwrap();
        let p = path[0];
        let earlier = pmask & !bit(u);
        if self.adj[u] & bit(q) != 0 {
            // Any other continuation would leave a chord to q.
            if self.adj[q] & earlier & !bit(p) != 0 {
                return Some(false);
            }
            path.push(q);
            self.chosen[k].push(path.clone());
            let new_used = used | (pmask & !bit(p));
            let r = self.rec(new_used, direct_used, rem, next_min);
            self.chosen[k].pop();
            path.pop();
            return r;
        }
        let free = self.free(used) & !pmask;
        if !self.reaches(u, q, free) {
            return Some(false);
        }
        let mut cands = self.adj[u] & free;
        while cands != 0 {
            let w = cands.trailing_zeros() as usize;
            cands &= cands - 1;
            if self.adj[w] & earlier != 0 {
                continue;
            }
            path.push(w);
            let r = self.extend(path, pmask | bit(w), used, direct_used, rem, k, q, next_min);
            path.pop();
            match r {
                Some(false) => {}
                other => return other,
            }
        }
        Some(false)
    }

    fn reaches(&self, from: usize, to: usize, free: u64) -> bool {
        let mut seen = bit(from);
        let mut frontier = bit(from);
        while frontier != 0 {
            let mut next = 0u64;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                if self.adj[v] & bit(to) != 0 {
                    return true;
                }
                next |= self.adj[v] & free;
            }
            next &= !seen;
            seen |= next;
            frontier = next;
        }
        false
    }
}

/// Upper bounds on the number of internally disjoint paths through all of
/// `omega`: each such path spends at least four edge-ends at the terminals,
/// and a non-terminal vertex can supply at most two of them; no terminal
/// has more paths than its degree; the part of each path between two
/// terminals either avoids the third or passes through it.
pub fn pi_upper_bound(view: &SubgraphView<'_>, omega: [usize; 3]) -> Result<usize, TripodError> {
    check_terminals(view, omega)?;
    let mut usable = 0usize;
    let mut seen: HashMap<usize, usize> = HashMap::new();
    for &t in &omega {
        for w in view.neighbors(t) {
            if omega.contains(&w) {
                usable += 1;
            } else {
                *seen.entry(w).or_default() += 1;
            }
        }
    }
    usable += seen.values().map(|&c| c.min(2)).sum::<usize>();
    let mut ub = usable / 4;
    for &t in &omega {
        ub = ub.min(view.degree(t));
    }
    for k in 0..3 {
        let (i, j) = PAIRS[k];
        let r = omega[2 - k];
        let rest = view.without(&[r]);
        let kappa = local_connectivity(&rest, omega[i], omega[j], Some(ub)).map_err(|_| TripodError::BadTerminals)?;
        ub = ub.min(kappa + view.degree(r) / 2);
    }
    Ok(ub)
}

/// Exact maximum number of internally disjoint paths through all three
/// terminals, with a tripod structure attaining it.
pub fn exact_pi_witness(view: &SubgraphView<'_>, omega: [usize; 3]) -> Result<(usize, TripodStructure), TripodError> {
    check_terminals(view, omega)?;
    if view.vertex_count() > EXHAUSTIVE_LIMIT {
        return Err(TripodError::OracleScaleExceeded(view.vertex_count()));
    }
    let ub = pi_upper_bound(view, omega)?;
    let quick = Budget {
        steps: 20_000,
        restarts: 6,
        seed: 0,
    };
    let mut search = Exhaustive::new(view, omega)?;
    for t in (1..=ub).rev() {
        let targets = minimal_targets(t);
        for &tg in &targets {
            if let Ok(sol) = solve_heuristic_only(view, omega, tg, quick) {
                return Ok((t, sol));
            }
        }
        for &tg in &targets {
            match search.solve(tg.counts()) {
                Ok(s) => return Ok((t, s)),
                Err(TripodError::Infeasible) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok((0, TripodStructure::empty(omega)))
}

pub fn exact_pi(view: &SubgraphView<'_>, omega: [usize; 3]) -> Result<usize, TripodError> {
    exact_pi_witness(view, omega).map(|(t, _)| t)
}

/// Bundle counts `(m_a + m_b, m_a + m_c, m_b + m_c)` over all splits of `t`.
fn minimal_targets(t: usize) -> Vec<StructureTarget> {
    let mut out = Vec::new();
    for ma in 0..=t {
        for mb in 0..=t - ma {
            let mc = t - ma - mb;
            let tg = StructureTarget::custom(ma + mb, ma + mc, mb + mc);
            debug_assert!(pairing_capacity(tg.x, tg.y, tg.z) >= t);
            out.push(tg);
        }
    }
    out
}

fn solve_heuristic_only(
    view: &SubgraphView<'_>,
    omega: [usize; 3],
    target: StructureTarget,
    budget: Budget,
) -> Result<TripodStructure, TripodError> {
    let want = target.counts();
    let mut steps = 0;
    for restart in 0..budget.restarts {
        let mut state = Repair::new(view, omega, want, None);
        state.seed(restart as usize % 3);
        let ok = state.run(budget.steps.saturating_sub(steps));
        steps += state.steps;
        if ok {
            let s = state.structure().truncated(target);
            if verify_tripod(view, &s, target).passed() {
                return Ok(s);
            }
        }
    }
    Err(TripodError::Budget {
        steps,
        restarts: budget.restarts,
    })
}
