//! Disjoint path families from vertex-capacitated flows.
//!
//! All operations build a node-split network (see [`crate::flow`]) over a
//! [`SubgraphView`], run shortest-augmenting-path max flow and decompose the
//! result. Neighbours are explored in ascending vertex id, so results are
//! deterministic.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::MengerError;
use crate::flow::{NetworkSpec, Role, SplitNetwork, INF};
use crate::graph::SubgraphView;

/// A simple path given by its vertex sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path(pub Vec<usize>);

impl Path {
    pub fn new(vertices: Vec<usize>) -> Self {
        Path(vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> usize {
        self.0[0]
    }

    pub fn last(&self) -> usize {
        *self.0.last().expect("non-empty path")
    }

    pub fn internal(&self) -> &[usize] {
        if self.0.len() <= 2 {
            &[]
        } else {
            &self.0[1..self.0.len() - 1]
        }
    }

    pub fn reversed(&self) -> Path {
        Path(self.0.iter().rev().copied().collect())
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0
            .windows(2)
            .map(|w| if w[0] < w[1] { (w[0], w[1]) } else { (w[1], w[0]) })
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(&v)
    }

    /// Sub-path between the first occurrences of `from` and `to`, oriented `from → to`.
    pub fn segment(&self, from: usize, to: usize) -> Option<Path> {
        let i = self.0.iter().position(|&v| v == from)?;
        let j = self.0.iter().position(|&v| v == to)?;
        Some(if i <= j {
            Path(self.0[i..=j].to_vec())
        } else {
            Path(self.0[j..=i].iter().rev().copied().collect())
        })
    }

    /// Concatenation at a shared vertex: `self` must end where `other` starts.
    pub fn join(&self, other: &Path) -> Path {
        assert_eq!(self.last(), other.first(), "paths do not meet");
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0[1..]);
        Path(v)
    }

    /// Concatenation across the edge `self.last()`–`other.first()`.
    pub fn link(&self, other: &Path) -> Path {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Path(v)
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.0.len());
        self.0.iter().all(|v| seen.insert(*v))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PathKind {
    /// Paths meet only in declared terminals and share no edge.
    PairwiseInternallyDisjoint,
    /// Paths share no vertex at all.
    PairwiseFullyDisjoint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathFamily {
    pub paths: Vec<Path>,
    pub kind: PathKind,
}

impl PathFamily {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
}

fn check_in(view: &SubgraphView<'_>, v: usize) -> Result<(), MengerError> {
    if view.contains(v) {
        Ok(())
    } else {
        Err(MengerError::NotInView(v))
    }
}

fn pair_network(view: &SubgraphView<'_>, u: usize, v: usize, drop_direct: bool) -> SplitNetwork {
    let role = move |x: usize| {
        if x == u {
            Role::source(INF)
        } else if x == v {
            Role::sink(INF)
        } else {
            Role::NORMAL
        }
    };
    let edge_ok = move |a: usize, b: usize| !(a == u && b == v);
    let spec = NetworkSpec {
        edge_ok: if drop_direct { Some(&edge_ok) } else { None },
        ..NetworkSpec::new(&role)
    };
    SplitNetwork::build(view, &spec)
}

/// A maximum family of internally disjoint `u`–`v` paths. A direct edge
/// counts as one path.
pub fn max_internally_disjoint_paths(
    view: &SubgraphView<'_>,
    u: usize,
    v: usize,
) -> Result<PathFamily, MengerError> {
    check_in(view, u)?;
    check_in(view, v)?;
    if u == v {
        return Err(MengerError::SameVertex(u));
    }
    let mut sn = pair_network(view, u, v, false);
    sn.net.max_flow(INF);
    let mut paths: Vec<Path> = sn.net.decompose().into_iter().map(Path).collect();
    paths.sort_by_key(|p| p.0.get(1).copied());
    Ok(PathFamily {
        paths,
        kind: PathKind::PairwiseInternallyDisjoint,
    })
}

/// Local connectivity `κ(u, v)`, optionally stopping once `cap` is reached.
pub fn local_connectivity(
    view: &SubgraphView<'_>,
    u: usize,
    v: usize,
    cap: Option<usize>,
) -> Result<usize, MengerError> {
    check_in(view, u)?;
    check_in(view, v)?;
    if u == v {
        return Err(MengerError::SameVertex(u));
    }
    let mut sn = pair_network(view, u, v, false);
    let limit = cap.map_or(INF, |c| c as i32);
    Ok(sn.net.max_flow(limit) as usize)
}

/// `k` paths from `x` to distinct members of `targets`, pairwise sharing
/// only `x` and touching `targets` only at their last vertex.
pub fn k_fan(
    view: &SubgraphView<'_>,
    x: usize,
    targets: &[usize],
    k: usize,
) -> Result<PathFamily, MengerError> {
    check_in(view, x)?;
    let target_set: HashSet<usize> = targets.iter().copied().collect();
    for &y in &target_set {
        check_in(view, y)?;
    }
    if target_set.contains(&x) {
        return Err(MengerError::SourceInTargets(x));
    }
    if target_set.len() < k {
        return Err(MengerError::TooFewEndpoints {
            k,
            available: target_set.len(),
        });
    }
    let role = |v: usize| {
        if v == x {
            Role::source(k as i32)
        } else if target_set.contains(&v) {
            Role::sink(1)
        } else {
            Role::NORMAL
        }
    };
    let mut sn = SplitNetwork::build(view, &NetworkSpec::new(&role));
    let found = sn.net.max_flow(k as i32) as usize;
    if found < k {
        let mut full = SplitNetwork::build(view, &NetworkSpec::new(&role));
        full.net.max_flow(INF);
        return Err(MengerError::InsufficientConnectivity {
            wanted: k,
            found,
            cut: full.cut_vertices(),
        });
    }
    let mut paths: Vec<Path> = sn.net.decompose().into_iter().map(Path).collect();
    paths.sort_by_key(|p| p.last());
    Ok(PathFamily {
        paths,
        kind: PathKind::PairwiseInternallyDisjoint,
    })
}

/// `k` pairwise vertex-disjoint paths, each starting in `xs`, ending in `ys`
/// and with every internal vertex outside `xs ∪ ys`. Shared members of
/// `xs` and `ys` yield zero-length paths.
pub fn disjoint_set_paths(
    view: &SubgraphView<'_>,
    xs: &[usize],
    ys: &[usize],
    k: usize,
) -> Result<PathFamily, MengerError> {
    let xset: HashSet<usize> = xs.iter().copied().collect();
    let yset: HashSet<usize> = ys.iter().copied().collect();
    for &v in xset.iter().chain(yset.iter()) {
        check_in(view, v)?;
    }
    let available = xset.len().min(yset.len());
    if available < k {
        return Err(MengerError::TooFewEndpoints { k, available });
    }
    let role = |v: usize| match (xset.contains(&v), yset.contains(&v)) {
        (true, true) => Role::SourceSink,
        (true, false) => Role::source(1),
        (false, true) => Role::sink(1),
        (false, false) => Role::NORMAL,
    };
    let mut sn = SplitNetwork::build(view, &NetworkSpec::new(&role));
    let found = sn.net.max_flow(k as i32) as usize;
    if found < k {
        let mut full = SplitNetwork::build(view, &NetworkSpec::new(&role));
        full.net.max_flow(INF);
        return Err(MengerError::InsufficientConnectivity {
            wanted: k,
            found,
            cut: full.cut_vertices(),
        });
    }
    let mut paths: Vec<Path> = sn.net.decompose().into_iter().map(Path).collect();
    paths.sort_by_key(|p| p.first());
    Ok(PathFamily {
        paths,
        kind: PathKind::PairwiseFullyDisjoint,
    })
}

/// Minimum vertex set separating non-adjacent `u` and `v`. For adjacent
/// vertices the separator of the view without the edge `uv` is returned
/// inside [`MengerError::AdjacentPair`].
pub fn min_vertex_cut(view: &SubgraphView<'_>, u: usize, v: usize) -> Result<Vec<usize>, MengerError> {
    check_in(view, u)?;
    check_in(view, v)?;
    if u == v {
        return Err(MengerError::SameVertex(u));
    }
    let adjacent = view.has_edge(u, v);
    let mut sn = pair_network(view, u, v, adjacent);
    sn.net.max_flow(INF);
    let mut cut = sn.cut_vertices();
    cut.sort_unstable();
    if adjacent {
        Err(MengerError::AdjacentPair { u, v, cut })
    } else {
        Ok(cut)
    }
}

/// Exact vertex connectivity (0 for disconnected views, `|V| - 1` for
/// complete ones).
///
/// Some minimum separator misses one of the first `κ + 1` vertices and
/// separates it from a later non-neighbour, so only those sources are tried.
pub fn vertex_connectivity(view: &SubgraphView<'_>) -> Result<usize, MengerError> {
    let verts: Vec<usize> = view.vertices().collect();
    if verts.len() < 2 {
        return Err(MengerError::TooSmall);
    }
    if !view.is_connected() {
        return Ok(0);
    }
    let mut best = verts.len() - 1;
    let mut i = 0;
    while i <= best && i < verts.len() {
        let s = verts[i];
        for &t in &verts[i + 1..] {
            if view.has_edge(s, t) {
                continue;
            }
            let k = local_connectivity(view, s, t, Some(best))?;
            best = best.min(k);
        }
        i += 1;
    }
    Ok(best)
}

/// Vertex connectivity of a vertex-transitive view: the minimum of
/// `κ(anchor, t)` over non-neighbours `t` of a single anchor.
pub fn vertex_connectivity_transitive(view: &SubgraphView<'_>, anchor: usize) -> Result<usize, MengerError> {
    check_in(view, anchor)?;
    if view.vertex_count() < 2 {
        return Err(MengerError::TooSmall);
    }
    if !view.is_connected() {
        return Ok(0);
    }
    let mut best = view.vertex_count() - 1;
    for t in view.vertices() {
        if t == anchor || view.has_edge(anchor, t) {
            continue;
        }
        best = best.min(local_connectivity(view, anchor, t, Some(best))?);
    }
    Ok(best)
}

/// Independent checker for a path family: every path must be simple and
/// follow edges of the view; pairs of paths may share only `shared`
/// vertices (internally disjoint families) or nothing at all (fully
/// disjoint families), and never an edge. Returns one message per violation.
pub fn verify_family(view: &SubgraphView<'_>, family: &PathFamily, shared: &[usize]) -> Vec<String> {
    let mut problems = Vec::new();
    let shared: HashSet<usize> = shared.iter().copied().collect();
    let mut owner: HashMap<usize, usize> = HashMap::new();
    let mut edge_owner: HashMap<(usize, usize), usize> = HashMap::new();
    for (idx, path) in family.paths.iter().enumerate() {
        if path.is_empty() {
            problems.push(format!("path {idx} is empty"));
            continue;
        }
        if !path.is_simple() {
            problems.push(format!("path {idx} repeats a vertex"));
        }
        for &v in path.vertices() {
            if !view.contains(v) {
                problems.push(format!("path {idx} leaves the view at vertex {v}"));
            }
        }
        for (a, b) in path.edges() {
            if !view.has_edge(a, b) {
                problems.push(format!("path {idx} uses non-edge ({a}, {b})"));
            }
            if let Some(other) = edge_owner.insert((a, b), idx) {
                problems.push(format!("paths {other} and {idx} share edge ({a}, {b})"));
            }
        }
        let mut vs: Vec<usize> = path.vertices().to_vec();
        vs.sort_unstable();
        vs.dedup();
        for v in vs {
            let exempt = family.kind == PathKind::PairwiseInternallyDisjoint && shared.contains(&v);
            if exempt {
                continue;
            }
            if let Some(other) = owner.insert(v, idx) {
                problems.push(format!("paths {other} and {idx} share vertex {v}"));
            }
        }
    }
    problems
}
