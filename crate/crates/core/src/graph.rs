//! Plain undirected graphs and induced-subgraph views over them.

use std::collections::VecDeque;

/// Undirected simple graph on vertices `0..n` with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: Vec<Vec<u32>>,
}

impl SimpleGraph {
    pub fn new(n: usize) -> Self {
        SimpleGraph {
            adj: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = SimpleGraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Adds `{u, v}`; loops and repeated edges are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u == v || self.has_edge(u, v) {
            return;
        }
        let (a, b) = (u as u32, v as u32);
        let pos = self.adj[u].binary_search(&b).unwrap_err();
        self.adj[u].insert(pos, b);
        let pos = self.adj[v].binary_search(&a).unwrap_err();
        self.adj[v].insert(pos, a);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        if let Ok(p) = self.adj[u].binary_search(&(v as u32)) {
            self.adj[u].remove(p);
        }
        if let Ok(p) = self.adj[v].binary_search(&(u as u32)) {
            self.adj[v].remove(p);
        }
    }

    /// Builds a graph directly from sorted, symmetric adjacency lists.
    pub(crate) fn from_sorted_adjacency(adj: Vec<Vec<u32>>) -> Self {
        SimpleGraph { adj }
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().map(|&w| w as usize)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&(v as u32)).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, ns)| {
            ns.iter()
                .map(|&w| w as usize)
                .filter(move |&w| u < w)
                .map(move |w| (u, w))
        })
    }

    pub fn view(&self) -> SubgraphView<'_> {
        SubgraphView::full(self)
    }
}

/// An induced subgraph described by a vertex predicate over a base graph.
///
/// Edges are present iff both ends are allowed. Restricting a view
/// intersects predicates.
#[derive(Clone, Debug)]
pub struct SubgraphView<'g> {
    base: &'g SimpleGraph,
    allowed: Option<Vec<bool>>,
    count: usize,
}

impl<'g> SubgraphView<'g> {
    pub fn full(base: &'g SimpleGraph) -> Self {
        SubgraphView {
            base,
            allowed: None,
            count: base.order(),
        }
    }

    pub fn from_mask(base: &'g SimpleGraph, mask: Vec<bool>) -> Self {
        assert_eq!(mask.len(), base.order());
        let count = mask.iter().filter(|&&b| b).count();
        SubgraphView {
            base,
            allowed: Some(mask),
            count,
        }
    }

    pub fn from_vertices(base: &'g SimpleGraph, vertices: impl IntoIterator<Item = usize>) -> Self {
        let mut mask = vec![false; base.order()];
        for v in vertices {
            mask[v] = true;
        }
        Self::from_mask(base, mask)
    }

    pub fn base(&self) -> &'g SimpleGraph {
        self.base
    }

    /// Size of the underlying index space (not the number of allowed vertices).
    pub fn bound(&self) -> usize {
        self.base.order()
    }

    pub fn vertex_count(&self) -> usize {
        self.count
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.base.order() && self.allowed.as_ref().map_or(true, |m| m[v])
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.base.order()).filter(move |&v| self.contains(v))
    }

    /// Allowed neighbours of `v`, ascending.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.base.neighbors(v).filter(move |&w| self.contains(w))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).count()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.contains(u) && self.contains(v) && self.base.has_edge(u, v)
    }

    pub fn edge_count(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Intersection with another predicate.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> SubgraphView<'g> {
        let mask = (0..self.bound()).map(|v| self.contains(v) && keep(v)).collect();
        SubgraphView::from_mask(self.base, mask)
    }

    /// The view with the given vertices removed.
    pub fn without(&self, removed: &[usize]) -> SubgraphView<'g> {
        let mut mask: Vec<bool> = (0..self.bound()).map(|v| self.contains(v)).collect();
        for &v in removed {
            if v < mask.len() {
                mask[v] = false;
            }
        }
        SubgraphView::from_mask(self.base, mask)
    }

    /// Breadth-first distances from `s` inside the view (`usize::MAX` when unreachable).
    pub fn bfs_distances(&self, s: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.bound()];
        if !self.contains(s) {
            return dist;
        }
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for w in self.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// A shortest path from `s` to `t`, if one exists.
    pub fn shortest_path(&self, s: usize, t: usize) -> Option<Vec<usize>> {
        if !self.contains(s) || !self.contains(t) {
            return None;
        }
        let mut parent = vec![usize::MAX; self.bound()];
        parent[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for w in self.neighbors(u) {
                if parent[w] == usize::MAX {
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        if parent[t] == usize::MAX {
            return None;
        }
        let mut path = vec![t];
        let mut cur = t;
        while cur != s {
            cur = parent[cur];
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }

    pub fn is_connected(&self) -> bool {
        match self.vertices().next() {
            None => true,
            Some(s) => {
                let dist = self.bfs_distances(s);
                self.vertices().all(|v| dist[v] != usize::MAX)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn induced_semantics() {
        let g = SimpleGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(g.edge_count(), 4);
        let v = g.view().without(&[1]);
        assert_eq!(v.vertex_count(), 3);
        assert_eq!(v.edge_count(), 2);
        assert_eq!(v.neighbors(0).collect::<Vec<_>>(), vec![3]);
        let w = v.restrict(|x| x != 3);
        assert_eq!(w.vertex_count(), 2);
        assert_eq!(w.edge_count(), 0);
        assert!(!w.is_connected());
        assert_eq!(v.shortest_path(0, 2), Some(vec![0, 3, 2]));
    }

    #[test]
    fn add_remove_edges() {
        let mut g = SimpleGraph::new(3);
        g.add_edge(0, 2);
        g.add_edge(2, 0);
        g.add_edge(1, 1);
        assert_eq!(g.edge_count(), 1);
        g.remove_edge(2, 0);
        assert_eq!(g.edge_count(), 0);
    }
}
