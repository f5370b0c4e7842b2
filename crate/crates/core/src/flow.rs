//! Unit-capacity flow on node-split networks.
//!
//! Every vertex `v` becomes `in(v) = 2v` and `out(v) = 2v + 1`; an ordinary
//! vertex carries one unit through the arc `in(v) → out(v)`. Terminals have
//! no through arc: the source attaches to `out(v)` and the sink to `in(v)`.
//! Each undirected edge `{u, w}` becomes `out(u) → in(w)` and
//! `out(w) → in(u)`. Edge arcs between two ordinary vertices are uncapacitated
//! so that minimum cuts consist of vertices; an edge arc touching a terminal
//! carries one unit.

use std::collections::VecDeque;

use crate::graph::SubgraphView;

pub(crate) const INF: i32 = i32::MAX / 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Role {
    /// Absent from the network.
    Blocked,
    /// Passes at most `cap` units.
    Through { cap: i32 },
    /// Emits up to `from_source` units and absorbs up to `to_sink` units;
    /// nothing passes through. `enter`/`leave` toggle the edge arcs.
    Terminal {
        from_source: i32,
        to_sink: i32,
        enter: bool,
        leave: bool,
    },
    /// Zero-length path: one unit straight from the source to the sink.
    SourceSink,
}

impl Role {
    pub(crate) const NORMAL: Role = Role::Through { cap: 1 };

    pub(crate) fn source(cap: i32) -> Role {
        Role::Terminal {
            from_source: cap,
            to_sink: 0,
            enter: false,
            leave: true,
        }
    }

    pub(crate) fn sink(cap: i32) -> Role {
        Role::Terminal {
            from_source: 0,
            to_sink: cap,
            enter: true,
            leave: false,
        }
    }

    fn enters(self) -> bool {
        match self {
            Role::Blocked | Role::SourceSink => false,
            Role::Through { .. } => true,
            Role::Terminal { enter, .. } => enter,
        }
    }

    fn leaves(self) -> bool {
        match self {
            Role::Blocked | Role::SourceSink => false,
            Role::Through { .. } => true,
            Role::Terminal { leave, .. } => leave,
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct FlowNet {
    adj: Vec<Vec<u32>>,
    to: Vec<u32>,
    cap: Vec<i32>,
    initial: Vec<i32>,
    cost: Vec<i32>,
    pub(crate) source: usize,
    pub(crate) sink: usize,
    /// Number of augmenting paths pushed so far.
    pub(crate) augmentations: u64,
}

impl FlowNet {
    fn new(nodes: usize, source: usize, sink: usize) -> Self {
        FlowNet {
            adj: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
            initial: Vec::new(),
            cost: Vec::new(),
            source,
            sink,
            augmentations: 0,
        }
    }

    fn add_arc(&mut self, u: usize, v: usize, cap: i32, cost: i32) {
        if cap <= 0 {
            return;
        }
        let id = self.to.len() as u32;
        self.adj[u].push(id);
        self.to.push(v as u32);
        self.cap.push(cap);
        self.initial.push(cap);
        self.cost.push(cost);
        self.adj[v].push(id + 1);
        self.to.push(u as u32);
        self.cap.push(0);
        self.initial.push(0);
        self.cost.push(-cost);
    }

    fn flow_on(&self, arc: usize) -> i32 {
        self.initial[arc] - self.cap[arc]
    }

    fn push(&mut self, arc: usize, amount: i32) {
        self.cap[arc] -= amount;
        self.cap[arc ^ 1] += amount;
    }

    /// Shortest-augmenting-path max flow (BFS), stopping at `limit` units.
    pub(crate) fn max_flow(&mut self, limit: i32) -> i32 {
        let mut total = 0;
        let n = self.adj.len();
        let mut pred = vec![u32::MAX; n];
        while total < limit {
            pred.iter_mut().for_each(|p| *p = u32::MAX);
            let mut queue = VecDeque::from([self.source]);
            let mut seen = vec![false; n];
            seen[self.source] = true;
            'bfs: while let Some(u) = queue.pop_front() {
                for &a in &self.adj[u] {
                    let a = a as usize;
                    let w = self.to[a] as usize;
                    if self.cap[a] > 0 && !seen[w] {
                        seen[w] = true;
                        pred[w] = a as u32;
                        if w == self.sink {
                            break 'bfs;
                        }
                        queue.push_back(w);
                    }
                }
            }
            if !seen[self.sink] {
                break;
            }
            let mut bottleneck = limit - total;
            let mut w = self.sink;
            while w != self.source {
                let a = pred[w] as usize;
                bottleneck = bottleneck.min(self.cap[a]);
                w = self.to[a ^ 1] as usize;
            }
            let mut w = self.sink;
            while w != self.source {
                let a = pred[w] as usize;
                self.push(a, bottleneck);
                w = self.to[a ^ 1] as usize;
            }
            total += bottleneck;
            self.augmentations += 1;
        }
        total
    }

    /// Successive shortest paths (queue-based Bellman-Ford); returns `(flow, cost)`.
    pub(crate) fn min_cost_flow(&mut self, limit: i32) -> (i32, i64) {
        let n = self.adj.len();
        let mut total = 0;
        let mut total_cost = 0i64;
        while total < limit {
            let mut dist = vec![i64::MAX; n];
            let mut in_queue = vec![false; n];
            let mut pred = vec![u32::MAX; n];
            dist[self.source] = 0;
            let mut queue = VecDeque::from([self.source]);
            in_queue[self.source] = true;
            while let Some(u) = queue.pop_front() {
                in_queue[u] = false;
                for &a in &self.adj[u] {
                    let a = a as usize;
                    if self.cap[a] <= 0 {
                        continue;
                    }
                    let w = self.to[a] as usize;
                    let nd = dist[u] + self.cost[a] as i64;
                    if nd < dist[w] {
                        dist[w] = nd;
                        pred[w] = a as u32;
                        if !in_queue[w] {
                            in_queue[w] = true;
                            queue.push_back(w);
                        }
                    }
                }
            }
            if dist[self.sink] == i64::MAX {
                break;
            }
            let mut bottleneck = limit - total;
            let mut w = self.sink;
            while w != self.source {
                let a = pred[w] as usize;
                bottleneck = bottleneck.min(self.cap[a]);
                w = self.to[a ^ 1] as usize;
            }
            let mut w = self.sink;
            while w != self.source {
                let a = pred[w] as usize;
                self.push(a, bottleneck);
                w = self.to[a ^ 1] as usize;
            }
            total += bottleneck;
            total_cost += bottleneck as i64 * dist[self.sink];
            self.augmentations += 1;
        }
        (total, total_cost)
    }

    /// Nodes reachable from the source in the residual network.
    pub(crate) fn residual_reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[self.source] = true;
        let mut queue = VecDeque::from([self.source]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let a = a as usize;
                let w = self.to[a] as usize;
                if self.cap[a] > 0 && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Splits the current flow into source-to-sink walks, cancelling any
    /// cycles met on the way. Consumes the flow.
    pub(crate) fn decompose(&mut self) -> Vec<Vec<usize>> {
        let mut paths = Vec::new();
        loop {
            let mut nodes = vec![self.source];
            let mut position = vec![usize::MAX; self.adj.len()];
            position[self.source] = 0;
            let mut u = self.source;
            while u != self.sink {
                let next = self.adj[u]
                    .iter()
                    .map(|&a| a as usize)
                    .find(|&a| a % 2 == 0 && self.flow_on(a) > 0);
                let Some(a) = next else { break };
                self.push(a ^ 1, 1);
                let w = self.to[a] as usize;
                if position[w] != usize::MAX {
                    // Cycle: its flow was just cancelled, drop it from the walk.
                    let keep = position[w] + 1;
                    for &x in &nodes[keep..] {
                        position[x] = usize::MAX;
                    }
                    nodes.truncate(keep);
                } else {
                    position[w] = nodes.len();
                    nodes.push(w);
                }
                u = w;
            }
            if u != self.sink {
                break;
            }
            let mut vertices: Vec<usize> = Vec::new();
            for &x in &nodes[1..nodes.len() - 1] {
                let v = x / 2;
                if vertices.last() != Some(&v) {
                    vertices.push(v);
                }
            }
            paths.push(vertices);
        }
        paths
    }
}

/// Node-split network over a view.
pub(crate) struct SplitNetwork {
    pub(crate) net: FlowNet,
    roles: Vec<Role>,
}

pub(crate) struct NetworkSpec<'a> {
    pub(crate) role: &'a dyn Fn(usize) -> Role,
    /// Extra cost charged for passing through an ordinary vertex.
    pub(crate) vertex_cost: Option<&'a dyn Fn(usize) -> i32>,
    /// Veto for individual edges (both directions).
    pub(crate) edge_ok: Option<&'a dyn Fn(usize, usize) -> bool>,
    /// Exploration order of neighbours: sorted by this key, then by id.
    pub(crate) priority: Option<&'a [u32]>,
}

impl<'a> NetworkSpec<'a> {
    pub(crate) fn new(role: &'a dyn Fn(usize) -> Role) -> Self {
        NetworkSpec {
            role,
            vertex_cost: None,
            edge_ok: None,
            priority: None,
        }
    }
}

impl SplitNetwork {
    pub(crate) fn build(view: &SubgraphView<'_>, spec: &NetworkSpec<'_>) -> Self {
        let bound = view.bound();
        let source = 2 * bound;
        let sink = 2 * bound + 1;
        let mut net = FlowNet::new(2 * bound + 2, source, sink);
        let roles: Vec<Role> = (0..bound)
            .map(|v| {
                if view.contains(v) {
                    (spec.role)(v)
                } else {
                    Role::Blocked
                }
            })
            .collect();
        let order: Vec<usize> = match spec.priority {
            None => (0..bound).collect(),
            Some(key) => {
                let mut o: Vec<usize> = (0..bound).collect();
                o.sort_by_key(|&v| (key[v], v));
                o
            }
        };
        for &v in &order {
            match roles[v] {
                Role::Blocked => {}
                Role::Through { cap } => {
                    let c = spec.vertex_cost.map_or(0, |f| f(v));
                    net.add_arc(2 * v, 2 * v + 1, cap, c);
                }
                Role::Terminal {
                    from_source,
                    to_sink,
                    ..
                } => {
                    net.add_arc(source, 2 * v + 1, from_source, 0);
                    net.add_arc(2 * v, sink, to_sink, 0);
                }
                Role::SourceSink => {
                    net.add_arc(source, 2 * v, 1, 0);
                    net.add_arc(2 * v, sink, 1, 0);
                }
            }
        }
        let mut nbrs: Vec<usize> = Vec::new();
        for &u in &order {
            if !roles[u].leaves() {
                continue;
            }
            nbrs.clear();
            nbrs.extend(view.neighbors(u));
            if let Some(key) = spec.priority {
                nbrs.sort_by_key(|&w| (key[w], w));
            }
            for &w in &nbrs {
                if !roles[w].enters() {
                    continue;
                }
                if let Some(ok) = spec.edge_ok {
                    if !ok(u, w) {
                        continue;
                    }
                }
                let cap = match (roles[u], roles[w]) {
                    (Role::Through { .. }, _) | (_, Role::Through { .. }) => INF,
                    _ => 1,
                };
                net.add_arc(2 * u + 1, 2 * w, cap, 0);
            }
        }
        SplitNetwork { net, roles }
    }

    /// Vertex separator read off a saturated network: ordinary vertices whose
    /// in-node is reachable but out-node is not, plus finite sink terminals
    /// entered from the reachable side.
    pub(crate) fn cut_vertices(&self) -> Vec<usize> {
        let reach = self.net.residual_reachable();
        let mut cut = Vec::new();
        for (v, role) in self.roles.iter().enumerate() {
            match role {
                Role::Through { .. } if reach[2 * v] && !reach[2 * v + 1] => cut.push(v),
                Role::Terminal { to_sink, from_source: 0, .. } if *to_sink > 0 && *to_sink < INF => {
                    let entered = self.net.adj[2 * v].iter().any(|&a| {
                        let a = a as usize;
                        a % 2 == 1 && self.net.to[a] as usize != self.net.sink && reach[self.net.to[a] as usize]
                    });
                    if entered {
                        cut.push(v);
                    }
                }
                _ => {}
            }
        }
        cut
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SimpleGraph;

    #[test]
    fn cycle_cancelling_decomposition() {
        // S -> 0 -> 1 -> T, plus a circulation 1 -> 2 -> 1 forced in by hand.
        let mut net = FlowNet::new(5, 3, 4);
        net.add_arc(3, 0, 1, 0);
        net.add_arc(0, 1, 1, 0);
        net.add_arc(1, 2, 1, 0);
        net.add_arc(2, 1, 1, 0);
        net.add_arc(1, 4, 1, 0);
        assert_eq!(net.max_flow(5), 1);
        // Inject a unit around the 1 -> 2 -> 1 cycle.
        net.push(4, 1);
        net.push(6, 1);
        // Raw nodes 0 and 1 both map to vertex 0 under the in/out numbering.
        assert_eq!(net.decompose(), vec![vec![0]]);
        assert!(net.to.iter().enumerate().all(|(a, _)| a % 2 == 1 || net.flow_on(a) == 0));
    }

    #[test]
    fn split_network_on_square() {
        let g = SimpleGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let view = g.view();
        let role = |v: usize| match v {
            0 => Role::source(INF),
            2 => Role::sink(INF),
            _ => Role::NORMAL,
        };
        let mut sn = SplitNetwork::build(&view, &NetworkSpec::new(&role));
        assert_eq!(sn.net.max_flow(INF), 2);
        assert_eq!(sn.cut_vertices(), vec![1, 3]);
        let mut paths = sn.net.decompose();
        paths.sort();
        assert_eq!(paths, vec![vec![0, 1, 2], vec![0, 3, 2]]);
    }

    #[test]
    fn min_cost_prefers_cheap_vertices() {
        let g = SimpleGraph::from_edges(4, &[(0, 1), (1, 3), (0, 2), (2, 3)]);
        let view = g.view();
        let role = |v: usize| match v {
            0 => Role::source(INF),
            3 => Role::sink(INF),
            _ => Role::NORMAL,
        };
        let cost = |v: usize| if v == 1 { 100 } else { 1 };
        let spec = NetworkSpec {
            vertex_cost: Some(&cost),
            ..NetworkSpec::new(&role)
        };
        let mut sn = SplitNetwork::build(&view, &spec);
        assert_eq!(sn.net.min_cost_flow(1), (1, 1));
        assert_eq!(sn.net.decompose(), vec![vec![0, 2, 3]]);
    }
}
