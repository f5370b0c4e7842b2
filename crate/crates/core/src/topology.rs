//! Cayley graphs of `S_n` generated by the bubble-sort star and wheel
//! transposition sets, with the copy decomposition by last image.
//!
//! Vertex ids are Lehmer ranks. The copy of `σ` is `σ(n)`; copy `i` induces a
//! subgraph isomorphic to the bubble-sort star graph of degree `n - 1`. A
//! wheel-graph vertex `v` has exactly three neighbours outside its copy:
//! `v⁺ = v(1 n)`, `v⁻ = v(n-1 n)` and `v* = v(2 n)`.

use std::fmt::Write as _;

use crate::error::TopologyError;
use crate::graph::{SimpleGraph, SubgraphView};
use crate::perm::{factorial, Family, GeneratorSet, Permutation, Transposition, MAX_DEGREE};

/// Copy index `i ∈ [n]`: the set of permutations with `σ(n) = i`.
pub type CopyId = usize;

#[derive(Clone, Debug)]
pub struct CayleyGraph {
    generators: GeneratorSet,
    graph: SimpleGraph,
    /// Generator index for each adjacency entry, parallel to the sorted lists.
    labels: Vec<Vec<u8>>,
    perms: Vec<Permutation>,
}

/// The three cross-copy neighbours of a wheel-graph vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OutsideNeighbors {
    pub plus: usize,
    pub minus: usize,
    pub star: usize,
}

impl OutsideNeighbors {
    pub fn as_array(&self) -> [usize; 3] {
        [self.plus, self.minus, self.star]
    }
}

impl CayleyGraph {
    pub fn build(n: usize, family: Family) -> Result<Self, TopologyError> {
        if n > MAX_DEGREE {
            return Err(crate::error::PermError::DegreeTooLarge(n).into());
        }
        let generators = GeneratorSet::new(family, n)?;
        let count = factorial(n);
        let perms: Vec<Permutation> = (0..count)
            .map(|k| Permutation::unrank(k, n))
            .collect::<Result<_, _>>()?;
        let mut adj = Vec::with_capacity(count);
        let mut labels = Vec::with_capacity(count);
        for p in &perms {
            let mut row: Vec<(u32, u8)> = generators
                .members()
                .iter()
                .enumerate()
                .map(|(gi, &t)| {
                    let w = p.apply(t).expect("generator within degree").rank();
                    (w as u32, gi as u8)
                })
                .collect();
            row.sort_unstable();
            adj.push(row.iter().map(|&(w, _)| w).collect());
            labels.push(row.iter().map(|&(_, l)| l).collect());
        }
        Ok(CayleyGraph {
            generators,
            graph: SimpleGraph::from_sorted_adjacency(adj),
            labels,
            perms,
        })
    }

    pub fn n(&self) -> usize {
        self.generators.degree()
    }

    pub fn family(&self) -> Family {
        self.generators.family()
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.generators
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.perms.len()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn perm(&self, v: usize) -> &Permutation {
        &self.perms[v]
    }

    /// Vertex id of a permutation of the graph's degree.
    pub fn vertex(&self, p: &Permutation) -> Result<usize, TopologyError> {
        if p.degree() != self.n() {
            return Err(crate::error::PermError::DegreeMismatch(p.degree(), self.n()).into());
        }
        Ok(p.rank())
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), TopologyError> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(TopologyError::UnknownVertex(v))
        }
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.graph.neighbors(v)
    }

    /// Neighbours of `v` with the generator labelling each edge.
    pub fn labeled_neighbors(&self, v: usize) -> impl Iterator<Item = (usize, Transposition)> + '_ {
        self.graph
            .neighbors(v)
            .zip(self.labels[v].iter())
            .map(|(w, &l)| (w, self.generators.members()[l as usize]))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.graph.has_edge(u, v)
    }

    /// The neighbour `v·t`.
    pub fn step(&self, v: usize, t: Transposition) -> usize {
        self.perms[v].apply(t).expect("transposition within degree").rank()
    }

    pub fn copy_of(&self, v: usize) -> CopyId {
        self.perms[v].image(self.n())
    }

    pub fn copy_vertices(&self, i: CopyId) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.copy_of(v) == i).collect()
    }

    fn require_wheel(&self) -> Result<(), TopologyError> {
        if self.family() == Family::Wheel {
            Ok(())
        } else {
            Err(TopologyError::WrongFamily)
        }
    }

    fn check_copy(&self, i: CopyId) -> Result<(), TopologyError> {
        if (1..=self.n()).contains(&i) {
            Ok(())
        } else {
            Err(TopologyError::InvalidCopy(i))
        }
    }

    pub fn outside_neighbors(&self, v: usize) -> Result<OutsideNeighbors, TopologyError> {
        self.require_wheel()?;
        self.check_vertex(v)?;
        let n = self.n();
        let t = |i, j| Transposition::new(i, j).expect("valid transposition");
        Ok(OutsideNeighbors {
            plus: self.step(v, t(1, n)),
            minus: self.step(v, t(n - 1, n)),
            star: self.step(v, t(2, n)),
        })
    }

    /// Edges with one end in copy `i` and the other in copy `j`, as `(u in i, w in j)`.
    pub fn cross_edges(&self, i: CopyId, j: CopyId) -> Result<Vec<(usize, usize)>, TopologyError> {
        self.require_wheel()?;
        self.check_copy(i)?;
        self.check_copy(j)?;
        if i == j {
            return Err(TopologyError::SameCopy(i));
        }
        let mut out = Vec::new();
        for u in 0..self.vertex_count() {
            if self.copy_of(u) != i {
                continue;
            }
            for w in self.neighbors(u) {
                if self.copy_of(w) == j {
                    out.push((u, w));
                }
            }
        }
        Ok(out)
    }

    pub fn full_view(&self) -> SubgraphView<'_> {
        SubgraphView::full(&self.graph)
    }

    /// Induced subgraph on the union of the given copies.
    pub fn copy_union(&self, copies: &[CopyId]) -> Result<SubgraphView<'_>, TopologyError> {
        let keep = self.copy_mask(copies)?;
        let mask = (0..self.vertex_count()).map(|v| keep[self.copy_of(v)]).collect();
        Ok(SubgraphView::from_mask(&self.graph, mask))
    }

    /// Induced subgraph on everything outside the given copies.
    pub fn delete_copies(&self, copies: &[CopyId]) -> Result<SubgraphView<'_>, TopologyError> {
        let drop = self.copy_mask(copies)?;
        let mask = (0..self.vertex_count()).map(|v| !drop[self.copy_of(v)]).collect();
        Ok(SubgraphView::from_mask(&self.graph, mask))
    }

    fn copy_mask(&self, copies: &[CopyId]) -> Result<Vec<bool>, TopologyError> {
        if copies.is_empty() {
            return Err(TopologyError::EmptyCopySet);
        }
        let mut keep = vec![false; self.n() + 1];
        for &c in copies {
            self.check_copy(c)?;
            keep[c] = true;
        }
        Ok(keep)
    }

    /// Exact intersection of the neighbourhoods of two or three distinct vertices.
    pub fn common_neighbors(&self, vertices: &[usize]) -> Result<Vec<usize>, TopologyError> {
        if !(2..=3).contains(&vertices.len()) {
            return Err(TopologyError::WrongArity(vertices.len()));
        }
        for (k, &v) in vertices.iter().enumerate() {
            self.check_vertex(v)?;
            if vertices[..k].contains(&v) {
                return Err(TopologyError::DuplicateVertex(v));
            }
        }
        let mut common: Vec<usize> = self.neighbors(vertices[0]).collect();
        for &v in &vertices[1..] {
            common.retain(|&w| self.has_edge(v, w));
        }
        Ok(common)
    }

    /// Vertex id of `h·σ` where `σ` is vertex `v`; an automorphism of every
    /// Cayley graph.
    pub fn left_translate(&self, h: &Permutation, v: usize) -> usize {
        h.compose(&self.perms[v]).expect("same degree").rank()
    }

    /// DOT rendering: vertices labelled by permutation text, edges carry the generator.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let name = match self.family() {
            Family::Wheel => "CW",
            Family::BubbleSortStar => "BS",
        };
        writeln!(out, "graph {}_{} {{", name, self.n()).unwrap();
        for v in 0..self.vertex_count() {
            writeln!(out, "  {} [label=\"{}\"];", v, self.perms[v]).unwrap();
        }
        for u in 0..self.vertex_count() {
            for (w, t) in self.labeled_neighbors(u) {
                if u < w {
                    writeln!(out, "  {u} -- {w} [gen=\"{t}\"];").unwrap();
                }
            }
        }
        out.push_str("}\n");
        out
    }

    /// Edge list: header `n family`, then one `rank_u rank_v (i j)` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {}", self.n(), self.family()).unwrap();
        for u in 0..self.vertex_count() {
            for (w, t) in self.labeled_neighbors(u) {
                if u < w {
                    writeln!(out, "{u} {w} {t}").unwrap();
                }
            }
        }
        out
    }
}
