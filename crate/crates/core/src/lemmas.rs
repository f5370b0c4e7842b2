//! Executable checklist of the structural facts the construction relies on.

use serde::{Deserialize, Serialize};

use crate::error::TopologyError;
use crate::graph::{SimpleGraph, SubgraphView};
use crate::menger::{max_internally_disjoint_paths, vertex_connectivity};
use crate::perm::{factorial, Family, Permutation};
use crate::topology::CayleyGraph;

/// Deliberate corruption for exercising the failure path.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Fault {
    #[default]
    None,
    /// Checks run on the graph with one edge between copies 1 and 2 removed.
    DropCrossEdge,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LemmaRow {
    pub lemma: String,
    pub check: String,
    pub expected: String,
    pub observed: String,
    pub passed: bool,
}

fn row(lemma: &str, check: impl Into<String>, expected: impl ToString, observed: impl ToString, passed: bool) -> LemmaRow {
    LemmaRow {
        lemma: lemma.to_string(),
        check: check.into(),
        expected: expected.to_string(),
        observed: observed.to_string(),
        passed,
    }
}

/// Runs every check for the wheel graph of degree `n`.
pub fn run_lemmas(n: usize, fault: Fault) -> Result<Vec<LemmaRow>, TopologyError> {
    let g = CayleyGraph::build(n, Family::Wheel)?;
    let mut h: SimpleGraph = g.graph().clone();
    if fault == Fault::DropCrossEdge {
        let (u, w) = g.cross_edges(1, 2)?[0];
        h.remove_edge(u, w);
    }
    let bs = CayleyGraph::build(n - 1, Family::BubbleSortStar)?;
    let nv = g.vertex_count();
    let mut rows = Vec::new();

    let degs: Vec<usize> = (0..nv).map(|v| h.degree(v)).collect();
    let (lo, hi) = (*degs.iter().min().unwrap(), *degs.iter().max().unwrap());
    rows.push(row("regularity", "wheel graph is (2n-2)-regular", 2 * n - 2, format!("{lo}..{hi}"), lo == hi && lo == 2 * n - 2));

    // Copies against BS_{n-1}: drop the last position and close up values.
    let standard = |v: usize| {
        let p = g.perm(v);
        let i = p.image(n);
        let images: Vec<usize> = (1..n).map(|k| p.image(k)).map(|x| if x > i { x - 1 } else { x }).collect();
        bs.vertex(&Permutation::from_images(&images).expect("standardised")).expect("degree n - 1")
    };
    let mut iso_bad = 0;
    for i in 1..=n {
        let vs = g.copy_vertices(i);
        let view = SubgraphView::from_vertices(&h, vs.iter().copied());
        let mut mapped = 0;
        for &u in &vs {
            for w in view.neighbors(u).filter(|&w| w > u) {
                mapped += 1;
                if !bs.has_edge(standard(u), standard(w)) {
                    iso_bad += 1;
                }
            }
        }
        if mapped != bs.edge_count() {
            iso_bad += 1;
        }
    }
    rows.push(row("copies", "every copy is isomorphic to BS_{n-1}", "0 mismatches", format!("{iso_bad} mismatches"), iso_bad == 0));

    let bview = bs.full_view();
    let k_bs = 2 * (n - 1) - 3;
    let reg = (0..bs.vertex_count()).all(|v| bs.graph().degree(v) == k_bs);
    rows.push(row("copies", format!("BS_{} is {k_bs}-regular", n - 1), k_bs, if reg { k_bs.to_string() } else { "irregular".into() }, reg));
    let mut kmin = usize::MAX;
    for u in 0..bs.vertex_count() {
        for w in u + 1..bs.vertex_count() {
            let k = max_internally_disjoint_paths(&bview, u, w).map(|f| f.len()).unwrap_or(0);
            kmin = kmin.min(k);
        }
    }
    rows.push(row("copies", format!("kappa(BS_{}) over all vertex pairs", n - 1), k_bs, kmin, kmin == k_bs));

    let mut cn2 = 0;
    let mut best3 = (0usize, [0usize; 3]);
    for u in 0..nv {
        for v in u + 1..nv {
            let common: Vec<usize> = h.neighbors(u).filter(|&x| h.has_edge(x, v)).collect();
            cn2 = cn2.max(common.len());
            if common.len() <= best3.0 {
                continue;
            }
            let mut cands: Vec<usize> = common.iter().flat_map(|&c| h.neighbors(c)).filter(|&w| w > v).collect();
            cands.sort_unstable();
            cands.dedup();
            for w in cands {
                let r = common.iter().filter(|&&c| h.has_edge(c, w)).count();
                if r > best3.0 {
                    best3 = (r, [u, v, w]);
                }
            }
        }
    }
    rows.push(row("common neighbours", "max common neighbours of two vertices", "<= 3", cn2, cn2 <= 3));

    let want = 3 * factorial(n - 2);
    let mut counts = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let c = g.cross_edges(i, j)?.into_iter().filter(|&(u, w)| h.has_edge(u, w)).count();
            counts.push(c);
        }
    }
    let ok = counts.iter().all(|&c| c == want);
    let (cmin, cmax) = (counts.iter().min().unwrap(), counts.iter().max().unwrap());
    rows.push(row("cross edges", "edges between every two copies", want, format!("{cmin}..{cmax}"), ok));

    let mut out_bad = 0;
    let mut hit = vec![0u8; nv];
    for v in 0..nv {
        let o = g.outside_neighbors(v)?.as_array();
        let inside = h.neighbors(v).filter(|&w| g.copy_of(w) == g.copy_of(v)).count();
        let mut outside: Vec<usize> = h.neighbors(v).filter(|&w| g.copy_of(w) != g.copy_of(v)).collect();
        outside.sort_unstable();
        let mut named = o.to_vec();
        named.sort_unstable();
        let mut cps: Vec<usize> = outside.iter().map(|&w| g.copy_of(w)).collect();
        cps.sort_unstable();
        cps.dedup();
        if inside != 2 * n - 5 || outside != named || cps.len() != 3 {
            out_bad += 1;
        }
        for w in o {
            hit[w] += 1;
        }
    }
    // Distinct vertices of one copy have disjoint outside neighbourhoods,
    // so every vertex is named exactly three times.
    let shared = hit.iter().filter(|&&c| c != 3).count();
    rows.push(row("outside neighbours", "2n-5 inside and three outside neighbours in distinct copies", "0 violations", format!("{} violations", out_bad + shared), out_bad + shared == 0));

    rows.push(row(
        "triple common neighbours",
        format!("max common neighbours of three vertices (witness {:?})", best3.1),
        3,
        best3.0,
        best3.0 == 3,
    ));

    let floor = 2 * n - 5;
    let mut worst = usize::MAX;
    for mask in 1u32..(1 << n) {
        let copies: Vec<usize> = (1..=n).filter(|&i| mask & (1 << (i - 1)) != 0).collect();
        let view = SubgraphView::from_vertices(&h, copies.iter().flat_map(|&i| g.copy_vertices(i)));
        worst = worst.min(vertex_connectivity(&view).unwrap_or(0));
    }
    rows.push(row("copy unions", "kappa of every union of copies", format!(">= {floor}"), worst, worst >= floor));

    let floor = 2 * n - 4;
    let mut worst = usize::MAX;
    for k in 1..=n {
        let view = SubgraphView::from_vertices(&h, (0..nv).filter(|&v| g.copy_of(v) != k));
        worst = worst.min(vertex_connectivity(&view).unwrap_or(0));
    }
    rows.push(row("copy deletion", "kappa after deleting any one copy", format!(">= {floor}"), worst, worst >= floor));
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_pass_at_four() {
        let rows = run_lemmas(4, Fault::None).unwrap();
        for r in &rows {
            assert!(r.passed, "{r:?}");
        }
        assert!(rows.iter().any(|r| r.check.contains("kappa(BS_3)") && r.observed == "3"));
        assert!(rows.iter().any(|r| r.lemma == "cross edges" && r.observed == "6..6"));
    }

    #[test]
    fn fault_is_reported() {
        let rows = run_lemmas(4, Fault::DropCrossEdge).unwrap();
        assert!(rows.iter().any(|r| !r.passed));
    }
}
