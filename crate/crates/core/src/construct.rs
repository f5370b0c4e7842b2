//! Structure construction in the wheel graph by the copy-based case analysis.
//!
//! Even degrees solve inside the bubble-sort star spanning subgraph. Odd
//! degrees `n = 2d + 1` split on how the three terminals fall into copies:
//! all in one copy, two sharing a copy, or three different copies. Every
//! step is parameterised by the actual copy ids and vertices. A step that
//! fails (empty candidate set, flow shortfall, failed verification) hands
//! over to the generic solver on the whole graph unless the caller is strict.
//!
//! The returned structure is relabelled so that its `(a, b)` bundle is the
//! short one; [`CaseTrace::relabel`] maps each role back to the input order.

use std::cell::Cell;
use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ConstructError;
use crate::graph::SubgraphView;
use crate::menger::{disjoint_set_paths, k_fan, max_internally_disjoint_paths, Path};
use crate::perm::{Family, Permutation};
use crate::topology::{CayleyGraph, CopyId};
use crate::tripod::{solve_tripod, verify_tripod, Budget, StructureTarget, TripodStructure, PAIRS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseId {
    #[serde(rename = "even")]
    Even,
    #[serde(rename = "odd-1.1")]
    OddCase1_1,
    #[serde(rename = "odd-1.2.1")]
    OddCase1_2_1,
    #[serde(rename = "odd-1.2.2")]
    OddCase1_2_2,
    #[serde(rename = "odd-2")]
    OddCase2,
    #[serde(rename = "odd-3.1")]
    OddCase3_1,
    #[serde(rename = "odd-3.2")]
    OddCase3_2,
    #[serde(rename = "odd-3.3")]
    OddCase3_3,
    #[serde(rename = "fallback-generic")]
    FallbackGeneric,
}

impl CaseId {
    pub const ALL: [CaseId; 9] = [
        CaseId::Even,
        CaseId::OddCase1_1,
        CaseId::OddCase1_2_1,
        CaseId::OddCase1_2_2,
        CaseId::OddCase2,
        CaseId::OddCase3_1,
        CaseId::OddCase3_2,
        CaseId::OddCase3_3,
        CaseId::FallbackGeneric,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseId::Even => "even",
            CaseId::OddCase1_1 => "odd-1.1",
            CaseId::OddCase1_2_1 => "odd-1.2.1",
            CaseId::OddCase1_2_2 => "odd-1.2.2",
            CaseId::OddCase2 => "odd-2",
            CaseId::OddCase3_1 => "odd-3.1",
            CaseId::OddCase3_2 => "odd-3.2",
            CaseId::OddCase3_3 => "odd-3.3",
            CaseId::FallbackGeneric => "fallback-generic",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseTrace {
    pub case_id: CaseId,
    /// Copies of the terminals in role order `a, b, c`.
    pub copy_assignment: [CopyId; 3],
    /// `relabel[i]` is the input position of the terminal playing role `i`.
    pub relabel: [usize; 3],
    /// Named vertex sets used by the construction.
    pub auxiliary: BTreeMap<String, Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fallback_reason: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstructOptions {
    /// Refuse the generic fallback.
    pub strict: bool,
    pub budget: Budget,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions {
            strict: false,
            budget: Budget::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constructed {
    pub structure: TripodStructure,
    pub trace: CaseTrace,
    /// Solver augmentation steps spent (base structures and fallback).
    pub steps: u64,
}

type StepResult = Result<(TripodStructure, Trace), String>;

/// Trace under construction, with roles expressed as vertices.
struct Trace {
    case_id: CaseId,
    auxiliary: BTreeMap<String, Vec<usize>>,
}

impl Trace {
    fn new(case_id: CaseId) -> Self {
        Trace {
            case_id,
            auxiliary: BTreeMap::new(),
        }
    }

    fn set(&mut self, name: &str, vertices: impl IntoIterator<Item = usize>) {
        self.auxiliary.insert(name.to_string(), vertices.into_iter().collect());
    }
}

/// Reusable builder over one wheel graph.
pub struct Constructor<'g> {
    g: &'g CayleyGraph,
    /// Bubble-sort star graph of the same degree, for even `n`.
    spanning: Option<CayleyGraph>,
    options: ConstructOptions,
}

fn step_err<E: fmt::Display>(what: &str) -> impl Fn(E) -> String + '_ {
    move |e| format!("{what}: {e}")
}

impl<'g> Constructor<'g> {
    pub fn new(g: &'g CayleyGraph, options: ConstructOptions) -> Result<Self, ConstructError> {
        if g.family() != Family::Wheel {
            return Err(crate::error::TopologyError::WrongFamily.into());
        }
        let spanning = if g.n() % 2 == 0 {
            Some(CayleyGraph::build(g.n(), Family::BubbleSortStar)?)
        } else {
            None
        };
        Ok(Constructor {
            g,
            spanning,
            options,
        })
    }

    pub fn graph(&self) -> &CayleyGraph {
        self.g
    }

    pub fn target(&self) -> StructureTarget {
        StructureTarget::for_degree(self.g.n())
    }

    fn d(&self) -> usize {
        self.g.n() / 2
    }

    fn solve(&self, steps: &Cell<u64>, view: &SubgraphView<'_>, omega: [usize; 3], target: StructureTarget) -> Result<TripodStructure, String> {
        let sol = solve_tripod(view, omega, target, self.options.budget).map_err(step_err("tripod solver"))?;
        steps.set(steps.get() + sol.steps);
        Ok(sol.structure)
    }

    /// Builds a verified structure meeting the target for the parity of `n`.
    pub fn build(&self, omega: [usize; 3]) -> Result<Constructed, ConstructError> {
        for &v in &omega {
            self.g.check_vertex(v)?;
        }
        if omega[0] == omega[1] || omega[0] == omega[2] || omega[1] == omega[2] {
            let dup = if omega[0] == omega[1] || omega[0] == omega[2] { omega[0] } else { omega[1] };
            return Err(crate::error::TopologyError::DuplicateVertex(dup).into());
        }
        let steps = Cell::new(0);
        let attempt = if self.g.n() % 2 == 0 {
            self.construct_even(&steps, omega)
        } else {
            let copies = omega.map(|v| self.g.copy_of(v));
            if copies[0] == copies[1] && copies[1] == copies[2] {
                self.construct_same_copy(&steps, omega)
            } else if copies[0] == copies[1] || copies[0] == copies[2] || copies[1] == copies[2] {
                self.construct_two_copies(omega)
            } else {
                self.construct_three_copies(omega)
            }
        };
        let target = self.target();
        let full = self.g.full_view();
        let attempt = attempt.and_then(|(s, t)| {
            let verdict = verify_tripod(&full, &s, target);
            if verdict.passed() && s.counts() == target.counts() {
                Ok((s, t))
            } else {
                Err(format!("{} produced an invalid structure: {}", t.case_id, verdict.violations.join("; ")))
            }
        });
        match attempt {
            Ok((s, t)) => Ok(self.finish(omega, s, t, None, steps.get())),
            Err(reason) => {
                if self.options.strict {
                    return Err(ConstructError::FallbackForbidden(reason));
                }
                let s = self
                    .solve(&steps, &full, omega, target)
                    .map_err(|e| ConstructError::ConstructionFailed(format!("{reason}; fallback: {e}")))?;
                let s = orient_short_first(&s, target);
                Ok(self.finish(omega, s, Trace::new(CaseId::FallbackGeneric), Some(reason), steps.get()))
            }
        }
    }

    fn finish(&self, omega: [usize; 3], s: TripodStructure, t: Trace, reason: Option<String>, steps: u64) -> Constructed {
        let relabel = s.omega.map(|v| omega.iter().position(|&w| w == v).expect("terminal from input"));
        Constructed {
            trace: CaseTrace {
                case_id: t.case_id,
                copy_assignment: s.omega.map(|v| self.g.copy_of(v)),
                relabel,
                auxiliary: t.auxiliary,
                fallback_reason: reason,
            },
            structure: s,
            steps,
        }
    }

    fn outs(&self, v: usize) -> [usize; 3] {
        self.g.outside_neighbors(v).expect("wheel family").as_array()
    }

    /// Even degree: the bubble-sort star graph is a spanning subgraph.
    fn construct_even(&self, steps: &Cell<u64>, omega: [usize; 3]) -> StepResult {
        let bs = self.spanning.as_ref().ok_or("odd degree has no even construction")?;
        let s = self.solve(steps, &bs.full_view(), omega, self.target())?;
        Ok((s, Trace::new(CaseId::Even)))
    }

    /// All three terminals in one copy.
    fn construct_same_copy(&self, steps: &Cell<u64>, omega: [usize; 3]) -> StepResult {
        let g = self.g;
        let d = self.d();
        let copy = g.copy_of(omega[0]);
        let cview = g.copy_union(&[copy]).map_err(step_err("copy view"))?;
        let base = self.solve(steps, &cview, omega, StructureTarget::uniform(d))?;
        let base = normalize(&cview, &base);
        let used: HashSet<usize> = base.all_paths().flat_map(|(_, _, p)| p.vertices().to_vec()).collect();

        // An inside neighbour of some terminal untouched by the base structure.
        for t in 0..3 {
            let spare = cview
                .neighbors(omega[t])
                .find(|w| !used.contains(w) && !omega.contains(w));
            if let Some(spare) = spare {
                let mut trace = Trace::new(CaseId::OddCase1_1);
                trace.set("spare", [spare]);
                let s = self.add_outside_pairs(&base, t, spare, copy, &mut trace)?;
                return Ok((s, trace));
            }
        }

        // Every inside neighbour is used: pick primes off the opposite bundles.
        let mut prime = [0usize; 3];
        let mut host = [0usize; 3];
        for t in 0..3 {
            let touching: HashSet<usize> = (0..3)
                .filter(|&k| PAIRS[k].0 == t || PAIRS[k].1 == t)
                .flat_map(|k| base.bundle(k).iter().flat_map(|p| p.vertices().to_vec()))
                .collect();
            let cand = cview
                .neighbors(omega[t])
                .find(|w| !touching.contains(w) && !omega.contains(w))
                .ok_or_else(|| format!("no prime neighbour for terminal {}", omega[t]))?;
            let opposite = 2 - t;
            let idx = base
                .bundle(opposite)
                .iter()
                .position(|p| p.contains(cand))
                .ok_or("prime neighbour lies on no path")?;
            prime[t] = cand;
            host[t] = idx;
        }
        let [a, b, c] = omega;
        let [ap, bp, cp] = prime;
        let p1 = &base.ab[host[2]];
        let q1 = &base.ac[host[1]];
        let r1 = &base.bc[host[0]];
        let seg = |p: &Path, x: usize, y: usize| p.segment(x, y).expect("vertices on path");
        // (segment, terminal end) discarded by each rotation.
        let rotations = [
            [(seg(r1, ap, c), 2), (seg(p1, cp, b), 1), (seg(q1, a, bp), 0)],
            [(seg(r1, b, ap), 1), (seg(p1, a, cp), 0), (seg(q1, bp, c), 2)],
        ];
        for (rot, discards) in rotations.iter().enumerate() {
            for (segment, t) in discards {
                if segment.len() < 2 {
                    continue;
                }
                let term = omega[*t];
                let spare = if segment.first() == term {
                    segment.vertices()[1]
                } else {
                    segment.vertices()[segment.vertices().len() - 2]
                };
                let mut rebuilt = base.clone();
                if rot == 0 {
                    rebuilt.ab[host[2]] = Path(vec![a, ap]).join(&seg(r1, ap, b));
                    rebuilt.ac[host[1]] = seg(p1, a, cp).join(&Path(vec![cp, c]));
                    rebuilt.bc[host[0]] = Path(vec![b, bp]).join(&seg(q1, bp, c));
                } else {
                    rebuilt.ab[host[2]] = seg(q1, a, bp).join(&Path(vec![bp, b]));
                    rebuilt.ac[host[1]] = Path(vec![a, ap]).join(&seg(r1, ap, c));
                    rebuilt.bc[host[0]] = seg(p1, b, cp).join(&Path(vec![cp, c]));
                }
                let mut trace = Trace::new(CaseId::OddCase1_2_1);
                trace.set("a'", [ap]);
                trace.set("b'", [bp]);
                trace.set("c'", [cp]);
                trace.set("g", [spare]);
                let s = self.add_outside_pairs(&rebuilt, *t, spare, copy, &mut trace)?;
                return Ok((s, trace));
            }
        }
        self.same_copy_short_triangle(&base, prime, host)
    }

    /// Four disjoint paths outside the copy from the hub's three outside
    /// neighbours and `spare⁺` to the `+`/`−` neighbours of the other two
    /// terminals. The hub becomes role `c`.
    fn add_outside_pairs(&self, base: &TripodStructure, hub: usize, spare: usize, copy: CopyId, trace: &mut Trace) -> Result<TripodStructure, String> {
        let g = self.g;
        let omega = base.omega;
        let rest = g.delete_copies(&[copy]).map_err(step_err("copy deletion"))?;
        let hub_v = omega[hub];
        let spare_plus = self.outs(spare)[0];
        let mut xs = self.outs(hub_v).to_vec();
        xs.push(spare_plus);
        let others: Vec<usize> = (0..3).filter(|&i| i != hub).collect();
        let mut ys = Vec::new();
        for &o in &others {
            let out = self.outs(omega[o]);
            ys.extend([out[0], out[1]]);
        }
        trace.set("X", xs.clone());
        trace.set("Y", ys.clone());
        let fam = disjoint_set_paths(&rest, &xs, &ys, 4).map_err(step_err("outside (X,Y)-paths"))?;
        let mut s = base.clone();
        for p in fam.paths {
            let o = *others
                .iter()
                .find(|&&o| self.outs(omega[o])[..2].contains(&p.last()))
                .expect("path ends in Y");
            let mut v = vec![hub_v];
            if p.first() == spare_plus {
                v.push(spare);
            }
            v.extend_from_slice(p.vertices());
            v.push(omega[o]);
            push_pair(&mut s, hub, o, Path(v));
        }
        let order = [others[0], others[1], hub];
        Ok(s.relabeled(order))
    }

    /// All six prime segments have length one: the terminals are
    /// `x`, `x·(1 j j+1)` and `x·(1 j+1 j)` and the primes are common
    /// neighbours of all three.
    fn same_copy_short_triangle(&self, base: &TripodStructure, prime: [usize; 3], host: [usize; 3]) -> StepResult {
        let g = self.g;
        let n = g.n();
        let omega = base.omega;
        let ((xi, yi, zi), j) = [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]
            .into_iter()
            .find_map(|(xi, yi, zi)| {
                let x = g.perm(omega[xi]);
                let q = x.inverse().compose(g.perm(omega[yi])).ok()?;
                let j = three_cycle_j(&q)?;
                let back = x.inverse().compose(g.perm(omega[zi])).ok()?;
                (back == q.inverse()).then_some(((xi, yi, zi), j))
            })
            .ok_or("short triangle without the three-cycle configuration")?;
        let (x, y, z) = (omega[xi], omega[yi], omega[zi]);
        let [xp, xm, xs] = self.outs(x);
        let [yp, ym, ys] = self.outs(y);
        let [zp, zm, zs] = self.outs(z);
        let all_outs: Vec<usize> = [x, y, z].iter().flat_map(|&t| self.outs(t)).collect();
        let mut trace = Trace::new(CaseId::OddCase1_2_2);
        trace.set("a'", [prime[0]]);
        trace.set("b'", [prime[1]]);
        trace.set("c'", [prime[2]]);
        trace.set("j", [j]);
        // (terminal index, terminal index, path between their outside neighbours)
        let mut extra: Vec<(usize, usize, Path)> = Vec::new();
        let route_in_copy = |from: usize, to: usize| -> Result<Path, String> {
            let cp = g.copy_of(from);
            if g.copy_of(to) != cp {
                return Err(format!("{from} and {to} lie in different copies"));
            }
            let avoid: Vec<usize> = all_outs.iter().copied().filter(|&v| v != from && v != to).collect();
            let view = g.copy_union(&[cp]).map_err(step_err("copy view"))?.without(&avoid);
            view.shortest_path(from, to)
                .map(Path)
                .ok_or_else(|| format!("no path from {from} to {to} in copy {cp}"))
        };
        if j == 2 {
            extra.push((xi, zi, route_in_copy(xp, zs)?));
            extra.push((xi, yi, route_in_copy(xs, yp)?));
            extra.push((zi, yi, route_in_copy(zp, ys)?));
            extra.push((xi, yi, route_in_copy(xm, ym)?));
        } else if j == n - 2 {
            extra.push((xi, yi, route_in_copy(xp, ym)?));
            extra.push((yi, zi, route_in_copy(yp, zm)?));
            extra.push((xi, zi, route_in_copy(xm, zp)?));
            extra.push((xi, yi, route_in_copy(xs, ys)?));
        } else {
            // Minus neighbours share one copy, star neighbours another.
            let c1 = g.copy_of(xm);
            let c2 = g.copy_of(xs);
            let (gv, gp) = g
                .cross_edges(c1, c2)
                .map_err(step_err("cross edges"))?
                .into_iter()
                .find(|(u, w)| ![xm, ym, zm].contains(u) && ![xs, ys, zs].contains(w))
                .ok_or("no free edge between the minus and star copies")?;
            trace.set("g", [gv, gp]);
            let v1 = g.copy_union(&[c1]).map_err(step_err("copy view"))?;
            let f1 = disjoint_set_paths(&v1, &[xm, ym], &[zm, gv], 2).map_err(step_err("minus-copy paths"))?;
            let owner = |o: usize| [(xm, xi), (ym, yi), (zm, zi), (xs, xi), (ys, yi), (zs, zi)].iter().find(|(v, _)| *v == o).map(|&(_, t)| t);
            let mut joined_to_g = None;
            for p in f1.paths {
                let t = owner(p.first()).expect("minus neighbour");
                if p.last() == gv {
                    joined_to_g = Some((t, p));
                } else {
                    extra.push((t, zi, p));
                }
            }
            let (s_idx, to_g) = joined_to_g.ok_or("no path reached g")?;
            let s_star = self.outs(omega[s_idx])[2];
            let y2: Vec<usize> = [xs, ys, zs].into_iter().filter(|&v| v != s_star).collect();
            let v2 = g.copy_union(&[c2]).map_err(step_err("copy view"))?;
            let f2 = disjoint_set_paths(&v2, &[s_star, gp], &y2, 2).map_err(step_err("star-copy paths"))?;
            for p in f2.paths {
                let end = owner(p.last()).expect("star neighbour");
                if p.first() == gp {
                    extra.push((s_idx, end, to_g.join(&Path(vec![gv, gp])).join(&p)));
                } else {
                    extra.push((s_idx, end, p));
                }
            }
            let plus_copies = [g.copy_of(xp), g.copy_of(yp), g.copy_of(zp)];
            let v3 = g
                .copy_union(&plus_copies)
                .map_err(step_err("copy view"))?
                .without(&[yp]);
            let p3 = v3.shortest_path(xp, zp).ok_or("no path between the plus neighbours")?;
            extra.push((xi, zi, Path(p3)));
        }

        // Base without the three length-2 prime paths, then the extras.
        let mut s = base.clone();
        let mut drop: Vec<(usize, usize)> = vec![(0, host[2]), (1, host[1]), (2, host[0])];
        drop.sort_by(|l, r| r.1.cmp(&l.1));
        for (k, idx) in drop {
            s.bundle_mut(k).remove(idx);
        }
        let mut e = [0usize; 3];
        for (t, u, p) in extra {
            if t == u {
                return Err("outside path joins a terminal to itself".into());
            }
            let mut v = vec![omega[t]];
            v.extend_from_slice(p.vertices());
            v.push(omega[u]);
            e[bundle_index(t, u)] += 1;
            push_pair(&mut s, t, u, Path(v));
        }
        // The primes are common neighbours of all three terminals; hand them
        // out so the totals become a permutation of the target.
        let short = (0..3).min_by_key(|&k| (e[k], k)).unwrap();
        let want = |k: usize| if k == short { 1usize } else { 3 };
        let mut flex: Vec<usize> = prime.to_vec();
        flex.sort_unstable();
        let mut fi = flex.into_iter();
        for k in 0..3 {
            let need = want(k).checked_sub(e[k]).ok_or("too many outside paths of one type")?;
            for _ in 0..need {
                let w = fi.next().ok_or("not enough prime vertices")?;
                let (i, jj) = PAIRS[k];
                push_pair(&mut s, i, jj, Path(vec![omega[i], w, omega[jj]]));
            }
        }
        let (i, jj) = PAIRS[short];
        let order = [i, jj, 3 - i - jj];
        Ok((s.relabeled(order), trace))
    }

    /// Exactly two terminals share a copy.
    fn construct_two_copies(&self, omega: [usize; 3]) -> StepResult {
        let g = self.g;
        let d = self.d();
        let copies = omega.map(|v| g.copy_of(v));
        let (ai, ci, bi) = if copies[0] == copies[1] {
            (0, 1, 2)
        } else if copies[0] == copies[2] {
            (0, 2, 1)
        } else {
            (1, 2, 0)
        };
        let (a, b, c) = (omega[ai], omega[bi], omega[ci]);
        let copy = copies[ai];
        let cview = g.copy_union(&[copy]).map_err(step_err("copy view"))?;
        let fam = max_internally_disjoint_paths(&cview, a, c).map_err(step_err("copy (a,c)-paths"))?;
        if fam.len() != 4 * d - 3 {
            return Err(format!("copy has {} (a,c)-paths, expected {}", fam.len(), 4 * d - 3));
        }
        let long: Vec<usize> = (0..fam.len()).filter(|&i| fam.paths[i].len() >= 3).collect();
        if long.len() < 4 * d - 6 {
            return Err(format!("only {} long (a,c)-paths", long.len()));
        }
        let chosen: Vec<usize> = long[..2 * d - 3].to_vec();
        let ma: Vec<usize> = chosen.iter().map(|&i| fam.paths[i].vertices()[1]).collect();
        let mc: Vec<usize> = chosen
            .iter()
            .map(|&i| {
                let v = fam.paths[i].vertices();
                v[v.len() - 2]
            })
            .collect();
        let [ap, am, a_star] = self.outs(a);
        let _ = (ap, am);
        let c_outs = self.outs(c);
        // Target -> (terminal reached, vertex inside the copy before it, if any).
        let mut route: Vec<(usize, usize, Option<usize>)> = Vec::new();
        for &u in &ma {
            route.push((self.outs(u)[2], a, Some(u)));
        }
        route.push((a_star, a, None));
        for &v in &mc {
            route.push((self.outs(v)[2], c, Some(v)));
        }
        for &o in &c_outs {
            route.push((o, c, None));
        }
        let n_set: Vec<usize> = route.iter().map(|r| r.0).collect();
        let mut trace = Trace::new(CaseId::OddCase2);
        trace.set("M_a", ma.clone());
        trace.set("M_c", mc.clone());
        trace.set("N", n_set.clone());
        let rest = g.delete_copies(&[copy]).map_err(step_err("copy deletion"))?;
        let targets: Vec<usize> = n_set.iter().copied().filter(|&v| v != b).collect();
        let fan = k_fan(&rest, b, &targets, targets.len()).map_err(step_err("fan from b"))?;
        let mut fan_paths = fan.paths;
        if targets.len() < n_set.len() {
            fan_paths.push(Path(vec![b]));
        }
        let mut s = TripodStructure::empty([a, b, c]);
        for p in fan_paths {
            let &(_, term, inside) = route.iter().find(|r| r.0 == p.last()).expect("fan target in N");
            let mut v = p.vertices().to_vec();
            if let Some(w) = inside {
                v.push(w);
            }
            v.push(term);
            if term == a {
                s.ab.push(Path(v).reversed());
            } else {
                s.bc.push(Path(v));
            }
        }
        for (i, p) in fam.paths.iter().enumerate() {
            if !chosen.contains(&i) {
                s.ac.push(p.clone());
            }
        }
        Ok((s, trace))
    }

    /// Terminals in three different copies.
    fn construct_three_copies(&self, omega: [usize; 3]) -> StepResult {
        let g = self.g;
        let copies = omega.map(|v| g.copy_of(v));
        let hat = g.delete_copies(&copies).map_err(step_err("copy deletion"))?;
        let outs = omega.map(|v| self.outs(v));
        let h: [usize; 3] = std::array::from_fn(|t| outs[t].iter().filter(|&&o| hat.contains(o)).count());
        let ones: Vec<usize> = (0..3).filter(|&t| h[t] == 1).collect();
        let threes: Vec<usize> = (0..3).filter(|&t| h[t] == 3).collect();
        let (case_id, c_first) = if let Some(ci) = (0..3).find(|&t| h[t] == 2) {
            (CaseId::OddCase3_1, ci)
        } else if ones.len() >= 2 {
            (CaseId::OddCase3_2, ones[1])
        } else if threes.len() >= 2 {
            (CaseId::OddCase3_3, threes[1])
        } else {
            return Err(format!("no subcase matches outside counts {h:?}"));
        };
        let mut last = String::new();
        // Each copy holds at most one common neighbour of the other two
        // terminals; `modes[u]` says how the one in copy `u` is used.
        for code in 0..27 {
            let modes = [code % 3, code / 3 % 3, code / 9].map(|m| match m {
                0 => Shared::Bridge,
                1 => Shared::First,
                _ => Shared::Second,
            });
            for shift in 0..3 {
                let ci = (c_first + shift) % 3;
                for close in [Close::Either, Close::OnlyA, Close::OnlyB] {
                    match self.three_copies_with(case_id, omega, ci, modes, close, &hat) {
                        Ok(found) => return Ok(found),
                        Err(e) => last = e,
                    }
                }
            }
        }
        Err(last)
    }

    /// Assembly with terminal `omega[ci]` as `c`, the one whose whole
    /// neighbourhood is used. Each outside neighbour of a terminal is either
    /// another terminal (a direct edge), a common neighbour of two terminals
    /// in the third copy (a path of length two, or a fan target for just one
    /// of them), a vertex in another
    /// terminal's copy (reached by that terminal's fan), or a vertex of the
    /// residual graph (closed by disjoint paths there). Star-matched pairs
    /// between copies make up the rest.
    fn three_copies_with(&self, case_id: CaseId, omega: [usize; 3], ci: usize, modes: [Shared; 3], close: Close, hat: &SubgraphView<'_>) -> StepResult {
        let g = self.g;
        let d = self.d();
        let mut others = (0..3).filter(|&i| i != ci);
        let roles = [others.next().unwrap(), others.next().unwrap(), ci];
        let t = roles.map(|i| omega[i]);
        let cp = t.map(|v| g.copy_of(v));
        let outs = t.map(|v| self.outs(v));
        let role_of_copy = |v: usize| (0..3).find(|&r| cp[r] == g.copy_of(v));
        let mut s = TripodStructure::empty(t);
        let mut blocked: [Vec<usize>; 3] = Default::default();
        // (target in copy r, terminal role it leads to)
        let mut links: [Vec<(usize, usize)>; 3] = Default::default();
        let mut hats: [Vec<usize>; 3] = Default::default();
        for r in 0..3 {
            for &o in &outs[r] {
                if hat.contains(o) {
                    hats[r].push(o);
                    continue;
                }
                let u = role_of_copy(o).ok_or("outside neighbour in no relevant copy")?;
                let w = 3 - r - u;
                if o == t[u] {
                    if r < u {
                        push_pair(&mut s, r, u, Path(vec![t[r], o]));
                    }
                } else if outs[w].contains(&o) {
                    let first = r < w;
                    match modes[roles[u]] {
                        Shared::First if first => links[u].push((o, r)),
                        Shared::Second if !first => links[u].push((o, r)),
                        Shared::Bridge if first => {
                            push_pair(&mut s, r, w, Path(vec![t[r], o, t[w]]));
                            blocked[u].push(o);
                        }
                        _ => {}
                    }
                } else {
                    links[u].push((o, r));
                }
            }
        }
        let mut trace = Trace::new(case_id);
        if !hats[2].is_empty() {
            let mut ys: Vec<usize> = match close {
                Close::Either => hats[0].iter().chain(&hats[1]).copied().collect(),
                Close::OnlyA => hats[0].clone(),
                Close::OnlyB => hats[1].clone(),
            };
            ys.sort_unstable();
            ys.dedup();
            trace.set("closing X", hats[2].clone());
            trace.set("closing Y", ys.clone());
            let fam = disjoint_set_paths(hat, &hats[2], &ys, hats[2].len()).map_err(step_err("closing paths"))?;
            for p in fam.paths {
                let r = if close != Close::OnlyB && hats[0].contains(&p.last()) { 0 } else { 1 };
                let mut v = vec![t[2]];
                v.extend_from_slice(p.vertices());
                v.push(t[r]);
                push_pair(&mut s, r, 2, Path(v));
            }
        }
        let target = self.target();
        let mut have = s.counts();
        for r in 0..3 {
            for &(_, to) in &links[r] {
                have[bundle_index(r, to)] += 1;
            }
        }
        let want = target.counts();
        let x: [usize; 3] = std::array::from_fn(|k| want[k].saturating_sub(have[k]));
        let inner = 4 * d - 3;
        for r in 0..3 {
            let used = links[r].len() + (0..3).filter(|&k| PAIRS[k].0 == r || PAIRS[k].1 == r).map(|k| x[k]).sum::<usize>();
            if used > inner {
                return Err(format!("copy of {} needs {used} fan paths, has {inner}", t[r]));
            }
        }
        let mut reserved: HashSet<usize> = t.into_iter().collect();
        for o in &outs {
            reserved.extend(o.iter().copied());
        }
        let star = |v: usize| self.outs(v)[2];
        let mut xs: [Vec<usize>; 3] = Default::default();
        for (k, &(p, q)) in PAIRS.iter().enumerate() {
            let w: Vec<usize> = g
                .copy_vertices(cp[p])
                .into_iter()
                .filter(|&v| !reserved.contains(&v))
                .filter(|&v| {
                    let sv = star(v);
                    g.copy_of(sv) == cp[q] && !reserved.contains(&sv)
                })
                .collect();
            if w.len() < x[k] {
                return Err(format!("W_{} has {} vertices, need {}", k + 1, w.len(), x[k]));
            }
            xs[k] = w[..x[k]].to_vec();
            trace.set(&format!("W_{}", k + 1), w);
            trace.set(&format!("X_{}", k + 1), xs[k].clone());
        }
        let mut fans: [Vec<Path>; 3] = Default::default();
        for r in 0..3 {
            let mut targets: Vec<usize> = links[r].iter().map(|l| l.0).collect();
            for (k, &(p, q)) in PAIRS.iter().enumerate() {
                if p == r {
                    targets.extend(&xs[k]);
                } else if q == r {
                    targets.extend(xs[k].iter().map(|&v| star(v)));
                }
            }
            let view = g.copy_union(&[cp[r]]).map_err(step_err("copy view"))?.without(&blocked[r]);
            fans[r] = k_fan(&view, t[r], &targets, targets.len()).map_err(step_err("copy fan"))?.paths;
        }
        let ending = |r: usize, v: usize| fans[r].iter().find(|p| p.last() == v).cloned().expect("fan reaches every target");
        for r in 0..3 {
            for &(o, to) in &links[r] {
                push_pair(&mut s, r, to, ending(r, o).link(&Path(vec![t[to]])));
            }
        }
        for (k, &(p, q)) in PAIRS.iter().enumerate() {
            for &v in &xs[k] {
                push_pair(&mut s, p, q, ending(p, v).link(&ending(q, star(v)).reversed()));
            }
        }
        Ok((s.truncated(target), trace))
    }
}

/// Use of a vertex adjacent to two terminals inside the third one's copy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shared {
    Bridge,
    First,
    Second,
}

/// Which terminals the residual-graph paths from `c` may end at.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Close {
    Either,
    OnlyA,
    OnlyB,
}

/// Builds and verifies the structure for `omega` in the wheel graph `g`.
pub fn build_structure(g: &CayleyGraph, omega: [usize; 3], options: ConstructOptions) -> Result<Constructed, ConstructError> {
    Constructor::new(g, options)?.build(omega)
}

fn bundle_index(i: usize, j: usize) -> usize {
    PAIRS
        .iter()
        .position(|&(p, q)| (p, q) == (i, j) || (q, p) == (i, j))
        .expect("distinct terminals")
}

/// Appends a path running from terminal `i` to terminal `j`.
fn push_pair(s: &mut TripodStructure, i: usize, j: usize, p: Path) {
    let k = bundle_index(i, j);
    let p = if p.first() == s.omega[PAIRS[k].0] { p } else { p.reversed() };
    s.bundle_mut(k).push(p);
}

/// Relabels so that the bundle with the target's short count comes first.
fn orient_short_first(s: &TripodStructure, target: StructureTarget) -> TripodStructure {
    let counts = s.counts();
    let want = target.counts();
    for order in [[0, 1, 2], [0, 2, 1], [1, 2, 0]] {
        let r = s.relabeled(order);
        if r.counts() == want {
            return r;
        }
    }
    let _ = counts;
    s.clone()
}

/// `j` if `q` is the cycle `1 → j → j+1 → 1` with `2 ≤ j ≤ n − 2`.
fn three_cycle_j(q: &Permutation) -> Option<usize> {
    let n = q.degree();
    let j = q.image(1);
    if j < 2 || j > n - 2 || q.image(j) != j + 1 || q.image(j + 1) != 1 {
        return None;
    }
    (1..=n).filter(|&i| i != 1 && i != j && i != j + 1).all(|i| q.image(i) == i).then_some(j)
}

/// Shortens every path so its only internal neighbours of either end are
/// adjacent to it on the path, and makes sure every adjacent terminal pair
/// uses its direct edge in its own bundle.
fn normalize(view: &SubgraphView<'_>, s: &TripodStructure) -> TripodStructure {
    let mut out = s.clone();
    for k in 0..3 {
        let (p, q) = out.endpoints(k);
        let bundle = out.bundle_mut(k);
        for path in bundle.iter_mut() {
            let v = path.vertices();
            if v.len() <= 2 {
                continue;
            }
            let last_internal = v.len() - 2;
            let i = (1..=last_internal).rev().find(|&i| view.has_edge(p, v[i])).unwrap_or(1);
            let mut w: Vec<usize> = vec![p];
            w.extend_from_slice(&v[i..]);
            let last_internal = w.len() - 2;
            let j = (1..=last_internal).find(|&j| view.has_edge(q, w[j])).unwrap_or(last_internal);
            let mut z: Vec<usize> = w[..=j].to_vec();
            z.push(q);
            *path = Path(z);
        }
        if view.has_edge(p, q) && !bundle.iter().any(|x| x.len() == 1) && !bundle.is_empty() {
            let longest = (0..bundle.len()).max_by_key(|&i| (bundle[i].len(), i)).unwrap();
            bundle[longest] = Path(vec![p, q]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tripod::verify_tripod;

    fn perm(text: &str) -> Permutation {
        text.parse().unwrap()
    }

    #[test]
    fn three_cycle_detection() {
        assert_eq!(three_cycle_j(&perm("[2,3,1,4,5]")), Some(2));
        assert_eq!(three_cycle_j(&perm("[3,1,2,4,5]")), None);
        assert_eq!(three_cycle_j(&perm("[3,2,4,1,5]")), Some(3));
        assert_eq!(three_cycle_j(&perm("[1,2,3,4,5]")), None);
    }

    #[test]
    fn even_degree_uses_spanning_subgraph() {
        let g = CayleyGraph::build(4, Family::Wheel).unwrap();
        let out = build_structure(&g, [0, 5, 17], ConstructOptions::default()).unwrap();
        assert_eq!(out.trace.case_id, CaseId::Even);
        assert_eq!(out.structure.counts(), [2, 2, 2]);
    }

    #[test]
    fn odd_cases_verify() {
        let g = CayleyGraph::build(5, Family::Wheel).unwrap();
        let strict = ConstructOptions {
            strict: true,
            ..Default::default()
        };
        let e = g.vertex(&perm("[1,2,3,4,5]")).unwrap();
        let b = g.vertex(&perm("[2,3,1,4,5]")).unwrap();
        let c = g.vertex(&perm("[3,1,2,4,5]")).unwrap();
        let out = build_structure(&g, [e, b, c], strict).unwrap();
        assert_eq!(out.trace.case_id, CaseId::OddCase1_2_2);
        assert_eq!(out.structure.counts(), [2, 4, 4]);
        assert!(verify_tripod(&g.full_view(), &out.structure, StructureTarget::for_degree(5)).passed());
    }

    fn rotation_triple(g: &CayleyGraph, j: usize) -> [usize; 3] {
        let n = g.n();
        let mut img: Vec<usize> = (1..=n).collect();
        img[0] = j;
        img[j - 1] = j + 1;
        img[j] = 1;
        let q = Permutation::from_images(&img).unwrap();
        let e = Permutation::identity(n).unwrap();
        [g.vertex(&e).unwrap(), g.vertex(&q).unwrap(), g.vertex(&q.inverse()).unwrap()]
    }

    #[test]
    fn rotation_regimes_at_seven() {
        let g = CayleyGraph::build(7, Family::Wheel).unwrap();
        let strict = ConstructOptions {
            strict: true,
            ..Default::default()
        };
        let target = StructureTarget::for_degree(7);
        for j in 2..=5 {
            let omega = rotation_triple(&g, j);
            let out = build_structure(&g, omega, strict).unwrap();
            assert_eq!(out.trace.case_id, CaseId::OddCase1_2_2, "j = {j}");
            assert_eq!(out.structure.counts(), [4, 6, 6]);
            assert!(verify_tripod(&g.full_view(), &out.structure, target).passed());
        }
    }

    #[test]
    fn rejects_duplicates() {
        let g = CayleyGraph::build(5, Family::Wheel).unwrap();
        assert!(build_structure(&g, [3, 3, 9], ConstructOptions::default()).is_err());
    }
}
