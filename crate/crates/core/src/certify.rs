//! Self-contained JSON certificates and an independent checker.
//!
//! A certificate stores `n`, the family, the terminals as permutations and
//! every path as a sequence of vertex ranks. [`verify_certificate`] rebuilds
//! adjacency from `(n, family)` and re-checks each claim without touching
//! the code that produced the paths.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::construct::{CaseTrace, Constructed};
use crate::error::CertError;
use crate::pairing::{pairing_capacity, OmegaPathSet, Pi3Report, Verdict};
use crate::perm::{Family, Permutation};
use crate::topology::CayleyGraph;
use crate::tripod::StructureTarget;
use crate::verdict::{CheckResult, VerdictReport};

pub const SCHEMA_VERSION: u32 = 1;
pub const RANKING: &str = "lehmer-lex";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bundles {
    pub ab: Vec<Vec<usize>>,
    pub ac: Vec<Vec<usize>>,
    pub bc: Vec<Vec<usize>>,
}

impl Bundles {
    fn get(&self, k: usize) -> &[Vec<usize>] {
        match k {
            0 => &self.ab,
            1 => &self.ac,
            _ => &self.bc,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverMetadata {
    pub seed: u64,
    /// Augmentation steps spent by the flow solver.
    pub steps: u64,
    /// Route taken, outermost first.
    pub strategy: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub schema_version: u32,
    pub ranking: String,
    pub n: usize,
    pub family: Family,
    /// Terminals in role order `a, b, c`, in one-line notation.
    pub omega: [String; 3],
    pub case_trace: Option<CaseTrace>,
    pub bundles: Bundles,
    pub omega_paths: Vec<Vec<usize>>,
    pub pi3_report: Option<Pi3Report>,
    pub solver_metadata: SolverMetadata,
    pub checks: Vec<CheckResult>,
}

impl Certificate {
    /// Certificate for a constructed structure and its pairing. The stored
    /// checks are the independent verifier's own verdict.
    pub fn for_structure(g: &CayleyGraph, built: &Constructed, paths: &OmegaPathSet, seed: u64) -> Certificate {
        let s = &built.structure;
        let ranks = |b: &[crate::menger::Path]| b.iter().map(|p| p.vertices().to_vec()).collect();
        let mut strategy = vec![built.trace.case_id.name().to_string()];
        if let Some(reason) = &built.trace.fallback_reason {
            strategy.push(format!("fallback: {reason}"));
        }
        let mut cert = Certificate {
            schema_version: SCHEMA_VERSION,
            ranking: RANKING.to_string(),
            n: g.n(),
            family: g.family(),
            omega: s.omega.map(|v| g.perm(v).to_string()),
            case_trace: Some(built.trace.clone()),
            bundles: Bundles {
                ab: ranks(&s.ab),
                ac: ranks(&s.ac),
                bc: ranks(&s.bc),
            },
            omega_paths: paths.paths.iter().map(|p| p.vertices().to_vec()).collect(),
            pi3_report: None,
            solver_metadata: SolverMetadata {
                seed,
                steps: built.steps,
                strategy,
            },
            checks: Vec::new(),
        };
        cert.checks = verify_certificate(&cert).checks;
        cert
    }

    pub fn with_report(mut self, report: Pi3Report) -> Certificate {
        self.pi3_report = Some(report);
        self.checks = verify_certificate(&self).checks;
        self
    }
}

/// Pretty JSON with a trailing newline; field order is fixed by the types.
pub fn emit(cert: &Certificate) -> String {
    let mut s = serde_json::to_string_pretty(cert).expect("certificate serialises");
    s.push('\n');
    s
}

pub fn load(doc: &str) -> Result<Certificate, CertError> {
    let value: Value = serde_json::from_str(doc).map_err(|e| CertError::Schema(e.to_string()))?;
    let version = value
        .get("schema_version")
        .ok_or_else(|| CertError::Schema("missing field `schema_version`".into()))?
        .as_u64()
        .ok_or_else(|| CertError::Schema("`schema_version` is not an integer".into()))?;
    if version != u64::from(SCHEMA_VERSION) {
        return Err(CertError::VersionMismatch {
            found: version.try_into().unwrap_or(u32::MAX),
            expected: SCHEMA_VERSION,
        });
    }
    serde_json::from_value(value).map_err(|e| CertError::Schema(e.to_string()))
}

/// Loads and verifies; schema problems are errors, failed claims are not.
pub fn verify_document(doc: &str) -> Result<VerdictReport, CertError> {
    Ok(verify_certificate(&load(doc)?))
}

/// Re-checks every claim of `cert` from raw adjacency.
pub fn verify_certificate(cert: &Certificate) -> VerdictReport {
    let mut report = VerdictReport::new();
    let mut header = Vec::new();
    if cert.schema_version != SCHEMA_VERSION {
        header.push(format!("schema version {} is not {SCHEMA_VERSION}", cert.schema_version));
    }
    if cert.ranking != RANKING {
        header.push(format!("unknown ranking scheme {:?}", cert.ranking));
    }
    if cert.family != Family::Wheel {
        header.push(format!("structures are certified in the wheel family, not {}", cert.family));
    }
    let g = match CayleyGraph::build(cert.n, cert.family) {
        Ok(g) => Some(g),
        Err(e) => {
            header.push(format!("cannot build the graph: {e}"));
            None
        }
    };
    report.record("header", header);
    let Some(g) = g else {
        return report;
    };

    let mut terms = Vec::new();
    let mut bad_terms = Vec::new();
    for (i, text) in cert.omega.iter().enumerate() {
        match text.parse::<Permutation>().map_err(|e| e.to_string()).and_then(|p| g.vertex(&p).map_err(|e| e.to_string())) {
            Ok(v) => terms.push(v),
            Err(e) => bad_terms.push(format!("terminal {i} ({text}): {e}")),
        }
    }
    if terms.len() == 3 && (terms[0] == terms[1] || terms[0] == terms[2] || terms[1] == terms[2]) {
        bad_terms.push("terminals are not distinct".into());
    }
    report.record("terminals", bad_terms.clone());
    if !bad_terms.is_empty() {
        return report;
    }
    let omega = [terms[0], terms[1], terms[2]];
    let nv = g.vertex_count();
    let in_range = |p: &[usize]| p.iter().all(|&v| v < nv);

    // Pair paths.
    let pairs = [(0usize, 1usize, "ab"), (0, 2, "ac"), (1, 2, "bc")];
    let mut shape = Vec::new();
    let mut vertex_owner: HashMap<usize, String> = HashMap::new();
    let mut edge_owner: HashMap<(usize, usize), String> = HashMap::new();
    let mut disjoint = Vec::new();
    for (k, &(i, j, name)) in pairs.iter().enumerate() {
        for (idx, p) in cert.bundles.get(k).iter().enumerate() {
            let label = format!("{name}[{idx}]");
            if p.len() < 2 || !in_range(p) {
                shape.push(format!("{label} is too short or has an unknown vertex"));
                continue;
            }
            if p[0] != omega[i] || p[p.len() - 1] != omega[j] {
                shape.push(format!("{label} runs {} to {}, expected {} to {}", p[0], p[p.len() - 1], omega[i], omega[j]));
            }
            path_shape(&g, p, &label, &mut shape);
            for &v in &p[1..p.len() - 1] {
                if omega.contains(&v) {
                    shape.push(format!("{label} passes through terminal {v}"));
                } else if let Some(other) = vertex_owner.insert(v, label.clone()) {
                    disjoint.push(format!("vertex {v} is internal to {other} and {label}"));
                }
            }
            for w in p.windows(2) {
                let e = (w[0].min(w[1]), w[0].max(w[1]));
                if let Some(other) = edge_owner.insert(e, label.clone()) {
                    disjoint.push(format!("edge ({}, {}) is used by {other} and {label}", e.0, e.1));
                }
            }
        }
    }
    report.record("bundle paths", shape);
    report.record("bundles internally disjoint", disjoint);
    let counts = [cert.bundles.ab.len(), cert.bundles.ac.len(), cert.bundles.bc.len()];
    let want = StructureTarget::for_degree(cert.n).counts();
    let count_check = if counts == want {
        Vec::new()
    } else {
        vec![format!("bundle counts {counts:?}, expected {want:?} at n = {}", cert.n)]
    };
    report.record("bundle counts", count_check);

    // Omega paths.
    let mut shape = Vec::new();
    let mut owner: HashMap<usize, usize> = HashMap::new();
    let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
    let mut shared = Vec::new();
    for (idx, p) in cert.omega_paths.iter().enumerate() {
        let label = format!("omega path {idx}");
        if !in_range(p) {
            shape.push(format!("{label} has an unknown vertex"));
            continue;
        }
        path_shape(&g, p, &label, &mut shape);
        for t in omega {
            if !p.contains(&t) {
                shape.push(format!("{label} misses terminal {t}"));
            }
        }
        let mut mine = HashSet::new();
        for &v in p {
            if !omega.contains(&v) && mine.insert(v) {
                if let Some(j) = owner.insert(v, idx) {
                    shared.push(format!("omega paths {j} and {idx} share vertex {v}"));
                }
            }
        }
        for w in p.windows(2) {
            let e = (w[0].min(w[1]), w[0].max(w[1]));
            if let Some(j) = edges.insert(e, idx) {
                if j != idx {
                    shared.push(format!("omega paths {j} and {idx} share edge ({}, {})", e.0, e.1));
                }
            }
        }
    }
    report.record("omega paths", shape);
    report.record("omega paths internally disjoint", shared);
    let cap = pairing_capacity(counts[0], counts[1], counts[2]);
    let pairing = if cert.omega_paths.len() == cap {
        Vec::new()
    } else {
        vec![format!("{} omega paths, pairing capacity of {counts:?} is {cap}", cert.omega_paths.len())]
    };
    report.record("pairing count", pairing);

    if let Some(trace) = &cert.case_trace {
        let copies = omega.map(|v| g.copy_of(v));
        let mut bad = Vec::new();
        if trace.copy_assignment != copies {
            bad.push(format!("trace copies {:?}, terminals lie in {copies:?}", trace.copy_assignment));
        }
        let mut rel = trace.relabel.to_vec();
        rel.sort_unstable();
        if rel != [0, 1, 2] {
            bad.push(format!("relabel {:?} is not a permutation", trace.relabel));
        }
        report.record("case trace", bad);
    }

    if let Some(r) = &cert.pi3_report {
        report.record("pi3 report", check_report(&g, r));
    }
    let claimed: Vec<String> = cert
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("certificate records failed check {:?}", c.name))
        .collect();
    report.record("recorded checks", claimed);
    report
}

fn path_shape(g: &CayleyGraph, p: &[usize], label: &str, out: &mut Vec<String>) {
    let mut seen = HashSet::new();
    for &v in p {
        if !seen.insert(v) {
            out.push(format!("{label} repeats vertex {v}"));
        }
    }
    for w in p.windows(2) {
        if !g.has_edge(w[0], w[1]) {
            out.push(format!("{label} uses non-edge ({}, {})", w[0], w[1]));
        }
    }
}

fn check_report(g: &CayleyGraph, r: &Pi3Report) -> Vec<String> {
    let mut bad = Vec::new();
    let n = g.n();
    let k = g.generators().len();
    if r.n != n {
        bad.push(format!("report is for n = {}, certificate for n = {n}", r.n));
    }
    let formula = (6 * n - 9) / 4;
    if r.formula != formula {
        bad.push(format!("formula value {} should be {formula}", r.formula));
    }
    if r.r > 3 {
        bad.push(format!("r = {} exceeds 3", r.r));
    }
    if r.upper != (3 * k).saturating_sub(r.r) / 4 {
        bad.push(format!("upper {} is not (3·{k} − {})/4", r.upper, r.r));
    }
    let w = r.r_witness;
    if w.iter().any(|&v| v >= g.vertex_count()) || w[0] == w[1] || w[0] == w[2] || w[1] == w[2] {
        bad.push(format!("r-witness {w:?} is not a triple of vertices"));
    } else {
        let common = g.neighbors(w[0]).filter(|&x| g.has_edge(x, w[1]) && g.has_edge(x, w[2])).count();
        if common != r.r {
            bad.push(format!("r-witness {w:?} has {common} common neighbours, report says {}", r.r));
        }
    }
    if r.lower > r.upper {
        bad.push(format!("lower {} exceeds upper {}", r.lower, r.upper));
    }
    let matches = r.lower == formula && r.upper == formula;
    if matches != (r.verdict == Verdict::Match) {
        bad.push(format!("verdict {:?} disagrees with the numbers", r.verdict));
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{build_structure, ConstructOptions};
    use crate::pairing::pair_structure;

    fn sample(n: usize, omega: [usize; 3]) -> Certificate {
        let g = CayleyGraph::build(n, Family::Wheel).unwrap();
        let built = build_structure(&g, omega, ConstructOptions::default()).unwrap();
        let paths = pair_structure(&g.full_view(), &built.structure).unwrap();
        Certificate::for_structure(&g, &built, &paths, 0)
    }

    #[test]
    fn round_trip_and_pass() {
        let cert = sample(4, [0, 9, 17]);
        assert!(verify_certificate(&cert).passed());
        let doc = emit(&cert);
        assert_eq!(load(&doc).unwrap(), cert);
        assert_eq!(emit(&load(&doc).unwrap()), doc);
    }

    #[test]
    fn detects_non_edge() {
        let mut cert = sample(4, [0, 9, 17]);
        let p = &mut cert.bundles.ac[0];
        let last = p.len() - 1;
        p[last - 1] = if p[last - 1] == 23 { 22 } else { 23 };
        let report = verify_certificate(&cert);
        assert!(!report.passed());
        assert!(report.violations.iter().any(|v| v.contains("non-edge")));
    }

    #[test]
    fn detects_wrong_target() {
        let mut cert = sample(4, [0, 9, 17]);
        cert.bundles.ac.push(cert.bundles.ac[0].clone());
        let report = verify_certificate(&cert);
        assert!(report.violations.iter().any(|v| v.contains("bundle counts")));
    }

    #[test]
    fn schema_errors() {
        let doc = emit(&sample(4, [0, 9, 17]));
        let mut v: Value = serde_json::from_str(&doc).unwrap();
        v.as_object_mut().unwrap().remove("bundles");
        match load(&v.to_string()) {
            Err(CertError::Schema(m)) => assert!(m.contains("bundles"), "{m}"),
            other => panic!("{other:?}"),
        }
        let mut v: Value = serde_json::from_str(&doc).unwrap();
        v["schema_version"] = 2.into();
        assert!(matches!(load(&v.to_string()), Err(CertError::VersionMismatch { found: 2, expected: 1 })));
        let mut v: Value = serde_json::from_str(&doc).unwrap();
        v["extra"] = 1.into();
        assert!(matches!(load(&v.to_string()), Err(CertError::Schema(_))));
        assert!(matches!(load(&doc[..doc.len() / 2]), Err(CertError::Schema(_))));
    }
}
