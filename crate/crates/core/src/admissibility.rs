//! Integrability conditions, closure under odd reflections, and principal roots.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cartan::{canonical, even_gcm_type, CartanDatum, GcmType, RootVector};
use crate::codec;
use crate::error::{Error, Result};
use crate::rational::{self, int, Rational};
use crate::reflections::{odd_reflection, pair, BaseState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// The four integrability conditions on a matrix of finite growth.
    Lemma31,
    /// Generalized Cartan matrix.
    Gcm,
}

/// A failed condition at entry `(i, j)`; single-index conditions use `j = i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Violation {
    pub check: Check,
    pub condition: u8,
    pub i: usize,
    pub j: usize,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.check {
            Check::Lemma31 => "integrability",
            Check::Gcm => "gcm",
        };
        write!(f, "{name} condition {} at ({},{})", self.condition, self.i + 1, self.j + 1)
    }
}

fn diagonal_violations(d: &CartanDatum, check: Check, out: &mut Vec<Violation>) {
    let n = d.n();
    for i in 0..n {
        let aii = d.entry(i, i);
        let v = |condition, j| Violation { check, condition, i, j };
        if !aii.is_zero() && *aii != int(2) {
            out.push(v(1, i));
        }
        if aii.is_zero() && d.p(i) != 1 {
            out.push(v(2, i));
        }
        if *aii == int(2) {
            for j in (0..n).filter(|&j| j != i) {
                if !rational::in_scaled_nonpositive_integers(d.entry(i, j), d.p(i)) {
                    out.push(v(3, j));
                }
            }
        }
    }
}

/// Empty iff the datum satisfies all four integrability conditions.
pub fn check_lemma31(d: &CartanDatum) -> Vec<Violation> {
    let mut out = Vec::new();
    diagonal_violations(d, Check::Lemma31, &mut out);
    let n = d.n();
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            if d.entry(i, j).is_zero() && !d.entry(j, i).is_zero() && !d.entry(i, i).is_zero() {
                out.push(Violation { check: Check::Lemma31, condition: 4, i, j });
            }
        }
    }
    out
}

pub fn gcm_violations(d: &CartanDatum) -> Vec<Violation> {
    let mut out = Vec::new();
    diagonal_violations(d, Check::Gcm, &mut out);
    let n = d.n();
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            if !d.entry(i, j).is_zero() && d.entry(j, i).is_zero() {
                out.push(Violation { check: Check::Gcm, condition: 4, i, j });
            }
        }
    }
    out
}

pub fn is_gcm(d: &CartanDatum) -> bool {
    gcm_violations(d).is_empty()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_depth: usize,
    pub max_nodes: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_depth: 8,
            max_nodes: 512,
        }
    }
}

impl Budget {
    pub fn new(max_depth: usize, max_nodes: usize) -> Result<Self> {
        let b = Budget { max_depth, max_nodes };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_depth == 0 {
            return Err(Error::InvalidBudget("max_depth is 0".into()));
        }
        if self.max_nodes == 0 {
            return Err(Error::InvalidBudget("max_nodes is 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Closed,
    Truncated,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitViolation {
    pub node: usize,
    pub violation: Violation,
    pub word: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct OrbitGraph {
    /// Canonical forms.
    pub nodes: Vec<CartanDatum>,
    /// `(from, k, to)`: reflecting the representative of `from` at its vertex `k`.
    pub edges: Vec<(usize, usize, usize)>,
    pub start: usize,
    pub status: Status,
    pub violation: Option<OrbitViolation>,
    /// First base found for each node, in the input's vertex order.
    pub representatives: Vec<BaseState>,
    pub depth: Vec<usize>,
}

impl OrbitGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes whose representative word uses no singular reflection.
    pub fn regular_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| !self.representatives[i].singular_used)
    }

    pub fn verdict(&self) -> Verdict {
        match (&self.violation, self.status) {
            (Some(v), _) => Verdict::No(Witness {
                word: v.word.clone(),
                violation: v.violation,
                datum: self.representatives[v.node].datum.clone(),
            }),
            (None, Status::Closed) => Verdict::Yes,
            (None, Status::Truncated) => Verdict::Inconclusive,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "status": self.status,
            "nodes": self.nodes.iter().map(codec::to_value).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|&(a, k, b)| json!([a, k + 1, b])).collect::<Vec<_>>(),
            "violation": self.violation.as_ref().map(|v| json!({
                "node": v.node,
                "condition": v.violation.condition,
                "check": v.violation.check,
                "entry": [v.violation.i + 1, v.violation.j + 1],
                "word": v.word.iter().map(|k| k + 1).collect::<Vec<_>>(),
            })),
        })
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph orbit {\n");
        for (i, d) in self.nodes.iter().enumerate() {
            let label = codec::serialize(d).replace('"', "\\\"");
            out.push_str(&format!("  n{i} [label=\"{label}\"];\n"));
        }
        for &(a, k, b) in &self.edges {
            out.push_str(&format!("  n{a} -> n{b} [label=\"{}\"];\n", k + 1));
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub word: Vec<usize>,
    pub violation: Violation,
    pub datum: CartanDatum,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No(Witness),
    Inconclusive,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Yes => "yes",
            Verdict::No(_) => "no",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

type Checker = fn(&CartanDatum) -> Vec<Violation>;

/// Breadth-first closure under odd reflections with [`check_lemma31`] at each node.
pub fn explore_closure(d: &CartanDatum, budget: Budget, traverse_singular: bool) -> Result<OrbitGraph> {
    explore(d, budget, traverse_singular, check_lemma31)
}

/// Nodes are expanded level by level; the level's reflections and canonical
/// forms are computed in parallel and merged in a fixed order, so the graph
/// does not depend on scheduling.
fn explore(d: &CartanDatum, budget: Budget, traverse_singular: bool, check: Checker) -> Result<OrbitGraph> {
    budget.validate()?;
    let start = BaseState::initial(d);
    let key = canonical(&start.datum)?;
    let mut index: HashMap<CartanDatum, usize> = HashMap::new();
    index.insert(key.clone(), 0);
    let mut g = OrbitGraph {
        nodes: vec![key],
        edges: Vec::new(),
        start: 0,
        status: Status::Closed,
        violation: None,
        representatives: vec![start],
        depth: vec![0],
    };
    if let Some(&v) = check(&g.representatives[0].datum).first() {
        g.violation = Some(OrbitViolation { node: 0, violation: v, word: vec![] });
        g.status = Status::Truncated;
        return Ok(g);
    }
    let mut frontier = vec![0usize];
    let mut level = 0;
    while !frontier.is_empty() {
        let expanded: Vec<Vec<(usize, BaseState, CartanDatum)>> = frontier
            .par_iter()
            .map(|&i| -> Result<Vec<_>> {
                let s = &g.representatives[i];
                let mut out = Vec::new();
                for k in 0..s.n() {
                    if !s.datum.is_isotropic(k) || (!traverse_singular && s.datum.is_singular(k)) {
                        continue;
                    }
                    let r = odd_reflection(s, k)?;
                    let c = canonical(&r.datum)?;
                    out.push((k, r, c));
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        let mut next = Vec::new();
        for (&from, results) in frontier.iter().zip(expanded) {
            for (k, state, key) in results {
                if let Some(&to) = index.get(&key) {
                    g.edges.push((from, k, to));
                    continue;
                }
                if level >= budget.max_depth || g.nodes.len() >= budget.max_nodes {
                    g.status = Status::Truncated;
                    continue;
                }
                let to = g.nodes.len();
                index.insert(key.clone(), to);
                let found = check(&state.datum).first().copied();
                let word = state.word.clone();
                g.nodes.push(key);
                g.representatives.push(state);
                g.depth.push(level + 1);
                g.edges.push((from, k, to));
                if let Some(v) = found {
                    g.violation = Some(OrbitViolation { node: to, violation: v, word });
                    g.status = Status::Truncated;
                    return Ok(g);
                }
                next.push(to);
            }
        }
        frontier = next;
        level += 1;
    }
    Ok(g)
}

pub fn is_admissible(d: &CartanDatum, budget: Budget) -> Result<Verdict> {
    Ok(explore_closure(d, budget, true)?.verdict())
}

/// Closure under regular reflections with the GCM conditions at every node.
pub fn regular_km_orbit(d: &CartanDatum, budget: Budget) -> Result<OrbitGraph> {
    explore(d, budget, false, gcm_violations)
}

pub fn is_regular_kac_moody(d: &CartanDatum, budget: Budget) -> Result<Verdict> {
    Ok(regular_km_orbit(d, budget)?.verdict())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrincipalSource {
    /// An even simple root of a base.
    Even,
    /// Twice an odd simple root with `a_ii = 2`.
    Doubled,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub word: Vec<usize>,
    pub source: PrincipalSource,
}

#[derive(Debug, Clone)]
pub struct PrincipalRootSet {
    pub roots: Vec<RootVector>,
    /// `b[x][y] = gamma_y(h_x)` with `beta_x(h_x) = 2`.
    pub b: Vec<Vec<Rational>>,
    pub provenance: Vec<Provenance>,
    /// True when every base reachable by odd reflections was visited.
    pub saturated: bool,
    pub bases_visited: usize,
}

impl PrincipalRootSet {
    /// `B` as an even datum, if nonempty.
    pub fn b_datum(&self) -> Option<CartanDatum> {
        if self.roots.is_empty() {
            return None;
        }
        CartanDatum::new(self.b.clone(), vec![0; self.roots.len()]).ok()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "roots": self.roots,
            "b": self.b.iter().map(|r| r.iter().map(rational::format).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "provenance": self.provenance.iter().map(|p| json!({
                "word": p.word.iter().map(|k| k + 1).collect::<Vec<_>>(),
                "source": p.source,
            })).collect::<Vec<_>>(),
            "saturated": self.saturated,
            "bases_visited": self.bases_visited,
        })
    }
}

/// Collects the principal even roots over all geometric bases within budget,
/// singular reflections included. Bases that stop being geometric are
/// neither used nor expanded.
pub fn principal_roots(d: &CartanDatum, budget: Budget) -> Result<PrincipalRootSet> {
    budget.validate()?;
    let start = BaseState::initial(d);
    let origin = start.origin().clone();
    let base_key = |s: &BaseState| s.roots.iter().cloned().collect::<BTreeSet<_>>();
    let mut seen: HashMap<BTreeSet<RootVector>, ()> = HashMap::new();
    seen.insert(base_key(&start), ());
    let mut found: BTreeMap<RootVector, (Vec<Rational>, Provenance)> = BTreeMap::new();
    let mut frontier = vec![start];
    let mut saturated = true;
    let mut visited = 0;
    let mut level = 0;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for s in &frontier {
            visited += 1;
            collect_principal(s, &mut found);
            for k in (0..s.n()).filter(|&k| s.datum.is_isotropic(k)) {
                let r = odd_reflection(s, k)?;
                let key = base_key(&r);
                if seen.contains_key(&key) || !r.is_geometric() {
                    continue;
                }
                if level >= budget.max_depth || seen.len() >= budget.max_nodes {
                    saturated = false;
                    continue;
                }
                seen.insert(key, ());
                next.push(r);
            }
        }
        frontier = next;
        level += 1;
    }
    let (roots, rest): (Vec<RootVector>, Vec<_>) = found.into_iter().unzip();
    let (coroots, provenance): (Vec<Vec<Rational>>, Vec<Provenance>) = rest.into_iter().unzip();
    let b = coroots
        .iter()
        .map(|c| roots.iter().map(|g| pair(&origin, c, g)).collect())
        .collect();
    Ok(PrincipalRootSet {
        roots,
        b,
        provenance,
        saturated,
        bases_visited: visited,
    })
}

fn collect_principal(s: &BaseState, found: &mut BTreeMap<RootVector, (Vec<Rational>, Provenance)>) {
    for i in 0..s.n() {
        if *s.datum.entry(i, i) != int(2) {
            continue;
        }
        let (root, coroot, source) = if s.datum.p(i) == 0 {
            (s.roots[i].clone(), s.coroots[i].clone(), PrincipalSource::Even)
        } else {
            let half: Vec<Rational> = s.coroots[i].iter().map(|x| x / int(2)).collect();
            (s.roots[i].scale(2), half, PrincipalSource::Doubled)
        };
        // Bases reached through singular reflections may carry negative roots.
        let root = if root.is_nonpositive() { root.neg() } else { root };
        found.entry(root).or_insert_with(|| {
            (
                coroot,
                Provenance {
                    word: s.word.clone(),
                    source,
                },
            )
        });
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pi0Report {
    pub size: usize,
    pub bound: usize,
    pub within_bound: bool,
    pub is_even_gcm: bool,
    pub blocks: Vec<(Vec<usize>, GcmType)>,
    pub saturated: bool,
    pub pass: bool,
    pub reason: Option<String>,
}

pub fn check_pi0(prs: &PrincipalRootSet, n: usize) -> Pi0Report {
    let size = prs.roots.len();
    let bound = 2 * n;
    let mut report = Pi0Report {
        size,
        bound,
        within_bound: size <= bound,
        is_even_gcm: true,
        blocks: Vec::new(),
        saturated: prs.saturated,
        pass: true,
        reason: None,
    };
    if let Some(b) = prs.b_datum() {
        match even_gcm_type(&b) {
            Ok(blocks) => report.blocks = blocks,
            Err(e) => {
                report.is_even_gcm = false;
                report.reason = Some(e.to_string());
            }
        }
    }
    if report.blocks.iter().any(|(_, t)| *t == GcmType::Indefinite) {
        report.reason = Some("B has an indefinite block".into());
    }
    if !report.within_bound {
        report.reason = Some(format!("{size} principal roots exceed the bound {bound}"));
    }
    report.pass = report.reason.is_none();
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(rows: &[&[i64]], p: &[u8]) -> CartanDatum {
        CartanDatum::from_ints(rows, p)
    }

    #[test]
    fn integrability_examples() {
        let v = check_lemma31(&d(&[&[2, 0], &[-1, 2]], &[0, 0]));
        assert_eq!(v, vec![Violation { check: Check::Lemma31, condition: 4, i: 0, j: 1 }]);
        let v = check_lemma31(&d(&[&[2, -1], &[-1, 2]], &[1, 0]));
        assert_eq!(v, vec![Violation { check: Check::Lemma31, condition: 3, i: 0, j: 1 }]);
        assert!(check_lemma31(&d(&[&[2, -1, 0], &[1, 0, 0], &[0, -1, 2]], &[0, 1, 0])).is_empty());
        let v = check_lemma31(&d(&[&[0, -1], &[-1, 2]], &[0, 0]));
        assert_eq!(v[0].condition, 2);
    }

    #[test]
    fn gcm_examples() {
        assert!(is_gcm(&d(&[&[0, 1], &[-2, 2]], &[1, 0])));
        assert!(!is_gcm(&d(&[&[2, -1, 0], &[1, 0, 0], &[0, -1, 2]], &[0, 1, 0])));
        assert!(is_gcm(&d(&[&[2]], &[0])));
    }

    #[test]
    fn closure_examples() {
        let g = explore_closure(&d(&[&[0, 1], &[-3, 2]], &[1, 0]), Budget::default(), true).unwrap();
        let v = g.violation.unwrap();
        assert_eq!(v.word, vec![0]);
        assert_eq!(g.depth[v.node], 1);

        let g = explore_closure(&d(&[&[0, 1], &[-2, 2]], &[1, 0]), Budget::default(), true).unwrap();
        // the reflected matrix is the same but the second root becomes odd
        assert_eq!(g.status, Status::Closed);
        assert_eq!(g.len(), 2);
        assert!(g.violation.is_none());
    }

    #[test]
    fn budget_must_be_positive() {
        assert!(Budget::new(0, 5).is_err());
        assert!(Budget::new(5, 0).is_err());
        let bad = Budget { max_depth: 0, max_nodes: 1 };
        assert!(explore_closure(&d(&[&[2]], &[0]), bad, true).is_err());
    }

    #[test]
    fn admissibility_verdicts() {
        let excluded = d(&[&[0, 0, 1], &[0, 0, 1], &[-1, -2, 2]], &[1, 1, 0]);
        assert!(matches!(is_admissible(&excluded, Budget::default()).unwrap(), Verdict::No(_)));
        let d210 = d(&[&[2, -1, 0], &[1, 0, 0], &[0, -1, 2]], &[0, 1, 0]);
        assert_eq!(is_admissible(&d210, Budget::default()).unwrap(), Verdict::Yes);
        assert!(matches!(is_regular_kac_moody(&d210, Budget::default()).unwrap(), Verdict::No(_)));
        let r = d(&[&[0, 1], &[-2, 2]], &[1, 0]);
        assert_eq!(is_regular_kac_moody(&r, Budget::default()).unwrap(), Verdict::Yes);
    }

    #[test]
    fn principal_roots_of_osp12() {
        let prs = principal_roots(&d(&[&[2]], &[1]), Budget::default()).unwrap();
        assert_eq!(prs.roots, vec![RootVector(vec![2])]);
        assert_eq!(prs.b, vec![vec![int(2)]]);
        assert_eq!(prs.provenance[0].source, PrincipalSource::Doubled);
        assert!(prs.saturated);
    }

    #[test]
    fn principal_roots_of_s120_form() {
        let s = d(&[&[0, 1, 0], &[1, 0, -2], &[-1, -1, 2]], &[1, 1, 0]);
        let prs = principal_roots(&s, Budget::default()).unwrap();
        let report = check_pi0(&prs, 3);
        assert!(report.pass, "{report:?}");
        let b = prs.b_datum().unwrap();
        let affine = d(&[&[2, -2], &[-2, 2]], &[0, 0]);
        let found = b.blocks().into_iter().any(|blk| blk.len() == 2 && b.restrict(&blk) == affine);
        assert!(found, "B = {b}");
    }

    #[test]
    fn check_pi0_failures() {
        let fake = PrincipalRootSet {
            roots: vec![RootVector(vec![1, 0]), RootVector(vec![0, 1])],
            b: vec![vec![int(2), int(-3)], vec![int(-3), int(2)]],
            provenance: vec![],
            saturated: true,
            bases_visited: 1,
        };
        assert!(!check_pi0(&fake, 2).pass);
        let many = PrincipalRootSet {
            roots: (0..3).map(|i| RootVector(vec![i + 1])).collect(),
            b: (0..3).map(|i| (0..3).map(|j| if i == j { int(2) } else { int(0) }).collect()).collect(),
            provenance: vec![],
            saturated: true,
            bases_visited: 1,
        };
        let r = check_pi0(&many, 1);
        assert!(!r.within_bound && !r.pass);
    }
}
