//! Edge types of a branching subgraph and (proper) orientations.
//!
//! A sign map 𝔬 makes `e^{𝔬(e)}` the positive symbol of each edge. Under
//! Condition (N) a proper orientation of the branching subgraph exists and
//! [`synthesize_orientation`] builds one: signs are fixed at branching
//! vertices by their local orientation, carried along cycles through
//! branching vertices, and set to constants on the remaining edge types.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::admissibility::{allows_return, Path, ReturnMode, TransitionDigraph};
use crate::condition_n::{check_condition_n_with, ConditionNReport, LocalOrientation};
use crate::decomposition::{branching_cycle_symbols, hook_relation};
use crate::error::AnalysisError;
use crate::graph::{EdgeId, SeparatedGraph, VertexId, VertexSet};
use crate::word::{Symbol, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum EdgeType {
    /// On a cycle through a branching vertex.
    T1,
    /// Critical: allows no return and ends at a weakly branching vertex.
    T2,
    /// Closed paths at r(e) through branching vertices all start in [e]⁻¹.
    T3a,
    /// Closed paths at s(e) through branching vertices all start with e.
    T3b,
}

impl EdgeType {
    pub fn label(self) -> &'static str {
        match self {
            EdgeType::T1 => "1",
            EdgeType::T2 => "2",
            EdgeType::T3a => "3a",
            EdgeType::T3b => "3b",
        }
    }
}

/// Context shared by classification and synthesis.
struct Analysis<'g> {
    g: &'g SeparatedGraph,
    td: TransitionDigraph,
    report: ConditionNReport,
    branching: VertexSet,
}

impl<'g> Analysis<'g> {
    fn new(g: &'g SeparatedGraph) -> Result<Self, AnalysisError> {
        let td = TransitionDigraph::new(g);
        let report = check_condition_n_with(g, &td)?;
        let branching: VertexSet = report.branching().map(|r| r.vertex).collect();
        let hook = hook_relation(g, &td);
        if let Some(u) = g
            .vertices()
            .find(|&u| !branching.iter().any(|&v| hook.hooks(u, v)))
        {
            return Err(AnalysisError::NotOwnBranchingSubgraph(g.vertex_name(u).to_string()));
        }
        Ok(Analysis { g, td, report, branching })
    }

    /// Initial symbols of closed paths at `u` that pass through a branching
    /// vertex, by search in the automaton × {visited branching}.
    fn initial_symbols(&self, u: VertexId) -> Vec<Symbol> {
        let td = &self.td;
        let hits = |s: Symbol| self.branching.contains(&td.source_of(s));
        td.symbols()
            .filter(|&a| td.source_of(a) == u)
            .filter(|&a| {
                let n = td.symbol_count();
                let mut seen = vec![false; 2 * n];
                let start = 2 * a.index() + hits(a) as usize;
                seen[start] = true;
                let mut queue = VecDeque::from([start]);
                while let Some(st) = queue.pop_front() {
                    let (s, flag) = (Symbol::from_index(st / 2), st % 2 == 1);
                    if flag && td.range_of(s) == u {
                        return true;
                    }
                    for &b in td.successors(s) {
                        let next = 2 * b.index() + (flag || hits(b)) as usize;
                        if !seen[next] {
                            seen[next] = true;
                            queue.push_back(next);
                        }
                    }
                }
                false
            })
            .collect()
    }

    fn classify(&self) -> Result<BTreeMap<EdgeId, EdgeType>, AnalysisError> {
        let g = self.g;
        let td = &self.td;
        let marked = branching_cycle_symbols(td, &self.branching);
        let weakly: VertexSet = td
            .symbols()
            .filter(|s| marked[s.index()])
            .map(|s| td.source_of(s))
            .collect();
        let ibr: Vec<Vec<Symbol>> = g.vertices().map(|u| self.initial_symbols(u)).collect();
        let mut out = BTreeMap::new();
        for e in g.edge_ids() {
            let single = Path::new(g, Word::single(Symbol::pos(e))).expect("edge");
            let t1 = marked[Symbol::pos(e).index()] || marked[Symbol::neg(e).index()];
            let t2 = !allows_return(td, &single, ReturnMode::AllowTrivial).expect("non-trivial")
                && weakly.contains(&g.range(e));
            let t3a = ibr[g.range(e).index()]
                .iter()
                .all(|s| s.inverse && g.group_of(s.edge) == g.group_of(e));
            let t3b = ibr[g.source(e).index()].iter().all(|&s| s == Symbol::pos(e));
            let hits: Vec<EdgeType> = [
                (t1, EdgeType::T1),
                (t2, EdgeType::T2),
                (t3a, EdgeType::T3a),
                (t3b, EdgeType::T3b),
            ]
            .into_iter()
            .filter_map(|(b, t)| b.then_some(t))
            .collect();
            if hits.len() != 1 {
                return Err(AnalysisError::ClassificationConflict {
                    edge: g.edge_name(e).to_string(),
                    count: hits.len(),
                });
            }
            out.insert(e, hits[0]);
        }
        Ok(out)
    }

    /// 𝔬_v(e) for an edge incident to the branching vertex `v`.
    fn relative_sign(&self, lo: LocalOrientation, e: EdgeId) -> i8 {
        let g = self.g;
        match lo {
            LocalOrientation::Type1 { vertex, group } => {
                if g.group_of(e) == group || g.source(e) == vertex {
                    -1
                } else {
                    1
                }
            }
            LocalOrientation::Type2 { vertex, edge } => {
                if e == edge || g.range(e) == vertex {
                    1
                } else {
                    -1
                }
            }
        }
    }

    /// Shortest cycle based at a branching vertex through `x`; ties go to
    /// the lexicographically least word.
    fn cycle_through(&self, x: Symbol) -> Option<Word> {
        let td = &self.td;
        let from_x = td.bfs(x);
        let mut best: Option<Word> = None;
        for &w in &self.branching {
            for a in td.symbols().filter(|&a| td.source_of(a) == w) {
                let Some(head) = td.bfs(a).walk(x) else { continue };
                for z in td.symbols().filter(|&z| td.range_of(z) == w && td.has_arc(z, a)) {
                    let Some(tail) = from_x.walk(z) else { continue };
                    let mut syms = head.0.clone();
                    syms.extend_from_slice(&tail.0[1..]);
                    let cand = Word(syms);
                    if best
                        .as_ref()
                        .is_none_or(|b| (cand.len(), &cand) < (b.len(), b))
                    {
                        best = Some(cand);
                    }
                }
            }
        }
        best
    }

    /// Signs carried by a cycle based at a branching vertex.
    fn signs_along(&self, cycle: &Word) -> Result<Vec<(EdgeId, i8)>, AnalysisError> {
        let first = cycle.first().ok_or(AnalysisError::TrivialPath)?;
        let v = first.source(self.g);
        let lo = self
            .report
            .local_orientation(v)
            .ok_or_else(|| AnalysisError::Precondition("cycle is not based at an oriented branching vertex".into()))?;
        let flip = if self.relative_sign(lo, first.edge) == first.sign() { 1 } else { -1 };
        Ok(cycle.symbols().iter().map(|s| (s.edge, flip * s.sign())).collect())
    }
}

pub fn classify_edges(g: &SeparatedGraph) -> Result<BTreeMap<EdgeId, EdgeType>, AnalysisError> {
    Analysis::new(g)?.classify()
}

/// Sign map on the edges of one graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Orientation {
    signs: Vec<i8>,
}

impl Orientation {
    pub fn from_signs(g: &SeparatedGraph, signs: Vec<i8>) -> Result<Self, AnalysisError> {
        if signs.len() != g.edge_count() || signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(AnalysisError::Precondition("one sign ±1 per edge required".into()));
        }
        Ok(Orientation { signs })
    }

    pub fn constant(g: &SeparatedGraph, sign: i8) -> Self {
        Orientation { signs: vec![sign; g.edge_count()] }
    }

    pub fn sign(&self, e: EdgeId) -> i8 {
        self.signs[e.index()]
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// `e^{𝔬(e)}`.
    pub fn positive_symbol(&self, e: EdgeId) -> Symbol {
        Symbol::with_sign(e, self.sign(e))
    }

    pub fn is_positive(&self, s: Symbol) -> bool {
        s.sign() == self.sign(s.edge)
    }

    /// Lines `orient <edge> <+1|-1>` in edge order.
    pub fn to_text(&self, g: &SeparatedGraph) -> String {
        let mut out = String::new();
        for e in g.edge_ids() {
            let s = if self.sign(e) > 0 { "+1" } else { "-1" };
            let _ = writeln!(out, "orient {} {s}", g.edge_name(e));
        }
        out
    }

    pub fn parse(g: &SeparatedGraph, text: &str) -> Result<Self, AnalysisError> {
        let mut signs = vec![0i8; g.edge_count()];
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = || AnalysisError::Precondition(format!("line {}: malformed `{line}`", i + 1));
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [kw, name, sign] = parts.as_slice() else { return Err(bad()) };
            if *kw != "orient" {
                return Err(bad());
            }
            let e = g
                .edge_id(name)
                .ok_or_else(|| AnalysisError::Graph(crate::GraphError::UnknownEdge(name.to_string())))?;
            signs[e.index()] = match *sign {
                "+1" | "1" => 1,
                "-1" => -1,
                _ => return Err(bad()),
            };
        }
        if let Some(e) = g.edge_ids().find(|e| signs[e.index()] == 0) {
            return Err(AnalysisError::MissingSign(g.edge_name(e).to_string()));
        }
        Ok(Orientation { signs })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum OrientationKind {
    Proper,
    Weak,
    Invalid,
}

impl OrientationKind {
    pub fn name(self) -> &'static str {
        match self {
            OrientationKind::Proper => "proper",
            OrientationKind::Weak => "weak",
            OrientationKind::Invalid => "invalid",
        }
    }
}

/// Which case of the definition a vertex satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VertexCase {
    /// Negative incoming edges form one group, no positive outgoing edge.
    GroupIn,
    /// No negative incoming edge, exactly one positive outgoing edge.
    SingleOut,
    /// No negative incoming edge and no positive outgoing edge.
    NoOut,
    Violated,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientationCheck {
    pub kind: OrientationKind,
    pub vertices: Vec<(VertexId, VertexCase)>,
}

pub fn verify_orientation(g: &SeparatedGraph, o: &Orientation) -> OrientationCheck {
    let mut kind = OrientationKind::Proper;
    let mut vertices = Vec::with_capacity(g.vertex_count());
    for v in g.vertices() {
        let neg_in: Vec<EdgeId> = g.in_edges(v).iter().copied().filter(|&e| o.sign(e) < 0).collect();
        let pos_out = g.out_edges(v).iter().filter(|&&e| o.sign(e) > 0).count();
        let is_group = g
            .groups_at(v)
            .iter()
            .any(|&x| g.group(x).members == neg_in);
        let case = if is_group && pos_out == 0 {
            VertexCase::GroupIn
        } else if neg_in.is_empty() && pos_out == 1 {
            VertexCase::SingleOut
        } else if neg_in.is_empty() && pos_out == 0 {
            VertexCase::NoOut
        } else {
            VertexCase::Violated
        };
        kind = kind.max(match case {
            VertexCase::GroupIn | VertexCase::SingleOut => OrientationKind::Proper,
            VertexCase::NoOut => OrientationKind::Weak,
            VertexCase::Violated => OrientationKind::Invalid,
        });
        vertices.push((v, case));
    }
    OrientationCheck { kind, vertices }
}

/// Proper orientation of a graph that is its own branching subgraph and
/// satisfies Condition (N).
pub fn synthesize_orientation(g: &SeparatedGraph) -> Result<Orientation, AnalysisError> {
    let an = Analysis::new(g)?;
    if let Some(w) = an.report.witnesses().next() {
        return Err(AnalysisError::ConditionNFails(g.vertex_name(w.vertex).to_string()));
    }
    let types = an.classify()?;
    let mut signs = vec![0i8; g.edge_count()];
    for (&e, &t) in &types {
        signs[e.index()] = match t {
            EdgeType::T2 | EdgeType::T3a => -1,
            EdgeType::T3b => 1,
            EdgeType::T1 => 0,
        };
    }
    for (&e, _) in types.iter().filter(|(_, &t)| t == EdgeType::T1) {
        if signs[e.index()] != 0 {
            continue;
        }
        let cycle = an
            .cycle_through(Symbol::pos(e))
            .or_else(|| an.cycle_through(Symbol::neg(e)))
            .ok_or_else(|| AnalysisError::Internal(format!("no branching cycle through {}", g.edge_name(e))))?;
        for (f, s) in an.signs_along(&cycle)? {
            if types[&f] != EdgeType::T1 {
                continue;
            }
            match signs[f.index()] {
                0 => signs[f.index()] = s,
                old if old != s => {
                    return Err(AnalysisError::Internal(format!(
                        "cycles disagree on the sign of {}",
                        g.edge_name(f)
                    )))
                }
                _ => {}
            }
        }
    }
    let o = Orientation { signs };
    let check = verify_orientation(g, &o);
    if check.kind != OrientationKind::Proper {
        let bad: Vec<&str> = check
            .vertices
            .iter()
            .filter(|(_, c)| *c != VertexCase::GroupIn && *c != VertexCase::SingleOut)
            .map(|(v, _)| g.vertex_name(*v))
            .collect();
        return Err(AnalysisError::Internal(format!(
            "synthesized orientation is {} at {}",
            check.kind.name(),
            bad.join(", ")
        )));
    }
    Ok(o)
}

/// Signs that a particular cycle based at a branching vertex induces on its
/// edges. Used to check that the choice of cycle does not matter.
pub fn signs_along_cycle(g: &SeparatedGraph, cycle: &Path) -> Result<Vec<(EdgeId, i8)>, AnalysisError> {
    if !crate::admissibility::is_cycle(g, cycle) {
        return Err(AnalysisError::Precondition("not a cycle".into()));
    }
    Analysis::new(g)?.signs_along(cycle.word())
}

/// Split `p = α₋α₊` with α₊ (applied first) positively and α₋ negatively
/// oriented. Returns `(α₋, α₊)`.
pub fn decompose_oriented(
    g: &SeparatedGraph,
    o: &Orientation,
    p: &Path,
) -> Result<(Path, Path), AnalysisError> {
    let kind = verify_orientation(g, o).kind;
    if kind == OrientationKind::Invalid {
        return Err(AnalysisError::BadOrientation(kind.name().into()));
    }
    let syms = p.word().symbols();
    let k = syms.iter().take_while(|&&s| o.is_positive(s)).count();
    if syms[k..].iter().any(|&s| o.is_positive(s)) {
        return Err(AnalysisError::Internal(
            "positive symbol after a negative one".into(),
        ));
    }
    let pos = p.prefix(g, k);
    let neg = Path::at(g, pos.range(), Word(syms[k..].to_vec()))?;
    Ok((neg, pos))
}
