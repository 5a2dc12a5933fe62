//! Branching vertices, local orientations and Condition (N).
//!
//! Closed paths at `v` are summarised by their port pairs `(ι, τ)`. A local
//! orientation is a port lying in every realizable pair; when none exists,
//! three pairs with pairwise distinct ι's and τ's yield a witness pair of
//! cycles generating a free subgroup.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::admissibility::{allows_return, is_cycle, meet, Path, ReturnMode, TransitionDigraph};
use crate::error::AnalysisError;
use crate::graph::{EdgeId, GroupId, SeparatedGraph, VertexId};
use crate::word::{Symbol, Word};

/// An element of S_v = s⁻¹(v) ⊔ C_v.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Port {
    Out(EdgeId),
    In(GroupId),
}

impl Port {
    pub fn name(self, g: &SeparatedGraph) -> String {
        match self {
            Port::Out(e) => format!("out:{}", g.edge_name(e)),
            Port::In(x) => format!("in:{}", g.group_name(x)),
        }
    }
}

/// π(e) = Out(e), π(e⁻¹) = In([e]).
pub fn port(g: &SeparatedGraph, s: Symbol) -> Port {
    if s.inverse {
        Port::In(g.group_of(s.edge))
    } else {
        Port::Out(s.edge)
    }
}

/// ι(α) = π(𝔦_d(α)).
pub fn iota(g: &SeparatedGraph, p: &Path) -> Option<Port> {
    p.first().map(|s| port(g, s))
}

/// τ(α) = π(𝔱_d(α)⁻¹).
pub fn tau(g: &SeparatedGraph, p: &Path) -> Option<Port> {
    p.last().map(|s| port(g, s.inv()))
}

pub fn ports_at(g: &SeparatedGraph, v: VertexId) -> Vec<Port> {
    g.out_edges(v)
        .iter()
        .map(|&e| Port::Out(e))
        .chain(g.groups_at(v).iter().map(|&x| Port::In(x)))
        .collect()
}

/// Port pairs of closed paths at a vertex, each with a shortest witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizablePairs {
    pub vertex: VertexId,
    pub pairs: BTreeMap<(Port, Port), Path>,
}

pub fn realizable_pairs(
    g: &SeparatedGraph,
    td: &TransitionDigraph,
    v: VertexId,
) -> RealizablePairs {
    let mut pairs: BTreeMap<(Port, Port), Path> = BTreeMap::new();
    let ends: Vec<Symbol> = td.symbols().filter(|&b| td.range_of(b) == v).collect();
    for a in td.symbols().filter(|&a| td.source_of(a) == v) {
        let tree = td.bfs(a);
        for &b in &ends {
            let Some(word) = tree.walk(b) else { continue };
            let key = (port(g, a), port(g, b.inv()));
            let better = match pairs.get(&key) {
                None => true,
                Some(old) => (word.len(), &word) < (old.len(), old.word()),
            };
            if better {
                let path = Path::new(g, word).expect("automaton walks are admissible");
                pairs.insert(key, path);
            }
        }
    }
    RealizablePairs { vertex: v, pairs }
}

/// Number of ports at `v` that allow a return.
pub fn return_count(
    g: &SeparatedGraph,
    td: &TransitionDigraph,
    v: VertexId,
    mode: ReturnMode,
) -> usize {
    let returns = |s: Symbol| {
        let p = Path::new(g, Word::single(s)).expect("single symbols are admissible");
        allows_return(td, &p, mode).expect("non-trivial")
    };
    let outs = g.out_edges(v).iter().filter(|&&e| returns(Symbol::pos(e))).count();
    let ins = g
        .groups_at(v)
        .iter()
        .filter(|&&x| g.group(x).members.iter().any(|&e| returns(Symbol::neg(e))))
        .count();
    outs + ins
}

/// `(branching, return_count)`.
pub fn is_branching(
    g: &SeparatedGraph,
    td: &TransitionDigraph,
    v: VertexId,
    mode: ReturnMode,
) -> (bool, usize) {
    let n = return_count(g, td, v, mode);
    (n >= 3, n)
}

pub fn branching_vertices(g: &SeparatedGraph, td: &TransitionDigraph) -> Vec<VertexId> {
    g.vertices()
        .filter(|&v| is_branching(g, td, v, ReturnMode::AllowTrivial).0)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LocalOrientation {
    /// Every closed path enters or leaves through the group `X_v`.
    Type1 { vertex: VertexId, group: GroupId },
    /// Every closed path enters or leaves through the edge `e_v`.
    Type2 { vertex: VertexId, edge: EdgeId },
}

impl LocalOrientation {
    pub fn vertex(self) -> VertexId {
        match self {
            LocalOrientation::Type1 { vertex, .. } | LocalOrientation::Type2 { vertex, .. } => {
                vertex
            }
        }
    }

    pub fn port(self) -> Port {
        match self {
            LocalOrientation::Type1 { group, .. } => Port::In(group),
            LocalOrientation::Type2 { edge, .. } => Port::Out(edge),
        }
    }
}

/// Ports lying in every realizable pair.
pub fn covering_ports(g: &SeparatedGraph, rp: &RealizablePairs) -> Vec<Port> {
    ports_at(g, rp.vertex)
        .into_iter()
        .filter(|&p| rp.pairs.keys().all(|&(a, b)| a == p || b == p))
        .collect()
}

/// Three pairs with pairwise distinct first and pairwise distinct second
/// coordinates, minimising total witness length (then pair order).
pub fn bad_triple(rp: &RealizablePairs) -> Option<[(Port, Port); 3]> {
    let items: Vec<((Port, Port), usize)> =
        rp.pairs.iter().map(|(&k, p)| (k, p.len())).collect();
    let mut best: Option<(usize, [(Port, Port); 3])> = None;
    for i in 0..items.len() {
        for j in i + 1..items.len() {
            let (p, q) = (items[i].0, items[j].0);
            if p.0 == q.0 || p.1 == q.1 {
                continue;
            }
            for k in j + 1..items.len() {
                let r = items[k].0;
                if r.0 == p.0 || r.0 == q.0 || r.1 == p.1 || r.1 == q.1 {
                    continue;
                }
                let total = items[i].1 + items[j].1 + items[k].1;
                if best.as_ref().is_none_or(|(t, _)| total < *t) {
                    best = Some((total, [p, q, r]));
                }
            }
        }
    }
    best.map(|(_, t)| t)
}

/// Cycles α = δγ and β = εγ at a vertex with γ = α∧β strictly shorter than
/// both, such that βα and β·α⁻¹ are cycles too.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailureWitness {
    pub vertex: VertexId,
    pub alpha: Path,
    pub beta: Path,
    pub gamma: Path,
    pub delta: Word,
    pub epsilon: Word,
}

impl FailureWitness {
    pub fn from_cycles(g: &SeparatedGraph, alpha: Path, beta: Path) -> Result<Self, AnalysisError> {
        let gamma = meet(g, &alpha, &beta)?;
        let gi = gamma.word().inverse();
        Ok(FailureWitness {
            vertex: alpha.source(),
            delta: alpha.word() * &gi,
            epsilon: beta.word() * &gi,
            alpha,
            beta,
            gamma,
        })
    }

    /// Re-check every defining condition; returns the first violation.
    pub fn verify(&self, g: &SeparatedGraph) -> Result<(), String> {
        let (a, b) = (&self.alpha, &self.beta);
        if a.source() != self.vertex || b.source() != self.vertex {
            return Err("cycles are not based at the witness vertex".into());
        }
        if !is_cycle(g, a) {
            return Err("α is not a cycle".into());
        }
        if !is_cycle(g, b) {
            return Err("β is not a cycle".into());
        }
        match a.then(g, b) {
            Some(ba) if is_cycle(g, &ba) => {}
            _ => return Err("βα is not a cycle".into()),
        }
        let quotient = b.word() * &a.word().inverse();
        match Path::new(g, quotient) {
            Ok(p) if is_cycle(g, &p) => {}
            _ => return Err("β·α⁻¹ is not a cycle".into()),
        }
        let m = meet(g, a, b).map_err(|e| e.to_string())?;
        if m != self.gamma || m.len() >= a.len() || m.len() >= b.len() {
            return Err("α∧β is not a proper initial subpath of both".into());
        }
        if &(&self.delta * self.gamma.word()) != a.word()
            || &(&self.epsilon * self.gamma.word()) != b.word()
        {
            return Err("δγ, εγ do not factor α, β".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalOutcome {
    Oriented(LocalOrientation),
    Fails(FailureWitness),
}

pub fn local_orientation(
    g: &SeparatedGraph,
    td: &TransitionDigraph,
    v: VertexId,
) -> Result<LocalOutcome, AnalysisError> {
    if !is_branching(g, td, v, ReturnMode::AllowTrivial).0 {
        return Err(AnalysisError::NotBranching(g.vertex_name(v).to_string()));
    }
    let rp = realizable_pairs(g, td, v);
    let cover = covering_ports(g, &rp);
    match cover.as_slice() {
        [] => {}
        [Port::In(x)] => {
            return Ok(LocalOutcome::Oriented(LocalOrientation::Type1 { vertex: v, group: *x }))
        }
        [Port::Out(e)] => {
            return Ok(LocalOutcome::Oriented(LocalOrientation::Type2 { vertex: v, edge: *e }))
        }
        _ => {
            return Err(AnalysisError::Internal(format!(
                "{} covering ports at branching vertex {}",
                cover.len(),
                g.vertex_name(v)
            )))
        }
    }
    let triple = bad_triple(&rp).ok_or_else(|| {
        AnalysisError::Internal(format!(
            "no covering port and no bad triple at {}",
            g.vertex_name(v)
        ))
    })?;
    let [a1, a2, a3] = triple.map(|k| rp.pairs[&k].clone());
    let join = |x: &Path| {
        a1.then(g, &x.inverse())
            .ok_or_else(|| AnalysisError::Internal("witness concatenation inadmissible".into()))
    };
    let fw = FailureWitness::from_cycles(g, join(&a2)?, join(&a3)?)?;
    fw.verify(g).map_err(AnalysisError::Internal)?;
    Ok(LocalOutcome::Fails(fw))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexReport {
    pub vertex: VertexId,
    pub return_count: usize,
    pub branching: bool,
    /// Present for branching vertices only.
    pub outcome: Option<LocalOutcome>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionNReport {
    pub verdict: bool,
    pub vertices: Vec<VertexReport>,
}

impl ConditionNReport {
    pub fn branching(&self) -> impl Iterator<Item = &VertexReport> {
        self.vertices.iter().filter(|r| r.branching)
    }

    pub fn witnesses(&self) -> impl Iterator<Item = &FailureWitness> {
        self.vertices.iter().filter_map(|r| match &r.outcome {
            Some(LocalOutcome::Fails(w)) => Some(w),
            _ => None,
        })
    }

    pub fn local_orientation(&self, v: VertexId) -> Option<LocalOrientation> {
        match &self.vertices[v.index()].outcome {
            Some(LocalOutcome::Oriented(o)) => Some(*o),
            _ => None,
        }
    }
}

pub fn check_condition_n_with(
    g: &SeparatedGraph,
    td: &TransitionDigraph,
) -> Result<ConditionNReport, AnalysisError> {
    let mut vertices = Vec::with_capacity(g.vertex_count());
    for v in g.vertices() {
        let (branching, return_count) = is_branching(g, td, v, ReturnMode::AllowTrivial);
        let outcome = if branching {
            Some(local_orientation(g, td, v)?)
        } else {
            None
        };
        vertices.push(VertexReport { vertex: v, return_count, branching, outcome });
    }
    let verdict = vertices
        .iter()
        .all(|r| !matches!(r.outcome, Some(LocalOutcome::Fails(_))));
    Ok(ConditionNReport { verdict, vertices })
}

pub fn check_condition_n(g: &SeparatedGraph) -> Result<ConditionNReport, AnalysisError> {
    check_condition_n_with(g, &TransitionDigraph::new(g))
}
