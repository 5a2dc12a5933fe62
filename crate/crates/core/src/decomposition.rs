//! The hook relation ⊸ and the branching / branch-free / acyclic split.

use std::collections::{BTreeSet, VecDeque};

use crate::admissibility::{Path, TransitionDigraph};
use crate::condition_n::branching_vertices;
use crate::error::AnalysisError;
use crate::graph::{EdgeId, SeparatedGraph, VertexId, VertexSet};
use crate::word::{Symbol, Word};

/// `u ⊸ v` as a dense boolean matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HookRelation {
    matrix: Vec<Vec<bool>>,
}

impl HookRelation {
    pub fn hooks(&self, u: VertexId, v: VertexId) -> bool {
        self.matrix[u.index()][v.index()]
    }

    pub fn pairs(&self) -> Vec<(VertexId, VertexId)> {
        let n = self.matrix.len() as u32;
        (0..n)
            .flat_map(|u| (0..n).map(move |v| (VertexId(u), VertexId(v))))
            .filter(|&(u, v)| self.hooks(u, v))
            .collect()
    }

    /// Vertices hooking some vertex of `targets`.
    pub fn hooking_into(&self, targets: &VertexSet) -> VertexSet {
        (0..self.matrix.len() as u32)
            .map(VertexId)
            .filter(|&u| targets.iter().any(|&v| self.hooks(u, v)))
            .collect()
    }
}

pub fn hook_relation(g: &SeparatedGraph, td: &TransitionDigraph) -> HookRelation {
    let n = g.vertex_count();
    let mut matrix = vec![vec![false; n]; n];
    let symbols: Vec<Symbol> = td.symbols().collect();
    for &a in &symbols {
        if td.on_cycle(a) {
            let u = td.source_of(a).index();
            matrix[u][u] = true;
        }
    }
    // b can be the last symbol of α in α⁻¹βα for some cycle β at r(b)
    let hookable: Vec<bool> = symbols
        .iter()
        .map(|&b| {
            td.successors(b).iter().any(|&w1| {
                symbols.iter().any(|&wk| {
                    td.reachable(w1, wk) && td.has_arc(wk, w1) && td.has_arc(wk, b.inv())
                })
            })
        })
        .collect();
    for &a in &symbols {
        for &b in &symbols {
            if hookable[b.index()] && td.reachable(a, b) {
                matrix[td.source_of(a).index()][td.range_of(b).index()] = true;
            }
        }
    }
    HookRelation { matrix }
}

/// Vertices grouped by "some cycle passes through both", as sorted sets.
/// Vertices on no cycle are omitted.
pub fn cycle_classes(g: &SeparatedGraph, td: &TransitionDigraph) -> Vec<VertexSet> {
    let mut classes: Vec<VertexSet> = Vec::new();
    for comp in td.cyclic_components() {
        let mut merged: VertexSet = comp.iter().map(|&s| td.source_of(s)).collect();
        classes.retain(|c| {
            if c.is_disjoint(&merged) {
                true
            } else {
                merged.extend(c.iter().copied());
                false
            }
        });
        classes.push(merged);
    }
    let _ = g;
    classes.sort();
    classes
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub branching: VertexSet,
    pub branching_part: VertexSet,
    pub branch_free: VertexSet,
    pub acyclic: VertexSet,
    pub weakly_branching: VertexSet,
    /// Edges of the branching subgraph that allow no return and end at a
    /// weakly branching vertex.
    pub critical_edges: BTreeSet<EdgeId>,
}

impl Decomposition {
    pub fn branching_subgraph(&self, g: &SeparatedGraph) -> SeparatedGraph {
        g.full_subgraph(&self.branching_part)
    }

    pub fn branch_free_subgraph(&self, g: &SeparatedGraph) -> SeparatedGraph {
        g.full_subgraph(&self.branch_free)
    }

    pub fn acyclic_subgraph(&self, g: &SeparatedGraph) -> SeparatedGraph {
        g.full_subgraph(&self.acyclic)
    }
}

/// Symbols of cyclic components that also contain a branching-based symbol.
pub(crate) fn branching_cycle_symbols(td: &TransitionDigraph, branching: &VertexSet) -> Vec<bool> {
    let mut marked = vec![false; td.symbol_count()];
    for comp in td.cyclic_components() {
        if comp.iter().any(|s| branching.contains(&td.source_of(*s))) {
            for s in comp {
                marked[s.index()] = true;
            }
        }
    }
    marked
}

pub fn decompose_with(
    g: &SeparatedGraph,
    td: &TransitionDigraph,
) -> Result<Decomposition, AnalysisError> {
    let hook = hook_relation(g, td);
    let branching: VertexSet = branching_vertices(g, td).into_iter().collect();
    let branching_part = hook.hooking_into(&branching);
    let branch_free: VertexSet = g.vertices().filter(|v| !branching_part.contains(v)).collect();
    let acyclic: VertexSet = g
        .vertices()
        .filter(|&u| !g.vertices().any(|v| hook.hooks(u, v)))
        .collect();

    let marked = branching_cycle_symbols(td, &branching);
    let weakly_branching: VertexSet = td
        .symbols()
        .filter(|s| marked[s.index()])
        .map(|s| td.source_of(s))
        .collect();
    let critical_edges = g
        .edge_ids()
        .filter(|&e| {
            let p = Path::new(g, Word::single(Symbol::pos(e))).expect("single edge");
            !crate::admissibility::allows_return(td, &p, Default::default()).expect("non-trivial")
                && weakly_branching.contains(&g.range(e))
                && branching_part.contains(&g.source(e))
        })
        .collect();

    for (name, set) in [("branch-free", &branch_free), ("acyclic", &acyclic)] {
        if !g.is_hereditary(set) || !g.is_c_saturated(set) {
            return Err(AnalysisError::Internal(format!(
                "{name} part is not hereditary and C-saturated"
            )));
        }
        if let ReturnFreeness::Counterexample(p) = is_return_free(g, td, set)? {
            return Err(AnalysisError::Internal(format!(
                "{name} part is not return free: {}",
                p.literal(g)
            )));
        }
    }
    Ok(Decomposition {
        branching,
        branching_part,
        branch_free,
        acyclic,
        weakly_branching,
        critical_edges,
    })
}

pub fn decompose(g: &SeparatedGraph) -> Result<Decomposition, AnalysisError> {
    decompose_with(g, &TransitionDigraph::new(g))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReturnFreeness {
    ReturnFree,
    /// A shortest admissible path with both ends in the set that leaves it.
    Counterexample(Path),
}

impl ReturnFreeness {
    pub fn is_return_free(&self) -> bool {
        matches!(self, ReturnFreeness::ReturnFree)
    }
}

pub fn is_return_free(
    g: &SeparatedGraph,
    td: &TransitionDigraph,
    h: &VertexSet,
) -> Result<ReturnFreeness, AnalysisError> {
    if !g.is_hereditary(h) || !g.is_c_saturated(h) {
        return Err(AnalysisError::Precondition(
            "set must be hereditary and C-saturated".into(),
        ));
    }
    let inside = |e: EdgeId| h.contains(&g.source(e)) && h.contains(&g.range(e));
    // product of the automaton with a "left E_H" flag
    let n = td.symbol_count();
    let state = |s: Symbol, left: bool| 2 * s.index() + left as usize;
    let mut parent: Vec<Option<usize>> = vec![None; 2 * n];
    let mut seen = vec![false; 2 * n];
    let mut queue = VecDeque::new();
    for a in td.symbols().filter(|&a| h.contains(&td.source_of(a))) {
        let st = state(a, !inside(a.edge));
        seen[st] = true;
        queue.push_back(st);
    }
    while let Some(st) = queue.pop_front() {
        let (s, left) = (Symbol::from_index(st / 2), st % 2 == 1);
        if left && h.contains(&td.range_of(s)) {
            let mut walk = vec![s];
            let mut cur = st;
            while let Some(p) = parent[cur] {
                walk.push(Symbol::from_index(p / 2));
                cur = p;
            }
            walk.reverse();
            let path = Path::new(g, Word(walk)).expect("automaton walk");
            return Ok(ReturnFreeness::Counterexample(path));
        }
        for &b in td.successors(s) {
            let next = state(b, left || !inside(b.edge));
            if !seen[next] {
                seen[next] = true;
                parent[next] = Some(st);
                queue.push_back(next);
            }
        }
    }
    Ok(ReturnFreeness::ReturnFree)
}

/// Strata of a branch-free graph, innermost first. Each stratum's full
/// subgraph has at most one cycle class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratification {
    pub strata: Vec<VertexSet>,
}

pub fn stratify_branch_free(g: &SeparatedGraph) -> Result<Stratification, AnalysisError> {
    let td = TransitionDigraph::new(g);
    if let Some(&v) = branching_vertices(g, &td).first() {
        return Err(AnalysisError::HasBranchingVertex(g.vertex_name(v).to_string()));
    }
    let mut strata = Vec::new();
    split(g, &td, &mut strata)?;
    Ok(Stratification { strata })
}

fn split(
    g: &SeparatedGraph,
    td: &TransitionDigraph,
    out: &mut Vec<VertexSet>,
) -> Result<(), AnalysisError> {
    let hook = hook_relation(g, td);
    let acyclic: VertexSet = g
        .vertices()
        .filter(|&u| !g.vertices().any(|v| hook.hooks(u, v)))
        .collect();
    if !acyclic.is_empty() && acyclic.len() < g.vertex_count() {
        out.push(acyclic.clone());
        let rest: VertexSet = g.vertices().filter(|v| !acyclic.contains(v)).collect();
        let sub = g.full_subgraph(&rest);
        let mut inner = Vec::new();
        split(&sub, &TransitionDigraph::new(&sub), &mut inner)?;
        out.extend(inner.iter().map(|s| sub.map_vertices(s, g)));
        return Ok(());
    }
    let classes = cycle_classes(g, td);
    if classes.len() <= 1 {
        if g.vertex_count() > 0 {
            out.push(g.all_vertices());
        }
        return Ok(());
    }
    let class_hooks = |a: &VertexSet, b: &VertexSet| {
        a.iter().any(|&u| b.iter().any(|&v| hook.hooks(u, v)))
    };
    // a class no other class hooks into; classes are sorted, so the first
    // such class has the least representative
    let top = classes
        .iter()
        .find(|c| classes.iter().all(|d| d == *c || !class_hooks(d, c)))
        .ok_or_else(|| AnalysisError::Internal("hook order on cycle classes has no maximum".into()))?;
    let h: VertexSet = g
        .vertices()
        .filter(|&u| top.iter().all(|&v| !hook.hooks(u, v)))
        .collect();
    if !g.is_hereditary(&h) || !g.is_c_saturated(&h) || !is_return_free(g, td, &h)?.is_return_free()
    {
        return Err(AnalysisError::Internal(
            "split set is not return free, hereditary and C-saturated".into(),
        ));
    }
    let rest: VertexSet = g.vertices().filter(|v| !h.contains(v)).collect();
    for part in [h, rest] {
        let sub = g.full_subgraph(&part);
        let sub_td = TransitionDigraph::new(&sub);
        let mut inner = Vec::new();
        split(&sub, &sub_td, &mut inner)?;
        out.extend(inner.iter().map(|s| sub.map_vertices(s, g)));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::format::parse;

    fn names(g: &SeparatedGraph, s: &VertexSet) -> Vec<String> {
        let mut v = g.vertex_names_of(s);
        v.sort_by_key(|n| n[1..].parse::<u32>().unwrap_or(0));
        v
    }

    #[test]
    fn emn_hooks() {
        let g = catalog::emn(2, 2);
        let td = TransitionDigraph::new(&g);
        let h = hook_relation(&g, &td);
        let (u, w) = (g.vertex("u").unwrap(), g.vertex("w").unwrap());
        assert!(h.hooks(u, u) && h.hooks(w, w));
        let one = parse("vertex u\nvertex w\nedge e : u -> w @ c\n").unwrap();
        let td1 = TransitionDigraph::new(&one);
        assert!(hook_relation(&one, &td1).pairs().is_empty());
    }

    #[test]
    fn running_example_parts() {
        let g = catalog::running_example();
        let d = decompose(&g).unwrap();
        assert_eq!(
            names(&g, &d.branching_part),
            ["u1", "u2", "u3", "u6", "u7", "u8", "u10", "u11", "u12"]
        );
        assert_eq!(names(&g, &d.branch_free), ["u4", "u5", "u9", "u13"]);
        assert!(d.acyclic.is_empty());
        let weak: VertexSet = d.weakly_branching.difference(&d.branching).copied().collect();
        assert_eq!(names(&g, &weak), ["u1", "u8", "u12"]);
        let crit: Vec<&str> = d.critical_edges.iter().map(|&e| g.edge_name(e)).collect();
        assert_eq!(crit, ["b2_3"]);
    }

    #[test]
    fn no_branching_means_all_branch_free() {
        let g = catalog::two_squares();
        let d = decompose(&g).unwrap();
        assert!(d.branching_part.is_empty());
        assert_eq!(d.branch_free, g.all_vertices());
    }

    #[test]
    fn return_freeness() {
        let g = catalog::running_example();
        let td = TransitionDigraph::new(&g);
        let d = decompose_with(&g, &td).unwrap();
        assert!(is_return_free(&g, &td, &d.branch_free).unwrap().is_return_free());
        assert!(is_return_free(&g, &td, &g.all_vertices()).unwrap().is_return_free());
        // {a} is left through x and re-entered through y⁻¹
        let g2 = parse(
            "vertex a\nvertex b\nvertex c\n\
             edge x : a -> b @ k\nedge x2 : c -> b @ k\n\
             edge y : a -> b @ l\nedge y2 : c -> b @ l\n",
        )
        .unwrap();
        let td2 = TransitionDigraph::new(&g2);
        let h: VertexSet = [g2.vertex("a").unwrap()].into();
        match is_return_free(&g2, &td2, &h).unwrap() {
            ReturnFreeness::Counterexample(p) => assert_eq!(p.literal(&g2), "y^-1.x"),
            other => panic!("{other:?}"),
        }
        assert!(is_return_free(&g2, &td2, &[g2.vertex("b").unwrap()].into()).is_err());
    }

    #[test]
    fn strata_of_running_example() {
        let g = catalog::running_example();
        let d = decompose(&g).unwrap();
        let bf = d.branch_free_subgraph(&g);
        let s = stratify_branch_free(&bf).unwrap();
        let got: Vec<Vec<String>> = s.strata.iter().map(|x| names(&bf, x)).collect();
        assert_eq!(got, vec![vec!["u4", "u9", "u13"], vec!["u5"]]);
        assert!(stratify_branch_free(&g).is_err());
    }

    #[test]
    fn small_strata() {
        let line = parse("vertex a\nvertex b\nedge x : a -> b @ k\n").unwrap();
        assert_eq!(stratify_branch_free(&line).unwrap().strata.len(), 1);
        // an acyclic feeder below a loop is peeled off first
        let fed = parse("vertex a\nvertex b\nedge x : a -> b @ m\nedge l : b -> b @ m\n").unwrap();
        let s = stratify_branch_free(&fed).unwrap();
        assert_eq!(s.strata.len(), 2);
        assert_eq!(fed.vertex_names_of(&s.strata[0]), ["a"]);
        let l = catalog::loop_graph();
        assert_eq!(stratify_branch_free(&l).unwrap().strata, vec![l.all_vertices()]);
    }
}
