//! Admissible paths in the double and the transition digraph on symbols.
//!
//! Two symbols may follow each other when they compose and avoid the
//! patterns `e f⁻¹` with `e = f` and `e⁻¹ f` with `[e] = [f]`. Walks in the
//! transition digraph are therefore exactly the non-trivial admissible paths,
//! which turns every existential path question into reachability.

use std::collections::VecDeque;

use crate::error::AnalysisError;
use crate::graph::{SeparatedGraph, VertexId};
use crate::word::{Symbol, Word};

/// May `next` be applied directly after `prev`?
pub fn allowed(g: &SeparatedGraph, prev: Symbol, next: Symbol) -> bool {
    if next.source(g) != prev.range(g) {
        return false;
    }
    match (prev.inverse, next.inverse) {
        // next = e, prev = f⁻¹: forbidden when e = f (cancellation)
        (true, false) => next.edge != prev.edge,
        // next = e⁻¹, prev = f: forbidden when [e] = [f]
        (false, true) => g.group_of(next.edge) != g.group_of(prev.edge),
        _ => true,
    }
}

/// True iff `w` is a non-trivial admissible path.
pub fn is_admissible(g: &SeparatedGraph, w: &Word) -> bool {
    !w.is_empty()
        && w.symbols().iter().all(|s| s.edge.index() < g.edge_count())
        && w.symbols().windows(2).all(|p| allowed(g, p[0], p[1]))
}

/// An admissible path: a trivial path at a vertex or an admissible word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    start: VertexId,
    end: VertexId,
    word: Word,
}

// `is_trivial` plays the role of `is_empty`.
#[allow(clippy::len_without_is_empty)]
impl Path {
    pub fn trivial(v: VertexId) -> Self {
        Path { start: v, end: v, word: Word::empty() }
    }

    pub fn new(g: &SeparatedGraph, word: Word) -> Result<Self, AnalysisError> {
        if word.is_empty() {
            return Err(AnalysisError::TrivialPath);
        }
        if !is_admissible(g, &word) {
            return Err(AnalysisError::NotAdmissible);
        }
        Ok(Path {
            start: word.first().unwrap().source(g),
            end: word.last().unwrap().range(g),
            word,
        })
    }

    /// Trivial at `v` when `word` is empty, admissible path otherwise.
    pub fn at(g: &SeparatedGraph, v: VertexId, word: Word) -> Result<Self, AnalysisError> {
        if word.is_empty() {
            Ok(Path::trivial(v))
        } else {
            let p = Path::new(g, word)?;
            if p.start != v {
                return Err(AnalysisError::SourceMismatch);
            }
            Ok(p)
        }
    }

    pub fn parse(g: &SeparatedGraph, literal: &str) -> Result<Self, AnalysisError> {
        let word = Word::parse(g, literal).map_err(|_| AnalysisError::NotAdmissible)?;
        Path::new(g, word)
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn into_word(self) -> Word {
        self.word
    }

    pub fn source(&self) -> VertexId {
        self.start
    }

    pub fn range(&self) -> VertexId {
        self.end
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.word.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.start == self.end
    }

    pub fn first(&self) -> Option<Symbol> {
        self.word.first()
    }

    pub fn last(&self) -> Option<Symbol> {
        self.word.last()
    }

    pub fn inverse(&self) -> Path {
        Path { start: self.end, end: self.start, word: self.word.inverse() }
    }

    pub fn prefix(&self, g: &SeparatedGraph, k: usize) -> Path {
        if k == 0 {
            Path::trivial(self.start)
        } else {
            let word = self.word.prefix(k);
            Path { start: self.start, end: word.last().unwrap().range(g), word }
        }
    }

    /// Is `self` an initial subpath of `other`?
    pub fn le(&self, other: &Path) -> bool {
        self.start == other.start && other.word.starts_with(&self.word)
    }

    /// Plain concatenation `after · self` (no cancellation), if admissible.
    pub fn then(&self, g: &SeparatedGraph, after: &Path) -> Option<Path> {
        if after.start != self.end {
            return None;
        }
        match (self.last(), after.first()) {
            (Some(a), Some(b)) if !allowed(g, a, b) => None,
            _ => {
                let mut syms = self.word.0.clone();
                syms.extend_from_slice(&after.word.0);
                Some(Path { start: self.start, end: after.end, word: Word(syms) })
            }
        }
    }

    pub fn literal(&self, g: &SeparatedGraph) -> String {
        if self.is_trivial() {
            g.vertex_name(self.start).to_string()
        } else {
            self.word.literal(g)
        }
    }
}

/// Longest common initial subpath α ∧ β.
pub fn meet(g: &SeparatedGraph, a: &Path, b: &Path) -> Result<Path, AnalysisError> {
    if a.source() != b.source() {
        return Err(AnalysisError::SourceMismatch);
    }
    Ok(a.prefix(g, a.word().common_prefix_len(b.word())))
}

/// A closed non-trivial path whose square is admissible.
pub fn is_cycle(g: &SeparatedGraph, p: &Path) -> bool {
    match (p.first(), p.last()) {
        (Some(a), Some(z)) => p.is_closed() && allowed(g, z, a),
        _ => false,
    }
}

/// Closed, and no proper non-trivial initial subpath ends at the base.
pub fn is_base_simple(g: &SeparatedGraph, p: &Path) -> bool {
    p.is_closed()
        && p.word().symbols()[..p.len().saturating_sub(1)]
            .iter()
            .all(|s| s.range(g) != p.source())
}

/// Whether a return may use the trivial path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReturnMode {
    /// A path that is already closed allows a return.
    #[default]
    AllowTrivial,
    /// A non-trivial extension is always required.
    RequireExtension,
}

/// Adjacency on the 2|E¹| symbols plus a full reachability table.
#[derive(Debug, Clone)]
pub struct TransitionDigraph {
    succ: Vec<Vec<Symbol>>,
    // reach[a] is a bitset over symbols; walks of length >= 0
    reach: Vec<Vec<u64>>,
    sources: Vec<VertexId>,
    ranges: Vec<VertexId>,
}

fn bit(set: &[u64], i: usize) -> bool {
    set[i / 64] >> (i % 64) & 1 == 1
}

impl TransitionDigraph {
    pub fn new(g: &SeparatedGraph) -> Self {
        let n = 2 * g.edge_count();
        let symbols: Vec<Symbol> = (0..n).map(Symbol::from_index).collect();
        let mut succ = vec![Vec::new(); n];
        for &a in &symbols {
            let v = a.range(g);
            let mut next: Vec<Symbol> = g
                .out_edges(v)
                .iter()
                .map(|&e| Symbol::pos(e))
                .chain(g.in_edges(v).iter().map(|&e| Symbol::neg(e)))
                .filter(|&b| allowed(g, a, b))
                .collect();
            next.sort();
            succ[a.index()] = next;
        }
        let words = n.div_ceil(64).max(1);
        let mut reach = vec![vec![0u64; words]; n];
        let mut queue = VecDeque::new();
        for (start, row) in reach.iter_mut().enumerate() {
            row[start / 64] |= 1 << (start % 64);
            queue.push_back(start);
            while let Some(x) = queue.pop_front() {
                for b in &succ[x] {
                    let i = b.index();
                    if !bit(row, i) {
                        row[i / 64] |= 1 << (i % 64);
                        queue.push_back(i);
                    }
                }
            }
        }
        TransitionDigraph {
            succ,
            reach,
            sources: symbols.iter().map(|s| s.source(g)).collect(),
            ranges: symbols.iter().map(|s| s.range(g)).collect(),
        }
    }

    pub fn symbol_count(&self) -> usize {
        self.succ.len()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        (0..self.succ.len()).map(Symbol::from_index)
    }

    pub fn successors(&self, a: Symbol) -> &[Symbol] {
        &self.succ[a.index()]
    }

    pub fn has_arc(&self, a: Symbol, b: Symbol) -> bool {
        self.succ[a.index()].binary_search(&b).is_ok()
    }

    pub fn source_of(&self, a: Symbol) -> VertexId {
        self.sources[a.index()]
    }

    pub fn range_of(&self, a: Symbol) -> VertexId {
        self.ranges[a.index()]
    }

    /// `a ⇝ b`, the empty walk included.
    pub fn reachable(&self, a: Symbol, b: Symbol) -> bool {
        bit(&self.reach[a.index()], b.index())
    }

    /// Walk of length ≥ 1 from `a` to `b`.
    pub fn reachable_strict(&self, a: Symbol, b: Symbol) -> bool {
        self.succ[a.index()].iter().any(|&s| self.reachable(s, b))
    }

    pub fn on_cycle(&self, a: Symbol) -> bool {
        self.reachable_strict(a, a)
    }

    pub fn cycle_nodes(&self) -> Vec<Symbol> {
        self.symbols().filter(|&a| self.on_cycle(a)).collect()
    }

    /// Symbols grouped into cyclic strongly connected components, each
    /// sorted, listed by least member.
    pub fn cyclic_components(&self) -> Vec<Vec<Symbol>> {
        let mut seen = vec![false; self.symbol_count()];
        let mut out = Vec::new();
        for a in self.symbols() {
            if seen[a.index()] || !self.on_cycle(a) {
                continue;
            }
            let comp: Vec<Symbol> = self
                .symbols()
                .filter(|&b| self.reachable(a, b) && self.reachable(b, a))
                .collect();
            for b in &comp {
                seen[b.index()] = true;
            }
            out.push(comp);
        }
        out
    }

    /// Breadth-first tree from `start`; see [`BfsTree::walk`].
    pub fn bfs(&self, start: Symbol) -> BfsTree {
        let n = self.symbol_count();
        let mut parent = vec![None; n];
        let mut dist = vec![usize::MAX; n];
        let mut queue = VecDeque::from([start.index()]);
        dist[start.index()] = 0;
        while let Some(x) = queue.pop_front() {
            for b in &self.succ[x] {
                let i = b.index();
                if dist[i] == usize::MAX {
                    dist[i] = dist[x] + 1;
                    parent[i] = Some(x);
                    queue.push_back(i);
                }
            }
        }
        BfsTree { parent, dist }
    }

    /// Shortest walk from any of `starts` to a symbol satisfying `goal`, as a
    /// word. Starts are tried in the given order and successors in symbol
    /// order, so ties resolve to the lexicographically least walk.
    pub fn shortest_walk(
        &self,
        starts: impl IntoIterator<Item = Symbol>,
        goal: impl Fn(Symbol) -> bool,
    ) -> Option<Word> {
        let n = self.symbol_count();
        let mut parent: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        for s in starts {
            if !seen[s.index()] {
                seen[s.index()] = true;
                queue.push_back(s.index());
            }
        }
        while let Some(x) = queue.pop_front() {
            if goal(Symbol::from_index(x)) {
                let mut walk = vec![Symbol::from_index(x)];
                let mut cur = x;
                while let Some(p) = parent[cur] {
                    walk.push(Symbol::from_index(p));
                    cur = p;
                }
                walk.reverse();
                return Some(Word(walk));
            }
            for b in &self.succ[x] {
                let i = b.index();
                if !seen[i] {
                    seen[i] = true;
                    parent[i] = Some(x);
                    queue.push_back(i);
                }
            }
        }
        None
    }
}

/// Shortest walks from one symbol. Successors are scanned in symbol order,
/// so each walk is the lexicographically least among the shortest.
#[derive(Debug, Clone)]
pub struct BfsTree {
    parent: Vec<Option<usize>>,
    dist: Vec<usize>,
}

impl BfsTree {
    pub fn dist(&self, b: Symbol) -> Option<usize> {
        let d = self.dist[b.index()];
        (d != usize::MAX).then_some(d)
    }

    pub fn walk(&self, b: Symbol) -> Option<Word> {
        self.dist(b)?;
        let mut walk = vec![b];
        let mut cur = b.index();
        while let Some(p) = self.parent[cur] {
            walk.push(Symbol::from_index(p));
            cur = p;
        }
        walk.reverse();
        Some(Word(walk))
    }
}

/// Can `p` be extended to a closed path?
pub fn allows_return(
    td: &TransitionDigraph,
    p: &Path,
    mode: ReturnMode,
) -> Result<bool, AnalysisError> {
    let last = p.last().ok_or(AnalysisError::TrivialPath)?;
    if mode == ReturnMode::AllowTrivial && p.is_closed() {
        return Ok(true);
    }
    let base = p.source();
    Ok(td
        .symbols()
        .any(|z| td.range_of(z) == base && td.reachable_strict(last, z)))
}

/// All admissible paths from `from` of length ≤ `max_len`, in
/// lexicographic order (the trivial path first).
pub fn enumerate_paths(g: &SeparatedGraph, from: VertexId, max_len: usize) -> Vec<Path> {
    fn extend(g: &SeparatedGraph, path: &Path, max_len: usize, out: &mut Vec<Path>) {
        out.push(path.clone());
        if path.len() == max_len {
            return;
        }
        let v = path.range();
        let mut next: Vec<Symbol> = g
            .out_edges(v)
            .iter()
            .map(|&e| Symbol::pos(e))
            .chain(g.in_edges(v).iter().map(|&e| Symbol::neg(e)))
            .filter(|&b| path.last().is_none_or(|a| allowed(g, a, b)))
            .collect();
        next.sort();
        for b in next {
            let word = path.word().then(b);
            let p = Path { start: path.source(), end: b.range(g), word };
            extend(g, &p, max_len, out);
        }
    }
    let mut out = Vec::new();
    extend(g, &Path::trivial(from), max_len, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn path(g: &SeparatedGraph, lit: &str) -> Path {
        Path::parse(g, lit).unwrap()
    }

    #[test]
    fn admissibility_patterns() {
        let g = catalog::emn(2, 3);
        let w = |s| Word::parse(&g, s).unwrap();
        assert!(is_admissible(&g, &w("f0^-1.e0")));
        assert!(!is_admissible(&g, &w("e0^-1.e0")));
        assert!(!is_admissible(&g, &w("e1^-1.e0")));
        assert!(!is_admissible(&g, &w("e0.e0")));
        assert!(!is_admissible(&g, &Word::empty()));
        assert!(is_admissible(&g, &w("e0.f0^-1")));
    }

    #[test]
    fn meet_examples() {
        let g = catalog::emn(2, 2);
        let a = path(&g, "f0^-1.e0");
        assert_eq!(meet(&g, &a, &a).unwrap(), a);
        assert_eq!(meet(&g, &a, &path(&g, "f1^-1.e0")).unwrap(), path(&g, "e0"));
        let m = meet(&g, &a, &path(&g, "f0^-1.e1")).unwrap();
        assert!(m.is_trivial() && m.source() == g.vertex("u").unwrap());
        assert_eq!(
            meet(&g, &a, &path(&g, "e0")).unwrap().literal(&g),
            "e0"
        );
        assert!(meet(&g, &a, &path(&g, "e0^-1")).is_err());
    }

    #[test]
    fn cycles_and_simplicity() {
        let g = catalog::emn(2, 2);
        assert!(is_cycle(&g, &path(&g, "f0^-1.e0")));
        assert!(Path::parse(&g, "e0^-1.f0.f0^-1.e0").is_err());
        assert!(is_base_simple(&g, &path(&g, "f0^-1.e0")));
        assert!(!is_base_simple(&g, &path(&g, "f1^-1.e1.f0^-1.e0")));
        assert!(is_base_simple(&g, &Path::trivial(g.vertex("u").unwrap())));
        let l = catalog::loop_graph();
        assert!(is_cycle(&l, &path(&l, "e")));
    }

    #[test]
    fn returns() {
        let g = catalog::emn(2, 2);
        let td = TransitionDigraph::new(&g);
        let mode = ReturnMode::AllowTrivial;
        assert!(allows_return(&td, &path(&g, "e0"), mode).unwrap());
        let g3 = catalog::emn(2, 3);
        let td3 = TransitionDigraph::new(&g3);
        assert!(allows_return(&td3, &path(&g3, "e0^-1"), mode).unwrap());
        let one = crate::format::parse("vertex u\nvertex w\nedge e : u -> w @ c\n").unwrap();
        let td1 = TransitionDigraph::new(&one);
        assert!(!allows_return(&td1, &path(&one, "e"), mode).unwrap());
        let u = g.vertex("u").unwrap();
        assert!(allows_return(&td, &Path::trivial(u), mode).is_err());
        // a loop is closed by itself but also extends by going round again
        let l = catalog::loop_graph();
        let tdl = TransitionDigraph::new(&l);
        for m in [ReturnMode::AllowTrivial, ReturnMode::RequireExtension] {
            assert!(allows_return(&tdl, &path(&l, "e"), m).unwrap());
        }
    }

    #[test]
    fn cycle_nodes_examples() {
        let g = catalog::emn(2, 2);
        let td = TransitionDigraph::new(&g);
        assert_eq!(td.cycle_nodes().len(), 8);
        let empty = catalog::discrete(&[]);
        assert!(TransitionDigraph::new(&empty).cycle_nodes().is_empty());
        let l = catalog::loop_graph();
        assert_eq!(TransitionDigraph::new(&l).cycle_nodes().len(), 2);
    }

    #[test]
    fn enumeration_examples() {
        let g = catalog::emn(2, 3);
        let u = g.vertex("u").unwrap();
        let ps = enumerate_paths(&g, u, 1);
        assert_eq!(ps.len(), 6);
        assert!(ps[0].is_trivial());
        let iso = catalog::discrete(&["x"]);
        assert_eq!(enumerate_paths(&iso, VertexId(0), 5).len(), 1);
        let sorted = {
            let mut v: Vec<Word> = enumerate_paths(&g, u, 4).into_iter().map(|p| p.into_word()).collect();
            let copy = v.clone();
            v.sort();
            v == copy
        };
        assert!(sorted);
        // acyclic: nothing longer than 3|E⁰| exists
        let line = crate::format::parse(
            "vertex a\nvertex b\nvertex c\nedge x : a -> b @ k\nedge y : b -> c @ k\n",
        )
        .unwrap();
        for v in line.vertices() {
            let ps = enumerate_paths(&line, v, 20);
            assert!(ps.iter().all(|p| p.len() <= 3 * line.vertex_count()));
        }
    }
}
