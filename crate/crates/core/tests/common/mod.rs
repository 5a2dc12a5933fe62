//! Brute-force oracle and random test corpus.
//!
//! Everything here works from the definitions by explicit path enumeration,
//! without the transition digraph used by the library.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sepgraph::condition_n::{port, Port};
use sepgraph::{catalog, EdgeId, SeparatedGraph, Symbol, VertexId, Word};

/// Admissibility of the step `prev` → `next`, straight from the definition:
/// symbols must connect, the word must stay reduced, and e⁻¹ may not follow
/// f when [e] = [f].
pub fn step_ok(g: &SeparatedGraph, prev: Symbol, next: Symbol) -> bool {
    let end = |s: Symbol| if s.inverse { g.source(s.edge) } else { g.range(s.edge) };
    let start = |s: Symbol| if s.inverse { g.range(s.edge) } else { g.source(s.edge) };
    if end(prev) != start(next) || next == prev.inv() {
        return false;
    }
    !(!prev.inverse && next.inverse && g.group_of(prev.edge) == g.group_of(next.edge))
}

pub fn symbols_from(g: &SeparatedGraph, v: VertexId) -> Vec<Symbol> {
    let mut out: Vec<Symbol> = Vec::new();
    for e in g.edge_ids() {
        if g.source(e) == v {
            out.push(Symbol::pos(e));
        }
        if g.range(e) == v {
            out.push(Symbol::neg(e));
        }
    }
    out.sort();
    out
}

/// Depth-first enumeration of admissible non-trivial paths from `from` of
/// length ≤ `max_len`. The callback sees the word, its end vertex and the
/// bitmask of visited vertices.
pub fn for_each_path(
    g: &SeparatedGraph,
    from: VertexId,
    max_len: usize,
    f: &mut dyn FnMut(&[Symbol], VertexId, u64),
) {
    fn go(
        g: &SeparatedGraph,
        word: &mut Vec<Symbol>,
        at: VertexId,
        mask: u64,
        max_len: usize,
        f: &mut dyn FnMut(&[Symbol], VertexId, u64),
    ) {
        if word.len() == max_len {
            return;
        }
        for s in symbols_from(g, at) {
            if word.last().is_some_and(|&p| !step_ok(g, p, s)) {
                continue;
            }
            let next = if s.inverse { g.source(s.edge) } else { g.range(s.edge) };
            word.push(s);
            let m = mask | 1 << next.index();
            f(word, next, m);
            go(g, word, next, m, max_len, f);
            word.pop();
        }
    }
    go(g, &mut Vec::new(), from, 1 << from.index(), max_len, f);
}

/// Number of admissible paths of length ≤ `max_len` from every vertex,
/// counted by dynamic programming over (last symbol) states; used only to
/// keep enumerations affordable.
pub fn path_count(g: &SeparatedGraph, max_len: usize) -> u128 {
    let syms: Vec<Symbol> = g.edge_ids().flat_map(|e| [Symbol::pos(e), Symbol::neg(e)]).collect();
    let start = |s: Symbol| if s.inverse { g.range(s.edge) } else { g.source(s.edge) };
    let mut cur: HashMap<Symbol, u128> = syms.iter().map(|&s| (s, 1)).collect();
    let mut total = g.vertex_count() as u128 + cur.len() as u128;
    for _ in 1..max_len {
        let mut next: HashMap<Symbol, u128> = HashMap::new();
        for (&p, &c) in &cur {
            for &s in &syms {
                if start(s) == if p.inverse { g.source(p.edge) } else { g.range(p.edge) } && step_ok(g, p, s) {
                    *next.entry(s).or_default() += c;
                }
            }
        }
        total += next.values().sum::<u128>();
        if total > 1 << 40 {
            return total;
        }
        cur = next;
    }
    total
}

/// Everything the oracle learns from one enumeration per start vertex.
pub struct Oracle {
    pub max_len: usize,
    /// Closed paths at v keyed by (first symbol, last symbol), with the
    /// least (length, word).
    pub closed: Vec<BTreeMap<(Symbol, Symbol), Word>>,
    /// Last symbols of non-trivial paths u → v.
    pub last_into: Vec<Vec<BTreeSet<Symbol>>>,
    /// Paths of length ≤ `probe` that are themselves closed, or are proper
    /// prefixes of a closed path.
    pub closes: Vec<HashSet<Word>>,
    pub extends_to_closed: Vec<HashSet<Word>>,
    /// (end vertex, visited mask) for paths from u.
    pub reach_masks: Vec<HashSet<(VertexId, u64)>>,
}

pub const PROBE: usize = 3;

impl Oracle {
    pub fn new(g: &SeparatedGraph) -> Oracle {
        let n = g.vertex_count();
        let max_len = 6 * n;
        let mut o = Oracle {
            max_len,
            closed: vec![BTreeMap::new(); n],
            last_into: vec![vec![BTreeSet::new(); n]; n],
            closes: vec![HashSet::new(); n],
            extends_to_closed: vec![HashSet::new(); n],
            reach_masks: vec![HashSet::new(); n],
        };
        for u in g.vertices() {
            let ui = u.index();
            let mut closed: BTreeMap<(Symbol, Symbol), Word> = BTreeMap::new();
            let mut last_into = vec![BTreeSet::new(); n];
            let mut closes = HashSet::new();
            let mut ext = HashSet::new();
            let mut masks = HashSet::new();
            for_each_path(g, u, max_len, &mut |w, end, mask| {
                last_into[end.index()].insert(*w.last().unwrap());
                masks.insert((end, mask));
                if end == u {
                    let key = (w[0], *w.last().unwrap());
                    let word = Word(w.to_vec());
                    let better = match closed.get(&key) {
                        None => true,
                        Some(old) => (word.len(), &word) < (old.len(), old),
                    };
                    if better {
                        closed.insert(key, word);
                    }
                    if w.len() <= PROBE {
                        closes.insert(Word(w.to_vec()));
                    }
                    for k in 1..w.len().min(PROBE + 1) {
                        ext.insert(Word(w[..k].to_vec()));
                    }
                }
            });
            o.closed[ui] = closed;
            o.last_into[ui] = last_into;
            o.closes[ui] = closes;
            o.extends_to_closed[ui] = ext;
            o.reach_masks[ui] = masks;
        }
        o
    }

    /// Cycles at v, as (first, last) pairs.
    pub fn cycle_ends(&self, g: &SeparatedGraph, v: VertexId) -> Vec<(Symbol, Symbol)> {
        self.closed[v.index()]
            .keys()
            .filter(|(a, b)| step_ok(g, *b, *a))
            .copied()
            .collect()
    }

    pub fn allows_return(&self, p: &Word, base: VertexId, allow_trivial: bool) -> bool {
        let b = base.index();
        self.extends_to_closed[b].contains(p) || (allow_trivial && self.closes[b].contains(p))
    }

    /// u ⊸ v: an admissible α: u → v and a cycle β at v with α⁻¹βα admissible.
    pub fn hooks(&self, g: &SeparatedGraph, u: VertexId, v: VertexId) -> bool {
        let cycles = self.cycle_ends(g, v);
        if u == v && !cycles.is_empty() {
            return true;
        }
        self.last_into[u.index()][v.index()].iter().any(|&t| {
            cycles
                .iter()
                .any(|&(first, last)| step_ok(g, t, first) && step_ok(g, last, t.inv()))
        })
    }

    /// Port pairs of closed paths at v with their least witnesses.
    pub fn realizable(&self, g: &SeparatedGraph, v: VertexId) -> BTreeMap<(Port, Port), Word> {
        let mut out: BTreeMap<(Port, Port), Word> = BTreeMap::new();
        for (&(a, b), w) in &self.closed[v.index()] {
            let key = (port(g, a), port(g, b.inv()));
            let better = match out.get(&key) {
                None => true,
                Some(old) => (w.len(), w) < (old.len(), old),
            };
            if better {
                out.insert(key, w.clone());
            }
        }
        out
    }

    /// Whether some admissible path with both ends in `h` leaves `h`.
    pub fn return_free(&self, h: u64) -> bool {
        (0..self.reach_masks.len()).filter(|u| h >> u & 1 == 1).all(|u| {
            self.reach_masks[u]
                .iter()
                .all(|&(end, mask)| h >> end.index() & 1 == 0 || mask & !h == 0)
        })
    }
}

pub fn mask_of(set: &BTreeSet<VertexId>) -> u64 {
    set.iter().fold(0, |m, v| m | 1 << v.index())
}

pub fn set_of(g: &SeparatedGraph, mask: u64) -> BTreeSet<VertexId> {
    g.vertices().filter(|v| mask >> v.index() & 1 == 1).collect()
}

pub fn random_graph(rng: &mut ChaCha8Rng, max_vertices: usize, max_edges: usize) -> SeparatedGraph {
    let n = rng.gen_range(1..=max_vertices);
    let m = rng.gen_range(1..=max_edges);
    let labels = ["a", "b", "c"];
    let mut text = String::new();
    for i in 0..n {
        text.push_str(&format!("vertex v{i}\n"));
    }
    for j in 0..m {
        let s = rng.gen_range(0..n);
        let r = rng.gen_range(0..n);
        let l = labels[rng.gen_range(0..labels.len())];
        text.push_str(&format!("edge x{j:02} : v{s} -> v{r} @ {l}\n"));
    }
    sepgraph::format::parse(&text).expect("generated graph")
}

pub const BUDGET: u128 = 400_000;

/// Named graphs with ≤ 6 vertices and ≤ 12 edges whose brute-force
/// enumeration to length 6·|E⁰| fits the budget: a few hand-picked ones
/// followed by seeded random graphs.
pub fn corpus(size: usize) -> Vec<(String, SeparatedGraph)> {
    let mut out: Vec<(String, SeparatedGraph)> = vec![
        ("loop".into(), catalog::loop_graph()),
        ("cycle3".into(), catalog::cycle(3)),
        ("double_loop".into(), catalog::double_loop()),
        ("two_squares".into(), catalog::two_squares()),
        ("E(2,2)".into(), catalog::emn(2, 2)),
        ("E(2,3)".into(), catalog::emn(2, 3)),
        ("pseudo(2,1)".into(), catalog::pseudo_cancellation(2, 1)),
    ];
    out.retain(|(_, g)| path_count(g, 6 * g.vertex_count()) <= BUDGET);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e9a_2a7e);
    let mut tries = 0;
    while out.len() < size && tries < 200_000 {
        tries += 1;
        let g = random_graph(&mut rng, 6, 12);
        if g.edge_count() == 0 || path_count(&g, 6 * g.vertex_count()) > BUDGET {
            continue;
        }
        out.push((format!("random#{tries}"), g));
    }
    out
}

/// All symbol sequences of length ≤ `max_len` (reduced or not).
pub fn all_words(g: &SeparatedGraph, max_len: usize) -> Vec<Word> {
    let syms: Vec<Symbol> = g.edge_ids().flat_map(|e| [Symbol::pos(e), Symbol::neg(e)]).collect();
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &s in &syms {
                next.push(w.then(s));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub fn edge_named(g: &SeparatedGraph, name: &str) -> EdgeId {
    g.edge_id(name).unwrap()
}
