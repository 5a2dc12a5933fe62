//! Finite-depth configurations of Ω(E,C) and the partial action of the free
//! group on them.
//!
//! A configuration ξ is a right-convex set of reduced words (admissible paths
//! from a base vertex) whose local configuration at every member α consists
//! of all edges leaving r(α) together with one chosen inverse per group at
//! r(α). Two representations are provided:
//!
//! * [`Pattern`]: the members of length ≤ depth, stored explicitly;
//! * [`LazyConfiguration`]: an infinite configuration whose group choices
//!   come from a seeded hash, with optional forced choices.
//!
//! Both implement [`Configuration`]; [`Translate`] realises θ_w on either.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt::Write as _;

use crate::condition_n::{check_condition_n, FailureWitness};
use crate::decomposition::cycle_classes;
use crate::error::AnalysisError;
use crate::graph::{EdgeId, GroupId, SeparatedGraph, VertexId, VertexSet};
use crate::orientation::{verify_orientation, Orientation, OrientationKind};
use crate::word::{Symbol, Word};
use crate::TransitionDigraph;

/// Membership oracle for a (possibly truncated) configuration.
pub trait Configuration {
    fn base(&self) -> VertexId;
    /// `None` for an untruncated configuration.
    fn depth(&self) -> Option<usize>;
    /// Membership of a reduced word; words beyond the depth are reported
    /// absent.
    fn contains(&self, g: &SeparatedGraph, w: &Word) -> bool;
}

/// Symbols that may follow a path ending at `at` whose last symbol is `last`.
fn candidate_steps(g: &SeparatedGraph, at: VertexId, last: Option<Symbol>) -> Vec<Symbol> {
    let mut out: Vec<Symbol> = g.out_edges(at).iter().map(|&e| Symbol::pos(e)).collect();
    out.extend(g.in_edges(at).iter().map(|&e| Symbol::neg(e)));
    out.sort();
    out.retain(|&s| last != Some(s.inv()));
    out
}

fn end_vertex(g: &SeparatedGraph, base: VertexId, w: &Word) -> VertexId {
    w.last().map_or(base, |s| s.range(g))
}

/// Order used for dumps and deterministic listings: by length, then symbols.
fn by_length(a: &Word, b: &Word) -> std::cmp::Ordering {
    (a.len(), a).cmp(&(b.len(), b))
}

// ---------------------------------------------------------------------------
// Patterns

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    base: VertexId,
    depth: usize,
    members: BTreeSet<Word>,
}

impl Pattern {
    pub fn base(&self) -> VertexId {
        self.base
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn members(&self) -> &BTreeSet<Word> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members ordered by length, then lexicographically.
    pub fn sorted_members(&self) -> Vec<&Word> {
        let mut v: Vec<&Word> = self.members.iter().collect();
        v.sort_by(|a, b| by_length(a, b));
        v
    }

    /// Vertex label v(α) = r(α).
    pub fn label(&self, g: &SeparatedGraph, w: &Word) -> VertexId {
        end_vertex(g, self.base, w)
    }

    /// Members of length ≤ `depth` of any configuration.
    pub fn truncate(g: &SeparatedGraph, c: &dyn Configuration, depth: usize) -> Result<Pattern, AnalysisError> {
        if let Some(d) = c.depth() {
            if d < depth {
                return Err(AnalysisError::DepthTooSmall { depth: d, needed: depth });
            }
        }
        let base = c.base();
        let mut members = BTreeSet::from([Word::empty()]);
        let mut stack = vec![Word::empty()];
        while let Some(a) = stack.pop() {
            if a.len() == depth {
                continue;
            }
            for s in candidate_steps(g, end_vertex(g, base, &a), a.last()) {
                let next = a.then(s);
                if c.contains(g, &next) {
                    members.insert(next.clone());
                    stack.push(next);
                }
            }
        }
        Ok(Pattern { base, depth, members })
    }

    pub fn restrict(&self, depth: usize) -> Pattern {
        let depth = depth.min(self.depth);
        Pattern {
            base: self.base,
            depth,
            members: self.members.iter().filter(|w| w.len() <= depth).cloned().collect(),
        }
    }

    /// Check membership of the trivial word, right-convexity, admissibility
    /// and the local condition at every interior member.
    pub fn validate(&self, g: &SeparatedGraph) -> Result<(), String> {
        if !self.members.contains(&Word::empty()) {
            return Err("trivial word missing".into());
        }
        if g.is_isolated(self.base) {
            return if self.members.len() == 1 {
                Ok(())
            } else {
                Err("isolated base with non-trivial members".into())
            };
        }
        for a in &self.members {
            if a.len() > self.depth {
                return Err(format!("{} exceeds depth", a.literal(g)));
            }
            if !a.is_empty() {
                if a.first().unwrap().source(g) != self.base || !crate::admissibility::is_admissible(g, a) {
                    return Err(format!("{} is not an admissible path from the base", a.literal(g)));
                }
                if !self.members.contains(&a.prefix(a.len() - 1)) {
                    return Err(format!("{} breaks right-convexity", a.literal(g)));
                }
            }
            if a.len() == self.depth {
                continue;
            }
            let v = self.label(g, a);
            let mut local: Vec<Symbol> = candidate_steps(g, v, a.last())
                .into_iter()
                .filter(|&s| self.members.contains(&a.then(s)))
                .collect();
            if let Some(t) = a.last() {
                local.push(t.inv());
            }
            let forward: BTreeSet<EdgeId> = local.iter().filter(|s| !s.inverse).map(|s| s.edge).collect();
            if forward.iter().copied().ne(g.out_edges(v).iter().copied().collect::<BTreeSet<_>>()) {
                return Err(format!("local configuration at {} misses an outgoing edge", a.literal(g)));
            }
            for &x in g.groups_at(v) {
                let n = local.iter().filter(|s| s.inverse && g.group_of(s.edge) == x).count();
                if n != 1 {
                    return Err(format!(
                        "local configuration at {} has {n} inverses from {}",
                        a.literal(g),
                        g.group_name(x)
                    ));
                }
            }
        }
        Ok(())
    }

    /// Header `pattern <base> depth <n>` followed by `<path> @ <vertex>` lines.
    pub fn dump(&self, g: &SeparatedGraph) -> String {
        let mut out = format!("pattern {} depth {}\n", g.vertex_name(self.base), self.depth);
        for w in self.sorted_members() {
            let _ = writeln!(out, "{} @ {}", w.literal(g), g.vertex_name(self.label(g, w)));
        }
        out
    }

    pub fn parse_dump(g: &SeparatedGraph, text: &str) -> Result<Pattern, AnalysisError> {
        let bad = |msg: String| AnalysisError::Precondition(msg);
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| bad("empty pattern dump".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        let ["pattern", base, "depth", depth] = parts.as_slice() else {
            return Err(bad(format!("bad header `{header}`")));
        };
        let base = g
            .vertex(base)
            .ok_or_else(|| AnalysisError::Graph(crate::GraphError::UnknownVertex(base.to_string())))?;
        let depth: usize = depth.parse().map_err(|_| bad(format!("bad depth `{depth}`")))?;
        let mut members = BTreeSet::new();
        for line in lines {
            let (lit, v) = line
                .split_once('@')
                .ok_or_else(|| bad(format!("bad member line `{line}`")))?;
            let w = Word::parse(g, lit).map_err(|e| bad(e.to_string()))?;
            if g.vertex(v.trim()) != Some(end_vertex(g, base, &w)) {
                return Err(bad(format!("wrong vertex label in `{line}`")));
            }
            members.insert(w);
        }
        Ok(Pattern { base, depth, members })
    }
}

impl Configuration for Pattern {
    fn base(&self) -> VertexId {
        self.base
    }

    fn depth(&self) -> Option<usize> {
        Some(self.depth)
    }

    fn contains(&self, _g: &SeparatedGraph, w: &Word) -> bool {
        self.members.contains(w)
    }
}

/// All depth-`depth` patterns at `v`, in a fixed order: members are expanded
/// breadth first and each group choice runs through its edges in order.
pub fn enumerate_patterns(g: &SeparatedGraph, v: VertexId, depth: usize) -> Result<Vec<Pattern>, AnalysisError> {
    if v.index() >= g.vertex_count() {
        return Err(AnalysisError::Graph(crate::GraphError::UnknownVertex(format!("#{}", v.0))));
    }
    let mut out = Vec::new();
    let members = BTreeSet::from([Word::empty()]);
    let queue = if g.is_isolated(v) { VecDeque::new() } else { VecDeque::from([Word::empty()]) };
    expand(g, v, depth, members, queue, &mut out);
    Ok(out)
}

fn expand(
    g: &SeparatedGraph,
    base: VertexId,
    depth: usize,
    mut members: BTreeSet<Word>,
    mut queue: VecDeque<Word>,
    out: &mut Vec<Pattern>,
) {
    let Some(a) = queue.pop_front() else {
        out.push(Pattern { base, depth, members });
        return;
    };
    if a.len() == depth {
        return expand(g, base, depth, members, queue, out);
    }
    let v = end_vertex(g, base, &a);
    let last = a.last();
    for &e in g.out_edges(v) {
        if last != Some(Symbol::neg(e)) {
            let next = a.then(Symbol::pos(e));
            members.insert(next.clone());
            queue.push_back(next);
        }
    }
    let slots: Vec<GroupId> = g
        .groups_at(v)
        .iter()
        .copied()
        .filter(|&x| !matches!(last, Some(s) if !s.inverse && g.group_of(s.edge) == x))
        .collect();
    choose(g, base, depth, &a, &slots, members, queue, out);
}

#[allow(clippy::too_many_arguments)]
fn choose(
    g: &SeparatedGraph,
    base: VertexId,
    depth: usize,
    a: &Word,
    slots: &[GroupId],
    members: BTreeSet<Word>,
    queue: VecDeque<Word>,
    out: &mut Vec<Pattern>,
) {
    let Some((&x, rest)) = slots.split_first() else {
        return expand(g, base, depth, members, queue, out);
    };
    for &e in &g.group(x).members {
        let next = a.then(Symbol::neg(e));
        let mut m = members.clone();
        let mut q = queue.clone();
        m.insert(next.clone());
        q.push_back(next);
        choose(g, base, depth, a, rest, m, q, out);
    }
}

// ---------------------------------------------------------------------------
// Lazy configurations

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// An untruncated configuration. The inverse chosen from group X after the
/// member α is `forced[(α, X)]` when present, otherwise determined by a hash
/// of (seed, α, X).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LazyConfiguration {
    base: VertexId,
    seed: u64,
    forced: BTreeMap<(Word, GroupId), EdgeId>,
}

impl LazyConfiguration {
    pub fn new(base: VertexId, seed: u64) -> Self {
        LazyConfiguration { base, seed, forced: BTreeMap::new() }
    }

    /// A configuration at `base` containing every word of `required`.
    /// Fails when some word is not an admissible path from `base` or two
    /// words demand different choices at the same place.
    pub fn containing(
        g: &SeparatedGraph,
        base: VertexId,
        seed: u64,
        required: &[Word],
    ) -> Result<Self, AnalysisError> {
        let mut forced = BTreeMap::new();
        for w in required {
            if g.is_isolated(base) && !w.is_empty() {
                return Err(AnalysisError::NotAdmissible);
            }
            let mut at = base;
            let mut last: Option<Symbol> = None;
            for (i, &s) in w.symbols().iter().enumerate() {
                if !candidate_steps(g, at, last).contains(&s) {
                    return Err(AnalysisError::NotAdmissible);
                }
                if s.inverse {
                    let x = g.group_of(s.edge);
                    if matches!(last, Some(p) if !p.inverse && g.group_of(p.edge) == x) {
                        return Err(AnalysisError::NotAdmissible);
                    }
                    match forced.insert((w.prefix(i), x), s.edge) {
                        Some(old) if old != s.edge => return Err(AnalysisError::Inconsistent),
                        _ => {}
                    }
                }
                at = s.range(g);
                last = Some(s);
            }
        }
        Ok(LazyConfiguration { base, seed, forced })
    }

    fn choice(&self, g: &SeparatedGraph, prefix: &[Symbol], h: u64, x: GroupId) -> EdgeId {
        if !self.forced.is_empty() {
            if let Some(&e) = self.forced.get(&(Word(prefix.to_vec()), x)) {
                return e;
            }
        }
        let members = &g.group(x).members;
        let k = splitmix(h ^ (x.index() as u64).wrapping_mul(0x2545_f491_4f6c_dd1d));
        members[(k % members.len() as u64) as usize]
    }
}

impl Configuration for LazyConfiguration {
    fn base(&self) -> VertexId {
        self.base
    }

    fn depth(&self) -> Option<usize> {
        None
    }

    fn contains(&self, g: &SeparatedGraph, w: &Word) -> bool {
        if g.is_isolated(self.base) {
            return w.is_empty();
        }
        let mut at = self.base;
        let mut last: Option<Symbol> = None;
        let mut h = splitmix(self.seed);
        let syms = w.symbols();
        for (i, &s) in syms.iter().enumerate() {
            if s.source(g) != at || last == Some(s.inv()) {
                return false;
            }
            if s.inverse {
                let x = g.group_of(s.edge);
                if matches!(last, Some(p) if !p.inverse && g.group_of(p.edge) == x) {
                    return false;
                }
                if self.choice(g, &syms[..i], h, x) != s.edge {
                    return false;
                }
            }
            h = splitmix(h ^ (s.index() as u64 + 1));
            at = s.range(g);
            last = Some(s);
        }
        true
    }
}

// ---------------------------------------------------------------------------
// The partial action

/// θ_w(ξ) = ξ·w⁻¹ for ξ in the domain of θ_w, i.e. `w ∈ ξ`.
pub struct Translate<'a> {
    inner: &'a dyn Configuration,
    shift: Word,
    base: VertexId,
    depth: Option<usize>,
}

impl<'a> Translate<'a> {
    pub fn new(g: &SeparatedGraph, inner: &'a dyn Configuration, w: &Word) -> Result<Self, AnalysisError> {
        check_domain(g, inner, w)?;
        Ok(Translate {
            inner,
            shift: w.clone(),
            base: end_vertex(g, inner.base(), w),
            depth: inner.depth().map(|d| d - w.len()),
        })
    }
}

fn check_domain(g: &SeparatedGraph, c: &dyn Configuration, w: &Word) -> Result<(), AnalysisError> {
    if let Some(d) = c.depth() {
        if w.len() > d {
            return Err(AnalysisError::DepthTooSmall { depth: d, needed: w.len() });
        }
    }
    if !w.is_reduced() || !c.contains(g, w) {
        return Err(AnalysisError::OutOfDomain);
    }
    Ok(())
}

impl Configuration for Translate<'_> {
    fn base(&self) -> VertexId {
        self.base
    }

    fn depth(&self) -> Option<usize> {
        self.depth
    }

    fn contains(&self, g: &SeparatedGraph, w: &Word) -> bool {
        if !w.is_reduced() || self.depth.is_some_and(|d| w.len() > d) {
            return false;
        }
        self.inner.contains(g, &(w * &self.shift))
    }
}

/// θ_w on a pattern; the result has depth `depth − |w|` and base r(w).
pub fn act(g: &SeparatedGraph, p: &Pattern, w: &Word) -> Result<Pattern, AnalysisError> {
    check_domain(g, p, w)?;
    let depth = p.depth - w.len();
    let wi = w.inverse();
    let members = p
        .members
        .iter()
        .map(|m| m * &wi)
        .filter(|m| m.len() <= depth)
        .collect();
    Ok(Pattern { base: end_vertex(g, p.base, w), depth, members })
}

/// Whether the domain of θ_w is non-empty, decided by trying to build a
/// configuration that contains w⁻¹.
pub fn domain_nonempty(g: &SeparatedGraph, w: &Word) -> bool {
    let Some(last) = w.last() else { return true };
    if !w.is_reduced() {
        return false;
    }
    LazyConfiguration::containing(g, last.range(g), 0, &[w.inverse()]).is_ok()
}

// ---------------------------------------------------------------------------
// Animals

/// A finite right-convex set of words strictly containing {1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Animal {
    base: VertexId,
    members: BTreeSet<Word>,
}

impl Animal {
    /// ⟨S⟩, the right-convex closure of S ∪ {1}, provided α·β⁻¹ is admissible
    /// for all distinct α, β in S ∪ {1}.
    pub fn closure(g: &SeparatedGraph, s: &[Word]) -> Result<Animal, AnalysisError> {
        let mut all: BTreeSet<Word> = s.iter().map(Word::reduced).collect();
        all.insert(Word::empty());
        if all.len() < 2 {
            return Err(AnalysisError::Precondition("an animal needs a non-trivial member".into()));
        }
        let list: Vec<&Word> = all.iter().collect();
        for (i, a) in list.iter().enumerate() {
            for b in &list[i + 1..] {
                let q = *b * &a.inverse();
                if !crate::admissibility::is_admissible(g, &q) {
                    return Err(AnalysisError::NotAdmissible);
                }
            }
        }
        let base = list[1].first().unwrap().source(g);
        let members = all
            .iter()
            .flat_map(|w| (0..=w.len()).map(move |k| w.prefix(k)))
            .collect();
        Ok(Animal { base, members })
    }

    pub fn base(&self) -> VertexId {
        self.base
    }

    pub fn members(&self) -> &BTreeSet<Word> {
        &self.members
    }

    pub fn is_right_convex(&self) -> bool {
        self.members
            .iter()
            .all(|w| w.is_empty() || self.members.contains(&w.prefix(w.len() - 1)))
    }

    /// A configuration in Ω(E,C)_ω.
    pub fn configuration(&self, g: &SeparatedGraph, seed: u64) -> Result<LazyConfiguration, AnalysisError> {
        let req: Vec<Word> = self.members.iter().cloned().collect();
        LazyConfiguration::containing(g, self.base, seed, &req)
    }
}

// ---------------------------------------------------------------------------
// Følner sets for properly oriented graphs

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FolnerOptions {
    /// Count the trivial word as ξ₀ ∈ F_n.
    pub include_identity: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FolnerSet {
    pub n: usize,
    pub members: Vec<Word>,
}

fn require_proper(g: &SeparatedGraph, o: &Orientation) -> Result<(), AnalysisError> {
    let kind = verify_orientation(g, o).kind;
    if kind != OrientationKind::Proper {
        return Err(AnalysisError::BadOrientation(kind.name().into()));
    }
    Ok(())
}

fn folner_unchecked(
    g: &SeparatedGraph,
    o: &Orientation,
    c: &dyn Configuration,
    n: usize,
    opts: FolnerOptions,
) -> Result<FolnerSet, AnalysisError> {
    if let Some(d) = c.depth() {
        if d < n {
            return Err(AnalysisError::DepthTooSmall { depth: d, needed: n });
        }
    }
    let mut members = Vec::with_capacity(n + 1);
    if opts.include_identity {
        members.push(Word::empty());
    }
    let mut cur = Word::empty();
    for _ in 0..n {
        let at = end_vertex(g, c.base(), &cur);
        let next: Vec<Symbol> = candidate_steps(g, at, cur.last())
            .into_iter()
            .filter(|&s| o.is_positive(s) && c.contains(g, &cur.then(s)))
            .collect();
        let [s] = next.as_slice() else {
            return Err(AnalysisError::Internal(format!(
                "{} positive extensions after {}",
                next.len(),
                cur.literal(g)
            )));
        };
        cur = cur.then(*s);
        members.push(cur.clone());
    }
    Ok(FolnerSet { n, members })
}

/// F_n^ξ: the positively oriented members ξ₁, …, ξ_n.
pub fn folner_set(
    g: &SeparatedGraph,
    o: &Orientation,
    c: &dyn Configuration,
    n: usize,
    opts: FolnerOptions,
) -> Result<FolnerSet, AnalysisError> {
    require_proper(g, o)?;
    folner_unchecked(g, o, c, n, opts)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FolnerRatio {
    /// |F_n^ξ · w⁻¹ ∖ F_n^{θ_w(ξ)}|
    pub defect: usize,
    pub size: usize,
    pub ratio: f64,
}

struct FolnerPair {
    here: Vec<Word>,
    there: Vec<Word>,
    w: Word,
}

impl FolnerPair {
    fn compute(
        g: &SeparatedGraph,
        o: &Orientation,
        c: &dyn Configuration,
        n: usize,
        w: &Word,
        opts: FolnerOptions,
    ) -> Result<Self, AnalysisError> {
        require_proper(g, o)?;
        let moved = Translate::new(g, c, w)?;
        Ok(FolnerPair {
            here: folner_unchecked(g, o, c, n, opts)?.members,
            there: folner_unchecked(g, o, &moved, n, opts)?.members,
            w: w.clone(),
        })
    }

    /// (|F·w⁻¹ ∖ F'|, |F'·w ∖ F|).
    fn defects(&self) -> (usize, usize) {
        let wi = self.w.inverse();
        let there: HashSet<&Word> = self.there.iter().collect();
        let here: HashSet<&Word> = self.here.iter().collect();
        let d1 = self.here.iter().filter(|f| !there.contains(&(*f * &wi))).count();
        let d2 = self.there.iter().filter(|f| !here.contains(&(*f * &self.w))).count();
        (d1, d2)
    }
}

pub fn folner_ratio(
    g: &SeparatedGraph,
    o: &Orientation,
    c: &dyn Configuration,
    n: usize,
    w: &Word,
    opts: FolnerOptions,
) -> Result<FolnerRatio, AnalysisError> {
    let pair = FolnerPair::compute(g, o, c, n, w, opts)?;
    let (defect, _) = pair.defects();
    let size = pair.here.len();
    Ok(FolnerRatio { defect, size, ratio: defect as f64 / size as f64 })
}

/// ℓ¹ distance between the translated uniform mean on F_n^ξ and the uniform
/// mean on F_n^{θ_w(ξ)}, and the bound 2·r₁ + 2·r₂ by the two Følner ratios.
pub fn folner_mean_check(
    g: &SeparatedGraph,
    o: &Orientation,
    c: &dyn Configuration,
    n: usize,
    w: &Word,
    opts: FolnerOptions,
) -> Result<(f64, f64), AnalysisError> {
    let pair = FolnerPair::compute(g, o, c, n, w, opts)?;
    let wi = w.inverse();
    let a = 1.0 / pair.here.len() as f64;
    let b = 1.0 / pair.there.len() as f64;
    let mut mass: BTreeMap<Word, (f64, f64)> = BTreeMap::new();
    for f in &pair.here {
        mass.entry(f * &wi).or_default().0 += a;
    }
    for f in &pair.there {
        mass.entry(f.clone()).or_default().1 += b;
    }
    let lhs = mass.values().map(|(x, y)| (x - y).abs()).sum();
    let (d1, d2) = pair.defects();
    let rhs = 2.0 * d1 as f64 * a + 2.0 * d2 as f64 * b;
    Ok((lhs, rhs))
}

// ---------------------------------------------------------------------------
// Stabilizer witnesses

#[derive(Debug, Clone)]
pub struct StabilizerWitness {
    pub pattern: Pattern,
    /// The pattern satisfies every configuration axiom up to its depth.
    pub valid: bool,
    /// θ_α, θ_β and their inverses fix the pattern on the common depth.
    pub fixed: bool,
    /// Reduced {α,β}-words of length ≤ 3 are pairwise distinct.
    pub free: bool,
    pub problems: Vec<String>,
}

impl StabilizerWitness {
    pub fn verified(&self) -> bool {
        self.valid && self.fixed && self.free
    }
}

/// Generator letters α, α⁻¹, β, β⁻¹ as indices 0..4; `i ^ 1` inverts.
fn letters(fw: &FailureWitness) -> [Word; 4] {
    let a = fw.alpha.word().clone();
    let b = fw.beta.word().clone();
    [a.clone(), a.inverse(), b.clone(), b.inverse()]
}

/// Elements of ⟨α, β⟩ given by reduced letter sequences, expanded breadth
/// first while the edge length stays within `keep + slack`.
fn subgroup_ball(gens: &[Word; 4], keep: usize, slack: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::from([Word::empty()]);
    let mut frontier: Vec<(Word, Option<usize>)> = vec![(Word::empty(), None)];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (w, last) in frontier {
            for (i, gen) in gens.iter().enumerate() {
                if last == Some(i ^ 1) {
                    continue;
                }
                // σ·g with g applied first: g is the new rightmost letter.
                let p = &w * gen;
                if p.len() <= keep + slack {
                    if p.len() <= keep {
                        out.insert(p.clone());
                    }
                    next.push((p, Some(i)));
                }
            }
        }
        frontier = next;
    }
    out
}

/// Truncation of a configuration fixed by ⟨α, β⟩, built as ⊔_σ χ·σ.
pub fn stabilizer_witness(
    g: &SeparatedGraph,
    fw: &FailureWitness,
    depth: usize,
) -> Result<StabilizerWitness, AnalysisError> {
    let (a, b) = (fw.alpha.word(), fw.beta.word());
    let l = a.len().max(b.len());
    if depth < l {
        return Err(AnalysisError::DepthTooSmall { depth, needed: l });
    }
    let v = fw.vertex;
    let stops = [
        a.clone(),
        b.clone(),
        Word::single(a.last().ok_or(AnalysisError::TrivialPath)?.inv()),
        Word::single(b.last().ok_or(AnalysisError::TrivialPath)?.inv()),
    ];
    let eta = LazyConfiguration::containing(g, v, 0, &stops)?;
    let eta = Pattern::truncate(g, &eta, depth + l)?;
    let chi: Vec<&Word> = eta
        .members
        .iter()
        .filter(|c| !stops.iter().any(|s| c.starts_with(s)))
        .collect();
    let gens = letters(fw);
    let sigmas = subgroup_ball(&gens, depth + l, 2 * l);
    let mut members = BTreeSet::new();
    for s in &sigmas {
        for c in &chi {
            if c.len() > depth + s.len() {
                continue;
            }
            let m = *c * s;
            if m.len() <= depth {
                members.insert(m);
            }
        }
    }
    let pattern = Pattern { base: v, depth, members };
    let mut problems = Vec::new();
    let valid = match pattern.validate(g) {
        Ok(()) => true,
        Err(e) => {
            problems.push(e);
            false
        }
    };
    let mut fixed = true;
    for (i, gen) in gens.iter().enumerate() {
        let moved = act(g, &pattern, gen)?;
        if moved.base != v || moved.members != pattern.restrict(moved.depth).members {
            fixed = false;
            problems.push(format!("generator {i} moves the pattern"));
        }
    }
    let mut seen = HashSet::new();
    let mut free = true;
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    for len in 1..=3 {
        let prev: Vec<Vec<usize>> = words.iter().filter(|w| w.len() == len - 1).cloned().collect();
        for w in prev {
            for i in 0..4 {
                if w.last().is_some_and(|&j| j == i ^ 1) {
                    continue;
                }
                let mut x = w.clone();
                x.push(i);
                words.push(x);
            }
        }
    }
    for w in &words {
        let elem = w.iter().fold(Word::empty(), |acc, &i| &acc * &gens[i]);
        if !seen.insert(elem) {
            free = false;
            problems.push(format!("letter sequence {w:?} repeats an element"));
        }
    }
    Ok(StabilizerWitness { pattern, valid, fixed, free, problems })
}

// ---------------------------------------------------------------------------
// Linear Følner sets on branch-free strata

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFolner {
    /// Members of the pattern ending in a vertex that admits a cycle.
    pub members: Vec<Word>,
    /// Radius within which linearity was checked: depth − 3·|E⁰|.
    pub window: usize,
    /// The convex hull of the members inside the window is a path.
    pub linear: bool,
    /// Length of the shortest member.
    pub distance: Option<usize>,
}

/// F^ξ = {α ∈ ξ | r(α) ∈ V} for a branch-free graph with at most one cycle
/// class V.
pub fn linear_folner(g: &SeparatedGraph, p: &Pattern) -> Result<LinearFolner, AnalysisError> {
    let report = check_condition_n(g)?;
    if let Some(r) = report.branching().next() {
        return Err(AnalysisError::HasBranchingVertex(g.vertex_name(r.vertex).to_string()));
    }
    let td = TransitionDigraph::new(g);
    let classes = cycle_classes(g, &td);
    if classes.len() > 1 {
        return Err(AnalysisError::Precondition(format!("{} cycle classes", classes.len())));
    }
    let cyclic: VertexSet = classes.into_iter().flatten().collect();
    let mut members: Vec<Word> = p
        .members
        .iter()
        .filter(|w| cyclic.contains(&p.label(g, w)))
        .cloned()
        .collect();
    members.sort_by(by_length);
    let window = p.depth.saturating_sub(3 * g.vertex_count());
    let inner: Vec<&Word> = members.iter().filter(|w| w.len() <= window).collect();
    let linear = hull_is_path(&inner);
    Ok(LinearFolner { distance: members.first().map(Word::len), members, window, linear })
}

/// Whether the subtree spanned by `set` in the Cayley tree has maximal
/// degree ≤ 2.
fn hull_is_path(set: &[&Word]) -> bool {
    let Some(first) = set.first() else { return true };
    let meet = set.iter().map(|w| w.common_prefix_len(first)).min().unwrap_or(0);
    let root = first.prefix(meet);
    let hull: BTreeSet<Word> = set
        .iter()
        .flat_map(|w| (meet..=w.len()).map(move |k| w.prefix(k)))
        .collect();
    hull.iter().all(|x| {
        let children = hull
            .range(x.clone()..)
            .filter(|y| y.len() == x.len() + 1 && y.starts_with(x))
            .count();
        let parent = usize::from(*x != root);
        children + parent <= 2
    })
}
