//! The graph monoid M(E,C) = ⟨E⁰ | v = Σ_{e∈X} s(e) for X ∈ C_v⟩ and
//! bounded decision procedures for its order and cancellation properties.
//!
//! Equality is decided by exploring the class of an element under the
//! relations, restricted to elements of total coefficient ≤ bound. A class
//! whose exploration never hits the bound is *saturated*: it is the whole
//! class, and negative answers derived from it are exact. Anything else is
//! reported as [`TriBool::Unknown`].

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::LiteralError;
use crate::graph::SeparatedGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TriBool {
    True,
    False,
    Unknown,
}

impl TriBool {
    pub fn and(self, other: TriBool) -> TriBool {
        match (self, other) {
            (TriBool::False, _) | (_, TriBool::False) => TriBool::False,
            (TriBool::True, TriBool::True) => TriBool::True,
            _ => TriBool::Unknown,
        }
    }

    pub fn or(self, other: TriBool) -> TriBool {
        match (self, other) {
            (TriBool::True, _) | (_, TriBool::True) => TriBool::True,
            (TriBool::False, TriBool::False) => TriBool::False,
            _ => TriBool::Unknown,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TriBool::True => "true",
            TriBool::False => "false",
            TriBool::Unknown => "unknown",
        }
    }
}

/// A vector of natural numbers indexed by the generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonoidElement(pub Vec<u32>);

impl MonoidElement {
    pub fn zero(rank: usize) -> Self {
        MonoidElement(vec![0; rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        MonoidElement(v)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        MonoidElement(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, n: u32) -> Self {
        MonoidElement(self.0.iter().map(|a| a * n).collect())
    }

    /// Componentwise order.
    pub fn dominated_by(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MonoidElement)
    }

    /// Generator indices with multiplicity, ascending; the order key used to
    /// rank counterexamples.
    pub fn letters(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| std::iter::repeat_n(i, c as usize))
            .collect()
    }

    /// Literal such as `2*u+v`; zero prints as `0`.
    pub fn literal(&self, names: &[String]) -> String {
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| if c == 1 { names[i].clone() } else { format!("{c}*{}", names[i]) })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    pub fn parse(names: &[String], text: &str) -> Result<Self, LiteralError> {
        let text = text.trim();
        if text.is_empty() {
            return Err(LiteralError::Empty);
        }
        let mut v = vec![0u32; names.len()];
        if text == "0" {
            return Ok(MonoidElement(v));
        }
        for term in text.split('+') {
            let term = term.trim();
            let (coeff, name) = match term.split_once('*') {
                Some((c, n)) => (
                    c.trim().parse::<u32>().map_err(|_| LiteralError::BadTerm(term.to_string()))?,
                    n.trim(),
                ),
                None => (1, term),
            };
            let i = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| LiteralError::BadTerm(term.to_string()))?;
            v[i] += coeff;
        }
        Ok(MonoidElement(v))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidPresentation {
    pub generators: Vec<String>,
    pub relations: Vec<(MonoidElement, MonoidElement)>,
}

impl MonoidPresentation {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn element(&self, text: &str) -> Result<MonoidElement, LiteralError> {
        MonoidElement::parse(&self.generators, text)
    }

    pub fn literal(&self, x: &MonoidElement) -> String {
        x.literal(&self.generators)
    }

    /// An isomorphic presentation obtained by repeatedly using a relation
    /// `x = R` with x absent from R to eliminate the generator x. Trivial
    /// relations are dropped.
    pub fn simplified(&self) -> MonoidPresentation {
        let mut gens = self.generators.clone();
        let mut rels: Vec<(MonoidElement, MonoidElement)> = self.relations.clone();
        loop {
            rels.retain(|(l, r)| l != r);
            let found = rels.iter().enumerate().find_map(|(k, (l, r))| {
                [(l, r), (r, l)].into_iter().find_map(|(x, rest)| {
                    let i = x.0.iter().position(|&c| c == 1)?;
                    (x.total() == 1 && rest.0[i] == 0).then(|| (k, i, rest.clone()))
                })
            });
            let Some((k, i, rest)) = found else { break };
            rels.remove(k);
            let subst = |e: &MonoidElement| {
                let mut out = e.clone();
                let c = out.0[i];
                out.0[i] = 0;
                let mut out = out.add(&rest.scale(c));
                out.0.remove(i);
                out
            };
            rels = rels.iter().map(|(l, r)| (subst(l), subst(r))).collect();
            gens.remove(i);
        }
        MonoidPresentation { generators: gens, relations: rels }
    }
}

impl fmt::Display for MonoidPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self
            .relations
            .iter()
            .map(|(l, r)| format!("{} = {}", self.literal(l), self.literal(r)))
            .collect();
        write!(f, "<{} | {}>", self.generators.join(", "), rels.join(", "))
    }
}

/// One relation `v = Σ_{e∈X} s(e)` per group X at v.
pub fn presentation(g: &SeparatedGraph) -> MonoidPresentation {
    let rank = g.vertex_count();
    let relations = g
        .group_ids()
        .map(|x| {
            let grp = g.group(x);
            let mut right = MonoidElement::zero(rank);
            for &e in &grp.members {
                right.0[g.source(e).index()] += 1;
            }
            (MonoidElement::unit(rank, grp.range.index()), right)
        })
        .collect();
    MonoidPresentation {
        generators: g.vertices().map(|v| g.vertex_name(v).to_string()).collect(),
        relations,
    }
}

struct Class {
    members: Vec<MonoidElement>,
    saturated: bool,
}

/// Bounded word-problem oracle. Class explorations are cached, so repeated
/// queries are cheap.
pub struct MonoidOracle<'p> {
    pres: &'p MonoidPresentation,
    bound: u32,
    classes: Vec<Class>,
    class_of: HashMap<MonoidElement, usize>,
}

impl<'p> MonoidOracle<'p> {
    pub fn new(pres: &'p MonoidPresentation, bound: u32) -> Self {
        MonoidOracle { pres, bound, classes: Vec::new(), class_of: HashMap::new() }
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    fn class(&mut self, x: &MonoidElement) -> Option<usize> {
        if x.total() > self.bound {
            return None;
        }
        if let Some(&c) = self.class_of.get(x) {
            return Some(c);
        }
        let id = self.classes.len();
        let mut members = vec![x.clone()];
        let mut saturated = true;
        self.class_of.insert(x.clone(), id);
        let mut queue = VecDeque::from([x.clone()]);
        while let Some(y) = queue.pop_front() {
            for (l, r) in &self.pres.relations {
                for (from, to) in [(l, r), (r, l)] {
                    let Some(rest) = y.checked_sub(from) else { continue };
                    let z = rest.add(to);
                    if z.total() > self.bound {
                        saturated = false;
                        continue;
                    }
                    if !self.class_of.contains_key(&z) {
                        self.class_of.insert(z.clone(), id);
                        members.push(z.clone());
                        queue.push_back(z);
                    }
                }
            }
        }
        self.classes.push(Class { members, saturated });
        Some(id)
    }

    /// The explored part of the class of `x` and whether it is complete.
    pub fn class_members(&mut self, x: &MonoidElement) -> Option<(&[MonoidElement], bool)> {
        let c = self.class(x)?;
        let cl = &self.classes[c];
        Some((&cl.members, cl.saturated))
    }

    pub fn equal(&mut self, a: &MonoidElement, b: &MonoidElement) -> TriBool {
        if a == b {
            return TriBool::True;
        }
        let (ca, cb) = (self.class(a), self.class(b));
        match (ca, cb) {
            (Some(x), Some(y)) if x == y => TriBool::True,
            _ => {
                let sat = |c: Option<usize>| c.is_some_and(|i| self.classes[i].saturated);
                if sat(ca) || sat(cb) {
                    TriBool::False
                } else {
                    TriBool::Unknown
                }
            }
        }
    }

    /// `a ≤ b` iff some representative of the class of `b` dominates `a`.
    pub fn leq(&mut self, a: &MonoidElement, b: &MonoidElement) -> TriBool {
        self.leq_witness(a, b).0
    }

    /// Also returns c with a + c = b when found.
    pub fn leq_witness(&mut self, a: &MonoidElement, b: &MonoidElement) -> (TriBool, Option<MonoidElement>) {
        if let Some(c) = b.checked_sub(a) {
            return (TriBool::True, Some(c));
        }
        let Some(id) = self.class(b) else { return (TriBool::Unknown, None) };
        let cl = &self.classes[id];
        if let Some(c) = cl.members.iter().find_map(|x| x.checked_sub(a)) {
            return (TriBool::True, Some(c));
        }
        (if cl.saturated { TriBool::False } else { TriBool::Unknown }, None)
    }

    /// Exact set of a₁ with a₁ + c ≤ c when the class of c is saturated.
    fn absorbed_by(&mut self, c: &MonoidElement) -> Option<Vec<MonoidElement>> {
        let id = self.class(c)?;
        let cl = &self.classes[id];
        if !cl.saturated {
            return None;
        }
        let mut out: Vec<MonoidElement> = Vec::new();
        for x in &cl.members {
            if let Some(top) = x.checked_sub(c) {
                for y in sub_vectors(&top) {
                    if !out.contains(&y) {
                        out.push(y);
                    }
                }
            }
        }
        Some(out)
    }
}

fn sub_vectors(top: &MonoidElement) -> Vec<MonoidElement> {
    let mut out = vec![MonoidElement(Vec::new())];
    for &t in &top.0 {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=t).map(move |k| {
                    let mut q = p.0.clone();
                    q.push(k);
                    MonoidElement(q)
                })
            })
            .collect();
    }
    out
}

pub fn equal(pres: &MonoidPresentation, a: &MonoidElement, b: &MonoidElement, bound: u32) -> TriBool {
    MonoidOracle::new(pres, bound).equal(a, b)
}

pub fn leq(pres: &MonoidPresentation, a: &MonoidElement, b: &MonoidElement, bound: u32) -> TriBool {
    MonoidOracle::new(pres, bound).leq(a, b)
}

/// Elements of total coefficient exactly `t`, ordered by their letters.
fn elements_of_total(rank: usize, t: u32) -> Vec<MonoidElement> {
    fn rec(rank: usize, i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MonoidElement>) {
        if i + 1 == rank {
            cur.push(left);
            out.push(MonoidElement(cur.clone()));
            cur.pop();
            return;
        }
        for k in (0..=left).rev() {
            cur.push(k);
            rec(rank, i + 1, left - k, cur, out);
            cur.pop();
        }
    }
    if rank == 0 {
        return if t == 0 { vec![MonoidElement(vec![])] } else { vec![] };
    }
    let mut out = Vec::new();
    rec(rank, 0, t, &mut Vec::new(), &mut out);
    out
}

/// Tuples of elements with the given total, ordered lexicographically by
/// their letter sequences.
fn tuples(rank: usize, parts: usize, total: u32) -> Vec<Vec<MonoidElement>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for t in 0..=total {
        for x in elements_of_total(rank, t) {
            for mut rest in tuples(rank, parts - 1, total - t) {
                rest.insert(0, x.clone());
                out.push(rest);
            }
        }
    }
    out.sort_by_key(|t| t.iter().map(MonoidElement::letters).collect::<Vec<_>>());
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Counterexample {
    /// n·a ≤ n·b but a ≰ b.
    Unperforation { n: u32, a: MonoidElement, b: MonoidElement },
    /// a + c ≤ b + c but no a₁ with a₁ + c ≤ c and a ≤ b + a₁.
    PseudoCancellation { a: MonoidElement, b: MonoidElement, c: MonoidElement },
    /// 2a = a + b = 2b but a ≠ b.
    Separation { a: MonoidElement, b: MonoidElement },
    /// (n+1)·a ≤ n·b but a ≰ b.
    AlmostUnperforation { n: u32, a: MonoidElement, b: MonoidElement },
}

impl Counterexample {
    pub fn describe(&self, pres: &MonoidPresentation) -> String {
        let l = |x: &MonoidElement| pres.literal(x);
        match self {
            Counterexample::Unperforation { n, a, b } => format!("n={n} a={} b={}", l(a), l(b)),
            Counterexample::PseudoCancellation { a, b, c } => format!("a={} b={} c={}", l(a), l(b), l(c)),
            Counterexample::Separation { a, b } => format!("a={} b={}", l(a), l(b)),
            Counterexample::AlmostUnperforation { n, a, b } => format!("n={n} a={} b={}", l(a), l(b)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub verdict: TriBool,
    pub counterexample: Option<Counterexample>,
}

/// Runs candidates in order; the first certified violation wins. `Unknown`
/// results make the overall verdict unknown unless a violation turns up.
fn scan<I, F>(candidates: I, mut test: F) -> CheckResult
where
    I: IntoIterator,
    F: FnMut(I::Item) -> (TriBool, Option<Counterexample>),
{
    let mut verdict = TriBool::True;
    for c in candidates {
        let (holds, cx) = test(c);
        match holds {
            TriBool::False => return CheckResult { verdict: TriBool::False, counterexample: cx },
            TriBool::Unknown => verdict = TriBool::Unknown,
            TriBool::True => {}
        }
    }
    CheckResult { verdict, counterexample: None }
}

/// Whether "hyp ⇒ concl" holds, as a TriBool.
fn implies(hyp: TriBool, concl: impl FnOnce() -> TriBool) -> TriBool {
    match hyp {
        TriBool::False => TriBool::True,
        h => match concl() {
            TriBool::True => TriBool::True,
            TriBool::False if h == TriBool::True => TriBool::False,
            _ => TriBool::Unknown,
        },
    }
}

/// n·a ≤ n·b ⇒ a ≤ b over n ≥ 2 and a, b with n·|a|, n·|b| ≤ bound,
/// ordered by (|a| + |b|, n, letters).
pub fn check_unperforation(pres: &MonoidPresentation, bound: u32) -> CheckResult {
    scaled_check(pres, bound, 0)
}

/// (n+1)·a ≤ n·b ⇒ a ≤ b over n ≥ 2.
pub fn check_almost_unperforation(pres: &MonoidPresentation, bound: u32) -> CheckResult {
    scaled_check(pres, bound, 1)
}

fn scaled_check(pres: &MonoidPresentation, bound: u32, extra: u32) -> CheckResult {
    let mut o = MonoidOracle::new(pres, bound);
    let mut cands = Vec::new();
    for t in 1..=bound {
        for n in 2..=bound {
            for ab in tuples(pres.rank(), 2, t) {
                let (a, b) = (&ab[0], &ab[1]);
                if a.is_zero() || (n + extra) * a.total() > bound || n * b.total() > bound {
                    continue;
                }
                cands.push((n, ab));
            }
        }
    }
    scan(cands, |(n, ab)| {
        let (a, b) = (&ab[0], &ab[1]);
        let hyp = o.leq(&a.scale(n + extra), &b.scale(n));
        let holds = implies(hyp, || o.leq(a, b));
        let (a, b) = (a.clone(), b.clone());
        let cx = if extra == 0 {
            Counterexample::Unperforation { n, a, b }
        } else {
            Counterexample::AlmostUnperforation { n, a, b }
        };
        (holds, Some(cx))
    })
}

/// Whether pseudo-cancellation holds for the single triple (a, b, c).
pub fn pseudo_cancellation_holds(o: &mut MonoidOracle, a: &MonoidElement, b: &MonoidElement, c: &MonoidElement) -> TriBool {
    let hyp = o.leq(&a.add(c), &b.add(c));
    implies(hyp, || {
        if o.leq(a, b) == TriBool::True {
            return TriBool::True;
        }
        match o.absorbed_by(c) {
            Some(cands) => cands
                .iter()
                .fold(TriBool::False, |acc, a1| acc.or(o.leq(a, &b.add(a1)))),
            None => TriBool::Unknown,
        }
    })
}

/// a + c ≤ b + c ⇒ ∃ a₁: a₁ + c ≤ c and a ≤ b + a₁, over non-zero a, b, c
/// with |a + c|, |b + c| ≤ bound, ordered by (|a| + |b| + |c|, letters).
pub fn check_pseudo_cancellation(pres: &MonoidPresentation, bound: u32) -> CheckResult {
    let mut o = MonoidOracle::new(pres, bound);
    let cands = (3..=2 * bound).flat_map(|t| {
        tuples(pres.rank(), 3, t).into_iter().filter(move |x| {
            x.iter().all(|e| !e.is_zero())
                && x[0].total() + x[2].total() <= bound
                && x[1].total() + x[2].total() <= bound
        })
    });
    scan(cands, |x| {
        let holds = pseudo_cancellation_holds(&mut o, &x[0], &x[1], &x[2]);
        let [a, b, c]: [MonoidElement; 3] = x.try_into().unwrap();
        (holds, Some(Counterexample::PseudoCancellation { a, b, c }))
    })
}

/// 2a = a + b = 2b ⇒ a = b over distinct a, b with 2|a|, 2|b| ≤ bound.
pub fn check_separation(pres: &MonoidPresentation, bound: u32) -> CheckResult {
    let mut o = MonoidOracle::new(pres, bound);
    let cands = (1..=bound).flat_map(|t| {
        tuples(pres.rank(), 2, t)
            .into_iter()
            .filter(move |x| x[0] != x[1] && 2 * x[0].total() <= bound && 2 * x[1].total() <= bound)
    });
    scan(cands, |x| {
        let (a, b) = (&x[0], &x[1]);
        let ab = a.add(b);
        let hyp = o.equal(&a.scale(2), &ab).and(o.equal(&ab, &b.scale(2)));
        let holds = implies(hyp, || o.equal(a, b));
        (holds, Some(Counterexample::Separation { a: a.clone(), b: b.clone() }))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Property {
    Unperforation,
    PseudoCancellation,
    Separation,
    AlmostUnperforation,
}

impl Property {
    pub const ALL: [Property; 4] = [
        Property::Unperforation,
        Property::PseudoCancellation,
        Property::Separation,
        Property::AlmostUnperforation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Unperforation => "unperforation",
            Property::PseudoCancellation => "pseudo-cancellation",
            Property::Separation => "separation",
            Property::AlmostUnperforation => "almost-unperforation",
        }
    }

    pub fn from_name(s: &str) -> Option<Property> {
        Property::ALL.into_iter().find(|p| p.name() == s)
    }

    pub fn check(self, pres: &MonoidPresentation, bound: u32) -> CheckResult {
        match self {
            Property::Unperforation => check_unperforation(pres, bound),
            Property::PseudoCancellation => check_pseudo_cancellation(pres, bound),
            Property::Separation => check_separation(pres, bound),
            Property::AlmostUnperforation => check_almost_unperforation(pres, bound),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::format::parse;

    fn two_u_two_v() -> MonoidPresentation {
        // w eliminated: ⟨u, v | 2u = 2v⟩
        MonoidPresentation {
            generators: vec!["u".into(), "v".into()],
            relations: vec![(MonoidElement(vec![2, 0]), MonoidElement(vec![0, 2]))],
        }
    }

    #[test]
    fn presentations() {
        let p = presentation(&catalog::two_squares());
        assert_eq!(p.to_string(), "<u, v, w | w = 2*v, w = 2*u>");
        assert_eq!(p.simplified().to_string(), "<u, v | 2*v = 2*u>");
        let p = presentation(&catalog::pseudo_cancellation(3, 2));
        assert_eq!(p.to_string(), "<u, v, w | w = 3*u+2*v, w = u+v>");
        let p = presentation(&catalog::discrete(&["a", "b"]));
        assert!(p.relations.is_empty());
        assert_eq!(p.element("2*a+b").unwrap(), MonoidElement(vec![2, 1]));
        assert_eq!(p.literal(&MonoidElement(vec![2, 1])), "2*a+b");
        assert!(p.element("c").is_err());
    }

    #[test]
    fn word_problem() {
        let p = two_u_two_v();
        let e = |s: &str| p.element(s).unwrap();
        assert_eq!(equal(&p, &e("2*u"), &e("2*v"), 8), TriBool::True);
        assert_eq!(equal(&p, &e("u"), &e("v"), 8), TriBool::False);
        assert_eq!(equal(&p, &e("u+v"), &e("u+v"), 8), TriBool::True);
        assert_eq!(leq(&p, &e("u"), &e("v"), 8), TriBool::False);
        assert_eq!(leq(&p, &e("u"), &e("2*v"), 8), TriBool::True);
        let pc = presentation(&catalog::pseudo_cancellation(2, 1));
        let e = |s: &str| pc.element(s).unwrap();
        assert_eq!(leq(&pc, &e("2*u"), &e("u+v"), 12), TriBool::True);
        // the class of w is infinite, so inequality can't be certified
        assert_eq!(equal(&pc, &e("w"), &e("3*w"), 12), TriBool::Unknown);
    }

    #[test]
    fn unperforation() {
        let p = presentation(&catalog::two_squares()).simplified();
        let r = check_unperforation(&p, 8);
        assert_eq!(r.verdict, TriBool::False);
        assert_eq!(r.counterexample.unwrap().describe(&p), "n=2 a=u b=v");
        assert_eq!(check_separation(&p, 8).verdict, TriBool::True);
    }

    #[test]
    fn pseudo_cancellation() {
        let p = presentation(&catalog::pseudo_cancellation(2, 1));
        let r = check_pseudo_cancellation(&p, 12);
        assert_eq!(r.verdict, TriBool::False);
        assert_eq!(r.counterexample.unwrap().describe(&p), "a=u b=v c=u");
        let p = presentation(&catalog::pseudo_cancellation(3, 2));
        let mut o = MonoidOracle::new(&p, 12);
        let e = |s: &str| p.element(s).unwrap();
        assert_eq!(pseudo_cancellation_holds(&mut o, &e("2*u"), &e("v"), &e("u")), TriBool::False);
    }

    #[test]
    fn free_monoid_passes() {
        let p = presentation(&catalog::discrete(&["a", "b"]));
        for prop in Property::ALL {
            assert_eq!(prop.check(&p, 6).verdict, TriBool::True, "{}", prop.name());
        }
        let c = presentation(&parse("vertex a\nvertex b\nedge e : a -> b @ x\n").unwrap());
        assert_eq!(check_unperforation(&c.simplified(), 8).verdict, TriBool::True);
    }
}
