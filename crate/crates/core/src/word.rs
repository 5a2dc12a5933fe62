//! Symbols of the double graph and words in the free group on the edges.
//!
//! A word stores its symbols in application order: index 0 is applied
//! first. The literal `f^-1.e` is written right to left, so it parses to
//! `[e, f^-1]`.

use std::fmt;
use std::ops::Mul;

use serde::Serialize;

use crate::error::{GraphError, LiteralError};
use crate::graph::{EdgeId, SeparatedGraph, VertexId};

/// An edge `e` or its formal inverse `e⁻¹`. Ordered by edge, then `e < e⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Symbol {
    pub edge: EdgeId,
    pub inverse: bool,
}

impl Symbol {
    pub fn pos(edge: EdgeId) -> Self {
        Symbol { edge, inverse: false }
    }

    pub fn neg(edge: EdgeId) -> Self {
        Symbol { edge, inverse: true }
    }

    /// `sign` is +1 or -1.
    pub fn with_sign(edge: EdgeId, sign: i8) -> Self {
        Symbol { edge, inverse: sign < 0 }
    }

    pub fn sign(self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inv(self) -> Self {
        Symbol { edge: self.edge, inverse: !self.inverse }
    }

    /// Dense index `2·edge + inverse`, matching the symbol order.
    pub fn index(self) -> usize {
        2 * self.edge.index() + self.inverse as usize
    }

    pub fn from_index(i: usize) -> Self {
        Symbol { edge: EdgeId((i / 2) as u32), inverse: i % 2 == 1 }
    }

    pub fn source(self, g: &SeparatedGraph) -> VertexId {
        if self.inverse {
            g.range(self.edge)
        } else {
            g.source(self.edge)
        }
    }

    pub fn range(self, g: &SeparatedGraph) -> VertexId {
        if self.inverse {
            g.source(self.edge)
        } else {
            g.range(self.edge)
        }
    }

    pub fn literal(self, g: &SeparatedGraph) -> String {
        if self.inverse {
            format!("{}^-1", g.edge_name(self.edge))
        } else {
            g.edge_name(self.edge).to_string()
        }
    }

    pub fn parse(g: &SeparatedGraph, text: &str) -> Result<Self, LiteralError> {
        let text = text.trim();
        let (name, inverse) = match text.strip_suffix("^-1") {
            Some(name) => (name, true),
            None => (text, false),
        };
        if !crate::graph::is_ident(name) {
            return Err(LiteralError::BadSymbol(text.to_string()));
        }
        let edge = g
            .edge_id(name)
            .ok_or_else(|| GraphError::UnknownEdge(name.to_string()))?;
        Ok(Symbol { edge, inverse })
    }
}

/// A word over symbols, not necessarily reduced. Products reduce.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn single(s: Symbol) -> Self {
        Word(vec![s])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    /// First applied symbol, 𝔦_d.
    pub fn first(&self) -> Option<Symbol> {
        self.0.first().copied()
    }

    /// Last applied symbol, 𝔱_d.
    pub fn last(&self) -> Option<Symbol> {
        self.0.last().copied()
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[1] != w[0].inv())
    }

    pub fn reduced(&self) -> Word {
        let mut out: Vec<Symbol> = Vec::with_capacity(self.0.len());
        for &s in &self.0 {
            if out.last() == Some(&s.inv()) {
                out.pop();
            } else {
                out.push(s);
            }
        }
        Word(out)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|s| s.inv()).collect())
    }

    /// `self` extended by one more applied symbol, without reduction.
    pub fn then(&self, s: Symbol) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.extend_from_slice(&self.0);
        v.push(s);
        Word(v)
    }

    /// The initial subpath of length `k`.
    pub fn prefix(&self, k: usize) -> Word {
        Word(self.0[..k].to_vec())
    }

    /// `other` is an initial subpath of `self`.
    pub fn starts_with(&self, other: &Word) -> bool {
        self.0.starts_with(&other.0)
    }

    pub fn common_prefix_len(&self, other: &Word) -> usize {
        self.0
            .iter()
            .zip(&other.0)
            .take_while(|(a, b)| a == b)
            .count()
    }

    /// Literal in right-to-left notation; the empty word prints as `1`.
    pub fn literal(&self, g: &SeparatedGraph) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        let parts: Vec<String> = self.0.iter().rev().map(|s| s.literal(g)).collect();
        parts.join(".")
    }

    /// Parse a path literal such as `f0^-1.e0`; `1` is the empty word. The
    /// result is kept exactly as written (no reduction).
    pub fn parse(g: &SeparatedGraph, text: &str) -> Result<Word, LiteralError> {
        let text = text.trim();
        if text.is_empty() {
            return Err(LiteralError::Empty);
        }
        if text == "1" {
            return Ok(Word::empty());
        }
        let mut syms = text
            .split('.')
            .map(|t| Symbol::parse(g, t))
            .collect::<Result<Vec<_>, _>>()?;
        syms.reverse();
        Ok(Word(syms))
    }

    pub fn display<'a>(&'a self, g: &'a SeparatedGraph) -> WordDisplay<'a> {
        WordDisplay { word: self, graph: g }
    }
}

/// The reduced product β·α, where `α` (the right operand) is applied first.
impl Mul<&Word> for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        let mut out: Vec<Symbol> = rhs.reduced().0;
        for &s in &self.reduced().0 {
            if out.last() == Some(&s.inv()) {
                out.pop();
            } else {
                out.push(s);
            }
        }
        Word(out)
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    graph: &'a SeparatedGraph,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word.literal(self.graph))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn literal_is_right_to_left() {
        let g = catalog::emn(2, 2);
        let w = Word::parse(&g, "f0^-1.e0").unwrap();
        assert_eq!(w.first(), Some(Symbol::pos(g.edge_id("e0").unwrap())));
        assert_eq!(w.last(), Some(Symbol::neg(g.edge_id("f0").unwrap())));
        assert_eq!(w.literal(&g), "f0^-1.e0");
        assert_eq!(Word::parse(&g, "1").unwrap(), Word::empty());
        assert!(Word::parse(&g, "x0").is_err());
        assert!(Word::parse(&g, "e0^-2").is_err());
        assert!(Word::parse(&g, "").is_err());
    }

    #[test]
    fn product_cancels() {
        let g = catalog::emn(2, 2);
        let a = Word::parse(&g, "f0^-1.e0").unwrap();
        assert_eq!(&a * &a.inverse(), Word::empty());
        let b = Word::parse(&g, "f1^-1.e1").unwrap();
        // (f1⁻¹e1)·(f0⁻¹e0)⁻¹ = f1⁻¹e1e0⁻¹f0
        assert_eq!((&b * &a.inverse()).literal(&g), "f1^-1.e1.e0^-1.f0");
        assert!(!Word::parse(&g, "e0^-1.f0.f0^-1.e0").unwrap().is_reduced());
    }

    #[test]
    fn symbol_order() {
        let e = EdgeId(0);
        let f = EdgeId(1);
        let mut v = vec![Symbol::neg(f), Symbol::pos(f), Symbol::neg(e), Symbol::pos(e)];
        v.sort();
        assert_eq!(v, vec![Symbol::pos(e), Symbol::neg(e), Symbol::pos(f), Symbol::neg(f)]);
        for s in v {
            assert_eq!(Symbol::from_index(s.index()), s);
        }
    }
}
