//! Named graphs used throughout the tests, the CLI and the bindings.

use std::fmt::Write as _;

use crate::format::parse;
use crate::graph::SeparatedGraph;

fn from_text(text: &str) -> SeparatedGraph {
    parse(text).expect("catalog graphs are well formed")
}

/// E(m,n): `m` red and `n` blue edges from `u` to `w`.
pub fn emn(m: usize, n: usize) -> SeparatedGraph {
    from_text(&emn_text(m, n))
}

pub fn emn_text(m: usize, n: usize) -> String {
    let mut s = format!("# E({m},{n})\nvertex u\nvertex w\n");
    for i in 0..m {
        let _ = writeln!(s, "edge e{i} : u -> w @ red");
    }
    for i in 0..n {
        let _ = writeln!(s, "edge f{i} : u -> w @ blue");
    }
    s
}

/// Two red edges u→w and two blue edges v→w; monoid ⟨u,v,w | w=2u, w=2v⟩.
pub const TWO_SQUARES: &str = "\
# w = 2u = 2v
vertex u
vertex v
vertex w
edge e0 : u -> w @ red
edge e1 : u -> w @ red
edge f0 : v -> w @ blue
edge f1 : v -> w @ blue
";

pub fn two_squares() -> SeparatedGraph {
    from_text(TWO_SQUARES)
}

/// Monoid ⟨u,v,w | w = u+v, w = m·u + n·v⟩.
pub fn pseudo_cancellation(m: usize, n: usize) -> SeparatedGraph {
    from_text(&pseudo_cancellation_text(m, n))
}

pub fn pseudo_cancellation_text(m: usize, n: usize) -> String {
    let mut s = format!("# w = u+v = {m}u+{n}v\nvertex u\nvertex v\nvertex w\n");
    s.push_str("edge e : u -> w @ red\nedge h : v -> w @ red\n");
    for i in 0..m {
        let _ = writeln!(s, "edge f{i} : u -> w @ blue");
    }
    for i in 0..n {
        let _ = writeln!(s, "edge g{i} : v -> w @ blue");
    }
    s
}

/// Thirteen vertices u1..u13 with three colours. Blue edges at u3 form a
/// single group of nine; green and red add two more groups there.
pub const RUNNING_EXAMPLE: &str = "\
vertex u1
vertex u2
vertex u3
vertex u4
vertex u5
vertex u6
vertex u7
vertex u8
vertex u9
vertex u10
vertex u11
vertex u12
vertex u13
edge b5_5 : u5 -> u5 @ blue
edge b4_5 : u4 -> u5 @ blue
edge b2_3 : u2 -> u3 @ blue
edge b4_3 : u4 -> u3 @ blue
edge b8_3 : u8 -> u3 @ blue
edge b11_3a : u11 -> u3 @ blue
edge b11_3b : u11 -> u3 @ blue
edge b7_3a : u7 -> u3 @ blue
edge b7_3b : u7 -> u3 @ blue
edge b7_3c : u7 -> u3 @ blue
edge b12_3 : u12 -> u3 @ blue
edge g12_3 : u12 -> u3 @ green
edge g11_3 : u11 -> u3 @ green
edge r7_3 : u7 -> u3 @ red
edge r8_3 : u8 -> u3 @ red
edge b6_1 : u6 -> u1 @ blue
edge b2_1 : u2 -> u1 @ blue
edge g2_1a : u2 -> u1 @ green
edge g2_1b : u2 -> u1 @ green
edge b9_4a : u9 -> u4 @ blue
edge b9_4b : u9 -> u4 @ blue
edge g13_4a : u13 -> u4 @ green
edge g13_4b : u13 -> u4 @ green
edge g1_10 : u1 -> u10 @ green
";

pub fn running_example() -> SeparatedGraph {
    from_text(RUNNING_EXAMPLE)
}

/// One vertex with one loop.
pub fn loop_graph() -> SeparatedGraph {
    from_text("vertex v\nedge e : v -> v @ c\n")
}

/// Directed cycle v0 → v1 → … → v(k-1) → v0, one group per vertex.
pub fn cycle(k: usize) -> SeparatedGraph {
    let mut s = String::new();
    for i in 0..k {
        let _ = writeln!(s, "vertex v{i}");
    }
    for i in 0..k {
        let _ = writeln!(s, "edge e{i} : v{i} -> v{} @ c", (i + 1) % k);
    }
    from_text(&s)
}

/// Vertex `v` with two loops in one group.
pub fn double_loop() -> SeparatedGraph {
    from_text("vertex v\nedge l0 : v -> v @ c\nedge l1 : v -> v @ c\n")
}

/// Vertices without edges: the free commutative monoid on `names`.
pub fn discrete(names: &[&str]) -> SeparatedGraph {
    let mut s = String::new();
    for n in names {
        let _ = writeln!(s, "vertex {n}");
    }
    from_text(&s)
}

/// Every catalog graph under the file name used in `graphs/`.
pub fn named() -> Vec<(&'static str, SeparatedGraph)> {
    vec![
        ("emn_2_2", emn(2, 2)),
        ("emn_2_3", emn(2, 3)),
        ("emn_3_3", emn(3, 3)),
        ("two_squares", two_squares()),
        ("pseudo_2_1", pseudo_cancellation(2, 1)),
        ("pseudo_3_2", pseudo_cancellation(3, 2)),
        ("running_example", running_example()),
        ("loop", loop_graph()),
        ("cycle3", cycle(3)),
        ("double_loop", double_loop()),
        ("free_2", discrete(&["a", "b"])),
    ]
}
