//! Finitely separated graphs: vertices, edges, and the partition of each
//! vertex's incoming edges into groups.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::GraphError;

/// Index of a vertex. Indices follow the lexicographic order of names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct VertexId(pub u32);

/// Index of an edge. Indices follow the lexicographic order of names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EdgeId(pub u32);

/// Index of a group, ordered by `(range, label)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GroupId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl GroupId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub source: VertexId,
    pub range: VertexId,
    pub group: GroupId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    pub range: VertexId,
    pub label: String,
    pub members: Vec<EdgeId>,
}

/// A finite separated graph. Immutable once built.
#[derive(Clone, PartialEq, Eq)]
pub struct SeparatedGraph {
    vertex_names: Vec<String>,
    edges: Vec<Edge>,
    groups: Vec<Group>,
    out_edges: Vec<Vec<EdgeId>>,
    in_edges: Vec<Vec<EdgeId>>,
    groups_at: Vec<Vec<GroupId>>,
    vertex_lookup: HashMap<String, VertexId>,
    edge_lookup: HashMap<String, EdgeId>,
}

/// Accumulates named vertices and edges; `build` sorts and indexes them.
#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    vertices: BTreeSet<String>,
    edges: BTreeMap<String, (String, String, String)>,
}

pub(crate) fn is_ident(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, name: &str) -> Result<&mut Self, GraphError> {
        if !is_ident(name) {
            return Err(GraphError::BadIdentifier(name.to_string()));
        }
        if !self.vertices.insert(name.to_string()) {
            return Err(GraphError::DuplicateVertex(name.to_string()));
        }
        Ok(self)
    }

    pub fn edge(
        &mut self,
        name: &str,
        source: &str,
        range: &str,
        label: &str,
    ) -> Result<&mut Self, GraphError> {
        for id in [name, source, range, label] {
            if !is_ident(id) {
                return Err(GraphError::BadIdentifier(id.to_string()));
            }
        }
        for v in [source, range] {
            if !self.vertices.contains(v) {
                return Err(GraphError::UndeclaredVertex(v.to_string()));
            }
        }
        if self.edges.contains_key(name) {
            return Err(GraphError::DuplicateEdge(name.to_string()));
        }
        self.edges.insert(
            name.to_string(),
            (source.to_string(), range.to_string(), label.to_string()),
        );
        Ok(self)
    }

    pub fn build(&self) -> SeparatedGraph {
        let vertex_names: Vec<String> = self.vertices.iter().cloned().collect();
        let vertex_lookup: HashMap<String, VertexId> = vertex_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), VertexId(i as u32)))
            .collect();

        let mut group_keys: BTreeMap<(VertexId, String), Vec<EdgeId>> = BTreeMap::new();
        for (i, (_, (_, rng, label))) in self.edges.iter().enumerate() {
            group_keys
                .entry((vertex_lookup[rng], label.clone()))
                .or_default()
                .push(EdgeId(i as u32));
        }
        let mut group_of = vec![GroupId(0); self.edges.len()];
        let mut groups = Vec::with_capacity(group_keys.len());
        for (gi, ((range, label), members)) in group_keys.into_iter().enumerate() {
            for &e in &members {
                group_of[e.index()] = GroupId(gi as u32);
            }
            groups.push(Group { range, label, members });
        }

        let edges: Vec<Edge> = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, (name, (src, rng, _)))| Edge {
                name: name.clone(),
                source: vertex_lookup[src],
                range: vertex_lookup[rng],
                group: group_of[i],
            })
            .collect();

        let n = vertex_names.len();
        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            out_edges[e.source.index()].push(EdgeId(i as u32));
            in_edges[e.range.index()].push(EdgeId(i as u32));
        }
        let mut groups_at = vec![Vec::new(); n];
        for (i, g) in groups.iter().enumerate() {
            groups_at[g.range.index()].push(GroupId(i as u32));
        }
        let edge_lookup = edges
            .iter()
            .enumerate()
            .map(|(i, e)| (e.name.clone(), EdgeId(i as u32)))
            .collect();

        SeparatedGraph {
            vertex_names,
            edges,
            groups,
            out_edges,
            in_edges,
            groups_at,
            vertex_lookup,
            edge_lookup,
        }
    }
}

/// A set of vertices of some graph.
pub type VertexSet = BTreeSet<VertexId>;

/// Flags of a vertex set relative to a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SetFlags {
    pub hereditary: bool,
    pub c_saturated: bool,
}

impl SeparatedGraph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::new()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = VertexId> + Clone {
        (0..self.vertex_names.len() as u32).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl ExactSizeIterator<Item = EdgeId> + Clone {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn group_ids(&self) -> impl ExactSizeIterator<Item = GroupId> + Clone {
        (0..self.groups.len() as u32).map(GroupId)
    }

    pub fn all_vertices(&self) -> VertexSet {
        self.vertices().collect()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.index()]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.index()].name
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.vertex_lookup.get(name).copied()
    }

    pub fn edge_id(&self, name: &str) -> Option<EdgeId> {
        self.edge_lookup.get(name).copied()
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.index()]
    }

    pub fn source(&self, e: EdgeId) -> VertexId {
        self.edges[e.index()].source
    }

    pub fn range(&self, e: EdgeId) -> VertexId {
        self.edges[e.index()].range
    }

    pub fn group_of(&self, e: EdgeId) -> GroupId {
        self.edges[e.index()].group
    }

    pub fn group(&self, x: GroupId) -> &Group {
        &self.groups[x.index()]
    }

    /// Edges leaving `v`, i.e. s⁻¹(v).
    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_edges[v.index()]
    }

    /// Edges entering `v`, i.e. r⁻¹(v).
    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.in_edges[v.index()]
    }

    /// The groups C_v at `v`.
    pub fn groups_at(&self, v: VertexId) -> &[GroupId] {
        &self.groups_at[v.index()]
    }

    /// Human-readable group name `label@range`.
    pub fn group_name(&self, x: GroupId) -> String {
        let g = &self.groups[x.index()];
        format!("{}@{}", g.label, self.vertex_name(g.range))
    }

    pub fn is_isolated(&self, v: VertexId) -> bool {
        self.in_edges(v).is_empty() && self.out_edges(v).is_empty()
    }

    pub fn isolated_vertices(&self) -> VertexSet {
        self.vertices().filter(|&v| self.is_isolated(v)).collect()
    }

    /// Every edge with range in `h` has its source in `h`.
    pub fn is_hereditary(&self, h: &VertexSet) -> bool {
        self.edges
            .iter()
            .all(|e| !h.contains(&e.range) || h.contains(&e.source))
    }

    /// If all sources of some group at `v` lie in `h`, then `v` lies in `h`.
    pub fn is_c_saturated(&self, h: &VertexSet) -> bool {
        self.groups.iter().all(|g| {
            h.contains(&g.range) || !g.members.iter().all(|&e| h.contains(&self.source(e)))
        })
    }

    pub fn set_flags(&self, h: &VertexSet) -> SetFlags {
        SetFlags {
            hereditary: self.is_hereditary(h),
            c_saturated: self.is_c_saturated(h),
        }
    }

    /// The full subgraph on `h`: edges with both endpoints in `h`, groups
    /// restricted to their non-empty intersections. Names are preserved.
    pub fn full_subgraph(&self, h: &VertexSet) -> SeparatedGraph {
        let mut b = GraphBuilder::new();
        for &v in h {
            b.vertex(self.vertex_name(v)).expect("names are unique");
        }
        for e in &self.edges {
            if h.contains(&e.source) && h.contains(&e.range) {
                let label = &self.groups[e.group.index()].label;
                b.edge(
                    &e.name,
                    self.vertex_name(e.source),
                    self.vertex_name(e.range),
                    label,
                )
                .expect("edge data is valid");
            }
        }
        b.build()
    }

    /// Quotient by a hereditary, C-saturated set: the full subgraph on the
    /// complement.
    pub fn quotient_graph(&self, h: &VertexSet) -> Result<SeparatedGraph, GraphError> {
        if !self.is_hereditary(h) || !self.is_c_saturated(h) {
            return Err(GraphError::NotHereditarySaturated);
        }
        let rest: VertexSet = self.vertices().filter(|v| !h.contains(v)).collect();
        Ok(self.full_subgraph(&rest))
    }

    /// Translate a vertex set of this graph into ids of `other` by name.
    pub fn map_vertices(&self, set: &VertexSet, other: &SeparatedGraph) -> VertexSet {
        set.iter()
            .filter_map(|&v| other.vertex(self.vertex_name(v)))
            .collect()
    }

    pub fn vertex_names_of(&self, set: &VertexSet) -> Vec<String> {
        set.iter().map(|&v| self.vertex_name(v).to_string()).collect()
    }

    pub fn vertex_set_by_names<'a>(
        &self,
        names: impl IntoIterator<Item = &'a str>,
    ) -> Result<VertexSet, GraphError> {
        names
            .into_iter()
            .map(|n| {
                self.vertex(n)
                    .ok_or_else(|| GraphError::UnknownVertex(n.to_string()))
            })
            .collect()
    }
}

impl fmt::Debug for SeparatedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::format::serialize(self))
    }
}
