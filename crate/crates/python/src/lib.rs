//! Python bindings: `Graph`, `Orientation` and `Pattern` wrappers plus the
//! main analyses. Results are returned as plain dicts keyed like the CLI JSON.

use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use sepgraph::admissibility::{allows_return, is_admissible};
use sepgraph::condition_n::{check_condition_n, FailureWitness, LocalOrientation, LocalOutcome};
use sepgraph::decomposition::{decompose, stratify_branch_free};
use sepgraph::dynamics::{act, enumerate_patterns, folner_ratio, folner_set, stabilizer_witness, FolnerOptions, LazyConfiguration};
use sepgraph::monoid::{presentation, Counterexample, Property};
use sepgraph::orientation::{classify_edges, synthesize_orientation, verify_orientation};
use sepgraph::{catalog, format, Path, ReturnMode, SeparatedGraph, VertexId, Word};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(frozen, module = "sepgraph_py")]
struct Graph {
    g: Arc<SeparatedGraph>,
}

#[pyclass(frozen, module = "sepgraph_py")]
struct Orientation {
    g: Arc<SeparatedGraph>,
    o: sepgraph::orientation::Orientation,
}

#[pyclass(frozen, module = "sepgraph_py")]
struct Pattern {
    g: Arc<SeparatedGraph>,
    p: sepgraph::dynamics::Pattern,
}

impl Graph {
    fn vertex_id(&self, name: &str) -> PyResult<VertexId> {
        self.g.vertex(name).ok_or_else(|| err(format!("unknown vertex `{name}`")))
    }

    fn path(&self, literal: &str) -> PyResult<Path> {
        let w = Word::parse(&self.g, literal).map_err(err)?;
        Path::new(&self.g, w).map_err(err)
    }
}

fn witness_dict<'py>(py: Python<'py>, g: &SeparatedGraph, w: &FailureWitness) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("vertex", g.vertex_name(w.vertex))?;
    d.set_item("alpha", w.alpha.literal(g))?;
    d.set_item("beta", w.beta.literal(g))?;
    d.set_item("gamma", w.gamma.literal(g))?;
    d.set_item("delta", w.delta.literal(g))?;
    d.set_item("epsilon", w.epsilon.literal(g))?;
    d.set_item("verified", w.verify(g).is_ok())?;
    Ok(d)
}

#[pymethods]
impl Graph {
    /// Parse .sgr text.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Graph> {
        Ok(Graph { g: Arc::new(format::parse(text).map_err(err)?) })
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Graph> {
        let text = std::fs::read_to_string(&path).map_err(err)?;
        Graph::parse(&text)
    }

    /// A built-in graph, e.g. `emn_2_3` or `running_example`.
    #[staticmethod]
    fn catalog(name: &str) -> PyResult<Graph> {
        catalog::named()
            .into_iter()
            .find(|(n, _)| *n == name)
            .map(|(_, g)| Graph { g: Arc::new(g) })
            .ok_or_else(|| err(format!("no catalog graph `{name}`")))
    }

    #[staticmethod]
    fn catalog_names() -> Vec<&'static str> {
        catalog::named().into_iter().map(|(n, _)| n).collect()
    }

    fn to_sgr(&self) -> String {
        format::serialize(&self.g)
    }

    fn vertices(&self) -> Vec<String> {
        self.g.vertices().map(|v| self.g.vertex_name(v).to_string()).collect()
    }

    /// (name, source, range, group) tuples.
    fn edges(&self) -> Vec<(String, String, String, String)> {
        let g = &self.g;
        g.edge_ids()
            .map(|e| {
                (
                    g.edge_name(e).to_string(),
                    g.vertex_name(g.source(e)).to_string(),
                    g.vertex_name(g.range(e)).to_string(),
                    g.group_name(g.group_of(e)),
                )
            })
            .collect()
    }

    fn is_admissible(&self, literal: &str) -> PyResult<bool> {
        Ok(is_admissible(&self.g, &Word::parse(&self.g, literal).map_err(err)?))
    }

    #[pyo3(signature = (literal, allow_trivial = true))]
    fn allows_return(&self, literal: &str, allow_trivial: bool) -> PyResult<bool> {
        let p = self.path(literal)?;
        let mode = if allow_trivial { ReturnMode::AllowTrivial } else { ReturnMode::RequireExtension };
        let td = sepgraph::TransitionDigraph::new(&self.g);
        allows_return(&td, &p, mode).map_err(err)
    }

    /// {"verdict", "branching", "local": {vertex: ("1", group) | ("2", edge)}, "witness"}.
    fn check_condition_n<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let g = &self.g;
        let r = check_condition_n(g).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("verdict", r.verdict)?;
        let branching: Vec<&str> = r.branching().map(|v| g.vertex_name(v.vertex)).collect();
        d.set_item("branching", branching)?;
        let local = PyDict::new(py);
        for v in r.branching() {
            if let Some(LocalOutcome::Oriented(o)) = &v.outcome {
                let entry = match o {
                    LocalOrientation::Type1 { group, .. } => ("1", g.group_name(*group)),
                    LocalOrientation::Type2 { edge, .. } => ("2", g.edge_name(*edge).to_string()),
                };
                local.set_item(g.vertex_name(v.vertex), entry)?;
            }
        }
        d.set_item("local", local)?;
        match r.witnesses().next() {
            Some(w) => d.set_item("witness", witness_dict(py, g, w)?)?,
            None => d.set_item("witness", py.None())?,
        }
        Ok(d)
    }

    fn decompose<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let g = &self.g;
        let dec = decompose(g).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("branching", g.vertex_names_of(&dec.branching))?;
        d.set_item("branching_part", g.vertex_names_of(&dec.branching_part))?;
        d.set_item("branch_free", g.vertex_names_of(&dec.branch_free))?;
        d.set_item("acyclic", g.vertex_names_of(&dec.acyclic))?;
        d.set_item("weakly_branching", g.vertex_names_of(&dec.weakly_branching))?;
        let bf = dec.branch_free_subgraph(g);
        let strata: Vec<Vec<String>> =
            stratify_branch_free(&bf).map_err(err)?.strata.iter().map(|s| bf.vertex_names_of(s)).collect();
        d.set_item("strata", strata)?;
        Ok(d)
    }

    /// Full subgraph on the named vertices.
    fn subgraph(&self, names: Vec<String>) -> PyResult<Graph> {
        let set = names.iter().map(|n| self.vertex_id(n)).collect::<PyResult<_>>()?;
        Ok(Graph { g: Arc::new(self.g.full_subgraph(&set)) })
    }

    fn branching_subgraph(&self) -> PyResult<Graph> {
        let dec = decompose(&self.g).map_err(err)?;
        Ok(Graph { g: Arc::new(dec.branching_subgraph(&self.g)) })
    }

    /// Edge name → "1" | "2" | "3a" | "3b"; the graph must be its own branching subgraph.
    fn classify_edges(&self) -> PyResult<Vec<(String, &'static str)>> {
        let t = classify_edges(&self.g).map_err(err)?;
        Ok(t.into_iter().map(|(e, t)| (self.g.edge_name(e).to_string(), t.label())).collect())
    }

    fn synthesize_orientation(&self) -> PyResult<Orientation> {
        let o = synthesize_orientation(&self.g).map_err(err)?;
        Ok(Orientation { g: self.g.clone(), o })
    }

    fn constant_orientation(&self, sign: i8) -> PyResult<Orientation> {
        if sign != 1 && sign != -1 {
            return Err(err("sign must be +1 or -1"));
        }
        Ok(Orientation { g: self.g.clone(), o: sepgraph::orientation::Orientation::constant(&self.g, sign) })
    }

    fn parse_orientation(&self, text: &str) -> PyResult<Orientation> {
        let o = sepgraph::orientation::Orientation::parse(&self.g, text).map_err(err)?;
        Ok(Orientation { g: self.g.clone(), o })
    }

    /// "proper", "weak" or "invalid".
    fn verify_orientation(&self, o: &Orientation) -> &'static str {
        verify_orientation(&self.g, &o.o).kind.name()
    }

    fn patterns(&self, vertex: &str, depth: usize) -> PyResult<Vec<Pattern>> {
        let v = self.vertex_id(vertex)?;
        let pats = enumerate_patterns(&self.g, v, depth).map_err(err)?;
        Ok(pats.into_iter().map(|p| Pattern { g: self.g.clone(), p }).collect())
    }

    /// Truncation at `depth` of a seeded configuration at `vertex` containing every path in `seeds`.
    #[pyo3(signature = (vertex, depth, seeds = Vec::new(), seed = 0))]
    fn configuration(&self, vertex: &str, depth: usize, seeds: Vec<String>, seed: u64) -> PyResult<Pattern> {
        let v = self.vertex_id(vertex)?;
        let words = seeds.iter().map(|s| self.path(s).map(|p| p.into_word())).collect::<PyResult<Vec<_>>>()?;
        let xi = LazyConfiguration::containing(&self.g, v, seed, &words).map_err(err)?;
        let p = sepgraph::dynamics::Pattern::truncate(&self.g, &xi, depth).map_err(err)?;
        Ok(Pattern { g: self.g.clone(), p })
    }

    /// F_n at a seeded configuration, plus the ratio |F_n w \ F_n| / |F_n| for `w`.
    #[pyo3(signature = (orientation, vertex, n, w, seed = 0))]
    fn folner(&self, orientation: &Orientation, vertex: &str, n: usize, w: &str, seed: u64) -> PyResult<(Vec<String>, f64)> {
        let v = self.vertex_id(vertex)?;
        let word = self.path(w)?.into_word();
        let xi = LazyConfiguration::containing(&self.g, v, seed, std::slice::from_ref(&word)).map_err(err)?;
        let opts = FolnerOptions::default();
        let f = folner_set(&self.g, &orientation.o, &xi, n, opts).map_err(err)?;
        let r = folner_ratio(&self.g, &orientation.o, &xi, n, &word, opts).map_err(err)?;
        Ok((f.members.iter().map(|m| m.literal(&self.g)).collect(), r.ratio))
    }

    /// Depth-`depth` pattern fixed by the first Condition (N) failure witness, or None when (N) holds.
    fn stabilizer_witness<'py>(&self, py: Python<'py>, depth: usize) -> PyResult<Option<Bound<'py, PyDict>>> {
        let r = check_condition_n(&self.g).map_err(err)?;
        let Some(fw) = r.witnesses().next() else { return Ok(None) };
        let sw = stabilizer_witness(&self.g, fw, depth).map_err(err)?;
        let d = witness_dict(py, &self.g, fw)?;
        d.set_item("valid", sw.valid)?;
        d.set_item("fixed", sw.fixed)?;
        d.set_item("free", sw.free)?;
        d.set_item("problems", sw.problems.clone())?;
        d.set_item("pattern", Pattern { g: self.g.clone(), p: sw.pattern })?;
        Ok(Some(d))
    }

    /// Monoid presentation; simplified by generator elimination when asked.
    #[pyo3(signature = (simplified = false))]
    fn presentation(&self, simplified: bool) -> String {
        let p = presentation(&self.g);
        if simplified { p.simplified() } else { p }.to_string()
    }

    /// ("true" | "false" | "unknown", counterexample dict or None) on the simplified presentation.
    #[pyo3(signature = (property, bound = 12))]
    fn check_monoid<'py>(&self, py: Python<'py>, property: &str, bound: u32) -> PyResult<(&'static str, Option<Bound<'py, PyDict>>)> {
        let prop = Property::from_name(property).ok_or_else(|| err(format!("unknown property `{property}`")))?;
        let pres = presentation(&self.g).simplified();
        let r = prop.check(&pres, bound);
        let ce = match &r.counterexample {
            None => None,
            Some(c) => {
                let d = PyDict::new(py);
                let l = |x| pres.literal(x);
                match c {
                    Counterexample::Unperforation { n, a, b } | Counterexample::AlmostUnperforation { n, a, b } => {
                        d.set_item("n", *n)?;
                        d.set_item("a", l(a))?;
                        d.set_item("b", l(b))?;
                    }
                    Counterexample::PseudoCancellation { a, b, c } => {
                        d.set_item("a", l(a))?;
                        d.set_item("b", l(b))?;
                        d.set_item("c", l(c))?;
                    }
                    Counterexample::Separation { a, b } => {
                        d.set_item("a", l(a))?;
                        d.set_item("b", l(b))?;
                    }
                }
                Some(d)
            }
        };
        Ok((r.verdict.name(), ce))
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph({} vertices, {} edges, {} groups)",
            self.g.vertex_count(),
            self.g.edge_count(),
            self.g.group_count()
        )
    }
}

#[pymethods]
impl Orientation {
    fn signs(&self) -> Vec<(String, i8)> {
        self.g.edge_ids().map(|e| (self.g.edge_name(e).to_string(), self.o.sign(e))).collect()
    }

    fn to_text(&self) -> String {
        self.o.to_text(&self.g)
    }

    fn kind(&self) -> &'static str {
        verify_orientation(&self.g, &self.o).kind.name()
    }
}

#[pymethods]
impl Pattern {
    #[getter]
    fn base(&self) -> String {
        self.g.vertex_name(self.p.base()).to_string()
    }

    #[getter]
    fn depth(&self) -> usize {
        self.p.depth()
    }

    /// Member literals, shortest first.
    fn members(&self) -> Vec<String> {
        self.p.sorted_members().into_iter().map(|w| w.literal(&self.g)).collect()
    }

    fn __len__(&self) -> usize {
        self.p.len()
    }

    fn __contains__(&self, literal: &str) -> PyResult<bool> {
        Ok(self.p.members().contains(&Word::parse(&self.g, literal).map_err(err)?))
    }

    fn __eq__(&self, other: &Pattern) -> bool {
        self.p == other.p
    }

    fn dump(&self) -> String {
        self.p.dump(&self.g)
    }

    fn restrict(&self, depth: usize) -> Pattern {
        Pattern { g: self.g.clone(), p: self.p.restrict(depth) }
    }

    /// θ_w of this pattern; `w` must be a member.
    fn act(&self, literal: &str) -> PyResult<Pattern> {
        let w = Word::parse(&self.g, literal).map_err(err)?;
        Ok(Pattern { g: self.g.clone(), p: act(&self.g, &self.p, &w).map_err(err)? })
    }

    fn validate(&self) -> PyResult<()> {
        self.p.validate(&self.g).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Pattern(base={}, depth={}, size={})", self.base(), self.p.depth(), self.p.len())
    }
}

#[pymodule]
fn sepgraph_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Graph>()?;
    m.add_class::<Orientation>()?;
    m.add_class::<Pattern>()?;
    Ok(())
}
