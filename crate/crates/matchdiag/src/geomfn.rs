//! The geometric route to the block function.
//!
//! For a cell `(a, b)` three graphs share the codomain's vertex set: one with
//! the mapped domain edges at `≤ a` plus codomain edges at `< b`, one with
//! mapped edges at `< a` plus codomain edges at `≤ b`, and their common
//! refinement with both strict. Collapsing each graph to its components and
//! wiring every component of the strict graph to the two components
//! containing it yields a tripartite graph whose independent-cycle count is
//! exactly the block-function multiplicity. This route never touches linear
//! algebra, which makes it a genuinely independent check on the algebraic
//! ones in [`crate::blockfn`].

use crate::blockfn::{check_compatible, BlockFunction, SetMapping};
use crate::error::{Error, Result};
use crate::filtration::{barcode0, Partition, UnionFind};
use crate::metric::FiniteMetricSpace;
use std::fmt::Write as _;

/// A graph on a fixed vertex set: undirected edges, no self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl ThresholdGraph {
    /// Normalizes: orients every edge low-to-high, drops self-loops and
    /// duplicates.
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut edges: Vec<(usize, usize)> = edges
            .into_iter()
            .filter(|&(u, v)| u != v)
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        for &(_, v) in &edges {
            assert!(v < vertex_count, "edge endpoint out of range");
        }
        edges.sort_unstable();
        edges.dedup();
        Self {
            vertex_count,
            edges,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edge union of two graphs on the same vertex set.
    pub fn union(&self, other: &ThresholdGraph) -> ThresholdGraph {
        assert_eq!(
            self.vertex_count, other.vertex_count,
            "united graphs must share a vertex set"
        );
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        ThresholdGraph::new(self.vertex_count, edges)
    }

    /// True when every edge of `other` is an edge of this graph.
    pub fn contains(&self, other: &ThresholdGraph) -> bool {
        other
            .edges
            .iter()
            .all(|e| self.edges.binary_search(e).is_ok())
    }

    /// Connected components with canonical smallest-index labels.
    pub fn partition(&self) -> Partition {
        let mut uf = UnionFind::new(self.vertex_count);
        for &(u, v) in &self.edges {
            uf.union(u, v);
        }
        uf.partition()
    }

    pub fn component_count(&self) -> usize {
        self.partition().blocks()
    }
}

/// The 1-skeleton of the space at threshold `r`: edges between points at
/// distance `≤ r`, or `< r` when strict.
pub fn rips_graph(space: &FiniteMetricSpace, r: f64, strict: bool) -> ThresholdGraph {
    let n = space.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let d = space.dist(i, j);
            if if strict { d < r } else { d <= r } {
                edges.push((i, j));
            }
        }
    }
    ThresholdGraph::new(n, edges)
}

/// The image of the domain's 1-skeleton at threshold `a` under the mapping,
/// drawn on the codomain's vertex set. Edges whose endpoints collapse to one
/// point disappear.
pub fn image_threshold_graph(
    x: &FiniteMetricSpace,
    mapping: &SetMapping,
    a: f64,
    strict: bool,
    ambient: usize,
) -> ThresholdGraph {
    assert_eq!(mapping.len(), x.len(), "mapping must cover the domain");
    assert_eq!(
        mapping.codomain_len(),
        ambient,
        "mapping must land in the ambient vertex set"
    );
    let n = x.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let d = x.dist(i, j);
            if if strict { d < a } else { d <= a } {
                edges.push((mapping.apply(i), mapping.apply(j)));
            }
        }
    }
    ThresholdGraph::new(ambient, edges)
}

/// The three graphs of one cell, named by their (domain, codomain) threshold
/// styles. `open_open` is an edge-subgraph of both others.
#[derive(Debug, Clone)]
pub struct GraphTriple {
    /// Mapped domain edges at `≤ a`, codomain edges at `< b`.
    pub closed_open: ThresholdGraph,
    /// Mapped domain edges at `< a`, codomain edges at `≤ b`.
    pub open_closed: ThresholdGraph,
    /// Both strict: the common refinement.
    pub open_open: ThresholdGraph,
}

/// Builds the graph triple for the cell `(a, b)`.
pub fn build_abc(
    x: &FiniteMetricSpace,
    z: &FiniteMetricSpace,
    mapping: &SetMapping,
    a: f64,
    b: f64,
) -> Result<GraphTriple> {
    check_compatible(x, z, mapping)?;
    let n = z.len();
    let image_closed = image_threshold_graph(x, mapping, a, false, n);
    let image_open = image_threshold_graph(x, mapping, a, true, n);
    let rips_closed = rips_graph(z, b, false);
    let rips_open = rips_graph(z, b, true);
    Ok(GraphTriple {
        closed_open: image_closed.union(&rips_open),
        open_closed: image_open.union(&rips_closed),
        open_open: image_open.union(&rips_open),
    })
}

/// The components of the three graphs, with one edge from every strict
/// component to the component of each relaxed graph containing it.
/// Component ids are the smallest vertex index they contain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripartiteComponentGraph {
    closed_open_ids: Vec<usize>,
    open_open_ids: Vec<usize>,
    open_closed_ids: Vec<usize>,
    /// `(strict component, containing closed_open component)`, one per
    /// strict component.
    into_closed_open: Vec<(usize, usize)>,
    /// `(strict component, containing open_closed component)`.
    into_open_closed: Vec<(usize, usize)>,
}

impl TripartiteComponentGraph {
    pub fn closed_open_ids(&self) -> &[usize] {
        &self.closed_open_ids
    }

    pub fn open_open_ids(&self) -> &[usize] {
        &self.open_open_ids
    }

    pub fn open_closed_ids(&self) -> &[usize] {
        &self.open_closed_ids
    }

    pub fn into_closed_open(&self) -> &[(usize, usize)] {
        &self.into_closed_open
    }

    pub fn into_open_closed(&self) -> &[(usize, usize)] {
        &self.into_open_closed
    }

    pub fn vertex_count(&self) -> usize {
        self.closed_open_ids.len() + self.open_open_ids.len() + self.open_closed_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.into_closed_open.len() + self.into_open_closed.len()
    }
}

fn distinct_labels(p: &Partition) -> Vec<usize> {
    let mut ids: Vec<usize> = p.labels().to_vec();
    ids.sort_unstable();
    ids.dedup();
    ids
}

/// Builds the tripartite component graph of the cell `(a, b)`.
pub fn build_g(
    x: &FiniteMetricSpace,
    z: &FiniteMetricSpace,
    mapping: &SetMapping,
    a: f64,
    b: f64,
) -> Result<TripartiteComponentGraph> {
    let triple = build_abc(x, z, mapping, a, b)?;
    let relaxed_domain = triple.closed_open.partition();
    let strict = triple.open_open.partition();
    let relaxed_codomain = triple.open_closed.partition();
    let open_open_ids = distinct_labels(&strict);
    // A strict component sits inside a single component of each relaxed
    // graph, so its id (a member vertex) already locates the target.
    let into_closed_open = open_open_ids
        .iter()
        .map(|&c| (c, relaxed_domain.rep(c)))
        .collect();
    let into_open_closed = open_open_ids
        .iter()
        .map(|&c| (c, relaxed_codomain.rep(c)))
        .collect();
    Ok(TripartiteComponentGraph {
        closed_open_ids: distinct_labels(&relaxed_domain),
        open_open_ids,
        open_closed_ids: distinct_labels(&relaxed_codomain),
        into_closed_open,
        into_open_closed,
    })
}

/// Independent cycles of the tripartite graph: `|E| − |V| + c`.
pub fn cycle_rank(g: &TripartiteComponentGraph) -> usize {
    let na = g.closed_open_ids.len();
    let nc = g.open_open_ids.len();
    let nb = g.open_closed_ids.len();
    let position = |ids: &[usize], id: usize| -> usize {
        ids.binary_search(&id).expect("edge endpoints are known ids")
    };
    let mut uf = UnionFind::new(na + nc + nb);
    for &(c, a) in &g.into_closed_open {
        uf.union(na + position(&g.open_open_ids, c), position(&g.closed_open_ids, a));
    }
    for &(c, b) in &g.into_open_closed {
        uf.union(
            na + position(&g.open_open_ids, c),
            na + nc + position(&g.open_closed_ids, b),
        );
    }
    let components = uf.components();
    let (edges, vertices) = (g.edge_count(), g.vertex_count());
    assert!(
        edges + components >= vertices,
        "cycle rank of a graph cannot be negative"
    );
    edges + components - vertices
}

/// The whole block function through component counting and cycle ranks —
/// same contract as [`crate::blockfn::block_function`], entirely different
/// machinery.
pub fn block_function_geometric(
    x: &FiniteMetricSpace,
    z: &FiniteMetricSpace,
    mapping: &SetMapping,
) -> Result<BlockFunction> {
    check_compatible(x, z, mapping)?;
    let domain_deaths = barcode0(x);
    let codomain_deaths = barcode0(z);
    let mut cells = Vec::new();
    for &a in &domain_deaths.support() {
        for &b in &codomain_deaths.support() {
            let rank = cycle_rank(&build_g(x, z, mapping, a, b)?);
            if rank > 0 {
                cells.push((a, b, rank));
            }
        }
    }
    let mut deficiency = Vec::new();
    for &(b, mult) in codomain_deaths.deaths() {
        let covered: usize = cells.iter().filter(|c| c.1 == b).map(|c| c.2).sum();
        let value = mult as i64 - covered as i64;
        if value < 0 {
            return Err(Error::NegativeDeficiency { death: b, value });
        }
        deficiency.push((b, value as usize));
    }
    BlockFunction::from_parts(cells, deficiency)
}

/// Plain-text dump of a tripartite component graph, for the CLI's
/// `--dump-graph`.
pub fn render_tripartite(g: &TripartiteComponentGraph, a: f64, b: f64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "component graph at a={a} b={b}");
    let list = |ids: &[usize]| {
        ids.iter()
            .map(|id| id.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let _ = writeln!(out, "closed_open components: {}", list(&g.closed_open_ids));
    let _ = writeln!(out, "open_open components: {}", list(&g.open_open_ids));
    let _ = writeln!(out, "open_closed components: {}", list(&g.open_closed_ids));
    for (&(c, a_id), &(c2, b_id)) in g.into_closed_open.iter().zip(&g.into_open_closed) {
        debug_assert_eq!(c, c2);
        let _ = writeln!(out, "edge open_open {c} -> closed_open {a_id}");
        let _ = writeln!(out, "edge open_open {c} -> open_closed {b_id}");
    }
    let _ = writeln!(out, "cycle rank {}", cycle_rank(g));
    out
}
