//! Simple undirected graphs.
//!
//! Vertices are stored 0-indexed. Every textual representation (edge-list
//! files, graph specs, `Display`) uses 1-indexed vertices.

mod analysis;
mod io;

pub use analysis::{Analysis, Bipartition, Component, OddCycle};
pub use io::{parse_edge_list, GraphSpec, ParseError};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A vertex index, 0-based.
pub type Vertex = usize;

/// Graphs with at most this many vertices get bit-packed adjacency rows.
const PACKED_LIMIT: usize = 64;
/// Largest order accepted by [`Graph::all_labeled`] (`2^28` graphs).
pub const LABELED_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graphs must have at least one vertex")]
    Empty,
    #[error("self-loop at vertex {}", .0 + 1)]
    SelfLoop(Vertex),
    #[error("edge {{{}, {}}} listed twice", .0 + 1, .1 + 1)]
    DuplicateEdge(Vertex, Vertex),
    #[error("vertex {} out of range for a graph on {n} vertices", .vertex + 1)]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("{what} requires {requirement}, got {got}")]
    InvalidParameter {
        what: &'static str,
        requirement: &'static str,
        got: usize,
    },
}

/// A finite simple graph on vertices `0..n`.
///
/// Immutable once built. Edges are kept sorted as `(u, v)` with `u < v`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    neighbors: Vec<Vec<Vertex>>,
    packed: Option<Vec<u64>>,
}

impl Graph {
    /// Builds a graph from 0-indexed edges. Edges may be given in either
    /// orientation but each unordered pair at most once.
    pub fn new<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut normalized = Vec::new();
        for (u, v) in edges {
            for vertex in [u, v] {
                if vertex >= n {
                    return Err(GraphError::VertexOutOfRange { vertex, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }

        let mut neighbors = vec![Vec::new(); n];
        for &(u, v) in &normalized {
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        let packed = (n <= PACKED_LIMIT).then(|| {
            neighbors
                .iter()
                .map(|list| list.iter().fold(0u64, |acc, &w| acc | (1 << w)))
                .collect()
        });

        Ok(Graph {
            n,
            edges: normalized,
            neighbors,
            packed,
        })
    }

    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        Graph::new(n, [])
    }

    /// The path `P_n` with vertices in order `0, 1, ..., n-1`.
    pub fn path(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::InvalidParameter {
                what: "path",
                requirement: "n >= 1",
                got: n,
            });
        }
        Graph::new(n, (1..n).map(|i| (i - 1, i)))
    }

    /// The cycle `C_n` in cyclic order, closing with the edge `{n-1, 0}`.
    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        if n < 3 {
            return Err(GraphError::InvalidParameter {
                what: "cycle",
                requirement: "n >= 3",
                got: n,
            });
        }
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    /// `K_{a,b}` with parts `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Result<Self, GraphError> {
        for part in [a, b] {
            if part == 0 {
                return Err(GraphError::InvalidParameter {
                    what: "complete bipartite graph",
                    requirement: "both parts nonempty",
                    got: 0,
                });
            }
        }
        Graph::new(a + b, (0..a).flat_map(|x| (a..a + b).map(move |y| (x, y))))
    }

    /// The star `K_{1,leaves}` centered at vertex 0.
    pub fn star(leaves: usize) -> Result<Self, GraphError> {
        Graph::complete_bipartite(1, leaves)
    }

    /// The complete graph `K_n`.
    pub fn complete(n: usize) -> Result<Self, GraphError> {
        Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    /// Every labeled graph on `n` vertices, `2^C(n,2)` of them. Bit `i` of the
    /// running mask selects the `i`-th pair in lexicographic order, so the
    /// edgeless graph comes first and `K_n` last.
    pub fn all_labeled(n: usize) -> Result<impl Iterator<Item = Graph>, GraphError> {
        if n == 0 || n > LABELED_LIMIT {
            return Err(GraphError::InvalidParameter {
                what: "labeled graph enumeration",
                requirement: "1 <= n <= 8",
                got: n,
            });
        }
        let pairs: Vec<(Vertex, Vertex)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Ok((0..1u64 << pairs.len()).map(move |mask| {
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e);
            Graph::new(n, edges).expect("distinct pairs form a simple graph")
        }))
    }

    /// `self + other`: the vertices of `other` are shifted by `self.order()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let offset = self.n;
        Graph::new(
            self.n + other.n,
            self.edges
                .iter()
                .copied()
                .chain(other.edges.iter().map(|&(u, v)| (u + offset, v + offset))),
        )
        .expect("union of valid graphs is valid")
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    /// Sorted edge list, each edge as `(u, v)` with `u < v`.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.neighbors[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.neighbors.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        if u >= self.n || v >= self.n {
            return false;
        }
        match &self.packed {
            Some(rows) => rows[u] >> v & 1 == 1,
            None => self.neighbors[u].binary_search(&v).is_ok(),
        }
    }

    /// True when `self` and `host` share the vertex set and every edge of
    /// `self` is an edge of `host`.
    pub fn is_spanning_subgraph_of(&self, host: &Graph) -> bool {
        self.n == host.n && self.edges.iter().all(|&(u, v)| host.has_edge(u, v))
    }

    pub fn analyze(&self) -> Analysis {
        Analysis::of(self)
    }

    /// Edges rendered 1-indexed, for reports.
    pub fn edges_one_based(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|&(u, v)| (u + 1, v + 1)).collect()
    }

    /// The edge-list text format: a header `n m` followed by one `u v` line
    /// per edge, 1-indexed with `u < v`.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for (u, v) in self.edges_one_based() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges_one_based())
            .finish()
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graph on {} vertices: ", self.n)?;
        let edges: Vec<String> = self
            .edges_one_based()
            .into_iter()
            .map(|(u, v)| format!("{u}-{v}"))
            .collect();
        if edges.is_empty() {
            write!(f, "(no edges)")
        } else {
            write!(f, "{}", edges.join(" "))
        }
    }
}

/// 1-indexed serialized form of a graph, used inside JSON reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            n: g.order(),
            edges: g.edges_one_based(),
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = GraphError;

    fn try_from(value: GraphJson) -> Result<Self, Self::Error> {
        let mut edges = Vec::with_capacity(value.edges.len());
        for (u, v) in value.edges {
            for w in [u, v] {
                if w == 0 {
                    return Err(GraphError::InvalidParameter {
                        what: "vertex label",
                        requirement: "labels starting at 1",
                        got: 0,
                    });
                }
                if w > value.n {
                    return Err(GraphError::VertexOutOfRange {
                        vertex: w - 1,
                        n: value.n,
                    });
                }
            }
            edges.push((u - 1, v - 1));
        }
        Graph::new(value.n, edges)
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        GraphJson::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let json = GraphJson::deserialize(deserializer)?;
        Graph::try_from(json).map_err(serde::de::Error::custom)
    }
}
