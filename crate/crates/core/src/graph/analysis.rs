use std::collections::VecDeque;

use super::{Graph, Vertex};

/// One connected component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// Sorted vertex list.
    pub vertices: Vec<Vertex>,
    pub edge_count: usize,
    /// Connected, acyclic, maximum degree at most 2. A single vertex is `P_1`.
    pub is_path: bool,
    /// Connected, every degree 2, as many edges as vertices.
    pub is_cycle: bool,
}

impl Component {
    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_tree(&self) -> bool {
        self.edge_count + 1 == self.vertices.len()
    }
}

/// A proper 2-coloring, chosen so that the lowest vertex of every
/// component lies in `X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    in_y: Vec<bool>,
    /// `(|X ∩ C_i|, |Y ∩ C_i|)` for each component, in component order.
    pub part_sizes: Vec<(usize, usize)>,
}

impl Bipartition {
    pub fn is_in_y(&self, v: Vertex) -> bool {
        self.in_y[v]
    }

    pub fn x(&self) -> Vec<Vertex> {
        (0..self.in_y.len()).filter(|&v| !self.in_y[v]).collect()
    }

    pub fn y(&self) -> Vec<Vertex> {
        (0..self.in_y.len()).filter(|&v| self.in_y[v]).collect()
    }

    /// Side of every vertex as a 2-coloring with colors 1 (X) and 2 (Y).
    pub fn as_coloring(&self) -> Vec<u16> {
        self.in_y.iter().map(|&y| if y { 2 } else { 1 }).collect()
    }
}

/// An odd cycle, listed in cyclic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddCycle(pub Vec<Vertex>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Analysis {
    /// Components ordered by their lowest vertex.
    pub components: Vec<Component>,
    pub max_degree: usize,
    pub has_cycle: bool,
    pub bipartition: Result<Bipartition, OddCycle>,
}

impl Analysis {
    pub(super) fn of(g: &Graph) -> Analysis {
        let n = g.order();
        let mut component_of = vec![usize::MAX; n];
        let mut depth = vec![0usize; n];
        let mut parent = vec![usize::MAX; n];
        let mut components = Vec::new();
        let mut part_sizes = Vec::new();
        let mut odd_cycle = None;

        for root in 0..n {
            if component_of[root] != usize::MAX {
                continue;
            }
            let id = components.len();
            let mut vertices = Vec::new();
            let mut queue = VecDeque::from([root]);
            component_of[root] = id;
            while let Some(u) = queue.pop_front() {
                vertices.push(u);
                for &w in g.neighbors(u) {
                    if component_of[w] == usize::MAX {
                        component_of[w] = id;
                        depth[w] = depth[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if depth[w] % 2 == depth[u] % 2 && odd_cycle.is_none() {
                        odd_cycle = Some(close_odd_cycle(u, w, &parent, &depth));
                    }
                }
            }
            vertices.sort_unstable();
            let degree_sum: usize = vertices.iter().map(|&v| g.degree(v)).sum();
            let edge_count = degree_sum / 2;
            let max_deg = vertices.iter().map(|&v| g.degree(v)).max().unwrap_or(0);
            let order = vertices.len();
            let y = vertices.iter().filter(|&&v| depth[v] % 2 == 1).count();
            part_sizes.push((order - y, y));
            components.push(Component {
                is_path: edge_count + 1 == order && max_deg <= 2,
                is_cycle: order >= 3 && edge_count == order && max_deg == 2,
                vertices,
                edge_count,
            });
        }

        let has_cycle = components.iter().any(|c| !c.is_tree());
        let bipartition = match odd_cycle {
            Some(cycle) => Err(cycle),
            None => Ok(Bipartition {
                in_y: depth.iter().map(|d| d % 2 == 1).collect(),
                part_sizes,
            }),
        };
        Analysis {
            components,
            max_degree: g.max_degree(),
            has_cycle,
            bipartition,
        }
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition.is_ok()
    }

    /// Every component is a path.
    pub fn is_linear_forest(&self) -> bool {
        self.components.iter().all(|c| c.is_path)
    }

    pub fn largest_component_order(&self) -> usize {
        self.components
            .iter()
            .map(Component::order)
            .max()
            .unwrap_or(0)
    }

    /// Component orders sorted descending.
    pub fn component_orders(&self) -> Vec<usize> {
        let mut orders: Vec<usize> = self.components.iter().map(Component::order).collect();
        orders.sort_unstable_by(|a, b| b.cmp(a));
        orders
    }

    /// Connected and a path.
    pub fn is_path(&self) -> bool {
        self.is_connected() && self.components[0].is_path
    }

    /// Connected and a cycle.
    pub fn is_cycle(&self) -> bool {
        self.is_connected() && self.components[0].is_cycle
    }

    /// For a disjoint union of paths and cycles, a token string such as
    /// `"C4+P1"`: components as `P<n>` / `C<n>` sorted by decreasing order,
    /// cycles before paths on ties. `None` when some component is neither.
    pub fn shape_signature(&self) -> Option<String> {
        let mut parts = Vec::with_capacity(self.components.len());
        for c in &self.components {
            let kind = if c.is_cycle {
                'C'
            } else if c.is_path {
                'P'
            } else {
                return None;
            };
            parts.push((c.order(), kind));
        }
        parts.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        Some(
            parts
                .iter()
                .map(|(order, kind)| format!("{kind}{order}"))
                .collect::<Vec<_>>()
                .join("+"),
        )
    }
}

/// Builds the odd cycle closed by the non-tree edge `{u, w}` whose endpoints
/// sit at BFS depths of equal parity.
fn close_odd_cycle(u: Vertex, w: Vertex, parent: &[Vertex], depth: &[usize]) -> OddCycle {
    let (mut a, mut b) = (u, w);
    let mut left = vec![a];
    let mut right = vec![b];
    while depth[a] > depth[b] {
        a = parent[a];
        left.push(a);
    }
    while depth[b] > depth[a] {
        b = parent[b];
        right.push(b);
    }
    while a != b {
        a = parent[a];
        b = parent[b];
        left.push(a);
        right.push(b);
    }
    right.pop();
    right.reverse();
    left.extend(right);
    OddCycle(left)
}
