//! Existence of a proportional `L`-coloring by backtracking.
//!
//! A proportional coloring is a proper `L`-coloring in which every palette
//! color `c` is used between `⌊η(c)/k⌋` and `⌈η(c)/k⌉` times. The search
//! colors vertices in a fixed order, tries list colors in ascending order,
//! and prunes on properness, on the upper quota, and (optionally) when a
//! color can no longer reach its lower quota with the vertices left.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::assignment::{multiplicities, quotas, Color, ListAssignment, Quota};
use crate::graph::{Graph, Vertex};

/// Order in which the search colors vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexOrder {
    /// Breadth-first within each component, components by lowest vertex.
    /// Every vertex after the first of its component follows a neighbor.
    #[default]
    Smart,
    /// Plain index order `0, 1, ..., n-1`.
    Natural,
}

impl std::str::FromStr for VertexOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "smart" => Ok(VertexOrder::Smart),
            "natural" => Ok(VertexOrder::Natural),
            other => Err(format!(
                "unknown order `{other}` (expected smart or natural)"
            )),
        }
    }
}

/// Which cuts the search applies before reaching a leaf.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pruning {
    /// Skip a color whose class is already at `⌈η/k⌉`.
    pub upper: bool,
    /// Abandon a branch once some color cannot reach `⌊η/k⌋`.
    pub lower: bool,
}

impl Pruning {
    pub const ALL: Pruning = Pruning {
        upper: true,
        lower: true,
    };
    pub const NONE: Pruning = Pruning {
        upper: false,
        lower: false,
    };
}

impl Default for Pruning {
    fn default() -> Self {
        Pruning::ALL
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SolverOptions {
    pub order: VertexOrder,
    pub pruning: Pruning,
}

/// A coloring certified proper, list-respecting and within quota.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProportionalColoring {
    color_of: Vec<Color>,
    class_size: BTreeMap<Color, usize>,
}

impl ProportionalColoring {
    /// Checks `colors` against the definition and wraps it on success.
    pub fn certify(g: &Graph, l: &ListAssignment, colors: Vec<Color>) -> Result<Self, Violation> {
        validate(g, l, &colors)?;
        let mut class_size = BTreeMap::new();
        for &c in &colors {
            *class_size.entry(c).or_insert(0) += 1;
        }
        Ok(ProportionalColoring {
            color_of: colors,
            class_size,
        })
    }

    pub fn color_of(&self, v: Vertex) -> Color {
        self.color_of[v]
    }

    pub fn colors(&self) -> &[Color] {
        &self.color_of
    }

    /// `|f⁻¹(c)|`.
    pub fn class_size(&self, c: Color) -> usize {
        self.class_size.get(&c).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveStatus {
    Found,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub coloring: Option<ProportionalColoring>,
    pub nodes_explored: u64,
}

impl SolveOutcome {
    pub fn is_found(&self) -> bool {
        self.status == SolveStatus::Found
    }
}

/// The first clause of the definition a coloring breaks. Vertices are
/// reported 1-indexed by `Display`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    WrongLength {
        colors: usize,
        vertices: usize,
    },
    Improper {
        u: Vertex,
        v: Vertex,
        color: Color,
    },
    NotInList {
        vertex: Vertex,
        color: Color,
    },
    Quota {
        color: Color,
        used: usize,
        lo: usize,
        hi: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::WrongLength { colors, vertices } => {
                write!(f, "{colors} colors given for {vertices} vertices")
            }
            Violation::Improper { u, v, color } => {
                write!(
                    f,
                    "improper: edge ({}, {}) has both ends colored {color}",
                    u + 1,
                    v + 1
                )
            }
            Violation::NotInList { vertex, color } => {
                write!(
                    f,
                    "vertex {} colored {color}, which is not in its list",
                    vertex + 1
                )
            }
            Violation::Quota {
                color,
                used,
                lo,
                hi,
            } => {
                write!(f, "color {color} used {used} times, allowed {lo}..={hi}")
            }
        }
    }
}

impl std::error::Error for Violation {}

/// Independent check of the definition: properness over edges in sorted
/// order, then list containment by vertex, then quotas by color.
pub fn validate(g: &Graph, l: &ListAssignment, colors: &[Color]) -> Result<(), Violation> {
    if colors.len() != g.order() || l.len() != g.order() {
        return Err(Violation::WrongLength {
            colors: colors.len(),
            vertices: g.order(),
        });
    }
    for &(u, v) in g.edges() {
        if colors[u] == colors[v] {
            return Err(Violation::Improper {
                u,
                v,
                color: colors[u],
            });
        }
    }
    for (vertex, &color) in colors.iter().enumerate() {
        if !l.list(vertex).contains(&color) {
            return Err(Violation::NotInList { vertex, color });
        }
    }
    let m = multiplicities(l);
    for (color, Quota { lo, hi }) in quotas(&m, l.k()).iter() {
        let used = colors.iter().filter(|&&c| c == color).count();
        if used < lo || used > hi {
            return Err(Violation::Quota {
                color,
                used,
                lo,
                hi,
            });
        }
    }
    Ok(())
}

/// Computes the vertex order for `g`.
pub fn vertex_order(g: &Graph, order: VertexOrder) -> Vec<Vertex> {
    match order {
        VertexOrder::Natural => (0..g.order()).collect(),
        VertexOrder::Smart => {
            let analysis = g.analyze();
            let mut seen = vec![false; g.order()];
            let mut out = Vec::with_capacity(g.order());
            for component in &analysis.components {
                let root = component.vertices[0];
                seen[root] = true;
                let start = out.len();
                out.push(root);
                let mut head = start;
                while head < out.len() {
                    let u = out[head];
                    head += 1;
                    for &w in g.neighbors(u) {
                        if !seen[w] {
                            seen[w] = true;
                            out.push(w);
                        }
                    }
                }
            }
            out
        }
    }
}

/// Reusable search workspace bound to one graph. Not shared between
/// threads; build one per worker.
pub struct Solver<'g> {
    graph: &'g Graph,
    options: SolverOptions,
    order: Vec<Vertex>,
    /// For each position, the earlier positions adjacent to it.
    back: Vec<Vec<usize>>,
    // per-search state, indexed by position or by color
    chosen: Vec<Color>,
    next_choice: Vec<usize>,
    count: Vec<usize>,
    remaining: Vec<usize>,
    lo: Vec<usize>,
    hi: Vec<usize>,
}

enum Goal {
    First,
    Count,
}

impl<'g> Solver<'g> {
    pub fn new(graph: &'g Graph, options: SolverOptions) -> Self {
        let order = vertex_order(graph, options.order);
        let mut position = vec![0; graph.order()];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        let back = order
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let mut earlier: Vec<usize> = graph
                    .neighbors(v)
                    .iter()
                    .map(|&w| position[w])
                    .filter(|&p| p < i)
                    .collect();
                earlier.sort_unstable();
                earlier
            })
            .collect();
        let n = graph.order();
        Solver {
            graph,
            options,
            order,
            back,
            chosen: vec![0; n],
            next_choice: vec![0; n + 1],
            count: Vec::new(),
            remaining: Vec::new(),
            lo: Vec::new(),
            hi: Vec::new(),
        }
    }

    pub fn graph(&self) -> &Graph {
        self.graph
    }

    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    /// Searches for the first proportional coloring under the fixed order.
    pub fn solve(&mut self, l: &ListAssignment) -> SolveOutcome {
        assert_eq!(l.len(), self.graph.order(), "assignment not bound to graph");
        let lists: Vec<&[Color]> = l.lists().iter().map(Vec::as_slice).collect();
        let (found, nodes) = self.run(&lists, l.k(), l.ell(), Goal::First);
        if found == 0 {
            return SolveOutcome {
                status: SolveStatus::None,
                coloring: None,
                nodes_explored: nodes,
            };
        }
        let mut colors = vec![0; self.graph.order()];
        for (i, &v) in self.order.iter().enumerate() {
            colors[v] = self.chosen[i];
        }
        let coloring = ProportionalColoring::certify(self.graph, l, colors)
            .expect("search produced a coloring that fails validation");
        SolveOutcome {
            status: SolveStatus::Found,
            coloring: Some(coloring),
            nodes_explored: nodes,
        }
    }

    /// Existence only, on raw per-vertex sorted lists.
    pub fn exists(&mut self, lists: &[&[Color]], k: usize, ell: Color) -> bool {
        self.run(lists, k, ell, Goal::First).0 > 0
    }

    /// Number of proportional colorings (test oracle).
    pub fn count(&mut self, l: &ListAssignment) -> u64 {
        let lists: Vec<&[Color]> = l.lists().iter().map(Vec::as_slice).collect();
        self.run(&lists, l.k(), l.ell(), Goal::Count).0
    }

    /// Returns `(colorings found, nodes explored)`. On `Goal::First` with a
    /// success, `self.chosen` holds the coloring by position.
    fn run(&mut self, lists: &[&[Color]], k: usize, ell: Color, goal: Goal) -> (u64, u64) {
        let n = self.order.len();
        let colors = ell as usize + 1;
        self.count.clear();
        self.count.resize(colors, 0);
        self.remaining.clear();
        self.remaining.resize(colors, 0);
        for list in lists {
            for &c in *list {
                self.remaining[c as usize] += 1;
            }
        }
        self.lo.clear();
        self.hi.clear();
        for &eta in &self.remaining {
            self.lo.push(eta / k);
            self.hi.push(eta.div_ceil(k));
        }

        let Pruning { upper, lower } = self.options.pruning;
        let mut found = 0u64;
        let mut nodes = 0u64;
        let mut pos = 0usize;
        self.next_choice[0] = 0;

        loop {
            if pos == n {
                let ok =
                    (1..colors).all(|c| self.lo[c] <= self.count[c] && self.count[c] <= self.hi[c]);
                if ok {
                    found += 1;
                    if matches!(goal, Goal::First) {
                        return (found, nodes);
                    }
                }
                if n == 0 {
                    return (found, nodes);
                }
                pos -= 1;
                self.undo(lists[self.order[pos]], pos);
                continue;
            }

            let list = lists[self.order[pos]];
            let mut advanced = false;
            while self.next_choice[pos] < list.len() {
                let c = list[self.next_choice[pos]];
                self.next_choice[pos] += 1;
                if self.back[pos].iter().any(|&p| self.chosen[p] == c) {
                    continue;
                }
                if upper && self.count[c as usize] + 1 > self.hi[c as usize] {
                    continue;
                }
                nodes += 1;
                self.chosen[pos] = c;
                self.count[c as usize] += 1;
                for &d in list {
                    self.remaining[d as usize] -= 1;
                }
                let feasible = !lower
                    || list.iter().all(|&d| {
                        let d = d as usize;
                        self.lo[d] <= self.count[d] + self.remaining[d]
                    });
                if feasible {
                    pos += 1;
                    self.next_choice[pos] = 0;
                    advanced = true;
                    break;
                }
                self.undo(list, pos);
            }
            if advanced {
                continue;
            }
            if pos == 0 {
                return (found, nodes);
            }
            pos -= 1;
            self.undo(lists[self.order[pos]], pos);
        }
    }

    fn undo(&mut self, list: &[Color], pos: usize) {
        self.count[self.chosen[pos] as usize] -= 1;
        for &d in list {
            self.remaining[d as usize] += 1;
        }
    }
}

/// One-shot search with default options.
pub fn find_proportional_coloring(g: &Graph, l: &ListAssignment) -> SolveOutcome {
    Solver::new(g, SolverOptions::default()).solve(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::AssignmentSpace;
    use proptest::prelude::*;

    fn lists(raw: &[&[Color]]) -> Vec<Vec<Color>> {
        raw.iter().map(|l| l.to_vec()).collect()
    }

    #[test]
    fn claw_with_identical_lists_has_none() {
        let claw = Graph::star(3).unwrap();
        let l = ListAssignment::uniform(4, 2, 3, &[1, 2]).unwrap();
        assert_eq!(
            find_proportional_coloring(&claw, &l).status,
            SolveStatus::None
        );
    }

    #[test]
    fn single_vertex_is_colorable() {
        let p1 = Graph::path(1).unwrap();
        let l = ListAssignment::uniform(1, 2, 2, &[1, 2]).unwrap();
        let out = find_proportional_coloring(&p1, &l);
        assert!(out.is_found());
        assert_eq!(out.coloring.unwrap().colors(), &[1]);
    }

    #[test]
    fn c4_plus_p1_case_one() {
        let g = Graph::cycle(4)
            .unwrap()
            .disjoint_union(&Graph::path(1).unwrap());
        let l = ListAssignment::new(2, 3, lists(&[&[1, 2], &[1, 3], &[1, 2], &[1, 3], &[1, 2]]))
            .unwrap();
        let out = find_proportional_coloring(&g, &l);
        assert!(out.is_found());
        assert_eq!(validate(&g, &l, &[2, 1, 2, 3, 1]), Ok(()));
    }

    #[test]
    fn validate_reports_first_violation() {
        let p2 = Graph::path(2).unwrap();
        let l = ListAssignment::uniform(2, 2, 2, &[1, 2]).unwrap();
        assert_eq!(
            validate(&p2, &l, &[1, 1]),
            Err(Violation::Improper {
                u: 0,
                v: 1,
                color: 1
            })
        );
        assert_eq!(
            validate(&p2, &l, &[2, 2]),
            Err(Violation::Improper {
                u: 0,
                v: 1,
                color: 2
            })
        );
        assert_eq!(
            validate(&p2, &l, &[1, 3]),
            Err(Violation::NotInList {
                vertex: 1,
                color: 3
            })
        );
        assert_eq!(
            validate(&p2, &l, &[1]),
            Err(Violation::WrongLength {
                colors: 1,
                vertices: 2
            })
        );
        let p3 = Graph::empty(3).unwrap();
        let l3 = ListAssignment::uniform(3, 2, 2, &[1, 2]).unwrap();
        assert_eq!(
            validate(&p3, &l3, &[1, 1, 1]),
            Err(Violation::Quota {
                color: 1,
                used: 3,
                lo: 1,
                hi: 2
            })
        );
        assert_eq!(
            Violation::Improper {
                u: 0,
                v: 1,
                color: 1
            }
            .to_string(),
            "improper: edge (1, 2) has both ends colored 1"
        );
    }

    #[test]
    fn smart_order_follows_neighbors() {
        let g = Graph::new(5, [(0, 4), (4, 2), (1, 3)]).unwrap();
        let order = vertex_order(&g, VertexOrder::Smart);
        assert_eq!(order, vec![0, 4, 2, 1, 3]);
        for (i, &v) in order.iter().enumerate() {
            let first_of_component = i == 0 || v == 1;
            assert!(first_of_component || order[..i].iter().any(|&u| g.has_edge(u, v)));
        }
        assert_eq!(vertex_order(&g, VertexOrder::Natural), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn deterministic_first_coloring() {
        let g = Graph::path(6).unwrap();
        let l = ListAssignment::new(
            2,
            4,
            lists(&[&[1, 2], &[1, 3], &[2, 4], &[1, 4], &[3, 4], &[1, 2]]),
        )
        .unwrap();
        let a = find_proportional_coloring(&g, &l);
        let b = find_proportional_coloring(&g, &l);
        assert_eq!(a, b);
    }

    #[test]
    fn zero_lower_quota_colors_may_go_unused() {
        // each color appears once: lo = 0, hi = 1
        let g = Graph::empty(2).unwrap();
        let l = ListAssignment::new(2, 4, lists(&[&[1, 2], &[3, 4]])).unwrap();
        let out = find_proportional_coloring(&g, &l);
        assert_eq!(out.coloring.unwrap().colors(), &[1, 3]);
    }

    /// Exhaustive oracle: all `k^n` list colorings checked against the
    /// three clauses directly.
    fn brute_force_exists(g: &Graph, l: &ListAssignment) -> bool {
        let n = g.order();
        let k = l.k();
        let total = k.pow(n as u32);
        (0..total).any(|mut code| {
            let colors: Vec<Color> = (0..n)
                .map(|v| {
                    let c = l.list(v)[code % k];
                    code /= k;
                    c
                })
                .collect();
            validate(g, l, &colors).is_ok()
        })
    }

    fn graph_from_mask(n: usize, mask: u32) -> Graph {
        let mut edges = Vec::new();
        let mut bit = 0;
        for u in 0..n {
            for v in u + 1..n {
                if mask >> bit & 1 == 1 {
                    edges.push((u, v));
                }
                bit += 1;
            }
        }
        Graph::new(n, edges).unwrap()
    }

    #[test]
    fn agrees_with_brute_force_on_small_graphs() {
        for n in 1..=4 {
            let pairs = n * (n - 1) / 2;
            let space = AssignmentSpace::new(n, 2, 3).unwrap();
            for mask in 0..(1u32 << pairs) {
                let g = graph_from_mask(n, mask);
                let mut smart = Solver::new(&g, SolverOptions::default());
                for l in space.iter() {
                    let out = smart.solve(&l);
                    assert_eq!(out.is_found(), brute_force_exists(&g, &l), "{g} {l}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn pruning_never_changes_verdicts(
            n in 1usize..8,
            mask in any::<u32>(),
            index in any::<u64>(),
            ell in 2u16..6,
            natural in any::<bool>(),
        ) {
            let g = graph_from_mask(n, mask & ((1u32 << (n * (n - 1) / 2)) - 1));
            let space = AssignmentSpace::new(n, 2, ell).unwrap();
            let l = space.decode(index % space.len()).unwrap();
            let order = if natural { VertexOrder::Natural } else { VertexOrder::Smart };
            let pruned = Solver::new(&g, SolverOptions { order, pruning: Pruning::ALL }).solve(&l);
            let plain = Solver::new(&g, SolverOptions { order, pruning: Pruning::NONE }).solve(&l);
            prop_assert_eq!(pruned.is_found(), plain.is_found());
            prop_assert_eq!(pruned.is_found(), brute_force_exists(&g, &l));
            if let Some(c) = &pruned.coloring {
                prop_assert!(validate(&g, &l, c.colors()).is_ok());
            }
            // the full coloring tree has sum_{i=1..n} k^i nodes
            let tree: u64 = (1..=n as u32).map(|i| 2u64.pow(i)).sum();
            prop_assert!(pruned.nodes_explored <= tree);
            prop_assert!(plain.nodes_explored <= tree);
        }

        #[test]
        fn counting_matches_brute_force(n in 1usize..7, mask in any::<u32>(), index in any::<u64>()) {
            let g = graph_from_mask(n, mask & ((1u32 << (n * (n - 1) / 2)) - 1));
            let space = AssignmentSpace::new(n, 2, 4).unwrap();
            let l = space.decode(index % space.len()).unwrap();
            let k = 2usize;
            let brute = (0..k.pow(n as u32)).filter(|&code| {
                let mut code = code;
                let colors: Vec<Color> = (0..n).map(|v| { let c = l.list(v)[code % k]; code /= k; c }).collect();
                validate(&g, &l, &colors).is_ok()
            }).count() as u64;
            prop_assert_eq!(Solver::new(&g, SolverOptions::default()).count(&l), brute);
        }
    }
}
