//! Explicit bad list assignments and the coloring devices used on paths.
//!
//! Every constructor here returns a [`WitnessSpec`] whose assignment admits
//! no proportional coloring. Positions inside embeddings are counted from 1
//! in the sense of "odd position" and "even position", matching the usual
//! `v_1, v_2, ...` naming of a path or cycle.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::assignment::{AssignmentError, Color, ListAssignment, PalettePermutation};
use crate::graph::{Graph, GraphError, Vertex};
use crate::solver::{find_proportional_coloring, SolveOutcome};

pub const CLAIM: &str = "no proportional coloring exists";

#[derive(Debug, Error)]
pub enum WitnessError {
    #[error("vertex {} is not in the graph", .0 + 1)]
    MissingVertex(Vertex),
    #[error("vertices in the embedding must be distinct")]
    RepeatedVertex,
    #[error("edge {}-{} required by the embedding is missing", .0 + 1, .1 + 1)]
    MissingEdge(Vertex, Vertex),
    #[error("cycle embedding has length {0}; an even length of at least 4 is required")]
    BadCycleLength(usize),
    #[error(
        "cycle on {0} vertices: need an even n >= 4 (odd cycles use the identical-list witness)"
    )]
    OddCycle(usize),
    #[error("odd cycle needs an odd n >= 3, got {0}")]
    EvenCycle(usize),
    #[error("base assignment has lists of size {base}, clique size {k} given")]
    ListSizeMismatch { base: usize, k: usize },
    #[error("witness graph is not a spanning subgraph of the host")]
    NotSpanning,
    #[error("path coloring device needs an even m >= 2, got {0}")]
    OddPathLength(usize),
    #[error("parity augmentation takes a (2,3)-assignment, got ({k},{ell})")]
    NotTwoThree { k: usize, ell: Color },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Assignment(#[from] AssignmentError),
}

/// A graph together with an assignment that has no proportional coloring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSpec {
    pub name: String,
    pub graph: Graph,
    pub assignment: ListAssignment,
    pub claim: String,
    pub source: String,
}

impl WitnessSpec {
    fn new(
        name: impl Into<String>,
        graph: Graph,
        assignment: ListAssignment,
        source: &str,
    ) -> Self {
        WitnessSpec {
            name: name.into(),
            graph,
            assignment,
            claim: CLAIM.to_string(),
            source: source.to_string(),
        }
    }

    /// Runs the solver on the witness. A correct witness yields no coloring.
    pub fn solve(&self) -> SolveOutcome {
        find_proportional_coloring(&self.graph, &self.assignment)
    }

    pub fn holds(&self) -> bool {
        !self.solve().is_found()
    }
}

fn check_vertices(g: &Graph, vertices: &[Vertex]) -> Result<(), WitnessError> {
    for (i, &v) in vertices.iter().enumerate() {
        if v >= g.order() {
            return Err(WitnessError::MissingVertex(v));
        }
        if vertices[..i].contains(&v) {
            return Err(WitnessError::RepeatedVertex);
        }
    }
    Ok(())
}

fn check_edge(g: &Graph, u: Vertex, v: Vertex) -> Result<(), WitnessError> {
    if g.has_edge(u, v) {
        Ok(())
    } else {
        Err(WitnessError::MissingEdge(u, v))
    }
}

/// Lists for vertices of `g`: `marked` vertices get their given list, the
/// rest get `rest`.
fn lists_with_default(
    g: &Graph,
    marked: &[(Vertex, [Color; 2])],
    rest: [Color; 2],
) -> Vec<Vec<Color>> {
    let mut lists = vec![rest.to_vec(); g.order()];
    for &(v, list) in marked {
        lists[v] = list.to_vec();
    }
    lists
}

/// Claw obstruction at palette 3: the claw's vertices get `{1,2}`, every
/// other vertex `{2,3}`.
pub fn witness_star_23(
    g: &Graph,
    center: Vertex,
    leaves: [Vertex; 3],
) -> Result<WitnessSpec, WitnessError> {
    check_vertices(g, &[center, leaves[0], leaves[1], leaves[2]])?;
    for leaf in leaves {
        check_edge(g, center, leaf)?;
    }
    let marked: Vec<(Vertex, [Color; 2])> = std::iter::once(center)
        .chain(leaves)
        .map(|v| (v, [1, 2]))
        .collect();
    let assignment = ListAssignment::new(2, 3, lists_with_default(g, &marked, [2, 3]))?;
    Ok(WitnessSpec::new(
        "star23",
        g.clone(),
        assignment,
        "claw obstruction, palette 3",
    ))
}

/// Even-cycle obstruction at palette 4: along the cycle, odd positions get
/// `{1,2}` and even positions `{1,3}`; vertices off the cycle get `{3,4}`.
pub fn witness_even_cycle_24(g: &Graph, cycle: &[Vertex]) -> Result<WitnessSpec, WitnessError> {
    let len = cycle.len();
    if len < 4 || len % 2 == 1 {
        return Err(WitnessError::BadCycleLength(len));
    }
    check_vertices(g, cycle)?;
    for i in 0..len {
        check_edge(g, cycle[i], cycle[(i + 1) % len])?;
    }
    let marked: Vec<(Vertex, [Color; 2])> = cycle
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, if i % 2 == 0 { [1, 2] } else { [1, 3] }))
        .collect();
    let assignment = ListAssignment::new(2, 4, lists_with_default(g, &marked, [3, 4]))?;
    Ok(WitnessSpec::new(
        format!("evencycle24:{len}"),
        g.clone(),
        assignment,
        "even cycle obstruction, palette 4",
    ))
}

/// A copy of `K_{1,2}`: the center and its two leaves.
pub type Cherry = (Vertex, [Vertex; 2]);

/// Two disjoint copies of `K_{1,2}` at palette 5. Centers get `{1,2}`,
/// the leaves of the first copy `{1,3}`, of the second `{1,4}`, and all
/// other vertices `{1,5}`.
pub fn witness_double_claw_25(
    g: &Graph,
    first: Cherry,
    second: Cherry,
) -> Result<WitnessSpec, WitnessError> {
    let (a1, [b0, b1]) = first;
    let (a2, [b2, b3]) = second;
    check_vertices(g, &[a1, b0, b1, a2, b2, b3])?;
    for (center, leaf) in [(a1, b0), (a1, b1), (a2, b2), (a2, b3)] {
        check_edge(g, center, leaf)?;
    }
    let marked = [
        (a1, [1, 2]),
        (a2, [1, 2]),
        (b0, [1, 3]),
        (b1, [1, 3]),
        (b2, [1, 4]),
        (b3, [1, 4]),
    ];
    let assignment = ListAssignment::new(2, 5, lists_with_default(g, &marked, [1, 5]))?;
    Ok(WitnessSpec::new(
        "doubleclaw25",
        g.clone(),
        assignment,
        "two disjoint cherries, palette 5",
    ))
}

/// `P_3 + P_3` at palette 4, vertices laid out as `w1 v1 w2 | w3 v2 w4`.
pub fn witness_p3p3_24() -> WitnessSpec {
    let g = Graph::path(3)
        .expect("P3")
        .disjoint_union(&Graph::path(3).expect("P3"));
    let lists = vec![
        vec![1, 3],
        vec![1, 2],
        vec![1, 3],
        vec![1, 4],
        vec![1, 2],
        vec![1, 4],
    ];
    let assignment = ListAssignment::new(2, 4, lists).expect("valid (2,4)-assignment");
    WitnessSpec::new("p3p3", g, assignment, "two disjoint P3, palette 4")
}

/// `P_9` at palette 4.
pub fn witness_p9_24() -> WitnessSpec {
    let lists = vec![
        vec![1, 2],
        vec![1, 3],
        vec![1, 2],
        vec![1, 3],
        vec![1, 2],
        vec![1, 4],
        vec![1, 3],
        vec![1, 4],
        vec![2, 3],
    ];
    let assignment = ListAssignment::new(2, 4, lists).expect("valid (2,4)-assignment");
    WitnessSpec::new(
        "p9",
        Graph::path(9).expect("P9"),
        assignment,
        "path on nine vertices, palette 4",
    )
}

/// Even cycle `C_n` at palette 3: `v_i` gets `{1,2}` for even `i` and
/// `{1,3}` for odd `i`.
pub fn witness_cycle_23(n: usize) -> Result<WitnessSpec, WitnessError> {
    if n < 4 || n % 2 == 1 {
        return Err(WitnessError::OddCycle(n));
    }
    let lists = (1..=n)
        .map(|i| if i % 2 == 0 { vec![1, 2] } else { vec![1, 3] })
        .collect();
    let assignment = ListAssignment::new(2, 3, lists)?;
    Ok(WitnessSpec::new(
        format!("cycle23:{n}"),
        Graph::cycle(n)?,
        assignment,
        "even cycle, palette 3",
    ))
}

/// Odd cycle with every list `{1,2}`: no proper coloring at all.
pub fn witness_odd_cycle(n: usize) -> Result<WitnessSpec, WitnessError> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(WitnessError::EvenCycle(n));
    }
    let assignment = ListAssignment::uniform(n, 2, 2, &[1, 2])?;
    Ok(WitnessSpec::new(
        format!("oddcycle:{n}"),
        Graph::cycle(n)?,
        assignment,
        "odd cycle, identical lists",
    ))
}

/// Adds a disjoint `K_k` whose vertices all get `{1, ..., k}`. The clique
/// must use every one of those colors exactly once, which leaves the
/// quotas on the base graph unchanged.
pub fn extend_with_clique(base: &WitnessSpec, k: usize) -> Result<WitnessSpec, WitnessError> {
    if base.assignment.k() != k {
        return Err(WitnessError::ListSizeMismatch {
            base: base.assignment.k(),
            k,
        });
    }
    let graph = base.graph.disjoint_union(&Graph::complete(k)?);
    let full: Vec<Color> = (1..=k as Color).collect();
    let clique = ListAssignment::uniform(k, k, k as Color, &full)?;
    let assignment = base.assignment.concat(&clique)?;
    Ok(WitnessSpec::new(
        format!("{}+K{k}", base.name),
        graph,
        assignment,
        &format!("{} with a disjoint clique", base.source),
    ))
}

/// Moves a witness onto a host that contains its graph as a spanning
/// subgraph (same vertex labels). Extra edges only remove colorings.
pub fn transplant(base: &WitnessSpec, host: &Graph) -> Result<WitnessSpec, WitnessError> {
    if !base.graph.is_spanning_subgraph_of(host) {
        return Err(WitnessError::NotSpanning);
    }
    Ok(WitnessSpec::new(
        format!("{}@supergraph", base.name),
        host.clone(),
        base.assignment.clone(),
        &format!("{} on a spanning supergraph", base.source),
    ))
}

/// The two colorings of an even path under [`alpha_pattern`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlphaVariant {
    /// `1, 3, 1, 3, ..., 2`: the spare color 2 sits at the end.
    Alpha2,
    /// `2, 1, 2, 1, ..., 3`: the spare color 3 sits at the end.
    Alpha3,
}

fn check_even_path(m: usize) -> Result<(), WitnessError> {
    if m < 2 || m % 2 == 1 {
        Err(WitnessError::OddPathLength(m))
    } else {
        Ok(())
    }
}

/// The list pattern on `P_m` (m even): odd positions `{1,2}`, even
/// positions `{1,3}`, and the last vertex `{2,3}`.
pub fn alpha_pattern(m: usize) -> Result<ListAssignment, WitnessError> {
    check_even_path(m)?;
    let lists = (1..=m)
        .map(|i| match i {
            _ if i == m => vec![2, 3],
            _ if i % 2 == 1 => vec![1, 2],
            _ => vec![1, 3],
        })
        .collect();
    Ok(ListAssignment::new(2, 3, lists)?)
}

pub fn alpha_coloring(m: usize, variant: AlphaVariant) -> Result<Vec<Color>, WitnessError> {
    check_even_path(m)?;
    let (odd, even, last) = match variant {
        AlphaVariant::Alpha2 => (1, 3, 2),
        AlphaVariant::Alpha3 => (2, 1, 3),
    };
    Ok((1..=m)
        .map(|i| match i {
            _ if i == m => last,
            _ if i % 2 == 1 => odd,
            _ => even,
        })
        .collect())
}

/// Result of [`parity_augment`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityAugmentation {
    /// `P_{n+1}` when augmented, otherwise `P_n`.
    pub graph: Graph,
    /// In the original color names; the new last vertex holds the two
    /// colors of odd multiplicity.
    pub assignment: ListAssignment,
    /// Renames the odd colors to 1 and 2 (smaller first) and the even one
    /// to 3. Identity when nothing was added.
    pub relabel: PalettePermutation,
    pub augmented: bool,
}

impl ParityAugmentation {
    /// The assignment after applying [`Self::relabel`].
    pub fn normalized(&self) -> ListAssignment {
        self.assignment.permute(&self.relabel)
    }
}

/// Makes every multiplicity of a `(2,3)`-assignment on `P_n` even by
/// appending one vertex after vertex `n`. With three colors and total
/// multiplicity `2n`, either zero or two colors are odd. A proportional
/// coloring of the extension restricts to one of the original.
pub fn parity_augment(l: &ListAssignment) -> Result<ParityAugmentation, WitnessError> {
    if l.k() != 2 || l.ell() != 3 {
        return Err(WitnessError::NotTwoThree {
            k: l.k(),
            ell: l.ell(),
        });
    }
    let n = l.len();
    let odd = l.multiplicities().odd_colors();
    let odd: Vec<Color> = (1..=3).filter(|c| odd.contains(c)).collect();
    if odd.is_empty() {
        return Ok(ParityAugmentation {
            graph: Graph::path(n)?,
            assignment: l.clone(),
            relabel: PalettePermutation::identity(3),
            augmented: false,
        });
    }
    debug_assert_eq!(odd.len(), 2);
    let even = (1..=3).find(|c| !odd.contains(c)).expect("one even color");
    let mut images = vec![0; 3];
    images[odd[0] as usize - 1] = 1;
    images[odd[1] as usize - 1] = 2;
    images[even as usize - 1] = 3;
    let relabel = PalettePermutation::from_images(images).expect("a permutation of [3]");
    let mut lists = l.lists().to_vec();
    lists.push(odd);
    Ok(ParityAugmentation {
        graph: Graph::path(n + 1)?,
        assignment: ListAssignment::new(2, 3, lists)?,
        relabel,
        augmented: true,
    })
}

/// First `K_{1,3}` in `g`: lowest center of degree at least 3, with its
/// three lowest neighbors.
pub fn find_star(g: &Graph) -> Option<(Vertex, [Vertex; 3])> {
    (0..g.order()).find_map(|v| match g.neighbors(v) {
        [a, b, c, ..] => Some((v, [*a, *b, *c])),
        _ => None,
    })
}

/// First even cycle found by depth-first search from the lowest vertex,
/// extending paths through neighbors in ascending order. Exponential in the
/// worst case; meant for small graphs.
pub fn find_even_cycle(g: &Graph) -> Option<Vec<Vertex>> {
    fn extend(g: &Graph, path: &mut Vec<Vertex>, on_path: &mut [bool]) -> bool {
        let start = path[0];
        let last = *path.last().expect("nonempty");
        for &w in g.neighbors(last) {
            if w == start && path.len() >= 4 && path.len().is_multiple_of(2) {
                return true;
            }
            // only visit vertices above the start so each cycle is rooted at its minimum
            if w > start && !on_path[w] {
                path.push(w);
                on_path[w] = true;
                if extend(g, path, on_path) {
                    return true;
                }
                on_path[w] = false;
                path.pop();
            }
        }
        false
    }
    let mut on_path = vec![false; g.order()];
    for start in 0..g.order() {
        let mut path = vec![start];
        on_path[start] = true;
        if extend(g, &mut path, &mut on_path) {
            return Some(path);
        }
        on_path[start] = false;
    }
    None
}

/// First pair of vertex-disjoint `K_{1,2}` copies, scanning centers and
/// leaf pairs in ascending order.
pub fn find_two_disjoint_cherries(g: &Graph) -> Option<(Cherry, Cherry)> {
    let cherries: Vec<Cherry> = (0..g.order())
        .flat_map(|v| {
            let nbrs = g.neighbors(v);
            (0..nbrs.len())
                .flat_map(move |i| (i + 1..nbrs.len()).map(move |j| (v, [nbrs[i], nbrs[j]])))
        })
        .collect();
    let touches = |(a, [b, c]): Cherry, v: Vertex| v == a || v == b || v == c;
    for (i, &first) in cherries.iter().enumerate() {
        for &second in &cherries[i + 1..] {
            let (a, [b, c]) = second;
            if ![a, b, c].iter().any(|&v| touches(first, v)) {
                return Some((first, second));
            }
        }
    }
    None
}
