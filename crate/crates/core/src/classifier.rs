//! Rule-based classification of proportional `(2, ℓ)`-choosability.
//!
//! Rules are tried in a fixed order and the first that applies decides.
//! When none applies the answer is [`Status::Unknown`]; the classifier never
//! guesses. Everything here runs in time linear in the graph size apart
//! from the subset-sum behind [`equitably_2_colorable`], which is
//! quadratic in the number of vertices.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::assignment::Color;
use crate::graph::{Analysis, Graph, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("palette bound must be at least 2, got {0}")]
    PaletteTooSmall(Color),
}

/// Outcome of the equitable 2-coloring decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EquitableTwoColoring {
    /// A proper 2-coloring with `||X| - |Y|| <= 1`.
    Colorable {
        x: Vec<Vertex>,
        y: Vec<Vertex>,
    },
    NotBipartite {
        odd_cycle: Vec<Vertex>,
    },
    /// Bipartite, but no choice of sides balances the per-component
    /// imbalances listed here.
    Unbalanced {
        imbalances: Vec<usize>,
    },
}

impl EquitableTwoColoring {
    pub fn is_colorable(&self) -> bool {
        matches!(self, EquitableTwoColoring::Colorable { .. })
    }
}

/// Decides whether `g` has a proper 2-coloring whose classes differ in size
/// by at most one. Each component of a bipartite graph contributes its
/// imbalance `d_i` with a free sign; a subset-sum over the `d_i` finds signs
/// with `|Σ ±d_i| <= 1` when they exist.
pub fn equitably_2_colorable(g: &Graph) -> EquitableTwoColoring {
    equitable_from_analysis(g, &g.analyze())
}

fn equitable_from_analysis(g: &Graph, analysis: &Analysis) -> EquitableTwoColoring {
    let bipartition = match &analysis.bipartition {
        Ok(b) => b,
        Err(cycle) => {
            return EquitableTwoColoring::NotBipartite {
                odd_cycle: cycle.0.clone(),
            }
        }
    };
    let imbalances: Vec<usize> = bipartition
        .part_sizes
        .iter()
        .map(|&(x, y)| x.abs_diff(y))
        .collect();
    let total: usize = imbalances.iter().sum();

    // reach[i][s]: some subset of the first i imbalances sums to s
    let mut reach = vec![vec![false; total + 1]; imbalances.len() + 1];
    reach[0][0] = true;
    for (i, &d) in imbalances.iter().enumerate() {
        for s in 0..=total {
            reach[i + 1][s] = reach[i][s] || (s >= d && reach[i][s - d]);
        }
    }
    // a subset summing to s gives the signed total `total - 2s`
    let Some(mut s) = [total / 2, total.div_ceil(2)]
        .into_iter()
        .find(|&s| reach[imbalances.len()][s])
    else {
        return EquitableTwoColoring::Unbalanced { imbalances };
    };

    let mut flip = vec![false; imbalances.len()];
    for i in (0..imbalances.len()).rev() {
        if !reach[i][s] {
            flip[i] = true;
            s -= imbalances[i];
        }
    }
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (i, component) in analysis.components.iter().enumerate() {
        let (cx, cy) = bipartition.part_sizes[i];
        // put the larger side of flipped components into Y, of the rest into X
        let larger_is_y = cy > cx;
        let swap = larger_is_y != flip[i];
        for &v in &component.vertices {
            if bipartition.is_in_y(v) != swap {
                y.push(v);
            } else {
                x.push(v);
            }
        }
    }
    x.sort_unstable();
    y.sort_unstable();
    debug_assert!(x.len().abs_diff(y.len()) <= 1 && x.len() + y.len() == g.order());
    EquitableTwoColoring::Colorable { x, y }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    KnownYes,
    KnownNo,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub status: Status,
    /// Identifier of the deciding rule; `None` exactly when unknown.
    pub rule: Option<String>,
    pub ell: Color,
    /// Human-readable record of the rules tried and the evidence used.
    pub trace: Vec<String>,
}

impl Classification {
    /// `Some(choosable)` when the status is known.
    pub fn verdict(&self) -> Option<bool> {
        match self.status {
            Status::KnownYes => Some(true),
            Status::KnownNo => Some(false),
            Status::Unknown => None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
struct SpecialCase {
    shape: String,
    ell: Color,
    choosable: bool,
    rule: String,
    note: String,
}

fn special_cases() -> &'static [SpecialCase] {
    static TABLE: OnceLock<Vec<SpecialCase>> = OnceLock::new();
    TABLE.get_or_init(|| {
        serde_json::from_str(include_str!("special_cases.json"))
            .expect("special case table is valid JSON")
    })
}

/// A linear forest whose largest component has at most 5 vertices and
/// whose other components have at most 2. These are exactly the graphs
/// that are proportionally `(2, ℓ)`-choosable for every `ℓ`.
fn is_small_linear_forest(analysis: &Analysis) -> bool {
    let orders = analysis.component_orders();
    analysis.is_linear_forest() && orders[0] <= 5 && orders[1..].iter().all(|&c| c <= 2)
}

/// Whether a linear forest with these component orders has a spanning
/// subgraph `X + t P_2` with `X` one of `P_3 + P_3`, `P_6`, or `P_m` with
/// `m >= 8`, all of which fail at palette 4. A path component can be cut
/// into consecutive pieces of any orders, so this is arithmetic on orders:
///
/// - two odd components, both of order at least 3, the rest even;
/// - no odd component and one of order at least 6;
/// - one odd component of order at least 9, the rest even.
fn has_spanning_obstruction_ell4(orders: &[usize]) -> Option<String> {
    let odd: Vec<usize> = orders.iter().copied().filter(|c| c % 2 == 1).collect();
    match odd.as_slice() {
        [a, b] if *a >= 3 && *b >= 3 => Some(format!(
            "P3+P3 inside the odd components P{a}, P{b}; every other piece is P2"
        )),
        [] => orders
            .iter()
            .find(|&&c| c >= 6)
            .map(|c| format!("P3+P3 inside P{c}; every other piece is P2")),
        [a] if *a >= 9 => Some(format!("P{a} itself fails; every other piece is P2")),
        _ => None,
    }
}

/// Classifies proportional `(2, ℓ)`-choosability of `g`.
pub fn classify(g: &Graph, ell: Color) -> Result<Classification, ClassifyError> {
    if ell < 2 {
        return Err(ClassifyError::PaletteTooSmall(ell));
    }
    let analysis = g.analyze();
    let mut trace = Vec::new();
    let n = g.order();
    let decide = |status: Status, rule: &str, trace: Vec<String>| Classification {
        status,
        rule: Some(rule.to_string()),
        ell,
        trace,
    };
    let yes_no = |b: bool| if b { Status::KnownYes } else { Status::KnownNo };

    if ell == 2 {
        let eq = equitable_from_analysis(g, &analysis);
        trace.push(match &eq {
            EquitableTwoColoring::Colorable { x, y } => {
                format!(
                    "equitable 2-coloring with |X| = {}, |Y| = {}",
                    x.len(),
                    y.len()
                )
            }
            EquitableTwoColoring::NotBipartite { odd_cycle } => {
                format!("odd cycle {}", one_based(odd_cycle))
            }
            EquitableTwoColoring::Unbalanced { imbalances } => {
                format!("component imbalances {imbalances:?} cannot be signed to total at most 1")
            }
        });
        trace.push("palette 2: choosable iff equitably 2-colorable".into());
        return Ok(decide(
            yes_no(eq.is_colorable()),
            "equitable-2-coloring",
            trace,
        ));
    }

    if let Err(cycle) = &analysis.bipartition {
        trace.push(format!(
            "odd cycle {}: identical lists {{1,2}} leave no proper coloring",
            one_based(&cycle.0)
        ));
        return Ok(decide(Status::KnownNo, "odd-cycle", trace));
    }
    trace.push("bipartite".into());

    if ell >= 5 {
        let small = is_small_linear_forest(&analysis);
        trace.push(format!(
            "component orders {:?}; linear forest: {}",
            analysis.component_orders(),
            analysis.is_linear_forest()
        ));
        trace.push(
            "palette >= 5: choosable iff linear forest with largest component <= 5 and the rest <= 2"
                .into(),
        );
        return Ok(decide(yes_no(small), "small-linear-forest-ell5", trace));
    }

    let max_degree = analysis.max_degree;
    if max_degree >= 3 {
        let center = (0..n)
            .find(|&v| g.degree(v) >= 3)
            .expect("vertex of maximum degree");
        trace.push(format!(
            "vertex {} has degree {max_degree}: a claw gets the star witness at palette 3",
            center + 1
        ));
        return Ok(decide(Status::KnownNo, "claw-subgraph", trace));
    }
    trace.push(format!("maximum degree {max_degree}"));

    if ell == 4 && analysis.has_cycle {
        trace.push("contains an (even) cycle: the even-cycle witness applies".into());
        return Ok(decide(Status::KnownNo, "cycle-ell4", trace));
    }

    if ell == 4 && analysis.is_path() {
        trace.push(format!("P{n}: palette 4 accepts exactly P1..P5 and P7"));
        return Ok(decide(yes_no(n <= 5 || n == 7), "path-ell4", trace));
    }

    if ell == 3 && analysis.is_connected() {
        if analysis.is_path() {
            trace.push(format!("P{n}: every path is choosable at palette 3"));
            return Ok(decide(Status::KnownYes, "path-ell3", trace));
        }
        trace.push(format!(
            "C{n}: alternating lists {{1,3}}, {{1,2}} leave no proportional coloring"
        ));
        return Ok(decide(Status::KnownNo, "even-cycle-ell3", trace));
    }

    if is_small_linear_forest(&analysis) {
        trace.push(format!(
            "component orders {:?}: largest <= 5 and the rest <= 2, choosable at every palette",
            analysis.component_orders()
        ));
        return Ok(decide(Status::KnownYes, "small-linear-forest", trace));
    }

    if ell == 4 && analysis.is_linear_forest() {
        if let Some(certificate) = has_spanning_obstruction_ell4(&analysis.component_orders()) {
            trace.push(format!(
                "spanning subgraph with a failing core: {certificate}"
            ));
            return Ok(decide(Status::KnownNo, "spanning-obstruction-ell4", trace));
        }
        trace.push("no spanning obstruction from component orders".into());
    }

    if let Some(shape) = analysis.shape_signature() {
        if let Some(case) = special_cases()
            .iter()
            .find(|c| c.shape == shape && c.ell == ell)
        {
            trace.push(format!("{shape} at palette {ell}: {}", case.note));
            return Ok(decide(yes_no(case.choosable), &case.rule, trace));
        }
    }

    trace.push("no rule applies".into());
    Ok(Classification {
        status: Status::Unknown,
        rule: None,
        ell,
        trace,
    })
}

fn one_based(vertices: &[Vertex]) -> String {
    let labels: Vec<String> = vertices.iter().map(|v| (v + 1).to_string()).collect();
    labels.join("-")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn union(parts: &[Graph]) -> Graph {
        parts[1..]
            .iter()
            .fold(parts[0].clone(), |acc, g| acc.disjoint_union(g))
    }

    fn status(g: &Graph, ell: Color) -> (Status, Option<String>) {
        let c = classify(g, ell).unwrap();
        (c.status, c.rule)
    }

    #[test]
    fn equitable_examples() {
        assert!(equitably_2_colorable(&Graph::complete_bipartite(3, 3).unwrap()).is_colorable());
        assert_eq!(
            equitably_2_colorable(&Graph::star(3).unwrap()),
            EquitableTwoColoring::Unbalanced {
                imbalances: vec![2]
            }
        );
        match equitably_2_colorable(&Graph::path(2).unwrap()) {
            EquitableTwoColoring::Colorable { x, y } => assert_eq!((x.len(), y.len()), (1, 1)),
            other => panic!("{other:?}"),
        }
        let p3p3 = union(&[Graph::path(3).unwrap(), Graph::path(3).unwrap()]);
        match equitably_2_colorable(&p3p3) {
            EquitableTwoColoring::Colorable { x, y } => {
                assert_eq!((x.len(), y.len()), (3, 3));
                for (u, v) in p3p3.edges() {
                    assert_ne!(x.contains(u), x.contains(v));
                }
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            equitably_2_colorable(&Graph::cycle(5).unwrap()),
            EquitableTwoColoring::NotBipartite { .. }
        ));
    }

    #[test]
    fn listed_examples() {
        let p7 = Graph::path(7).unwrap();
        assert_eq!(status(&p7, 4), (Status::KnownYes, Some("path-ell4".into())));
        assert_eq!(status(&Graph::cycle(6).unwrap(), 5).0, Status::KnownNo);
        assert_eq!(
            status(&Graph::star(3).unwrap(), 3),
            (Status::KnownNo, Some("claw-subgraph".into()))
        );
        let p6p1 = union(&[Graph::path(6).unwrap(), Graph::path(1).unwrap()]);
        assert_eq!(status(&p6p1, 3), (Status::Unknown, None));
        assert_eq!(
            status(&p6p1, 4),
            (Status::KnownYes, Some("p6-plus-p1-ell4".into()))
        );
        let p3p3 = union(&[Graph::path(3).unwrap(), Graph::path(3).unwrap()]);
        assert_eq!(
            status(&p3p3, 4),
            (Status::KnownNo, Some("spanning-obstruction-ell4".into()))
        );
        let c4p1 = union(&[Graph::cycle(4).unwrap(), Graph::path(1).unwrap()]);
        assert_eq!(
            status(&c4p1, 3),
            (Status::KnownYes, Some("c4-plus-p1-ell3".into()))
        );
        assert_eq!(status(&c4p1, 4).0, Status::KnownNo);
        assert_eq!(classify(&p7, 1), Err(ClassifyError::PaletteTooSmall(1)));
    }

    #[test]
    fn path_tables() {
        for n in 1..=12 {
            let p = Graph::path(n).unwrap();
            let expect4 = if n <= 5 || n == 7 {
                Status::KnownYes
            } else {
                Status::KnownNo
            };
            assert_eq!(status(&p, 4).0, expect4, "P{n}");
            assert_eq!(status(&p, 3).0, Status::KnownYes, "P{n}");
            let expect5 = if n <= 5 {
                Status::KnownYes
            } else {
                Status::KnownNo
            };
            assert_eq!(status(&p, 5).0, expect5, "P{n}");
        }
        for n in [4, 6, 8] {
            assert_eq!(
                status(&Graph::cycle(n).unwrap(), 3),
                (Status::KnownNo, Some("even-cycle-ell3".into()))
            );
        }
        assert_eq!(
            status(&Graph::cycle(7).unwrap(), 3).1,
            Some("odd-cycle".into())
        );
    }

    #[test]
    fn spanning_obstruction_arithmetic() {
        assert!(has_spanning_obstruction_ell4(&[3, 3]).is_some());
        assert!(has_spanning_obstruction_ell4(&[5, 3, 2]).is_some());
        assert!(has_spanning_obstruction_ell4(&[6, 2]).is_some());
        assert!(has_spanning_obstruction_ell4(&[9, 4]).is_some());
        assert!(has_spanning_obstruction_ell4(&[4, 4]).is_none());
        assert!(has_spanning_obstruction_ell4(&[7, 2]).is_none());
        assert!(has_spanning_obstruction_ell4(&[6, 1]).is_none());
        assert!(has_spanning_obstruction_ell4(&[3, 3, 1, 1]).is_none());
        assert!(has_spanning_obstruction_ell4(&[3, 3, 3]).is_none());
    }

    #[test]
    fn special_case_table_parses() {
        assert_eq!(special_cases().len(), 2);
        assert!(special_cases().iter().all(|c| c.choosable));
    }

    #[test]
    fn trace_is_nonempty_and_rule_matches_status() {
        for g in [
            Graph::path(4).unwrap(),
            Graph::cycle(5).unwrap(),
            Graph::star(4).unwrap(),
        ] {
            for ell in 2..=6 {
                let c = classify(&g, ell).unwrap();
                assert!(!c.trace.is_empty());
                assert_eq!(c.rule.is_some(), c.status != Status::Unknown);
            }
        }
    }
}
