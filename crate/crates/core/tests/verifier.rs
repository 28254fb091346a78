use propchoose::{
    find_proportional_coloring, verify_choosable, verify_table, AssignmentSpace, EnumerationMode,
    Graph, TableRow, VerifyOptions,
};

fn opts(mode: EnumerationMode, jobs: usize) -> VerifyOptions {
    VerifyOptions {
        mode,
        jobs,
        ..VerifyOptions::default()
    }
}

fn choosable(g: &Graph, k: usize, ell: u16) -> bool {
    verify_choosable(g, k, ell, &VerifyOptions::default())
        .unwrap()
        .choosable
}

fn paths(range: std::ops::RangeInclusive<usize>, k: usize, ell: u16) -> Vec<TableRow> {
    range
        .map(|n| TableRow {
            label: format!("P{n}"),
            graph: Graph::path(n).unwrap(),
            k,
            ell,
        })
        .collect()
}

#[test]
fn p7_at_24_checks_every_assignment() {
    let v = verify_choosable(&Graph::path(7).unwrap(), 2, 4, &VerifyOptions::default()).unwrap();
    assert!(v.choosable);
    assert_eq!(v.assignments_checked, 279_936);
}

#[test]
fn p6_plus_p1_at_24() {
    let g = Graph::path(6)
        .unwrap()
        .disjoint_union(&Graph::path(1).unwrap());
    let v = verify_choosable(&g, 2, 4, &VerifyOptions::default()).unwrap();
    assert!(v.choosable);
    assert_eq!(v.assignments_checked, 279_936);
}

#[test]
fn path_table_at_24() {
    let report = verify_table(&paths(1..=8, 2, 4), &opts(EnumerationMode::Canonical, 1));
    let bits: Vec<bool> = report.rows.iter().map(|r| r.choosable().unwrap()).collect();
    assert_eq!(bits, [true, true, true, true, true, false, true, false]);
}

#[test]
fn paths_at_23_all_choosable() {
    let report = verify_table(&paths(1..=8, 2, 3), &VerifyOptions::default());
    assert!(report.rows.iter().all(|r| r.choosable() == Some(true)));
}

#[test]
fn even_cycles_at_23_fail() {
    let rows: Vec<TableRow> = [4, 6]
        .iter()
        .map(|&n| TableRow {
            label: format!("C{n}"),
            graph: Graph::cycle(n).unwrap(),
            k: 2,
            ell: 3,
        })
        .collect();
    let report = verify_table(&rows, &VerifyOptions::default());
    assert!(report.rows.iter().all(|r| r.choosable() == Some(false)));
}

#[test]
fn full_mode_count_equals_space_size() {
    for g in Graph::all_labeled(3).unwrap() {
        let v = verify_choosable(&g, 2, 3, &VerifyOptions::default()).unwrap();
        if v.choosable {
            assert_eq!(v.assignments_checked, 27);
        } else {
            let w = v.witness.unwrap();
            assert!(!find_proportional_coloring(&g, &w.assignment).is_found());
        }
    }
}

#[test]
fn palette_monotonicity() {
    for n in 1..=4 {
        for g in Graph::all_labeled(n).unwrap() {
            let verdicts: Vec<bool> = (2..=5).map(|ell| choosable(&g, 2, ell)).collect();
            for w in verdicts.windows(2) {
                assert!(!w[1] || w[0], "{g:?}: {verdicts:?}");
            }
        }
    }
}

#[test]
fn canonical_agrees_with_full() {
    for n in 1..=4 {
        for g in Graph::all_labeled(n).unwrap() {
            for ell in [3, 4] {
                let full = verify_choosable(&g, 2, ell, &opts(EnumerationMode::Full, 1)).unwrap();
                let canon =
                    verify_choosable(&g, 2, ell, &opts(EnumerationMode::Canonical, 1)).unwrap();
                assert_eq!(full.choosable, canon.choosable, "{g:?} ell={ell}");
                assert_eq!(
                    full.witness.map(|w| w.index),
                    canon.witness.map(|w| w.index),
                    "{g:?} ell={ell}"
                );
            }
        }
    }
}

#[test]
fn canonical_count_is_orbit_count() {
    let space = AssignmentSpace::new(4, 2, 4).unwrap();
    let orbits = space.iter_canonical().count() as u64;
    let v = verify_choosable(
        &Graph::path(4).unwrap(),
        2,
        4,
        &opts(EnumerationMode::Canonical, 2),
    )
    .unwrap();
    assert!(v.choosable);
    assert_eq!(v.assignments_checked, orbits);
}

#[test]
fn spanning_supergraphs_inherit_failure() {
    // a sample of graphs on 5 vertices; deleting one edge gives a spanning subgraph
    let mut checked = 0;
    for g in Graph::all_labeled(5).unwrap().step_by(7) {
        let edges = g.edges().to_vec();
        for skip in 0..edges.len() {
            let h = Graph::new(
                5,
                edges
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .map(|(_, &e)| e),
            )
            .unwrap();
            assert!(h.is_spanning_subgraph_of(&g));
            if !choosable(&h, 2, 3) {
                assert!(!choosable(&g, 2, 3), "{h:?} inside {g:?}");
                checked += 1;
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn worker_count_does_not_change_the_answer() {
    let graphs = [
        Graph::path(6).unwrap(),
        Graph::cycle(5).unwrap(),
        Graph::path(3)
            .unwrap()
            .disjoint_union(&Graph::path(3).unwrap()),
        Graph::path(5).unwrap(),
    ];
    for g in &graphs {
        for mode in [EnumerationMode::Full, EnumerationMode::Canonical] {
            let base = verify_choosable(g, 2, 4, &opts(mode, 1)).unwrap();
            for jobs in [2, 8] {
                let v = verify_choosable(g, 2, 4, &opts(mode, jobs)).unwrap();
                assert_eq!(v.choosable, base.choosable);
                assert_eq!(v.witness, base.witness);
                assert_eq!(v.assignments_checked, base.assignments_checked);
            }
        }
    }
}
