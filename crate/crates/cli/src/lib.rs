//! Library side of the `propchoose` command: report types, the witness
//! name language, the P7 reproduction run, and the classifier survey.

use std::fmt;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use propchoose::witnesses::{find_even_cycle, find_star, find_two_disjoint_cherries};
use propchoose::{
    classify, equitably_2_colorable, extend_with_clique, transplant, verify_choosable,
    witness_cycle_23, witness_double_claw_25, witness_even_cycle_24, witness_p3p3_24,
    witness_p9_24, witness_star_23, AssignmentError, Color, EnumerationMode, Graph, GraphSpec,
    Status, Verdict, VerifyError, VerifyOptions, WitnessSpec,
};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Assignments on `P_7` with lists of size 2 drawn from four colors.
pub const P7_ASSIGNMENTS: u64 = 279_936;

/// Uniform envelope written by `--report`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub subcommand: String,
    pub inputs: Value,
    pub result: Value,
    pub duration_ms: u64,
    pub tool_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl RunReport {
    pub fn new(subcommand: &str, inputs: Value, result: Value, started: Instant) -> Self {
        RunReport {
            subcommand: subcommand.to_string(),
            inputs,
            result,
            duration_ms: started.elapsed().as_millis() as u64,
            tool_version: TOOL_VERSION.to_string(),
            seed: None,
        }
    }

    pub fn write(&self, path: &std::path::Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
    }
}

/// Bad flags or inputs; the binary exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub mod exit {
    pub const OK: i32 = 0;
    pub const NEGATIVE: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const CAP: i32 = 3;
}

/// Maps an error to the process exit status.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if let Some(v) = cause.downcast_ref::<VerifyError>() {
            if v.is_cap() {
                return exit::CAP;
            }
        }
        if let Some(AssignmentError::CapExceeded { .. } | AssignmentError::SpaceTooLarge { .. }) =
            cause.downcast_ref::<AssignmentError>()
        {
            return exit::CAP;
        }
    }
    exit::USAGE
}

pub fn parse_graph(spec: &str) -> Result<(GraphSpec, Graph)> {
    let parsed: GraphSpec = spec.parse().map_err(|e| UsageError(format!("{e}")))?;
    let graph = parsed.build().map_err(|e| UsageError(format!("{e}")))?;
    Ok((parsed, graph))
}

/// JSON summary of a verdict, including the graph spec.
pub fn verdict_json(spec: &GraphSpec, verdict: &Verdict) -> Value {
    let mut value = serde_json::to_value(verdict).expect("verdicts serialize");
    value["graph"] = json!(spec.to_string());
    value
}

/// Builds a witness from its command-line name.
///
/// `star23`, `evencycle24[:n]` and `doubleclaw25` use the given graph when
/// there is one (locating the first star, even cycle, or pair of disjoint
/// cherries) and otherwise `K_{1,3}`, `C_n` and `P_3 + P_3`. The fixed
/// witnesses `p3p3`, `p9` and `cycle23:n` are moved onto the given graph
/// when it contains them as a spanning subgraph, padding `p3p3` with
/// disjoint edges up to the graph's order when needed.
pub fn build_witness(name: &str, graph: Option<&Graph>) -> Result<WitnessSpec> {
    let (kind, arg) = match name.split_once(':') {
        Some((kind, arg)) => (kind, Some(arg)),
        None => (name, None),
    };
    let number = |what: &str| -> Result<usize> {
        let arg = arg.ok_or_else(|| UsageError(format!("{what} needs a length, e.g. {what}:6")))?;
        arg.parse()
            .map_err(|_| UsageError(format!("`{arg}` is not a length")).into())
    };
    let usage = |message: String| -> anyhow::Error { UsageError(message).into() };

    let witness = match kind {
        "star23" => {
            let g = graph.cloned().unwrap_or(Graph::star(3)?);
            let (center, leaves) = find_star(&g).ok_or_else(|| usage("graph has no vertex of degree 3".into()))?;
            witness_star_23(&g, center, leaves)?
        }
        "evencycle24" => {
            let g = match graph {
                Some(g) => g.clone(),
                None => Graph::cycle(number("evencycle24")?).map_err(|e| usage(e.to_string()))?,
            };
            let cycle = find_even_cycle(&g).ok_or_else(|| usage("graph has no even cycle".into()))?;
            witness_even_cycle_24(&g, &cycle).map_err(|e| usage(e.to_string()))?
        }
        "doubleclaw25" => {
            let g = graph.cloned().unwrap_or_else(|| {
                Graph::path(3).expect("P3").disjoint_union(&Graph::path(3).expect("P3"))
            });
            let (a, b) = find_two_disjoint_cherries(&g)
                .ok_or_else(|| usage("graph has no two disjoint copies of K_{1,2}".into()))?;
            witness_double_claw_25(&g, a, b)?
        }
        "p3p3" => place(witness_p3p3_24(), graph)?,
        "p9" => place(witness_p9_24(), graph)?,
        "cycle23" => place(
            witness_cycle_23(number("cycle23")?).map_err(|e| usage(e.to_string()))?,
            graph,
        )?,
        other => bail!(usage(format!(
            "unknown witness `{other}` (expected star23, evencycle24:<n>, doubleclaw25, p3p3, p9, cycle23:<n>)"
        ))),
    };
    Ok(witness)
}

fn place(mut witness: WitnessSpec, host: Option<&Graph>) -> Result<WitnessSpec> {
    let Some(host) = host else { return Ok(witness) };
    while witness.graph.order() + 2 <= host.order() && !witness.graph.is_spanning_subgraph_of(host)
    {
        witness = extend_with_clique(&witness, 2)?;
    }
    transplant(&witness, host).map_err(|_| {
        UsageError(format!(
            "the {} witness graph is not a spanning subgraph of the given graph",
            witness.name
        ))
        .into()
    })
}

/// Runs the full check on `P_7` at `(2,4)` and fails unless every
/// assignment has a proportional coloring.
pub fn reproduce_p7(mode: EnumerationMode, jobs: usize, progress: bool) -> Result<RunReport> {
    let started = Instant::now();
    let options = VerifyOptions {
        mode,
        jobs,
        progress,
        ..VerifyOptions::default()
    };
    let graph = Graph::path(7)?;
    let verdict = verify_choosable(&graph, 2, 4, &options)?;
    if !verdict.choosable {
        bail!(
            "self-check failed: P7 has a (2,4)-assignment without a proportional coloring: {}",
            verdict.witness.as_ref().expect("witness").assignment
        );
    }
    if mode == EnumerationMode::Full && verdict.assignments_checked != P7_ASSIGNMENTS {
        bail!(
            "self-check failed: expected {P7_ASSIGNMENTS} assignments, checked {}",
            verdict.assignments_checked
        );
    }
    Ok(RunReport::new(
        "reproduce",
        json!({"target": "p7", "k": 2, "ell": 4, "mode": mode, "jobs": jobs}),
        verdict_json(&GraphSpec::Path(7), &verdict),
        started,
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyOptions {
    pub max_n: usize,
    pub k: usize,
    pub ells: Vec<Color>,
    pub mode: EnumerationMode,
    pub jobs: usize,
}

pub const SURVEY_MAX_N: usize = 6;

/// Tallies for one `(n, ℓ)` cell of the survey.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub n: usize,
    pub ell: Color,
    pub graphs: usize,
    pub choosable: usize,
    pub known_yes: usize,
    pub known_no: usize,
    pub unknown: usize,
    pub agreements: usize,
    pub disagreements: usize,
    /// At `ℓ = 2` with `k = 2`: graphs where the oracle and the equitable
    /// 2-coloring test differ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equitable_mismatches: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disagreement {
    pub n: usize,
    pub ell: Color,
    /// 1-based edge list.
    pub edges: Vec<(usize, usize)>,
    pub classified: bool,
    pub oracle: bool,
    pub rule: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyReport {
    pub options: SurveyOptions,
    pub rows: Vec<SurveyRow>,
    pub disagreements: Vec<Disagreement>,
}

impl SurveyReport {
    pub fn total_disagreements(&self) -> usize {
        self.rows.iter().map(|r| r.disagreements).sum()
    }

    pub fn total_equitable_mismatches(&self) -> usize {
        self.rows
            .iter()
            .filter_map(|r| r.equitable_mismatches)
            .sum()
    }

    /// Fraction of classifications that came back unknown.
    pub fn unknown_rate(&self) -> f64 {
        let graphs: usize = self.rows.iter().map(|r| r.graphs).sum();
        let unknown: usize = self.rows.iter().map(|r| r.unknown).sum();
        if graphs == 0 {
            0.0
        } else {
            unknown as f64 / graphs as f64
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "n,ell,graphs,choosable,known_yes,known_no,unknown,agreements,disagreements,equitable_mismatches\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                r.n,
                r.ell,
                r.graphs,
                r.choosable,
                r.known_yes,
                r.known_no,
                r.unknown,
                r.agreements,
                r.disagreements,
                r.equitable_mismatches
                    .map(|m| m.to_string())
                    .unwrap_or_default()
            ));
        }
        out
    }
}

/// Runs the classifier and the exhaustive verifier on every labeled graph
/// with at most `max_n` vertices. The classifier only speaks about lists of
/// size 2, so for other `k` its columns stay at zero and everything counts
/// as unknown.
pub fn survey(options: &SurveyOptions) -> Result<SurveyReport> {
    if options.max_n == 0 || options.max_n > SURVEY_MAX_N {
        bail!(UsageError(format!(
            "survey covers 1 <= max_n <= {SURVEY_MAX_N}, got {}",
            options.max_n
        )));
    }
    if options.ells.is_empty() {
        bail!(UsageError("survey needs at least one palette bound".into()));
    }
    let verify_options = VerifyOptions {
        mode: options.mode,
        jobs: options.jobs,
        ..VerifyOptions::default()
    };
    let mut rows = Vec::new();
    let mut disagreements = Vec::new();
    for n in 1..=options.max_n {
        for &ell in &options.ells {
            if ell < 2 || options.k > ell as usize {
                bail!(UsageError(format!(
                    "need 2 <= ell and k <= ell, got k={} ell={ell}",
                    options.k
                )));
            }
            let mut row = SurveyRow {
                n,
                ell,
                equitable_mismatches: (ell == 2 && options.k == 2).then_some(0),
                ..SurveyRow::default()
            };
            for g in Graph::all_labeled(n)? {
                row.graphs += 1;
                let oracle = verify_choosable(&g, options.k, ell, &verify_options)?.choosable;
                row.choosable += usize::from(oracle);
                if let Some(m) = row.equitable_mismatches.as_mut() {
                    *m += usize::from(equitably_2_colorable(&g).is_colorable() != oracle);
                }
                if options.k != 2 {
                    row.unknown += 1;
                    continue;
                }
                let c = classify(&g, ell)?;
                match c.status {
                    Status::KnownYes => row.known_yes += 1,
                    Status::KnownNo => row.known_no += 1,
                    Status::Unknown => row.unknown += 1,
                }
                if let Some(classified) = c.verdict() {
                    if classified == oracle {
                        row.agreements += 1;
                    } else {
                        row.disagreements += 1;
                        disagreements.push(Disagreement {
                            n,
                            ell,
                            edges: g.edges_one_based(),
                            classified,
                            oracle,
                            rule: c.rule,
                        });
                    }
                }
            }
            rows.push(row);
        }
    }
    Ok(SurveyReport {
        options: options.clone(),
        rows,
        disagreements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_names() {
        for name in [
            "star23",
            "evencycle24:4",
            "evencycle24:6",
            "doubleclaw25",
            "p3p3",
            "p9",
            "cycle23:6",
        ] {
            let w = build_witness(name, None).unwrap();
            assert!(w.holds(), "{name}");
        }
        let p8 = Graph::path(8).unwrap();
        let w = build_witness("p3p3", Some(&p8)).unwrap();
        assert_eq!(w.graph, p8);
        assert!(w.holds());
        let w = build_witness("doubleclaw25", Some(&Graph::path(7).unwrap())).unwrap();
        assert!(w.holds());
        assert!(build_witness("p9", Some(&Graph::path(8).unwrap())).is_err());
        assert!(build_witness("cycle23", None).is_err());
        assert!(build_witness("cycle23:5", None).is_err());
        assert!(build_witness("hexagon", None).is_err());
        assert!(build_witness("star23", Some(&Graph::path(4).unwrap())).is_err());
    }

    #[test]
    fn exit_codes() {
        let cap: anyhow::Error =
            VerifyError::Assignment(AssignmentError::CapExceeded { count: 10, cap: 1 }).into();
        assert_eq!(exit_code(&cap), exit::CAP);
        let usage: anyhow::Error = UsageError("bad".into()).into();
        assert_eq!(exit_code(&usage), exit::USAGE);
    }

    #[test]
    fn report_round_trip() {
        let report = RunReport::new(
            "classify",
            json!({"graph": "path:3"}),
            json!({"status": "known_yes"}),
            Instant::now(),
        );
        let text = serde_json::to_string(&report).unwrap();
        let back: RunReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn small_surveys() {
        let options = SurveyOptions {
            max_n: 3,
            k: 2,
            ells: vec![3],
            mode: EnumerationMode::Full,
            jobs: 1,
        };
        let report = survey(&options).unwrap();
        assert_eq!(report.rows.last().unwrap().graphs, 8);
        assert_eq!(report.total_disagreements(), 0);

        let report = survey(&SurveyOptions {
            max_n: 4,
            ells: vec![2],
            ..options.clone()
        })
        .unwrap();
        assert_eq!(report.total_equitable_mismatches(), 0);

        let report = survey(&SurveyOptions {
            max_n: 1,
            ells: vec![2, 3, 4, 5, 6],
            ..options.clone()
        })
        .unwrap();
        assert!(report.rows.iter().all(|r| r.choosable == 1));
        assert!(report.to_csv().lines().count() == 6);

        assert!(survey(&SurveyOptions {
            max_n: 7,
            ..options.clone()
        })
        .is_err());
    }
}
