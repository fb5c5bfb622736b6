//! Text formats: graph files, delay plans and edge labelings.
//!
//! All three are JSON records. Multiplicities are integers or the token `"inf"`.
//! A graph file looks like
//!
//! ```text
//! {
//!   "vertices": ["v", "w"],
//!   "edges": [
//!     {"src":"v","dst":"w","mult":"inf"}
//!   ],
//!   "rays": [
//!     {"id":"X","entry":[{"src":"v","mult":1}],"prefix":[],"cycle":[[{"dst":"w","mult":1}]]}
//!   ]
//! }
//! ```
//!
//! Edges into a ray head may be written either in the ray's `entry` list or as an
//! ordinary edge with `dst` set to `X.x0`; serialization always uses `entry`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, RaySpec};
use crate::moves::{CocycleLabeling, DelayPlan};
use crate::multiplicity::Multiplicity;

fn one() -> Multiplicity {
    Multiplicity::ONE
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    #[serde(default)]
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<EdgeRecord>,
    #[serde(default)]
    pub rays: Vec<RayRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub src: String,
    pub dst: String,
    #[serde(default = "one")]
    pub mult: Multiplicity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryRecord {
    pub src: String,
    #[serde(default = "one")]
    pub mult: Multiplicity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetRecord {
    pub dst: String,
    #[serde(default = "one")]
    pub mult: Multiplicity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RayRecord {
    pub id: String,
    #[serde(default)]
    pub entry: Vec<EntryRecord>,
    #[serde(default)]
    pub prefix: Vec<Vec<TargetRecord>>,
    pub cycle: Vec<Vec<TargetRecord>>,
}

impl GraphFile {
    /// Validates the description into a [`Graph`].
    pub fn build(&self) -> Result<Graph> {
        let mut b = GraphBuilder::new().vertices(self.vertices.iter().cloned());
        for e in &self.edges {
            b = b.edge(e.src.clone(), e.dst.clone(), e.mult);
        }
        for r in &self.rays {
            let positions = |list: &[Vec<TargetRecord>]| {
                list.iter()
                    .map(|pos| pos.iter().map(|t| (t.dst.clone(), t.mult)).collect())
                    .collect()
            };
            b = b.ray(RaySpec {
                id: r.id.clone(),
                entry: r.entry.iter().map(|e| (e.src.clone(), e.mult)).collect(),
                prefix: positions(&r.prefix),
                cycle: positions(&r.cycle),
            });
        }
        b.build()
    }

    /// Canonical description of `g`: sorted vertices, edges and rays.
    pub fn from_graph(g: &Graph) -> Self {
        let targets = |t: &BTreeMap<String, u64>| {
            t.iter()
                .map(|(d, &m)| TargetRecord {
                    dst: d.clone(),
                    mult: Multiplicity::Finite(m),
                })
                .collect()
        };
        GraphFile {
            vertices: g.vertices().iter().cloned().collect(),
            edges: g
                .edges()
                .map(|(s, d, m)| EdgeRecord {
                    src: s.to_string(),
                    dst: d.to_string(),
                    mult: m,
                })
                .collect(),
            rays: g
                .rays()
                .map(|r| RayRecord {
                    id: r.id().to_string(),
                    entry: r
                        .entry()
                        .iter()
                        .map(|(s, m)| EntryRecord {
                            src: s.clone(),
                            mult: *m,
                        })
                        .collect(),
                    prefix: r.prefix().iter().map(targets).collect(),
                    cycle: r.cycle().iter().map(targets).collect(),
                })
                .collect(),
        }
    }
}

fn parse_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })
}

/// Builds a graph from a graph file. An empty record `{}` is the empty graph.
pub fn parse_graph(text: &str) -> Result<Graph> {
    parse_json::<GraphFile>(text)?.build()
}

/// Canonical text of `g`: fixed key order, one edge or ray per line.
pub fn serialize_graph(g: &Graph) -> String {
    let file = GraphFile::from_graph(g);
    let mut out = String::from("{\n");
    out.push_str("  \"vertices\": ");
    out.push_str(&serde_json::to_string(&file.vertices).expect("strings serialize"));
    out.push_str(",\n  \"edges\": ");
    push_lines(&mut out, &file.edges);
    out.push_str(",\n  \"rays\": ");
    push_lines(&mut out, &file.rays);
    out.push_str("\n}\n");
    out
}

fn push_lines<T: Serialize>(out: &mut String, items: &[T]) {
    if items.is_empty() {
        out.push_str("[]");
        return;
    }
    out.push_str("[\n");
    for (i, item) in items.iter().enumerate() {
        out.push_str("    ");
        out.push_str(&serde_json::to_string(item).expect("records serialize"));
        if i + 1 < items.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("  ]");
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanFile {
    plans: Vec<PlanRecord>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanRecord {
    vertex: String,
    stages: Vec<SlotStage>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SlotStage {
    slot: usize,
    stage: usize,
}

/// `{"plans": [{"vertex": "u", "stages": [{"slot": 0, "stage": 1}, …]}]}`. Every
/// slot of the vertex must be listed exactly once.
pub fn parse_delay_plans(text: &str) -> Result<Vec<DelayPlan>> {
    let file: PlanFile = parse_json(text)?;
    file.plans
        .into_iter()
        .map(|p| {
            let mut stages = vec![None; p.stages.len()];
            for s in &p.stages {
                match stages.get_mut(s.slot) {
                    Some(slot @ None) => *slot = Some(s.stage),
                    _ => {
                        return Err(Error::StageMismatch(format!(
                            "slot {} of `{}` is out of range or repeated",
                            s.slot, p.vertex
                        )))
                    }
                }
            }
            Ok(DelayPlan {
                vertex: p.vertex,
                stages: stages.into_iter().map(|s| s.expect("all filled")).collect(),
            })
        })
        .collect()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LabelFile {
    labels: Vec<SlotLabel>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SlotLabel {
    slot: usize,
    label: u64,
}

/// `{"labels": [{"slot": 0, "label": 1}, …]}`; unlisted slots carry label 0.
pub fn parse_labeling(text: &str, modulus: u64) -> Result<CocycleLabeling> {
    let file: LabelFile = parse_json(text)?;
    let mut labels = BTreeMap::new();
    for l in file.labels {
        if labels.insert(l.slot, l.label).is_some() {
            return Err(Error::InvalidLabel(format!(
                "slot {} labelled twice",
                l.slot
            )));
        }
    }
    CocycleLabeling::new(modulus, labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::multiplicity::Omega;

    #[test]
    fn inf_file_parses() {
        let g = parse_graph(fixtures::FIX_INF).unwrap();
        let expected = Graph::builder()
            .vertices(["v", "w"])
            .edge("v", "w", Omega)
            .build()
            .unwrap();
        assert_eq!(g, expected);
    }

    #[test]
    fn empty_record_is_empty_graph() {
        assert_eq!(parse_graph("{}").unwrap(), Graph::default());
    }

    #[test]
    fn fixtures_round_trip() {
        for (name, g) in fixtures::all() {
            let text = serialize_graph(&g);
            assert_eq!(parse_graph(&text).unwrap(), g, "{name}");
            // canonical text is a fixpoint
            assert_eq!(
                serialize_graph(&parse_graph(&text).unwrap()),
                text,
                "{name}"
            );
        }
    }

    #[test]
    fn parse_error_carries_line() {
        let err = parse_graph("{\n  \"vertices\": [\"a\",\n  oops\n}").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_graph(r#"{"vertices": ["a"], "colour": 1}"#),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn plans_and_labels() {
        let plans = parse_delay_plans(
            r#"{"plans":[{"vertex":"u","stages":[{"slot":1,"stage":2},{"slot":0,"stage":0}]}]}"#,
        )
        .unwrap();
        assert_eq!(plans[0].stages, vec![0, 2]);
        assert!(parse_delay_plans(
            r#"{"plans":[{"vertex":"u","stages":[{"slot":0,"stage":0},{"slot":0,"stage":1}]}]}"#
        )
        .is_err());

        let lab = parse_labeling(r#"{"labels":[{"slot":0,"label":1}]}"#, 2).unwrap();
        assert_eq!(lab.label(0), 1);
        assert_eq!(lab.label(7), 0);
        assert!(parse_labeling(r#"{"labels":[{"slot":0,"label":2}]}"#, 2).is_err());
    }
}
