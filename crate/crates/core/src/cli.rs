//! Command-line front end. Exit codes: 0 success, 1 violated conditions,
//! 2 bad input.

use std::ffi::OsString;
use std::fs;
use std::io::Write;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::conditions::{check_proposition, check_theorem};
use crate::contraction::{contract, Mode};
use crate::dot::export_dot;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::ideals::{closure_sh, enumerate_sh};
use crate::io::{parse_delay_plans, parse_graph, parse_labeling, serialize_graph, GraphFile};
use crate::ktheory::k_theory;
use crate::moves::{
    desingularize, esse_split, in_delay, out_delay, skew_product_oriented, tails_to_sinks,
    CocycleLabeling, Orientation,
};

#[derive(Debug, Parser)]
#[command(
    name = "contractible",
    version,
    about = "Contract subgraphs of directed graphs"
)]
struct Cli {
    /// Print machine-readable JSON reports.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run both contractibility checkers.
    Check {
        file: String,
        #[arg(long, value_delimiter = ',')]
        g0: Vec<String>,
    },
    /// Contract onto G0.
    Contract {
        file: String,
        #[arg(long, value_delimiter = ',')]
        g0: Vec<String>,
        /// Only require the complement of G0 to be acyclic.
        #[arg(long)]
        unchecked: bool,
    },
    /// Smallest saturated hereditary set containing the given vertices.
    Closure {
        file: String,
        #[arg(long, value_delimiter = ',')]
        set: Vec<String>,
    },
    /// List saturated hereditary subsets.
    Ideals {
        file: String,
        /// Print the inclusion order as a DOT Hasse diagram instead.
        #[arg(long)]
        dot: bool,
    },
    /// K-groups of a finite row-finite graph without sinks.
    Ktheory { file: String },
    /// Replace infinite emitters by rays.
    Desingularize { file: String },
    /// Out-delay by a stage plan.
    DelayOut {
        file: String,
        #[arg(long)]
        plan: String,
    },
    /// In-delay by a stage plan.
    DelayIn {
        file: String,
        #[arg(long)]
        plan: String,
    },
    /// Skew product by an edge labeling in Z/p.
    Skew {
        file: String,
        #[arg(long)]
        p: u64,
        /// Label file; unlisted slots get label 0.
        #[arg(long)]
        labels: Option<String>,
        /// Edges shift fibres by minus their label.
        #[arg(long)]
        backward: bool,
    },
    /// Split a bipartite graph into its two side contractions.
    Esse {
        file: String,
        #[arg(long, value_delimiter = ',')]
        v1: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        v2: Vec<String>,
    },
    /// Replace tails by sinks.
    TailsToSinks { file: String },
    /// Graphviz rendering.
    ExportDot {
        file: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
}

/// Runs one invocation; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            if cli.json {
                let _ = writeln!(
                    out,
                    "{}",
                    json!({"error": e.code(), "message": e.to_string()})
                );
            }
            let _ = writeln!(err, "error[{}]: {e}", e.code());
            2
        }
    }
}

fn load(path: &str) -> Result<Graph> {
    parse_graph(&fs::read_to_string(path)?)
}

fn core_set(ids: &[String]) -> VertexSet {
    VertexSet::from_core(ids.iter().filter(|s| !s.is_empty()).cloned())
}

fn graph_json(g: &Graph) -> serde_json::Value {
    serde_json::to_value(GraphFile::from_graph(g)).expect("graph files serialize")
}

fn emit_graph(json: bool, g: &Graph, out: &mut dyn Write) -> Result<i32> {
    if json {
        writeln!(out, "{}", json!({"graph": graph_json(g)}))?;
    } else {
        write!(out, "{}", serialize_graph(g))?;
    }
    Ok(0)
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let json = cli.json;
    match &cli.command {
        Command::Check { file, g0 } => {
            let g = load(file)?;
            let g0 = core_set(g0);
            let thm = check_theorem(&g, &g0)?;
            let prop = check_proposition(&g, &g0)?;
            if json {
                writeln!(out, "{}", json!({"theorem": thm, "proposition": prop}))?;
            } else {
                writeln!(out, "theorem: {thm}")?;
                writeln!(out, "proposition: {prop}")?;
            }
            Ok(if thm.pass && prop.pass { 0 } else { 1 })
        }
        Command::Contract {
            file,
            g0,
            unchecked,
        } => {
            let g = load(file)?;
            let mode = if *unchecked {
                Mode::Unchecked
            } else {
                Mode::Checked
            };
            match contract(&g, &core_set(g0), mode) {
                Ok(c) => {
                    if json {
                        let mut report = serde_json::to_value(&c).expect("provenance serializes");
                        report["graph"] = graph_json(&c.graph);
                        writeln!(out, "{report}")?;
                    } else {
                        write!(out, "{}", serialize_graph(&c.graph))?;
                    }
                    Ok(0)
                }
                Err(Error::ConditionsFailed(v)) => {
                    if json {
                        writeln!(out, "{}", json!({"theorem": v}))?;
                    } else {
                        writeln!(out, "theorem: {v}")?;
                    }
                    Ok(1)
                }
                Err(e) => Err(e),
            }
        }
        Command::Closure { file, set } => {
            let g = load(file)?;
            let h = closure_sh(&g, &core_set(set))?;
            if json {
                writeln!(
                    out,
                    "{}",
                    json!({"closure": h, "full": h == g.all_vertices()})
                )?;
            } else {
                writeln!(out, "{h}")?;
            }
            Ok(0)
        }
        Command::Ideals { file, dot } => {
            let g = load(file)?;
            let fam = enumerate_sh(&g)?;
            if *dot {
                write!(out, "{}", fam.to_dot())?;
            } else if json {
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string(&fam).expect("family serializes")
                )?;
            } else {
                for h in &fam.members {
                    writeln!(out, "{h}")?;
                }
                writeln!(out, "nontrivial: {}", fam.nontrivial_count)?;
            }
            Ok(0)
        }
        Command::Ktheory { file } => {
            let k = k_theory(&load(file)?)?;
            if json {
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string(&k).expect("invariants serialize")
                )?;
            } else {
                writeln!(out, "{k}")?;
            }
            Ok(0)
        }
        Command::Desingularize { file } => emit_graph(json, &desingularize(&load(file)?)?, out),
        Command::DelayOut { file, plan } => {
            let plans = parse_delay_plans(&fs::read_to_string(plan)?)?;
            emit_graph(json, &out_delay(&load(file)?, &plans)?, out)
        }
        Command::DelayIn { file, plan } => {
            let plans = parse_delay_plans(&fs::read_to_string(plan)?)?;
            emit_graph(json, &in_delay(&load(file)?, &plans)?, out)
        }
        Command::Skew {
            file,
            p,
            labels,
            backward,
        } => {
            let c = match labels {
                Some(path) => parse_labeling(&fs::read_to_string(path)?, *p)?,
                None => CocycleLabeling::zero(*p)?,
            };
            let o = if *backward {
                Orientation::Backward
            } else {
                Orientation::Forward
            };
            emit_graph(json, &skew_product_oriented(&load(file)?, &c, o)?, out)
        }
        Command::Esse { file, v1, v2 } => {
            let g = load(file)?;
            match esse_split(&g, (&core_set(v1), &core_set(v2))) {
                Ok((e1, e2)) => {
                    if json {
                        writeln!(
                            out,
                            "{}",
                            json!({"v1": graph_json(&e1.graph), "v2": graph_json(&e2.graph)})
                        )?;
                    } else {
                        write!(
                            out,
                            "# V1\n{}# V2\n{}",
                            serialize_graph(&e1.graph),
                            serialize_graph(&e2.graph)
                        )?;
                    }
                    Ok(0)
                }
                Err(Error::EsseConditionsFailed { side, verdict }) => {
                    if json {
                        writeln!(
                            out,
                            "{}",
                            json!({"side": side.to_string(), "theorem": verdict})
                        )?;
                    } else {
                        writeln!(out, "{side}: {verdict}")?;
                    }
                    Ok(1)
                }
                Err(e) => Err(e),
            }
        }
        Command::TailsToSinks { file } => emit_graph(json, &tails_to_sinks(&load(file)?)?, out),
        Command::ExportDot { file, depth } => {
            write!(out, "{}", export_dot(&load(file)?, *depth))?;
            Ok(0)
        }
    }
}
