//! Graphviz export.

use std::fmt::Write as _;

use crate::graph::Graph;
use crate::multiplicity::Multiplicity;

fn quote(id: &str) -> String {
    format!("\"{}\"", id.replace('\\', "\\\\").replace('"', "\\\""))
}

fn label(m: Multiplicity) -> String {
    match m {
        Multiplicity::Omega => " [label=\"∞\"]".into(),
        Multiplicity::Finite(1) => String::new(),
        Multiplicity::Finite(n) => format!(" [label=\"{n}\"]"),
    }
}

/// DOT digraph of `g`, with each ray unrolled to `ray_depth` spine positions
/// followed by a dashed edge into a point marking the continuation.
pub fn export_dot(g: &Graph, ray_depth: usize) -> String {
    let depth = ray_depth.max(1);
    let mut out = String::from("digraph G {\n");
    for v in g.vertices() {
        let _ = writeln!(out, "  {};", quote(v));
    }
    for r in g.rays() {
        for k in 0..depth {
            let _ = writeln!(
                out,
                "  {} [shape=circle];",
                quote(&format!("{}.x{k}", r.id()))
            );
        }
        let _ = writeln!(
            out,
            "  {} [shape=point];",
            quote(&format!("{}.more", r.id()))
        );
    }
    for (s, d, m) in g.edges() {
        let _ = writeln!(out, "  {} -> {}{};", quote(s), quote(d), label(m));
    }
    for r in g.rays() {
        let pos = |k: usize| quote(&format!("{}.x{k}", r.id()));
        for (s, m) in r.entry() {
            let _ = writeln!(out, "  {} -> {}{};", quote(s), pos(0), label(*m));
        }
        for k in 0..depth {
            for (d, &m) in r.targets_at(k) {
                let _ = writeln!(out, "  {} -> {}{};", pos(k), quote(d), label(m.into()));
            }
            if k + 1 < depth {
                let _ = writeln!(out, "  {} -> {};", pos(k), pos(k + 1));
            }
        }
        let _ = writeln!(
            out,
            "  {} -> {} [style=dashed];",
            pos(depth - 1),
            quote(&format!("{}.more", r.id()))
        );
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn infinite_edge_label() {
        let dot = export_dot(&fixtures::inf(), 1);
        assert!(dot.contains("\"v\" -> \"w\" [label=\"∞\"];"));
    }

    #[test]
    fn b2_shape() {
        let dot = export_dot(&fixtures::b2(), 1);
        assert_eq!(dot.matches(" -> ").count(), 5);
        assert_eq!(dot.lines().filter(|l| l.ends_with("\";")).count(), 5 + 5);
    }

    #[test]
    fn rays_unrolled() {
        let dot = export_dot(&fixtures::vi_e(), 3);
        assert!(dot.contains("\"L.x2\" -> \"L.more\" [style=dashed];"));
        assert!(dot.contains("\"R.x1\" -> \"R.x2\";"));
        assert!(!dot.contains("L.x3"));
        assert_eq!(dot.matches("style=dashed").count(), 2);
    }
}
