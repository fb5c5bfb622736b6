//! The reference graphs shipped in `fixtures/`.

use crate::graph::{Graph, VertexSet};
use crate::io::parse_graph;

pub const FIX_LOOP: &str = include_str!("../fixtures/fix_loop.graph");
pub const FIX_B2: &str = include_str!("../fixtures/fix_b2.graph");
pub const FIX_INF: &str = include_str!("../fixtures/fix_inf.graph");
pub const FIX_VI_E: &str = include_str!("../fixtures/fix_vi_e.graph");
pub const FIX_VI_F: &str = include_str!("../fixtures/fix_vi_f.graph");
pub const FIX_ESSE: &str = include_str!("../fixtures/fix_esse.graph");

fn load(text: &str) -> Graph {
    parse_graph(text).expect("shipped fixture is valid")
}

/// One vertex `u` with a loop.
pub fn loop_graph() -> Graph {
    load(FIX_LOOP)
}

/// `v -> B_2 -> w`: an edge into the root of the two-generation binary tree and
/// one edge from each leaf to `w`.
pub fn b2() -> Graph {
    load(FIX_B2)
}

/// `v` with infinitely many edges to `w`.
pub fn inf() -> Graph {
    load(FIX_INF)
}

/// `v` feeding two rays `L`, `R` whose positions all emit to `w`, plus `v -> w`.
pub fn vi_e() -> Graph {
    load(FIX_VI_E)
}

/// `v` with `ω` edges to `w` and one ray `X` whose positions all emit to `w`.
pub fn vi_f() -> Graph {
    load(FIX_VI_F)
}

/// The two-cycle `a -> x -> a`, bipartitioned as `({a}, {x})`.
pub fn esse() -> Graph {
    load(FIX_ESSE)
}

pub fn esse_partition() -> (VertexSet, VertexSet) {
    (VertexSet::from_core(["a"]), VertexSet::from_core(["x"]))
}

/// `v -> B_n -> w` for the binary tree with `n ≥ 1` generations (`2ⁿ−1` tree
/// vertices, named `t1…` in heap order).
pub fn tree(n: u32) -> Graph {
    assert!(n >= 1, "a tree has at least one generation");
    let size = (1usize << n) - 1;
    let name = |i: usize| format!("t{i}");
    let mut b = Graph::builder()
        .vertices(["v", "w"])
        .vertices((1..=size).map(name))
        .edge("v", name(1), 1);
    for i in 1..=size {
        if 2 * i <= size {
            b = b
                .edge(name(i), name(2 * i), 1)
                .edge(name(i), name(2 * i + 1), 1);
        } else {
            b = b.edge(name(i), "w", 1);
        }
    }
    b.build().expect("tree is well formed")
}

/// Every named fixture.
pub fn all() -> Vec<(&'static str, Graph)> {
    vec![
        ("FIX-LOOP", loop_graph()),
        ("FIX-B2", b2()),
        ("FIX-INF", inf()),
        ("FIX-VI-E", vi_e()),
        ("FIX-VI-F", vi_f()),
        ("FIX-ESSE", esse()),
    ]
}
