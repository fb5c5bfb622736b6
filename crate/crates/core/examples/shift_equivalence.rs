//! A bipartite graph splits into two graphs whose adjacency matrices are `RS`
//! and `SR`: the two contractions onto the sides.

use contractible::io::serialize_graph;
use contractible::moves::esse_split;
use contractible::{fixtures, k_theory, GraphBuilder, VertexSet};

fn main() -> contractible::Result<()> {
    let (a, x) = fixtures::esse_partition();
    let (e1, e2) = esse_split(&fixtures::esse(), (&a, &x))?;
    println!(
        "FIX-ESSE sides:\n{}{}",
        serialize_graph(&e1.graph),
        serialize_graph(&e2.graph)
    );

    // R = [1 1; 0 1] from {a0, a1} to {x0, x1}, S = [1 0; 1 1] back
    let g = GraphBuilder::new()
        .vertices(["a0", "a1", "x0", "x1"])
        .edge("a0", "x0", 1)
        .edge("a0", "x1", 1)
        .edge("a1", "x1", 1)
        .edge("x0", "a0", 1)
        .edge("x1", "a0", 1)
        .edge("x1", "a1", 1)
        .build()?;
    let (rs, sr) = esse_split(
        &g,
        (
            &VertexSet::from_core(["a0", "a1"]),
            &VertexSet::from_core(["x0", "x1"]),
        ),
    )?;
    println!(
        "RS:\n{}SR:\n{}",
        serialize_graph(&rs.graph),
        serialize_graph(&sr.graph)
    );
    println!(
        "K(RS):\n{}\nK(SR):\n{}",
        k_theory(&rs.graph)?,
        k_theory(&sr.graph)?
    );
    Ok(())
}
