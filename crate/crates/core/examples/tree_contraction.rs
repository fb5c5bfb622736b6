//! Contract the binary-tree gadgets `v -> B_n -> w` onto `{v, w}`: every
//! root-to-leaf path becomes a parallel edge.

use contractible::{contract, enumerate_bv, fixtures, Mode, VertexRef, VertexSet};

fn main() -> contractible::Result<()> {
    let g0 = VertexSet::from_core(["v", "w"]);
    for n in 1..=5 {
        let g = fixtures::tree(n);
        let c = contract(&g, &g0, Mode::Checked)?;
        let (_, _, m) = c.graph.edges().next().expect("one edge");
        println!(
            "n={n}: {} vertices contract to v -> w with multiplicity {m}",
            g.vertices().len()
        );
    }

    // the paths behind the edges of the smallest interesting tree
    let fam = enumerate_bv(&fixtures::tree(2), &g0, &VertexRef::core("v"))?;
    println!(
        "B_v for n=2 (N(v) = {}):",
        fam.max_length.expect("nonempty")
    );
    for p in &fam.finite_part {
        println!("  {p}");
    }
    Ok(())
}
