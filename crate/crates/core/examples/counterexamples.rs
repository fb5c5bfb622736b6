//! The two graphs where one hypothesis fails: contracting anyway produces a
//! graph with a different number of saturated hereditary sets.

use contractible::{check_theorem, contract, enumerate_sh, fixtures, Mode, VertexSet};

fn main() -> contractible::Result<()> {
    let g0 = VertexSet::from_core(["v", "w"]);
    for (name, g) in [
        ("FIX-VI-E", fixtures::vi_e()),
        ("FIX-VI-F", fixtures::vi_f()),
    ] {
        let verdict = check_theorem(&g, &g0)?;
        println!("{name}: {verdict}");
        let c = contract(&g, &g0, Mode::Unchecked)?;
        for (u, w, m) in c.graph.edges() {
            println!("  forced contraction: {u} -> {w} with multiplicity {m}");
        }
        let before = enumerate_sh(&g)?;
        let after = enumerate_sh(&c.graph)?;
        println!(
            "  nontrivial saturated hereditary sets: {} before, {} after",
            before.nontrivial_count, after.nontrivial_count
        );
        for h in &before.members {
            println!("    {h}");
        }
    }
    Ok(())
}
