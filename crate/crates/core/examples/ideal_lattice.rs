//! Saturated hereditary sets: closures, the full lattice, and its Hasse diagram.

use contractible::ideals::is_hereditary;
use contractible::{check_fullness, closure_sh, enumerate_sh, fixtures, VertexSet};

fn main() -> contractible::Result<()> {
    let g = fixtures::vi_e();
    for seed in [vec!["w"], vec!["v"], vec![]] {
        let x = VertexSet::from_core(seed);
        println!("closure of {x} = {}", closure_sh(&g, &x)?);
    }
    let fam = enumerate_sh(&g)?;
    println!("{} members, {} nontrivial", fam.len(), fam.nontrivial_count);
    for (i, h) in fam.members.iter().enumerate() {
        println!("  h{i} = {h} (hereditary: {})", is_hereditary(&g, h));
    }
    print!("{}", fam.to_dot());

    let g0 = VertexSet::from_core(["v", "w"]);
    println!(
        "G0 = {g0} is full: {}",
        check_fullness(&fixtures::b2(), &g0)?
    );
    Ok(())
}
