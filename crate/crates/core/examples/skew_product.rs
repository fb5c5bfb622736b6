//! Skew products over Z/p, and their contraction onto the fibre over 0.

use std::collections::BTreeMap;

use contractible::io::serialize_graph;
use contractible::moves::{skew_product, CocycleLabeling};
use contractible::{check_theorem, contract, k_theory, GraphBuilder, Mode, VertexSet};

fn main() -> contractible::Result<()> {
    // three loops at u, every loop shifting the fibre by one
    let g = GraphBuilder::new().vertex("u").edge("u", "u", 3).build()?;
    let labels = CocycleLabeling::new(2, BTreeMap::from([(0, 1), (1, 1), (2, 1)]))?;
    let sk = skew_product(&g, &labels)?;
    println!("skew product:\n{}", serialize_graph(&sk));

    let fibre = VertexSet::from_core(["u@0"]);
    println!("onto the fibre: {}", check_theorem(&sk, &fibre)?);
    let small = contract(&sk, &fibre, Mode::Checked)?;
    println!("contracted:\n{}", serialize_graph(&small.graph));
    println!("K(base):\n{}", k_theory(&g)?);
    println!("K(skew):\n{}", k_theory(&sk)?);
    println!("K(contracted):\n{}", k_theory(&small.graph)?);

    // with label 0 on a loop the other fibres keep a cycle and nothing contracts
    let zero = CocycleLabeling::new(2, BTreeMap::from([(0, 1)]))?;
    let sk0 = skew_product(&g, &zero)?;
    println!("labels 1,0,0: {}", check_theorem(&sk0, &fibre)?);
    Ok(())
}
