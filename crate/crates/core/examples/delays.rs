//! Out- and in-delays stretch a vertex into a path; contracting the new
//! vertices away gives the original graph back.

use contractible::io::serialize_graph;
use contractible::moves::{in_delay, out_delay, DelayPlan};
use contractible::{check_theorem, contract, GraphBuilder, Mode};

fn main() -> contractible::Result<()> {
    let g = GraphBuilder::new()
        .vertices(["u", "v"])
        .edge("u", "u", 1)
        .edge("u", "v", 2)
        .edge("v", "u", 1)
        .build()?;
    let e0 = g.all_vertices();

    // three out-edge slots of u leave at stages 0, 2 and 1
    let out = out_delay(
        &g,
        &[DelayPlan {
            vertex: "u".into(),
            stages: vec![2, 0, 1],
        }],
    )?;
    println!("out-delay:\n{}", serialize_graph(&out));

    // two in-edge slots of u arrive at stages 1 and 3
    let inn = in_delay(
        &g,
        &[DelayPlan {
            vertex: "u".into(),
            stages: vec![1, 3],
        }],
    )?;
    println!("in-delay:\n{}", serialize_graph(&inn));

    for (name, d) in [("out", &out), ("in", &inn)] {
        let ok = check_theorem(d, &e0)?.pass;
        let back = contract(d, &e0, Mode::Checked)?.graph == g;
        println!("{name}-delay contracts back: conditions {ok}, same graph {back}");
    }
    Ok(())
}
