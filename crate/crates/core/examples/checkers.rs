//! Run both contractibility checkers on fixtures and on random graphs, and
//! show that their verdicts agree.

use contractible::random::{generate_random, RandomSpec};
use contractible::{check_proposition, check_theorem, fixtures, VertexSet};

fn main() -> contractible::Result<()> {
    let vw = VertexSet::from_core(["v", "w"]);
    for (name, g) in [
        ("FIX-B2", fixtures::b2()),
        ("FIX-VI-E", fixtures::vi_e()),
        ("FIX-VI-F", fixtures::vi_f()),
    ] {
        println!("{name} with G0 = {vw}");
        println!("  theorem:     {}", check_theorem(&g, &vw)?);
        println!("  proposition: {}", check_proposition(&g, &vw)?);
    }

    let spec = RandomSpec::default();
    let (mut pass, mut agree) = (0, 0);
    let total = 300;
    for seed in 0..total {
        let (g, g0) = generate_random(&spec.with_seed(seed));
        let t = check_theorem(&g, &g0)?;
        let p = check_proposition(&g, &g0)?;
        pass += t.pass as u32;
        agree += (t.pass == p.pass) as u32;
    }
    println!("random: {agree}/{total} agree, {pass} contractible");
    Ok(())
}
