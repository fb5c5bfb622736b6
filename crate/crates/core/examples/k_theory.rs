//! K-groups from the Smith form of `Aᵗ − I`, and their invariance under a
//! checked contraction.

use contractible::random::{generate_passing, RandomSpec};
use contractible::{contract, k_theory, smith_normal_form, GraphBuilder, IntMatrix, Mode};

fn main() -> contractible::Result<()> {
    let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let s = smith_normal_form(&m);
    let diag: Vec<String> = s.diagonal().iter().map(ToString::to_string).collect();
    println!("Smith form diagonal: [{}]", diag.join(", "));

    for n in 1..=4u64 {
        let g = GraphBuilder::new()
            .vertex("u")
            .edge("u", "u", n + 1)
            .build()?;
        println!("{} loops:\n{}", n + 1, k_theory(&g)?);
    }

    let (g, g0, seed) = generate_passing(&RandomSpec::finite_row_finite(7), 1000)?;
    let c = contract(&g, &g0, Mode::Checked)?;
    println!(
        "random instance (seed {seed}), {} vertices onto {g0}:\nbefore:\n{}\nafter:\n{}",
        g.vertices().len(),
        k_theory(&g)?,
        k_theory(&c.graph)?
    );
    Ok(())
}
