//! Replace infinite emitters by rays, check the result contracts back onto the
//! original vertices, and recover the original graph.

use contractible::io::serialize_graph;
use contractible::moves::desingularize;
use contractible::random::{generate_random, RandomSpec};
use contractible::{check_theorem, contract, fixtures, Mode};

fn main() -> contractible::Result<()> {
    let g = fixtures::inf();
    let d = desingularize(&g)?;
    println!("FIX-INF desingularized:\n{}", serialize_graph(&d));

    let spec = RandomSpec {
        core: 2..=6,
        omega_prob: 0.35,
        rays: 0..=0,
        ..Default::default()
    };
    let mut round_trips = 0;
    for seed in 0..200 {
        let (g, _) = generate_random(&spec.with_seed(seed));
        if g.is_row_finite() {
            continue;
        }
        let d = desingularize(&g)?;
        let e0 = g.all_vertices();
        assert!(d.is_row_finite());
        assert!(check_theorem(&d, &e0)?.pass);
        assert_eq!(contract(&d, &e0, Mode::Checked)?.graph, g);
        round_trips += 1;
    }
    println!("{round_trips} random graphs with infinite emitters round-trip");
    Ok(())
}
