//! Graphviz output for graphs with rays, and for a saturated hereditary lattice.

use contractible::dot::export_dot;
use contractible::{enumerate_sh, fixtures};

fn main() -> contractible::Result<()> {
    println!("{}", export_dot(&fixtures::vi_f(), 2));
    print!("{}", enumerate_sh(&fixtures::vi_f())?.to_dot());
    Ok(())
}
