//! Stable graph census, canonical forms and spanning-tree counts.
//!
//! cargo run --example graphs

use drcalc::graph::{automorphism_order, canonical_digest, enumerate_stable_graphs, kirchhoff_count, spanning_trees};

fn main() -> drcalc::Result<()> {
    for (g, n) in [(0, 3), (1, 1), (1, 2), (2, 0)] {
        let graphs = enumerate_stable_graphs(g, n, (3 * g + n - 3) as usize)?;
        println!("genus {g}, {n} legs: {} stable graphs", graphs.len());
        for gr in &graphs {
            println!(
                "  {gr:<28} |Aut| = {:<3} trees = {:<3} kirchhoff = {:<3} {}",
                automorphism_order(gr)?,
                spanning_trees(gr)?.len(),
                kirchhoff_count(gr),
                &canonical_digest(gr)?[..12],
            );
        }
    }
    Ok(())
}
