//! The DR graph invariant by all three methods.
//!
//! cargo run --release --example invariant

use drcalc::drinvariant::{cg, cg_top, Method, Strategy};
use drcalc::graph::{StableGraph, Vertex};

fn main() -> drcalc::Result<()> {
    let v = StableGraph::v;
    let e = StableGraph::e;
    let samples: Vec<(&str, Vec<Vertex>, Vec<_>)> = vec![
        ("point", vec![v(1, &[1])], vec![]),
        ("loop", vec![v(0, &[1, 2])], vec![e(0, 0)]),
        ("one-edge tree", vec![v(1, &[1]), v(1, &[])], vec![e(0, 1)]),
        ("banana", vec![v(0, &[1]), v(0, &[])], vec![e(0, 1), e(0, 1), e(0, 1)]),
        ("theta with a leg", vec![v(0, &[1]), v(0, &[]), v(0, &[])], vec![e(0, 1), e(1, 2), e(2, 0), e(1, 2)]),
    ];
    for (name, vertices, edges) in samples {
        let g = StableGraph::new(vertices, edges)?;
        println!("{name}: {g}");
        for m in Method::ALL {
            println!("  {:<16} {}", m.name(), cg(&g, m)?.value);
        }
        println!("  {:<16} {}", "top part", cg_top(&g, Strategy::Laurent)?.value);
    }
    Ok(())
}
